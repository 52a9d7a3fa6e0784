//! The three-coloring of the rational plane by coordinate valuations.
//!
//! A point `(x, y)` is colored
//!
//! - `A` if `ν2(x) > 0` and `ν2(y) > 0`,
//! - `B` if `ν2(y) ≤ 0` and `ν2(x) > ν2(y)`,
//! - `C` if `ν2(x) ≤ 0` and `ν2(y) ≥ ν2(x)`.
//!
//! Composing with an area-preserving affine map gives the family
//! `π^M(Z) = π(M(Z))`. On lattice points the color only depends on the
//! residue mod 2, and integral maps act on residues by permutation.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::dyadic::{val2, Rational};
use crate::geometry::{Point, Vector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    A,
    B,
    C,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::A, Color::B, Color::C];

    /// Position on the oriented triangle `A → B → C → A`.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Color::A => "A",
            Color::B => "B",
            Color::C => "C",
        };
        f.write_str(s)
    }
}

pub fn color(p: &Point) -> Color {
    let vx = val2(&p.x);
    let vy = val2(&p.y);
    if vx > 0 && vy > 0 {
        Color::A
    } else if vy <= 0 && vx > vy {
        Color::B
    } else {
        debug_assert!(vx <= 0 && vy >= vx);
        Color::C
    }
}

/// A residue class in `Z/2 × Z/2`, i.e. a vertex of `K4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue(pub u8, pub u8);

impl Residue {
    pub const ALL: [Residue; 4] = [Residue(0, 0), Residue(0, 1), Residue(1, 0), Residue(1, 1)];

    pub fn new(x: u8, y: u8) -> Self {
        Residue(x & 1, y & 1)
    }

    /// Reduction of a lattice point; `None` off the lattice.
    pub fn of_point(p: &Point) -> Option<Residue> {
        let x = p.x.to_integer()?;
        let y = p.y.to_integer()?;
        Some(Residue(x.is_odd() as u8, y.is_odd() as u8))
    }

    /// Index of the `K4` vertex: `X1 = (0,0)`, `X2 = (0,1)`, `X3 = (1,0)`,
    /// `X4 = (1,1)`, numbered from zero.
    pub fn vertex_index(self) -> usize {
        (2 * self.0 + self.1) as usize
    }
}

pub fn lattice_color(r: Residue) -> Color {
    match r {
        Residue(0, 0) => Color::A,
        Residue(0, 1) => Color::B,
        _ => Color::C,
    }
}

/// `p ↦ M p + t` with `|det M| = 1`.
///
/// Integral maps act on lattice residues; rational ones are only used for
/// valuation-level checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAffineMap")]
pub struct AffineMap {
    pub matrix: [[Rational; 2]; 2],
    pub translation: [Rational; 2],
}

#[derive(Deserialize)]
struct RawAffineMap {
    matrix: [[Rational; 2]; 2],
    translation: [Rational; 2],
}

impl TryFrom<RawAffineMap> for AffineMap {
    type Error = Error;

    fn try_from(raw: RawAffineMap) -> Result<Self> {
        AffineMap::new(raw.matrix, raw.translation)
    }
}

impl AffineMap {
    pub fn new(matrix: [[Rational; 2]; 2], translation: [Rational; 2]) -> Result<Self> {
        let map = AffineMap {
            matrix,
            translation,
        };
        let det = map.determinant();
        if det.abs() != Rational::one() {
            return Err(Error::InvalidMap(format!("determinant {det} is not ±1")));
        }
        Ok(map)
    }

    pub fn integer(matrix: [[i64; 2]; 2], translation: [i64; 2]) -> Result<Self> {
        let m = matrix.map(|row| row.map(Rational::from));
        AffineMap::new(m, translation.map(Rational::from))
    }

    pub fn identity() -> Self {
        AffineMap::integer([[1, 0], [0, 1]], [0, 0]).unwrap()
    }

    /// `E: (x, y) ↦ (x, y)`.
    pub fn e() -> Self {
        AffineMap::identity()
    }

    /// `U: (x, y) ↦ (x + y, y)`.
    pub fn u() -> Self {
        AffineMap::integer([[1, 1], [0, 1]], [0, 0]).unwrap()
    }

    /// `V: (x, y) ↦ (y + 1, x)`.
    pub fn v() -> Self {
        AffineMap::integer([[0, 1], [1, 0]], [1, 0]).unwrap()
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "E" | "e" => Some(AffineMap::e()),
            "U" | "u" => Some(AffineMap::u()),
            "V" | "v" => Some(AffineMap::v()),
            _ => None,
        }
    }

    pub fn determinant(&self) -> Rational {
        let m = &self.matrix;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.iter().flatten().all(Rational::is_integer)
            && self.translation.iter().all(Rational::is_integer)
    }

    pub fn apply(&self, p: &Point) -> Point {
        let m = &self.matrix;
        let t = &self.translation;
        Point::new(
            &m[0][0] * &p.x + &m[0][1] * &p.y + &t[0],
            &m[1][0] * &p.x + &m[1][1] * &p.y + &t[1],
        )
    }

    pub fn apply_vector(&self, v: &Vector) -> Vector {
        let m = &self.matrix;
        Vector::new(
            &m[0][0] * &v.dx + &m[0][1] * &v.dy,
            &m[1][0] * &v.dx + &m[1][1] * &v.dy,
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = &self.matrix;
        let b = &other.matrix;
        let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        let shifted = self.apply(&Point::new(
            other.translation[0].clone(),
            other.translation[1].clone(),
        ));
        AffineMap {
            matrix: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]],
            translation: [shifted.x, shifted.y],
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let m = &self.matrix;
        let det = self.determinant();
        let matrix = [
            [&m[1][1] / &det, -(&m[0][1] / &det)],
            [-(&m[1][0] / &det), &m[0][0] / &det],
        ];
        let linear = AffineMap {
            matrix,
            translation: [Rational::zero(), Rational::zero()],
        };
        let t = linear.apply(&Point::new(self.translation[0].clone(), self.translation[1].clone()));
        AffineMap {
            translation: [-t.x, -t.y],
            ..linear
        }
    }

    /// Action on `Z/2 × Z/2`; `None` for non-integral maps.
    pub fn apply_residue(&self, r: Residue) -> Option<Residue> {
        if !self.is_integral() {
            return None;
        }
        let image = self.apply(&Point::new(i64::from(r.0), i64::from(r.1)));
        Residue::of_point(&image)
    }
}

impl Default for AffineMap {
    fn default() -> Self {
        AffineMap::identity()
    }
}

pub fn color_under(map: &AffineMap, p: &Point) -> Color {
    color(&map.apply(p))
}

pub fn is_rainbow(p1: &Point, p2: &Point, p3: &Point, map: &AffineMap) -> bool {
    let mut seen = [false; 3];
    for p in [p1, p2, p3] {
        seen[color_under(map, p).index()] = true;
    }
    seen.iter().all(|&s| s)
}

/// Color of a lattice point under an integral map, computed on residues.
pub fn lattice_color_under(map: &AffineMap, r: Residue) -> Option<Color> {
    map.apply_residue(r).map(lattice_color)
}
