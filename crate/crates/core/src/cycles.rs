//! Simplicial 1-cycles of closed walks in complete graphs.
//!
//! The degree of a colored closed line is read off the cycle space of `K3`
//! (rank one), and the class of a lattice line lives in the cycle space of
//! `K4` (rank three), written in the basis
//!
//! ```text
//! σ1 = X1X2 + X2X3 + X3X1
//! σ2 = X1X3 + X3X4 + X4X1
//! σ3 = X3X2 + X4X3 + X2X4
//! ```
//!
//! with `X1 = (0,0)`, `X2 = (0,1)`, `X3 = (1,0)`, `X4 = (1,1)` in `Z/2 × Z/2`.

use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coloring::{color_under, AffineMap, Color, Residue};
use crate::geometry::BrokenLine;
use crate::{Error, Result};

/// Integer 1-chain on `K_n`, one coefficient per edge `{i, j}` with `i < j`
/// oriented from `i` to `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeVector {
    n: usize,
    coeffs: Vec<i64>,
}

impl EdgeVector {
    pub fn zero(n: usize) -> Self {
        EdgeVector {
            n,
            coeffs: vec![0; n * (n - 1) / 2],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n);
        // edges listed (0,1), (0,2), …, (0,n-1), (1,2), …
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Coefficient of the oriented edge `i → j`.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs[self.edge_index(i, j)],
            std::cmp::Ordering::Greater => -self.coeffs[self.edge_index(j, i)],
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Adds `k` copies of the oriented edge `i → j`; loops are dropped.
    pub fn add_edge(&mut self, i: usize, j: usize, k: i64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let e = self.edge_index(i, j);
                self.coeffs[e] += k;
            }
            std::cmp::Ordering::Greater => {
                let e = self.edge_index(j, i);
                self.coeffs[e] -= k;
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    /// Chain of a closed walk through the given vertices.
    pub fn from_closed_walk(n: usize, walk: &[usize]) -> Self {
        let mut chain = EdgeVector::zero(n);
        for k in 0..walk.len() {
            chain.add_edge(walk[k], walk[(k + 1) % walk.len()], 1);
        }
        chain
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), n * (n - 1) / 2);
        EdgeVector { n, coeffs }
    }

    pub fn boundary(&self) -> Vec<i64> {
        let mut b = vec![0; self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.coeffs[self.edge_index(i, j)];
                b[j] += c;
                b[i] -= c;
            }
        }
        b
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        EdgeVector {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl Add<&EdgeVector> for &EdgeVector {
    type Output = EdgeVector;
    fn add(self, rhs: &EdgeVector) -> EdgeVector {
        assert_eq!(self.n, rhs.n);
        EdgeVector {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Signed number of passes across the interior of the oriented edge
/// `from → to` of `K3`.
fn crossings(colors: &[Color], from: Color, to: Color) -> i64 {
    let n = colors.len();
    (0..n)
        .map(|k| {
            let (a, b) = (colors[k], colors[(k + 1) % n]);
            if (a, b) == (from, to) {
                1
            } else if (a, b) == (to, from) {
                -1
            } else {
                0
            }
        })
        .sum()
}

/// Winding number of the closed color sequence around `A → B → C → A`.
///
/// Counted as signed crossings of a regular value on `AB`; the counts on
/// `BC` and `CA` must agree.
pub fn k3_degree(colors: &[Color]) -> i64 {
    assert!(!colors.is_empty(), "empty color sequence");
    let ab = crossings(colors, Color::A, Color::B);
    let bc = crossings(colors, Color::B, Color::C);
    let ca = crossings(colors, Color::C, Color::A);
    assert!(
        ab == bc && bc == ca,
        "crossing counts disagree: {ab}, {bc}, {ca}"
    );
    ab
}

/// Degree of the closed line under the coloring `π^map`.
pub fn degree_of_line(line: &BrokenLine, map: &AffineMap) -> i64 {
    let colors: Vec<Color> = line.vertices.iter().map(|p| color_under(map, p)).collect();
    k3_degree(&colors)
}

/// Coordinates `(λ1, λ2, λ3)` of a cycle of `K4` in the σ basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct K4Class(pub [i64; 3]);

impl K4Class {
    pub const ZERO: K4Class = K4Class([0, 0, 0]);

    pub fn is_zero(self) -> bool {
        self == K4Class::ZERO
    }

    pub fn coordinate_sum(self) -> i64 {
        self.0.iter().sum()
    }

    /// `±(σ2+σ3), ±(σ3+σ1), ±(σ1+σ2)`: the classes of odd-area lattice
    /// parallelograms.
    pub fn odd_parallelogram_classes() -> [K4Class; 6] {
        [
            K4Class([0, 1, 1]),
            K4Class([0, -1, -1]),
            K4Class([1, 0, 1]),
            K4Class([-1, 0, -1]),
            K4Class([1, 1, 0]),
            K4Class([-1, -1, 0]),
        ]
    }

    /// `λ1 σ1 + λ2 σ2 + λ3 σ3` as an edge chain.
    pub fn to_edge_vector(self) -> EdgeVector {
        let basis = sigma_basis();
        let mut chain = EdgeVector::zero(4);
        for (sigma, &l) in basis.sigmas.iter().zip(&self.0) {
            chain = &chain + &sigma.scaled(l);
        }
        chain
    }
}

impl Add for K4Class {
    type Output = K4Class;
    fn add(self, rhs: K4Class) -> K4Class {
        K4Class([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for K4Class {
    type Output = K4Class;
    fn sub(self, rhs: K4Class) -> K4Class {
        self + (-rhs)
    }
}

impl Neg for K4Class {
    type Output = K4Class;
    fn neg(self) -> K4Class {
        K4Class(self.0.map(|x| -x))
    }
}

/// The σ cycles and the inverse of their restriction to the edges off the
/// spanning star at `X1`.
pub struct SigmaBasis {
    pub sigmas: [EdgeVector; 3],
    /// Inverse of the 3×3 matrix whose columns are the σ's coefficients on
    /// `X2X3`, `X2X4`, `X3X4`.
    inverse: [[i64; 3]; 3],
}

const CHORDS: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 3)];

fn build_sigma_basis() -> SigmaBasis {
    let sigmas = [
        EdgeVector::from_closed_walk(4, &[0, 1, 2]),
        EdgeVector::from_closed_walk(4, &[0, 2, 3]),
        EdgeVector::from_closed_walk(4, &[1, 3, 2]),
    ];
    let mut m = [[0i64; 3]; 3];
    for (col, sigma) in sigmas.iter().enumerate() {
        for (row, &(i, j)) in CHORDS.iter().enumerate() {
            m[row][col] = sigma.get(i, j);
        }
    }
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    assert!(det == 1 || det == -1, "σ cycles are not a lattice basis");
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
            - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let mut inverse = [[0i64; 3]; 3];
    for (r, row) in inverse.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            // adjugate is the transposed cofactor matrix
            *entry = cof(c, r) * det;
        }
    }
    SigmaBasis { sigmas, inverse }
}

pub fn sigma_basis() -> &'static SigmaBasis {
    static BASIS: OnceLock<SigmaBasis> = OnceLock::new();
    BASIS.get_or_init(build_sigma_basis)
}

/// Coordinates of a `K4` cycle in the σ basis.
pub fn cycle_coordinates(chain: &EdgeVector) -> Result<K4Class> {
    assert_eq!(chain.order(), 4);
    if !chain.is_cycle() {
        return Err(Error::NotACycle);
    }
    let basis = sigma_basis();
    let chords = CHORDS.map(|(i, j)| chain.get(i, j));
    let mut lambda = [0i64; 3];
    for (r, l) in lambda.iter_mut().enumerate() {
        *l = (0..3).map(|c| basis.inverse[r][c] * chords[c]).sum();
    }
    let class = K4Class(lambda);
    if class.to_edge_vector() != *chain {
        return Err(Error::NotACycle);
    }
    Ok(class)
}

/// Class of the closed walk through the given residues.
pub fn k4_class(residues: &[Residue]) -> Result<K4Class> {
    let walk: Vec<usize> = residues.iter().map(|r| r.vertex_index()).collect();
    cycle_coordinates(&EdgeVector::from_closed_walk(4, &walk))
}

/// Class `⟨L⟩` of a lattice broken line.
pub fn class_of_lattice_line(line: &BrokenLine) -> Result<K4Class> {
    let residues = line
        .vertices
        .iter()
        .enumerate()
        .map(|(index, p)| Residue::of_point(p).ok_or(Error::NotLattice { index }))
        .collect::<Result<Vec<_>>>()?;
    k4_class(&residues)
}

/// Coordinates `(μ1, μ2, μ3)` in the generators `σ2+σ3`, `σ3+σ1`, `σ1+σ2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MuDecomposition(pub [i64; 3]);

impl MuDecomposition {
    pub fn sum(self) -> i64 {
        self.0.iter().sum()
    }

    pub fn recompose(self) -> K4Class {
        let [m1, m2, m3] = self.0;
        K4Class([m2 + m3, m3 + m1, m1 + m2])
    }
}

/// Writes a class of even coordinate sum in the index-2 subgroup.
pub fn decompose_mu(class: K4Class) -> Result<MuDecomposition> {
    let [l1, l2, l3] = class.0;
    let s = l1 + l2 + l3;
    if s % 2 != 0 {
        return Err(Error::NotInSubgroup(class.0));
    }
    // μ_i = (−λ_i + λ_j + λ_k) / 2 = s/2 − λ_i
    let half = s / 2;
    Ok(MuDecomposition([half - l1, half - l2, half - l3]))
}
