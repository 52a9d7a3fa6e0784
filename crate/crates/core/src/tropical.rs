//! Momentum maps built from 2-adic valuations.
//!
//! `m([x:y:z])` is the barycentric combination of the vertices `(1,0)`,
//! `(0,1)`, `(0,0)` of the triangle `T` with weights `2^{−ν2(x)}`,
//! `2^{−ν2(y)}`, `2^{−ν2(z)}` (zero for a zero coordinate). The image of the
//! line `x + y + z = 0` is a tripod centered at `(1/3, 1/3)` whose legs are
//! the loci where the two largest weights tie; it cuts `T` into three
//! pieces, one around each vertex. Coloring the pieces reproduces the
//! valuation coloring on the chart `z = 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coloring::{color, Color};
use crate::dyadic::{val2, Rational, Valuation};
use crate::geometry::{orient, wedge, Point};
use crate::{Error, Result};

/// A point of the projective plane, stored with its first nonzero
/// coordinate scaled to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[Rational; 3]", into = "[Rational; 3]")]
pub struct ProjectivePoint([Rational; 3]);

impl ProjectivePoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        let coords = [x, y, z];
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(Error::ZeroProjectivePoint)?
            .clone();
        Ok(ProjectivePoint(coords.map(|c| c / &lead)))
    }

    /// `[x : y : 1]`.
    pub fn from_chart(p: &Point) -> Self {
        ProjectivePoint::new(p.x.clone(), p.y.clone(), Rational::one()).unwrap()
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.0
    }
}

impl TryFrom<[Rational; 3]> for ProjectivePoint {
    type Error = Error;
    fn try_from([x, y, z]: [Rational; 3]) -> Result<Self> {
        ProjectivePoint::new(x, y, z)
    }
}

impl From<ProjectivePoint> for [Rational; 3] {
    fn from(p: ProjectivePoint) -> Self {
        p.0
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [x, y, z] = &self.0;
        write!(f, "[{x}:{y}:{z}]")
    }
}

/// Image of a point under the projective momentum map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentumImage {
    /// Barycentric weights on `(1,0)`, `(0,1)`, `(0,0)`, summing to one.
    pub weights: [Rational; 3],
    pub point: Point,
}

fn dyadic_weight(c: &Rational) -> Rational {
    match val2(c) {
        Valuation::Infinity => Rational::zero(),
        Valuation::Finite(v) => Rational::pow2(-v),
    }
}

pub fn momentum_p2(p: &ProjectivePoint) -> MomentumImage {
    let raw = p.coords().clone().map(|c| dyadic_weight(&c));
    let total: Rational = raw.iter().sum();
    let weights = raw.map(|w| w / &total);
    let point = Point::new(weights[0].clone(), weights[1].clone());
    MomentumImage { weights, point }
}

/// `(x, y) ↦ (ν2(x), ν2(y))` on the torus `Q* × Q*`.
pub fn momentum_torus(x: &Rational, y: &Rational) -> Result<(i64, i64)> {
    match (val2(x), val2(y)) {
        (Valuation::Finite(a), Valuation::Finite(b)) => Ok((a, b)),
        _ => Err(Error::ZeroCoordinate),
    }
}

/// The three pieces of `T`, named by the vertex each contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    /// Around `(1,0)`.
    X,
    /// Around `(0,1)`.
    Y,
    /// Around `(0,0)`.
    Z,
}

impl Region {
    /// Piece holding the image: the vertex of largest weight, ties going to
    /// `X` first, then `Y`. The tie loci are the legs of the tripod.
    pub fn of(image: &MomentumImage) -> Region {
        let [wx, wy, wz] = &image.weights;
        if wx >= wy && wx >= wz {
            Region::X
        } else if wy >= wz {
            Region::Y
        } else {
            Region::Z
        }
    }
}

/// Region-to-color table, fixed by the lattice points `(0,0)`, `(0,1)`,
/// `(1,0)`.
pub fn region_colors() -> &'static BTreeMap<Region, Color> {
    static TABLE: OnceLock<BTreeMap<Region, Color>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let table: BTreeMap<Region, Color> = [(0, 0), (0, 1), (1, 0)]
            .into_iter()
            .map(|(x, y)| {
                let p = Point::new(x, y);
                let image = momentum_p2(&ProjectivePoint::from_chart(&p));
                (Region::of(&image), color(&p))
            })
            .collect();
        assert_eq!(table.len(), 3, "representatives landed in the same piece");
        table
    })
}

pub fn momentum_color(p: &Point) -> Color {
    region_colors()[&Region::of(&momentum_p2(&ProjectivePoint::from_chart(p)))]
}

/// Whether the momentum-region color of `[x:y:1]` equals `color(p)`.
pub fn chart_agreement(p: &Point) -> bool {
    momentum_color(p) == color(p)
}

/// Two independent points spanning the line `ax + by + cz = 0`.
fn line_basis(a: &Rational, b: &Rational, c: &Rational) -> Result<[[Rational; 3]; 2]> {
    let zero = Rational::zero;
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Err(Error::ZeroProjectivePoint);
    }
    Ok(if !c.is_zero() {
        [[c.clone(), zero(), -a], [zero(), c.clone(), -b]]
    } else {
        // ax + by = 0 through [0:0:1]
        [[b.clone(), -a, zero()], [zero(), zero(), Rational::one()]]
    })
}

/// Deterministic parameter sweep mixing signs, powers of two and odd parts.
/// Exponents run `0, 1, -1, 2, -2, ...` up to `±12`.
fn sweep_parameter(k: usize) -> Rational {
    let step = (k % 25) as i64;
    let exp = if step % 2 == 1 { (step + 1) / 2 } else { -step / 2 };
    let odd_num = 2 * ((k / 25) % 5) as i64 + 1;
    let odd_den = 2 * ((k / 125) % 3) as i64 + 1;
    let sign = if (k / 2).is_multiple_of(2) { 1 } else { -1 };
    Rational::pow2(exp) * Rational::new(sign * odd_num, odd_den)
}

/// Momentum images of `count` points on the line `ax + by + cz = 0`.
pub fn sample_line_image(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    count: usize,
) -> Result<Vec<(ProjectivePoint, MomentumImage)>> {
    let [p, q] = line_basis(a, b, c)?;
    (0..count)
        .map(|k| {
            let s = sweep_parameter(k);
            let coords: [Rational; 3] = std::array::from_fn(|i| &p[i] * &s + &q[i]);
            let point = ProjectivePoint::try_from(coords)?;
            let image = momentum_p2(&point);
            Ok((point, image))
        })
        .collect()
}

/// Collinear families of images through the vertices of `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripodReport {
    /// For each vertex (`X`, `Y`, `Z` order), the cevian chosen, given as
    /// the weight ratio of the two opposite vertices.
    pub cevian_ratios: [Option<[Rational; 2]>; 3],
    /// Common point of the three cevians, when they concur.
    pub center: Option<Point>,
    /// Images lying on at least one of the three cevians.
    pub on_legs: usize,
    pub total: usize,
}

/// A cevian is a candidate leg when it carries at least this fraction of
/// the images (and at least two).
const CANDIDATE_SHARE: usize = 20;

const OPPOSITE: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

fn normalized_ratio(u: &Rational, v: &Rational) -> Option<[Rational; 2]> {
    if u.is_zero() && v.is_zero() {
        None
    } else if u.is_zero() {
        Some([Rational::zero(), Rational::one()])
    } else {
        Some([Rational::one(), v / u])
    }
}

fn vertex_point(k: usize) -> Point {
    match k {
        0 => Point::new(1, 0),
        1 => Point::new(0, 1),
        _ => Point::new(0, 0),
    }
}

/// Point of `T` with the given weights on the two vertices opposite
/// vertex `k` (and zero on `k`).
fn cevian_foot(k: usize, ratio: &[Rational; 2]) -> Point {
    let (i, j) = OPPOSITE[k];
    let total = &ratio[0] + &ratio[1];
    let (pi, pj) = (vertex_point(i), vertex_point(j));
    let wi = &ratio[0] / &total;
    let wj = &ratio[1] / &total;
    Point::new(&pi.x * &wi + &pj.x * &wj, &pi.y * &wi + &pj.y * &wj)
}

fn on_cevian(k: usize, ratio: &[Rational; 2], p: &Point) -> bool {
    orient(&vertex_point(k), &cevian_foot(k, ratio), p).is_zero()
}

fn cevian_intersection(k: usize, rk: &[Rational; 2], l: usize, rl: &[Rational; 2]) -> Option<Point> {
    let (a0, a1) = (vertex_point(k), vertex_point(l));
    let d0 = &cevian_foot(k, rk) - &a0;
    let d1 = &cevian_foot(l, rl) - &a1;
    let denom = wedge(&d0, &d1);
    if denom.is_zero() {
        return None;
    }
    let t = wedge(&(&a1 - &a0), &d1) / denom;
    Some(&a0 + &d0.scale(&t))
}

fn barycentric(p: &Point) -> [Rational; 3] {
    [p.x.clone(), p.y.clone(), Rational::one() - &p.x - &p.y]
}

fn count_on_legs(images: &[MomentumImage], ratios: &[Option<[Rational; 2]>; 3]) -> usize {
    images
        .iter()
        .filter(|image| {
            (0..3).any(|k| ratios[k].as_ref().is_some_and(|r| on_cevian(k, r, &image.point)))
        })
        .count()
}

fn ratio_at(m: usize, w: &[Rational; 3]) -> Option<[Rational; 2]> {
    let (i, j) = OPPOSITE[m];
    normalized_ratio(&w[i], &w[j])
}

/// Groups images by the cevian through each vertex that carries them, and
/// looks for three concurrent cevians covering as many images as possible.
pub fn tripod_report(images: &[MomentumImage]) -> TripodReport {
    let counts: [BTreeMap<[Rational; 2], usize>; 3] = std::array::from_fn(|k| {
        let mut counts = BTreeMap::new();
        for image in images {
            if let Some(r) = ratio_at(k, &image.weights) {
                *counts.entry(r).or_default() += 1;
            }
        }
        counts
    });
    let threshold = images.len().div_ceil(CANDIDATE_SHARE).max(2);
    let candidates: [Vec<&[Rational; 2]>; 3] = std::array::from_fn(|k| {
        counts[k]
            .iter()
            .filter(|(_, &n)| n >= threshold)
            .map(|(r, _)| r)
            .collect()
    });
    let image_ratios: Vec<[Option<[Rational; 2]>; 3]> = images
        .iter()
        .map(|image| std::array::from_fn(|m| ratio_at(m, &image.weights)))
        .collect();
    let mut best: Option<(usize, Point)> = None;
    for (k, l) in [(0, 1), (0, 2), (1, 2)] {
        for rk in &candidates[k] {
            for rl in &candidates[l] {
                let Some(c) = cevian_intersection(k, rk, l, rl) else {
                    continue;
                };
                let w = barycentric(&c);
                if !w.iter().all(Rational::is_positive) {
                    continue;
                }
                let legs: [Option<[Rational; 2]>; 3] = std::array::from_fn(|m| ratio_at(m, &w));
                // a vertex image has no ratio and lies on its own cevian
                let score = image_ratios
                    .iter()
                    .filter(|ratios| (0..3).any(|m| ratios[m].is_none() || ratios[m] == legs[m]))
                    .count();
                let better = match &best {
                    None => true,
                    Some((s, p)) => score > *s || (score == *s && c < *p),
                };
                if better {
                    best = Some((score, c));
                }
            }
        }
    }
    match best {
        Some((_, center)) => {
            let w = barycentric(&center);
            let cevian_ratios = std::array::from_fn(|m| ratio_at(m, &w));
            TripodReport {
                on_legs: count_on_legs(images, &cevian_ratios),
                cevian_ratios,
                center: Some(center),
                total: images.len(),
            }
        }
        None => {
            let cevian_ratios = std::array::from_fn(|k| {
                counts[k]
                    .iter()
                    .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                    .map(|(r, _)| r.clone())
            });
            TripodReport {
                on_legs: count_on_legs(images, &cevian_ratios),
                cevian_ratios,
                center: None,
                total: images.len(),
            }
        }
    }
}

/// CSV rows `input,weights,image-x,image-y`; weights joined by `;`.
pub fn momentum_csv(rows: &[(ProjectivePoint, MomentumImage)]) -> String {
    let mut out = String::from("input,weights,image-x,image-y\n");
    for (p, m) in rows {
        let [w0, w1, w2] = &m.weights;
        let _ = writeln!(out, "{p},{w0};{w1};{w2},{},{}", m.point.x, m.point.y);
    }
    out
}

/// CSV rows `x,y,nu-x,nu-y` for the torus map.
pub fn torus_csv(points: &[Point]) -> Result<String> {
    let mut out = String::from("x,y,nu-x,nu-y\n");
    for p in points {
        let (a, b) = momentum_torus(&p.x, &p.y)?;
        let _ = writeln!(out, "{},{},{a},{b}", p.x, p.y);
    }
    Ok(out)
}

/// Scatter plot of images in `T`, with the tripod of `x + y + z = 0` drawn
/// over it. Only the drawing uses floating point.
pub fn momentum_svg(images: &[MomentumImage]) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 20.0;
    let map = |p: &Point| (PAD + p.x.to_f64() * SIZE, PAD + (1.0 - p.y.to_f64()) * SIZE);
    let mut svg = String::new();
    let full = SIZE + 2.0 * PAD;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
    );
    let corners: Vec<(f64, f64)> = (0..3).map(|k| map(&vertex_point(k))).collect();
    let _ = writeln!(
        svg,
        r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="none" stroke="black"/>"#,
        corners[0].0, corners[0].1, corners[1].0, corners[1].1, corners[2].0, corners[2].1
    );
    let third = Rational::new(1, 3);
    let center = map(&Point::new(third.clone(), third));
    let half = Rational::new(1, 2);
    for foot in [
        Point::new(half.clone(), half.clone()),
        Point::new(half.clone(), Rational::zero()),
        Point::new(Rational::zero(), half.clone()),
    ] {
        let (fx, fy) = map(&foot);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{fx:.3}" y2="{fy:.3}" stroke="gray" stroke-dasharray="4 2"/>"#,
            center.0, center.1
        );
    }
    for image in images {
        let (x, y) = map(&image.point);
        let fill = match region_colors()[&Region::of(image)] {
            Color::A => "crimson",
            Color::B => "seagreen",
            Color::C => "royalblue",
        };
        let _ = writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{fill}"/>"#);
    }
    svg.push_str("</svg>\n");
    svg
}
