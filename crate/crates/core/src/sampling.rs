//! Seeded random generators for rationals, maps, lattice lines and
//! polygons. Everything takes an explicit `Rng` so sweeps are reproducible.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coloring::{color, AffineMap, Color};
use crate::dyadic::Rational;
use crate::geometry::{orient, BrokenLine, Point, Polygon, Vector};

/// Attempts allowed when rejection-sampling a polygon.
pub const MAX_RETRIES: usize = 10_000;

/// `p/q` with `|p| ≤ bound` and `1 ≤ q ≤ bound`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    Rational::new(p, q)
}

/// A nonzero rational; see [`random_rational`].
pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    loop {
        let r = random_rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Rational `2^k · p/q` with `|k| ≤ spread`, so valuations vary widely.
pub fn random_dyadic_spread<R: Rng + ?Sized>(rng: &mut R, bound: i64, spread: i64) -> Rational {
    random_rational(rng, bound) * Rational::pow2(rng.gen_range(-spread..=spread))
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Point {
    Point::new(random_rational(rng, bound), random_rational(rng, bound))
}

pub fn random_lattice_point<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Point {
    Point::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

/// A rational affine map with determinant `±1`: two shears, an optional
/// reflection, and a translation.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> AffineMap {
    let s = random_rational(rng, bound);
    let t = random_rational(rng, bound);
    let one = Rational::one;
    // [[1, s], [0, 1]] · [[1, 0], [t, 1]]
    let mut m = [[one() + &s * &t, s], [t, one()]];
    if rng.gen_bool(0.5) {
        m.swap(0, 1);
    }
    let translation = [random_rational(rng, bound), random_rational(rng, bound)];
    AffineMap::new(m, translation).expect("shears and swaps have determinant ±1")
}

/// An integral map with determinant `±1`.
pub fn random_integral_map<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> AffineMap {
    let s = rng.gen_range(-bound..=bound);
    let t = rng.gen_range(-bound..=bound);
    let mut m = [[1 + s * t, s], [t, 1]];
    if rng.gen_bool(0.5) {
        m.swap(0, 1);
    }
    let translation = [rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)];
    AffineMap::integer(m, translation).expect("shears and swaps have determinant ±1")
}

/// A triangle whose vertices get three distinct colors under `map`. Each
/// vertex is drawn with its color in the image plane and pulled back, so
/// the cost does not depend on how rare a color is near the origin.
pub fn random_rainbow_triangle<R: Rng + ?Sized>(
    rng: &mut R,
    map: &AffineMap,
    bound: i64,
) -> [Point; 3] {
    let inverse = map.inverse();
    let mut order = Color::ALL;
    order.shuffle(rng);
    order.map(|target| loop {
        let image = random_point(rng, bound);
        if color(&image) == target {
            break inverse.apply(&image);
        }
    })
}

/// A closed lattice broken line with `len` vertices; may self-intersect.
pub fn random_lattice_line<R: Rng + ?Sized>(rng: &mut R, len: usize, bound: i64) -> BrokenLine {
    BrokenLine::new((0..len).map(|_| random_lattice_point(rng, bound)).collect())
}

/// A simple lattice polygon with `3..=max_vertices` vertices, made by
/// sorting random points by angle around an interior center.
pub fn random_lattice_polygon<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
    bound: i64,
) -> Option<Polygon> {
    for _ in 0..MAX_RETRIES {
        let n = rng.gen_range(3..=max_vertices.max(3));
        let mut pts: Vec<Point> = (0..n).map(|_| random_lattice_point(rng, bound)).collect();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            continue;
        }
        let k = pts.len() as i64;
        let cx: Rational = pts.iter().map(|p| &p.x).sum::<Rational>() / Rational::from(k);
        let cy: Rational = pts.iter().map(|p| &p.y).sum::<Rational>() / Rational::from(k);
        let center = Point::new(cx, cy);
        let angle = |p: &Point| (&p.y - &center.y).to_f64().atan2((&p.x - &center.x).to_f64());
        pts.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        if let Ok(polygon) = Polygon::new(pts) {
            if !polygon.area().is_zero() {
                return Some(polygon);
            }
        }
    }
    log::warn!("no simple lattice polygon after {MAX_RETRIES} attempts");
    None
}

/// A balanced lattice polygon from `pairs` random edge vectors and their
/// negatives, in shuffled order. Rejects non-simple outcomes.
pub fn random_balanced_polygon<R: Rng + ?Sized>(
    rng: &mut R,
    pairs: usize,
    bound: i64,
) -> Option<Polygon> {
    for _ in 0..MAX_RETRIES {
        let mut sides: Vec<Vector> = Vec::with_capacity(2 * pairs);
        for _ in 0..pairs {
            let v = loop {
                let v = Vector::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
                if !v.is_zero() {
                    break v;
                }
            };
            sides.push(-&v);
            sides.push(v);
        }
        sides.shuffle(rng);
        let mut vertices = Vec::with_capacity(sides.len());
        let mut at = Point::origin();
        for side in &sides {
            vertices.push(at.clone());
            at = &at + side;
        }
        let degenerate = vertices.windows(3).any(|w| orient(&w[0], &w[1], &w[2]).is_zero());
        if degenerate {
            continue;
        }
        if let Ok(polygon) = Polygon::new(vertices) {
            return Some(polygon);
        }
    }
    log::warn!("no simple balanced polygon with {pairs} pairs after {MAX_RETRIES} attempts");
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balanced::pair_edges;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn maps_preserve_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert_eq!(random_map(&mut rng, 9).determinant().abs(), Rational::one());
            let m = random_integral_map(&mut rng, 3);
            assert!(m.is_integral());
        }
    }

    #[test]
    fn polygons_are_simple_and_balanced_when_asked() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let p = random_lattice_polygon(&mut rng, 12, 6).unwrap();
            assert!(p.is_lattice() && p.len() <= 12);
            let b = random_balanced_polygon(&mut rng, 3, 3).unwrap();
            assert!(pair_edges(&b).is_some());
        }
    }

    #[test]
    fn rainbow_triangles_are_rainbow() {
        use crate::coloring::is_rainbow;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let map = random_map(&mut rng, 64);
            let t = random_rainbow_triangle(&mut rng, &map, 20);
            assert!(is_rainbow(&t[0], &t[1], &t[2], &map));
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_point(&mut ChaCha8Rng::seed_from_u64(7), 100);
        let b = random_point(&mut ChaCha8Rng::seed_from_u64(7), 100);
        assert_eq!(a, b);
    }
}
