//! Bounded exhaustive search for equal-area cuts of a polygon into
//! triangles with vertices on a finite rational grid.
//!
//! The search places one triangle at a time. At each node it takes the
//! smallest grid point, ordered by `(y, x)`, whose neighbourhood is not yet
//! fully covered, and the first uncovered direction there counterclockwise
//! from the positive `x` axis. The next piece must be the one whose corner
//! or edge starts along that direction, so each cut is reached along
//! exactly one branch. Pieces are filtered by exact area, containment and
//! interior overlap.
//!
//! Internally all grid points are scaled by the common denominator so the
//! hot loop runs on machine integers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::dissection::Dissection;
use crate::dyadic::Rational;
use crate::geometry::{triangle_inside_polygon, Location, Point, Polygon, Triangle};
use crate::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
const MAX_GRID_POINTS: usize = 100_000;
const MAX_COORDINATE: i64 = 1 << 40;

/// Which rationals of the bounding box are candidate vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridSpec {
    /// Denominator dividing `d`.
    Denominator(u32),
    /// Denominator at most `d`.
    MaxDenominator(u32),
}

/// Rationals in `[lo, hi]` with the allowed denominators.
fn axis_values(lo: &Rational, hi: &Rational, denominators: &[u32]) -> Result<BTreeSet<Rational>> {
    let mut values = BTreeSet::new();
    for &d in denominators {
        let d_big = BigInt::from(d);
        let start = (lo.as_big() * &d_big).ceil().to_integer().to_i64();
        let end = (hi.as_big() * &d_big).floor().to_integer().to_i64();
        let (Some(start), Some(end)) = (start, end) else {
            return Err(Error::InvalidSearch("grid coordinates too large".into()));
        };
        if end - start >= MAX_GRID_POINTS as i64 {
            return Err(Error::InvalidSearch(format!("{} values per axis", end - start + 1)));
        }
        values.extend((start..=end).map(|i| Rational::new(i, d)));
    }
    Ok(values)
}

/// Grid points of the closed polygon, sorted, polygon vertices included.
/// Each coordinate independently takes an allowed denominator.
pub fn grid_points(polygon: &Polygon, spec: GridSpec) -> Result<Vec<Point>> {
    let denominators: Vec<u32> = match spec {
        GridSpec::Denominator(0) | GridSpec::MaxDenominator(0) => {
            return Err(Error::InvalidSearch("denominator must be positive".into()))
        }
        GridSpec::Denominator(d) => vec![d],
        GridSpec::MaxDenominator(d) => (1..=d).collect(),
    };
    let (lo, hi) = polygon.bounding_box();
    let xs = axis_values(&lo.x, &hi.x, &denominators)?;
    let ys = axis_values(&lo.y, &hi.y, &denominators)?;
    let count = xs.len().saturating_mul(ys.len());
    if count > MAX_GRID_POINTS {
        return Err(Error::InvalidSearch(format!("grid has {count} points")));
    }
    let mut points: BTreeSet<Point> = polygon.vertices().iter().cloned().collect();
    for x in &xs {
        for y in &ys {
            let p = Point::new(x.clone(), y.clone());
            if polygon.locate(&p) != Location::Outside {
                points.insert(p);
            }
        }
    }
    Ok(points.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchSpace {
    polygon: Polygon,
    piece_count: usize,
    grid: Vec<Point>,
    symmetry_reduction: bool,
}

impl SearchSpace {
    /// Points outside the closed polygon are dropped; polygon vertices are
    /// always added.
    pub fn new(polygon: Polygon, piece_count: usize, grid: Vec<Point>) -> Result<Self> {
        if piece_count == 0 {
            return Err(Error::InvalidSearch("piece count must be at least 1".into()));
        }
        let mut points: BTreeSet<Point> = grid
            .into_iter()
            .filter(|p| polygon.locate(p) != Location::Outside)
            .collect();
        points.extend(polygon.vertices().iter().cloned());
        if points.len() > MAX_GRID_POINTS {
            return Err(Error::InvalidSearch(format!("{} grid points", points.len())));
        }
        Ok(SearchSpace {
            polygon,
            piece_count,
            grid: points.into_iter().collect(),
            symmetry_reduction: false,
        })
    }

    pub fn with_grid(polygon: Polygon, piece_count: usize, spec: GridSpec) -> Result<Self> {
        let grid = grid_points(&polygon, spec)?;
        SearchSpace::new(polygon, piece_count, grid)
    }

    pub fn with_symmetry_reduction(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn piece_count(&self) -> usize {
        self.piece_count
    }

    pub fn grid(&self) -> &[Point] {
        &self.grid
    }

    pub fn symmetry_reduction(&self) -> bool {
        self.symmetry_reduction
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cap on the number of candidate triangles examined.
    pub budget: u64,
    /// Stop after the first cut is found.
    pub first_only: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            first_only: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    /// The whole tree was explored; the result is complete.
    Exhausted,
    /// Stopped after the first hit as requested.
    Stopped,
    /// The node budget ran out; the result is partial.
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub dissections: Vec<Dissection>,
    pub status: SearchStatus,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("search budget exceeded after {nodes} nodes with {} partial results", partial.len())]
pub struct BudgetExceeded {
    pub partial: Vec<Dissection>,
    pub nodes: u64,
}

impl SearchOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == SearchStatus::Exhausted
    }

    /// The dissections, or the partial list flagged as an error.
    pub fn into_result(self) -> Result<Vec<Dissection>, BudgetExceeded> {
        match self.status {
            SearchStatus::BudgetExceeded => Err(BudgetExceeded {
                partial: self.dissections,
                nodes: self.nodes,
            }),
            _ => Ok(self.dissections),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct IPoint {
    x: i64,
    y: i64,
}

impl IPoint {
    fn sub(self, o: IPoint) -> IVec {
        IVec {
            x: self.x - o.x,
            y: self.y - o.y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct IVec {
    x: i64,
    y: i64,
}

impl IVec {
    fn neg(self) -> IVec {
        IVec {
            x: -self.x,
            y: -self.y,
        }
    }

    fn add(self, o: IVec) -> IVec {
        IVec {
            x: self.x + o.x,
            y: self.y + o.y,
        }
    }

    fn perp(self) -> IVec {
        IVec {
            x: -self.y,
            y: self.x,
        }
    }

    fn primitive(self) -> IVec {
        let g = self.x.gcd(&self.y);
        IVec {
            x: self.x / g,
            y: self.y / g,
        }
    }

    /// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
    fn half(self) -> u8 {
        u8::from(!(self.y > 0 || (self.y == 0 && self.x > 0)))
    }
}

fn cross(a: IVec, b: IVec) -> i128 {
    a.x as i128 * b.y as i128 - a.y as i128 * b.x as i128
}

fn dot(a: IVec, b: IVec) -> i128 {
    a.x as i128 * b.x as i128 + a.y as i128 * b.y as i128
}

fn angle_cmp(a: IVec, b: IVec) -> std::cmp::Ordering {
    a.half()
        .cmp(&b.half())
        .then_with(|| 0.cmp(&cross(a, b)))
}

type ITriangle = [IPoint; 3];

fn area2(t: &ITriangle) -> i128 {
    cross(t[1].sub(t[0]), t[2].sub(t[0]))
}

/// Whether `p + εu` lies in the open ccw triangle for small `ε > 0`.
fn triangle_holds_direction(t: &ITriangle, p: IPoint, u: IVec) -> bool {
    (0..3).all(|k| {
        let (a, b) = (t[k], t[(k + 1) % 3]);
        let e = b.sub(a);
        match cross(e, p.sub(a)) {
            c if c > 0 => true,
            0 => cross(e, u) > 0,
            _ => false,
        }
    })
}

/// Interiors of two ccw triangles are disjoint iff some edge line of one
/// weakly separates them.
fn interiors_disjoint(t1: &ITriangle, t2: &ITriangle) -> bool {
    let separates = |s: &ITriangle, o: &ITriangle| {
        (0..3).any(|k| {
            let (a, b) = (s[k], s[(k + 1) % 3]);
            o.iter().all(|&v| cross(b.sub(a), v.sub(a)) <= 0)
        })
    };
    separates(t1, t2) || separates(t2, t1)
}

fn on_closed_segment(p: IPoint, a: IPoint, b: IPoint) -> bool {
    cross(b.sub(a), p.sub(a)) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

fn canonical(t: &ITriangle) -> ITriangle {
    let mut s = *t;
    s.sort();
    s
}

type Key = Vec<ITriangle>;

fn key_of(pieces: &[ITriangle]) -> Key {
    let mut key: Key = pieces.iter().map(canonical).collect();
    key.sort();
    key
}

/// A dihedral map of the bounding box, in doubled coordinates about its
/// center.
#[derive(Clone, Copy, Debug)]
struct Symmetry {
    m: [[i64; 2]; 2],
    sx: i64,
    sy: i64,
}

impl Symmetry {
    fn apply(&self, p: IPoint) -> Option<IPoint> {
        let u = 2 * p.x - self.sx;
        let v = 2 * p.y - self.sy;
        let u2 = self.m[0][0] * u + self.m[0][1] * v + self.sx;
        let v2 = self.m[1][0] * u + self.m[1][1] * v + self.sy;
        (u2 % 2 == 0 && v2 % 2 == 0).then_some(IPoint { x: u2 / 2, y: v2 / 2 })
    }

    fn is_identity(&self) -> bool {
        self.m == [[1, 0], [0, 1]]
    }
}

/// The dihedral maps of the bounding box that fix the polygon and the grid.
fn symmetries(poly: &[IPoint], grid: &[IPoint]) -> Vec<Symmetry> {
    let min_x = poly.iter().map(|p| p.x).min().unwrap();
    let max_x = poly.iter().map(|p| p.x).max().unwrap();
    let min_y = poly.iter().map(|p| p.y).min().unwrap();
    let max_y = poly.iter().map(|p| p.y).max().unwrap();
    let (sx, sy) = (min_x + max_x, min_y + max_y);
    let edge_set = |pts: &[IPoint]| -> BTreeSet<(IPoint, IPoint)> {
        (0..pts.len())
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                (a.min(b), a.max(b))
            })
            .collect()
    };
    let edges = edge_set(poly);
    let grid_set: BTreeSet<IPoint> = grid.iter().copied().collect();
    let mut out = Vec::new();
    for swap in [false, true] {
        for sa in [1, -1] {
            for sb in [1, -1] {
                let m = if swap {
                    [[0, sa], [sb, 0]]
                } else {
                    [[sa, 0], [0, sb]]
                };
                let g = Symmetry { m, sx, sy };
                let image: Option<Vec<IPoint>> = poly.iter().map(|&p| g.apply(p)).collect();
                let fixes_polygon = image.is_some_and(|img| edge_set(&img) == edges);
                let fixes_grid = fixes_polygon
                    && grid
                        .iter()
                        .all(|&p| g.apply(p).is_some_and(|q| grid_set.contains(&q)));
                if fixes_grid {
                    out.push(g);
                }
            }
        }
    }
    out
}

struct Engine {
    /// Grid sorted by `(y, x)`.
    grid: Vec<IPoint>,
    /// Polygon vertices, counterclockwise.
    poly: Vec<IPoint>,
    convex: bool,
    /// Exact containment fallback for non-convex polygons.
    polygon: Polygon,
    scale: BigInt,
    target2: i128,
    pieces: usize,
    options: SearchOptions,
    symmetries: Vec<Symmetry>,
    nodes: u64,
    placed: Vec<ITriangle>,
    found: Vec<Key>,
    halted: Option<SearchStatus>,
}

enum Frontier {
    /// Start a piece along direction `d` at grid point `p`.
    Open { p: IPoint, d: IVec },
    /// No completion exists from here.
    Dead,
}

impl Engine {
    fn polygon_holds_direction(&self, p: IPoint, u: IVec) -> bool {
        let n = self.poly.len();
        for i in 0..n {
            let (prev, cur, next) = (self.poly[(i + n - 1) % n], self.poly[i], self.poly[(i + 1) % n]);
            if p == cur {
                let e_in = cur.sub(prev);
                let e_out = next.sub(cur);
                let after_out = cross(e_out, u) > 0;
                let before_in = cross(u, e_in.neg()) > 0;
                return match cross(e_in, e_out) {
                    c if c > 0 => after_out && before_in,
                    c if c < 0 => after_out || before_in,
                    _ => after_out,
                };
            }
            if on_closed_segment(p, cur, next) {
                return cross(next.sub(cur), u) > 0;
            }
        }
        true
    }

    fn covered(&self, p: IPoint, u: IVec) -> bool {
        !self.polygon_holds_direction(p, u)
            || self.placed.iter().any(|t| triangle_holds_direction(t, p, u))
    }

    fn boundary_directions(&self, p: IPoint) -> Vec<IVec> {
        let mut dirs = Vec::new();
        let mut push_edge = |a: IPoint, b: IPoint| {
            if !on_closed_segment(p, a, b) {
                return;
            }
            let e = b.sub(a).primitive();
            if p != b {
                dirs.push(e);
            }
            if p != a {
                dirs.push(e.neg());
            }
        };
        let n = self.poly.len();
        for i in 0..n {
            push_edge(self.poly[i], self.poly[(i + 1) % n]);
        }
        for t in &self.placed {
            for k in 0..3 {
                push_edge(t[k], t[(k + 1) % 3]);
            }
        }
        dirs.sort_by(|a, b| angle_cmp(*a, *b));
        dirs.dedup();
        dirs
    }

    fn frontier(&self) -> Frontier {
        for &p in &self.grid {
            let dirs = self.boundary_directions(p);
            if dirs.is_empty() {
                if self.covered(p, IVec { x: 1, y: 0 }) {
                    continue;
                }
                return Frontier::Dead;
            }
            let m = dirs.len();
            let open: Vec<bool> = (0..m)
                .map(|k| {
                    let (a, b) = (dirs[k], dirs[(k + 1) % m]);
                    let mid = match cross(a, b) {
                        c if c > 0 => a.add(b),
                        c if c < 0 => a.add(b).neg(),
                        _ if m == 1 => a.neg(),
                        _ => a.perp(),
                    };
                    !self.covered(p, mid)
                })
                .collect();
            if open.iter().all(|&o| !o) {
                continue;
            }
            // the lowest uncovered point would lie off the grid
            if open.iter().all(|&o| o) {
                return Frontier::Dead;
            }
            let k = (0..m).find(|&k| open[k] && !open[(k + m - 1) % m]).unwrap();
            return Frontier::Open { p, d: dirs[k] };
        }
        Frontier::Dead
    }

    fn contained(&self, t: &ITriangle) -> bool {
        self.convex || triangle_inside_polygon(&self.to_triangle(t), &self.polygon)
    }

    fn to_point(&self, p: IPoint) -> Point {
        Point::new(
            Rational::new(p.x, self.scale.clone()),
            Rational::new(p.y, self.scale.clone()),
        )
    }

    fn to_triangle(&self, t: &ITriangle) -> Triangle {
        t.map(|p| self.to_point(p))
    }

    /// Returns false once the search must halt.
    fn try_piece(&mut self, t: ITriangle) -> bool {
        self.nodes += 1;
        if self.nodes > self.options.budget {
            self.halted = Some(SearchStatus::BudgetExceeded);
            return false;
        }
        if area2(&t) != self.target2 {
            return true;
        }
        if !self.placed.iter().all(|s| interiors_disjoint(s, &t)) || !self.contained(&t) {
            return true;
        }
        self.placed.push(t);
        self.descend();
        self.placed.pop();
        self.halted.is_none()
    }

    fn descend(&mut self) {
        if self.placed.len() == self.pieces {
            self.record();
            return;
        }
        let Frontier::Open { p, d } = self.frontier() else {
            return;
        };
        let on_ray = |q: IPoint, dir: IVec| {
            let v = q.sub(p);
            q != p && cross(dir, v) == 0 && dot(dir, v) > 0
        };
        let ahead: Vec<IPoint> = self.grid.iter().copied().filter(|&q| on_ray(q, d)).collect();
        let behind: Vec<IPoint> = self
            .grid
            .iter()
            .copied()
            .filter(|&q| on_ray(q, d.neg()))
            .collect();
        let left: Vec<IPoint> = self
            .grid
            .iter()
            .copied()
            .filter(|&r| cross(d, r.sub(p)) > 0)
            .collect();
        for &q in &ahead {
            for &r in &left {
                if !self.try_piece([p, q, r]) {
                    return;
                }
            }
        }
        for &a in &behind {
            for &b in &ahead {
                for &r in &left {
                    if !self.try_piece([a, b, r]) {
                        return;
                    }
                }
            }
        }
    }

    fn record(&mut self) {
        let key = key_of(&self.placed);
        let minimal = self.symmetries.iter().filter(|g| !g.is_identity()).all(|g| {
            let image: Vec<ITriangle> = self
                .placed
                .iter()
                .map(|t| t.map(|p| g.apply(p).expect("symmetry fixes the grid")))
                .collect();
            key_of(&image) >= key
        });
        if !minimal {
            return;
        }
        self.found.push(key);
        if self.options.first_only {
            self.halted = Some(SearchStatus::Stopped);
        }
    }
}

fn scaled(q: &Rational, scale: &BigInt) -> Result<i64> {
    (q.as_big() * scale)
        .to_integer()
        .to_i64()
        .filter(|v| v.abs() < MAX_COORDINATE)
        .ok_or_else(|| Error::InvalidSearch("grid coordinates too large".into()))
}

/// Runs the search. The result list is sorted by canonical key (pieces with
/// sorted vertices, pieces sorted) and identical across runs.
pub fn enumerate_equidissections(space: &SearchSpace, options: SearchOptions) -> Result<SearchOutcome> {
    let polygon = space.polygon.to_ccw();
    let scale = space
        .grid
        .iter()
        .flat_map(|p| [p.x.denom(), p.y.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(d));
    let to_ipoint = |p: &Point| -> Result<IPoint> {
        Ok(IPoint {
            x: scaled(&p.x, &scale)?,
            y: scaled(&p.y, &scale)?,
        })
    };
    let poly: Vec<IPoint> = polygon.vertices().iter().map(to_ipoint).collect::<Result<_>>()?;
    let mut grid: Vec<IPoint> = space.grid.iter().map(to_ipoint).collect::<Result<_>>()?;
    grid.sort_by_key(|p| (p.y, p.x));

    let n = poly.len();
    let convex = (0..n).all(|i| {
        let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
        cross(b.sub(a), c.sub(b)) >= 0
    });
    let total2: i128 = (0..n)
        .map(|i| cross(poly[i].sub(IPoint { x: 0, y: 0 }), poly[(i + 1) % n].sub(IPoint { x: 0, y: 0 })))
        .sum();
    let pieces = space.piece_count;
    if total2 % pieces as i128 != 0 {
        // no grid triangle has the required area
        return Ok(SearchOutcome {
            dissections: Vec::new(),
            status: SearchStatus::Exhausted,
            nodes: 0,
        });
    }
    let symmetries = if space.symmetry_reduction {
        symmetries(&poly, &grid)
    } else {
        Vec::new()
    };
    let mut engine = Engine {
        grid,
        poly,
        convex,
        polygon: polygon.clone(),
        scale,
        target2: total2 / pieces as i128,
        pieces,
        options,
        symmetries,
        nodes: 0,
        placed: Vec::with_capacity(pieces),
        found: Vec::new(),
        halted: None,
    };
    engine.descend();
    engine.found.sort();
    let dissections = engine
        .found
        .iter()
        .map(|key| {
            let triangles = key.iter().map(|t| engine.to_triangle(t)).collect();
            Dissection::new(space.polygon.clone(), triangles)
        })
        .collect();
    Ok(SearchOutcome {
        dissections,
        status: engine.halted.unwrap_or(SearchStatus::Exhausted),
        nodes: engine.nodes,
    })
}
