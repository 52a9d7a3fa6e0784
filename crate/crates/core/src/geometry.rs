//! Exact planar primitives.
//!
//! Sign convention: a counterclockwise boundary has positive
//! [`generalized_area`]. Everything downstream only looks at parity or
//! absolute value, so the choice is internal.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::dyadic::Rational;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Rational; 2]", into = "[Rational; 2]")]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn origin() -> Self {
        Point::new(0, 0)
    }

    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// Position vector from the origin.
    pub fn to_vector(&self) -> Vector {
        Vector::new(self.x.clone(), self.y.clone())
    }

    pub fn scale(&self, k: &Rational) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }
}

impl From<[Rational; 2]> for Point {
    fn from([x, y]: [Rational; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [Rational; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Rational; 2]", into = "[Rational; 2]")]
pub struct Vector {
    pub dx: Rational,
    pub dy: Rational,
}

impl Vector {
    pub fn new(dx: impl Into<Rational>, dy: impl Into<Rational>) -> Self {
        Vector {
            dx: dx.into(),
            dy: dy.into(),
        }
    }

    pub fn zero() -> Self {
        Vector::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.dx.is_zero() && self.dy.is_zero()
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        &self.dx * &other.dx + &self.dy * &other.dy
    }

    pub fn scale(&self, k: &Rational) -> Vector {
        Vector::new(&self.dx * k, &self.dy * k)
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn perp(&self) -> Vector {
        Vector::new(-&self.dy, self.dx.clone())
    }
}

impl From<[Rational; 2]> for Vector {
    fn from([dx, dy]: [Rational; 2]) -> Self {
        Vector { dx, dy }
    }
}

impl From<Vector> for [Rational; 2] {
    fn from(v: Vector) -> Self {
        [v.dx, v.dy]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.dx, self.dy)
    }
}

impl Sub<&Point> for &Point {
    type Output = Vector;
    fn sub(self, rhs: &Point) -> Vector {
        Vector::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Add<&Vector> for &Point {
    type Output = Point;
    fn add(self, rhs: &Vector) -> Point {
        Point::new(&self.x + &rhs.dx, &self.y + &rhs.dy)
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector::new(&self.dx + &rhs.dx, &self.dy + &rhs.dy)
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector::new(&self.dx - &rhs.dx, &self.dy - &rhs.dy)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector::new(-&self.dx, -&self.dy)
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

/// `v ∧ w = v_x w_y − v_y w_x`.
pub fn wedge(v: &Vector, w: &Vector) -> Rational {
    &v.dx * &w.dy - &v.dy * &w.dx
}

/// Twice the signed area of `p1 p2 p3`; positive for a left turn.
pub fn orient(p1: &Point, p2: &Point, p3: &Point) -> Rational {
    wedge(&(p2 - p1), &(p3 - p1))
}

pub fn triangle_signed_area(p1: &Point, p2: &Point, p3: &Point) -> Rational {
    orient(p1, p2, p3) / Rational::from(2)
}

/// A triangle given by its three corners, possibly degenerate.
pub type Triangle = [Point; 3];

pub fn triangle_area(t: &Triangle) -> Rational {
    triangle_signed_area(&t[0], &t[1], &t[2]).abs()
}

/// A closed broken line `L_1 … L_n` with `L_{n+1} = L_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BrokenLine {
    pub vertices: Vec<Point>,
}

impl BrokenLine {
    pub fn new(vertices: Vec<Point>) -> Self {
        assert!(!vertices.is_empty(), "broken line needs a vertex");
        BrokenLine { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    /// Side vectors `v_i = L_{i+1} − L_i`, cyclically.
    pub fn sides(&self) -> Vec<Vector> {
        (0..self.len())
            .map(|i| self.vertex(i + 1) - self.vertex(i))
            .collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(Point::is_lattice)
    }

    pub fn reversed(&self) -> BrokenLine {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        BrokenLine { vertices }
    }

    pub fn rotated(&self, k: usize) -> BrokenLine {
        let mut vertices = self.vertices.clone();
        let len = vertices.len();
        vertices.rotate_left(k % len);
        BrokenLine { vertices }
    }

    pub fn scaled(&self, k: &Rational) -> BrokenLine {
        BrokenLine::new(self.vertices.iter().map(|p| p.scale(k)).collect())
    }

    pub fn generalized_area(&self) -> Rational {
        generalized_area(self)
    }
}

/// Signed shoelace area `½ Σ OL_i ∧ OL_{i+1}`; defined for any closed line.
pub fn generalized_area(line: &BrokenLine) -> Rational {
    let twice: Rational = (0..line.len())
        .map(|i| wedge(&line.vertex(i).to_vector(), &line.vertex(i + 1).to_vector()))
        .sum();
    twice / Rational::from(2)
}

/// Where a point sits relative to a closed region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// True iff `p` lies on the closed segment `a b`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let (lo_x, hi_x) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (lo_y, hi_y) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    lo_x <= &p.x && &p.x <= hi_x && lo_y <= &p.y && &p.y <= hi_y
}

/// True iff the closed segments `a b` and `c d` share a point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let d1 = orient(c, d, a).signum();
    let d2 = orient(c, d, b).signum();
    let d3 = orient(a, b, c).signum();
    let d4 = orient(a, b, d).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(a, c, d))
        || (d2 == 0 && on_segment(b, c, d))
        || (d3 == 0 && on_segment(c, a, b))
        || (d4 == 0 && on_segment(d, a, b))
}

/// A simple polygon with pairwise distinct consecutive vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon", into = "RawPolygon")]
pub struct Polygon {
    boundary: BrokenLine,
}

#[derive(Serialize, Deserialize)]
struct RawPolygon {
    vertices: Vec<Point>,
}

impl TryFrom<RawPolygon> for Polygon {
    type Error = Error;
    fn try_from(raw: RawPolygon) -> Result<Self> {
        Polygon::new(raw.vertices)
    }
}

impl From<Polygon> for RawPolygon {
    fn from(p: Polygon) -> Self {
        RawPolygon {
            vertices: p.boundary.vertices,
        }
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices, need at least 3")));
        }
        let line = BrokenLine::new(vertices);
        for i in 0..n {
            if line.vertex(i) == line.vertex(i + 1) {
                return Err(Error::InvalidPolygon(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        for i in 0..n {
            let (a, b) = (line.vertex(i), line.vertex(i + 1));
            // the next edge must not fold back onto this one
            let c = line.vertex(i + 2);
            if on_segment(c, a, b) || on_segment(a, b, c) {
                return Err(Error::InvalidPolygon(format!(
                    "edges {i} and {} overlap",
                    (i + 1) % n
                )));
            }
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_intersect(a, b, line.vertex(j), line.vertex(j + 1)) {
                    return Err(Error::InvalidPolygon(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(Polygon { boundary: line })
    }

    pub fn boundary(&self) -> &BrokenLine {
        &self.boundary
    }

    pub fn vertices(&self) -> &[Point] {
        &self.boundary.vertices
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        (0..self.len()).map(move |i| (self.boundary.vertex(i), self.boundary.vertex(i + 1)))
    }

    pub fn signed_area(&self) -> Rational {
        generalized_area(&self.boundary)
    }

    pub fn area(&self) -> Rational {
        self.signed_area().abs()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area().is_positive()
    }

    pub fn is_lattice(&self) -> bool {
        self.boundary.is_lattice()
    }

    /// Same region traversed counterclockwise.
    pub fn to_ccw(&self) -> Polygon {
        if self.is_ccw() {
            self.clone()
        } else {
            Polygon {
                boundary: self.boundary.reversed(),
            }
        }
    }

    pub fn locate(&self, p: &Point) -> Location {
        if self.edges().any(|(a, b)| on_segment(p, a, b)) {
            return Location::Boundary;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = &a.x + (&p.y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Lower-left and upper-right corners of the bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        let xs = self.vertices().iter().map(|p| &p.x);
        let ys = self.vertices().iter().map(|p| &p.y);
        let min_x = xs.clone().min().unwrap().clone();
        let max_x = xs.max().unwrap().clone();
        let min_y = ys.clone().min().unwrap().clone();
        let max_y = ys.max().unwrap().clone();
        (Point::new(min_x, min_y), Point::new(max_x, max_y))
    }
}

/// Shoelace area of a vertex list, unsigned.
fn ring_area(ring: &[Point]) -> Rational {
    if ring.len() < 3 {
        return Rational::zero();
    }
    let line = BrokenLine::new(ring.to_vec());
    generalized_area(&line).abs()
}

/// Clips a convex `subject` against a convex counterclockwise `clip` ring.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut output = subject.to_vec();
    for i in 0..clip.len() {
        if output.is_empty() {
            break;
        }
        let c1 = &clip[i];
        let c2 = &clip[(i + 1) % clip.len()];
        let input = std::mem::take(&mut output);
        let side: Vec<Rational> = input.iter().map(|p| orient(c1, c2, p)).collect();
        for k in 0..input.len() {
            let (s, e) = (&input[k], &input[(k + 1) % input.len()]);
            let (ds, de) = (&side[k], &side[(k + 1) % input.len()]);
            let s_in = !ds.is_negative();
            let e_in = !de.is_negative();
            if s_in {
                output.push(s.clone());
            }
            if s_in != e_in && !ds.is_zero() && !de.is_zero() {
                let t = ds / (ds - de);
                output.push(s + &(e - s).scale(&t));
            }
        }
    }
    output
}

fn ccw_triangle(t: &Triangle) -> Vec<Point> {
    if orient(&t[0], &t[1], &t[2]).is_negative() {
        vec![t[0].clone(), t[2].clone(), t[1].clone()]
    } else {
        t.to_vec()
    }
}

/// Exact area of the intersection of two triangles.
pub fn triangle_intersection_area(t1: &Triangle, t2: &Triangle) -> Rational {
    if triangle_area(t1).is_zero() || triangle_area(t2).is_zero() {
        return Rational::zero();
    }
    ring_area(&clip_convex(&ccw_triangle(t1), &ccw_triangle(t2)))
}

/// Exact area of `t ∩ polygon`.
///
/// The polygon is split into a signed fan from its first vertex; each fan
/// triangle is clipped against `t` and the signed pieces are summed.
pub fn triangle_polygon_intersection_area(t: &Triangle, polygon: &Polygon) -> Rational {
    if triangle_area(t).is_zero() {
        return Rational::zero();
    }
    let v = polygon.vertices();
    let subject = ccw_triangle(t);
    let mut total = Rational::zero();
    for i in 1..v.len() - 1 {
        let fan: Triangle = [v[0].clone(), v[i].clone(), v[i + 1].clone()];
        let sign = orient(&fan[0], &fan[1], &fan[2]).signum();
        if sign == 0 {
            continue;
        }
        let piece = ring_area(&clip_convex(&subject, &ccw_triangle(&fan)));
        if sign > 0 {
            total = total + piece;
        } else {
            total = total - piece;
        }
    }
    if polygon.is_ccw() {
        total
    } else {
        -total
    }
}

/// True iff the open interiors of the triangles are disjoint.
pub fn triangles_interior_disjoint(t1: &Triangle, t2: &Triangle) -> bool {
    triangle_intersection_area(t1, t2).is_zero()
}

/// True iff `t` is contained in the closed polygon.
pub fn triangle_inside_polygon(t: &Triangle, polygon: &Polygon) -> bool {
    triangle_polygon_intersection_area(t, polygon) == triangle_area(t)
}

/// Ear-clipping triangulation. `pick` chooses among the indices (into the
/// candidate list) of the current ears, which lets callers randomize.
/// Returns `None` if at some stage no ear is found, which can happen when
/// a vertex lies exactly on a would-be diagonal.
pub fn triangulate_by_ears(
    polygon: &Polygon,
    mut pick: impl FnMut(usize) -> usize,
) -> Option<Vec<Triangle>> {
    let ccw = polygon.to_ccw();
    let mut ring: Vec<Point> = ccw.vertices().to_vec();
    let mut out = Vec::with_capacity(ring.len() - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let ears: Vec<usize> = (0..m)
            .filter(|&i| {
                let (a, b, c) = (&ring[(i + m - 1) % m], &ring[i], &ring[(i + 1) % m]);
                if !orient(a, b, c).is_positive() {
                    return false;
                }
                let tri = [a.clone(), b.clone(), c.clone()];
                ring.iter().all(|p| {
                    p == a || p == b || p == c || !point_in_closed_triangle(p, &tri)
                })
            })
            .collect();
        if ears.is_empty() {
            return None;
        }
        let i = ears[pick(ears.len()) % ears.len()];
        let m = ring.len();
        out.push([
            ring[(i + m - 1) % m].clone(),
            ring[i].clone(),
            ring[(i + 1) % m].clone(),
        ]);
        ring.remove(i);
    }
    if orient(&ring[0], &ring[1], &ring[2]).is_zero() {
        return None;
    }
    out.push([ring[0].clone(), ring[1].clone(), ring[2].clone()]);
    Some(out)
}

pub fn point_in_closed_triangle(p: &Point, t: &Triangle) -> bool {
    let s = orient(&t[0], &t[1], &t[2]).signum();
    if s == 0 {
        return on_segment(p, &t[0], &t[1])
            || on_segment(p, &t[1], &t[2])
            || on_segment(p, &t[0], &t[2]);
    }
    (0..3).all(|k| orient(&t[k], &t[(k + 1) % 3], p).signum() * s >= 0)
}
