//! Cuts of a polygon into triangles: exact validation, the equal-area
//! check, and the boundary-degree check for cuts whose pieces all have
//! areas of nonnegative 2-adic valuation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coloring::AffineMap;
use crate::cycles::degree_of_line;
use crate::dyadic::{val2, Rational};
use crate::geometry::{
    on_segment, triangle_area, triangle_inside_polygon, triangles_interior_disjoint, BrokenLine,
    Point, Polygon, Triangle,
};

/// A polygon together with a claimed cut into triangles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dissection {
    pub polygon: Polygon,
    pub triangles: Vec<Triangle>,
}

impl Dissection {
    pub fn new(polygon: Polygon, triangles: Vec<Triangle>) -> Self {
        Dissection { polygon, triangles }
    }

    pub fn areas(&self) -> Vec<Rational> {
        self.triangles.iter().map(triangle_area).collect()
    }
}

/// Outcome of [`validate`]: `Ok` or the first violated condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Ok,
    DegenerateTriangle {
        index: usize,
    },
    OverlappingInteriors {
        first: usize,
        second: usize,
    },
    TriangleOutsidePolygon {
        index: usize,
    },
    AreaMismatch {
        sum: Rational,
        #[serde(rename = "polygonArea")]
        polygon_area: Rational,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Ok => "Ok",
            Verdict::DegenerateTriangle { .. } => "DegenerateTriangle",
            Verdict::OverlappingInteriors { .. } => "OverlappingInteriors",
            Verdict::TriangleOutsidePolygon { .. } => "TriangleOutsidePolygon",
            Verdict::AreaMismatch { .. } => "AreaMismatch",
        }
    }
}

/// Checks, in order: positive areas, disjoint interiors, containment, and
/// total area. Triangles may meet with T-junctions.
pub fn validate(d: &Dissection) -> Verdict {
    let areas = d.areas();
    if let Some(index) = areas.iter().position(Rational::is_zero) {
        return Verdict::DegenerateTriangle { index };
    }
    let tris = &d.triangles;
    for i in 0..tris.len() {
        for j in i + 1..tris.len() {
            if !triangles_interior_disjoint(&tris[i], &tris[j]) {
                return Verdict::OverlappingInteriors {
                    first: i,
                    second: j,
                };
            }
        }
    }
    if let Some(index) = tris
        .iter()
        .position(|t| !triangle_inside_polygon(t, &d.polygon))
    {
        return Verdict::TriangleOutsidePolygon { index };
    }
    let sum: Rational = areas.iter().sum();
    let polygon_area = d.polygon.area();
    if sum != polygon_area {
        return Verdict::AreaMismatch { sum, polygon_area };
    }
    Verdict::Ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("triangle areas differ: {areas:?}")]
pub struct UnequalAreas {
    /// Distinct areas, ascending.
    pub areas: Vec<Rational>,
}

/// The common piece area `S/N` when all pieces have equal area.
pub fn equal_area_check(d: &Dissection) -> Result<Rational, UnequalAreas> {
    let distinct: BTreeSet<Rational> = d.areas().into_iter().collect();
    if distinct.len() == 1 {
        Ok(distinct.into_iter().next().unwrap())
    } else {
        Err(UnequalAreas {
            areas: distinct.into_iter().collect(),
        })
    }
}

/// The polygon boundary with every dissection vertex lying on it inserted
/// in order along its edge.
pub fn subdivided_boundary(d: &Dissection) -> BrokenLine {
    let corners: BTreeSet<&Point> = d.triangles.iter().flatten().collect();
    let mut vertices = Vec::new();
    for (a, b) in d.polygon.edges() {
        let dir = b - a;
        let mut inner: Vec<(Rational, &Point)> = corners
            .iter()
            .filter(|&&p| p != a && p != b && on_segment(p, a, b))
            .map(|&p| ((p - a).dot(&dir), p))
            .collect();
        inner.sort();
        vertices.push(a.clone());
        vertices.extend(inner.into_iter().map(|(_, p)| p.clone()));
    }
    BrokenLine::new(vertices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Lemma2Report {
    /// Every piece has `ν2(area) ≥ 0` and the boundary degree is zero.
    Pass { degree: i64 },
    /// Every piece has `ν2(area) ≥ 0` but the degree is not zero. Never
    /// produced by a correct implementation.
    Fail { degree: i64 },
    /// Some pieces have negative valuation; nothing is asserted.
    HypothesisNotMet { offending: Vec<usize> },
}

/// Degree of the subdivided boundary, checked against zero when every
/// piece area has nonnegative valuation.
pub fn lemma2_degree_check(
    d: &Dissection,
    map: &AffineMap,
) -> Result<Lemma2Report, Box<Verdict>> {
    let verdict = validate(d);
    if !verdict.is_ok() {
        return Err(Box::new(verdict));
    }
    let offending: Vec<usize> = d
        .areas()
        .iter()
        .enumerate()
        .filter(|(_, a)| val2(a) < 0)
        .map(|(i, _)| i)
        .collect();
    if !offending.is_empty() {
        return Ok(Lemma2Report::HypothesisNotMet { offending });
    }
    let degree = degree_of_line(&subdivided_boundary(d), map);
    Ok(if degree == 0 {
        Lemma2Report::Pass { degree }
    } else {
        Lemma2Report::Fail { degree }
    })
}
