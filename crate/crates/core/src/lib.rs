//! Exact verification of equidissection obstructions for lattice polygons.
//!
//! Everything here runs on exact rationals. The pieces fit together like so:
//!
//! - [`dyadic`]: rationals and their 2-adic valuation.
//! - [`geometry`]: points, wedge products, generalized area, exact clipping.
//! - [`coloring`]: the three-coloring of the rational plane by coordinate
//!   valuations, pulled back along area-preserving affine maps.
//! - [`cycles`]: degree of a colored closed line in `K3` and the class of a
//!   lattice line in the cycle space of `K4`.
//! - [`dissection`]: validation of cuts into triangles and the degree check
//!   for cuts whose pieces have 2-integral areas.
//! - [`balanced`]: edge pairings, the side-permutation action and the
//!   certificate that a balanced lattice polygon of odd area has no odd
//!   equal-area cut.
//! - [`search`]: a bounded exhaustive search for equal-area cuts on grids.
//! - [`tropical`]: momentum maps and the agreement check between the
//!   momentum-region coloring and the valuation coloring.
//! - [`sampling`]: seeded random generators used by the test sweeps.

pub mod balanced;
pub mod coloring;
pub mod cycles;
pub mod dissection;
pub mod dyadic;
pub mod geometry;
pub mod sampling;
pub mod search;
pub mod tropical;

pub use balanced::{certify, pair_edges, Certificate, Conclusion, EdgePairing};
pub use coloring::{color, color_under, AffineMap, Color};
pub use cycles::{class_of_lattice_line, degree_of_line, K4Class, MuDecomposition};
pub use dissection::{validate, Dissection, Verdict};
pub use dyadic::{val2, Rational, Valuation};
pub use geometry::{BrokenLine, Point, Polygon, Vector};

/// Errors raised by precondition failures across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vertex {index} is not a lattice point")]
    NotLattice { index: usize },
    #[error("edge vector is not a cycle")]
    NotACycle,
    #[error("class {0:?} has odd coordinate sum and is not in the index-2 subgroup")]
    NotInSubgroup([i64; 3]),
    #[error("points do not form a parallelogram")]
    NotParallelogram,
    #[error("point has a zero coordinate")]
    ZeroCoordinate,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid affine map: {0}")]
    InvalidMap(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("index {index} out of range for {len} sides")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid projective point: all coordinates are zero")]
    ZeroProjectivePoint,
    #[error("invalid search space: {0}")]
    InvalidSearch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
