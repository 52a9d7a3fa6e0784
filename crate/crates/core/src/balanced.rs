//! Balanced polygons, the side-permutation action on closed broken lines,
//! and the certificate that a balanced lattice polygon of odd integer area
//! has no cut into an odd number of equal-area triangles.
//!
//! Side indices are zero-based throughout: side `i` runs from vertex `i`
//! to vertex `i + 1`.

use serde::{Deserialize, Serialize};

use crate::cycles::{class_of_lattice_line, decompose_mu, K4Class, MuDecomposition};
use crate::dyadic::Rational;
use crate::geometry::{generalized_area, wedge, BrokenLine, Point, Polygon, Vector};
use crate::{Error, Result};

/// A perfect matching of side indices into opposite, equal sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgePairing {
    pub pairs: Vec<(usize, usize)>,
}

impl EdgePairing {
    /// Checks the matching against the side vectors of `line`.
    pub fn is_valid_for(&self, line: &BrokenLine) -> bool {
        let sides = line.sides();
        let mut used = vec![false; sides.len()];
        for &(a, b) in &self.pairs {
            if a >= sides.len() || b >= sides.len() || a == b || used[a] || used[b] {
                return false;
            }
            used[a] = true;
            used[b] = true;
            if sides[b] != -&sides[a] {
                return false;
            }
        }
        used.iter().all(|&u| u)
    }
}

/// Pairs each side with the lowest-indexed unused side carrying the
/// opposite vector. `None` when no pairing exists.
pub fn pair_edges(polygon: &Polygon) -> Option<EdgePairing> {
    pair_sides(polygon.boundary())
}

pub fn pair_sides(line: &BrokenLine) -> Option<EdgePairing> {
    let sides = line.sides();
    if !sides.len().is_multiple_of(2) {
        return None;
    }
    let mut partner: Vec<Option<usize>> = vec![None; sides.len()];
    let mut pairs = Vec::with_capacity(sides.len() / 2);
    for i in 0..sides.len() {
        if partner[i].is_some() {
            continue;
        }
        let target = -&sides[i];
        let j = (i + 1..sides.len()).find(|&j| partner[j].is_none() && sides[j] == target)?;
        partner[i] = Some(j);
        partner[j] = Some(i);
        pairs.push((i, j));
    }
    Some(EdgePairing { pairs })
}

/// A permutation of `0..n`, stored as the image of each index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The adjacent transposition `(i, i+1)`.
    pub fn transposition(n: usize, i: usize) -> Result<Self> {
        if i + 1 >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, i + 1);
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// Writes the permutation as a product of adjacent transpositions,
    /// listed in the order they are applied.
    pub fn adjacent_transpositions(&self) -> Vec<usize> {
        // bubble sort the target positions; each swap is one τ_k
        let mut order: Vec<usize> = self.0.clone();
        let mut swaps = Vec::new();
        let n = order.len();
        for pass in 0..n {
            for k in 0..n.saturating_sub(pass + 1) {
                if order[k] > order[k + 1] {
                    order.swap(k, k + 1);
                    swaps.push(k);
                }
            }
        }
        swaps
    }
}

/// `σ(L)`: starts at `L_1` and walks the sides in the permuted order, side
/// `k` of the result being side `σ⁻¹(k)` of `L`.
pub fn apply_permutation(line: &BrokenLine, sigma: &Permutation) -> Result<BrokenLine> {
    let n = line.len();
    if sigma.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "permutation of {} indices applied to {n} sides",
            sigma.len()
        )));
    }
    let sides = line.sides();
    let inv = sigma.inverse();
    let mut vertices = Vec::with_capacity(n);
    let mut cursor = line.vertex(0).clone();
    for k in 0..n {
        vertices.push(cursor.clone());
        cursor = &cursor + &sides[inv.image(k)];
    }
    debug_assert_eq!(&cursor, line.vertex(0));
    Ok(BrokenLine::new(vertices))
}

/// `τ_i(L)`: swaps sides `i` and `i + 1`.
pub fn apply_transposition(line: &BrokenLine, i: usize) -> Result<BrokenLine> {
    apply_permutation(line, &Permutation::transposition(line.len(), i)?)
}

/// The parallelogram `L_i, L_{i+1}, L_{i+2}, L_i + v_{i+1}` swept by `τ_i`.
pub fn transposition_parallelogram(line: &BrokenLine, i: usize) -> [Point; 4] {
    let sides = line.sides();
    [
        line.vertex(i).clone(),
        line.vertex(i + 1).clone(),
        line.vertex(i + 2).clone(),
        line.vertex(i) + &sides[(i + 1) % line.len()],
    ]
}

/// `⟨L⟩ − ⟨τ_i(L)⟩`, checked against the class of the swept parallelogram.
pub fn transposition_class_delta(line: &BrokenLine, i: usize) -> Result<K4Class> {
    let before = class_of_lattice_line(line)?;
    let after = class_of_lattice_line(&apply_transposition(line, i)?)?;
    let delta = before - after;
    let para = BrokenLine::new(transposition_parallelogram(line, i).to_vec());
    let expected = class_of_lattice_line(&para)?;
    assert_eq!(delta, expected, "transposition class identity fails at side {i}");
    Ok(delta)
}

/// Change of the area convention used by the balanced-polygon argument,
/// which orients boundaries clockwise: `−` [`generalized_area`].
pub fn clockwise_area(line: &BrokenLine) -> Rational {
    -generalized_area(line)
}

/// `clockwise_area(τ_i L) = clockwise_area(L) − v_{i+1} ∧ v_i`.
pub fn transposition_area_change(line: &BrokenLine, i: usize) -> Rational {
    let sides = line.sides();
    -wedge(&sides[(i + 1) % sides.len()], &sides[i])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelogramClass {
    pub class: K4Class,
    pub area: Rational,
}

/// Class of a lattice parallelogram `p0 p1 p2 p3`; asserts that even area
/// gives the zero class and odd area one of the six odd classes.
pub fn parallelogram_class(corners: &[Point; 4]) -> Result<ParallelogramClass> {
    if &corners[1] - &corners[0] != &corners[2] - &corners[3] {
        return Err(Error::NotParallelogram);
    }
    let line = BrokenLine::new(corners.to_vec());
    let class = class_of_lattice_line(&line)?;
    let area = generalized_area(&line).abs();
    let odd = area
        .integer_is_odd()
        .expect("lattice parallelogram has integer area");
    if odd {
        assert!(
            K4Class::odd_parallelogram_classes().contains(&class),
            "odd parallelogram {corners:?} has class {class:?}"
        );
    } else {
        assert!(class.is_zero(), "even parallelogram {corners:?} has class {class:?}");
    }
    Ok(ParallelogramClass { class, area })
}

/// The permutation sending `α_1, β_1, α_2, β_2, …` to `0, 1, 2, 3, …`, which
/// makes every side followed by its opposite.
pub fn sorting_permutation(pairing: &EdgePairing, n: usize) -> Result<Permutation> {
    let mut images = vec![usize::MAX; n];
    for (k, &(a, b)) in pairing.pairs.iter().enumerate() {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                len: n,
            });
        }
        images[a] = 2 * k;
        images[b] = 2 * k + 1;
    }
    Permutation::new(images)
}

/// Names of the facts a certificate relies on, as they appear in traces.
pub mod trace_refs {
    /// Rainbow triangles have area of negative 2-adic valuation.
    pub const RAINBOW_AREA: &str = "rainbow-area-valuation";
    /// A cut into pieces of 2-integral area has boundary degree zero.
    pub const DEGREE_VANISHES: &str = "boundary-degree-vanishes";
    /// Such a cut of a lattice polygon kills the boundary class in H1(K4).
    pub const LATTICE_CLASS: &str = "lattice-class-vanishes";
    /// Lattice parallelograms: even area gives class 0, odd area one of six.
    pub const PARALLELOGRAM: &str = "parallelogram-class";
    /// Balanced lattice boundaries: class in the index-2 subgroup and
    /// area ≡ μ1+μ2+μ3 (mod 2).
    pub const BALANCED_PARITY: &str = "balanced-class-parity";
    /// No odd equal-area cut of a balanced lattice polygon of odd area.
    pub const ODD_BALANCED: &str = "odd-balanced-obstruction";
}

/// Why the certificate does not apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum NotApplicableReason {
    NotLattice,
    Unbalanced,
    NonIntegerArea,
    EvenArea,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "reason")]
pub enum Conclusion {
    NoOddEquidissection,
    NotApplicable(NotApplicableReason),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub polygon: Polygon,
    pub is_lattice: bool,
    pub pairing: Option<EdgePairing>,
    pub area: Rational,
    pub class_lambda: Option<K4Class>,
    pub mu: Option<MuDecomposition>,
    /// `|area| ≡ μ1 + μ2 + μ3 (mod 2)`, when both sides are defined.
    pub parity_consistent: Option<bool>,
    pub conclusion: Conclusion,
    pub proof_trace: Vec<String>,
    pub trace_refs: Vec<String>,
}

impl Certificate {
    pub fn is_positive(&self) -> bool {
        self.conclusion == Conclusion::NoOddEquidissection
    }
}

/// Runs the chain lattice check → pairing → area → class → μ → parity and
/// concludes `NoOddEquidissection` for balanced lattice polygons of odd
/// integer area.
pub fn certify(polygon: &Polygon) -> Certificate {
    let mut trace = Vec::new();
    let area = polygon.area();
    let is_lattice = polygon.is_lattice();
    let pairing = pair_edges(polygon);

    let class_lambda = class_of_lattice_line(polygon.boundary()).ok();
    let mu = class_lambda.and_then(|c| decompose_mu(c).ok());
    let parity_consistent = match (&mu, area.integer_is_odd()) {
        (Some(mu), Some(odd)) if pairing.is_some() => Some((mu.sum().rem_euclid(2) == 1) == odd),
        _ => None,
    };

    let conclusion = 'verdict: {
        if !is_lattice {
            trace.push("a vertex has a non-integer coordinate; the lattice hypothesis fails".into());
            break 'verdict Conclusion::NotApplicable(NotApplicableReason::NotLattice);
        }
        trace.push("all vertices are lattice points".into());
        let Some(pairing) = &pairing else {
            trace.push("side vectors do not pair off into opposite couples".into());
            break 'verdict Conclusion::NotApplicable(NotApplicableReason::Unbalanced);
        };
        trace.push(format!("balanced: sides pair as {:?}", pairing.pairs));
        let Some(odd) = area.integer_is_odd() else {
            trace.push(format!("area {area} is not an integer"));
            break 'verdict Conclusion::NotApplicable(NotApplicableReason::NonIntegerArea);
        };
        if !odd {
            trace.push(format!("area {area} is even"));
            break 'verdict Conclusion::NotApplicable(NotApplicableReason::EvenArea);
        }
        trace.push(format!("area {area} is an odd integer"));
        let lambda = class_lambda.expect("lattice boundary has a class");
        trace.push(format!(
            "[{}] class of the boundary in H1(K4) is λ = {:?}",
            trace_refs::LATTICE_CLASS,
            lambda.0
        ));
        match mu {
            Some(mu) => trace.push(format!(
                "[{}] λ lies in the index-2 subgroup with μ = {:?}, μ1+μ2+μ3 = {}",
                trace_refs::BALANCED_PARITY,
                mu.0,
                mu.sum()
            )),
            None => trace.push(format!(
                "[{}] λ has odd coordinate sum (inconsistent)",
                trace_refs::BALANCED_PARITY
            )),
        }
        trace.push(format!(
            "[{}] area ≡ μ1+μ2+μ3 (mod 2) {}",
            trace_refs::BALANCED_PARITY,
            if parity_consistent == Some(true) { "holds" } else { "FAILS" }
        ));
        trace.push(format!(
            "[{}] a cut into N odd equal pieces has piece area S/N with ν2(S/N) = 0, so the boundary degree vanishes under E, U and V",
            trace_refs::DEGREE_VANISHES
        ));
        trace.push(format!(
            "[{}] vanishing degrees force λ = 0, hence μ = 0",
            trace_refs::LATTICE_CLASS
        ));
        trace.push(format!(
            "[{}] then area ≡ 0 (mod 2), contradicting odd area",
            trace_refs::ODD_BALANCED
        ));
        Conclusion::NoOddEquidissection
    };

    Certificate {
        polygon: polygon.clone(),
        is_lattice,
        pairing,
        area,
        class_lambda,
        mu,
        parity_consistent,
        trace_refs: if conclusion == Conclusion::NoOddEquidissection {
            [
                trace_refs::LATTICE_CLASS,
                trace_refs::BALANCED_PARITY,
                trace_refs::DEGREE_VANISHES,
                trace_refs::ODD_BALANCED,
            ]
            .map(String::from)
            .to_vec()
        } else {
            Vec::new()
        },
        conclusion,
        proof_trace: trace,
    }
}

/// Vector sum of a side list, zero for a closed line.
pub fn side_sum(sides: &[Vector]) -> Vector {
    sides.iter().fold(Vector::zero(), |acc, v| &acc + v)
}
