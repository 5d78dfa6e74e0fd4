//! Integer linear functionals dual to chain bases, boundary facets of the fan
//! of pure diagrams, and cone membership.
//!
//! For consecutive chain elements `p0 < p1 < p2` the coefficient of `p1` in
//! the chain expansion of a diagram is a functional
//! `sum_i sum_{d <= d_i(p0)} (-1)^i c prod_{j in J} (d_j - d) beta_{i,d}`
//! where the constant `c` and the index set `J` depend on how `p1` differs
//! from its neighbours (a codimension drop or a raised column on either
//! side). Above the codimension of `p0` the sum runs to the window ceiling.
//! When the cell leaving `p1` is absent from `p0` (or `p1` is the chain
//! minimum) the functional collapses to a single scaled Betti number.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{
    codimension, hk_residuals, pure_diagram, window_of, BettiDiagram, CoreError, DegreeSequence,
    Rational,
};
use crate::poset::{chain_length, maximal_chains, Chain, PosetError, Step, Window};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionalError {
    #[error("anchors do not form consecutive cover relations around {0}")]
    NotACoverTriple(DegreeSequence),
    #[error("diagram does not fit the window: {0}")]
    WindowMismatch(String),
    #[error("diagram violates the Herzog-Kuhl equations of the window (residuals {0:?})")]
    NotInSubspace(Vec<String>),
    #[error("chain is not a maximal chain with one element removed: {0}")]
    NotAFacet(String),
    #[error("window has {diagrams} pure diagrams, above the limit of {limit}")]
    WindowTooLarge { diagrams: u128, limit: u128 },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A neighbour of the centre element, or a sentinel past either end of a
/// maximal chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    Bottom,
    Element(DegreeSequence),
    Top,
}

impl Anchor {
    pub fn element(&self) -> Option<&DegreeSequence> {
        match self {
            Anchor::Element(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::Bottom => f.write_str("bottom"),
            Anchor::Top => f.write_str("top"),
            Anchor::Element(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Anchor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Anchor::Bottom => s.serialize_str("bottom"),
            Anchor::Top => s.serialize_str("top"),
            Anchor::Element(d) => d.degrees().serialize(s),
        }
    }
}

/// Which closed form produced a functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalCase {
    /// Single Betti number scaled by `1 / pi(d)_{i,d_i}`.
    Indicator,
    /// Codimension drop below, raised column above.
    First,
    /// Raised column below, codimension drop above.
    Second,
    /// Raised columns on both sides, in different columns.
    Third,
    /// Codimension drops on both sides.
    Fourth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    Interior,
    #[serde(rename = "kind_i_extremal")]
    Extremal,
    #[serde(rename = "kind_ii_same_column_twice")]
    SameColumnTwice,
    #[serde(rename = "kind_iii_adjacent_columns")]
    AdjacentColumns,
    #[serde(rename = "kind_iv_codim_twice")]
    CodimTwice,
}

impl FacetKind {
    pub fn is_boundary(self) -> bool {
        self != FacetKind::Interior
    }
}

/// Integer functional `b -> sum c_{i,j} beta_{i,j}` over a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    window: Window,
    lower: Anchor,
    center: DegreeSequence,
    upper: Anchor,
    case: FunctionalCase,
    coefficients: BTreeMap<(usize, i64), BigInt>,
}

impl Functional {
    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn case(&self) -> FunctionalCase {
        self.case
    }

    pub fn anchors(&self) -> (&Anchor, &DegreeSequence, &Anchor) {
        (&self.lower, &self.center, &self.upper)
    }

    pub fn coefficient(&self, i: usize, j: i64) -> BigInt {
        self.coefficients.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero coefficients as `(i, j, c)`.
    pub fn coefficients(&self) -> impl Iterator<Item = (usize, i64, &BigInt)> {
        self.coefficients.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Coefficients laid out like a Betti table: `grid[r][i]` is the
    /// coefficient of `beta_{i, M+r+i}`.
    pub fn grid(&self) -> Vec<Vec<BigInt>> {
        let w = &self.window;
        (0..=w.height())
            .map(|r| {
                (0..=w.n())
                    .map(|i| self.coefficient(i, w.low() + (r + i) as i64))
                    .collect()
            })
            .collect()
    }
}

fn neg_if_odd(i: usize, v: BigInt) -> BigInt {
    if i % 2 == 1 {
        -v
    } else {
        v
    }
}

/// The functional giving the coefficient of `center` in any chain basis in
/// which `lower < center < upper` are consecutive.
pub fn coefficient_functional(
    lower: &Anchor,
    center: &DegreeSequence,
    upper: &Anchor,
    w: &Window,
) -> Result<Functional, FunctionalError> {
    let bad = || FunctionalError::NotACoverTriple(center.clone());
    if !w.contains(center) {
        return Err(bad());
    }
    let incoming = match lower {
        Anchor::Bottom if *center == w.minimum() => None,
        Anchor::Element(p) => Some(w.step_between(p, center).ok_or_else(bad)?),
        _ => return Err(bad()),
    };
    let outgoing = match upper {
        Anchor::Top if *center == w.maximum() => Step::Drop,
        Anchor::Element(q) => w.step_between(center, q).ok_or_else(bad)?,
        _ => return Err(bad()),
    };

    let d = center.degrees();
    let m = center.codim();
    let out_col = match outgoing {
        Step::Raise(k) => k,
        Step::Drop => m,
    };

    let mut coefficients = BTreeMap::new();
    let indicator = match incoming {
        None => true,
        Some(Step::Raise(l)) => l == out_col,
        Some(Step::Drop) => false,
    };
    if indicator {
        let di = d[out_col];
        let prod: BigInt = d
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != out_col)
            .map(|(_, &dj)| BigInt::from(dj - di))
            .product();
        coefficients.insert((out_col, di), neg_if_odd(out_col, prod));
        return Ok(Functional {
            window: *w,
            lower: lower.clone(),
            center: center.clone(),
            upper: upper.clone(),
            case: FunctionalCase::Indicator,
            coefficients,
        });
    }

    let (case, constant, skip): (FunctionalCase, i64, Vec<usize>) = match (incoming, outgoing) {
        (Some(Step::Drop), Step::Raise(k)) => (FunctionalCase::First, 1, vec![k]),
        (Some(Step::Raise(l)), Step::Drop) => (FunctionalCase::Second, d[l] - d[m], vec![l, m]),
        (Some(Step::Raise(l)), Step::Raise(k)) => (FunctionalCase::Third, d[l] - d[k], vec![k, l]),
        (Some(Step::Drop), Step::Drop) => (FunctionalCase::Fourth, 1, vec![m]),
        (None, _) => unreachable!("bottom anchor handled as indicator"),
    };
    let roots: Vec<i64> = d
        .iter()
        .enumerate()
        .filter(|(j, _)| !skip.contains(j))
        .map(|(_, &dj)| dj)
        .collect();
    let floor = lower.element().expect("non-indicator cases have a lower element");
    for i in 0..=w.n() {
        let top = floor.get(i).unwrap_or(w.high() + i as i64);
        for deg in (w.low() + i as i64)..=top {
            let prod: BigInt = roots.iter().map(|&r| BigInt::from(r - deg)).product();
            let c = neg_if_odd(i, prod * constant);
            if !c.is_zero() {
                coefficients.insert((i, deg), c);
            }
        }
    }
    Ok(Functional {
        window: *w,
        lower: lower.clone(),
        center: center.clone(),
        upper: upper.clone(),
        case,
        coefficients,
    })
}

pub fn evaluate(f: &Functional, b: &BettiDiagram) -> Rational {
    let mut acc = Rational::zero();
    if b.nnz() <= f.coefficients.len() {
        for (i, j, v) in b.entries() {
            if let Some(c) = f.coefficients.get(&(i, j)) {
                acc += v * Rational::from_integer(c.clone());
            }
        }
    } else {
        for (&(i, j), c) in &f.coefficients {
            acc += b.get(i, j) * Rational::from_integer(c.clone());
        }
    }
    acc
}

/// Functional of the `index`-th element of a maximal chain.
pub fn chain_functional(c: &Chain, index: usize) -> Result<Functional, FunctionalError> {
    let el = c.elements();
    let lower = if index == 0 {
        Anchor::Bottom
    } else {
        Anchor::Element(el[index - 1].clone())
    };
    let upper = el
        .get(index + 1)
        .map_or(Anchor::Top, |d| Anchor::Element(d.clone()));
    coefficient_functional(&lower, &el[index], &upper, c.window())
}

fn check_in_window(b: &BettiDiagram, w: &Window) -> Result<(), FunctionalError> {
    if b.n() != w.n() {
        return Err(FunctionalError::WindowMismatch(format!(
            "diagram has n = {}, window has n = {}",
            b.n(),
            w.n()
        )));
    }
    if let Some((i, j, _)) = b.entries().find(|&(i, j, _)| w.row(i, j).is_none()) {
        return Err(FunctionalError::WindowMismatch(format!(
            "entry ({i}, {j}) lies outside rows {}..={}",
            w.low(),
            w.high()
        )));
    }
    Ok(())
}

fn check_in_subspace(b: &BettiDiagram, w: &Window) -> Result<(), FunctionalError> {
    let res = hk_residuals(b, w.min_codim());
    if res.iter().any(|r| !r.is_zero()) {
        return Err(FunctionalError::NotInSubspace(res.iter().map(|r| r.to_string()).collect()));
    }
    Ok(())
}

/// Coordinates of `b` in the basis given by a maximal chain, found by peeling
/// chain elements from the bottom: the cell removed when leaving the `k`-th
/// element is zero in every later element.
pub fn expand_in_chain(b: &BettiDiagram, c: &Chain) -> Result<Vec<Rational>, FunctionalError> {
    let w = *c.window();
    if !c.is_maximal() {
        return Err(PosetError::ChainNotMaximal.into());
    }
    check_in_window(b, &w)?;
    check_in_subspace(b, &w)?;

    let mut residual = b.clone();
    let mut coords = Vec::with_capacity(c.len());
    let el = c.elements();
    for (k, d) in el.iter().enumerate() {
        let step = match el.get(k + 1) {
            Some(next) => w.step_between(d, next).expect("maximal chain"),
            None => Step::Drop,
        };
        let (_, col) = w.removed_cell(d, step);
        let pivot = d.pure_entry(col);
        let lambda = residual.get(col, d.degrees()[col]) / pivot;
        let p = pure_diagram(d, w.n())?;
        residual.add_scaled(&-lambda.clone(), p.diagram());
        coords.push(lambda);
    }
    if !residual.is_zero() {
        let res = hk_residuals(&residual, w.min_codim() + 1);
        return Err(FunctionalError::NotInSubspace(res.iter().map(|r| r.to_string()).collect()));
    }
    Ok(coords)
}

fn kind_from_steps(first: Step, second: Step, center: &DegreeSequence) -> FacetKind {
    match (first, second) {
        (Step::Raise(a), Step::Raise(b)) if a == b => FacetKind::SameColumnTwice,
        (Step::Raise(a), Step::Drop) if a == center.codim() => FacetKind::SameColumnTwice,
        (Step::Raise(_), Step::Raise(_)) => FacetKind::AdjacentColumns,
        (Step::Drop, Step::Drop) => FacetKind::CodimTwice,
        // a drop next to a raise in another column can always be swapped
        _ => unreachable!("unique middle element after {first:?} then {second:?}"),
    }
}

/// Elements `x` with `a < x < b` both covers.
fn middles(w: &Window, a: &DegreeSequence, b: &DegreeSequence) -> Vec<(Step, DegreeSequence, Step)> {
    w.upper_covers(a)
        .into_iter()
        .filter_map(|(s1, x)| w.step_between(&x, b).map(|s2| (s1, x, s2)))
        .collect()
}

/// Kind of the face obtained by removing `center` between `lower` and `upper`.
pub fn classify_triple(
    w: &Window,
    lower: &Anchor,
    center: &DegreeSequence,
    upper: &Anchor,
) -> Result<FacetKind, FunctionalError> {
    let (a, b) = match (lower, upper) {
        (Anchor::Element(a), Anchor::Element(b)) => (a, b),
        _ => return Ok(FacetKind::Extremal),
    };
    let mids = middles(w, a, b);
    match mids.as_slice() {
        [] => Err(FunctionalError::NotACoverTriple(center.clone())),
        [(s1, x, s2)] if x == center => Ok(kind_from_steps(*s1, *s2, center)),
        [_] => Err(FunctionalError::NotACoverTriple(center.clone())),
        _ => Ok(FacetKind::Interior),
    }
}

/// Classifies a maximal chain with one element removed.
pub fn classify_facet(c: &Chain) -> Result<FacetKind, FunctionalError> {
    let w = *c.window();
    let expected = chain_length(&w) - 1;
    if c.len() != expected {
        return Err(FunctionalError::NotAFacet(format!(
            "{} elements, expected {expected}",
            c.len()
        )));
    }
    let el = c.elements();
    let steps = c.steps();
    let gaps: Vec<usize> = (0..steps.len()).filter(|&k| steps[k].is_none()).collect();
    let starts_at_min = el.first() == Some(&w.minimum());
    let ends_at_max = el.last() == Some(&w.maximum());
    match (starts_at_min, ends_at_max, gaps.as_slice()) {
        _ if el.is_empty() => Ok(FacetKind::Extremal),
        (false, true, []) | (true, false, []) => Ok(FacetKind::Extremal),
        (true, true, [g]) => {
            let mids = middles(&w, &el[*g], &el[*g + 1]);
            match mids.as_slice() {
                [] => Err(FunctionalError::NotAFacet(format!("no element fits between positions {g} and {}", g + 1))),
                [(s1, x, s2)] => Ok(kind_from_steps(*s1, *s2, x)),
                _ => Ok(FacetKind::Interior),
            }
        }
        _ => Err(FunctionalError::NotAFacet("chain does not extend by exactly one element".into())),
    }
}

/// A boundary facet supporting inequality, identified by the removed element
/// and its two neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetInequality {
    pub lower: Anchor,
    pub removed: DegreeSequence,
    pub upper: Anchor,
    pub kind: FacetKind,
    pub functional: Functional,
}

/// All distinct boundary inequalities of the fan in `w`, found locally from
/// cover triples with a unique middle element plus the chain ends.
pub fn boundary_inequalities(w: &Window) -> Vec<FacetInequality> {
    let mut out = Vec::new();
    let min = w.minimum();
    let max = w.maximum();
    for d in w.sequences() {
        let lowers: Vec<Anchor> = if d == min {
            vec![Anchor::Bottom]
        } else {
            w.lower_covers(&d).into_iter().map(|(_, e)| Anchor::Element(e)).collect()
        };
        let uppers: Vec<Anchor> = if d == max {
            vec![Anchor::Top]
        } else {
            w.upper_covers(&d).into_iter().map(|(_, e)| Anchor::Element(e)).collect()
        };
        for lo in &lowers {
            for up in &uppers {
                let kind = classify_triple(w, lo, &d, up).expect("cover triple");
                if kind.is_boundary() {
                    let functional = coefficient_functional(lo, &d, up, w).expect("cover triple");
                    out.push(FacetInequality {
                        lower: lo.clone(),
                        removed: d.clone(),
                        upper: up.clone(),
                        kind,
                        functional,
                    });
                }
            }
        }
    }
    out
}

/// A boundary facet as a face of a specific maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFacet {
    pub facet: Chain,
    pub removed: DegreeSequence,
    pub kind: FacetKind,
    pub functional: Functional,
}

/// Every boundary facet of the fan, deduplicated, ordered by facet elements.
/// Enumerates maximal chains, so the chain enumeration limit applies.
pub fn boundary_facets(w: &Window) -> Result<Vec<BoundaryFacet>, FunctionalError> {
    let mut seen = BTreeSet::new();
    let mut out = BTreeMap::new();
    for chain in maximal_chains(w)? {
        for k in 0..chain.len() {
            let facet = chain.without(k);
            if !seen.insert(facet.elements().to_vec()) {
                continue;
            }
            let functional = chain_functional(&chain, k)?;
            let (lo, center, up) = functional.anchors();
            let kind = classify_triple(w, lo, center, up)?;
            if kind.is_boundary() {
                out.insert(
                    facet.elements().to_vec(),
                    BoundaryFacet {
                        facet,
                        removed: center.clone(),
                        kind,
                        functional,
                    },
                );
            }
        }
    }
    Ok(out.into_values().collect())
}

/// Number of pure diagrams in a window without listing them.
pub fn count_pure_diagrams(w: &Window) -> u128 {
    let h = w.height() as u128;
    (w.min_codim()..=w.n())
        .map(|s| binomial(h + s as u128 + 1, s as u128 + 1))
        .sum()
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Default cap on pure diagrams for the convexity check.
pub const DEFAULT_CONVEXITY_LIMIT: u128 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityViolation {
    pub lower: Anchor,
    pub removed: DegreeSequence,
    pub upper: Anchor,
    pub kind: FacetKind,
    pub diagram: DegreeSequence,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    pub window: Window,
    pub pass: bool,
    pub facets: usize,
    pub diagrams: usize,
    pub counterexample: Option<ConvexityViolation>,
}

fn first_violation(
    ineq: &FacetInequality,
    diagrams: &[(DegreeSequence, BettiDiagram)],
) -> Option<ConvexityViolation> {
    diagrams.iter().find_map(|(d, p)| {
        let v = evaluate(&ineq.functional, p);
        v.is_negative().then(|| ConvexityViolation {
            lower: ineq.lower.clone(),
            removed: ineq.removed.clone(),
            upper: ineq.upper.clone(),
            kind: ineq.kind,
            diagram: d.clone(),
            value: v,
        })
    })
}

fn convexity_inputs(
    w: &Window,
    limit: u128,
) -> Result<(Vec<FacetInequality>, Vec<(DegreeSequence, BettiDiagram)>), FunctionalError> {
    let count = count_pure_diagrams(w);
    if count > limit {
        return Err(FunctionalError::WindowTooLarge {
            diagrams: count,
            limit,
        });
    }
    let diagrams = w
        .sequences()
        .into_iter()
        .map(|d| {
            let p = pure_diagram(&d, w.n()).expect("window element").into_diagram();
            (d, p)
        })
        .collect();
    Ok((boundary_inequalities(w), diagrams))
}

/// Checks that every boundary inequality is nonnegative on every pure diagram
/// of the window.
pub fn verify_fan_convexity(w: &Window, limit: u128) -> Result<ConvexityReport, FunctionalError> {
    let (ineqs, diagrams) = convexity_inputs(w, limit)?;
    let counterexample = ineqs.iter().find_map(|f| first_violation(f, &diagrams));
    Ok(ConvexityReport {
        window: *w,
        pass: counterexample.is_none(),
        facets: ineqs.len(),
        diagrams: diagrams.len(),
        counterexample,
    })
}

/// Same report as [`verify_fan_convexity`], evaluated on the current rayon
/// pool. The reported counterexample is the first in sequential order.
pub fn verify_fan_convexity_parallel(
    w: &Window,
    limit: u128,
) -> Result<ConvexityReport, FunctionalError> {
    let (ineqs, diagrams) = convexity_inputs(w, limit)?;
    let found: Vec<Option<ConvexityViolation>> = ineqs
        .par_iter()
        .map(|f| first_violation(f, &diagrams))
        .collect();
    let counterexample = found.into_iter().flatten().next();
    Ok(ConvexityReport {
        window: *w,
        pass: counterexample.is_none(),
        facets: ineqs.len(),
        diagrams: diagrams.len(),
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember {
        certificate: Box<FacetInequality>,
        value: Rational,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// Window spanned by a diagram: its rows, its `n`, and its codimension capped
/// at `n`.
pub fn ambient_window(b: &BettiDiagram) -> Result<Window, FunctionalError> {
    let (low, high) = window_of(b)?;
    let s = match codimension(b) {
        Ok(s) => s.min(b.n()),
        Err(CoreError::VanishingNumerator) => b.n(),
        Err(e) => return Err(e.into()),
    };
    Ok(Window::new(b.n(), low, high, s)?)
}

/// Cone membership by evaluating every boundary inequality of `w` on `b`.
/// The first violated inequality, in enumeration order, is the certificate.
pub fn membership_by_inequalities(
    b: &BettiDiagram,
    w: &Window,
) -> Result<Membership, FunctionalError> {
    check_in_window(b, w)?;
    check_in_subspace(b, w)?;
    for ineq in boundary_inequalities(w) {
        let value = evaluate(&ineq.functional, b);
        if value.is_negative() {
            return Ok(Membership::NonMember {
                certificate: Box::new(ineq),
                value,
            });
        }
    }
    Ok(Membership::Member)
}

/// Sum of `lambda_k * pi_k` over a chain, for reconstruction checks.
pub fn combine(c: &Chain, coords: &[Rational]) -> BettiDiagram {
    let mut b = BettiDiagram::zero(c.window().n());
    for (p, l) in c.pure_diagrams().iter().zip(coords) {
        b.add_scaled(l, p.diagram());
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{chain_from_tableau, Tableau};
    use num_traits::One;

    fn seq(d: &[i64]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec()).unwrap()
    }

    fn example_chain() -> Chain {
        let w = Window::new(3, 0, 2, 0).unwrap();
        let t = Tableau::new(vec![vec![10, 4, 3, 1], vec![11, 6, 5, 2], vec![12, 9, 8, 7]]).unwrap();
        chain_from_tableau(&t, &w).unwrap()
    }

    fn grid(f: &Functional) -> Vec<Vec<i64>> {
        f.grid()
            .iter()
            .map(|r| r.iter().map(|c| i64::try_from(c).unwrap()).collect())
            .collect()
    }

    #[test]
    fn second_kind_matrix() {
        let c = example_chain();
        let f = chain_functional(&c, 6).unwrap();
        assert_eq!(f.case(), FunctionalCase::Second);
        assert_eq!(grid(&f), vec![vec![0, -6, 8, -6], vec![0, -8, 6, 0], vec![0, 0, 0, 10]]);
    }

    #[test]
    fn first_kind_matrix() {
        let c = example_chain();
        let f = chain_functional(&c, 9).unwrap();
        assert_eq!(f.case(), FunctionalCase::First);
        assert_eq!(grid(&f), vec![vec![1, -1, 1, -1], vec![0, -1, 1, -1], vec![0, -1, 1, -1]]);
        let f = chain_functional(&c, 8).unwrap();
        assert_eq!(f.case(), FunctionalCase::Fourth);
        assert_eq!(grid(&f), vec![vec![0, 1, -2, 3], vec![0, 2, -3, 4], vec![0, 3, -4, 5]]);
    }

    #[test]
    fn rejects_non_cover_triple() {
        let w = Window::new(3, 0, 2, 0).unwrap();
        let r = coefficient_functional(
            &Anchor::Element(seq(&[0, 1, 2, 3])),
            &seq(&[0, 1, 2, 5]),
            &Anchor::Top,
            &w,
        );
        assert_eq!(r, Err(FunctionalError::NotACoverTriple(seq(&[0, 1, 2, 5]))));
        let r = coefficient_functional(&Anchor::Bottom, &seq(&[0, 1, 2, 4]), &Anchor::Top, &w);
        assert!(r.is_err());
    }

    #[test]
    fn zero_diagram_evaluates_to_zero() {
        let c = example_chain();
        for k in 0..c.len() {
            let f = chain_functional(&c, k).unwrap();
            assert!(evaluate(&f, &BettiDiagram::zero(3)).is_zero());
        }
    }

    #[test]
    fn unit_vectors_expand_to_themselves() {
        let c = example_chain();
        for (k, p) in c.pure_diagrams().iter().enumerate() {
            let coords = expand_in_chain(p.diagram(), &c).unwrap();
            for (j, v) in coords.iter().enumerate() {
                assert_eq!(v.is_one(), j == k);
                assert!(j == k || v.is_zero());
            }
        }
    }

    #[test]
    fn expand_errors() {
        let c = example_chain();
        let outside = BettiDiagram::from_ints(3, &[(0, 3, 1)]).unwrap();
        assert!(matches!(expand_in_chain(&outside, &c), Err(FunctionalError::WindowMismatch(_))));
        let wrong_n = BettiDiagram::from_ints(2, &[(0, 0, 1)]).unwrap();
        assert!(matches!(expand_in_chain(&wrong_n, &c), Err(FunctionalError::WindowMismatch(_))));

        let w1 = Window::new(2, 0, 1, 1).unwrap();
        let chain = crate::poset::maximal_chains(&w1).unwrap().next().unwrap();
        let generator = BettiDiagram::from_ints(2, &[(0, 0, 1)]).unwrap();
        assert!(matches!(expand_in_chain(&generator, &chain), Err(FunctionalError::NotInSubspace(_))));
    }

    #[test]
    fn classify_on_small_window() {
        let w = Window::new(2, 0, 1, 0).unwrap();
        let chain = Chain::new(
            w,
            vec![seq(&[0, 1, 2]), seq(&[0, 1, 3]), seq(&[0, 1]), seq(&[0, 2]), seq(&[0]), seq(&[1])],
        )
        .unwrap();
        assert!(chain.is_maximal());
        let kinds: Vec<_> = (0..chain.len()).map(|k| classify_facet(&chain.without(k)).unwrap()).collect();
        assert_eq!(
            kinds,
            vec![
                FacetKind::Extremal,
                FacetKind::SameColumnTwice,
                FacetKind::Interior,
                FacetKind::SameColumnTwice,
                FacetKind::Interior,
                FacetKind::Extremal,
            ]
        );
        assert!(classify_facet(&chain).is_err());
    }

    #[test]
    fn single_diagram_window() {
        let w = Window::new(0, 2, 2, 0).unwrap();
        let facets = boundary_facets(&w).unwrap();
        assert_eq!(facets.len(), 1);
        assert_eq!(facets[0].kind, FacetKind::Extremal);
        assert!(facets[0].facet.is_empty());
        let report = verify_fan_convexity(&w, DEFAULT_CONVEXITY_LIMIT).unwrap();
        assert!(report.pass);
        assert_eq!(report.diagrams, 1);
    }

    #[test]
    fn pure_counts() {
        for (n, m, big_n, s) in [(2, 0, 1, 0), (3, -1, 2, 1), (4, 0, 3, 2), (0, 0, 0, 0)] {
            let w = Window::new(n, m, big_n, s).unwrap();
            assert_eq!(count_pure_diagrams(&w), w.sequences().len() as u128);
        }
    }

    #[test]
    fn convexity_guard() {
        let w = Window::new(3, 0, 2, 0).unwrap();
        assert!(matches!(
            verify_fan_convexity(&w, 3),
            Err(FunctionalError::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let w = Window::new(3, 0, 2, 1).unwrap();
        assert_eq!(
            verify_fan_convexity(&w, DEFAULT_CONVEXITY_LIMIT).unwrap(),
            verify_fan_convexity_parallel(&w, DEFAULT_CONVEXITY_LIMIT).unwrap()
        );
    }

    #[test]
    fn membership_of_pure_diagram() {
        let d = seq(&[0, 2, 3, 5]);
        let p = pure_diagram(&d, 3).unwrap();
        let w = ambient_window(p.diagram()).unwrap();
        assert_eq!(w, Window::new(3, 0, 2, 3).unwrap());
        assert!(membership_by_inequalities(p.diagram(), &w).unwrap().is_member());
    }
}
