//! Hilbert series, multiplicity and the shift bounds on multiplicity.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{
    codimension, normalize, numerator_polynomial, pure_diagram, BettiDiagram, CoreError,
    DegreeSequence, NormalizedPureDiagram, Rational,
};
use crate::poly::LaurentPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("generators sit in several degrees: {0:?}")]
    NotSingleDegreeGenerated(Vec<i64>),
    #[error("column {0} is empty below the projective dimension")]
    EmptyColumn(usize),
    #[error("elements {0} and {1} of the sequence are not weakly increasing")]
    NotAChain(usize, usize),
    #[error("diagrams live over different numbers of variables")]
    AmbientMismatch,
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// `numerator / (1 - t)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    numerator: LaurentPolynomial,
    n: usize,
}

impl HilbertSeries {
    pub fn new(numerator: LaurentPolynomial, n: usize) -> Self {
        Self { numerator, n }
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.numerator
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same rational function with common factors of `1 - t` cancelled.
    pub fn reduced(&self) -> Self {
        let mut num = self.numerator.clone();
        let mut n = self.n;
        if num.is_zero() {
            return Self { numerator: num, n: 0 };
        }
        while n > 0 {
            match num.div_one_minus_t() {
                Some(q) => {
                    num = q;
                    n -= 1;
                }
                None => break,
            }
        }
        Self { numerator: num, n }
    }

    /// Equality as rational functions.
    pub fn same_function(&self, other: &Self) -> bool {
        let (a, b) = (self.reduced(), other.reduced());
        a == b
    }
}

pub fn hilbert_series(b: &BettiDiagram) -> HilbertSeries {
    HilbertSeries::new(numerator_polynomial(b), b.n())
}

/// Number of monomials of degree `m` in `n` variables.
fn monomials(m: i64, n: usize) -> BigInt {
    if m < 0 {
        return BigInt::zero();
    }
    if n == 0 {
        return if m == 0 { BigInt::one() } else { BigInt::zero() };
    }
    // C(m + n - 1, n - 1)
    let k = (n - 1) as i64;
    let mut acc = BigInt::one();
    for t in 1..=k {
        acc = acc * BigInt::from(m + t) / BigInt::from(t);
    }
    acc
}

/// Coefficients `h_0..=h_D` of the power series expansion at `t = 0`.
pub fn expand_series(h: &HilbertSeries, degree: usize) -> Vec<Rational> {
    (0..=degree as i64)
        .map(|k| {
            h.numerator
                .terms()
                .filter(|&(j, _)| j <= k)
                .fold(Rational::zero(), |acc, (j, c)| {
                    acc + c * Rational::from_integer(monomials(k - j, h.n))
                })
        })
        .collect()
}

/// `Q(1)` where `S(b, t) = (1 - t)^s Q(t)` and `s` is the codimension.
pub fn multiplicity(b: &BettiDiagram) -> Result<Rational, CoreError> {
    if b.is_zero() {
        return Err(CoreError::UndefinedOnZero);
    }
    let (_, q) = numerator_polynomial(b)
        .split_one_minus_t()
        .ok_or(CoreError::VanishingNumerator)?;
    Ok(q.eval_at_one())
}

/// Minimal shifts `m_1..m_r` and maximal shifts `M_1..M_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftBounds {
    pub minimal: Vec<i64>,
    pub maximal: Vec<i64>,
    pub projective_dimension: usize,
    pub codimension: usize,
}

pub fn shift_bounds(b: &BettiDiagram) -> Result<ShiftBounds, HilbertError> {
    let r = b.projective_dimension().ok_or(CoreError::UndefinedOnZero)?;
    let gens: Vec<i64> = b.entries().filter(|&(i, _, _)| i == 0).map(|(_, j, _)| j).collect();
    match gens.as_slice() {
        [0] => {}
        [g] => return Err(CoreError::NotGeneratedInDegreeZero(*g).into()),
        _ => return Err(HilbertError::NotSingleDegreeGenerated(gens)),
    }
    let s = codimension(b)?;
    let span = |i: usize| b.column_span(i).ok_or(HilbertError::EmptyColumn(i));
    let minimal = (1..=r).map(|i| span(i).map(|(lo, _)| lo)).collect::<Result<_, _>>()?;
    let maximal = (1..=s).map(|i| span(i).map(|(_, hi)| hi)).collect::<Result<_, _>>()?;
    Ok(ShiftBounds {
        minimal,
        maximal,
        projective_dimension: r,
        codimension: s,
    })
}

/// Normalized pure diagram `pi-bar(0, shifts...)` over `n` variables.
pub fn normalized_from_shifts(shifts: &[i64], n: usize) -> Result<NormalizedPureDiagram, CoreError> {
    let mut d = vec![0];
    d.extend_from_slice(shifts);
    normalize(&pure_diagram(&DegreeSequence::new(d)?, n)?)
}

fn series_diff(a: &HilbertSeries, b: &HilbertSeries, degree: usize) -> Vec<Rational> {
    expand_series(a, degree)
        .into_iter()
        .zip(expand_series(b, degree))
        .map(|(x, y)| x - y)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub lower: DegreeSequence,
    pub upper: DegreeSequence,
    pub nonnegative: bool,
    pub strict: bool,
    pub first_negative: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub truncation: usize,
    pub pass: bool,
    pub pairs: Vec<PairReport>,
}

/// Compares truncated Hilbert series of consecutive normalized diagrams; a
/// pair passes when the upper minus the lower series is nonnegative and
/// nonzero through degree `degree`.
pub fn check_monotonicity(
    chain: &[NormalizedPureDiagram],
    degree: usize,
) -> Result<MonotonicityReport, HilbertError> {
    if let Some(first) = chain.first() {
        let n = first.diagram().n();
        if chain.iter().any(|p| p.diagram().n() != n) {
            return Err(HilbertError::AmbientMismatch);
        }
    }
    let mut pairs = Vec::new();
    for (k, w) in chain.windows(2).enumerate() {
        let (lo, hi) = (&w[0], &w[1]);
        if !lo.degrees().is_below(hi.degrees()) {
            return Err(HilbertError::NotAChain(k, k + 1));
        }
        let diff = series_diff(&hilbert_series(hi.diagram()), &hilbert_series(lo.diagram()), degree);
        let first_negative = diff.iter().position(|v| v.is_negative());
        pairs.push(PairReport {
            lower: lo.degrees().clone(),
            upper: hi.degrees().clone(),
            nonnegative: first_negative.is_none(),
            strict: diff.iter().any(|v| !v.is_zero()),
            first_negative,
        });
    }
    Ok(MonotonicityReport {
        truncation: degree,
        pass: pairs.iter().all(|p| p.nonnegative && p.strict),
        pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesVerdict {
    pub holds: bool,
    pub equal: bool,
    /// Coefficientwise `larger - smaller` through the truncation degree.
    #[serde(serialize_with = "crate::io::ser_rationals")]
    pub slack: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityVerdict {
    pub holds: bool,
    pub equal: bool,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub multiplicity: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub bound: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub shifts: ShiftBounds,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub beta0: Rational,
    pub truncation: usize,
    /// Why the comparisons were skipped, when they were.
    pub not_applicable: Option<String>,
    pub lower_series: Option<SeriesVerdict>,
    pub upper_series: Option<SeriesVerdict>,
    pub multiplicity: Option<MultiplicityVerdict>,
    pub pure: bool,
    pub cohen_macaulay: bool,
}

impl BoundsReport {
    /// All verdicts present and holding.
    pub fn pass(&self) -> bool {
        self.not_applicable.is_none()
            && [&self.lower_series, &self.upper_series].iter().all(|v| v.as_ref().is_some_and(|v| v.holds))
            && self.multiplicity.as_ref().is_some_and(|v| v.holds)
    }
}

fn strictly_increasing_from_zero(v: &[i64]) -> bool {
    v.first().is_none_or(|&x| x > 0) && v.windows(2).all(|p| p[0] < p[1])
}

fn factorial(s: usize) -> BigInt {
    (1..=s).map(BigInt::from).product::<BigInt>()
}

/// `beta_0 H(pi-bar(0,m)) <= H(b) <= beta_0 H(pi-bar(0,M))` through degree
/// `degree`, and `e(b) <= beta_0 M_1 ... M_s / s!`.
pub fn multiplicity_bounds(b: &BettiDiagram, degree: usize) -> Result<BoundsReport, HilbertError> {
    let shifts = shift_bounds(b)?;
    let beta0 = b.get(0, 0);
    let n = b.n();
    let pure = (0..=shifts.projective_dimension)
        .all(|i| b.entries().filter(|&(c, _, _)| c == i).count() == 1);
    let cohen_macaulay = shifts.codimension == shifts.projective_dimension;
    let mut report = BoundsReport {
        shifts: shifts.clone(),
        beta0: beta0.clone(),
        truncation: degree,
        not_applicable: None,
        lower_series: None,
        upper_series: None,
        multiplicity: None,
        pure,
        cohen_macaulay,
    };
    if !strictly_increasing_from_zero(&shifts.minimal) {
        report.not_applicable = Some(format!("minimal shifts {:?} are not strictly increasing", shifts.minimal));
        return Ok(report);
    }
    if !strictly_increasing_from_zero(&shifts.maximal) {
        report.not_applicable = Some(format!("maximal shifts {:?} are not strictly increasing", shifts.maximal));
        return Ok(report);
    }

    let hb = hilbert_series(b);
    let verdict = |larger: &HilbertSeries, smaller: &HilbertSeries| {
        let slack = series_diff(larger, smaller, degree);
        SeriesVerdict {
            holds: slack.iter().all(|v| !v.is_negative()),
            equal: slack.iter().all(|v| v.is_zero()),
            slack,
        }
    };
    let lower = normalized_from_shifts(&shifts.minimal, n)?.diagram().scaled(&beta0);
    let upper = normalized_from_shifts(&shifts.maximal, n)?.diagram().scaled(&beta0);
    report.lower_series = Some(verdict(&hb, &hilbert_series(&lower)));
    report.upper_series = Some(verdict(&hilbert_series(&upper), &hb));

    let e = multiplicity(b)?;
    let prod: BigInt = shifts.maximal.iter().map(|&m| BigInt::from(m)).product();
    let bound = &beta0 * Rational::new(prod, factorial(shifts.codimension));
    let slack = &bound - &e;
    report.multiplicity = Some(MultiplicityVerdict {
        holds: !slack.is_negative(),
        equal: slack.is_zero(),
        multiplicity: e,
        bound,
        slack,
    });
    Ok(report)
}
