//! Betti diagrams, degree sequences and pure diagrams.
//!
//! A diagram is stored sparsely by `(i, j)` where `i` is the homological
//! index (column) and `j` the internal degree. Tables display the row label
//! `j - i`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::LaurentPolynomial;

/// Exact arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

pub(crate) fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("degree sequence {0:?} is not strictly increasing and nonempty")]
    InvalidDegreeSequence(Vec<i64>),
    #[error("degree sequence of length {len} does not fit in {columns} columns")]
    CodimensionExceedsAmbient { len: usize, columns: usize },
    #[error("normalized pure diagrams need d_0 = 0, got d_0 = {0}")]
    NotGeneratedInDegreeZero(i64),
    #[error("operation is undefined on the zero diagram")]
    UndefinedOnZero,
    #[error("numerator polynomial vanishes identically; codimension is unbounded")]
    VanishingNumerator,
    #[error("homological index {i} is outside 0..={n}")]
    IndexOutOfRange { i: usize, n: usize },
}

/// Graded Betti numbers `beta_{i,j}` over a polynomial ring in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiDiagram {
    n: usize,
    entries: BTreeMap<(usize, i64), Rational>,
}

impl BettiDiagram {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a diagram, summing repeated positions.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (usize, i64, Rational)>,
    {
        let mut b = Self::zero(n);
        for (i, j, v) in entries {
            if i > n {
                return Err(CoreError::IndexOutOfRange { i, n });
            }
            b.add_at(i, j, v);
        }
        Ok(b)
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(n: usize, entries: &[(usize, i64, i64)]) -> Result<Self, CoreError> {
        Self::from_entries(n, entries.iter().map(|&(i, j, v)| (i, j, int(v))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: i64) -> Rational {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Overwrites one entry. Panics if `i > n`.
    pub fn set(&mut self, i: usize, j: i64, value: Rational) {
        assert!(i <= self.n, "column {i} out of range 0..={}", self.n);
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn add_at(&mut self, i: usize, j: i64, value: Rational) {
        assert!(i <= self.n, "column {i} out of range 0..={}", self.n);
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    /// Nonzero entries as `(i, j, value)`, sorted by `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, &Rational)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// `self += c * other`. Panics if `other` has a column beyond `self.n`.
    pub fn add_scaled(&mut self, c: &Rational, other: &BettiDiagram) {
        for (i, j, v) in other.entries() {
            self.add_at(i, j, c * v);
        }
    }

    /// Smallest and largest degree in column `i`, if the column is nonzero.
    pub fn column_span(&self, i: usize) -> Option<(i64, i64)> {
        let mut it = self.entries.range((i, i64::MIN)..=(i, i64::MAX));
        let first = it.next()?.0 .1;
        let last = it.next_back().map(|(k, _)| k.1).unwrap_or(first);
        Some((first, last))
    }

    /// Largest column holding a nonzero entry.
    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| !v.is_negative())
    }

    pub fn has_integer_entries(&self) -> bool {
        self.entries.values().all(|v| v.is_integer())
    }

    /// Same entries, reinterpreted over a larger (or equal) ambient ring.
    pub fn with_ambient(&self, n: usize) -> Result<Self, CoreError> {
        if let Some(p) = self.projective_dimension() {
            if p > n {
                return Err(CoreError::IndexOutOfRange { i: p, n });
            }
        }
        Ok(Self {
            n,
            entries: self.entries.clone(),
        })
    }
}

impl fmt::Display for BettiDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::emit_table(self))
    }
}

/// A strictly increasing, nonempty tuple `d_0 < d_1 < ... < d_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreeSequence(Vec<i64>);

impl DegreeSequence {
    pub fn new(degrees: Vec<i64>) -> Result<Self, CoreError> {
        if degrees.is_empty() || degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::InvalidDegreeSequence(degrees));
        }
        Ok(Self(degrees))
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    /// Number of columns minus one.
    pub fn codim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Option<i64> {
        self.0.get(i).copied()
    }

    /// The partial order on pure diagrams: longer (or equal) sequences that
    /// are entrywise below on the common prefix.
    pub fn is_below(&self, other: &DegreeSequence) -> bool {
        self.len() >= other.len() && other.0.iter().zip(&self.0).all(|(hi, lo)| lo <= hi)
    }

    /// Entry of `pi(d)` in column `i`: `(-1)^i prod_{j != i} 1/(d_j - d_i)`.
    pub fn pure_entry(&self, i: usize) -> Rational {
        let di = self.0[i];
        let mut denom = BigInt::one();
        for (j, &dj) in self.0.iter().enumerate() {
            if j != i {
                denom *= dj - di;
            }
        }
        if i % 2 == 1 {
            denom = -denom;
        }
        Rational::new(BigInt::one(), denom)
    }

    pub(crate) fn from_vec_unchecked(degrees: Vec<i64>) -> Self {
        debug_assert!(!degrees.is_empty() && degrees.windows(2).all(|w| w[0] < w[1]));
        Self(degrees)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// The rational diagram `pi(d)` of a degree sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PureDiagram {
    degrees: DegreeSequence,
    diagram: BettiDiagram,
}

impl PureDiagram {
    pub fn degrees(&self) -> &DegreeSequence {
        &self.degrees
    }

    pub fn diagram(&self) -> &BettiDiagram {
        &self.diagram
    }

    pub fn codim(&self) -> usize {
        self.degrees.codim()
    }

    pub fn into_diagram(self) -> BettiDiagram {
        self.diagram
    }
}

pub fn pure_diagram(d: &DegreeSequence, n: usize) -> Result<PureDiagram, CoreError> {
    if d.len() > n + 1 {
        return Err(CoreError::CodimensionExceedsAmbient {
            len: d.len(),
            columns: n + 1,
        });
    }
    let mut diagram = BettiDiagram::zero(n);
    for (i, &di) in d.degrees().iter().enumerate() {
        diagram.set(i, di, d.pure_entry(i));
    }
    Ok(PureDiagram {
        degrees: d.clone(),
        diagram,
    })
}

/// `d_1 d_2 ... d_s * pi(0, d_1, ..., d_s)`, with entry 1 at `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedPureDiagram {
    pure: PureDiagram,
    scale: BigInt,
    diagram: BettiDiagram,
}

impl NormalizedPureDiagram {
    pub fn pure(&self) -> &PureDiagram {
        &self.pure
    }

    pub fn degrees(&self) -> &DegreeSequence {
        &self.pure.degrees
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn diagram(&self) -> &BettiDiagram {
        &self.diagram
    }
}

pub fn normalize(p: &PureDiagram) -> Result<NormalizedPureDiagram, CoreError> {
    let d = p.degrees.degrees();
    if d[0] != 0 {
        return Err(CoreError::NotGeneratedInDegreeZero(d[0]));
    }
    let scale: BigInt = d[1..].iter().map(|&x| BigInt::from(x)).product();
    let diagram = p.diagram.scaled(&Rational::from_integer(scale.clone()));
    Ok(NormalizedPureDiagram {
        pure: p.clone(),
        scale,
        diagram,
    })
}

/// `sum_{i,j} (-1)^i beta_{i,j} j^m` for `m = 0..s`.
pub fn hk_residuals(b: &BettiDiagram, s: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); s];
    for (i, j, v) in b.entries() {
        let signed = if i % 2 == 0 { v.clone() } else { -v.clone() };
        let mut power = BigInt::one();
        for slot in out.iter_mut() {
            *slot += &signed * Rational::from_integer(power.clone());
            power *= j;
        }
    }
    out
}

/// `S(b, t) = sum (-1)^i beta_{i,j} t^j`.
pub fn numerator_polynomial(b: &BettiDiagram) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for (i, j, v) in b.entries() {
        p.add_term(j, if i % 2 == 0 { v.clone() } else { -v.clone() });
    }
    p
}

/// Largest `s` with `(1-t)^s` dividing the numerator polynomial.
pub fn codimension(b: &BettiDiagram) -> Result<usize, CoreError> {
    if b.is_zero() {
        return Err(CoreError::UndefinedOnZero);
    }
    numerator_polynomial(b)
        .split_one_minus_t()
        .map(|(s, _)| s)
        .ok_or(CoreError::VanishingNumerator)
}

/// `(min, max)` of the row label `j - i` over nonzero entries.
pub fn window_of(b: &BettiDiagram) -> Result<(i64, i64), CoreError> {
    let mut rows = b.entries().map(|(i, j, _)| j - i as i64);
    let first = rows.next().ok_or(CoreError::UndefinedOnZero)?;
    Ok(rows.fold((first, first), |(lo, hi), r| (lo.min(r), hi.max(r))))
}
