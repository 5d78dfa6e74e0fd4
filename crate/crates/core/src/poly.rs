//! Laurent polynomials in one variable `t` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::diagram::Rational;

/// A finite sum `sum_k c_k t^k` with `k` ranging over all integers.
///
/// Only nonzero coefficients are stored, so two polynomials are equal exactly
/// when their maps are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: Rational, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `1 - t`.
    pub fn one_minus_t() -> Self {
        Self::from_terms([(0, Rational::one()), (1, -Rational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Value at `t = 1`.
    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Exact division by `1 - t`, or `None` when `1 - t` does not divide.
    pub fn div_one_minus_t(&self) -> Option<Self> {
        let (lo, hi) = match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Some(Self::zero()),
        };
        if !self.eval_at_one().is_zero() {
            return None;
        }
        // p = (1 - t) q  =>  q_k = q_{k-1} + p_k, running prefix sums.
        let mut q = Self::zero();
        let mut acc = Rational::zero();
        for k in lo..hi {
            acc += self.coeff(k);
            q.add_term(k, acc.clone());
        }
        Some(q)
    }

    /// Largest `s` with `(1-t)^s` dividing `self`, together with the cofactor.
    ///
    /// Returns `None` for the zero polynomial, which every power divides.
    pub fn split_one_minus_t(&self) -> Option<(usize, Self)> {
        if self.is_zero() {
            return None;
        }
        let mut s = 0;
        let mut q = self.clone();
        while let Some(next) = q.div_one_minus_t() {
            q = next;
            s += 1;
        }
        Some((s, q))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn division_by_one_minus_t() {
        // 1 - 2t^2 + 2t^4 - t^5 = (1-t)(1 + t - t^2 - t^3 + t^4)
        let p = LaurentPolynomial::from_terms([(0, r(1)), (2, r(-2)), (4, r(2)), (5, r(-1))]);
        let q = p.div_one_minus_t().unwrap();
        let expect =
            LaurentPolynomial::from_terms([(0, r(1)), (1, r(1)), (2, r(-1)), (3, r(-1)), (4, r(1))]);
        assert_eq!(q, expect);
        assert!(q.div_one_minus_t().is_none());
        assert_eq!(&q * &LaurentPolynomial::one_minus_t(), p);
    }

    #[test]
    fn split_counts_full_power() {
        let base = LaurentPolynomial::one_minus_t();
        let cube = &(&base * &base) * &base;
        let shifted = &cube * &LaurentPolynomial::monomial(r(3), -2);
        let (s, q) = shifted.split_one_minus_t().unwrap();
        assert_eq!(s, 3);
        assert_eq!(q, LaurentPolynomial::monomial(r(3), -2));
        assert!(LaurentPolynomial::zero().split_one_minus_t().is_none());
    }
}
