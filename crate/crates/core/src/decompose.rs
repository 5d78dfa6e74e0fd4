//! Greedy decomposition of a Betti diagram into a positive combination of a
//! chain of pure diagrams.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{pure_diagram, window_of, BettiDiagram, DegreeSequence, PureDiagram, Rational};
use crate::functionals::expand_in_chain;
use crate::poset::{chain_length, Chain, Window};

/// `sum_k c_k pi(d_k)` over a strictly increasing chain `d_1 < d_2 < ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    n: usize,
    terms: Vec<(Rational, PureDiagram)>,
    residual: BettiDiagram,
}

impl Decomposition {
    /// Builds a decomposition from explicit terms, with the residual computed
    /// against nothing (zero). Validity is checked by [`verify_decomposition`].
    pub fn from_terms(n: usize, terms: Vec<(Rational, DegreeSequence)>) -> Result<Self, DecomposeError> {
        let terms = terms
            .into_iter()
            .map(|(c, d)| {
                pure_diagram(&d, n)
                    .map(|p| (c, p))
                    .map_err(|e| DecomposeError::InvalidDiagram(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            n,
            terms,
            residual: BettiDiagram::zero(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Rational, PureDiagram)] {
        &self.terms
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.terms.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn degree_sequences(&self) -> Vec<DegreeSequence> {
        self.terms.iter().map(|(_, p)| p.degrees().clone()).collect()
    }

    pub fn residual(&self) -> &BettiDiagram {
        &self.residual
    }

    pub fn has_zero_residual(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn reconstruct(&self) -> BettiDiagram {
        let mut b = BettiDiagram::zero(self.n);
        for (c, p) in &self.terms {
            b.add_scaled(c, p.diagram());
        }
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotInConeReason {
    /// Some column up to the projective dimension is empty, or the minimal
    /// degrees fail to increase.
    InvalidLeadingSequence { minimal_degrees: Vec<Option<i64>> },
    /// The next leading sequence is not above the previous one.
    NotIncreasing { previous: DegreeSequence, next: DegreeSequence },
    /// More steps than any chain in the window allows.
    Residual,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("diagram is not in the cone ({reason:?})")]
    NotInCone {
        reason: NotInConeReason,
        partial: Box<Decomposition>,
        residual: BettiDiagram,
    },
}

/// Leading degrees `min { j : beta_{i,j} != 0 }` for columns `0..=r`.
fn leading_degrees(b: &BettiDiagram, r: usize) -> Vec<Option<i64>> {
    (0..=r).map(|i| b.column_span(i).map(|(lo, _)| lo)).collect()
}

/// Peels off `c * pi(d)` with `d` the leading degrees of the remainder and
/// `c` the largest value keeping every entry nonnegative.
pub fn greedy_decompose(b: &BettiDiagram) -> Result<Decomposition, DecomposeError> {
    if b.is_zero() {
        return Err(DecomposeError::InvalidDiagram("zero diagram".into()));
    }
    if let Some((i, j, v)) = b.entries().find(|(_, _, v)| v.is_negative()) {
        return Err(DecomposeError::InvalidDiagram(format!("negative entry {v} at ({i}, {j})")));
    }
    let n = b.n();
    let (low, high) = window_of(b).expect("nonzero");
    let bound = chain_length(&Window::new(n, low, high, 0).expect("window of a diagram"));

    let mut residual = b.clone();
    let mut terms: Vec<(Rational, PureDiagram)> = Vec::new();
    let fail = |reason, terms: Vec<(Rational, PureDiagram)>, residual: BettiDiagram| {
        DecomposeError::NotInCone {
            reason,
            partial: Box::new(Decomposition {
                n,
                terms,
                residual: residual.clone(),
            }),
            residual,
        }
    };
    while let Some(r) = residual.projective_dimension() {
        if terms.len() >= bound {
            return Err(fail(NotInConeReason::Residual, terms, residual));
        }
        let lead = leading_degrees(&residual, r);
        let d = lead
            .iter()
            .copied()
            .collect::<Option<Vec<i64>>>()
            .and_then(|v| DegreeSequence::new(v).ok());
        let Some(d) = d else {
            return Err(fail(
                NotInConeReason::InvalidLeadingSequence { minimal_degrees: lead },
                terms,
                residual,
            ));
        };
        if let Some((_, prev)) = terms.last() {
            if !prev.degrees().is_below(&d) {
                let reason = NotInConeReason::NotIncreasing {
                    previous: prev.degrees().clone(),
                    next: d,
                };
                return Err(fail(reason, terms, residual));
            }
        }
        let p = pure_diagram(&d, n).expect("length is at most n+1");
        let c = d
            .degrees()
            .iter()
            .enumerate()
            .map(|(i, &di)| residual.get(i, di) / d.pure_entry(i))
            .min()
            .expect("nonempty sequence");
        residual.add_scaled(&-c.clone(), p.diagram());
        terms.push((c, p));
    }
    Ok(Decomposition {
        n,
        terms,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyFailure {
    AmbientMismatch,
    NonzeroResidual,
    NonPositiveCoefficient,
    NotAChain,
    Reconstruction,
    FunctionalMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub failure: Option<VerifyFailure>,
    /// Coefficients recovered from the chain functionals, one per term, when
    /// the cross-check ran.
    pub functional_coefficients: Option<Vec<Rational>>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    fn fail(f: VerifyFailure) -> Self {
        Self {
            failure: Some(f),
            functional_coefficients: None,
        }
    }
}

/// Any one maximal chain of `w` through all of `elements`.
fn refine(w: &Window, elements: &[DegreeSequence]) -> Option<Chain> {
    let mut targets: Vec<DegreeSequence> = elements.to_vec();
    targets.push(w.maximum());
    let mut cur = w.minimum();
    let mut out = vec![cur.clone()];
    for t in targets {
        if !cur.is_below(&t) {
            return None;
        }
        while cur != t {
            let (_, next) = w.upper_covers(&cur).into_iter().find(|(_, x)| x.is_below(&t))?;
            out.push(next.clone());
            cur = next;
        }
    }
    Chain::new(*w, out).ok()
}

/// Checks reconstruction, chain order and positivity, then recomputes each
/// coefficient through the functionals of a maximal chain refining the
/// decomposition's chain.
pub fn verify_decomposition(dec: &Decomposition, b: &BettiDiagram) -> Verification {
    if dec.n != b.n() {
        return Verification::fail(VerifyFailure::AmbientMismatch);
    }
    if !dec.residual.is_zero() {
        return Verification::fail(VerifyFailure::NonzeroResidual);
    }
    if dec.terms.iter().any(|(c, _)| !c.is_positive()) {
        return Verification::fail(VerifyFailure::NonPositiveCoefficient);
    }
    let seqs = dec.degree_sequences();
    if seqs.windows(2).any(|p| p[0] == p[1] || !p[0].is_below(&p[1])) {
        return Verification::fail(VerifyFailure::NotAChain);
    }
    if dec.reconstruct() != *b {
        return Verification::fail(VerifyFailure::Reconstruction);
    }
    if seqs.is_empty() {
        return Verification {
            failure: None,
            functional_coefficients: Some(Vec::new()),
        };
    }

    let mut low = i64::MAX;
    let mut high = i64::MIN;
    for d in &seqs {
        for (i, &di) in d.degrees().iter().enumerate() {
            low = low.min(di - i as i64);
            high = high.max(di - i as i64);
        }
    }
    let s = seqs.last().expect("nonempty").codim();
    let Ok(w) = Window::new(b.n(), low, high, s) else {
        return Verification::fail(VerifyFailure::FunctionalMismatch);
    };
    let Some(chain) = refine(&w, &seqs) else {
        return Verification::fail(VerifyFailure::FunctionalMismatch);
    };
    let Ok(coords) = expand_in_chain(b, &chain) else {
        return Verification::fail(VerifyFailure::FunctionalMismatch);
    };
    let mut recovered = Vec::with_capacity(seqs.len());
    for (el, v) in chain.elements().iter().zip(&coords) {
        match seqs.iter().position(|d| d == el) {
            Some(t) => {
                if *v != dec.terms[t].0 {
                    return Verification::fail(VerifyFailure::FunctionalMismatch);
                }
                recovered.push(v.clone());
            }
            None if !v.is_zero() => {
                return Verification::fail(VerifyFailure::FunctionalMismatch);
            }
            None => {}
        }
    }
    Verification {
        failure: None,
        functional_coefficients: Some(recovered),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::int;

    fn seq(d: &[i64]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec()).unwrap()
    }

    fn example() -> BettiDiagram {
        BettiDiagram::from_ints(3, &[(0, 0, 1), (1, 2, 2), (1, 3, 1), (2, 3, 1), (2, 4, 2), (3, 5, 1)])
            .unwrap()
    }

    #[test]
    fn example_decomposition() {
        let b = example();
        let dec = greedy_decompose(&b).unwrap();
        assert_eq!(dec.coefficients(), vec![int(6), int(12), int(2), int(1)]);
        assert_eq!(
            dec.degree_sequences(),
            vec![seq(&[0, 2, 3, 5]), seq(&[0, 2, 4, 5]), seq(&[0, 3, 4]), seq(&[0, 3])]
        );
        let v = verify_decomposition(&dec, &b);
        assert!(v.ok());
        assert_eq!(v.functional_coefficients.unwrap(), dec.coefficients());
    }

    #[test]
    fn koszul() {
        let b = BettiDiagram::from_ints(3, &[(0, 0, 1), (1, 1, 3), (2, 2, 3), (3, 3, 1)]).unwrap();
        let dec = greedy_decompose(&b).unwrap();
        assert_eq!(dec.coefficients(), vec![int(6)]);
        assert_eq!(dec.degree_sequences(), vec![seq(&[0, 1, 2, 3])]);
    }

    #[test]
    fn pure_is_single_term() {
        let p = pure_diagram(&seq(&[0, 2, 3, 5]), 3).unwrap();
        let dec = greedy_decompose(p.diagram()).unwrap();
        assert_eq!(dec.coefficients(), vec![int(1)]);
    }

    #[test]
    fn tampered_coefficient_fails() {
        let b = example();
        let dec = greedy_decompose(&b).unwrap();
        let mut terms: Vec<_> = dec.terms().iter().map(|(c, p)| (c.clone(), p.degrees().clone())).collect();
        terms[0].0 = int(7);
        let bad = Decomposition::from_terms(3, terms).unwrap();
        assert_eq!(verify_decomposition(&bad, &b).failure, Some(VerifyFailure::Reconstruction));
    }

    #[test]
    fn errors() {
        assert!(matches!(greedy_decompose(&BettiDiagram::zero(2)), Err(DecomposeError::InvalidDiagram(_))));
        let neg = BettiDiagram::from_ints(1, &[(0, 0, 1), (1, 1, -1)]).unwrap();
        assert!(matches!(greedy_decompose(&neg), Err(DecomposeError::InvalidDiagram(_))));

        let mut b = example();
        b.set(1, 2, Rational::zero());
        match greedy_decompose(&b) {
            Err(DecomposeError::NotInCone { partial, residual, .. }) => {
                let mut back = partial.reconstruct();
                back.add_scaled(&int(1), &residual);
                assert_eq!(back, b);
            }
            other => panic!("expected NotInCone, got {other:?}"),
        }

        let gap = BettiDiagram::from_ints(2, &[(0, 0, 1), (2, 2, 1)]).unwrap();
        assert!(matches!(
            greedy_decompose(&gap),
            Err(DecomposeError::NotInCone {
                reason: NotInConeReason::InvalidLeadingSequence { .. },
                ..
            })
        ));
    }
}
