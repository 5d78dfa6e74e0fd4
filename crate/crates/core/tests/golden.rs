mod common;

use bs_decomp::functionals::{chain_functional, evaluate, FunctionalCase};
use bs_decomp::io::{emit_decomposition, functional_json, parse_diagram, parse_tableau, Format};
use bs_decomp::poset::{chain_from_tableau, Chain, Window};
use bs_decomp::{greedy_decompose, BettiDiagram, Rational};
use common::*;
use num_traits::{One, Zero};

fn chain() -> Chain {
    let doc = parse_tableau(&read_fixture("functionals/chain.tableau")).unwrap();
    chain_from_tableau(&doc.tableau, &Window::new(3, 0, 2, 0).unwrap()).unwrap()
}

fn basis(c: &Chain) -> Vec<BettiDiagram> {
    c.pure_diagrams().into_iter().map(|p| p.into_diagram()).collect()
}

/// Row `k` of the inverse of the chain basis, as a grid over the window.
fn dual_grid(c: &Chain, k: usize) -> Vec<Vec<Rational>> {
    let w = c.window();
    let b = basis(c);
    (0..=w.height())
        .map(|r| {
            (0..=w.n())
                .map(|i| {
                    let mut unit = BettiDiagram::zero(w.n());
                    unit.set(i, w.low() + (r + i) as i64, Rational::one());
                    solve_in_basis(&unit, &b).map(|x| x[k].clone()).unwrap_or_else(Rational::zero)
                })
                .collect()
        })
        .collect()
}

#[test]
fn chain_from_fixture_tableau() {
    let got: Vec<String> = chain().elements().iter().map(|d| d.to_string()).collect();
    assert_eq!(
        got,
        [
            "(0,1,2,3)", "(0,1,2,4)", "(0,1,2,5)", "(0,1,3,5)", "(0,2,3,5)", "(0,2,4,5)", "(0,3,4,5)",
            "(0,3,4)", "(0,3)", "(0)", "(1)", "(2)"
        ]
    );
}

/// The window has no Herzog-Kuhl constraint at s = 0, so every unit vector
/// lies in the span and the dual basis is the inverse matrix.
#[test]
fn functionals_are_the_dual_basis() {
    let c = chain();
    for k in 0..c.len() {
        let f = chain_functional(&c, k).unwrap();
        let got: Vec<Vec<Rational>> = f
            .grid()
            .into_iter()
            .map(|r| r.into_iter().map(Rational::from_integer).collect())
            .collect();
        assert_eq!(got, dual_grid(&c, k), "element {}", k + 1);
    }
}

#[test]
fn printed_matrices_other_than_five_match() {
    let c = chain();
    for k in (1..=12).filter(|&k| k != 5) {
        let printed = read_grid(&format!("functionals/matrix_{k:02}.txt"));
        let f = chain_functional(&c, k - 1).unwrap();
        let got: Vec<Vec<i64>> = f.grid().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        assert_eq!(got, printed, "matrix {k}");
    }
}

#[test]
fn printed_matrix_five_is_not_dual() {
    let c = chain();
    let printed = read_grid("functionals/matrix_05.txt");
    let b = basis(&c);
    // (0,1,2,4) lies below the removed element, so a dual functional vanishes on it
    let on_second = apply_grid(&printed, 0, &b[1]);
    assert_ne!(on_second, Rational::zero());
    assert_eq!(on_second, q(1, 3));
    let computed = chain_functional(&c, 4).unwrap();
    assert_eq!(computed.case(), FunctionalCase::Third);
    assert!(evaluate(&computed, &b[1]).is_zero());
    assert_eq!(computed.coefficient(3, 4), (-4).into());
}

#[test]
fn cases_of_the_twelve() {
    let c = chain();
    let cases: Vec<FunctionalCase> = (0..12).map(|k| chain_functional(&c, k).unwrap().case()).collect();
    use FunctionalCase::*;
    assert_eq!(
        cases,
        [Indicator, Indicator, Third, Third, Third, Third, Second, Fourth, Fourth, First, Indicator, Indicator]
    );
}

#[test]
fn matrix_seven_json_grid() {
    let f = chain_functional(&chain(), 6).unwrap();
    let v = functional_json(&f);
    assert_eq!(v["grid"], serde_json::json!([[0, -6, 8, -6], [0, -8, 6, 0], [0, 0, 0, 10]]));
    assert_eq!(v["case"], "second");
}

#[test]
fn decomposition_golden_file() {
    let b = parse_diagram(&read_fixture("example.table"), Format::Table).unwrap();
    let json = parse_diagram(&read_fixture("example.json"), Format::Json).unwrap();
    assert_eq!(b, json);
    let dec = greedy_decompose(&b).unwrap();
    assert_eq!(emit_decomposition(&dec), read_fixture("decomposition.json"));
    let v: serde_json::Value = serde_json::from_str(&read_fixture("decomposition.json")).unwrap();
    let listed: serde_json::Value = serde_json::from_str(&read_fixture("summands/coefficients.json")).unwrap();
    assert_eq!(v["terms"], listed);
}
