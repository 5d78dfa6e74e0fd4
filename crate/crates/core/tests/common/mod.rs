#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use bs_decomp::poset::{Chain, Window};
use bs_decomp::{pure_diagram, BettiDiagram, DegreeSequence, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn read_grid(rel: &str) -> Vec<Vec<i64>> {
    read_fixture(rel)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect()
}

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn seq(d: &[i64]) -> DegreeSequence {
    DegreeSequence::new(d.to_vec()).unwrap()
}

pub fn example() -> BettiDiagram {
    BettiDiagram::from_ints(3, &[(0, 0, 1), (1, 2, 2), (1, 3, 1), (2, 3, 1), (2, 4, 2), (3, 5, 1)]).unwrap()
}

pub fn koszul() -> BettiDiagram {
    BettiDiagram::from_ints(3, &[(0, 0, 1), (1, 1, 3), (2, 2, 3), (3, 3, 1)]).unwrap()
}

/// `sum grid[r][i] * beta_{i, low + r + i}` computed directly from a grid.
pub fn apply_grid(grid: &[Vec<i64>], low: i64, b: &BettiDiagram) -> Rational {
    let mut acc = Rational::zero();
    for (r, row) in grid.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            acc += b.get(i, low + (r + i) as i64) * int(c);
        }
    }
    acc
}

/// Coordinates of `b` in the span of `basis` by Gaussian elimination over
/// the union of supports, or `None` if `b` is outside the span.
pub fn solve_in_basis(b: &BettiDiagram, basis: &[BettiDiagram]) -> Option<Vec<Rational>> {
    let mut cells: BTreeSet<(usize, i64)> = b.entries().map(|(i, j, _)| (i, j)).collect();
    for v in basis {
        cells.extend(v.entries().map(|(i, j, _)| (i, j)));
    }
    let cells: Vec<_> = cells.into_iter().collect();
    let k = basis.len();
    let mut rows: Vec<Vec<Rational>> = cells
        .iter()
        .map(|&(i, j)| {
            let mut row: Vec<Rational> = basis.iter().map(|v| v.get(i, j)).collect();
            row.push(b.get(i, j));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows.len()).find(|&x| !rows[x][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= inv.clone();
        }
        for other in 0..rows.len() {
            if other != r && !rows[other][c].is_zero() {
                let f = rows[other][c].clone();
                for col in 0..=k {
                    let sub = rows[r][col].clone() * f.clone();
                    rows[other][col] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = rows[row][k].clone();
    }
    Some(x)
}

/// A maximal chain found by a random upward walk.
pub fn random_chain<R: Rng>(w: &Window, rng: &mut R) -> Chain {
    let mut cur = w.minimum();
    let mut out = vec![cur.clone()];
    while cur != w.maximum() {
        let covers = w.upper_covers(&cur);
        let (_, next) = covers[rng.gen_range(0..covers.len())].clone();
        out.push(next.clone());
        cur = next;
    }
    Chain::new(*w, out).unwrap()
}

pub fn random_window<R: Rng>(rng: &mut R) -> Window {
    let n = rng.gen_range(1..=3);
    let low = rng.gen_range(-1..=1);
    let high = low + rng.gen_range(0..=2);
    let s = rng.gen_range(0..=n);
    Window::new(n, low, high, s).unwrap()
}

fn lcm_of_denominators(b: &BettiDiagram) -> BigInt {
    b.entries().fold(BigInt::one(), |acc, (_, _, v)| acc.lcm(v.denom()))
}

/// A random integer diagram `L * sum lambda_k pi_k` over a random subchain,
/// with `lambda_k` random positive rationals of small denominator and `L`
/// the least common denominator of the resulting entries. Returns the
/// diagram, the subchain and the coefficients `L * lambda_k`.
pub fn random_integer_member<R: Rng>(rng: &mut R) -> (BettiDiagram, Vec<DegreeSequence>, Vec<Rational>) {
    let w = random_window(rng);
    let chain = random_chain(&w, rng);
    let mut picked: Vec<DegreeSequence> = chain
        .elements()
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .cloned()
        .collect();
    if picked.is_empty() {
        picked.push(chain.elements()[rng.gen_range(0..chain.len())].clone());
    }
    let lambdas: Vec<Rational> = picked
        .iter()
        .map(|_| q(rng.gen_range(1..=40), rng.gen_range(1..=6)))
        .collect();
    let mut b = BettiDiagram::zero(w.n());
    for (d, l) in picked.iter().zip(&lambdas) {
        b.add_scaled(l, pure_diagram(d, w.n()).unwrap().diagram());
    }
    let scale = Rational::from_integer(lcm_of_denominators(&b));
    let b = b.scaled(&scale);
    let coeffs = lambdas.iter().map(|l| l * &scale).collect();
    (b, picked, coeffs)
}

/// Changes one entry inside the support rows by `+1` or `-1`, keeping all
/// entries nonnegative.
pub fn perturb<R: Rng>(b: &BettiDiagram, rng: &mut R) -> BettiDiagram {
    let (low, high) = bs_decomp::window_of(b).unwrap();
    loop {
        let i = rng.gen_range(0..=b.n());
        let r = rng.gen_range(low..=high);
        let j = r + i as i64;
        let delta = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
        let v = b.get(i, j) + delta;
        if v.is_negative() {
            continue;
        }
        let mut out = b.clone();
        out.set(i, j, v);
        if !out.is_zero() {
            return out;
        }
    }
}

/// All windows with `n <= max_n`, `M = 0`, `N - M <= max_height` and every
/// minimal codimension.
pub fn small_windows(max_n: usize, max_height: i64) -> Vec<Window> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for h in 0..=max_height {
            for s in 0..=n {
                out.push(Window::new(n, 0, h, s).unwrap());
            }
        }
    }
    out
}
