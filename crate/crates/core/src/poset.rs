//! The poset of pure diagrams inside a degree window, its maximal chains and
//! their encoding as numbered matrices (tableaux).
//!
//! A window fixes `n`, the row bounds `M <= d_i - i <= N` and a minimal
//! codimension. Every maximal chain starts at `(M, M+1, ..., M+n)` and ends at
//! `(N, N+1, ..., N+s_min)`. Each cover step removes exactly one cell of the
//! `(N-M+1) x (n+1)` grid: either a column is raised by one degree or the last
//! column is dropped from the top row. Numbering the cells by the step that
//! removes them gives the tableau of the chain.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{pure_diagram, DegreeSequence, PureDiagram};

/// Default cap on the number of chains an enumeration may produce.
pub const DEFAULT_ENUM_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("degree sequence {0} is outside the window")]
    NotInWindow(DegreeSequence),
    #[error("elements are not strictly increasing at position {0}")]
    NotAChain(usize),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("chain is not maximal in its window")]
    ChainNotMaximal,
    #[error("enumeration exceeds the limit of {0} chains")]
    EnumerationLimit(usize),
}

/// Degree window `M <= d_i - i <= N` with `s_min <= codim <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    n: usize,
    #[serde(rename = "M")]
    low: i64,
    #[serde(rename = "N")]
    high: i64,
    #[serde(rename = "s")]
    min_codim: usize,
}

/// How a pure diagram steps up to one of its covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// `d_i` increases by one.
    Raise(usize),
    /// The last degree, sitting on the window ceiling, is deleted.
    Drop,
}

impl Window {
    pub fn new(n: usize, low: i64, high: i64, min_codim: usize) -> Result<Self, PosetError> {
        if low > high {
            return Err(PosetError::InvalidWindow(format!("M = {low} exceeds N = {high}")));
        }
        if min_codim > n {
            return Err(PosetError::InvalidWindow(format!("s = {min_codim} exceeds n = {n}")));
        }
        Ok(Self {
            n,
            low,
            high,
            min_codim,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.high
    }

    pub fn min_codim(&self) -> usize {
        self.min_codim
    }

    /// `N - M`.
    pub fn height(&self) -> usize {
        (self.high - self.low) as usize
    }

    /// Number of grid cells, `(n+1)(N-M+1)`.
    pub fn cells(&self) -> usize {
        (self.n + 1) * (self.height() + 1)
    }

    pub fn with_min_codim(&self, min_codim: usize) -> Result<Self, PosetError> {
        Self::new(self.n, self.low, self.high, min_codim)
    }

    /// Grid row of degree `j` in column `i`, if it lies in the window.
    pub fn row(&self, i: usize, j: i64) -> Option<usize> {
        let r = j - i as i64 - self.low;
        (0..=self.height() as i64).contains(&r).then_some(r as usize)
    }

    pub fn contains(&self, d: &DegreeSequence) -> bool {
        (self.min_codim..=self.n).contains(&d.codim())
            && d.degrees().iter().enumerate().all(|(i, &di)| self.row(i, di).is_some())
    }

    pub fn minimum(&self) -> DegreeSequence {
        DegreeSequence::from_vec_unchecked((0..=self.n as i64).map(|i| self.low + i).collect())
    }

    pub fn maximum(&self) -> DegreeSequence {
        DegreeSequence::from_vec_unchecked(
            (0..=self.min_codim as i64).map(|i| self.high + i).collect(),
        )
    }

    /// Every degree sequence in the window, highest codimension first, then
    /// lexicographic.
    pub fn sequences(&self) -> Vec<DegreeSequence> {
        let mut out = Vec::new();
        for s in (self.min_codim..=self.n).rev() {
            let mut rows = vec![0usize; s + 1];
            loop {
                out.push(DegreeSequence::from_vec_unchecked(
                    rows.iter()
                        .enumerate()
                        .map(|(i, &r)| self.low + (i + r) as i64)
                        .collect(),
                ));
                // next weakly increasing row vector in lexicographic order
                let mut k = s as isize;
                while k >= 0 && rows[k as usize] == self.height() {
                    k -= 1;
                }
                if k < 0 {
                    break;
                }
                let v = rows[k as usize] + 1;
                for r in rows.iter_mut().skip(k as usize) {
                    *r = v;
                }
            }
        }
        out
    }

    /// Applies a step if it yields a cover inside the window.
    pub fn apply(&self, d: &DegreeSequence, step: Step) -> Option<DegreeSequence> {
        let deg = d.degrees();
        let s = d.codim();
        match step {
            Step::Raise(i) => {
                if i > s {
                    return None;
                }
                let next = deg[i] + 1;
                if next > self.high + i as i64 {
                    return None;
                }
                if i < s && next >= deg[i + 1] {
                    return None;
                }
                let mut v = deg.to_vec();
                v[i] = next;
                Some(DegreeSequence::from_vec_unchecked(v))
            }
            Step::Drop => {
                if s == 0 || s <= self.min_codim || deg[s] != self.high + s as i64 {
                    return None;
                }
                Some(DegreeSequence::from_vec_unchecked(deg[..s].to_vec()))
            }
        }
    }

    /// Covers of `d`, raises by ascending column first, then the drop.
    pub fn upper_covers(&self, d: &DegreeSequence) -> Vec<(Step, DegreeSequence)> {
        (0..d.len())
            .map(Step::Raise)
            .chain(std::iter::once(Step::Drop))
            .filter_map(|st| self.apply(d, st).map(|e| (st, e)))
            .collect()
    }

    /// Elements covered by `d`, each with the step leading from it to `d`.
    pub fn lower_covers(&self, d: &DegreeSequence) -> Vec<(Step, DegreeSequence)> {
        let deg = d.degrees();
        let s = d.codim();
        let mut out = Vec::new();
        for i in 0..=s {
            let prev = deg[i] - 1;
            if prev < self.low + i as i64 || (i > 0 && prev <= deg[i - 1]) {
                continue;
            }
            let mut v = deg.to_vec();
            v[i] = prev;
            out.push((Step::Raise(i), DegreeSequence::from_vec_unchecked(v)));
        }
        if s < self.n {
            let mut v = deg.to_vec();
            v.push(self.high + (s + 1) as i64);
            out.push((Step::Drop, DegreeSequence::from_vec_unchecked(v)));
        }
        out
    }

    /// The step from `p` to `q` when `q` covers `p` in this window.
    pub fn step_between(&self, p: &DegreeSequence, q: &DegreeSequence) -> Option<Step> {
        if !self.contains(p) || !self.contains(q) {
            return None;
        }
        if q.len() + 1 == p.len() {
            return (self.apply(p, Step::Drop).as_ref() == Some(q)).then_some(Step::Drop);
        }
        if q.len() != p.len() {
            return None;
        }
        let mut diff = p.degrees().iter().zip(q.degrees()).enumerate().filter(|(_, (a, b))| a != b);
        let (i, _) = diff.next()?;
        if diff.next().is_some() {
            return None;
        }
        (self.apply(p, Step::Raise(i)).as_ref() == Some(q)).then_some(Step::Raise(i))
    }

    /// Grid cell `(row, column)` that disappears when stepping up from `d`.
    pub fn removed_cell(&self, d: &DegreeSequence, step: Step) -> (usize, usize) {
        let i = match step {
            Step::Raise(i) => i,
            Step::Drop => d.codim(),
        };
        let r = self.row(i, d.degrees()[i]).expect("degree inside the window");
        (r, i)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} M={} N={} s={}", self.n, self.low, self.high, self.min_codim)
    }
}

pub fn leq(p: &PureDiagram, q: &PureDiagram) -> bool {
    p.degrees().is_below(q.degrees())
}

pub fn covers(p: &PureDiagram, q: &PureDiagram, w: &Window) -> bool {
    w.step_between(p.degrees(), q.degrees()).is_some()
}

/// Number of elements in every maximal chain: `(n+1)(N-M) + n - s + 1`.
pub fn chain_length(w: &Window) -> usize {
    (w.n + 1) * w.height() + w.n - w.min_codim + 1
}

/// A strictly increasing list of pure diagrams, smallest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    window: Window,
    elements: Vec<DegreeSequence>,
}

impl Chain {
    pub fn new(window: Window, elements: Vec<DegreeSequence>) -> Result<Self, PosetError> {
        for d in &elements {
            if !window.contains(d) {
                return Err(PosetError::NotInWindow(d.clone()));
            }
        }
        for (k, pair) in elements.windows(2).enumerate() {
            if pair[0] == pair[1] || !pair[0].is_below(&pair[1]) {
                return Err(PosetError::NotAChain(k + 1));
            }
        }
        Ok(Self { window, elements })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn elements(&self) -> &[DegreeSequence] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_maximal(&self) -> bool {
        self.elements.first() == Some(&self.window.minimum())
            && self.elements.last() == Some(&self.window.maximum())
            && self
                .elements
                .windows(2)
                .all(|p| self.window.step_between(&p[0], &p[1]).is_some())
    }

    /// Cover steps between consecutive elements, `None` where there is a gap.
    pub fn steps(&self) -> Vec<Option<Step>> {
        self.elements
            .windows(2)
            .map(|p| self.window.step_between(&p[0], &p[1]))
            .collect()
    }

    pub fn pure_diagrams(&self) -> Vec<PureDiagram> {
        self.elements
            .iter()
            .map(|d| pure_diagram(d, self.window.n).expect("window elements fit in n+1 columns"))
            .collect()
    }

    /// The chain with the element at `index` removed.
    pub fn without(&self, index: usize) -> Chain {
        let mut elements = self.elements.clone();
        elements.remove(index);
        Chain {
            window: self.window,
            elements,
        }
    }

    pub fn position(&self, d: &DegreeSequence) -> Option<usize> {
        self.elements.iter().position(|e| e == d)
    }
}

/// Numbering of the `(N-M+1) x (n+1)` grid, decreasing along each row and
/// increasing down each column. `rows[r][i]` is the cell of row label `M + r`
/// in column `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, PosetError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if height == 0 || width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(PosetError::InvalidTableau("matrix must be nonempty and rectangular".into()));
        }
        let total = height * width;
        let mut seen = vec![false; total + 1];
        for &v in rows.iter().flatten() {
            if v == 0 || v > total || seen[v] {
                return Err(PosetError::InvalidTableau(format!(
                    "entries must be a permutation of 1..={total}"
                )));
            }
            seen[v] = true;
        }
        for (r, row) in rows.iter().enumerate() {
            for i in 0..width {
                if i + 1 < width && row[i] <= row[i + 1] {
                    return Err(PosetError::InvalidTableau(format!(
                        "row {r} must increase to the left at column {i}"
                    )));
                }
                if r + 1 < height && row[i] >= rows[r + 1][i] {
                    return Err(PosetError::InvalidTableau(format!(
                        "column {i} must increase downwards at row {r}"
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    fn from_flat(flat: &[u16], width: usize) -> Self {
        Self {
            rows: flat
                .chunks(width)
                .map(|c| c.iter().map(|&v| v as usize).collect())
                .collect(),
        }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>w$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn chain_from_tableau(t: &Tableau, w: &Window) -> Result<Chain, PosetError> {
    if t.height() != w.height() + 1 || t.width() != w.n + 1 {
        return Err(PosetError::InvalidTableau(format!(
            "expected a {}x{} matrix for window {w}",
            w.height() + 1,
            w.n + 1
        )));
    }
    let mut position = vec![(0, 0); w.cells() + 1];
    for (r, row) in t.rows.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            position[v] = (r, i);
        }
    }
    let len = chain_length(w);
    let mut cur = w.minimum();
    let mut elements = vec![cur.clone()];
    for k in 1..len {
        let (r, i) = position[k];
        let live_row = (i < cur.len()).then(|| w.row(i, cur.degrees()[i])).flatten();
        if live_row != Some(r) {
            return Err(PosetError::InvalidTableau(format!(
                "cell numbered {k} is not removable at that point of the chain"
            )));
        }
        let step = if r < w.height() { Step::Raise(i) } else { Step::Drop };
        cur = w.apply(&cur, step).ok_or_else(|| {
            PosetError::InvalidTableau(format!("cell numbered {k} does not give a cover step"))
        })?;
        elements.push(cur.clone());
    }
    Ok(Chain {
        window: *w,
        elements,
    })
}

pub fn tableau_from_chain(c: &Chain) -> Result<Tableau, PosetError> {
    if !c.is_maximal() {
        return Err(PosetError::ChainNotMaximal);
    }
    let w = c.window;
    let mut rows = vec![vec![0usize; w.n + 1]; w.height() + 1];
    let mut k = 0;
    for pair in c.elements.windows(2) {
        let step = w.step_between(&pair[0], &pair[1]).expect("maximal chain");
        let (r, i) = w.removed_cell(&pair[0], step);
        k += 1;
        rows[r][i] = k;
    }
    for i in (0..=w.min_codim).rev() {
        k += 1;
        rows[w.height()][i] = k;
    }
    Tableau::new(rows)
}

fn limit_from_env() -> usize {
    std::env::var("BS_DECOMP_MAX_ENUM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_LIMIT)
}

/// Iterator over maximal chains in lexicographic order of their tableaux
/// (row-major).
pub struct MaximalChains {
    window: Window,
    tableaux: std::vec::IntoIter<Vec<u16>>,
}

impl MaximalChains {
    pub fn window(&self) -> &Window {
        &self.window
    }
}

impl Iterator for MaximalChains {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        let flat = self.tableaux.next()?;
        let t = Tableau::from_flat(&flat, self.window.n + 1);
        Some(chain_from_tableau(&t, &self.window).expect("enumerated tableau is valid"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.tableaux.size_hint()
    }
}

impl ExactSizeIterator for MaximalChains {}

/// All maximal chains, capped by `BS_DECOMP_MAX_ENUM` (default one million).
pub fn maximal_chains(w: &Window) -> Result<MaximalChains, PosetError> {
    maximal_chains_with_limit(w, limit_from_env())
}

pub fn maximal_chains_with_limit(w: &Window, limit: usize) -> Result<MaximalChains, PosetError> {
    let tableaux = maximal_tableaux(w, limit)?;
    Ok(MaximalChains {
        window: *w,
        tableaux: tableaux.into_iter(),
    })
}

/// Sorted flat tableaux of every maximal chain.
fn maximal_tableaux(w: &Window, limit: usize) -> Result<Vec<Vec<u16>>, PosetError> {
    if count_maximal_chains(w) > limit as u128 {
        return Err(PosetError::EnumerationLimit(limit));
    }
    let width = w.n + 1;
    let len = chain_length(w);
    let mut out = Vec::new();
    let mut flat = vec![0u16; w.cells()];
    for i in 0..=w.min_codim {
        flat[w.height() * width + i] = (w.cells() - i) as u16;
    }
    // explicit DFS: each frame remembers which cover to try next
    let start = w.minimum();
    let covers = w.upper_covers(&start);
    let mut path: Vec<(DegreeSequence, Vec<(Step, DegreeSequence)>, usize)> = vec![(start, covers, 0)];
    loop {
        let depth = path.len();
        let Some((cur, covers, next)) = path.last_mut() else {
            break;
        };
        if depth == len {
            out.push(flat.clone());
            path.pop();
            continue;
        }
        if *next >= covers.len() {
            path.pop();
            continue;
        }
        let (step, to) = covers[*next].clone();
        *next += 1;
        let (r, i) = w.removed_cell(cur, step);
        flat[r * width + i] = depth as u16;
        let up = w.upper_covers(&to);
        path.push((to, up, 0));
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of maximal chains, by dynamic programming over the window.
pub fn count_maximal_chains(w: &Window) -> u128 {
    fn go(w: &Window, d: &DegreeSequence, memo: &mut HashMap<DegreeSequence, u128>) -> u128 {
        if *d == w.maximum() {
            return 1;
        }
        if let Some(&v) = memo.get(d) {
            return v;
        }
        let total = w.upper_covers(d).iter().map(|(_, e)| go(w, e, memo)).sum();
        memo.insert(d.clone(), total);
        total
    }
    go(w, &w.minimum(), &mut HashMap::new())
}

/// All saturated chains from `a` up to `b` (both included).
pub fn saturated_chains(w: &Window, a: &DegreeSequence, b: &DegreeSequence) -> Vec<Vec<DegreeSequence>> {
    fn go(w: &Window, cur: &DegreeSequence, b: &DegreeSequence, path: &mut Vec<DegreeSequence>, out: &mut Vec<Vec<DegreeSequence>>) {
        if cur == b {
            out.push(path.clone());
            return;
        }
        for (_, next) in w.upper_covers(cur) {
            if next.is_below(b) {
                path.push(next.clone());
                go(w, &next, b, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if a.is_below(b) {
        go(w, a, b, &mut vec![a.clone()], &mut out);
    }
    out
}

/// Every maximal chain containing all elements of `c`, in tableau order.
pub fn complete_chain(c: &Chain) -> Vec<Chain> {
    let w = c.window;
    let mut anchors = Vec::with_capacity(c.len() + 2);
    anchors.push(w.minimum());
    anchors.extend(c.elements.iter().cloned());
    anchors.push(w.maximum());
    anchors.dedup();

    let mut partial: Vec<Vec<DegreeSequence>> = vec![vec![anchors[0].clone()]];
    for pair in anchors.windows(2) {
        let segments = saturated_chains(&w, &pair[0], &pair[1]);
        let mut next = Vec::with_capacity(partial.len() * segments.len());
        for head in &partial {
            for seg in &segments {
                let mut v = head.clone();
                v.extend(seg[1..].iter().cloned());
                next.push(v);
            }
        }
        partial = next;
    }
    let mut chains: Vec<(Tableau, Chain)> = partial
        .into_iter()
        .map(|elements| {
            let chain = Chain { window: w, elements };
            (tableau_from_chain(&chain).expect("completion is maximal"), chain)
        })
        .collect();
    chains.sort_by(|a, b| a.0.cmp(&b.0));
    chains.dedup_by(|a, b| a.0 == b.0);
    chains.into_iter().map(|(_, c)| c).collect()
}
