//! Run-length-limited systems, irreducible-word languages as constrained
//! graphs, word counts and capacities.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::E;
use std::io::Write;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::transform::zero_runs;
use crate::word::{is_square_at, LengthSet, Symbol, Word};

/// Growth rate of a constrained system and, where they apply, closed-form
/// bounds on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityResult {
    /// `log_q` of the eigenvalue; 0 for finite languages.
    pub value: f64,
    pub eigenvalue: f64,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub iterations: usize,
}

impl CapacityResult {
    /// Capacity in bits per symbol.
    pub fn bits(&self) -> f64 {
        if self.eigenvalue > 0.0 {
            self.eigenvalue.log2().max(0.0)
        } else {
            0.0
        }
    }
}

/// Every zero run of `z` is shorter than `k`.
pub fn rll_member(z: &Word, k: usize) -> bool {
    zero_runs(z.symbols()).0.iter().all(|&m| m < k)
}

/// Number of `q`-ary words of length `m` whose zero runs are all shorter
/// than `k`. Saturates at `u128::MAX`.
pub fn count_rll(m: usize, q: u32, k: usize) -> u128 {
    // C(m) = q^m for m < k; otherwise a word is a shorter word, a non-zero
    // symbol and 0..k-1 zeros: C(m) = (q-1) * sum_{j=1..k} C(m-j)
    let mut counts: Vec<u128> = Vec::with_capacity(m + 1);
    for len in 0..=m {
        let c = if len < k {
            (q as u128).saturating_pow(len as u32)
        } else {
            let sum = (1..=k).fold(0u128, |acc, j| acc.saturating_add(counts[len - j]));
            sum.saturating_mul(q as u128 - 1)
        };
        counts.push(c);
    }
    counts[m]
}

/// Number of words of length `n` with no square of half-length exactly `k`.
pub fn count_irr_fixed(n: usize, q: u32, k: usize) -> Result<u128> {
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    Ok((q as u128).pow(k as u32).saturating_mul(count_rll(n - k, q, k)))
}

/// All words of length `n` over `Z_q` without a square whose half-length
/// lies in `lengths`, lexicographically.
pub fn irreducible_words(q: u32, lengths: &LengthSet, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf: Vec<Symbol> = Vec::with_capacity(n);
    extend_irreducible(q, lengths, n, &mut buf, &mut |s| out.push(Word::from_raw(s.to_vec(), q)));
    out
}

/// `|Irr(n)|` for the given length set.
pub fn count_irreducible(q: u32, lengths: &LengthSet, n: usize) -> u64 {
    let mut count = 0u64;
    let mut buf: Vec<Symbol> = Vec::with_capacity(n);
    extend_irreducible(q, lengths, n, &mut buf, &mut |_| count += 1);
    count
}

fn ends_in_square(s: &[Symbol], lengths: &LengthSet) -> bool {
    lengths.lengths().iter().take_while(|&&h| 2 * h <= s.len()).any(|&h| is_square_at(s, s.len() - 2 * h, h))
}

// A prefix-closed language: it suffices to test squares ending at the new symbol.
fn extend_irreducible(q: u32, lengths: &LengthSet, n: usize, buf: &mut Vec<Symbol>, emit: &mut dyn FnMut(&[Symbol])) {
    if buf.len() == n {
        emit(buf);
        return;
    }
    for a in 0..q {
        buf.push(a);
        if !ends_in_square(buf, lengths) {
            extend_irreducible(q, lengths, n, buf, emit);
        }
        buf.pop();
    }
}

/// `A_q(d)`: the `(d+1) x (d+1)` transfer matrix of the RLL system with
/// zero runs of length at most `d`.
pub fn rll_transfer_matrix(q: u32, d: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; d + 1]; d + 1];
    for (i, row) in a.iter_mut().enumerate() {
        row[0] = (q - 1) as f64;
        if i < d {
            row[i + 1] = 1.0;
        }
    }
    a
}

/// Largest root of `x^{d+2} - q x^{d+1} + q - 1` by bisection; equals the
/// spectral radius of `A_q(d)`.
pub fn rll_char_root(q: u32, d: usize) -> f64 {
    if d == 0 {
        return (q - 1) as f64;
    }
    let qf = q as f64;
    let f = |x: f64| x.powi(d as i32 + 2) - qf * x.powi(d as i32 + 1) + qf - 1.0;
    // f < 0 on ((d+1)q/(d+2), root) and f(q) = q - 1 > 0
    let (mut lo, mut hi) = ((d as f64 + 1.0) * qf / (d as f64 + 2.0), qf);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

const MAX_POWER_ITERATIONS: usize = 10_000_000;

/// Perron root of an irreducible non-negative matrix given as weighted
/// edges, by power iteration on `A + I`. Stops once the Collatz-Wielandt
/// bracket `min (Mx)_i/x_i <= rho <= max (Mx)_i/x_i` is narrower than
/// `tol` relative to its upper end.
fn perron_root(n: usize, edges: &[(usize, usize, f64)], tol: f64) -> (f64, usize) {
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    for iter in 1..=MAX_POWER_ITERATIONS {
        y.copy_from_slice(&x);
        for &(i, j, w) in edges {
            y[i] += w * x[j];
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let scale = y.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            x[i] = y[i] / scale;
        }
        if hi - lo <= tol * hi {
            return (0.5 * (lo + hi) - 1.0, iter);
        }
    }
    panic!("power iteration did not converge");
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Principal branch of the Lambert W function by Halley iteration.
pub fn lambert_w0(z: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let branch = -1.0 / E;
    if z.is_nan() || z < branch - 4.0 * f64::EPSILON {
        return Err(Error::InvalidParameter(format!("W0 is undefined below -1/e, got {z}")));
    }
    if z <= branch {
        return Ok(-1.0);
    }
    let mut w = if z < -0.25 {
        // series about the branch point
        let p = (2.0 * (E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if z < 3.0 {
        z.ln_1p() * 0.75
    } else {
        let l = z.ln();
        l - l.ln()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        if f.abs() <= tol {
            break;
        }
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

/// `log2 q - (q-1) log2 e / q^{d+2}`: the leading terms of the binary
/// capacity of the RLL system with zero runs of length at most `d`.
pub fn capacity_asymptotic(q: u32, d: usize) -> f64 {
    let qf = q as f64;
    qf.log2() - (qf - 1.0) * E.log2() / qf.powi(d as i32 + 2)
}

/// Closed-form bracket `q e^{-(q-1) alpha / q^{d+2}} <= lambda <=
/// q e^{-(q-1)/q^{d+2}}` with `alpha = e^{-W0(z)}` and
/// `z = -(q-1)(d+2)/q^{d+2}`. `None` when `z < -1/e`.
pub fn rll_bounds(q: u32, d: usize) -> Option<(f64, f64)> {
    let qf = q as f64;
    let qd = qf.powi(d as i32 + 2);
    let z = -(qf - 1.0) * (d as f64 + 2.0) / qd;
    let w = lambert_w0(z, 1e-15).ok()?;
    let alpha = (-w).exp();
    Some((qf * (-(qf - 1.0) * alpha / qd).exp(), qf * (-(qf - 1.0) / qd).exp()))
}

/// Capacity of the `q`-ary RLL system whose zero runs have length at most
/// `d`, from the spectral radius of `A_q(d)`. The value is in base `q`.
pub fn capacity_rll(q: u32, d: usize, tol: f64) -> Result<CapacityResult> {
    check_tol(tol)?;
    if q < 2 {
        return Err(Error::InvalidParameter(format!("alphabet size must be at least 2, got {q}")));
    }
    let a = rll_transfer_matrix(q, d);
    let edges: Vec<(usize, usize, f64)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, &v)| v != 0.0).map(move |(j, &v)| (i, j, v)))
        .collect();
    let (eigenvalue, iterations) = perron_root(d + 1, &edges, tol);
    let bounds = rll_bounds(q, d);
    Ok(CapacityResult {
        value: eigenvalue.ln() / (q as f64).ln(),
        eigenvalue,
        lower_bound: bounds.map(|b| b.0),
        upper_bound: bounds.map(|b| b.1),
        iterations,
    })
}

/// Capacity of the irreducible words of the fixed-length channel with
/// duplication length `k`, i.e. of the RLL system with runs below `k`.
pub fn capacity_fixed(q: u32, k: usize, tol: f64) -> Result<CapacityResult> {
    if k == 0 {
        return Err(Error::InvalidParameter("duplication length must be positive".into()));
    }
    capacity_rll(q, k - 1, tol)
}

/// Labelled graph whose states are words of length `memory`; an edge
/// `s --a--> s[1..] a` exists when the window `s a` avoids every
/// forbidden square. Deterministic per state and label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedGraph {
    q: u32,
    memory: usize,
    states: Vec<Word>,
    // (from, label, to), sorted
    edges: Vec<(usize, Symbol, usize)>,
}

/// Upper bound on the number of windows `build_irr_graph` will scan.
pub const GRAPH_WINDOW_BUDGET: u64 = 1 << 24;

/// Graph generating the words with no square of half-length at most
/// `k_bound`. States have length `2 k_bound - 1`, so each window has
/// length `2 k_bound` and holds every square that ends at its last
/// symbol. States without edges are dropped.
pub fn build_irr_graph(q: u32, k_bound: usize) -> Result<ConstrainedGraph> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("alphabet size must be at least 2, got {q}")));
    }
    if !(1..=3).contains(&k_bound) {
        return Err(Error::InvalidParameter(format!("square bound must be 1, 2 or 3, got {k_bound}")));
    }
    let window = 2 * k_bound;
    let total = (q as u64).checked_pow(window as u32).filter(|&t| t <= GRAPH_WINDOW_BUDGET);
    let total = total.ok_or(Error::BudgetExceeded(GRAPH_WINDOW_BUDGET as usize))?;
    let lengths = LengthSet::up_to(k_bound)?;

    let mut raw_edges: Vec<(Word, Symbol, Word)> = Vec::new();
    for code in 0..total {
        let w = Word::from_index(code, window, q);
        let s = w.symbols();
        let clean = (0..=window - 2)
            .all(|i| lengths.lengths().iter().take_while(|&&h| i + 2 * h <= window).all(|&h| !is_square_at(s, i, h)));
        if clean {
            raw_edges.push((w.slice(0..window - 1), s[window - 1], w.slice(1..window)));
        }
    }
    let states: BTreeSet<Word> = raw_edges.iter().flat_map(|(a, _, b)| [a.clone(), b.clone()]).collect();
    let states: Vec<Word> = states.into_iter().collect();
    let index: BTreeMap<&Word, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut edges: Vec<(usize, Symbol, usize)> = raw_edges.iter().map(|(a, l, b)| (index[a], *l, index[b])).collect();
    edges.sort_unstable();
    Ok(ConstrainedGraph { q, memory: window - 1, states, edges })
}

impl ConstrainedGraph {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn edges(&self) -> &[(usize, Symbol, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    fn successors(&self, state: usize) -> &[(usize, Symbol, usize)] {
        let lo = self.edges.partition_point(|e| e.0 < state);
        let hi = self.edges.partition_point(|e| e.0 <= state);
        &self.edges[lo..hi]
    }

    /// Words of length `n` read off the graph: a state followed by the
    /// labels of a path, or a factor of a state when `n` is shorter than
    /// the memory.
    pub fn path_words(&self, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        if n <= self.memory {
            for s in &self.states {
                for i in 0..=self.memory - n {
                    out.insert(s.slice(i..i + n));
                }
            }
            return out;
        }
        for start in 0..self.states.len() {
            let mut buf = self.states[start].symbols().to_vec();
            self.walk(start, n, &mut buf, &mut out);
        }
        out
    }

    fn walk(&self, state: usize, n: usize, buf: &mut Vec<Symbol>, out: &mut BTreeSet<Word>) {
        if buf.len() == n {
            out.insert(Word::from_raw(buf.clone(), self.q));
            return;
        }
        for &(_, label, next) in self.successors(state) {
            buf.push(label);
            self.walk(next, n, buf, out);
            buf.pop();
        }
    }

    /// One line per edge: `state<TAB>label<TAB>next_state`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let label = |s: Symbol| Word::from_raw(vec![s], self.q).to_string();
        for &(from, l, to) in &self.edges {
            writeln!(out, "{}\t{}\t{}", self.states[from], label(l), self.states[to])?;
        }
        Ok(())
    }
}

/// Capacity (base `q`) of the language generated by the graph: the
/// largest Perron root over its strongly connected components. A graph
/// without cycles generates a finite language and has capacity 0.
pub fn capacity_irr_graph(g: &ConstrainedGraph, tol: f64) -> Result<CapacityResult> {
    check_tol(tol)?;
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(g.num_states(), g.num_edges());
    let nodes: Vec<_> = (0..g.num_states()).map(|_| dg.add_node(())).collect();
    for &(a, _, b) in g.edges() {
        dg.add_edge(nodes[a], nodes[b], ());
    }
    let mut best = CapacityResult { value: 0.0, eigenvalue: 0.0, lower_bound: None, upper_bound: None, iterations: 0 };
    for component in tarjan_scc(&dg) {
        let local: BTreeMap<usize, usize> = component.iter().enumerate().map(|(i, n)| (n.index(), i)).collect();
        let edges: Vec<(usize, usize, f64)> =
            g.edges().iter().filter_map(|&(a, _, b)| Some((*local.get(&a)?, *local.get(&b)?, 1.0))).collect();
        if edges.is_empty() {
            continue;
        }
        let (rho, iterations) = perron_root(component.len(), &edges, tol);
        best.iterations += iterations;
        if rho > best.eigenvalue {
            best.eigenvalue = rho;
        }
    }
    if best.eigenvalue > 1.0 {
        best.value = best.eigenvalue.ln() / (g.q() as f64).ln();
    }
    Ok(best)
}
