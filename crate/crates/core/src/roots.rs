//! Duplication roots, congruence, the `d_k` metric and common descendants.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::transform::{mu, phi, phi_inverse, sigma, zero_runs, TransformPair, ZeroSignature};
use crate::word::{deduplicate, find_squares, is_square_at, LengthSet, Symbol, Word};

/// Default node budget for [`roots_general`].
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// How roots behave for a given length set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootFamily {
    /// A single length `k`: unique root through the transform.
    Fixed(usize),
    /// `{1..k}` with `k <= 3`: unique root by greedy deduplication.
    Bounded(usize),
    /// Anything else: roots may be several.
    General,
}

pub fn family(lengths: &LengthSet) -> RootFamily {
    match lengths.lengths() {
        [k] => RootFamily::Fixed(*k),
        [1, 2] => RootFamily::Bounded(2),
        [1, 2, 3] => RootFamily::Bounded(3),
        _ => RootFamily::General,
    }
}

/// All roots of a word under one length set, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<Word>,
    pub lengths: LengthSet,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_unique(&self) -> bool {
        self.roots.len() == 1
    }
}

/// The unique `k`-root `phi_k^{-1}(y, mu_k(z))`. Words shorter than `k`
/// are their own root.
pub fn root_fixed(x: &Word, k: usize) -> Word {
    assert!(k > 0, "duplication length must be positive");
    if x.len() < k {
        return x.clone();
    }
    let p = phi(x, k).expect("length checked");
    phi_inverse(&TransformPair { tail: mu(&p.tail, k), ..p })
}

/// Root under deduplications of length at most `k` for `k <= 3`, by
/// repeatedly removing the leftmost-shortest square.
pub fn root_bounded(x: &Word, k: usize) -> Result<Word> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParameter(format!("bounded roots are unique only for k <= 3, got {k}")));
    }
    let mut s: Vec<Symbol> = x.symbols().to_vec();
    let mut i = 0;
    while i < s.len() {
        match (1..=k).find(|&h| is_square_at(&s, i, h)) {
            Some(h) => {
                s.drain(i + h..i + 2 * h);
                // no square starts before `i`; a new one must reach the cut at `i + h`
                i = i.saturating_sub(2 * k - 1);
            }
            None => i += 1,
        }
    }
    Ok(Word::new(s, x.q()).expect("symbols come from a valid word"))
}

/// The unique root when the length set guarantees one.
pub fn unique_root(x: &Word, lengths: &LengthSet) -> Option<Word> {
    match family(lengths) {
        RootFamily::Fixed(k) => Some(root_fixed(x, k)),
        RootFamily::Bounded(k) => root_bounded(x, k).ok(),
        RootFamily::General => None,
    }
}

pub fn roots_general(x: &Word, lengths: &LengthSet) -> Result<RootSet> {
    roots_general_with_budget(x, lengths, DEFAULT_NODE_BUDGET)
}

/// Exhaustive search of the deduplication DAG below `x`, memoized on the
/// word value. Fails once more than `budget` distinct ancestors are seen.
pub fn roots_general_with_budget(x: &Word, lengths: &LengthSet, budget: usize) -> Result<RootSet> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut roots: BTreeSet<Word> = BTreeSet::new();
    let mut stack = vec![x.clone()];
    seen.insert(x.clone());
    while let Some(w) = stack.pop() {
        let squares = find_squares(&w, lengths);
        if squares.is_empty() {
            roots.insert(w);
            continue;
        }
        for sq in squares {
            let a = deduplicate(&w, sq.start, sq.half_len);
            if seen.insert(a.clone()) {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                stack.push(a);
            }
        }
    }
    Ok(RootSet { roots: roots.into_iter().collect(), lengths: lengths.clone() })
}

/// Whether two words have the same roots.
pub fn congruent(x: &Word, x2: &Word, lengths: &LengthSet) -> Result<bool> {
    if x.q() != x2.q() {
        return Err(Error::AlphabetMismatch { left: x.q(), right: x2.q() });
    }
    if let (Some(a), Some(b)) = (unique_root(x, lengths), unique_root(x2, lengths)) {
        return Ok(a == b);
    }
    Ok(roots_general(x, lengths)?.roots == roots_general(x2, lengths)?.roots)
}

fn require_congruent(x: &Word, x2: &Word, lengths: &LengthSet) -> Result<()> {
    if congruent(x, x2, lengths)? {
        Ok(())
    } else {
        Err(Error::NotCongruent)
    }
}

fn signatures(x: &Word, x2: &Word, k: usize) -> Result<Option<(ZeroSignature, ZeroSignature)>> {
    if x.len() != x2.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: x2.len() });
    }
    require_congruent(x, x2, &LengthSet::fixed(k)?)?;
    if x.len() < k {
        return Ok(None);
    }
    Ok(Some((sigma(&phi(x, k)?.tail, k), sigma(&phi(x2, k)?.tail, k))))
}

/// l1 distance between the zero signatures of two equal-length
/// `k`-congruent words. Always even, since both signatures have the same
/// weight.
pub fn signature_distance(x: &Word, x2: &Word, k: usize) -> Result<usize> {
    Ok(signatures(x, x2, k)?
        .map(|(a, b)| a.l1_distance(&b).expect("congruent words have equally long signatures"))
        .unwrap_or(0))
}

/// `d_k(x, x2)`: the least `t` such that `t` duplications of length `k`
/// carry both words to a common descendant. The cheapest common
/// descendant has the componentwise maximum signature, so each side needs
/// half the signature distance.
pub fn distance(x: &Word, x2: &Word, k: usize) -> Result<usize> {
    Ok(signature_distance(x, x2, k)? / 2)
}

/// Common descendant of two `k`-congruent words whose zero runs are the
/// componentwise maxima of the inputs' runs.
pub fn join_fixed(x: &Word, x2: &Word, k: usize) -> Result<Word> {
    require_congruent(x, x2, &LengthSet::fixed(k)?)?;
    if x.len() < k {
        return Ok(x.clone());
    }
    let p1 = phi(x, k)?;
    let p2 = phi(x2, k)?;
    let (runs1, nonzero) = zero_runs(p1.tail.symbols());
    let (runs2, _) = zero_runs(p2.tail.symbols());
    let mut tail = Vec::new();
    for (i, (&a, &b)) in runs1.iter().zip(&runs2).enumerate() {
        tail.extend(std::iter::repeat_n(0, a.max(b)));
        if let Some(&s) = nonzero.get(i) {
            tail.push(s);
        }
    }
    Ok(phi_inverse(&TransformPair { tail: Word::from_raw(tail, x.q()), ..p1 }))
}

/// Maximal runs of equal symbols: `(symbol, exponent)`.
fn run_encode(x: &[Symbol]) -> Vec<(Symbol, usize)> {
    let mut runs: Vec<(Symbol, usize)> = Vec::new();
    for &s in x {
        match runs.last_mut() {
            Some((last, e)) if *last == s => *e += 1,
            _ => runs.push((s, 1)),
        }
    }
    runs
}

/// Replays, on the runs of `x`, the length-2 duplications that carry the
/// run-letter word of `x` to `target` (a 2-descendant of it). A duplication
/// of two adjacent run letters `a b` is realised in `x` by duplicating the
/// last `a` and the first `b`, so the original runs keep their exponents
/// and the two new runs get exponent 1.
fn embed_runs(runs: &[(Symbol, usize)], target: &Word) -> Vec<usize> {
    let q = target.q();
    let letters = Word::from_raw(runs.iter().map(|r| r.0).collect(), q);
    let mut runs = runs.to_vec();
    if letters.len() >= 2 {
        let from = phi(&letters, 2).expect("length checked");
        let to = phi(target, 2).expect("descendant is longer");
        let (m_from, _) = zero_runs(from.tail.symbols());
        let s_from: Vec<usize> = m_from.iter().map(|m| m / 2).collect();
        let s_to = sigma(&to.tail, 2);
        // tail position where zero run j starts
        let mut starts = Vec::with_capacity(m_from.len());
        let mut pos = 0;
        for &m in &m_from {
            starts.push(pos);
            pos += m + 1;
        }
        for j in (0..m_from.len()).rev() {
            let p = starts[j];
            for _ in s_from[j]..s_to.counts()[j] {
                let (a, b) = (runs[p].0, runs[p + 1].0);
                runs.splice(p + 1..p + 1, [(b, 1), (a, 1)]);
            }
        }
    }
    debug_assert_eq!(runs.iter().map(|r| r.0).collect::<Vec<_>>(), target.symbols());
    runs.into_iter().map(|r| r.1).collect()
}

/// Common descendant of two `<=2`-congruent words.
///
/// Both words are run-length encoded; their run-letter words are
/// 2-congruent, so they share the 2-join `J`. Each input is carried to the
/// run-letter word `J` and the exponents of the two embeddings are
/// maximised run by run.
pub fn join_le2(x: &Word, x2: &Word) -> Result<Word> {
    require_congruent(x, x2, &LengthSet::up_to(2)?)?;
    let runs1 = run_encode(x.symbols());
    let runs2 = run_encode(x2.symbols());
    let letters1 = Word::from_raw(runs1.iter().map(|r| r.0).collect(), x.q());
    let letters2 = Word::from_raw(runs2.iter().map(|r| r.0).collect(), x.q());
    let joined = if letters1.len() < 2 { letters1.clone() } else { join_fixed(&letters1, &letters2, 2)? };
    let e1 = embed_runs(&runs1, &joined);
    let e2 = embed_runs(&runs2, &joined);
    let mut out = Vec::new();
    for (i, &s) in joined.symbols().iter().enumerate() {
        out.extend(std::iter::repeat_n(s, e1[i].max(e2[i])));
    }
    Ok(Word::from_raw(out, x.q()))
}

/// Outcome for one word in a [`RootTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootCount {
    Unique(Word),
    Multiple,
}

const MULTIPLE: u64 = u64::MAX;
const CODE_BITS: u32 = 48;

/// Root multiplicity of every word up to a length, computed bottom-up:
/// the roots of a reducible word are the union of the roots of its
/// immediate ancestors, which are all shorter.
pub struct RootTable {
    q: u32,
    lengths: LengthSet,
    // cells[len][code]: packed unique root, or MULTIPLE
    cells: Vec<Vec<u64>>,
}

/// Upper bound on the number of words a [`RootTable`] may hold.
pub const ROOT_TABLE_BUDGET: u64 = 1 << 27;

fn pack(len: usize, code: u64) -> u64 {
    ((len as u64) << CODE_BITS) | code
}

fn encode(digits: &[Symbol], q: u32) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * q as u64 + d as u64)
}

impl RootTable {
    pub fn build(q: u32, lengths: &LengthSet, max_len: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("alphabet size must be at least 1".into()));
        }
        let mut total: u64 = 0;
        for len in 0..=max_len {
            let count = (q as u64)
                .checked_pow(len as u32)
                .filter(|&c| c < (1 << CODE_BITS))
                .ok_or(Error::BudgetExceeded(ROOT_TABLE_BUDGET as usize))?;
            total += count;
        }
        if total > ROOT_TABLE_BUDGET {
            return Err(Error::BudgetExceeded(ROOT_TABLE_BUDGET as usize));
        }

        let mut cells: Vec<Vec<u64>> = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            let count = (q as u64).pow(len as u32);
            let row: Vec<u64> = (0..count)
                .into_par_iter()
                .map(|code| {
                    let word = Word::from_index(code, len, q);
                    let s = word.symbols();
                    let mut state: Option<u64> = None;
                    let mut buf = Vec::with_capacity(len);
                    for &h in lengths.lengths() {
                        if 2 * h > len {
                            break;
                        }
                        for i in 0..=len - 2 * h {
                            if !is_square_at(s, i, h) {
                                continue;
                            }
                            buf.clear();
                            buf.extend_from_slice(&s[..i + h]);
                            buf.extend_from_slice(&s[i + 2 * h..]);
                            let root = cells[len - h][encode(&buf, q) as usize];
                            match state {
                                _ if root == MULTIPLE => return MULTIPLE,
                                None => state = Some(root),
                                Some(r) if r != root => return MULTIPLE,
                                Some(_) => {}
                            }
                        }
                    }
                    state.unwrap_or_else(|| pack(len, code))
                })
                .collect();
            cells.push(row);
        }
        Ok(RootTable { q, lengths: lengths.clone(), cells })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn lengths(&self) -> &LengthSet {
        &self.lengths
    }

    pub fn max_len(&self) -> usize {
        self.cells.len() - 1
    }

    fn unpack(&self, cell: u64) -> RootCount {
        if cell == MULTIPLE {
            return RootCount::Multiple;
        }
        let len = (cell >> CODE_BITS) as usize;
        let code = cell & ((1 << CODE_BITS) - 1);
        RootCount::Unique(Word::from_index(code, len, self.q))
    }

    /// Panics if the word is longer than the table or over another alphabet.
    pub fn lookup(&self, x: &Word) -> RootCount {
        assert_eq!(x.q(), self.q, "alphabet mismatch");
        self.unpack(self.cells[x.len()][encode(x.symbols(), self.q) as usize])
    }

    /// Every word of length `len` with its root count, lexicographically.
    pub fn iter_len(&self, len: usize) -> impl Iterator<Item = (Word, RootCount)> + '_ {
        self.cells[len]
            .iter()
            .enumerate()
            .map(move |(code, &cell)| (Word::from_index(code as u64, len, self.q), self.unpack(cell)))
    }

    /// Shortest (then lexicographically first) word with several roots.
    pub fn first_multiple(&self) -> Option<Word> {
        self.cells.iter().enumerate().find_map(|(len, row)| {
            row.iter().position(|&c| c == MULTIPLE).map(|code| Word::from_index(code as u64, len, self.q))
        })
    }

    /// Distinct unique roots among the words of length `len`.
    pub fn distinct_roots(&self, len: usize) -> Option<BTreeSet<Word>> {
        let mut out = BTreeSet::new();
        for (_, count) in self.iter_len(len) {
            match count {
                RootCount::Unique(r) => {
                    out.insert(r);
                }
                RootCount::Multiple => return None,
            }
        }
        Some(out)
    }
}
