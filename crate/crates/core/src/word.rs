//! Words over `Z_q`, duplication-length sets, tandem duplication and
//! deduplication rules, square detection and descendant/ancestor cones.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Symbol = u32;

const SYMBOL_CHARS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest alphabet that can be rendered with the `0-9a-z` text convention.
pub const MAX_TEXT_ALPHABET: u32 = 36;

/// A finite string over `Z_q`.
///
/// Ordering is lexicographic on the symbols, so for equal-length words it
/// coincides with the ordering of their text renderings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<Symbol>,
    q: u32,
}

impl Word {
    pub fn new(symbols: Vec<Symbol>, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("alphabet size must be at least 1".into()));
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::InvalidSymbol { symbol, q });
        }
        Ok(Word { symbols, q })
    }

    /// Caller guarantees every symbol is below `q`.
    pub(crate) fn from_raw(symbols: Vec<Symbol>, q: u32) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        Word { symbols, q }
    }

    pub fn empty(q: u32) -> Self {
        Word { symbols: Vec::new(), q }
    }

    /// Parses a word written with the characters `0-9a-z`.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        if q == 0 || q > MAX_TEXT_ALPHABET {
            return Err(Error::InvalidParameter(format!("text words need 1 <= q <= {MAX_TEXT_ALPHABET}, got {q}")));
        }
        let symbols = text
            .chars()
            .map(|c| c.to_digit(36).ok_or_else(|| Error::Parse(text.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols, q)
    }

    /// The `index`-th word of length `len` in lexicographic order.
    pub fn from_index(mut index: u64, len: usize, q: u32) -> Self {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % q as u64) as Symbol;
            index /= q as u64;
        }
        Word { symbols, q }
    }

    /// All `q^len` words of length `len`, in lexicographic order.
    pub fn all(q: u32, len: usize) -> impl Iterator<Item = Word> {
        let count = (q as u64).checked_pow(len as u32).expect("word space too large");
        (0..count).map(move |i| Word::from_index(i, len, q))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.symbols.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Word { symbols, q: self.q.max(other.q) }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word { symbols: self.symbols[range].to_vec(), q: self.q }
    }

    /// Same symbols viewed over a larger alphabet.
    pub fn with_alphabet(&self, q: u32) -> Result<Word> {
        Word::new(self.symbols.clone(), q)
    }

    pub fn hamming_weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            match SYMBOL_CHARS.get(s as usize) {
                Some(&c) => write!(f, "{}", c as char)?,
                None => write!(f, "<{s}>")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}/{})", self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LengthKind {
    Fixed,
    UpTo,
    Explicit,
}

/// A set `U` of permitted duplication lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LengthSet {
    kind: LengthKind,
    // sorted, distinct, all >= 1
    lengths: Vec<usize>,
}

impl LengthSet {
    pub fn fixed(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLengthSet("duplication length must be positive".into()));
        }
        Ok(LengthSet { kind: LengthKind::Fixed, lengths: vec![k] })
    }

    pub fn up_to(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLengthSet("bound must be positive".into()));
        }
        Ok(LengthSet { kind: LengthKind::UpTo, lengths: (1..=k).collect() })
    }

    pub fn explicit<I: IntoIterator<Item = usize>>(lengths: I) -> Result<Self> {
        let set: BTreeSet<usize> = lengths.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidLengthSet("length set is empty".into()));
        }
        if set.contains(&0) {
            return Err(Error::InvalidLengthSet("duplication length must be positive".into()));
        }
        Ok(LengthSet { kind: LengthKind::Explicit, lengths: set.into_iter().collect() })
    }

    pub fn kind(&self) -> LengthKind {
        self.kind
    }

    pub fn min(&self) -> usize {
        self.lengths[0]
    }

    pub fn max(&self) -> usize {
        self.lengths[self.lengths.len() - 1]
    }

    pub fn contains(&self, len: usize) -> bool {
        self.lengths.binary_search(&len).is_ok()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn is_subset_of(&self, other: &LengthSet) -> bool {
        self.lengths.iter().all(|&l| other.contains(l))
    }

    /// Same lengths regardless of how the set was spelled.
    pub fn same_lengths(&self, other: &LengthSet) -> bool {
        self.lengths == other.lengths
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LengthKind::Fixed => write!(f, "{}", self.lengths[0]),
            LengthKind::UpTo => write!(f, "<={}", self.max()),
            LengthKind::Explicit => {
                let parts: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for LengthSet {
    type Err = Error;

    /// Grammar: `K`, `<=K`, or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let number = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::Parse(s.to_string()));
        if let Some(rest) = s.strip_prefix("<=") {
            LengthSet::up_to(number(rest)?)
        } else if s.contains(',') {
            LengthSet::explicit(s.split(',').map(number).collect::<Result<Vec<_>>>()?)
        } else {
            LengthSet::fixed(number(s)?)
        }
    }
}

/// A square `uu` occupying `x[start .. start + 2 * half_len]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub start: usize,
    pub half_len: usize,
}

/// Number of rule applications in a descendant cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Steps {
    /// Words reached by exactly `t` genuine duplications.
    Exactly(usize),
    /// Words reached by at most `t` genuine duplications.
    AtMost(usize),
    Unbounded,
}

/// Tandem duplication `T_{i,k}`: copies `x[i..i+k]` right after itself.
/// Degenerate positions leave `x` unchanged.
pub fn duplicate(x: &Word, i: usize, k: usize) -> Word {
    if k == 0 || i + k > x.len() {
        return x.clone();
    }
    let s = &x.symbols;
    let mut out = Vec::with_capacity(s.len() + k);
    out.extend_from_slice(&s[..i + k]);
    out.extend_from_slice(&s[i..]);
    Word { symbols: out, q: x.q }
}

pub fn is_square_at(x: &[Symbol], start: usize, half_len: usize) -> bool {
    half_len > 0
        && start + 2 * half_len <= x.len()
        && x[start..start + half_len] == x[start + half_len..start + 2 * half_len]
}

/// Tandem deduplication `T^{-1}_{i,k}`: removes one copy of the square at
/// `(i, k)`, or returns the empty word when there is no such square.
pub fn deduplicate(x: &Word, i: usize, k: usize) -> Word {
    if !is_square_at(&x.symbols, i, k) {
        return Word::empty(x.q);
    }
    let mut out = x.symbols.clone();
    out.drain(i + k..i + 2 * k);
    Word { symbols: out, q: x.q }
}

/// All squares with half-length in `lengths`, sorted by `(start, half_len)`.
pub fn find_squares(x: &Word, lengths: &LengthSet) -> Vec<Square> {
    let s = x.symbols();
    let mut out = Vec::new();
    for start in 0..s.len() {
        for &half_len in lengths.lengths() {
            if start + 2 * half_len > s.len() {
                break;
            }
            if is_square_at(s, start, half_len) {
                out.push(Square { start, half_len });
            }
        }
    }
    out
}

pub fn has_square(x: &[Symbol], lengths: &LengthSet) -> bool {
    lengths.lengths().iter().any(|&h| (0..=x.len().saturating_sub(2 * h)).any(|i| is_square_at(x, i, h)))
}

pub fn is_irreducible(x: &Word, lengths: &LengthSet) -> bool {
    !has_square(x.symbols(), lengths)
}

/// Whether two squares of the same word overlap: their occupied
/// intervals intersect and they are not the same square.
pub fn overlapping(s1: Square, s2: Square) -> bool {
    let (i, a) = (s1.start, s1.half_len);
    let (j, b) = (s2.start, s2.half_len);
    let intersect = (i <= j && j < i + 2 * a) || (j <= i && i < j + 2 * b);
    intersect && !(i == j && a == b)
}

fn direct_descendants<'a>(x: &'a Word, lengths: &'a LengthSet) -> impl Iterator<Item = Word> + 'a {
    lengths
        .lengths()
        .iter()
        .filter(move |&&k| k <= x.len())
        .flat_map(move |&k| (0..=x.len() - k).map(move |i| duplicate(x, i, k)))
}

/// Descendant cone of `x`.
///
/// `max_len` truncates the cone; it is required for [`Steps::Unbounded`].
pub fn descendant_cone(x: &Word, lengths: &LengthSet, steps: Steps, max_len: Option<usize>) -> Result<BTreeSet<Word>> {
    let limit = match (steps, max_len) {
        (Steps::Unbounded, None) => return Err(Error::InvalidParameter("an unbounded cone needs a length cap".into())),
        (Steps::Unbounded, Some(l)) if l < x.len() => {
            return Err(Error::InvalidParameter(format!("length cap {l} is below the word length {}", x.len())))
        }
        (_, l) => l.unwrap_or(usize::MAX),
    };
    let rounds = match steps {
        Steps::Exactly(t) | Steps::AtMost(t) => t,
        Steps::Unbounded => usize::MAX,
    };

    let mut seen: HashSet<Word> = HashSet::new();
    let mut frontier: HashSet<Word> = HashSet::new();
    if x.len() <= limit {
        frontier.insert(x.clone());
    }
    let keep_all = !matches!(steps, Steps::Exactly(_));
    let mut round = 0;
    while round < rounds && !frontier.is_empty() {
        let mut next = HashSet::new();
        for w in &frontier {
            for d in direct_descendants(w, lengths) {
                if d.len() <= limit && !(keep_all && seen.contains(&d)) {
                    next.insert(d);
                }
            }
        }
        if keep_all {
            seen.extend(frontier);
            next.retain(|w| !seen.contains(w));
        }
        frontier = next;
        round += 1;
    }
    // for an exact step count `seen` is still empty and only the last frontier survives
    seen.extend(frontier);
    Ok(seen.into_iter().collect())
}

/// Ancestor cone: every word reachable from `y` by deduplications, `y` included.
pub fn ancestor_cone(y: &Word, lengths: &LengthSet) -> BTreeSet<Word> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut stack = vec![y.clone()];
    seen.insert(y.clone());
    while let Some(w) = stack.pop() {
        for sq in find_squares(&w, lengths) {
            let a = deduplicate(&w, sq.start, sq.half_len);
            if seen.insert(a.clone()) {
                stack.push(a);
            }
        }
    }
    seen.into_iter().collect()
}

/// Suffix extension `xi_k`: appends `k` extra copies of the last symbol.
pub fn suffix_extend(x: &Word, k: usize) -> Result<Word> {
    let last = x.last().ok_or_else(|| Error::InvalidParameter("cannot extend the empty word".into()))?;
    let mut symbols = x.symbols.clone();
    symbols.extend(std::iter::repeat_n(last, k));
    Ok(Word { symbols, q: x.q })
}
