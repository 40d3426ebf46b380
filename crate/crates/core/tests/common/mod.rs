//! Reference implementations on plain symbol vectors. Written without the
//! library so that they can serve as oracles for it.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use tandem_core::Word;

pub type Sym = Vec<u32>;

/// Every word of length `n`, lexicographically.
pub fn all_words(q: u32, n: usize) -> Vec<Sym> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Sym| {
                (0..q).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn word(s: &[u32], q: u32) -> Word {
    Word::new(s.to_vec(), q).unwrap()
}

pub fn parse(s: &str, q: u32) -> Word {
    Word::parse(s, q).unwrap()
}

pub fn syms(w: &Word) -> Sym {
    w.symbols().to_vec()
}

/// Maps the letters `a, b, c, ...` to `0, 1, 2, ...`.
pub fn letters(s: &str) -> Sym {
    s.bytes().map(|b| u32::from(b - b'a')).collect()
}

/// `(start, half)` of every square with `half` in `lengths`, by a triple loop.
pub fn naive_squares(s: &[u32], lengths: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for start in 0..s.len() {
        for &half in lengths {
            if start + 2 * half > s.len() {
                continue;
            }
            let mut equal = true;
            for j in 0..half {
                if s[start + j] != s[start + half + j] {
                    equal = false;
                }
            }
            if equal {
                out.push((start, half));
            }
        }
    }
    out.sort();
    out
}

pub fn dup(s: &[u32], i: usize, k: usize) -> Sym {
    let mut out = s[..i + k].to_vec();
    out.extend_from_slice(&s[i..]);
    out
}

pub fn children(s: &[u32], lengths: &[usize]) -> Vec<Sym> {
    let mut out = Vec::new();
    for &k in lengths {
        if k <= s.len() {
            for i in 0..=s.len() - k {
                out.push(dup(s, i, k));
            }
        }
    }
    out
}

/// Words reached by exactly `t` duplications.
pub fn cone_exactly(s: &[u32], lengths: &[usize], t: usize) -> BTreeSet<Sym> {
    let mut level: BTreeSet<Sym> = BTreeSet::from([s.to_vec()]);
    for _ in 0..t {
        level = level.iter().flat_map(|w| children(w, lengths)).collect();
    }
    level
}

/// Words reached by at most `t` duplications, none longer than `max_len`.
pub fn cone_at_most(s: &[u32], lengths: &[usize], t: usize, max_len: usize) -> BTreeSet<Sym> {
    let mut all: BTreeSet<Sym> = BTreeSet::new();
    let mut level: BTreeSet<Sym> = BTreeSet::new();
    if s.len() <= max_len {
        level.insert(s.to_vec());
    }
    for _ in 0..=t {
        let next: BTreeSet<Sym> = level
            .iter()
            .flat_map(|w| children(w, lengths))
            .filter(|w| w.len() <= max_len && !all.contains(w))
            .collect();
        all.extend(level);
        level = next;
    }
    all
}

/// Levels `0..=t` of the fixed-length cone: level `j` holds the words
/// reached by `j` duplications of length `k`.
pub fn fixed_levels(s: &[u32], k: usize, t: usize) -> Vec<HashSet<Sym>> {
    let mut levels = vec![HashSet::from([s.to_vec()])];
    for _ in 0..t {
        let next = levels.last().unwrap().iter().flat_map(|w| children(w, &[k])).collect();
        levels.push(next);
    }
    levels
}

/// Least `t` with a common `t`-descendant, given precomputed levels.
pub fn meeting_level(a: &[HashSet<Sym>], b: &[HashSet<Sym>]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| {
        let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
        small.iter().any(|w| large.contains(w))
    })
}

/// Every root, by exhaustive memoized deduplication.
pub struct RootOracle {
    lengths: Vec<usize>,
    memo: HashMap<Sym, BTreeSet<Sym>>,
}

impl RootOracle {
    pub fn new(lengths: &[usize]) -> Self {
        RootOracle { lengths: lengths.to_vec(), memo: HashMap::new() }
    }

    pub fn roots(&mut self, s: &[u32]) -> BTreeSet<Sym> {
        if let Some(r) = self.memo.get(s) {
            return r.clone();
        }
        let squares = naive_squares(s, &self.lengths);
        let out = if squares.is_empty() {
            BTreeSet::from([s.to_vec()])
        } else {
            let mut out = BTreeSet::new();
            for (i, h) in squares {
                let mut a = s[..i + h].to_vec();
                a.extend_from_slice(&s[i + 2 * h..]);
                out.extend(self.roots(&a));
            }
            out
        };
        self.memo.insert(s.to_vec(), out.clone());
        out
    }

    pub fn unique_root(&mut self, s: &[u32]) -> Option<Sym> {
        let r = self.roots(s);
        (r.len() == 1).then(|| r.into_iter().next().unwrap())
    }
}

/// Number of classes of the words of length `n` under "same root set".
pub fn class_count(q: u32, n: usize, lengths: &[usize]) -> usize {
    let mut oracle = RootOracle::new(lengths);
    all_words(q, n).iter().map(|w| oracle.roots(w)).collect::<HashSet<_>>().len()
}

/// A small deterministic generator for choosing test subsets.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// The shortest strings holding two overlapping squares of half-length at
/// most 3, one per case up to relabelling.
pub const OVERLAP_CASES: [&str; 52] = [
    "aaa",
    "aaaaa",
    "aabab",
    "aaaaaa",
    "aaaaaaa",
    "aabaaba",
    "abaaba",
    "aabcabc",
    "aaaaa",
    "ababab",
    "ababbbb",
    "ababa",
    "bcbcaca",
    "aaaaaa",
    "aaaaaaa",
    "aaaaaaaa",
    "aaaaaaaaa",
    "abaabaaaa",
    "abaababa",
    "abaabab",
    "abcabcccc",
    "abcabcaca",
    "abcabcbcb",
    "abcabcbc",
    "aaaaaaa",
    "aaaaaaaa",
    "aaaaaaaaa",
    "aaaaaaaaaa",
    "aaaaaaaaaaa",
    "abaabaaaaaa",
    "abaababaaba",
    "abaabacaaca",
    "abaababcabc",
    "abaabacbacb",
    "abaabaabaa",
    "abaababbab",
    "abaabacbac",
    "abaabaaba",
    "abaabaab",
    "abaabaa",
    "abcabcaacaa",
    "abcabcbbcbb",
    "abcabcbccbc",
    "abcabcaccac",
    "abcabccbccb",
    "abcabccacca",
    "abcabccbcc",
    "abcabcbbcb",
    "abcabcabca",
    "abcabcabc",
    "abcabcab",
    "abcabca",
];
