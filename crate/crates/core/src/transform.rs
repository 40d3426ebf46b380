//! The difference transform `phi_k`, under which a tandem duplication of
//! length `k` becomes the insertion of `k` zeros into the tail.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Symbol, Word};

/// `phi_k(x) = (prefix, tail)`: the `k`-prefix of `x` and the entrywise
/// difference `x[k..] - x[..n-k]` over `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransformPair {
    pub prefix: Word,
    pub tail: Word,
    pub k: usize,
}

impl TransformPair {
    pub fn new(prefix: Word, tail: Word, k: usize) -> Result<Self> {
        if prefix.len() != k {
            return Err(Error::InvalidParameter(format!("prefix has length {} but the order is {k}", prefix.len())));
        }
        if prefix.q() != tail.q() {
            return Err(Error::AlphabetMismatch { left: prefix.q(), right: tail.q() });
        }
        Ok(TransformPair { prefix, tail, k })
    }

    pub fn q(&self) -> u32 {
        self.prefix.q()
    }
}

/// Zero-block counts `floor(m_i / k)` of every zero run of a tail,
/// including the (possibly empty) leading and trailing runs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroSignature(pub Vec<usize>);

impl ZeroSignature {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// l1 weight.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// l1 distance; `None` when the lengths differ.
    pub fn l1_distance(&self, other: &ZeroSignature) -> Option<usize> {
        (self.len() == other.len()).then(|| self.0.iter().zip(&other.0).map(|(&a, &b)| a.abs_diff(b)).sum())
    }
}

impl fmt::Display for ZeroSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_order(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("transform order must be positive".into()));
    }
    Ok(())
}

pub fn phi(x: &Word, k: usize) -> Result<TransformPair> {
    check_order(k)?;
    if x.len() < k {
        return Err(Error::TooShort { len: x.len(), required: k });
    }
    let q = x.q();
    let s = x.symbols();
    let tail = (k..s.len()).map(|i| (s[i] + q - s[i - k]) % q).collect();
    Ok(TransformPair { prefix: Word::from_raw(s[..k].to_vec(), q), tail: Word::from_raw(tail, q), k })
}

pub fn phi_inverse(p: &TransformPair) -> Word {
    let q = p.q();
    let k = p.k;
    let mut out: Vec<Symbol> = p.prefix.symbols().to_vec();
    out.reserve(p.tail.len());
    for (i, &d) in p.tail.symbols().iter().enumerate() {
        out.push((out[i] + d) % q);
    }
    debug_assert_eq!(out.len(), k + p.tail.len());
    Word::from_raw(out, q)
}

/// `zeta_{i,k}`: inserts `0^k` after the first `i` tail symbols; identity
/// when `i` exceeds the tail length.
pub fn zeta(p: &TransformPair, i: usize) -> TransformPair {
    if i > p.tail.len() {
        return p.clone();
    }
    let mut tail = p.tail.symbols().to_vec();
    tail.splice(i..i, std::iter::repeat_n(0, p.k));
    TransformPair { prefix: p.prefix.clone(), tail: Word::from_raw(tail, p.q()), k: p.k }
}

/// Splits `z = 0^{m_0} w_1 0^{m_1} ... w_t 0^{m_t}` into the run lengths
/// `m_0..m_t` and the non-zero symbols `w_1..w_t`.
pub fn zero_runs(z: &[Symbol]) -> (Vec<usize>, Vec<Symbol>) {
    let mut runs = vec![0];
    let mut nonzero = Vec::new();
    for &s in z {
        if s == 0 {
            *runs.last_mut().unwrap() += 1;
        } else {
            nonzero.push(s);
            runs.push(0);
        }
    }
    (runs, nonzero)
}

fn assemble(runs: &[usize], nonzero: &[Symbol], q: u32) -> Word {
    let mut out = Vec::with_capacity(runs.iter().sum::<usize>() + nonzero.len());
    for (i, &m) in runs.iter().enumerate() {
        out.extend(std::iter::repeat_n(0, m));
        if let Some(&s) = nonzero.get(i) {
            out.push(s);
        }
    }
    Word::from_raw(out, q)
}

/// `mu_k`: reduces every zero-run length modulo `k`.
pub fn mu(z: &Word, k: usize) -> Word {
    assert!(k > 0, "order must be positive");
    let (runs, nonzero) = zero_runs(z.symbols());
    let reduced: Vec<usize> = runs.iter().map(|m| m % k).collect();
    assemble(&reduced, &nonzero, z.q())
}

/// `sigma_k`: the zero signature of `z`.
pub fn sigma(z: &Word, k: usize) -> ZeroSignature {
    assert!(k > 0, "order must be positive");
    let (runs, _) = zero_runs(z.symbols());
    ZeroSignature(runs.iter().map(|m| m / k).collect())
}

/// Inverse of `z -> (mu_k(z), sigma_k(z))`.
pub fn reconstruct(reduced: &Word, signature: &ZeroSignature, k: usize) -> Result<Word> {
    check_order(k)?;
    let (runs, nonzero) = zero_runs(reduced.symbols());
    if runs.len() != signature.len() {
        return Err(Error::InvalidParameter(format!(
            "signature has {} entries but the word has {} zero runs",
            signature.len(),
            runs.len()
        )));
    }
    if runs.iter().any(|&m| m >= k) {
        return Err(Error::InvalidParameter(format!("{reduced} is not {k}-reduced")));
    }
    let inflated: Vec<usize> = runs.iter().zip(signature.counts()).map(|(&m, &c)| m + k * c).collect();
    Ok(assemble(&inflated, &nonzero, reduced.q()))
}
