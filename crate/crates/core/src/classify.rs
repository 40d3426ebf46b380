//! Which pairs of alphabet size and duplication-length set give every word
//! a unique root, with explicit words having two roots otherwise.

use std::fmt;

use crate::error::{Error, Result};
use crate::roots::RootTable;
use crate::word::{LengthSet, Symbol, Word};

/// The case of the classification that decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// A single length.
    SingleLength { k: usize },
    /// One letter and every length a multiple of the smallest.
    UnaryDivisible { k: usize },
    /// Two letters and `{1, 2}` among the lengths.
    BinaryWithOneTwo,
    /// Lengths `{1, 2}` or `{1, 2, 3}` over any alphabet.
    UpTo { k: usize },
    /// Smallest length `k` and a length `m` it does not divide.
    UnaryWitness { k: usize, m: usize },
    /// Two smallest lengths `k < k + m` with `km > 1`.
    TwoLetterWitness { k: usize, m: usize },
    /// `{1, 2}` plus lengths from `m >= 4` on.
    OneTwoPlus { m: usize },
    /// `{1, 2, 3}` plus lengths from `m >= 4` on.
    OneTwoThreePlus { m: usize },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Rule::SingleLength { k } => write!(f, "single length {k}"),
            Rule::UnaryDivisible { k } => write!(f, "unary alphabet, every length divisible by {k}"),
            Rule::BinaryWithOneTwo => write!(f, "binary alphabet, lengths include 1 and 2"),
            Rule::UpTo { k } => write!(f, "lengths 1..{k}"),
            Rule::UnaryWitness { k, m } => write!(f, "{k} does not divide {m}"),
            Rule::TwoLetterWitness { k, m } => write!(f, "two smallest lengths {k} and {}", k + m),
            Rule::OneTwoPlus { m } => write!(f, "lengths 1, 2 and {m}"),
            Rule::OneTwoThreePlus { m } => write!(f, "lengths 1, 2, 3 and {m}"),
        }
    }
}

/// Outcome of [`classify`]. The witness is present exactly when the pair
/// is not unique-root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub unique: bool,
    pub rule: Rule,
    pub witness: Option<Word>,
}

/// Decides whether every word over an alphabet of `sigma` letters has a
/// unique root under `lengths`.
pub fn classify(sigma: u32, lengths: &LengthSet) -> Result<Verdict> {
    if sigma == 0 {
        return Err(Error::InvalidParameter("alphabet must be non-empty".into()));
    }
    let u = lengths.lengths();
    let k = u[0];
    let unique = |rule| Ok(Verdict { unique: true, rule, witness: None });
    let witnessed = |rule, witness: Word| Ok(Verdict { unique: false, rule, witness: Some(witness) });

    if u.len() == 1 {
        return unique(Rule::SingleLength { k });
    }
    if let Some(&m) = u.iter().find(|&&m| m % k != 0) {
        return witnessed(Rule::UnaryWitness { k, m }, witness_unary(k, m)?.with_alphabet(sigma)?);
    }
    if sigma == 1 {
        return unique(Rule::UnaryDivisible { k });
    }
    let m = u[1] - k;
    if k * m > 1 {
        return witnessed(Rule::TwoLetterWitness { k, m }, witness_two_letter(k, m)?.with_alphabet(sigma)?);
    }
    // the two smallest lengths are 1 and 2
    if sigma == 2 {
        return unique(Rule::BinaryWithOneTwo);
    }
    match u {
        [1, 2] => unique(Rule::UpTo { k: 2 }),
        [1, 2, 3] => unique(Rule::UpTo { k: 3 }),
        [1, 2, 3, m, ..] => witnessed(Rule::OneTwoThreePlus { m: *m }, witness_123v(*m)?.with_alphabet(sigma)?),
        [1, 2, m, ..] => witnessed(Rule::OneTwoPlus { m: *m }, witness_12v(*m)?.with_alphabet(sigma)?),
        _ => unreachable!("lengths start with 1, 2"),
    }
}

fn word(symbols: Vec<Symbol>) -> Word {
    let q = symbols.iter().max().map_or(1, |&s| s + 1);
    Word::new(symbols, q).expect("alphabet covers every symbol")
}

/// `a^{k+2m}`: removing one `m`-square first and only `k`-squares
/// otherwise end in powers of `a` whose lengths differ mod `k`.
pub fn witness_unary(k: usize, m: usize) -> Result<Word> {
    if k == 0 || m.is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!("need {k} not dividing {m}")));
    }
    Ok(word(vec![0; k + 2 * m]))
}

/// Two-letter word with two roots under `{k, k+m}` and any larger
/// lengths. When `k` does not divide `m` the unary word already works.
pub fn witness_two_letter(k: usize, m: usize) -> Result<Word> {
    if k * m <= 1 {
        return Err(Error::InvalidParameter(format!("need km > 1, got k={k}, m={m}")));
    }
    if !m.is_multiple_of(k) {
        return witness_unary(k, k + m);
    }
    // v_i for i = 1..k+m: blocks of k a's and b's, and v_{k+m} = v_m
    let mut v: Vec<Symbol> = (1..k + m).map(|i| if i.div_ceil(k) % 2 == 1 { 0 } else { 1 }).collect();
    v.push(v[m - 1]);
    let mut z = v.clone();
    z.extend_from_slice(&v);
    z.extend_from_slice(&v[m..k + m - 1]);
    Ok(word(z))
}

fn check_v(m: usize) -> Result<()> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!("extra length must be at least 4, got {m}")));
    }
    Ok(())
}

/// `a b^{m-3} c a a b^{m-3} c a` with `a, b, c = 0, 1, 2`: roots `abca`
/// and `abcabca` under `{1, 2, m}`.
pub fn witness_12v(m: usize) -> Result<Word> {
    check_v(m)?;
    let half: Vec<Symbol> = [vec![0], vec![1; m - 3], vec![2, 0]].concat();
    Ok(word([half.clone(), half].concat()))
}

/// `a b^{m-3} c b a b^{m-3} c b c`: roots `abc` and `abcbabc` under
/// `{1, 2, 3, m}`.
pub fn witness_123v(m: usize) -> Result<Word> {
    check_v(m)?;
    let b = vec![1; m - 3];
    Ok(word([vec![0], b.clone(), vec![2, 1, 0], b, vec![2, 1, 2]].concat()))
}

/// Outcome of an exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhaustiveCheck {
    /// No word up to the scanned length has two roots.
    pub unique: bool,
    /// Shortest, then lexicographically first, word with two roots.
    pub witness: Option<Word>,
}

/// Scans every word of length at most `max_len`.
pub fn exhaustive_check(sigma: u32, lengths: &LengthSet, max_len: usize) -> Result<ExhaustiveCheck> {
    let table = RootTable::build(sigma, lengths, max_len)?;
    let witness = table.first_multiple();
    Ok(ExhaustiveCheck { unique: witness.is_none(), witness })
}
