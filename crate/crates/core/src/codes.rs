//! Codes correcting tandem duplications: construction, decoding,
//! brute-force verification and the codebook file format.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::capacity::irreducible_words;
use crate::error::{Error, Result};
use crate::roots::root_bounded;
use crate::transform::{mu, phi, phi_inverse, reconstruct, sigma, TransformPair, ZeroSignature};
use crate::word::{descendant_cone, suffix_extend, LengthSet, Steps, Symbol, Word};

/// Which construction produced a codebook and what it corrects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeMode {
    /// Any number of duplications of length `k`.
    FixedAll { k: usize },
    /// Up to `t` duplications of length `k`.
    FixedT { k: usize, t: usize },
    /// Any number of duplications of length at most 2.
    Le2,
    /// Any number of duplications of length at most 3.
    Le3,
}

impl CodeMode {
    /// Longest duplication the channel applies.
    pub fn k(&self) -> usize {
        match *self {
            CodeMode::FixedAll { k } | CodeMode::FixedT { k, .. } => k,
            CodeMode::Le2 => 2,
            CodeMode::Le3 => 3,
        }
    }

    /// Number of correctable duplications; `None` for unboundedly many.
    pub fn t(&self) -> Option<usize> {
        match *self {
            CodeMode::FixedT { t, .. } => Some(t),
            _ => None,
        }
    }

    pub fn lengths(&self) -> LengthSet {
        match *self {
            CodeMode::FixedAll { k } | CodeMode::FixedT { k, .. } => LengthSet::fixed(k),
            CodeMode::Le2 => LengthSet::up_to(2),
            CodeMode::Le3 => LengthSet::up_to(3),
        }
        .expect("k is positive by construction")
    }

    pub fn name(&self) -> &'static str {
        match self {
            CodeMode::FixedAll { .. } => "fixed-all",
            CodeMode::FixedT { .. } => "fixed-t",
            CodeMode::Le2 => "le2",
            CodeMode::Le3 => "le3",
        }
    }
}

/// An explicit code: sorted, distinct words of length `n` over `Z_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    q: u32,
    n: usize,
    mode: CodeMode,
    codewords: Vec<Word>,
}

impl Codebook {
    pub fn new(q: u32, n: usize, mode: CodeMode, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut codewords: Vec<Word> = words.into_iter().collect();
        for w in &codewords {
            if w.q() != q {
                return Err(Error::AlphabetMismatch { left: q, right: w.q() });
            }
            if w.len() != n {
                return Err(Error::LengthMismatch { left: n, right: w.len() });
            }
        }
        codewords.sort_unstable();
        codewords.dedup();
        Ok(Codebook { q, n, mode, codewords })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> CodeMode {
        self.mode
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn contains(&self, x: &Word) -> bool {
        self.codewords.binary_search(x).is_ok()
    }

    /// Decodes with the decoder matching the construction.
    pub fn decode(&self, r: &Word) -> Result<Word> {
        match self.mode {
            CodeMode::FixedAll { .. } => decode_fixed_all(self, r),
            CodeMode::FixedT { t, .. } => decode_fixed_t(self, r, t),
            CodeMode::Le2 | CodeMode::Le3 => decode_bounded(self, r),
        }
    }

    fn check_received(&self, r: &Word) -> Result<()> {
        if r.q() != self.q {
            return Err(Error::AlphabetMismatch { left: self.q, right: r.q() });
        }
        if r.len() < self.n {
            return Err(Error::Decode(format!(
                "received word has length {} but codewords have length {}",
                r.len(),
                self.n
            )));
        }
        Ok(())
    }

    fn found(&self, x: Word) -> Result<Word> {
        if self.contains(&x) {
            Ok(x)
        } else {
            Err(Error::Decode(format!("{x} is not a codeword")))
        }
    }
}

/// Words of length `len` over `Z_q` whose zero runs are shorter than `k`.
fn rll_words(q: u32, k: usize, len: usize) -> Vec<Vec<Symbol>> {
    fn go(q: u32, k: usize, len: usize, zeros: usize, buf: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        if buf.len() == len {
            out.push(buf.clone());
            return;
        }
        for a in 0..q {
            let run = if a == 0 { zeros + 1 } else { 0 };
            if run < k {
                buf.push(a);
                go(q, k, len, run, buf, out);
                buf.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(q, k, len, 0, &mut Vec::with_capacity(len), &mut out);
    out
}

fn check_code_params(q: u32, n: usize, k: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("alphabet size must be at least 2, got {q}")));
    }
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    Ok(())
}

/// One codeword per `k`-congruence class: each irreducible word of length
/// `n - ik` with `ik` zeros appended to its transform tail.
pub fn build_fixed_all(q: u32, n: usize, k: usize) -> Result<Codebook> {
    check_code_params(q, n, k)?;
    let prefixes: Vec<Word> = Word::all(q, k).collect();
    let mut words = Vec::new();
    for i in 0..n / k {
        for z in rll_words(q, k, n - (i + 1) * k) {
            let mut tail = z;
            tail.extend(std::iter::repeat_n(0, k * i));
            let tail = Word::from_raw(tail, q);
            for y in &prefixes {
                words.push(phi_inverse(&TransformPair { prefix: y.clone(), tail: tail.clone(), k }));
            }
        }
    }
    Codebook::new(q, n, CodeMode::FixedAll { k }, words)
}

/// Maps the received word to its root, padded with zeros in the transform
/// domain up to length `n`.
pub fn decode_fixed_all(c: &Codebook, r: &Word) -> Result<Word> {
    let CodeMode::FixedAll { k } = c.mode else {
        return Err(Error::InvalidParameter(format!("{} codebook given to the fixed-all decoder", c.mode.name())));
    };
    c.check_received(r)?;
    let p = phi(r, k)?;
    let reduced = mu(&p.tail, k);
    let room = c.n - k;
    if reduced.len() > room || !(room - reduced.len()).is_multiple_of(k) {
        return Err(Error::Decode(format!("{r} does not descend from a word of length {}", c.n)));
    }
    let mut tail = reduced.into_symbols();
    tail.resize(room, 0);
    c.found(phi_inverse(&TransformPair { tail: Word::from_raw(tail, c.q), ..p }))
}

/// Constant-weight code in the l1 metric over non-negative integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Code {
    pub length: usize,
    pub weight: usize,
    pub min_distance: usize,
    /// Lexicographically increasing.
    pub words: Vec<Vec<usize>>,
}

impl L1Code {
    pub fn contains(&self, v: &[usize]) -> bool {
        self.words.binary_search_by(|w| w.as_slice().cmp(v)).is_ok()
    }
}

fn l1(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).sum()
}

/// Greedy lexicographic code: scans the compositions of `w` into `m`
/// parts in increasing order, keeping each one at distance at least `d`
/// from all kept ones.
pub fn gen_l1_code(m: usize, w: usize, d: usize) -> L1Code {
    fn go(m: usize, left: usize, d: usize, buf: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if buf.len() + 1 == m {
            buf.push(left);
            if out.iter().all(|v| l1(v, buf) >= d) {
                out.push(buf.clone());
            }
            buf.pop();
            return;
        }
        for part in 0..=left {
            buf.push(part);
            go(m, left - part, d, buf, out);
            buf.pop();
        }
    }
    let mut words = Vec::new();
    if m == 0 {
        if w == 0 {
            words.push(Vec::new());
        }
    } else {
        go(m, w, d, &mut Vec::with_capacity(m), &mut words);
    }
    L1Code { length: m, weight: w, min_distance: d, words }
}

/// Codebook whose congruence classes are filtered by greedy l1 codes: a
/// word is kept when the zero signature of its tail lies in the code of
/// matching length and weight with minimum distance `component_distance`.
pub fn build_from_l1(q: u32, n: usize, k: usize, component_distance: usize, mode: CodeMode) -> Result<Codebook> {
    check_code_params(q, n, k)?;
    let prefixes: Vec<Word> = Word::all(q, k).collect();
    let mut components: HashMap<(usize, usize), L1Code> = HashMap::new();
    let mut words = Vec::new();
    for weight in 0..=(n - k) / k {
        for reduced in rll_words(q, k, n - k - k * weight) {
            let reduced = Word::from_raw(reduced, q);
            let m = reduced.hamming_weight() + 1;
            let code = components.entry((m, weight)).or_insert_with(|| gen_l1_code(m, weight, component_distance));
            for s in &code.words {
                let tail = reconstruct(&reduced, &ZeroSignature(s.clone()), k)?;
                for y in &prefixes {
                    words.push(phi_inverse(&TransformPair { prefix: y.clone(), tail: tail.clone(), k }));
                }
            }
        }
    }
    Codebook::new(q, n, mode, words)
}

/// Code correcting `t` duplications of length `k`. Two congruent words
/// meet after `t` duplications each exactly when their signatures are
/// within l1 distance `2t`, so the component codes use distance `2t + 1`.
pub fn build_fixed_t(q: u32, n: usize, k: usize, t: usize) -> Result<Codebook> {
    build_from_l1(q, n, k, 2 * t + 1, CodeMode::FixedT { k, t })
}

/// Finds the codeword whose signature lies below the received one at l1
/// distance at most `t`.
pub fn decode_fixed_t(c: &Codebook, r: &Word, t: usize) -> Result<Word> {
    let CodeMode::FixedT { k, .. } = c.mode else {
        return Err(Error::InvalidParameter(format!("{} codebook given to the fixed-t decoder", c.mode.name())));
    };
    c.check_received(r)?;
    let extra = r.len() - c.n;
    if !extra.is_multiple_of(k) {
        return Err(Error::Decode(format!("{r} is not a length-{k} descendant of a word of length {}", c.n)));
    }
    let errors = extra / k;
    if errors > t {
        return Err(Error::Decode(format!("{errors} duplications exceed the correctable {t}")));
    }
    let p = phi(r, k)?;
    let reduced = mu(&p.tail, k);
    let received = sigma(&p.tail, k);
    let mut matches = Vec::new();
    // every way of removing `errors` zero blocks from the received signature
    let mut removal = vec![0usize; received.len()];
    fn go(i: usize, left: usize, removal: &mut Vec<usize>, received: &ZeroSignature, visit: &mut dyn FnMut(&[usize])) {
        if i == removal.len() {
            if left == 0 {
                visit(removal);
            }
            return;
        }
        for take in 0..=left.min(received.counts()[i]) {
            removal[i] = take;
            go(i + 1, left - take, removal, received, visit);
        }
        removal[i] = 0;
    }
    let mut failure = None;
    go(0, errors, &mut removal, &received, &mut |delta| {
        let s: Vec<usize> = received.counts().iter().zip(delta).map(|(a, b)| a - b).collect();
        match reconstruct(&reduced, &ZeroSignature(s), k) {
            Ok(tail) => {
                let x = phi_inverse(&TransformPair { prefix: p.prefix.clone(), tail, k });
                if c.contains(&x) {
                    matches.push(x);
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    match matches.len() {
        0 => Err(Error::Decode(format!("no codeword within {errors} duplications of {r}"))),
        1 => Ok(matches.pop().expect("one match")),
        _ => panic!("codewords {matches:?} are too close for a {t}-error code"),
    }
}

fn build_bounded(q: u32, n: usize, k: usize, mode: CodeMode) -> Result<Codebook> {
    if q < 1 || n == 0 {
        return Err(Error::InvalidParameter(format!("need q >= 1 and n >= 1, got q={q}, n={n}")));
    }
    let lengths = LengthSet::up_to(k)?;
    let mut words = Vec::new();
    for i in 1..=n {
        for x in irreducible_words(q, &lengths, i) {
            words.push(suffix_extend(&x, n - i)?);
        }
    }
    Codebook::new(q, n, mode, words)
}

/// Irreducible words under duplications of length at most 3, each
/// extended to length `n` by repeating its last symbol.
pub fn build_le3(q: u32, n: usize) -> Result<Codebook> {
    build_bounded(q, n, 3, CodeMode::Le3)
}

/// As [`build_le3`] for duplications of length at most 2.
pub fn build_le2(q: u32, n: usize) -> Result<Codebook> {
    build_bounded(q, n, 2, CodeMode::Le2)
}

/// Extends the root of the received word back to length `n`.
pub fn decode_bounded(c: &Codebook, r: &Word) -> Result<Word> {
    let k = match c.mode {
        CodeMode::Le2 => 2,
        CodeMode::Le3 => 3,
        other => {
            return Err(Error::InvalidParameter(format!("{} codebook given to the bounded decoder", other.name())))
        }
    };
    c.check_received(r)?;
    let root = root_bounded(r, k)?;
    if root.len() > c.n {
        return Err(Error::Decode(format!("root {root} is longer than {}", c.n)));
    }
    c.found(suffix_extend(&root, c.n - root.len())?)
}

/// Upper bound on the total cone size [`verify_words`] will hold.
pub const VERIFY_BUDGET: usize = 4_000_000;

/// Whether the descendant cones (truncated at `max_len`) of distinct words
/// are pairwise disjoint.
pub fn verify_words(words: &[Word], lengths: &LengthSet, steps: Steps, max_len: usize) -> Result<bool> {
    let mut owner: HashMap<Word, usize> = HashMap::new();
    for (i, x) in words.iter().enumerate() {
        for d in descendant_cone(x, lengths, steps, Some(max_len))? {
            match owner.get(&d) {
                Some(&j) if j != i && words[j] != *x => return Ok(false),
                Some(_) => {}
                None => {
                    owner.insert(d, i);
                    if owner.len() > VERIFY_BUDGET {
                        return Err(Error::BudgetExceeded(VERIFY_BUDGET));
                    }
                }
            }
        }
    }
    Ok(true)
}

/// [`verify_words`] over a codebook's words and channel.
pub fn verify_code(c: &Codebook, steps: Steps, max_len: usize) -> Result<bool> {
    verify_words(c.codewords(), &c.mode.lengths(), steps, max_len)
}

/// Groups the words by `(prefix, reduced tail)` and returns the smallest
/// l1 distance between signatures within a group; `None` when no group
/// holds two words.
pub fn min_bucket_distance(words: &[Word], k: usize) -> Result<Option<usize>> {
    let mut buckets: HashMap<(Word, Word), Vec<ZeroSignature>> = HashMap::new();
    for x in words {
        let p = phi(x, k)?;
        buckets.entry((p.prefix, mu(&p.tail, k))).or_default().push(sigma(&p.tail, k));
    }
    let mut best: Option<usize> = None;
    for sigs in buckets.values() {
        for (i, a) in sigs.iter().enumerate() {
            for b in &sigs[i + 1..] {
                let d = a.l1_distance(b).expect("same reduced tail");
                best = Some(best.map_or(d, |m| m.min(d)));
            }
        }
    }
    Ok(best)
}

impl fmt::Display for Codebook {
    /// The codebook file: header lines, then one codeword per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# q={}", self.q)?;
        writeln!(f, "# n={}", self.n)?;
        writeln!(f, "# mode={}", self.mode.name())?;
        writeln!(f, "# k={}", self.mode.k())?;
        match self.mode.t() {
            Some(t) => writeln!(f, "# t={t}")?,
            None => writeln!(f, "# t=*")?,
        }
        for w in &self.codewords {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for Codebook {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header: HashMap<&str, &str> = HashMap::new();
        let mut body = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                let (key, value) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("line {}: expected `# key=value`", lineno + 1)))?;
                header.insert(key.trim(), value.trim());
            } else if !line.is_empty() {
                body.push(line);
            }
        }
        let field = |key: &str| header.get(key).copied().ok_or_else(|| Error::Parse(format!("missing header `{key}`")));
        let number = |key: &str| -> Result<usize> {
            let v = field(key)?;
            v.parse().map_err(|_| Error::Parse(format!("header `{key}`: {v:?} is not a number")))
        };
        let q = number("q")? as u32;
        let n = number("n")?;
        let k = number("k")?;
        let t = field("t")?;
        let mode = match field("mode")? {
            "fixed-all" => CodeMode::FixedAll { k },
            "fixed-t" => CodeMode::FixedT { k, t: number("t")? },
            "le2" => CodeMode::Le2,
            "le3" => CodeMode::Le3,
            other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
        };
        if k != mode.k() || k == 0 {
            return Err(Error::Parse(format!("k={k} does not match mode {}", mode.name())));
        }
        if mode.t().is_none() && t != "*" {
            return Err(Error::Parse(format!("mode {} needs t=*", mode.name())));
        }
        let words = body.iter().map(|s| Word::parse(s, q)).collect::<Result<Vec<_>>>()?;
        if words.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Parse("codewords must be sorted and distinct".into()));
        }
        Codebook::new(q, n, mode, words)
    }
}

impl Codebook {
    pub fn read(path: &std::path::Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_string())?)
    }
}

/// Number of distinct roots among the words of `Z_q^n`.
pub fn class_count(q: u32, n: usize, root: impl Fn(&Word) -> Word) -> usize {
    Word::all(q, n).map(|x| root(&x)).collect::<HashSet<_>>().len()
}
