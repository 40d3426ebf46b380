//! Random tandem-duplication channel and seeded end-to-end experiments.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`,
//! so results do not depend on how trials are scheduled.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codes::Codebook;
use crate::error::{Error, Result};
use crate::word::{duplicate, LengthSet, Word};

/// Failure examples kept in a report.
pub const MAX_FAILURE_EXAMPLES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelConfig {
    pub lengths: LengthSet,
    /// Duplications per transmission.
    pub t: usize,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureExample {
    pub trial: usize,
    pub sent: Word,
    pub received: Word,
    /// The wrong decoding, or the decoder's error message.
    pub decoded: std::result::Result<Word, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub mean_received_length: f64,
    /// The first failures by trial index.
    pub error_examples: Vec<FailureExample>,
}

impl fmt::Display for SimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "trials={} successes={} failures={} mean_len={:.4}",
            self.trials, self.successes, self.failures, self.mean_received_length
        )?;
        for e in &self.error_examples {
            let decoded = match &e.decoded {
                Ok(w) => w.to_string(),
                Err(msg) => format!("error: {msg}"),
            };
            writeln!(f, "failure trial={} sent={} received={} decoded={}", e.trial, e.sent, e.received, decoded)?;
        }
        Ok(())
    }
}

/// Applies `t` duplications, each chosen uniformly among all valid
/// `(position, length)` pairs of the current word.
pub fn transmit<R: Rng + ?Sized>(x: &Word, lengths: &LengthSet, t: usize, rng: &mut R) -> Result<Word> {
    if t > 0 && x.len() < lengths.min() {
        return Err(Error::InvalidParameter(format!("{x} is shorter than every duplication length in {lengths}")));
    }
    let mut y = x.clone();
    for _ in 0..t {
        let sites: Vec<(usize, usize)> =
            lengths.lengths().iter().take_while(|&&l| l <= y.len()).map(|&l| (l, y.len() - l + 1)).collect();
        let total: usize = sites.iter().map(|s| s.1).sum();
        let mut pick = rng.gen_range(0..total);
        for (l, count) in sites {
            if pick < count {
                y = duplicate(&y, pick, l);
                break;
            }
            pick -= count;
        }
    }
    Ok(y)
}

enum Outcome {
    Success(usize),
    Failure(usize, FailureExample),
}

/// Sends uniformly chosen codewords through the channel and counts exact
/// recoveries.
pub fn run_experiment(c: &Codebook, cfg: &ChannelConfig) -> Result<SimReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    if c.is_empty() {
        return Err(Error::InvalidParameter("codebook is empty".into()));
    }
    let code_lengths = c.mode().lengths();
    if !cfg.lengths.is_subset_of(&code_lengths) {
        return Err(Error::Incompatible(format!(
            "channel lengths {} exceed the {} code's {}",
            cfg.lengths,
            c.mode().name(),
            code_lengths
        )));
    }
    let outcomes: Vec<Result<Outcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(trial as u64);
            let sent = &c.codewords()[rng.gen_range(0..c.len())];
            let received = transmit(sent, &cfg.lengths, cfg.t, &mut rng)?;
            let len = received.len();
            Ok(match c.decode(&received) {
                Ok(d) if d == *sent => Outcome::Success(len),
                decoded => Outcome::Failure(
                    len,
                    FailureExample { trial, sent: sent.clone(), received, decoded: decoded.map_err(|e| e.to_string()) },
                ),
            })
        })
        .collect();

    let mut report = SimReport {
        trials: cfg.trials,
        successes: 0,
        failures: 0,
        mean_received_length: 0.0,
        error_examples: Vec::new(),
    };
    let mut total_len: u64 = 0;
    for outcome in outcomes {
        match outcome? {
            Outcome::Success(len) => {
                report.successes += 1;
                total_len += len as u64;
            }
            Outcome::Failure(len, example) => {
                report.failures += 1;
                total_len += len as u64;
                if report.error_examples.len() < MAX_FAILURE_EXAMPLES {
                    report.error_examples.push(example);
                }
            }
        }
    }
    report.mean_received_length = total_len as f64 / cfg.trials as f64;
    Ok(report)
}
