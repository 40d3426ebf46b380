use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tandem_core::capacity::{build_irr_graph, capacity_asymptotic, capacity_fixed, capacity_irr_graph};
use tandem_core::classify::{classify, exhaustive_check};
use tandem_core::codes::{build_fixed_all, build_fixed_t, build_le2, build_le3, Codebook};
use tandem_core::roots::{roots_general_with_budget, unique_root, DEFAULT_NODE_BUDGET};
use tandem_core::sim::{run_experiment, ChannelConfig};
use tandem_core::{Error, LengthSet, Word};

#[derive(Parser)]
#[command(name = "tandem", version, about = "Codes and roots for tandem-duplication channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMode {
    FixedAll,
    FixedT,
    Le2,
    Le3,
}

#[derive(Clone, Copy, ValueEnum)]
enum CapMode {
    Fixed,
    Le2,
    Le3,
}

#[derive(Subcommand)]
enum Command {
    /// Print the roots of a word, one per line.
    Root {
        #[arg(long)]
        q: u32,
        /// `K`, `<=K` or a comma list.
        #[arg(long)]
        lengths: LengthSet,
        /// Ancestor budget when roots need not be unique.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
        word: String,
    },
    /// Build a codebook.
    Gencode {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: GenMode,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Write the codebook here and print its size; stdout otherwise.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decode received words with a codebook file.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Capacity of the RLL system or of the irreducible words.
    Capacity {
        #[arg(long)]
        q: u32,
        /// Duplication length for `--mode fixed`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum)]
        mode: CapMode,
        /// Also print the closed-form bounds and the asymptotic estimate.
        #[arg(long)]
        bounds: bool,
        /// Write the constrained graph as an edge list.
        #[arg(long)]
        dump_graph: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Decide whether roots are unique for an alphabet size and lengths.
    Classify {
        #[arg(long)]
        sigma: u32,
        #[arg(long)]
        lengths: LengthSet,
        /// Also scan every word up to this length.
        #[arg(long)]
        check: Option<usize>,
    },
    /// Run seeded channel trials against a codebook.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        /// Duplications per transmission.
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Channel lengths; defaults to the code's.
        #[arg(long)]
        lengths: Option<LengthSet>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::InvalidSymbol { .. } | Error::InvalidLengthSet(_) => 2,
        Error::BudgetExceeded(_) => 3,
        Error::Decode(_) => 4,
        Error::Io(_) => 1,
        _ => 5,
    }
}

fn require(value: Option<usize>, flag: &str, mode: &str) -> Result<usize, Error> {
    value.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for mode {mode}")))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Error> {
    match cli.command {
        Command::Root { q, lengths, budget, word } => {
            let x = Word::parse(&word, q)?;
            let roots = match unique_root(&x, &lengths) {
                Some(r) => vec![r],
                None => roots_general_with_budget(&x, &lengths, budget)?.roots,
            };
            for r in roots {
                writeln!(out, "{r}")?;
            }
        }
        Command::Gencode { q, n, mode, k, t, output } => {
            let code = match mode {
                GenMode::FixedAll => build_fixed_all(q, n, require(k, "k", "fixed-all")?)?,
                GenMode::FixedT => build_fixed_t(q, n, require(k, "k", "fixed-t")?, require(t, "t", "fixed-t")?)?,
                GenMode::Le2 => build_le2(q, n)?,
                GenMode::Le3 => build_le3(q, n)?,
            };
            match output {
                Some(path) => {
                    code.write(&path)?;
                    writeln!(out, "M={}", code.len())?;
                }
                None => write!(out, "{code}")?,
            }
        }
        Command::Decode { code, words } => {
            let code = Codebook::read(&code)?;
            for w in words {
                let decoded = code.decode(&Word::parse(&w, code.q())?)?;
                writeln!(out, "{decoded}")?;
            }
        }
        Command::Capacity { q, k, mode, bounds, dump_graph, tol } => match mode {
            CapMode::Fixed => {
                if dump_graph.is_some() {
                    return Err(Error::Incompatible("--dump-graph needs --mode le2 or le3".into()));
                }
                let k = require(k, "k", "fixed")?;
                let r = capacity_fixed(q, k, tol)?;
                writeln!(out, "value={:.12}", r.value)?;
                writeln!(out, "eigenvalue={:.12}", r.eigenvalue)?;
                if bounds {
                    match (r.lower_bound, r.upper_bound) {
                        (Some(lo), Some(hi)) => {
                            writeln!(out, "lower_bound={lo:.12}")?;
                            writeln!(out, "upper_bound={hi:.12}")?;
                        }
                        _ => writeln!(out, "bounds=undefined")?,
                    }
                    writeln!(out, "bits={:.12}", r.bits())?;
                    writeln!(out, "asymptotic_bits={:.12}", capacity_asymptotic(q, k - 1))?;
                }
            }
            CapMode::Le2 | CapMode::Le3 => {
                if k.is_some() {
                    return Err(Error::Incompatible("--k applies to --mode fixed only".into()));
                }
                let g = build_irr_graph(q, if matches!(mode, CapMode::Le2) { 2 } else { 3 })?;
                if let Some(path) = dump_graph {
                    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                    g.write_edge_list(&mut file)?;
                    file.flush()?;
                }
                let r = capacity_irr_graph(&g, tol)?;
                writeln!(out, "value={:.12}", r.value)?;
                writeln!(out, "eigenvalue={:.12}", r.eigenvalue)?;
                writeln!(out, "states={}", g.num_states())?;
                writeln!(out, "edges={}", g.num_edges())?;
                if bounds {
                    writeln!(out, "bounds=undefined")?;
                }
            }
        },
        Command::Classify { sigma, lengths, check } => {
            let v = classify(sigma, &lengths)?;
            writeln!(out, "{}", if v.unique { "unique" } else { "non-unique" })?;
            writeln!(out, "rule: {}", v.rule)?;
            if let Some(w) = &v.witness {
                writeln!(out, "witness: {w}")?;
            }
            if let Some(max_len) = check {
                let scan = exhaustive_check(sigma, &lengths, max_len)?;
                match scan.witness {
                    None => writeln!(out, "check: unique up to length {max_len}")?,
                    Some(w) => writeln!(out, "check: {w} has several roots")?,
                }
            }
        }
        Command::Simulate { code, t, trials, seed, lengths } => {
            let code = Codebook::read(&code)?;
            let lengths = lengths.unwrap_or_else(|| code.mode().lengths());
            let report = run_experiment(&code, &ChannelConfig { lengths, t, seed, trials })?;
            write!(out, "{report}")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Error::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            drop(out);
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
