//! `eiscong`: congruences of Eisenstein series quotients `E2^r E4^s E6^t`.
//!
//! Exit codes: 0 success, 1 mathematical counterexample, 2 usage error,
//! 3 precision or storage error.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use eiscong::eisenstein::{eisenstein_product, lifted_weight, replacement_lift};
use eiscong::filtration::{compute_a_tilde, compute_b_tilde, filtration, sturm};
use eiscong::scanner::{
    rows_named, theorem_bound, verify_table, verify_theorem, ResultCache, ScanOptions,
    RESULTS_DIR_ENV,
};
use eiscong::tate::{find_congruences, tate_cycle, tate_cycle_precision, DetectionMode};
use eiscong::{Error, QuotientSpec};

use render::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "eiscong",
    version,
    about = "Simple congruences of quotients of Eisenstein series"
)]
struct Cli {
    /// Number of coefficients to use; must be at least the command's minimum
    #[arg(long, global = true)]
    precision: Option<u64>,

    /// Directory for cached scan results
    #[arg(long, global = true, env = RESULTS_DIR_ENV, default_value = "results")]
    results_dir: PathBuf,

    /// Worker threads for scans (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    output: OutputFormat,

    /// Increase log verbosity (-v, -vv)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct Exponents {
    /// Exponent of E2
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    /// Exponent of E4
    #[arg(long, allow_hyphen_values = true)]
    s: i64,
    /// Exponent of E6
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
}

impl Exponents {
    fn spec(&self) -> eiscong::Result<QuotientSpec> {
        QuotientSpec::new(self.r, self.s, self.t)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-expansion of E2^r E4^s E6^t modulo m (r may be negative here)
    Expand {
        #[command(flatten)]
        exp: Exponents,
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 20)]
        terms: i64,
    },
    /// Iterated theta of the q-expansion
    Theta {
        #[command(flatten)]
        exp: Exponents,
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 20)]
        terms: i64,
        #[arg(long, default_value_t = 1)]
        iterations: u64,
    },
    /// Filtration of the lifted form modulo ell
    Filtration {
        #[command(flatten)]
        exp: Exponents,
        #[arg(long)]
        ell: u64,
    },
    /// Filtrations along the Tate cycle of the lifted form
    TateCycle {
        #[command(flatten)]
        exp: Exponents,
        #[arg(long)]
        ell: u64,
    },
    /// Residues c with a(ell n + c) = 0 mod ell
    #[command(group(ArgGroup::new("mode").args(["rigorous", "heuristic"])))]
    FindCongruences {
        #[command(flatten)]
        exp: Exponents,
        #[arg(long)]
        ell: u64,
        /// Certify through the Sturm bound (default)
        #[arg(long)]
        rigorous: bool,
        /// Inspect a finite window of coefficients
        #[arg(long)]
        heuristic: bool,
    },
    /// Sweep every prime up to the bound and sample a few above it
    VerifyTheorem {
        #[command(flatten)]
        exp: Exponents,
        /// Stop at the sharper, sign-dependent bound
        #[arg(long)]
        remark: bool,
        /// Number of primes above the bound to sample
        #[arg(long, default_value_t = 3)]
        sample_above: usize,
    },
    /// Check the tabulated congruences of Eisenstein quotients
    VerifyTable {
        /// Row name such as "E2^2/E6", or "all"
        #[arg(long, default_value = "all")]
        row: String,
        #[arg(long, default_value_t = 3000)]
        terms: u64,
    },
    /// Polynomial in Q = E4, R = E6 congruent to E_(ell-1) modulo ell
    ATilde {
        #[arg(long)]
        ell: u64,
    },
    /// Polynomial in Q = E4, R = E6 congruent to E2 modulo ell
    BTilde {
        #[arg(long)]
        ell: u64,
    },
}

/// The override if it meets `minimum`, else a hard error.
fn resolve_precision(given: Option<u64>, minimum: u64) -> eiscong::Result<u64> {
    match given {
        Some(g) if g < minimum => Err(Error::PrecisionOverride {
            given: g,
            required: minimum,
        }),
        Some(g) => Ok(g),
        None => Ok(minimum),
    }
}

fn run(cli: &Cli) -> eiscong::Result<Report> {
    match &cli.command {
        Command::Expand {
            exp,
            modulus,
            terms,
        } => {
            let f = eisenstein_product(exp.r, exp.s, exp.t, *modulus, *terms)?;
            Ok(Report::Series {
                label: format!("E2^{} E4^{} E6^{}", exp.r, exp.s, exp.t),
                series: f,
            })
        }
        Command::Theta {
            exp,
            modulus,
            terms,
            iterations,
        } => {
            let f = eisenstein_product(exp.r, exp.s, exp.t, *modulus, *terms)?;
            Ok(Report::Series {
                label: format!("theta^{iterations}(E2^{} E4^{} E6^{})", exp.r, exp.s, exp.t),
                series: f.theta_pow(*iterations),
            })
        }
        Command::Filtration { exp, ell } => {
            let spec = exp.spec()?;
            let weight = checked_weight(&spec, *ell)?;
            let n = resolve_precision(cli.precision, sturm(weight) + 1)?;
            let form = replacement_lift(&spec, *ell, n as i64)?.form()?;
            Ok(Report::Filtration {
                spec,
                ell: *ell,
                weight,
                filtration: filtration(&form)?,
                precision: n,
            })
        }
        Command::TateCycle { exp, ell } => {
            let spec = exp.spec()?;
            let weight = checked_weight(&spec, *ell)?;
            let n = resolve_precision(cli.precision, tate_cycle_precision(weight, *ell))?;
            let form = replacement_lift(&spec, *ell, n as i64)?.form()?;
            Ok(Report::Cycle {
                spec,
                profile: tate_cycle(&form)?,
            })
        }
        Command::FindCongruences {
            exp,
            ell,
            heuristic,
            ..
        } => {
            let spec = exp.spec()?;
            let mode = if *heuristic {
                DetectionMode::Heuristic
            } else {
                DetectionMode::Rigorous
            };
            let report = find_congruences(&spec, *ell, mode, cli.precision)?;
            Ok(Report::Congruences {
                report,
                bound: theorem_bound(&spec),
            })
        }
        Command::VerifyTheorem {
            exp,
            remark,
            sample_above,
        } => {
            let spec = exp.spec()?;
            let opts = ScanOptions {
                use_remark: *remark,
                sample_above: *sample_above,
                workers: cli.workers,
                precision_override: cli.precision,
                cache: Some(ResultCache::new(&cli.results_dir)?),
            };
            Ok(Report::Scan(Box::new(verify_theorem(&spec, &opts)?)))
        }
        Command::VerifyTable { row, terms } => {
            let rows = rows_named(row)?;
            let outcomes = rows
                .into_iter()
                .map(|r| {
                    let res = verify_table(std::slice::from_ref(&r), *terms);
                    (r, res)
                })
                .map(|(r, res)| match res {
                    Ok(mut checks) => Ok((r, Ok(checks.remove(0)))),
                    Err(Error::TableCounterexample { index, value, .. }) => {
                        Ok((r, Err((index, value))))
                    }
                    Err(e) => Err(e),
                })
                .collect::<eiscong::Result<Vec<_>>>()?;
            Ok(Report::Table {
                terms: *terms,
                outcomes,
            })
        }
        Command::ATilde { ell } => Ok(Report::Polynomial {
            name: "A",
            poly: compute_a_tilde(*ell)?,
        }),
        Command::BTilde { ell } => Ok(Report::Polynomial {
            name: "B",
            poly: compute_b_tilde(*ell)?,
        }),
    }
}

fn checked_weight(spec: &QuotientSpec, ell: u64) -> eiscong::Result<u64> {
    let w = lifted_weight(spec, ell);
    if w < 0 {
        return Err(Error::InvalidWeight(w));
    }
    Ok(w as u64)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::TableCounterexample { .. } => 1,
        e if e.is_precision_or_storage() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.output));
            if report.is_counterexample() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
