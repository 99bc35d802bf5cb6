//! Command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 size guard exceeded (retry with `--force` or switch to `--mc`).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::exact::{DEFAULT_GUARD, HARD_LIMIT};
use crate::format::{Format, ENUMERATION_GUARD};
use crate::optimize::{self, Objective};
use crate::rational::parse_rational;
use crate::report::{self, OutputStyle, Report};
use crate::values::PlayerValues;
use crate::{montecarlo, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_GUARD_EXCEEDED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "rkt",
    version,
    about = "Random-pairing knockout tournaments: exact win probabilities, bounds, format search, Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report style written to stdout
    #[arg(long, global = true, value_enum, default_value_t = OutArg::Json)]
    out: OutArg,

    /// Override the size guards (exact engine 12 players, enumeration 16)
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutArg {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Strongest,
    Weakest,
    Martingale,
    All,
}

#[derive(Args)]
struct InstanceArgs {
    /// Path to a JSON instance {"values": ["6", "1/100", "2.5", ...]}
    #[arg(long)]
    instance: PathBuf,

    /// "balanced", "sequential", or comma-separated match counts "2,2,1"
    #[arg(long, default_value = "balanced")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Win probabilities (exact by default, Monte Carlo with --mc)
    Analyze {
        #[command(flatten)]
        common: InstanceArgs,

        /// Also report reach probabilities for every round (exact mode)
        #[arg(long)]
        reach: bool,

        /// Computation mode
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,

        /// Shorthand for --mode mc
        #[arg(long)]
        mc: bool,

        /// Monte Carlo trial count
        #[arg(long, default_value_t = 100_000)]
        trials: u64,

        /// Monte Carlo seed (recorded in the report)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Analytic lower/upper bounds for every player
    Bounds {
        #[command(flatten)]
        common: InstanceArgs,
    },

    /// Exact win probability of one player under every valid format
    Optimize {
        /// Path to a JSON instance
        #[arg(long)]
        instance: PathBuf,

        /// Player to optimize for, 1-based in input order
        #[arg(long, default_value_t = 1)]
        player: usize,

        #[arg(long, value_enum, default_value_t = ObjectiveArg::Max)]
        objective: ObjectiveArg,
    },

    /// List (or just count) the valid formats for n players
    Formats {
        #[arg(long)]
        n: usize,

        /// Print only the number of formats
        #[arg(long)]
        count: bool,
    },

    /// Run the extremal-format and martingale verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,

        /// Largest player count to verify
        #[arg(long, default_value_t = 6)]
        n_max: usize,

        /// Match-win probabilities to verify with (rational strings;
        /// values > 1/2 go to the strongest suite, < 1/2 to the weakest)
        #[arg(long = "p")]
        p: Vec<String>,

        /// Random instances per player count (martingale suite)
        #[arg(long, default_value_t = 3)]
        instances: usize,

        /// Seed for the martingale suite's random instances
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },

    /// Reproduce the bundled counterexamples exactly
    Repro {
        /// "n4-nonmonotone", "n6-halving-suboptimal", or "all"
        #[arg(long, default_value = "all")]
        case: String,
    },
}

/// Parse and dispatch; returns the process exit code.
pub fn run<O, E>(argv: impl IntoIterator<Item = OsString>, stdout: &mut O, stderr: &mut E) -> i32
where
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID_INPUT,
            };
            let rendered = err.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };

    let style = match cli.out {
        OutArg::Json => OutputStyle::Json,
        OutArg::Csv => OutputStyle::Csv,
        OutArg::Table => OutputStyle::Table,
    };
    match dispatch(&cli) {
        Ok(Outcome::Report(report)) => {
            let _ = write!(stdout, "{}", report.render(style));
            if report.verification_failed() {
                EXIT_VERIFICATION_FAILED
            } else {
                EXIT_OK
            }
        }
        Ok(Outcome::Plain(text)) => {
            let _ = writeln!(stdout, "{text}");
            EXIT_OK
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            match err {
                CliError::Guard(_) => EXIT_GUARD_EXCEEDED,
                _ => EXIT_INVALID_INPUT,
            }
        }
    }
}

enum Outcome {
    Report(Box<Report>),
    Plain(String),
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}; rerun with --force to override, or use --mc for Monte Carlo")]
    Guard(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::GuardExceeded { .. } => CliError::Guard(err.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let engine_guard = if cli.force { HARD_LIMIT } else { DEFAULT_GUARD };
    let enumeration_guard = if cli.force {
        HARD_LIMIT
    } else {
        ENUMERATION_GUARD
    };

    match &cli.command {
        Command::Analyze {
            common,
            reach,
            mode,
            mc,
            trials,
            seed,
        } => {
            let (values, format) = load_instance(common)?;
            let mc_mode = *mc || *mode == ModeArg::Mc;
            if mc_mode {
                let estimate = montecarlo::estimate(&values, &format, *trials, *seed)?;
                let command = format!(
                    "analyze --instance {} --format {} --mode mc --trials {trials} --seed {seed}",
                    common.instance.display(),
                    common.format
                );
                Ok(Outcome::Report(Box::new(report::analyze_mc(
                    command, &values, &format, &estimate,
                ))))
            } else {
                let command = format!(
                    "analyze --instance {} --format {} --mode exact{}",
                    common.instance.display(),
                    common.format,
                    if *reach { " --reach" } else { "" }
                );
                Ok(Outcome::Report(Box::new(report::analyze_exact(
                    command,
                    &values,
                    &format,
                    *reach,
                    engine_guard,
                )?)))
            }
        }

        Command::Bounds { common } => {
            let (values, format) = load_instance(common)?;
            let command = format!(
                "bounds --instance {} --format {}",
                common.instance.display(),
                common.format
            );
            Ok(Outcome::Report(Box::new(report::bounds(command, &values, &format)?)))
        }

        Command::Optimize {
            instance,
            player,
            objective,
        } => {
            let values = read_values(instance)?;
            if *player == 0 || *player > values.n() {
                return Err(CliError::Invalid(format!(
                    "player must lie in 1..={}, got {player}",
                    values.n()
                )));
            }
            let canonical = values.orig_to_canon()[*player - 1];
            let objective = match objective {
                ObjectiveArg::Max => Objective::Maximize,
                ObjectiveArg::Min => Objective::Minimize,
            };
            let result = optimize::search_formats_with_guard(
                &values,
                canonical,
                objective,
                engine_guard,
            )?;
            let command = format!(
                "optimize --instance {} --player {player} --objective {}",
                instance.display(),
                match objective {
                    Objective::Maximize => "max",
                    Objective::Minimize => "min",
                }
            );
            Ok(Outcome::Report(Box::new(report::search(
                command, &values, *player, &result,
            ))))
        }

        Command::Formats { n, count } => {
            let command = format!("formats --n {n}{}", if *count { " --count" } else { "" });
            let report = report::formats(command, *n, enumeration_guard)?;
            if *count {
                let c = report
                    .formats
                    .as_ref()
                    .map(|f| f.count)
                    .unwrap_or_default();
                Ok(Outcome::Plain(c.to_string()))
            } else {
                Ok(Outcome::Report(Box::new(report)))
            }
        }

        Command::Verify {
            suite,
            n_max,
            p,
            instances,
            seed,
        } => {
            let ps = parse_probabilities(p)?;
            let half = BigRational::new(1.into(), 2.into());
            let strong_ps = select_ps(&ps, |v| *v > half, "2/3");
            let weak_ps = select_ps(&ps, |v| *v < half, "1/3");

            let mut suites = Vec::new();
            if matches!(suite, SuiteArg::Strongest | SuiteArg::All) {
                for p in &strong_ps {
                    suites.push(report::suite_row(&optimize::verify_strongest_extremes(
                        *n_max, p,
                    )?));
                }
            }
            if matches!(suite, SuiteArg::Weakest | SuiteArg::All) {
                for p in &weak_ps {
                    suites.push(report::suite_row(&optimize::verify_weakest_extremes(
                        *n_max, p,
                    )?));
                }
            }
            if matches!(suite, SuiteArg::Martingale | SuiteArg::All) {
                suites.push(report::suite_row(&optimize::verify_martingale(
                    *n_max, *instances, *seed,
                )?));
            }
            let command = format!(
                "verify --suite {} --n-max {n_max}",
                match suite {
                    SuiteArg::Strongest => "strongest",
                    SuiteArg::Weakest => "weakest",
                    SuiteArg::Martingale => "martingale",
                    SuiteArg::All => "all",
                }
            );
            Ok(Outcome::Report(Box::new(report::verify(command, suites))))
        }

        Command::Repro { case } => {
            let result = optimize::reproduce_counterexamples(case)?;
            let command = format!("repro --case {case}");
            Ok(Outcome::Report(Box::new(report::repro(command, &result))))
        }
    }
}

fn read_values(path: &PathBuf) -> Result<PlayerValues, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(PlayerValues::parse_instance(&text)?)
}

fn load_instance(args: &InstanceArgs) -> Result<(PlayerValues, Format), CliError> {
    let values = read_values(&args.instance)?;
    let format = Format::parse_spec(values.n(), &args.format)?;
    Ok((values, format))
}

fn parse_probabilities(raw: &[String]) -> Result<Vec<BigRational>, CliError> {
    raw.iter()
        .map(|s| {
            parse_rational(s)
                .map_err(|reason| CliError::Invalid(format!("bad probability {s:?}: {reason}")))
        })
        .collect()
}

fn select_ps(
    ps: &[BigRational],
    want: impl Fn(&BigRational) -> bool,
    default: &str,
) -> Vec<BigRational> {
    let picked: Vec<BigRational> = ps.iter().filter(|p| want(p)).cloned().collect();
    if picked.is_empty() {
        vec![parse_rational(default).expect("default parses")]
    } else {
        picked
    }
}
