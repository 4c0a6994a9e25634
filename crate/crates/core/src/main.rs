use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fta::report::format_probability;
use fta::solar::{self, SolarRates};
use fta::{mcs, parse_ft, top_probability, FaultTree, Method, MissionTime};

/// Static fault-tree analysis: minimal cut sets and top-event probability.
#[derive(Debug, Parser)]
#[command(name = "fta", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a fault-tree file.
    Validate { file: PathBuf },
    /// Print the minimal cut sets, one per line.
    Mcs {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Top-event failure probability at a mission time.
    Prob {
        file: PathBuf,
        #[arg(long)]
        time: f64,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        json: bool,
    },
    /// Top-event probability over evenly spaced times, written as CSV.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: u32,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Solar-array case study: inclusion-exclusion, enumeration and closed form.
    SolarDemo {
        #[arg(long)]
        time: f64,
        /// Fourteen comma-separated failure rates for x1..x14 (per hour).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        rates: Option<Vec<f64>>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodName {
    Pie,
    Enum,
    Mc,
}

#[derive(Debug, clap::Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = MethodName::Pie)]
    method: MethodName,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl MethodArgs {
    fn method(&self) -> Method {
        match self.method {
            MethodName::Pie => Method::Pie,
            MethodName::Enum => Method::Enum,
            MethodName::Mc => Method::MonteCarlo {
                samples: self.samples,
                seed: self.seed,
            },
        }
    }
}

/// Failure exit: 1 for analysis errors, 2 for usage and input errors.
enum Failure {
    Analysis(String),
    Usage(String),
}

impl From<fta::Error> for Failure {
    fn from(e: fta::Error) -> Self {
        Failure::Analysis(e.to_string())
    }
}

fn load(path: &Path) -> Result<FaultTree, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_ft(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn time(hours: f64) -> Result<MissionTime, Failure> {
    MissionTime::new(hours).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let io = |e: std::io::Error| Failure::Analysis(e.to_string());
    match cli.command {
        Command::Validate { file } => {
            load(&file)?;
            writeln!(out, "ok").map_err(io)?;
        }
        Command::Mcs { file, json } => {
            let tree = load(&file)?;
            let cut_sets = mcs(&tree)?;
            if json {
                let lists: Vec<Vec<&str>> = cut_sets
                    .iter()
                    .map(|cs| cs.iter().map(|id| id.as_str()).collect())
                    .collect();
                writeln!(out, "{}", serde_json::to_string(&lists).unwrap()).map_err(io)?;
            } else {
                write!(out, "{cut_sets}").map_err(io)?;
            }
        }
        Command::Prob {
            file,
            time: t,
            method,
            json,
        } => {
            let tree = load(&file)?;
            let report = top_probability(&tree, time(t)?, method.method())?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&report).unwrap()).map_err(io)?;
            } else {
                writeln!(out, "{}", format_probability(report.probability)).map_err(io)?;
            }
        }
        Command::Sweep {
            file,
            from,
            to,
            steps,
            method,
            output,
        } => {
            if steps == 0 {
                return Err(Failure::Usage("--steps must be at least 1".into()));
            }
            time(from)?;
            time(to)?;
            let tree = load(&file)?;
            let mut csv = String::from("time,probability\n");
            for k in 0..=steps {
                let t = if k == steps {
                    to
                } else {
                    from + (to - from) * f64::from(k) / f64::from(steps)
                };
                let report = top_probability(&tree, time(t)?, method.method())?;
                csv.push_str(&format!("{t},{}\n", format_probability(report.probability)));
            }
            fs::write(&output, csv)
                .map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;
        }
        Command::SolarDemo {
            time: t,
            rates,
            json,
        } => {
            let rates = match rates {
                Some(r) => SolarRates::from_slice(&r),
                None => SolarRates::uniform(1e-5),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            let t = time(t)?;
            if t.hours() < 0.0 {
                return Err(Failure::Usage("--time must be >= 0".into()));
            }
            let report = solar::compare(&rates, t)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&report).unwrap()).map_err(io)?;
            } else {
                write!(out, "{report}").map_err(io)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Analysis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
