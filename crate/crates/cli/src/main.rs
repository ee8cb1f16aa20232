use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hk_cli::cache::{FileCache, CACHE_ENV};
use hk_cli::pipeline::{bound_report, compute, fsig, CliError, RunOptions};
use hk_cli::report::{bounds_table, Report};
use hk_cli::verify::{verify, VerifyOptions};
use hk_core::bounds::BoundInputs;
use hk_core::frobenius::DEFAULT_MAX_COLENGTH;
use hk_core::polyfield::OrderKind;

#[derive(Parser)]
#[command(name = "hk", version, about = "Hilbert-Kunz functions, multiplicities and F-signatures over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample λ(R/I^[q]), extrapolate e_HK(I) and check the closed-form bounds.
    Compute {
        /// Presentation file, or `-` for standard input.
        input: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Splitting numbers a_q and the F-signature of a Gorenstein ring.
    Fsig {
        input: String,
        /// System of parameters, e.g. "x+y, z".
        #[arg(long)]
        sop: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Closed-form lower bounds on e_HK.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        /// Multiplicity e(R).
        #[arg(long)]
        e: u64,
        /// Number of generators of the maximal ideal.
        #[arg(long)]
        t: u64,
        #[arg(long)]
        hypersurface: bool,
        /// Evaluate the bounds against this value of e_HK.
        #[arg(long)]
        ehk: Option<f64>,
        #[arg(long)]
        table: bool,
    },
    /// Run the fixture corpus against its expected values.
    Verify {
        /// Directory of `<id>.hk` / `<id>.json` pairs.
        dir: PathBuf,
        /// Only fixtures whose id contains NAME or that carry the tag NAME.
        #[arg(long, value_name = "NAME")]
        filter: Option<String>,
        /// Total time budget in seconds.
        #[arg(long, value_name = "S")]
        budget: Option<f64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Cache directory (default: $HK_CACHE_DIR).
        #[arg(long, value_name = "DIR")]
        cache: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Degrevlex,
    Deglex,
    Lex,
}

#[derive(Args)]
struct RunArgs {
    /// Largest e sampled (default by dimension, lowered to stay under the colength cap).
    #[arg(long)]
    emax: Option<u32>,
    #[arg(long, value_enum, default_value = "degrevlex")]
    order: Order,
    /// Print the report as JSON (the default).
    #[arg(long, conflicts_with_all = ["table", "csv"])]
    json: bool,
    /// Print the report as aligned text.
    #[arg(long, conflicts_with = "csv")]
    table: bool,
    /// Print the series as CSV.
    #[arg(long)]
    csv: bool,
    /// Threads used for the per-e samples.
    #[arg(long)]
    workers: Option<usize>,
    /// Cache directory (default: $HK_CACHE_DIR; no cache when unset).
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Refuse samples whose colength exceeds N.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_COLENGTH)]
    max_colength: u64,
    /// Per-sample time limit in seconds.
    #[arg(long, value_name = "S")]
    timeout: Option<f64>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        let defaults = RunOptions::default();
        RunOptions {
            e_max: self.emax,
            order: match self.order {
                Order::Degrevlex => OrderKind::DegRevLex,
                Order::Deglex => OrderKind::DegLex,
                Order::Lex => OrderKind::Lex,
            },
            workers: self.workers,
            max_colength: self.max_colength,
            timeout: self.timeout.map(Duration::from_secs_f64).or(defaults.timeout),
        }
    }

    fn print(&self, report: &Report) {
        if self.csv {
            print!("{}", report.to_csv());
        } else if self.table {
            print!("{}", report.to_table());
        } else {
            println!("{}", report.to_json());
        }
    }
}

fn open_cache(dir: Option<&Path>) -> Option<FileCache> {
    let dir = dir
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))?;
    Some(FileCache::open(&dir))
}

fn read_input(input: &str) -> Result<String, CliError> {
    if input == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Parse(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(input).map_err(|e| CliError::Parse(format!("{input}: {e}")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute { input, run } => {
            let text = read_input(&input)?;
            let cache = open_cache(run.cache.as_deref());
            let report = compute(&text, &run.options(), cache.as_ref())?;
            run.print(&report);
        }
        Command::Fsig { input, sop, run } => {
            let text = read_input(&input)?;
            let cache = open_cache(run.cache.as_deref());
            let report = fsig(&text, &sop, &run.options(), cache.as_ref())?;
            run.print(&report);
        }
        Command::Bounds {
            d,
            p,
            e,
            t,
            hypersurface,
            ehk,
            table,
        } => {
            let report = bound_report(BoundInputs { d, p, e, t, hypersurface }, ehk);
            if table {
                println!("{}", bounds_table(&report.entries));
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("bounds serialize"));
            }
        }
        Command::Verify {
            dir,
            filter,
            budget,
            workers,
            cache,
        } => {
            let cache = open_cache(cache.as_deref());
            let opts = VerifyOptions {
                filter,
                budget: budget.map(Duration::from_secs_f64),
                workers,
            };
            verify(&dir, &opts, cache.as_ref(), &mut io::stdout())?.into_result()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("hk: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
