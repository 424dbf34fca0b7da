//! Command-line driver: associated primes, v-numbers, family analysis,
//! stabilization/dichotomy verification, and randomized exploration.

use std::fs;
use std::io::{IsTerminal, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vnum_core::{
    analyze, ass_subquotient, explore_q45, record_at, render_analysis, render_explore,
    render_prime_set, render_record, render_verify, verify, Error, EvalOptions, FamilySpec, Format,
    PowerPart, Result, VerdictStatus,
};

#[derive(Parser)]
#[command(
    name = "vnum",
    version,
    about = "Associated primes and v-numbers of monomial module families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input file (`-` reads standard input)
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// Output format: table, csv, json, or plot
    #[arg(long, default_value = "table")]
    format: String,
    /// Write the report to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HorizonArgs {
    /// Largest power n to evaluate
    #[arg(long = "n-max", default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=5000))]
    n_max: u32,
    /// Minimum run length accepted for stabilization and fits
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(3..=1000))]
    window: u32,
    /// Abort the evaluation when a module exceeds this many generators
    #[arg(long, default_value_t = 20_000)]
    generator_cap: usize,
}

impl HorizonArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            n_max: self.n_max,
            window: self.window,
            generator_cap: self.generator_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Associated primes of M/I^nN at one n
    Ass {
        #[command(flatten)]
        input: InputArgs,
        /// Power n of the ideal
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(0..=5000))]
        n: u32,
    },
    /// Local and global v-numbers of the modules at one n
    Vnumber {
        #[command(flatten)]
        input: InputArgs,
        /// Power n of the ideal
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(0..=5000))]
        n: u32,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Evaluate the family over n = 0…n-max with stabilization and fits
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Check the stabilization and dichotomy statements on the family
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Random search for off-V(I) v-number series without a determinate tail
    ExploreQ45 {
        /// Base seed; trial t uses seed + t
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances to examine
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..=100_000))]
        trials: u32,
        #[command(flatten)]
        horizon: HorizonArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
}

fn read_spec(args: &InputArgs) -> Result<FamilySpec> {
    let text = if args.input == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::invalid(format!("cannot read standard input: {e}")))?;
        buf
    } else {
        fs::read_to_string(&args.input)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", args.input.display())))?
    };
    vnum_core::parse_input(&text)
}

fn emit(render: &RenderArgs, text: &str) -> Result<()> {
    match &render.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Color only for human tables on a terminal, and never under NO_COLOR.
fn use_color(render: &RenderArgs) -> bool {
    render.out.is_none()
        && std::env::var_os("NO_COLOR").is_none()
        && std::io::stdout().is_terminal()
}

fn parse_format(render: &RenderArgs) -> Result<Format> {
    render.format.parse()
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Ass { input, n } => {
            let spec = read_spec(&input)?;
            let module = spec.power_layer(n, PowerPart::Quotient)?;
            let primes: Vec<_> = ass_subquotient(&module)?.into_iter().collect();
            println!("{}", render_prime_set(&primes));
            Ok(0)
        }
        Command::Vnumber { input, n, render } => {
            let spec = read_spec(&input)?;
            let format = parse_format(&render)?;
            let record = record_at(&spec, n)?;
            emit(
                &render,
                &render_record(&spec, &record, format, use_color(&render)),
            )?;
            Ok(0)
        }
        Command::Analyze {
            input,
            horizon,
            render,
        } => {
            let spec = read_spec(&input)?;
            let format = parse_format(&render)?;
            let analysis = analyze(&spec, &horizon.options())?;
            emit(
                &render,
                &render_analysis(&analysis, format, use_color(&render)),
            )?;
            Ok(if analysis.evaluation.aborted.is_some() {
                3
            } else {
                0
            })
        }
        Command::Verify {
            input,
            horizon,
            render,
        } => {
            let spec = read_spec(&input)?;
            let format = parse_format(&render)?;
            let report = verify(&spec, &horizon.options())?;
            emit(&render, &render_verify(&report, format, use_color(&render)))?;
            if report
                .verdicts
                .iter()
                .any(|v| v.status == VerdictStatus::Fail)
            {
                Ok(1)
            } else if report.analysis.evaluation.aborted.is_some() {
                Ok(3)
            } else {
                Ok(0)
            }
        }
        Command::ExploreQ45 {
            seed,
            trials,
            horizon,
            render,
        } => {
            let format = parse_format(&render)?;
            let report = explore_q45(seed, trials, &horizon.options())?;
            emit(
                &render,
                &render_explore(&report, format, use_color(&render)),
            )?;
            Ok(if report.flags.is_empty() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceCap(_) => 3,
                _ => 2,
            })
        }
    }
}
