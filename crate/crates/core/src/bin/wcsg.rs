use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use wcsg::cli::{emit, run, ExperimentConfig, Format, Overrides, Suite};

/// Run a diagnostic suite for weighted composition semigroups.
#[derive(Debug, Parser)]
#[command(name = "wcsg", version)]
struct Args {
    suite: Suite,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV of the per-case numbers.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the angular node count of quadrature and sample grids.
    #[arg(long)]
    grid: Option<usize>,
    /// Record wall-clock time in the report (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let overrides = Overrides {
        tol: args.tol,
        grid: args.grid,
    };
    let report = ExperimentConfig::load(&args.config)
        .and_then(|cfg| overrides.apply(cfg))
        .and_then(|cfg| run(&cfg, Some(args.suite)));
    let mut report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("wcsg: {e}");
            return ExitCode::from(2);
        }
    };
    if args.timing {
        report.meta.wall_clock_s = Some(start.elapsed().as_secs_f64());
    }
    let written = match &args.out {
        Some(path) => emit(&report, Format::Json, path),
        None => report.to_json().map(|text| println!("{text}")),
    }
    .and_then(|_| match &args.csv {
        Some(path) => emit(&report, Format::Csv, path),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("wcsg: {e}");
        return ExitCode::from(2);
    }
    let s = report.summary;
    eprintln!(
        "{}: {} cases, {} passed, {} failed, {} errors",
        args.suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default(),
        s.total,
        s.passed,
        s.failed,
        s.errors
    );
    if s.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
