use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tsnet::config::Config;
use tsnet::presets::{self, PRESETS};
use tsnet::{run_sweep, validate, Error, RunOptions, SimSettings, SweepKind};
use tsnet_core::SystemParams;

const EXIT_CONFIG: u8 = 1;
const EXIT_NONCONVERGENCE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

/// Sweeps and validation for a primary ad hoc network underlaid with a
/// wireless-powered cognitive secondary network.
#[derive(Parser)]
#[command(name = "tsnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep of a preset (see `list-presets`) or a config file.
    Run {
        target: String,
        /// Add Monte Carlo estimates and standard errors.
        #[arg(long)]
        simulate: bool,
        /// Independent RNG streams per estimate.
        #[arg(long, value_name = "N")]
        replicates: Option<u32>,
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// CSV destination; overrides the `output` key.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compare every analytic quantity with simulation at the reference
    /// operating point.
    Validate {
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
    },
    /// List the bundled figure presets.
    ListPresets,
}

fn load(target: &str) -> Result<Config, Error> {
    match presets::find(target) {
        Some(p) => Ok(Config::parse(p.text)?),
        None => Config::load(Path::new(target)),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::FAILURE,
    }
}

fn run_validation(params: &SystemParams, settings: &SimSettings, out: Option<&Path>) -> ExitCode {
    let report = match validate(params, settings) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NONCONVERGENCE);
        }
    };
    print!("{}", report.render());
    if let Some(path) = out {
        if let Err(e) = create(path).and_then(|w| Ok(report.write_csv(w)?)) {
            return fail(&e);
        }
        println!("wrote {}", path.display());
    }
    if report.passed() {
        println!("all checks within tolerance");
        ExitCode::SUCCESS
    } else {
        println!("{} check(s) outside tolerance", report.failures());
        ExitCode::from(EXIT_VALIDATION)
    }
}

fn run(
    target: &str,
    simulate: bool,
    replicates: Option<u32>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> ExitCode {
    let cfg = match load(target) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let mut settings = cfg.simulation;
    if let Some(r) = replicates {
        if r == 0 {
            eprintln!("error: --replicates must be at least 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        settings.replicates = r;
    }
    if let Some(s) = seed {
        settings.seed = s;
    }
    let out = out.or_else(|| cfg.sweep.output.clone());
    if cfg.sweep.kind == SweepKind::Validate {
        return run_validation(&cfg.params, &settings, out.as_deref());
    }
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.sweep.kind.as_str())));
    let table = run_sweep(&cfg.sweep, &cfg.params, &RunOptions { simulate, settings });
    if let Err(e) = create(&out).and_then(|w| Ok(tsnet::output::write_table(&table, w)?)) {
        return fail(&e);
    }
    let flagged = table.rows.iter().filter(|r| !r.flags.is_empty()).count();
    println!(
        "{}: {} rows over {} series written to {} ({} flagged)",
        table.kind.as_str(),
        table.rows.len(),
        cfg.sweep.series.len(),
        out.display(),
        flagged
    );
    for row in table.rows.iter().filter(|r| !r.flags.is_empty()) {
        println!(
            "  {} {} = {}: {}",
            row.series,
            table.axis,
            row.axis,
            row.status()
        );
    }
    if table.nonconverged_rows() > 0 {
        ExitCode::from(EXIT_NONCONVERGENCE)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            target,
            simulate,
            replicates,
            seed,
            out,
        } => run(&target, simulate, replicates, seed, out),
        Command::Validate { seed } => {
            let mut settings = SimSettings::default();
            if let Some(s) = seed {
                settings.seed = s;
            }
            run_validation(&SystemParams::default(), &settings, None)
        }
        Command::ListPresets => {
            for p in &PRESETS {
                println!("{:<6} {}", p.name, p.summary);
            }
            ExitCode::SUCCESS
        }
    }
}
