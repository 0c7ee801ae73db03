use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pairfluid::diagnostics::{electron_count, SeriesRecord};
use pairfluid::output::{write_manifest, write_series, write_snapshot, SERIES_FILE};
use pairfluid::simulation::{initial_state, run_with, FileObserver};
use pairfluid::{parse_config, selfcheck, Error, RunConfig};

const EXIT_CONFIG: u8 = 1;
const EXIT_BREAKDOWN: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pairfluid",
    about = "1D electron-positron fluid with Schwinger pair creation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write series, snapshots and a manifest.
    Run { config: PathBuf },
    /// Write only the t = 0 snapshot and series row.
    Init { config: PathBuf },
    /// Run the built-in invariant suite.
    Check,
    /// Print the version.
    Version,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::NumericalBreakdown { .. } => EXIT_BREAKDOWN,
        _ => EXIT_CONFIG,
    }
}

fn load(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

fn cmd_run(path: &Path) -> Result<u8, Error> {
    let config = load(path)?;
    let mut observer = FileObserver::create(&config.output.dir)?;
    let end = run_with(&config, &mut observer)?;
    let files = observer.finish()?;
    let status = match &end.breakdown {
        None => format!("complete, {} steps, t = {:e}", end.steps, end.state.t),
        Some(err) => format!("aborted after {} steps: {err}", end.steps),
    };
    let manifest = write_manifest(&config.output.dir, &config, &status, &files)?;
    eprintln!("{status}");
    eprintln!("wrote {} files and {}", files.len(), manifest.display());
    match end.breakdown {
        Some(err) => {
            eprintln!("error: {err}");
            Ok(EXIT_BREAKDOWN)
        }
        None => Ok(0),
    }
}

fn cmd_init(path: &Path) -> Result<u8, Error> {
    let config = load(path)?;
    let params = config.physics_params()?;
    let state = initial_state(&config)?;
    let dir = &config.output.dir;
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    let record = SeriesRecord::measure(&state, &params, electron_count(&state));
    write_series(&[record], dir.join(SERIES_FILE))?;
    let snap = write_snapshot(&state, dir, 0)?;
    eprintln!(
        "wrote {} and {}",
        dir.join(SERIES_FILE).display(),
        snap.display()
    );
    Ok(0)
}

fn cmd_check() -> Result<u8, Error> {
    let results = selfcheck::run_all()?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut failed = 0;
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        println!("{mark}  {:width$}  {}", r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("{} checks, {failed} failed", results.len());
    Ok(if failed == 0 { 0 } else { EXIT_CHECK_FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            let ok = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            return ExitCode::from(if ok { 0 } else { EXIT_CONFIG });
        }
    };
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Init { config } => cmd_init(&config),
        Command::Check => cmd_check(),
        Command::Version => {
            println!("pairfluid {}", env!("CARGO_PKG_VERSION"));
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
