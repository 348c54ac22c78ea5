mod args;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::{CliError, OutputOpts, Rendered};

const THREADS_VAR: &str = "BELL_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let p = out.with_extension("json");
    if p == out {
        let mut s = out.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    } else {
        p
    }
}

fn emit(rendered: Rendered, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &rendered.text)?;
            if let Some(meta) = rendered.sidecar {
                std::fs::write(sidecar_path(path), output::pretty(&meta))?;
            }
        }
        None => print!("{}", rendered.text),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let tabular = matches!(cli.command, Command::Scan(_) | Command::Figure(_));
    let format = cli
        .format
        .unwrap_or(if tabular { Format::Csv } else { Format::Json });
    let o = OutputOpts {
        format,
        digits: cli.precision,
    };
    let rendered = match &cli.command {
        Command::Probs(a) => commands::probs(a, o)?,
        Command::Ineq(a) => commands::ineq(a, o)?,
        Command::Scan(a) => commands::scan(a, o)?,
        Command::Figure(a) => commands::figure(a, o)?,
        Command::Optimize(a) => commands::optimize(a, o)?,
        Command::Localize(a) => commands::localize(a, o)?,
    };
    emit(rendered, cli.out.as_deref())
}

fn arguments() -> Result<Vec<OsString>, CliError> {
    let raw: Vec<OsString> = std::env::args_os().collect();
    match config::config_path(&raw) {
        Some(path) => {
            let entries =
                config::load(Path::new(&path)).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(config::merge(&raw, &entries))
        }
        None => Ok(raw),
    }
}

fn main() -> ExitCode {
    let result = arguments().and_then(|argv| {
        // clap prints help/usage itself and exits 0 or 2
        let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
        run(cli)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
