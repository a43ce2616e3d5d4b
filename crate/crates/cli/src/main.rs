//! `geamlab` command-line driver.
//!
//! Exit status: 0 on success, 1 when a verification or GEAM check fails,
//! 2 on configuration or input errors.

mod commands;
mod config;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::Parser;

use commands::{detect_cmd, geam_check, sweep_cmd, verify, CmdResult, Passed};
use config::{Command, Format, RunConfig};
use output::Sink;

fn threads(cfg: &RunConfig) -> CmdResult<Option<usize>> {
    if let Some(n) = cfg.threads {
        return Ok(Some(n));
    }
    match std::env::var("GEAMLAB_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().map_err(|_| format!("GEAMLAB_THREADS = '{v}' is not a count"))?)),
        Err(_) => Ok(None),
    }
}

fn run(cfg: RunConfig) -> CmdResult<Passed> {
    if cfg.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(true);
    }
    if let Command::Replay { config } = &cfg.command {
        let text = fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
        let saved: RunConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", config.display()))?;
        if matches!(saved.command, Command::Replay { .. }) {
            return Err("a replayed configuration cannot itself be a replay".into());
        }
        return run(saved);
    }
    if let Some(n) = threads(&cfg)? {
        if n == 0 {
            return Err("thread count must be positive".into());
        }
        // Fails only if a pool already exists, which keeps its own bound.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut sink = Sink::open(cfg.output.as_deref())?;
    let json = cfg.format.unwrap_or(Format::Json);
    match &cfg.command {
        Command::Verify(a) => verify(a, json, &mut sink),
        Command::Detect(a) => detect_cmd(a, json, &mut sink),
        Command::Sweep(a) => sweep_cmd(a, cfg.format.unwrap_or(Format::Csv), &mut sink),
        Command::GeamCheck(a) => geam_check(a, &mut sink),
        Command::Replay { .. } => unreachable!("handled above"),
    }
}

/// A closed downstream pipe (`geamlab sweep | head`) is not a failure.
fn broken_pipe(e: &(dyn std::error::Error + 'static)) -> bool {
    let io = match e.downcast_ref::<csv::Error>() {
        Some(c) => match c.kind() {
            csv::ErrorKind::Io(io) => Some(io),
            _ => None,
        },
        None => e.downcast_ref::<std::io::Error>(),
    };
    io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match run(cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if broken_pipe(e.as_ref()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
