//! `v2vlab` command line: config parsing, subcommand dispatch and summaries.
//!
//! Exit codes: 0 success, 1 validation failure or run error, 2 config
//! error, 3 I/O error.

pub mod parse;
pub mod schema;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{analytic_table, persist, run_fig3, run_fig4, run_sweep, Executor, ExperimentConfig, Table};
use crate::traffic::spatial_rate;

pub use parse::{parse_config, parse_config_str};

/// Environment variable overriding the output directory.
pub const OUT_ENV: &str = "V2VLAB_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "v2vlab",
    version,
    about = "V2V connectivity analytics and D2D-assisted routing simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file; defaults are used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override [experiment] master_seed.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Override [experiment] output_dir.
    #[arg(long, global = true, value_name = "DIR", env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub workers: usize,
    /// -v for info, -vv for debug logging.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Closed-form connectivity table per (R, L).
    Analytic,
    /// Monte Carlo sweep of every strategy over every (R, L).
    Simulate,
    /// Analytic hops and delay against simulation.
    Fig3,
    /// Recovery strategies on paired seeds.
    Fig4,
    /// Fast cross-checks of the analytic pipeline.
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analytic => "analytic",
            Command::Simulate => "simulate",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Validate => "validate",
        }
    }
}

pub fn command() -> clap::Command {
    Cli::command().after_long_help(schema::keys_help())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::ConfigValue { .. } | Error::UnknownKey { .. } | Error::UnknownStrategy(_) => {
            EXIT_CONFIG
        }
        Error::Io { .. } | Error::Json { .. } => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

/// Resolved configuration: file (or defaults) plus flag overrides.
pub fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => parse_config(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn save(cfg: &ExperimentConfig, cmd: Command, tables: &[&Table], notes: &[String], out: &mut dyn Write) -> Result<()> {
    let dir = cfg.output_dir.join(cmd.name());
    let files = persist(&dir, cmd.name(), cfg, tables, notes)?;
    for f in files {
        emit(out, &format!("wrote {}\n", f.display()))?;
    }
    Ok(())
}

/// Runs one subcommand, writing the human-readable summary to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = resolve(cli)?;
    for w in cfg.traffic.warnings() {
        log::warn!("{w}");
    }
    emit(
        out,
        &format!("# v2vlab {} master_seed={}\n", cli.command.name(), cfg.master_seed),
    )?;
    match cli.command {
        Command::Analytic => {
            let lambda = spatial_rate(&cfg.traffic)?;
            let t = analytic_table(&cfg, lambda);
            emit(out, &t.to_text())?;
            save(&cfg, cli.command, &[&t], &[], out)?;
        }
        Command::Simulate => {
            let exec = Executor::new(cli.workers)?;
            let t = run_sweep(&cfg, &exec)?;
            emit(out, &t.to_text())?;
            save(&cfg, cli.command, &[&t], &[], out)?;
        }
        Command::Fig3 => {
            let exec = Executor::new(cli.workers)?;
            let t = run_fig3(&cfg, &exec)?;
            emit(out, &t.to_text())?;
            save(&cfg, cli.command, &[&t], &[], out)?;
        }
        Command::Fig4 => {
            let exec = Executor::new(cli.workers)?;
            let r = run_fig4(&cfg, &exec)?;
            for t in [&r.unconditional, &r.dead_end, &r.headline] {
                emit(out, &format!("\n[{}]\n{}", t.name, t.to_text()))?;
            }
            for n in &r.notes {
                emit(out, &format!("note: {n}\n"))?;
            }
            save(
                &cfg,
                cli.command,
                &[&r.unconditional, &r.dead_end, &r.headline],
                &r.notes,
                out,
            )?;
        }
        Command::Validate => {
            let report = validate::validate_config(&cfg)?;
            for c in &report.checks {
                emit(out, &format!("{c}\n"))?;
            }
            let ok = report.passed();
            emit(
                out,
                if ok {
                    "all checks passed\n"
                } else {
                    "validation FAILED\n"
                },
            )?;
            return Ok(if ok { EXIT_OK } else { EXIT_VALIDATION });
        }
    }
    Ok(EXIT_OK)
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return EXIT_CONFIG;
        }
    };
    init_logging(cli.verbose);
    match execute(&cli, out) {
        Ok(code) => code,
        // a closed pipe (e.g. `| head`) is not worth reporting
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
