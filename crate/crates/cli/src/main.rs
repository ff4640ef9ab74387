//! `pairfield` command-line tool.

mod commands;
mod config;
mod error;
mod output;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RawConfig, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "pairfield", version, about = "Fields and moments of a coherent electron pair")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radial profile of the scalar and vector potentials (CSV).
    Profile(Common),
    /// Quadrupole tensor, magnetic moment and overlap (JSON).
    Moments(Common),
    /// Angular quadrupole surface (CSV or OBJ).
    Surface(Common),
    /// Recover r0 and p0 from a quadrupole tensor (JSON).
    Recover(Common),
    /// Packet width and uncertainty product over time (CSV).
    Evolve(Common),
    /// Check every closed form against quadrature.
    Validate(Common),
}

/// Options shared by all commands. Each `--key` overrides `key` from the
/// config file.
#[derive(Args)]
struct Common {
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Physical constants, e.g. `hbar=1,mass=1,c=137,e0=1`.
    #[arg(long)]
    units: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    t0: Option<String>,
    /// Relative coordinate `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<String>,
    /// Relative momentum `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<String>,
    /// `symmetric` or `antisymmetric`.
    #[arg(long)]
    symmetry: Option<String>,
    /// `single` or `pair` (profile).
    #[arg(long)]
    mode: Option<String>,
    /// Profile direction `x,y,z`.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<String>,
    #[arg(long)]
    n_theta: Option<String>,
    #[arg(long)]
    n_phi: Option<String>,
    /// `csv`, `obj` or `json`.
    #[arg(long)]
    format: Option<String>,
    /// Surface preset: fig3, fig4, fig5 or fig6.
    #[arg(long)]
    preset: Option<String>,
    /// What `recover` reconstructs: auto, r0 or p0.
    #[arg(long)]
    target: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dxx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dyy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dzz: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dxz: Option<String>,
    /// Moments report to recover from.
    #[arg(long)]
    input: Option<String>,
    /// Tolerance applied to every validation check.
    #[arg(long)]
    tolerance: Option<String>,
    /// Validate against the σ² off-diagonal quadrupole (test hook).
    #[arg(long)]
    inject_fault: bool,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        if let Some(units) = &self.units {
            raw.set_units(units)?;
        }
        let flags = [
            ("sigma", &self.sigma),
            ("t0", &self.t0),
            ("r0", &self.r0),
            ("p0", &self.p0),
            ("symmetry", &self.symmetry),
            ("mode", &self.mode),
            ("direction", &self.direction),
            ("r_min", &self.r_min),
            ("r_max", &self.r_max),
            ("points", &self.points),
            ("t_min", &self.t_min),
            ("t_max", &self.t_max),
            ("n_theta", &self.n_theta),
            ("n_phi", &self.n_phi),
            ("format", &self.format),
            ("preset", &self.preset),
            ("target", &self.target),
            ("dxx", &self.dxx),
            ("dyy", &self.dyy),
            ("dzz", &self.dzz),
            ("dxz", &self.dxz),
            ("input", &self.input),
            ("tolerance", &self.tolerance),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                raw.set_flag(key, value)?;
            }
        }
        if self.inject_fault {
            raw.set_flag("inject_fault", "true")?;
        }
        RunConfig::resolve(&raw)
    }
}

fn run(command: Command) -> Result<(), CliError> {
    let (common, produce): (&Common, fn(&RunConfig) -> Result<String, CliError>) = match &command {
        Command::Profile(c) => (c, commands::profile),
        Command::Moments(c) => (c, commands::moments),
        Command::Surface(c) => (c, commands::surface),
        Command::Recover(c) => (c, commands::recover),
        Command::Evolve(c) => (c, commands::evolve),
        Command::Validate(c) => {
            let cfg = c.resolve()?;
            let checks = validate::run(&cfg)?;
            let text = validate::report(&checks);
            print!("{text}");
            if let Some(path) = &c.out {
                output::emit(&text, Some(path))?;
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            return if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Validation(format!("{failed} validation check(s) failed")))
            };
        }
    };
    let cfg = common.resolve()?;
    let content = produce(&cfg)?;
    output::emit(&content, common.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
