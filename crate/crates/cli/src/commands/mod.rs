//! Subcommands. Each returns its result in structured and tabular form.

pub mod audit;
pub mod criteria;
pub mod simulate;
pub mod witness;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qkd_audit_core::loss::AttackStrategy;

use crate::error::Result;
use crate::formats::{self, Bundle, Claim, GridFile, SimulationSpec};
use crate::output::{Format, Rendered};
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "qkd-audit", version, about = "Audit QKD security claims and simulate lossy-channel attacks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Output format; `report` defaults to md, every other command to json.
    #[arg(short, long, value_enum)]
    pub format: Option<Format>,
    /// Suppress warnings on standard error.
    #[arg(short, long)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-number criteria of a key distribution.
    Criteria {
        /// Distribution file, or any document with a `distribution` member.
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Worst key compatible with a security claim.
    Audit {
        /// Claim file, or a bundle with a `claim` member.
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Simulate one protocol run or a transmittance sweep.
    Simulate {
        /// Protocol configuration file, or a bundle with a `simulation` member.
        #[arg(short, long)]
        input: PathBuf,
        /// Attack file; overrides the bundle attack. No attack when absent.
        #[arg(short, long)]
        attack: Option<PathBuf>,
        /// Grid file with `eta_grid`; one run per value.
        #[arg(short, long)]
        grid: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Perceived-versus-real table for an instance bundle.
    Report {
        /// Bundle file with claim, distribution, hash and simulation.
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write an extremal distribution as a distribution file.
    Witness {
        #[arg(short, long, value_enum)]
        kind: witness::WitnessKind,
        #[arg(short, long)]
        n_bits: u32,
        /// Information or distance bound (info, vd).
        #[arg(long)]
        value: Option<f64>,
        /// Revealed prefix length (kpa).
        #[arg(long)]
        l_prime: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

impl Command {
    pub fn output_args(&self) -> &OutputArgs {
        match self {
            Command::Criteria { out, .. }
            | Command::Audit { out, .. }
            | Command::Simulate { out, .. }
            | Command::Report { out, .. }
            | Command::Witness { out, .. } => out,
        }
    }

    pub fn default_format(&self) -> Format {
        match self {
            Command::Report { .. } => Format::Md,
            _ => Format::Json,
        }
    }
}

/// Runs a command; `warn` receives non-fatal findings.
pub fn execute(command: &Command, warn: &mut dyn FnMut(String)) -> Result<Rendered> {
    match command {
        Command::Criteria { input, .. } => {
            let p = formats::read_distribution(input)?;
            criteria::render(&criteria::criteria_report(&p)?)
        }
        Command::Audit { input, .. } => {
            let claim: Claim = formats::read_member(input, "claim")?;
            audit::render(&audit::audit_report(&claim)?)
        }
        Command::Simulate {
            input, attack, grid, ..
        } => {
            let mut value = formats::read_value(input)?;
            let mut spec = match value.get_mut("simulation") {
                Some(inner) => formats::parse(inner.take(), input, Some("simulation"))?,
                None => SimulationSpec {
                    config: formats::parse(value, input, None)?,
                    attack: AttackStrategy::None,
                },
            };
            if let Some(path) = attack {
                spec.attack = formats::read_json(path)?;
            }
            let grid: Option<GridFile> = grid.as_deref().map(formats::read_json).transpose()?;
            for w in simulate::validate(&spec)? {
                warn(w.to_string());
            }
            let report = simulate::simulate(&spec, grid.as_ref().map(|g| g.eta_grid.as_slice()))?;
            simulate::render(&report)
        }
        Command::Report { input, .. } => {
            let bundle = Bundle::read(input)?;
            for w in simulate::validate(&bundle.simulation)? {
                warn(w.to_string());
            }
            report::render(&report::build_report(&bundle)?)
        }
        Command::Witness {
            kind,
            n_bits,
            value,
            l_prime,
            seed,
            ..
        } => witness::render(&witness::witness(*kind, *n_bits, *value, *l_prime, *seed)?),
    }
}
