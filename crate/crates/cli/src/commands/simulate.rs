use qkd_audit_core::loss::{
    loss_sweep, run_protocol, sweep_seed, AttackStrategy, ConfigWarning, ProtocolConfig, RunTallies,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{SimulationSpec, SCHEMA_VERSION};
use crate::output::{num, Rendered, Table};

/// CSV column order of a simulation row.
pub const COLUMNS: [&str; 13] = [
    "index",
    "transmittance_eta",
    "seed",
    "pulses_sent",
    "pulses_detected",
    "sifted_bits",
    "error_bits",
    "eve_known_bits",
    "qber",
    "detection_rate",
    "eve_known_fraction",
    "perceived_rate",
    "real_rate_exponent",
];

#[derive(Debug, Clone, Serialize)]
pub struct SimulationRow {
    pub index: usize,
    pub transmittance_eta: f64,
    pub seed: u64,
    #[serde(flatten)]
    pub tallies: RunTallies,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: ProtocolConfig,
    pub attack: AttackStrategy,
    pub rows: Vec<SimulationRow>,
}

/// Checks the configuration and attack before any pulse is simulated.
pub fn validate(spec: &SimulationSpec) -> Result<Vec<ConfigWarning>> {
    let warnings = spec.config.validate().map_err(CliError::input)?;
    spec.attack
        .validate(spec.config.protocol)
        .map_err(CliError::input)?;
    Ok(warnings)
}

/// One run, or one run per grid point when a grid is given.
pub fn simulate(spec: &SimulationSpec, grid: Option<&[f64]>) -> Result<SimulationReport> {
    let config = &spec.config;
    let rows = match grid {
        None => vec![SimulationRow {
            index: 0,
            transmittance_eta: config.transmittance_eta,
            seed: config.seed,
            tallies: run_protocol(config, spec.attack).map_err(CliError::runtime)?,
        }],
        Some(grid) => {
            if let Some(bad) = grid.iter().find(|&&eta| !(eta > 0.0 && eta <= 1.0)) {
                return Err(CliError::Input(format!(
                    "grid value {bad} outside (0, 1]"
                )));
            }
            loss_sweep(config, spec.attack, grid)
                .map_err(CliError::runtime)?
                .into_iter()
                .zip(grid)
                .enumerate()
                .map(|(index, (tallies, &eta))| SimulationRow {
                    index,
                    transmittance_eta: eta,
                    seed: sweep_seed(config.seed, index),
                    tallies,
                })
                .collect()
        }
    };
    Ok(SimulationReport {
        schema_version: SCHEMA_VERSION,
        command: "simulate",
        config: config.clone(),
        attack: spec.attack,
        rows,
    })
}

pub fn render(report: &SimulationReport) -> Result<Rendered> {
    let mut table = Table::new(&COLUMNS);
    for row in &report.rows {
        let t = &row.tallies;
        let c = &t.counts;
        table.push(vec![
            row.index.to_string(),
            num(row.transmittance_eta),
            row.seed.to_string(),
            c.pulses_sent.to_string(),
            c.pulses_detected.to_string(),
            c.sifted_bits.to_string(),
            c.error_bits.to_string(),
            c.eve_known_bits.to_string(),
            num(t.qber),
            num(t.detection_rate),
            num(t.eve_known_fraction),
            num(t.perceived_rate),
            num(t.real_rate_exponent),
        ]);
    }
    Ok(Rendered {
        json: serde_json::to_value(report).map_err(|e| CliError::Runtime(e.to_string()))?,
        table,
    })
}
