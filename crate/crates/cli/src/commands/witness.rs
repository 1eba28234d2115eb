use qkd_audit_core::dist::KeyDistribution;
use qkd_audit_core::extremal::{kpa_witness_family, max_guess_given_information, max_guess_given_vd};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::SCHEMA_VERSION;
use crate::output::{num, Rendered, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Spike of largest p1 with Eve's information at most `value`.
    Info,
    /// Spike of largest p1 within variational distance `value` of uniform.
    Vd,
    /// Key fixed by its first `l_prime` bits, drawn from `seed`.
    Kpa,
}

/// Extremal distribution, readable back as a distribution file.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessFile {
    pub schema_version: u32,
    pub command: &'static str,
    pub kind: WitnessKind,
    pub n_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_prime: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub p1: f64,
    pub distribution: KeyDistribution,
}

pub fn witness(
    kind: WitnessKind,
    n_bits: u32,
    value: Option<f64>,
    l_prime: Option<u32>,
    seed: u64,
) -> Result<WitnessFile> {
    let need_value = || value.ok_or_else(|| CliError::Input(format!("--value is required for {kind:?}")));
    let mut file = WitnessFile {
        schema_version: SCHEMA_VERSION,
        command: "witness",
        kind,
        n_bits,
        value: None,
        l_prime: None,
        seed: None,
        p1: 0.0,
        distribution: KeyDistribution::point_mass(1, 0).map_err(CliError::runtime)?,
    };
    let (p1, distribution) = match kind {
        WitnessKind::Info | WitnessKind::Vd => {
            let v = need_value()?;
            file.value = Some(v);
            let r = if kind == WitnessKind::Info {
                max_guess_given_information(n_bits, v)
            } else {
                max_guess_given_vd(n_bits, v)
            }
            .map_err(CliError::input)?;
            (r.p1_star, r.witness)
        }
        WitnessKind::Kpa => {
            let l = l_prime.ok_or_else(|| CliError::Input("--l-prime is required for kpa".into()))?;
            let w = kpa_witness_family(n_bits, l, seed).map_err(CliError::input)?;
            file.l_prime = Some(l);
            file.seed = Some(seed);
            (w.p1_before, w.distribution)
        }
    };
    file.p1 = p1;
    file.distribution = distribution;
    Ok(file)
}

pub fn render(file: &WitnessFile) -> Result<Rendered> {
    let mut table = Table::new(&["index", "probability"]);
    for (i, p) in file.distribution.iter_nonzero() {
        table.push(vec![i.to_string(), num(p)]);
    }
    Ok(Rendered {
        json: serde_json::to_value(file).map_err(|e| CliError::Runtime(e.to_string()))?,
        table,
    })
}
