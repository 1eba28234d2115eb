//! Input file formats.

use std::fs;
use std::path::{Path, PathBuf};

use qkd_audit_core::dist::KeyDistribution;
use qkd_audit_core::loss::{AttackStrategy, ProtocolConfig};
use qkd_audit_core::pa::{random_toeplitz_hash, LinearHash};
use qkd_audit_core::quantum::CqEnsemble;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

/// Version stamped into every JSON document the tool writes.
pub const SCHEMA_VERSION: u32 = 1;

pub fn read_value(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

pub fn parse<T: DeserializeOwned>(value: Value, path: &Path, member: Option<&str>) -> Result<T> {
    serde_json::from_value(value).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        message: match member {
            Some(m) => format!("in `{m}`: {e}"),
            None => e.to_string(),
        },
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse(read_value(path)?, path, None)
}

/// Reads `T` from the file itself or, when present, from its `member`
/// entry. Lets witness files and report bundles stand in for the plain
/// input of a command.
pub fn read_member<T: DeserializeOwned>(path: &Path, member: &str) -> Result<T> {
    let mut value = read_value(path)?;
    if let Some(inner) = value.get_mut(member) {
        let inner = inner.take();
        return parse(inner, path, Some(member));
    }
    parse(value, path, None)
}

pub fn read_distribution(path: &Path) -> Result<KeyDistribution> {
    read_member(path, "distribution")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Eve's information `n − H(K)` in bits.
    Info,
    /// Variational distance to the uniform key.
    Vd,
    /// Trace distance of the key-probe state to uniform key times averaged probe.
    Trace,
}

/// A security claim "criterion ≤ value" on an `n_bits` key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub criterion: Criterion,
    pub value: f64,
    pub n_bits: u32,
    /// Key-probe ensemble, required for the trace criterion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<CqEnsemble>,
}

/// A hash given explicitly by its rows, or drawn as a Toeplitz matrix from
/// `seed` when `rows` is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HashSpec {
    pub m: u32,
    pub n: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<u32>>,
}

impl HashSpec {
    pub fn build(&self) -> Result<LinearHash> {
        match &self.rows {
            Some(rows) => LinearHash::from_rows(self.m, self.n, rows.clone(), self.seed),
            None => random_toeplitz_hash(self.m, self.n, self.seed),
        }
        .map_err(CliError::input)
    }
}

/// A protocol run: line configuration and Eve's strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    pub config: ProtocolConfig,
    #[serde(default = "no_attack")]
    pub attack: AttackStrategy,
}

fn no_attack() -> AttackStrategy {
    AttackStrategy::None
}

/// Transmittance values for a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub eta_grid: Vec<f64>,
}

/// Everything the report needs about one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub claim: Claim,
    pub distribution: KeyDistribution,
    pub hash: HashSpec,
    pub simulation: SimulationSpec,
    /// Key bits exposed by known plaintext; defaults to half the key.
    pub known_plaintext_bits: Option<u32>,
}

pub const BUNDLE_MEMBERS: [&str; 4] = ["claim", "distribution", "hash", "simulation"];

impl Bundle {
    pub fn read(path: &Path) -> Result<Self> {
        let value = read_value(path)?;
        let Value::Object(mut map) = value else {
            return Err(CliError::Parse {
                path: path.to_owned(),
                message: "bundle must be a JSON object".into(),
            });
        };
        for key in map.keys() {
            if !BUNDLE_MEMBERS.contains(&key.as_str())
                && key != "known_plaintext_bits"
                && key != "schema_version"
            {
                return Err(CliError::Parse {
                    path: path.to_owned(),
                    message: format!("unknown bundle member `{key}`"),
                });
            }
        }
        let mut take = |name: &'static str| map.remove(name).ok_or(CliError::MissingMember(name));
        let claim = take("claim")?;
        let distribution = take("distribution")?;
        let hash = take("hash")?;
        let simulation = take("simulation")?;
        let known = map.remove("known_plaintext_bits");
        Ok(Self {
            claim: parse(claim, path, Some("claim"))?,
            distribution: parse(distribution, path, Some("distribution"))?,
            hash: parse(hash, path, Some("hash"))?,
            simulation: parse(simulation, path, Some("simulation"))?,
            known_plaintext_bits: known
                .map(|v| parse(v, path, Some("known_plaintext_bits")))
                .transpose()?,
        })
    }
}

/// Path shown in messages for data that did not come from a file.
pub fn display_path(path: Option<&Path>) -> PathBuf {
    path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_owned)
}
