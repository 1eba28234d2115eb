//! Perceived-versus-real security table for one instance.

use qkd_audit_core::binary_entropy;
use qkd_audit_core::dist::{
    distance_to_uniform, guessing_probability, posterior_guess_by_fiber, shannon_entropy,
    KeyDistribution, SubsetSpec,
};
use qkd_audit_core::extremal::kpa_break_length;
use qkd_audit_core::loss::{breach_threshold, rate_covered, run_protocol, AttackStrategy, Protocol};
use qkd_audit_core::pa::{pa_invariance_check, pushforward};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::commands::audit::audit_report;
use crate::commands::simulate::validate;
use crate::error::{CliError, Result};
use crate::formats::{Bundle, SCHEMA_VERSION};
use crate::output::{cell, Rendered, Table};

/// The seven aspects, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aspect {
    RawSecurity,
    KnownPlaintextComposition,
    PrivacyAmplification,
    KeyGenerationRate,
    DeterminationOfSecurity,
    TransmissionLoss,
    DetectorModeling,
}

impl Aspect {
    pub const ALL: [Aspect; 7] = [
        Aspect::RawSecurity,
        Aspect::KnownPlaintextComposition,
        Aspect::PrivacyAmplification,
        Aspect::KeyGenerationRate,
        Aspect::DeterminationOfSecurity,
        Aspect::TransmissionLoss,
        Aspect::DetectorModeling,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Aspect::RawSecurity => "raw security of K during key generation",
            Aspect::KnownPlaintextComposition => {
                "composition security of K against known-plaintext attack"
            }
            Aspect::PrivacyAmplification => "privacy amplification",
            Aspect::KeyGenerationRate => "key generation rate",
            Aspect::DeterminationOfSecurity => "determination of security",
            Aspect::TransmissionLoss => "effect of transmission loss on security",
            Aspect::DetectorModeling => "modeling of cryptosystem photon detector",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub aspect: Aspect,
    pub label: &'static str,
    /// What the quantities mean, as `perceived / real`.
    pub measure: &'static str,
    pub perceived: Value,
    pub real: Value,
    pub instance_params: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    pub rows: Vec<ReportRow>,
}

fn params(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => Map::new(),
    }
}

fn row(aspect: Aspect, measure: &'static str, perceived: f64, real: f64, p: Value) -> ReportRow {
    ReportRow {
        aspect,
        label: aspect.label(),
        measure,
        perceived: Value::from(perceived),
        real: Value::from(real),
        instance_params: params(p),
    }
}

fn known_plaintext_row(p: &KeyDistribution, known: u32) -> Result<ReportRow> {
    let n = p.n_bits();
    if known == 0 || known >= n {
        return Err(CliError::Input(format!(
            "known_plaintext_bits = {known} must lie in [1, {}]",
            n.saturating_sub(1)
        )));
    }
    let fibers = posterior_guess_by_fiber(p, &SubsetSpec::leading(known)).map_err(CliError::runtime)?;
    let worst = fibers.values().copied().fold(0.0, f64::max);
    let p1 = guessing_probability(p).p1;
    let l = 0.0 - p1.log2();
    let break_length = kpa_break_length(u64::from(n), l).map_err(CliError::runtime)?;
    Ok(row(
        Aspect::KnownPlaintextComposition,
        "p1 of the unrevealed bits: uniform reading / worst fiber",
        (-f64::from(n - known)).exp2(),
        worst,
        json!({
            "known_plaintext_bits": known,
            "break_length": break_length,
            "fibers": fibers.len(),
        }),
    ))
}

/// Builds the seven rows. Deterministic: every seed lives in the bundle.
pub fn build_report(bundle: &Bundle) -> Result<Report> {
    let p = &bundle.distribution;
    let n = p.n_bits();

    let audit = audit_report(&bundle.claim)?;
    let mut raw_params = json!({
        "criterion": audit.claim.criterion,
        "value": audit.claim.value,
        "n_bits": audit.claim.n_bits,
    });
    if let Some(gap) = &audit.gap {
        raw_params["max_subset_gap"] = Value::from(gap.max_subset_gap);
    }
    let raw = row(
        Aspect::RawSecurity,
        "p1: claim read as a perfect key / largest p1 the claim allows",
        audit.perceived.p1,
        audit.real.p1,
        raw_params,
    );

    let known = bundle.known_plaintext_bits.unwrap_or(n / 2);
    let kpa = known_plaintext_row(p, known)?;

    let hash = bundle.hash.build()?;
    let check = pa_invariance_check(p, &hash).map_err(CliError::input)?;
    let key = pushforward(p, &hash).map_err(CliError::runtime)?;
    let pa = row(
        Aspect::PrivacyAmplification,
        "distance of the hashed key to uniform / p1 of the hashed key",
        distance_to_uniform(&key),
        check.p1,
        json!({
            "m": hash.in_bits(),
            "n": hash.out_bits(),
            "seed": hash.seed(),
            "distance_before": distance_to_uniform(p),
            "q1": check.q1,
            "never_decreases": check.never_decreases,
            "spike_to_spike": check.spike_to_spike,
        }),
    );

    let sim = &bundle.simulation;
    validate(sim)?;
    let config = &sim.config;
    let attacked = run_protocol(config, sim.attack).map_err(CliError::runtime)?;
    let honest = run_protocol(config, AttackStrategy::None).map_err(CliError::runtime)?;
    let rate = row(
        Aspect::KeyGenerationRate,
        "rate from the error rate / exponent of per-bit p1",
        attacked.perceived_rate,
        attacked.real_rate_exponent,
        json!({
            "attack": sim.attack.name(),
            "qber": attacked.qber,
            "eve_known_fraction": attacked.eve_known_fraction,
            "sifted_bits": attacked.counts.sifted_bits,
        }),
    );

    let guess = guessing_probability(p);
    let determination = row(
        Aspect::DeterminationOfSecurity,
        "Shannon entropy / min-entropy, in bits",
        shannon_entropy(p),
        0.0 - guess.p1.log2(),
        json!({ "n_bits": n, "p1": guess.p1 }),
    );

    let eta_star = match config.protocol {
        Protocol::B92 => Some(breach_threshold(config.overlap_s, config).map_err(CliError::input)?),
        Protocol::BB84 => None,
    };
    let eta = config.transmittance_eta;
    let loss = row(
        Aspect::TransmissionLoss,
        "Eve's information inferred from errors / fraction of sifted bits Eve knows",
        binary_entropy(attacked.qber),
        attacked.eve_known_fraction,
        json!({
            "protocol": config.protocol,
            "transmittance_eta": eta,
            "breach_threshold": eta_star,
            "detection_rate": attacked.detection_rate,
            "honest_detection_rate": honest.detection_rate,
            "rate_covered_3sigma": rate_covered(&honest, &attacked, 3.0),
        }),
    );

    let efficiency = config.detector_efficiency;
    let detector = row(
        Aspect::DetectorModeling,
        "transmittance with detector loss folded in / line transmittance",
        eta * efficiency,
        eta,
        json!({
            "detector_efficiency": efficiency,
            "breach_threshold": eta_star,
            "breached": eta_star.map(|t| eta < t),
            "breached_if_folded": eta_star.map(|t| eta * efficiency < t),
        }),
    );

    let rows = vec![raw, kpa, pa, rate, determination, loss, detector];
    debug_assert!(rows.iter().map(|r| r.aspect).eq(Aspect::ALL));
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: "report",
        rows,
    })
}

pub fn render(report: &Report) -> Result<Rendered> {
    let mut table = Table::new(&["aspect", "measure", "perceived", "real", "instance_params"]);
    for r in &report.rows {
        table.push(vec![
            r.label.to_owned(),
            r.measure.to_owned(),
            cell(&r.perceived),
            cell(&r.real),
            Value::Object(r.instance_params.clone()).to_string(),
        ]);
    }
    Ok(Rendered {
        json: serde_json::to_value(report).map_err(|e| CliError::Runtime(e.to_string()))?,
        table,
    })
}
