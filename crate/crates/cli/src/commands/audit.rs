use qkd_audit_core::extremal::{
    guess_information_ratio, max_guess_given_information, ExtremalResult,
};
use qkd_audit_core::quantum::{cq_distance, interpretation_gap_report, InterpretationGapReport};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::{Claim, Criterion, SCHEMA_VERSION};
use crate::output::{num, Rendered, Table};

/// Guessing probability and the key length it corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuessColumn {
    pub p1: f64,
    pub l: f64,
}

impl GuessColumn {
    fn new(p1: f64) -> Self {
        Self {
            p1,
            l: 0.0 - p1.log2(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimSummary {
    pub criterion: Criterion,
    pub value: f64,
    pub n_bits: u32,
}

/// A claim read as "the key is uniform", against the worst key the claim allows.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub claim: ClaimSummary,
    pub perceived: GuessColumn,
    pub real: GuessColumn,
    /// Trace criterion: distance computed from the supplied ensemble.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_distance: Option<f64>,
    /// Trace criterion: whether the ensemble satisfies the claim.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim_holds: Option<bool>,
    /// Info criterion: `p1 · n / I` at the extremal point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub information_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<InterpretationGapReport>,
}

fn extremal_info(claim: &Claim) -> Result<(ExtremalResult, f64)> {
    let r = max_guess_given_information(claim.n_bits, claim.value).map_err(CliError::input)?;
    let ratio = guess_information_ratio(claim.n_bits, &r).unwrap_or(f64::NAN);
    Ok((r, ratio))
}

pub fn audit_report(claim: &Claim) -> Result<AuditReport> {
    let n = claim.n_bits;
    let uniform_p1 = (-f64::from(n)).exp2();
    let mut report = AuditReport {
        schema_version: SCHEMA_VERSION,
        command: "audit",
        claim: ClaimSummary {
            criterion: claim.criterion,
            value: claim.value,
            n_bits: n,
        },
        perceived: GuessColumn::new(uniform_p1),
        real: GuessColumn::new(uniform_p1),
        measured_distance: None,
        claim_holds: None,
        information_ratio: None,
        gap: None,
    };
    match claim.criterion {
        Criterion::Info => {
            let (r, ratio) = extremal_info(claim)?;
            report.real = GuessColumn::new(r.p1_star);
            report.information_ratio = ratio.is_finite().then_some(ratio);
        }
        Criterion::Vd | Criterion::Trace => {
            if claim.criterion == Criterion::Trace {
                let ensemble = claim.ensemble.as_ref().ok_or_else(|| {
                    CliError::Input("the trace criterion needs an `ensemble`".into())
                })?;
                let keys = ensemble.num_keys();
                if n >= usize::BITS || keys != 1usize << n {
                    return Err(CliError::Input(format!(
                        "ensemble has {keys} keys, expected 2^{n}"
                    )));
                }
                let d = cq_distance(ensemble).map_err(CliError::runtime)?;
                report.measured_distance = Some(d);
                report.claim_holds = Some(d <= claim.value);
            } else if claim.ensemble.is_some() {
                return Err(CliError::Input(
                    "`ensemble` is only used by the trace criterion".into(),
                ));
            }
            let gap = interpretation_gap_report(claim.value, n).map_err(CliError::input)?;
            report.real = GuessColumn::new(gap.actual_p1);
            report.gap = Some(gap);
        }
    }
    Ok(report)
}

pub fn render(report: &AuditReport) -> Result<Rendered> {
    let mut table = Table::new(&["quantity", "perceived", "real"]);
    table.push(vec![
        "p1".into(),
        num(report.perceived.p1),
        num(report.real.p1),
    ]);
    table.push(vec!["l".into(), num(report.perceived.l), num(report.real.l)]);
    if let Some(gap) = &report.gap {
        table.push(vec![
            "p1_failure_reading".into(),
            num(gap.perceived_p1_bound),
            num(gap.actual_p1),
        ]);
        table.push(vec![
            "max_subset_gap".into(),
            num(0.0),
            num(gap.max_subset_gap),
        ]);
    }
    if let Some(d) = report.measured_distance {
        table.push(vec!["trace_distance".into(), num(report.claim.value), num(d)]);
    }
    Ok(Rendered {
        json: serde_json::to_value(report).map_err(|e| CliError::Runtime(e.to_string()))?,
        table,
    })
}
