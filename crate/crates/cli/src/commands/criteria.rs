use qkd_audit_core::dist::{
    distance_to_uniform, eve_information, guessing_probability, shannon_entropy,
    subset_security_gap, KeyDistribution, SubsetSpec,
};
use qkd_audit_core::pa::extractable_bits;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::formats::SCHEMA_VERSION;
use crate::output::{num, Rendered, Table};

#[derive(Debug, Clone, Serialize)]
pub struct SingletonGap {
    pub position: u32,
    pub p1_subset: f64,
    pub epsilon: f64,
}

/// Every single-number criterion of one key distribution.
#[derive(Debug, Clone, Serialize)]
pub struct CriteriaReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n_bits: u32,
    pub support_size: usize,
    pub entropy: f64,
    pub eve_information: f64,
    pub variational_distance: f64,
    pub p1: f64,
    pub argmax: u32,
    pub l: f64,
    pub r: f64,
    pub singleton_gaps: Vec<SingletonGap>,
}

pub fn criteria_report(p: &KeyDistribution) -> Result<CriteriaReport> {
    let guess = guessing_probability(p);
    let bits = extractable_bits(p);
    let singleton_gaps = (0..p.n_bits())
        .map(|position| {
            subset_security_gap(p, &SubsetSpec::new(vec![position]))
                .map(|g| SingletonGap {
                    position,
                    p1_subset: g.p1_subset,
                    epsilon: g.epsilon,
                })
                .map_err(CliError::runtime)
        })
        .collect::<Result<_>>()?;
    Ok(CriteriaReport {
        schema_version: SCHEMA_VERSION,
        command: "criteria",
        n_bits: p.n_bits(),
        support_size: p.support_size(),
        entropy: shannon_entropy(p),
        eve_information: eve_information(p),
        variational_distance: distance_to_uniform(p),
        p1: guess.p1,
        argmax: guess.argmax,
        l: bits.l,
        r: bits.r,
        singleton_gaps,
    })
}

pub fn render(report: &CriteriaReport) -> Result<Rendered> {
    let mut table = Table::new(&["quantity", "value"]);
    let mut row = |name: String, value: String| table.push(vec![name, value]);
    row("n_bits".into(), report.n_bits.to_string());
    row("support_size".into(), report.support_size.to_string());
    row("entropy".into(), num(report.entropy));
    row("eve_information".into(), num(report.eve_information));
    row("variational_distance".into(), num(report.variational_distance));
    row("p1".into(), num(report.p1));
    row("argmax".into(), report.argmax.to_string());
    row("l".into(), num(report.l));
    row("r".into(), num(report.r));
    for g in &report.singleton_gaps {
        row(format!("subset_gap[{}]", g.position), num(g.epsilon));
    }
    Ok(Rendered {
        json: serde_json::to_value(report).map_err(|e| CliError::Runtime(e.to_string()))?,
        table,
    })
}
