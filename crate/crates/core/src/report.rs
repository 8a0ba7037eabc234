//! Serialized forms of a [`SpectralReport`]: JSON report, eigenbasis sidecar,
//! CSV plot data and the plain-text table.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::operators::Provenance;
use crate::spectral::{CorollaryMultiplicities, EigItem, SpectralReport, Tolerances, VerdictMap};
use crate::subspace::Subspace;

#[derive(Debug, Serialize)]
pub struct SpectrumEntry {
    pub re: f64,
    pub im: f64,
    pub mult: usize,
    pub origin: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_mu: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DiscriminantEntry {
    pub mu: f64,
    pub mult: usize,
}

#[derive(Debug, Serialize)]
pub struct EigenbasisEntry<'a> {
    pub re: f64,
    pub im: f64,
    pub origin: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_mu: Option<f64>,
    pub basis: &'a Subspace,
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    /// Powers used for the generalized kernels of `I ∓ T̃`.
    pub generalized_kernel_powers: [u32; 2],
    /// Upper bound on the power for a general generalized kernel.
    pub generalized_kernel_power_cap: &'static str,
    #[serde(rename = "dim_K1")]
    pub dim_k1: usize,
    #[serde(rename = "dim_K2")]
    pub dim_k2: usize,
}

/// Top-level JSON report. Field order is fixed by declaration order.
#[derive(Debug, Serialize)]
pub struct ReportJson<'a> {
    pub spectrum: Vec<SpectrumEntry>,
    pub m_plus: usize,
    pub m_minus: usize,
    #[serde(rename = "M_plus", skip_serializing_if = "Option::is_none")]
    pub big_m_plus: Option<usize>,
    #[serde(rename = "M_minus", skip_serializing_if = "Option::is_none")]
    pub big_m_minus: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<&'a CorollaryMultiplicities>,
    #[serde(rename = "dim_L")]
    pub dim_l: usize,
    #[serde(rename = "dim_L_perp")]
    pub dim_l_perp: usize,
    pub birth_vacuous: bool,
    #[serde(rename = "spectrum_T")]
    pub spectrum_t: Vec<DiscriminantEntry>,
    pub verdicts: &'a VerdictMap,
    pub tolerances: &'a Tolerances,
    pub provenance: &'a Provenance,
    pub metadata: Metadata,
    pub warnings: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenbases: Option<Vec<EigenbasisEntry<'a>>>,
}

fn entry(item: &EigItem) -> SpectrumEntry {
    SpectrumEntry {
        re: item.value.re,
        im: item.value.im,
        mult: item.multiplicity,
        origin: item.origin.as_str(),
        source_mu: item.source_mu,
    }
}

pub fn eigenbases(report: &SpectralReport) -> Vec<EigenbasisEntry<'_>> {
    report
        .items
        .iter()
        .map(|item| EigenbasisEntry {
            re: item.value.re,
            im: item.value.im,
            origin: item.origin.as_str(),
            source_mu: item.source_mu,
            basis: &item.eigenbasis,
        })
        .collect()
}

pub fn report_json(
    report: &SpectralReport,
    n: usize,
    m: usize,
    embed_eigenbases: bool,
) -> ReportJson<'_> {
    ReportJson {
        spectrum: report.items.iter().map(entry).collect(),
        m_plus: report.m_plus,
        m_minus: report.m_minus,
        big_m_plus: report.corollary.as_ref().map(|c| c.big_m_plus),
        big_m_minus: report.corollary.as_ref().map(|c| c.big_m_minus),
        corollary: report.corollary.as_ref(),
        dim_l: report.dim_l,
        dim_l_perp: report.dim_l_perp,
        birth_vacuous: report.birth_vacuous,
        spectrum_t: report
            .spec_t
            .iter()
            .map(|&(mu, mult)| DiscriminantEntry { mu, mult })
            .collect(),
        verdicts: &report.verdicts,
        tolerances: &report.tolerances,
        provenance: &report.provenance,
        metadata: Metadata {
            generalized_kernel_powers: [2, 3],
            generalized_kernel_power_cap: "ambient dimension",
            dim_k1: n,
            dim_k2: m,
        },
        warnings: &report.warnings,
        eigenbases: embed_eigenbases.then(|| eigenbases(report)),
    }
}

/// Pretty-printed JSON; floats use the shortest representation that reads
/// back to the same value.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Shortest round-trip representation, as in the JSON report.
fn float(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

/// `re,im,mult,origin` rows, one per report item.
pub fn spectrum_csv(report: &SpectralReport) -> String {
    let mut out = String::from("re,im,mult,origin\n");
    for item in &report.items {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            float(item.value.re),
            float(item.value.im),
            item.multiplicity,
            item.origin.as_str()
        );
    }
    out
}

/// One row per distinct eigenvalue: value, total multiplicity, origins and
/// source `μ`.
pub fn spectrum_table(report: &SpectralReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<34} {:>5}  {:<46} source mu",
        "lambda", "mult", "origin"
    );
    for (value, mult, items) in report.grouped(report.tolerances.tol_match) {
        let origins: Vec<String> = items
            .iter()
            .map(|i| format!("{}({})", i.origin.as_str(), i.multiplicity))
            .collect();
        let mu = items
            .iter()
            .find_map(|i| i.source_mu)
            .map(|m| format!("{m:.12}"))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<34} {:>5}  {:<46} {}",
            format!("{:+.12} {:+.12}i", value.re + 0.0, value.im + 0.0),
            mult,
            origins.join(" + "),
            mu
        );
    }
    out
}

/// `PASS`/`FAIL` line per verdict.
pub fn verdict_lines(verdicts: &VerdictMap) -> String {
    let mut out = String::new();
    for (name, v) in verdicts {
        let _ = write!(
            out,
            "{} {:<40} residual={:.3e} threshold={:.3e}",
            if v.pass { "PASS" } else { "FAIL" },
            name,
            v.residual,
            v.threshold
        );
        if let Some(note) = &v.note {
            let _ = write!(out, "  [{note}]");
        }
        out.push('\n');
    }
    out
}
