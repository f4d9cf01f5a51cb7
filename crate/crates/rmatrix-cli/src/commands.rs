use anyhow::Result;
use rmatrix_core::classifier::{
    compare_enumeration, enumerate_all, AlternativeReading, ClassificationReport, Enumeration, RowComparison,
};
use rmatrix_core::lattice_theory::LatticeLabel;
use rmatrix_core::oracle::{group_order, run_oracle, verify_enumeration, OracleError, OracleReport, Verification};
use rmatrix_core::pairings::PairingMatrix;
use rmatrix_core::root_systems::{build_root_system, LieType, RootSystemData};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
    BoundExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 2,
            Status::BoundExceeded => 3,
        }
    }
}

fn selected(selection: &Option<LatticeLabel>, label: &LatticeLabel) -> bool {
    selection.as_ref().is_none_or(|s| s == label)
}

/// Enumerations for every `(type, ℓ)` of the config, in config order.
fn enumerations(cfg: &RunConfig) -> Result<Vec<(RootSystemData, Option<LatticeLabel>, Enumeration)>> {
    let systems: Vec<RootSystemData> = cfg.types.iter().map(|&t| build_root_system(t)).collect();
    let selections = cfg.selections(&systems)?;
    let mut out = Vec::new();
    for (rs, sel) in systems.iter().zip(&selections) {
        for &ell in &cfg.ells {
            out.push((rs.clone(), sel.clone(), enumerate_all(rs, ell)?));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OracleEntry {
    Checked { report: OracleReport },
    Skipped { group_order: String },
    Error { detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRun {
    pub lie_type: LieType,
    pub ell: u64,
    pub ribbon_ok: bool,
    pub degenerate: bool,
    pub quasitriangular: usize,
    pub factorizable: usize,
    pub reports: Vec<ClassificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleEntry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub schema_version: u32,
    pub command: String,
    pub runs: Vec<ClassifyRun>,
}

pub fn classify(cfg: &RunConfig) -> Result<(ClassifyOutput, Status)> {
    let mut runs = Vec::new();
    let mut exceeded = false;
    for (rs, sel, en) in enumerations(cfg)? {
        let reports: Vec<ClassificationReport> = en
            .reports
            .into_iter()
            .filter(|r| selected(&sel, &r.candidate.lattice.label))
            .collect();
        let oracle = cfg.oracle.then(|| {
            reports
                .iter()
                .map(
                    |r| match run_oracle(&rs, &r.candidate, cfg.max_group_order, cfg.max_group_order) {
                        Ok(report) => OracleEntry::Checked { report },
                        Err(OracleError::BoundExceeded { order, .. }) => {
                            exceeded = true;
                            OracleEntry::Skipped {
                                group_order: order.to_string(),
                            }
                        }
                        Err(e) => OracleEntry::Error { detail: e.to_string() },
                    },
                )
                .collect()
        });
        runs.push(ClassifyRun {
            lie_type: en.lie_type,
            ell: en.ell,
            ribbon_ok: en.ribbon_ok,
            degenerate: en.degenerate,
            quasitriangular: reports.iter().filter(|r| r.quasitriangular).count(),
            factorizable: reports.iter().filter(|r| r.factorizable).count(),
            reports,
            oracle,
        });
    }
    let status = if exceeded && cfg.strict {
        Status::BoundExceeded
    } else {
        Status::Ok
    };
    Ok((
        ClassifyOutput {
            schema_version: SCHEMA_VERSION,
            command: "classify".into(),
            runs,
        },
        status,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub lie_type: LieType,
    pub ell: u64,
    pub lattice: LatticeLabel,
    pub lattice1: LatticeLabel,
    pub lattice2: LatticeLabel,
    pub h1: Vec<u64>,
    pub h2: Vec<u64>,
    /// Name of the table row covering this stratum.
    pub row: Option<String>,
    pub predicted_count: Option<u64>,
    pub computed_count: usize,
    pub solutions: Vec<PairingMatrix>,
    /// Transparent group types of the solutions, deduplicated.
    pub transparent: Vec<String>,
    pub matches: bool,
    pub diff: Vec<String>,
    pub alternative: Option<AlternativeReading>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSummary {
    pub rows: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableOutput {
    pub schema_version: u32,
    pub command: String,
    pub rows: Vec<TableRow>,
    pub summary: TableSummary,
}

fn diff_lines(c: &RowComparison) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(n) = c.predicted_count {
        if !c.count_match {
            out.push(format!("count {} vs table {n}", c.computed_count));
        }
    }
    if c.transparent_match == Some(false) {
        out.push("transparent group differs".into());
    }
    if c.a_g_match == Some(false) {
        out.push("a_g values differ".into());
    }
    out.extend(c.notes.iter().cloned());
    out
}

pub fn table(cfg: &RunConfig) -> Result<(TableOutput, Status)> {
    let mut rows = Vec::new();
    for (rs, sel, en) in enumerations(cfg)? {
        let cmp = compare_enumeration(&rs, &en);
        for (s, c) in en.strata.iter().zip(cmp.rows) {
            if !selected(&sel, &s.lattice) {
                continue;
            }
            let solutions: Vec<&ClassificationReport> = en.stratum_reports(s).filter(|r| r.quasitriangular).collect();
            let mut transparent: Vec<String> = solutions
                .iter()
                .filter_map(|r| r.transparent_group.as_ref().map(|t| t.type_label()))
                .collect();
            transparent.sort();
            transparent.dedup();
            rows.push(TableRow {
                lie_type: en.lie_type,
                ell: en.ell,
                lattice: s.lattice.clone(),
                lattice1: s.lattice1.clone(),
                lattice2: s.lattice2.clone(),
                h1: s.h1.clone(),
                h2: s.h2.clone(),
                matches: c.matches(),
                diff: diff_lines(&c),
                row: c.row,
                predicted_count: c.predicted_count,
                computed_count: c.computed_count,
                solutions: solutions.iter().map(|r| r.candidate.g.clone()).collect(),
                transparent,
                alternative: c.alternative,
            });
        }
    }
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    let status = if mismatches > 0 { Status::Mismatch } else { Status::Ok };
    Ok((
        TableOutput {
            schema_version: SCHEMA_VERSION,
            command: "table".into(),
            summary: TableSummary {
                rows: rows.len(),
                mismatches,
            },
            rows,
        },
        status,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub candidates: usize,
    pub checked: usize,
    pub skipped: usize,
    pub strata_checked: usize,
    pub strata_skipped: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub schema_version: u32,
    pub command: String,
    pub runs: Vec<Verification>,
    pub summary: VerifySummary,
}

pub fn verify(cfg: &RunConfig) -> Result<(VerifyOutput, Status)> {
    let mut runs = Vec::new();
    for (rs, sel, en) in enumerations(cfg)? {
        runs.push(verify_enumeration(&rs, &en, |l| selected(&sel, l), cfg.max_group_order));
    }
    let summary = VerifySummary {
        candidates: runs.iter().map(|v| v.candidates).sum(),
        checked: runs.iter().map(|v| v.checked).sum(),
        skipped: runs.iter().map(|v| v.skipped).sum(),
        strata_checked: runs.iter().map(|v| v.strata_checked).sum(),
        strata_skipped: runs.iter().map(|v| v.strata_skipped).sum(),
        disagreements: runs.iter().map(|v| v.disagreements.len()).sum(),
    };
    let status = if summary.disagreements > 0 {
        Status::Mismatch
    } else if cfg.strict && (summary.skipped > 0 || summary.strata_skipped > 0) {
        Status::BoundExceeded
    } else {
        Status::Ok
    };
    Ok((
        VerifyOutput {
            schema_version: SCHEMA_VERSION,
            command: "verify".into(),
            runs,
            summary,
        },
        status,
    ))
}

/// `|Λ/Λ'|` as a string, for display.
pub fn group_order_label(r: &ClassificationReport) -> String {
    group_order(&r.candidate).map_or("?".into(), |n| n.to_string())
}
