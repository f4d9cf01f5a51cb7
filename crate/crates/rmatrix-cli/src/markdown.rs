use rmatrix_core::exact::format_group_type;
use rmatrix_core::pairings::PairingMatrix;
use std::fmt::Write;

use crate::commands::{group_order_label, ClassifyOutput, OracleEntry, TableOutput, VerifyOutput};

/// `[a b; c d]` with entries in ℚ/ℤ; `1` for the trivial pairing.
pub fn pairing(g: &PairingMatrix) -> String {
    if g.exponents.iter().all(Vec::is_empty) || g.is_zero() {
        return "1".into();
    }
    let rows: Vec<String> = g
        .exponents
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn classify(out: &ClassifyOutput) -> String {
    let mut s = String::new();
    for run in &out.runs {
        let _ = writeln!(
            s,
            "## {} ℓ = {}\n\n{} candidates, {} quasitriangular, {} factorizable, ribbon {}\n",
            run.lie_type,
            run.ell,
            run.reports.len(),
            run.quasitriangular,
            run.factorizable,
            yes(run.ribbon_ok)
        );
        let with_oracle = run.oracle.is_some();
        s.push_str("| Λ | Λ1 | Λ2 | g | \\|Λ/Λ'\\| | perfect | factorizable | Rad₀ | T |");
        s.push_str(if with_oracle { " oracle |\n" } else { "\n" });
        s.push_str("|---|---|---|---|---|---|---|---|---|");
        s.push_str(if with_oracle { "---|\n" } else { "\n" });
        for (i, r) in run.reports.iter().enumerate() {
            let c = &r.candidate;
            let _ = write!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                c.lattice.label,
                c.lattice1.label,
                c.lattice2.label,
                pairing(&c.g),
                group_order_label(r),
                yes(r.quasitriangular),
                yes(r.factorizable),
                r.rad0.as_ref().map_or("-".into(), |g| g.type_label()),
                r.transparent_group.as_ref().map_or("-".into(), |g| g.type_label()),
            );
            if let Some(entries) = &run.oracle {
                let o = match &entries[i] {
                    OracleEntry::Checked { report } => {
                        let eq = if report.equations.all() { "solves" } else { "fails" };
                        match &report.monodromy {
                            Some(m) => format!("{eq}, m rank {}/{}", m.rank, m.size),
                            None => eq.into(),
                        }
                    }
                    OracleEntry::Skipped { group_order } => format!("skipped ({group_order})"),
                    OracleEntry::Error { detail } => cell(detail),
                };
                let _ = write!(s, " {o} |");
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

pub fn table(out: &TableOutput) -> String {
    let mut s = String::new();
    s.push_str("| 𝔤 | ℓ | # | H_i ≅ | H_i | g | T | row | diff |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for r in &out.rows {
        let count = match r.predicted_count {
            Some(n) => format!("{} ({n})", r.computed_count),
            None => format!("{} (-)", r.computed_count),
        };
        let groups = if r.h1 == r.h2 {
            format_group_type(&r.h1)
        } else {
            format!("{}, {}", format_group_type(&r.h1), format_group_type(&r.h2))
        };
        let lattices = if r.lattice1 == r.lattice2 && r.lattice1 == r.lattice {
            r.lattice.to_string()
        } else {
            format!("Λ = {}, Λ1 = {}, Λ2 = {}", r.lattice, r.lattice1, r.lattice2)
        };
        let solutions: Vec<String> = r.solutions.iter().map(pairing).collect();
        let diff = if r.matches {
            "ok".to_string()
        } else {
            cell(&r.diff.join("; "))
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.lie_type,
            r.ell,
            count,
            groups,
            lattices,
            if solutions.is_empty() {
                "-".into()
            } else {
                solutions.join(", ")
            },
            if r.transparent.is_empty() {
                "-".into()
            } else {
                r.transparent.join(", ")
            },
            cell(r.row.as_deref().unwrap_or("-")),
            diff
        );
    }
    let _ = writeln!(s, "\n{} rows, {} mismatches", out.summary.rows, out.summary.mismatches);
    s
}

pub fn verify(out: &VerifyOutput) -> String {
    let mut s = String::new();
    s.push_str("| 𝔤 | ℓ | candidates | checked | skipped | strata | monodromy | disagreements |\n");
    s.push_str("|---|---|---|---|---|---|---|---|\n");
    for v in &out.runs {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {}/{} | {} | {} |",
            v.lie_type,
            v.ell,
            v.candidates,
            v.checked,
            v.skipped,
            v.strata_checked,
            v.strata_checked + v.strata_skipped,
            v.monodromy_checked,
            v.disagreements.len()
        );
    }
    let d: Vec<_> = out.runs.iter().flat_map(|v| &v.disagreements).collect();
    if !d.is_empty() {
        s.push_str("\n| 𝔤 | ℓ | Λ | Λ1 | Λ2 | g | check | detail |\n|---|---|---|---|---|---|---|---|\n");
        for x in d {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {:?} | {} |",
                x.lie_type,
                x.ell,
                x.lattice,
                x.lattice1,
                x.lattice2,
                x.g.as_ref().map_or("-".into(), pairing),
                x.check,
                cell(&x.detail)
            );
        }
    }
    let sum = &out.summary;
    let _ = writeln!(
        s,
        "\n{} candidates, {} checked, {} skipped above |Λ/Λ'| = {}, {} disagreements",
        sum.candidates,
        sum.checked,
        sum.skipped,
        out.runs.first().map_or(0, |v| v.max_group_order),
        sum.disagreements
    );
    s
}
