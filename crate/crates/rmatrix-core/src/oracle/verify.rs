use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{oracle_enumerate, run_oracle, OracleError, OracleReport};
use crate::classifier::{ClassificationReport, Enumeration, Stratum};
use crate::lattice_theory::{intermediate_lattices, LatticeLabel};
use crate::pairings::PairingMatrix;
use crate::root_systems::{LieType, RootSystemData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// R_0 equations against the perfectness verdict.
    Equations,
    /// Solutions found by the oracle against the classifier's solutions in a stratum.
    Enumeration,
    /// Invertibility of the monodromy matrix against the factorizable verdict.
    Monodromy,
    /// Invertible monodromy against the scaled symmetrisation of `f`.
    Symmetrisation,
    /// Brute-force transparent characters against the classifier's characters.
    TransparentBruteForce,
    /// Brute-force transparent characters against the closed form from `Rad_0`.
    TransparentClosedForm,
    /// The oracle failed for a reason other than the size bound.
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub lie_type: LieType,
    pub ell: u64,
    pub lattice: LatticeLabel,
    pub lattice1: LatticeLabel,
    pub lattice2: LatticeLabel,
    /// `None` for stratum-level checks.
    pub g: Option<PairingMatrix>,
    pub check: Check,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub lie_type: LieType,
    pub ell: u64,
    pub max_group_order: u64,
    pub candidates: usize,
    pub checked: usize,
    /// Candidates whose `|Λ/Λ'|` exceeds the bound.
    pub skipped: usize,
    pub strata_checked: usize,
    pub strata_skipped: usize,
    pub monodromy_checked: usize,
    pub disagreements: Vec<Disagreement>,
}

impl Verification {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn disagreement(r: &ClassificationReport, check: Check, detail: String) -> Disagreement {
    let c = &r.candidate;
    Disagreement {
        lie_type: c.lie_type,
        ell: c.ell,
        lattice: c.lattice.label.clone(),
        lattice1: c.lattice1.label.clone(),
        lattice2: c.lattice2.label.clone(),
        g: Some(c.g.clone()),
        check,
        detail,
    }
}

fn compare_candidate(r: &ClassificationReport, o: &OracleReport) -> Vec<Disagreement> {
    let mut out = Vec::new();
    if o.equations.all() != r.quasitriangular {
        out.push(disagreement(
            r,
            Check::Equations,
            format!("equations {:?}, perfect {}", o.equations, r.quasitriangular),
        ));
    }
    if let Some(m) = &o.monodromy {
        if m.invertible != r.factorizable {
            out.push(disagreement(
                r,
                Check::Monodromy,
                format!("monodromy rank {}/{}, factorizable {}", m.rank, m.size, r.factorizable),
            ));
        }
    }
    if o.monodromy_matches_sym == Some(false) {
        out.push(disagreement(
            r,
            Check::Symmetrisation,
            "monodromy differs from Sym_G(f)".into(),
        ));
    }
    if let Some(t) = &o.transparent {
        if t != &r.transparent_characters {
            out.push(disagreement(
                r,
                Check::TransparentBruteForce,
                format!(
                    "{} characters by brute force, {} from the classifier",
                    t.len(),
                    r.transparent_characters.len()
                ),
            ));
        }
        if o.transparent_closed_form.as_ref() != Some(t) {
            out.push(disagreement(
                r,
                Check::TransparentClosedForm,
                format!(
                    "{} characters by brute force, {} from Rad_0",
                    t.len(),
                    o.transparent_closed_form.as_ref().map_or(0, Vec::len)
                ),
            ));
        }
    }
    out
}

fn stratum_disagreement(en: &Enumeration, s: &Stratum, detail: String) -> Disagreement {
    Disagreement {
        lie_type: en.lie_type,
        ell: en.ell,
        lattice: s.lattice.clone(),
        lattice1: s.lattice1.clone(),
        lattice2: s.lattice2.clone(),
        g: None,
        check: Check::Enumeration,
        detail,
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Stratum-level check: the oracle's solutions, assembled from the per-candidate verdicts, against the
/// classifier's count, and the candidate list against the number of pairings `H1 x H2 -> Q/Z`.
///
/// `None` when a candidate of the stratum exceeded the bound.
fn compare_stratum(
    rs: &RootSystemData,
    en: &Enumeration,
    s: &Stratum,
    solves: &[Option<Option<bool>>],
    max_order: u64,
) -> Option<Vec<Disagreement>> {
    if !s.admissible {
        let lattices = intermediate_lattices(rs);
        let find = |label: &LatticeLabel| lattices.iter().find(|l| &l.label == label).expect("stratum lattice");
        let res = oracle_enumerate(
            rs,
            en.ell,
            find(&s.lattice),
            find(&s.lattice1),
            find(&s.lattice2),
            max_order,
        );
        return Some(match res {
            Err(OracleError::Inadmissible) if s.quasitriangular == 0 => Vec::new(),
            Err(OracleError::Inadmissible) => vec![stratum_disagreement(
                en,
                s,
                format!(
                    "oracle finds the stratum inadmissible, classifier {} solutions",
                    s.quasitriangular
                ),
            )],
            Ok(found) => vec![stratum_disagreement(
                en,
                s,
                format!(
                    "oracle finds {} solutions in a stratum the classifier rejects",
                    found.len()
                ),
            )],
            Err(e) => vec![stratum_disagreement(en, s, e.to_string())],
        });
    }
    let mut found = 0;
    for &i in &s.reports {
        match solves[i] {
            Some(Some(ok)) => found += usize::from(ok),
            Some(None) => {}
            None => return None,
        }
    }
    let mut out = Vec::new();
    let pairings: u64 =
        s.h1.iter()
            .flat_map(|&a| s.h2.iter().map(move |&b| gcd(a, b)))
            .product();
    if s.reports.len() as u64 != pairings {
        out.push(stratum_disagreement(
            en,
            s,
            format!("{} candidates for {pairings} pairings", s.reports.len()),
        ));
    }
    if found != s.quasitriangular {
        out.push(stratum_disagreement(
            en,
            s,
            format!("oracle finds {found} solutions, classifier {}", s.quasitriangular),
        ));
    }
    Some(out)
}

/// Runs the oracle on every candidate and stratum of `en` whose lattice passes `select`.
///
/// Candidates with `|Λ/Λ'| > max_order` are skipped and counted, as are their strata.
pub fn verify_enumeration<F>(rs: &RootSystemData, en: &Enumeration, select: F, max_order: u64) -> Verification
where
    F: Fn(&LatticeLabel) -> bool + Sync,
{
    // Per report: None if not selected, Some(None) if skipped, otherwise the disagreements, the equation
    // verdict and whether the monodromy was examined.
    let outcomes: Vec<Option<Option<(Vec<Disagreement>, Option<bool>, bool)>>> = en
        .reports
        .par_iter()
        .map(|r| {
            if !select(&r.candidate.lattice.label) {
                return None;
            }
            Some(match run_oracle(rs, &r.candidate, max_order, max_order) {
                Ok(o) => Some((compare_candidate(r, &o), Some(o.equations.all()), o.monodromy.is_some())),
                Err(OracleError::BoundExceeded { .. }) => None,
                Err(e) => Some((vec![disagreement(r, Check::Error, e.to_string())], None, false)),
            })
        })
        .collect();
    let solves: Vec<Option<Option<bool>>> = outcomes
        .iter()
        .map(|o| o.as_ref().and_then(|x| x.as_ref().map(|(_, s, _)| *s)))
        .collect();

    let mut v = Verification {
        lie_type: en.lie_type,
        ell: en.ell,
        max_group_order: max_order,
        candidates: 0,
        checked: 0,
        skipped: 0,
        strata_checked: 0,
        strata_skipped: 0,
        monodromy_checked: 0,
        disagreements: Vec::new(),
    };
    for o in outcomes {
        let Some(o) = o else { continue };
        v.candidates += 1;
        match o {
            Some((d, _, monodromy)) => {
                v.checked += 1;
                v.monodromy_checked += usize::from(monodromy);
                v.disagreements.extend(d);
            }
            None => v.skipped += 1,
        }
    }
    for s in en.strata.iter().filter(|s| select(&s.lattice)) {
        match compare_stratum(rs, en, s, &solves, max_order) {
            Some(d) => {
                v.strata_checked += 1;
                v.disagreements.extend(d);
            }
            None => v.strata_skipped += 1,
        }
    }
    v
}
