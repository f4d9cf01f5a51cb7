mod common;

use rayon::prelude::*;
use rmatrix_core::classifier::{
    compare_enumeration, enumerate_all, ClassificationReport, Enumeration, TableComparison,
};
use rmatrix_core::lattice_theory::{intermediate_lattices, lusztig_kernel_match, LatticeLabel};
use rmatrix_core::oracle::{run_oracle, OracleError, OracleReport};
use rmatrix_core::root_systems::{build_root_system, ribbon_condition_holds, types_up_to_rank, Family, RootSystemData};
use std::time::{Duration, Instant};

const SWEEP_TYPES: [&str; 15] = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2",
];
const SWEEP_ELLS: std::ops::RangeInclusive<u64> = 3..=12;
const RUNTIME_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_MAX_ORDER: u64 = 64;
const MONODROMY_MAX_ORDER: u64 = 36;
const RIBBON_ELLS: std::ops::RangeInclusive<u64> = 2..=24;
const MAX_LISTED: usize = 8;

struct Point {
    rs: RootSystemData,
    en: Enumeration,
    table: TableComparison,
}

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String, details: Vec<String>) -> Self {
        Outcome { pass, summary, details }
    }
}

fn stratum_name(p: &Point, l: &LatticeLabel, l1: &LatticeLabel, l2: &LatticeLabel) -> String {
    format!("{} ℓ={} Λ={} Λ1={} Λ2={}", p.en.lie_type, p.en.ell, l, l1, l2)
}

fn report_name(p: &Point, r: &ClassificationReport) -> String {
    let c = &r.candidate;
    let rows: Vec<String> =
        c.g.exponents
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
    format!(
        "{} g=[{}]",
        stratum_name(p, &c.lattice.label, &c.lattice1.label, &c.lattice2.label),
        rows.join("; ")
    )
}

fn criterion_1(points: &[Point], elapsed: Duration) -> Outcome {
    let mut compared = 0;
    let mut bad = Vec::new();
    for p in points {
        for row in &p.table.rows {
            compared += 1;
            let label = stratum_name(p, &row.lattice, &row.lattice1, &row.lattice2);
            match row.predicted_count {
                None => bad.push(format!("{label}: no table row, computed {}", row.computed_count)),
                Some(n) if !row.count_match => bad.push(format!(
                    "{label}: computed {} table {n} ({})",
                    row.computed_count,
                    row.row.as_deref().unwrap_or("-")
                )),
                _ => {}
            }
        }
    }
    let in_time = elapsed <= RUNTIME_LIMIT;
    Outcome::new(
        bad.is_empty() && in_time,
        format!(
            "{} strata, {} count mismatches, enumeration {:.1}s (limit {}s)",
            compared,
            bad.len(),
            elapsed.as_secs_f64(),
            RUNTIME_LIMIT.as_secs()
        ),
        bad,
    )
}

fn criterion_2(points: &[Point]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut alt_fixes = 0;
    for p in points {
        for row in &p.table.rows {
            let Some(ok) = row.transparent_match else {
                continue;
            };
            checked += 1;
            if !ok {
                let rescued = row.alternative.as_ref().and_then(|a| a.transparent_match) == Some(true);
                alt_fixes += usize::from(rescued);
                let notes: Vec<&str> = row
                    .notes
                    .iter()
                    .map(String::as_str)
                    .filter(|n| n.contains("transparent"))
                    .collect();
                bad.push(format!(
                    "{} [{}]{}: {}",
                    stratum_name(p, &row.lattice, &row.lattice1, &row.lattice2),
                    row.row.as_deref().unwrap_or("-"),
                    if rescued { " (alternative row matches)" } else { "" },
                    notes.first().copied().unwrap_or("mismatch")
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{checked} strata with a predicted T, {} mismatches ({alt_fixes} matched by the alternative row)",
            bad.len()
        ),
        bad,
    )
}

fn listed_factorizable(p: &Point, l: &LatticeLabel, l1: &LatticeLabel, l2: &LatticeLabel) -> bool {
    let t = p.en.lie_type;
    let ell = p.en.ell;
    let all_root = [l, l1, l2].iter().all(|x| **x == LatticeLabel::Root);
    let all_weight = [l, l1, l2].iter().all(|x| **x == LatticeLabel::Weight);
    let odd = ell % 2 == 1;
    let b_like = t.family == Family::B || (t.family == Family::A && t.rank == 1);
    let d_even = t.family == Family::D && t.rank.is_multiple_of(2);
    (odd && all_root)
        || (odd && t.family == Family::E && t.rank == 6 && all_weight)
        || (ell % 4 == 2 && b_like && all_root)
        || (odd && d_even && l1 != l2)
}

fn criterion_3(points: &[Point]) -> Outcome {
    let mut found = 0;
    let mut bad = Vec::new();
    for p in points {
        for s in &p.en.strata {
            let computed = s.factorizable > 0;
            let listed = listed_factorizable(p, &s.lattice, &s.lattice1, &s.lattice2);
            found += usize::from(computed);
            if computed != listed {
                bad.push(format!(
                    "{}: {} of {} solutions factorizable, list says {}",
                    stratum_name(p, &s.lattice, &s.lattice1, &s.lattice2),
                    s.factorizable,
                    s.quasitriangular,
                    if listed { "factorizable" } else { "not factorizable" }
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{found} strata with a factorizable solution, {} disagree with the list",
            bad.len()
        ),
        bad,
    )
}

struct OracleRun<'a> {
    point: &'a Point,
    report: &'a ClassificationReport,
    oracle: OracleReport,
}

fn run_oracles(points: &[Point]) -> (Vec<OracleRun<'_>>, usize, Vec<String>) {
    let jobs: Vec<(&Point, &ClassificationReport)> = points
        .iter()
        .flat_map(|p| p.en.reports.iter().map(move |r| (p, r)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(p, r)| {
            (
                p,
                r,
                run_oracle(&p.rs, &r.candidate, ORACLE_MAX_ORDER, MONODROMY_MAX_ORDER),
            )
        })
        .collect();
    let mut runs = Vec::new();
    let mut skipped = 0;
    let mut errors = Vec::new();
    for (point, report, res) in results {
        match res {
            Ok(oracle) => runs.push(OracleRun { point, report, oracle }),
            Err(OracleError::BoundExceeded { .. }) => skipped += 1,
            Err(e) => errors.push(format!("{}: {e}", report_name(point, report))),
        }
    }
    (runs, skipped, errors)
}

fn criterion_4(runs: &[OracleRun], skipped: usize, errors: &[String]) -> Outcome {
    let mut bad: Vec<String> = errors.to_vec();
    for r in runs {
        if r.oracle.equations.all() != r.report.quasitriangular {
            bad.push(format!(
                "{}: equations {:?}, perfect {}",
                report_name(r.point, r.report),
                r.oracle.equations,
                r.report.quasitriangular
            ));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{} candidates with |Λ/Λ'| ≤ {ORACLE_MAX_ORDER} ({skipped} above the bound), {} disagreements",
            runs.len(),
            bad.len()
        ),
        bad,
    )
}

fn criterion_5(runs: &[OracleRun]) -> Outcome {
    let mut checked = 0;
    let mut sym_checked = 0;
    let mut bad = Vec::new();
    let mut bad_spanning = 0;
    for r in runs
        .iter()
        .filter(|r| r.report.quasitriangular && r.oracle.group_order <= MONODROMY_MAX_ORDER)
    {
        let name = report_name(r.point, r.report);
        let Some(m) = &r.oracle.monodromy else {
            bad.push(format!("{name}: monodromy not computed"));
            continue;
        };
        checked += 1;
        let rad_trivial = r.report.rad0.as_ref().is_some_and(|g| g.is_trivial());
        if m.invertible != rad_trivial {
            bad_spanning += usize::from(r.report.spans_lattice);
            bad.push(format!(
                "{name}: m rank {}/{} but Rad₀ {}{}",
                m.rank,
                m.size,
                r.report.rad0.as_ref().map_or("-".into(), |g| g.type_label()),
                if r.report.spans_lattice {
                    ""
                } else {
                    " (Λ ≠ Λ1+Λ2)"
                }
            ));
        }
        if let Some(sym) = r.oracle.monodromy_matches_sym {
            sym_checked += 1;
            if !sym {
                bad.push(format!("{name}: m differs from the scaled symmetrisation"));
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{checked} solutions with |Λ/Λ'| ≤ {MONODROMY_MAX_ORDER}, {sym_checked} symmetrisation checks, {} failures ({bad_spanning} with Λ = Λ1+Λ2)",
            bad.len()
        ),
        bad,
    )
}

fn criterion_6(runs: &[OracleRun]) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in runs
        .iter()
        .filter(|r| r.report.quasitriangular && r.oracle.group_order <= MONODROMY_MAX_ORDER)
    {
        let name = report_name(r.point, r.report);
        let (Some(brute), Some(closed)) = (&r.oracle.transparent, &r.oracle.transparent_closed_form) else {
            bad.push(format!("{name}: transparent characters not computed"));
            continue;
        };
        checked += 1;
        if brute != closed {
            bad.push(format!(
                "{name}: {} brute-force characters, {} from Rad₀",
                brute.len(),
                closed.len()
            ));
        }
        if brute != &r.report.transparent_characters {
            bad.push(format!(
                "{name}: {} brute-force characters, classifier has {}",
                brute.len(),
                r.report.transparent_characters.len()
            ));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{checked} solutions with |Λ/Λ'| ≤ {MONODROMY_MAX_ORDER}, {} mismatches",
            bad.len()
        ),
        bad,
    )
}

fn criterion_7(points: &[Point]) -> Outcome {
    let mut transfers = 0;
    let mut rows = 0;
    let mut bad = Vec::new();
    for p in points {
        for r in &p.en.reports {
            if let Some(ok) = r.cross_checks.f_hat_vs_a_g {
                transfers += 1;
                if !ok {
                    bad.push(format!("{}: radical of f̂ and a_g disagree", report_name(p, r)));
                }
            }
        }
        for row in &p.table.rows {
            let Some(ok) = row.a_g_match else { continue };
            rows += 1;
            if !ok {
                let notes: Vec<&str> = row
                    .notes
                    .iter()
                    .map(String::as_str)
                    .filter(|n| n.contains("a_g"))
                    .collect();
                bad.push(format!(
                    "{} [{}]: {}",
                    stratum_name(p, &row.lattice, &row.lattice1, &row.lattice2),
                    row.row.as_deref().unwrap_or("-"),
                    notes.first().copied().unwrap_or("a_g mismatch")
                ));
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{transfers} candidates with a centralizer transfer, {rows} strata with an a_g closed form, {} failures",
            bad.len()
        ),
        bad,
    )
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for t in types_up_to_rank(4) {
        let rs = build_root_system(t);
        for ell in RIBBON_ELLS {
            checked += 1;
            match ribbon_condition_holds(&rs, ell) {
                Ok(true) => {}
                Ok(false) => bad.push(format!("{t} ℓ={ell}: (ν₀ + 2ρ, β) not divisible by ℓ")),
                Err(e) => bad.push(format!("{t} ℓ={ell}: {e}")),
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{checked} (type, ℓ) pairs, ℓ ∈ {RIBBON_ELLS:?}, {} failures", bad.len()),
        bad,
    )
}

fn criterion_9(points: &[Point]) -> Outcome {
    let mut checked = 0;
    let mut equal = 0;
    let mut bad = Vec::new();
    for p in points {
        let ell = p.en.ell;
        for l in intermediate_lattices(&p.rs) {
            checked += 1;
            let name = format!("{} ℓ={ell} Λ={}", p.en.lie_type, l.label);
            let c = match lusztig_kernel_match(&p.rs, &l, ell) {
                Ok(c) => c,
                Err(e) => {
                    bad.push(format!("{name}: {e}"));
                    continue;
                }
            };
            equal += usize::from(c.matches());
            if !c.consistent() {
                bad.push(format!(
                    "{name}: lattices equal {} but divisibility condition {}",
                    c.lattices_equal, c.divisibility_condition
                ));
            }
            if ell % 2 == 1 && c.matches() {
                bad.push(format!("{name}: kernels agree at odd ℓ"));
            }
            if l.label == LatticeLabel::Weight {
                let expected = p.rs.d.iter().all(|&d| ell % (2 * d as u64) == 0);
                if c.matches() != expected {
                    bad.push(format!(
                        "{name}: kernels agree {} but 2dᵢ | ℓ is {expected}",
                        c.matches()
                    ));
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{checked} (type, ℓ, Λ) triples, {equal} with equal kernels, {} failures",
            bad.len()
        ),
        bad,
    )
}

fn criterion_10() -> Outcome {
    let mut bad = Vec::new();
    for (name, suite) in common::SUITES {
        if let Err(e) = suite() {
            bad.push(format!("{name}: {e}"));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{} suites × {} cases, {} failed",
            common::SUITES.len(),
            common::CASES,
            bad.len()
        ),
        bad,
    )
}

fn print(n: usize, title: &str, o: &Outcome, verbose: bool) {
    let limit = if verbose { usize::MAX } else { MAX_LISTED };
    println!(
        "criterion {n:>2} {}: {title}: {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.summary
    );
    for d in o.details.iter().take(limit) {
        println!("      {d}");
    }
    if o.details.len() > limit {
        println!("      ... {} more", o.details.len() - limit);
    }
}

fn main() {
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let grid: Vec<(&str, u64)> = SWEEP_TYPES
        .iter()
        .flat_map(|&t| SWEEP_ELLS.map(move |ell| (t, ell)))
        .collect();
    let start = Instant::now();
    let points: Vec<Point> = grid
        .par_iter()
        .map(|&(t, ell)| {
            let rs = build_root_system(t.parse().expect("sweep type"));
            let en = enumerate_all(&rs, ell).unwrap_or_else(|e| panic!("{t} ℓ={ell}: {e}"));
            let table = compare_enumeration(&rs, &en);
            Point { rs, en, table }
        })
        .collect();
    let elapsed = start.elapsed();

    let mut outcomes = vec![
        ("solution counts", criterion_1(&points, elapsed)),
        ("transparent groups", criterion_2(&points)),
        ("factorizable list", criterion_3(&points)),
    ];
    let (runs, skipped, errors) = run_oracles(&points);
    outcomes.push(("oracle equations", criterion_4(&runs, skipped, &errors)));
    outcomes.push(("monodromy", criterion_5(&runs)));
    outcomes.push(("transparent brute force", criterion_6(&runs)));
    outcomes.push(("dual decision paths", criterion_7(&points)));
    outcomes.push(("ribbon", criterion_8()));
    outcomes.push(("Lusztig kernel", criterion_9(&points)));
    outcomes.push(("property suites", criterion_10()));

    for (i, (title, o)) in outcomes.iter().enumerate() {
        print(i + 1, title, o, verbose);
    }
    let failed = outcomes.iter().filter(|(_, o)| !o.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed, {:.1}s",
        outcomes.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if strict && failed > 0 {
        std::process::exit(1);
    }
}
