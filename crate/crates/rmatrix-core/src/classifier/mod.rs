//! Enumeration of Cartan-part R-matrix candidates and their verdicts.

mod tables;

pub use tables::{
    compare_enumeration, table_check, table_rows, AlternativeReading, PredictedRow, RowComparison, RowDescription,
    TableComparison,
};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{lattice_index, lattice_sum, quotient_group, FiniteAbelianGroup, LatticeError};
use crate::lattice_theory::{
    centralizer, centralizer_transfer, intermediate_lattices, lambda_prime, lusztig_kernel_match, CentralizerTransfer,
    LatticeBasis, LatticeLabel, LatticeTheoryError, TransferMethod,
};
use crate::pairings::{
    a_g_ell, enumerate_pairings, f_hat, rad0, radical, root_quotient, transparent_group, PairingError, PairingMatrix,
};
use crate::root_systems::{
    build_root_system, ribbon_condition_holds, ribbon_data, Family, LieType, RootSystemData, RootSystemError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("ell must be at least 2, got {0}")]
    EllTooSmall(u64),
    #[error("candidate is inadmissible: the kernels of Λ1 and Λ2 differ")]
    Inadmissible,
    #[error("Λ1 and Λ2 must lie between the root lattice and Λ")]
    NotIntermediate,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    LatticeTheory(#[from] LatticeTheoryError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
}

/// One choice of `(Λ, Λ1, Λ2, g)` at a fixed `ell`, with its kernel `Λ'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub lie_type: LieType,
    pub ell: u64,
    pub lattice: LatticeBasis,
    pub lattice1: LatticeBasis,
    pub lattice2: LatticeBasis,
    pub kernel: LatticeBasis,
    pub g: PairingMatrix,
}

impl Candidate {
    /// Builds a candidate, computing the kernel and rejecting inadmissible pairs.
    pub fn new(
        rs: &RootSystemData,
        ell: u64,
        lattice: LatticeBasis,
        lattice1: LatticeBasis,
        lattice2: LatticeBasis,
        g: PairingMatrix,
    ) -> Result<Self, ClassifierError> {
        if ell < 2 {
            return Err(ClassifierError::EllTooSmall(ell));
        }
        let root = LatticeBasis::root(rs);
        for m in [&lattice1, &lattice2] {
            if !lattice.contains(m) || !m.contains(&root) {
                return Err(ClassifierError::NotIntermediate);
            }
        }
        let kernel = match lambda_prime(rs, &lattice1, &lattice2, ell) {
            Err(LatticeTheoryError::KernelMismatch) => return Err(ClassifierError::Inadmissible),
            other => other?,
        };
        Ok(Candidate {
            lie_type: rs.lie_type,
            ell,
            lattice,
            lattice1,
            lattice2,
            kernel,
            g,
        })
    }

    /// Whether `Λ = Λ1 + Λ2`.
    pub fn spans_lattice(&self) -> Result<bool, LatticeError> {
        let sum = lattice_sum(&self.lattice1.basis, &self.lattice2.basis)?;
        crate::exact::lattices_equal(&sum, &self.lattice.basis)
    }
}

/// Agreement flags between independent computations; `None` means not applicable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossChecks {
    /// Perfectness of `f_hat` against nondegeneracy of `a_g`.
    pub f_hat_vs_a_g: Option<bool>,
    /// Definitional `Rad_0` against the two-torsion of `G1` for symmetric `f_hat`.
    pub rad0_closed_form: Option<bool>,
    /// Transparent characters against `Rad_0`.
    pub transparent_vs_rad0: Option<bool>,
    /// Factorizability against the odd-order criterion for symmetric `f_hat` with `Λ = Λ1 = Λ2`.
    pub odd_order: Option<bool>,
    /// For factorizable candidates, `Λ' = Cent_{Λ_R}(Λ)`.
    pub factorizable_kernel: Option<bool>,
}

impl CrossChecks {
    pub fn all_agree(&self) -> bool {
        [
            self.f_hat_vs_a_g,
            self.rad0_closed_form,
            self.transparent_vs_rad0,
            self.odd_order,
            self.factorizable_kernel,
        ]
        .iter()
        .all(|c| c.unwrap_or(true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub candidate: Candidate,
    pub f_hat: PairingMatrix,
    pub quasitriangular: bool,
    pub factorizable: bool,
    /// `Λ1 + Λ2 = Λ`; otherwise the monodromy matrix has zero rows.
    pub spans_lattice: bool,
    pub rad0: Option<FiniteAbelianGroup>,
    /// Subgroup of the character group of `Λ / Λ'`.
    pub transparent_group: Option<FiniteAbelianGroup>,
    /// Elements of the transparent group in character coordinates.
    pub transparent_characters: Vec<Vec<BigInt>>,
    pub a_g: Option<PairingMatrix>,
    pub transfer_method: Option<TransferMethod>,
    pub ribbon_ok: bool,
    pub lusztig_kernel_match: bool,
    /// Some `ell_alpha` equals 1.
    pub degenerate: bool,
    pub cross_checks: CrossChecks,
}

struct Context<'a> {
    rs: &'a RootSystemData,
    ell: u64,
    transfer: Option<&'a CentralizerTransfer>,
    ribbon_ok: bool,
    degenerate: bool,
    lusztig: bool,
}

pub fn is_degenerate(rs: &RootSystemData, ell: u64) -> Result<bool, RootSystemError> {
    Ok(ribbon_data(rs, ell)?.ell_alpha.contains(&1))
}

/// Full verdict for an admissible candidate.
pub fn classify(rs: &RootSystemData, c: &Candidate) -> Result<ClassificationReport, ClassifierError> {
    let kernel = match lambda_prime(rs, &c.lattice1, &c.lattice2, c.ell) {
        Err(LatticeTheoryError::KernelMismatch) => return Err(ClassifierError::Inadmissible),
        other => other?,
    };
    if !kernel.equals(&c.kernel) {
        return Err(ClassifierError::Inadmissible);
    }
    let transfer = centralizer_transfer(rs, &c.lattice2, c.ell).ok();
    let ctx = Context {
        rs,
        ell: c.ell,
        transfer: transfer.as_ref(),
        ribbon_ok: ribbon_condition_holds(rs, c.ell)?,
        degenerate: is_degenerate(rs, c.ell)?,
        lusztig: lusztig_kernel_match(rs, &c.lattice, c.ell)?.matches(),
    };
    classify_in(&ctx, c.clone())
}

fn is_symmetric(p: &PairingMatrix) -> bool {
    p.left == p.right && (0..p.left.rank()).all(|i| (0..p.left.rank()).all(|j| p.exponents[i][j] == p.exponents[j][i]))
}

fn classify_in(ctx: &Context<'_>, c: Candidate) -> Result<ClassificationReport, ClassifierError> {
    let rs = ctx.rs;
    let fh = f_hat(rs, &c.lattice1, &c.lattice2, &c.kernel, &c.g, ctx.ell)?;
    let quasitriangular = radical(&fh).is_perfect;
    let spans_lattice = c.spans_lattice()?;
    let mut checks = CrossChecks::default();

    let a_g = match ctx.transfer {
        Some(t) => Some(a_g_ell(rs, &c.g, ctx.ell, t)?),
        None => None,
    };
    if let Some(a) = &a_g {
        checks.f_hat_vs_a_g = Some(quasitriangular == radical(a).is_nondegenerate);
    }

    let mut report = ClassificationReport {
        f_hat: fh.clone(),
        quasitriangular,
        factorizable: false,
        spans_lattice,
        rad0: None,
        transparent_group: None,
        transparent_characters: Vec::new(),
        a_g,
        transfer_method: ctx.transfer.map(|t| t.method),
        ribbon_ok: ctx.ribbon_ok,
        lusztig_kernel_match: ctx.lusztig,
        degenerate: ctx.degenerate,
        cross_checks: checks,
        candidate: c,
    };
    if !quasitriangular {
        return Ok(report);
    }

    let c = &report.candidate;
    let r0 = rad0(&fh)?;
    let g_full = quotient_group(&c.kernel.basis, &c.lattice.basis)?;
    let t = transparent_group(&fh, &g_full)?;
    let factorizable = spans_lattice && r0.is_trivial();

    let two = BigInt::from(2);
    let symmetric = is_symmetric(&fh);
    let checks = &mut report.cross_checks;
    if symmetric {
        checks.rad0_closed_form =
            Some(r0.order() == fh.left.torsion_count(&two) && r0.invariant_factors.iter().all(|d| d == &two));
        if c.lattice.equals(&c.lattice1) {
            checks.odd_order = Some(factorizable == odd_order_criterion(rs, &c.lattice, ctx.ell));
        }
    }
    let spans_index = lattice_index(&lattice_sum(&c.lattice1.basis, &c.lattice2.basis)?, &c.lattice.basis)?;
    let preimages_in_rad0 = spans_lattice
        && t.group
            .generators
            .columns()
            .iter()
            .all(|col| r0.coordinates(&t.preimage(col)).is_ok());
    checks.transparent_vs_rad0 =
        Some(t.group.order() == r0.order() * spans_index && (!spans_lattice || preimages_in_rad0));
    if factorizable {
        let cent = centralizer(rs, &LatticeBasis::root(rs), &c.lattice, ctx.ell)?;
        checks.factorizable_kernel = Some(cent.equals(&c.kernel));
    }

    report.transparent_characters = character_elements(&t.group, &g_full.invariant_factors);
    report.factorizable = factorizable;
    report.rad0 = Some(r0);
    report.transparent_group = Some(t.group);
    Ok(report)
}

/// Elements of a subgroup of `Z^r / Diag(d)`, reduced into `[0, d_i)`.
fn character_elements(group: &FiniteAbelianGroup, moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = group
        .elements()
        .iter()
        .map(|x| group.lift(x).iter().zip(moduli).map(|(v, d)| v.mod_floor(d)).collect())
        .collect();
    out.sort();
    out
}

/// `|Λ / Λ'|` is odd, decided by the closed criterion.
pub fn odd_order_criterion(rs: &RootSystemData, l: &LatticeBasis, ell: u64) -> bool {
    let h_odd = root_quotient_order(rs, l).is_odd();
    let b_like = rs.lie_type.family == Family::B || (rs.lie_type.family == Family::A && rs.lie_type.rank == 1);
    let is_root = l.equals(&LatticeBasis::root(rs));
    h_odd && (ell % 2 == 1 || (ell % 4 == 2 && b_like && is_root))
}

fn root_quotient_order(rs: &RootSystemData, l: &LatticeBasis) -> BigInt {
    lattice_index(&rs.root_lattice(), &l.basis).expect("intermediate lattice")
}

/// `|Λ / Cent_{Λ_R}(Λ)|`, computed directly.
pub fn lattice_over_kernel_order(rs: &RootSystemData, l: &LatticeBasis, ell: u64) -> Result<BigInt, ClassifierError> {
    let kernel = lambda_prime(rs, l, l, ell)?;
    Ok(lattice_index(&kernel.basis, &l.basis)?)
}

/// All candidates sharing `(Λ, Λ1, Λ2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub lattice: LatticeLabel,
    pub lattice1: LatticeLabel,
    pub lattice2: LatticeLabel,
    pub h1: Vec<u64>,
    pub h2: Vec<u64>,
    pub spans_lattice: bool,
    /// The kernels of `Λ1` and `Λ2` agree.
    pub admissible: bool,
    pub pairings: usize,
    pub quasitriangular: usize,
    pub factorizable: usize,
    /// Indices into `Enumeration::reports`.
    pub reports: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub lie_type: LieType,
    pub ell: u64,
    pub ribbon_ok: bool,
    pub degenerate: bool,
    pub strata: Vec<Stratum>,
    pub reports: Vec<ClassificationReport>,
}

impl Enumeration {
    pub fn quasitriangular_count(&self) -> usize {
        self.strata.iter().map(|s| s.quasitriangular).sum()
    }

    pub fn stratum_reports<'a>(&'a self, s: &'a Stratum) -> impl Iterator<Item = &'a ClassificationReport> + 'a {
        s.reports.iter().map(move |&i| &self.reports[i])
    }
}

/// Pairs `(Λ1, Λ2)` inside `Λ` that are enumerated; distinct pairs only for `D_{2n}`.
fn sublattice_pairs(rs: &RootSystemData, lattices: &[LatticeBasis], l: &LatticeBasis) -> Vec<(usize, usize)> {
    let inside: Vec<usize> = (0..lattices.len()).filter(|&i| l.contains(&lattices[i])).collect();
    let mixed = rs.lie_type.family == Family::D && rs.lie_type.rank.is_multiple_of(2);
    let root = rs.root_lattice();
    let order = |i: usize| lattice_index(&root, &lattices[i].basis).expect("intermediate lattice");
    let mut out = Vec::new();
    for &i in &inside {
        for &j in &inside {
            if i == j || (mixed && order(i) == order(j)) {
                out.push((i, j));
            }
        }
    }
    out
}

struct StratumWork {
    l: usize,
    l1: usize,
    l2: usize,
}

/// Every candidate for the given type at `ell`, grouped into strata in a deterministic order.
pub fn enumerate_all(rs: &RootSystemData, ell: u64) -> Result<Enumeration, ClassifierError> {
    if ell < 2 {
        return Err(ClassifierError::EllTooSmall(ell));
    }
    let lattices = intermediate_lattices(rs);
    let mut work = Vec::new();
    for (li, l) in lattices.iter().enumerate() {
        for (i, j) in sublattice_pairs(rs, &lattices, l) {
            work.push(StratumWork { l: li, l1: i, l2: j });
        }
    }
    let ribbon_ok = ribbon_condition_holds(rs, ell)?;
    let degenerate = is_degenerate(rs, ell)?;
    let lusztig: Vec<bool> = lattices
        .iter()
        .map(|l| Ok(lusztig_kernel_match(rs, l, ell)?.matches()))
        .collect::<Result<_, ClassifierError>>()?;
    let transfers: Vec<Option<CentralizerTransfer>> =
        lattices.iter().map(|l| centralizer_transfer(rs, l, ell).ok()).collect();

    let results: Vec<(Stratum, Vec<ClassificationReport>)> = work
        .par_iter()
        .map(|w| {
            let (l, l1, l2) = (&lattices[w.l], &lattices[w.l1], &lattices[w.l2]);
            let h1 = root_quotient(rs, l1)?;
            let h2 = root_quotient(rs, l2)?;
            let spans = lattice_sum(&l1.basis, &l2.basis).and_then(|s| crate::exact::lattices_equal(&s, &l.basis))?;
            let mut stratum = Stratum {
                lattice: l.label.clone(),
                lattice1: l1.label.clone(),
                lattice2: l2.label.clone(),
                h1: h1.invariant_factors_u64(),
                h2: h2.invariant_factors_u64(),
                spans_lattice: spans,
                admissible: true,
                pairings: 0,
                quasitriangular: 0,
                factorizable: 0,
                reports: Vec::new(),
            };
            let kernel = match lambda_prime(rs, l1, l2, ell) {
                Err(LatticeTheoryError::KernelMismatch) => {
                    stratum.admissible = false;
                    stratum.pairings = enumerate_pairings(&h1, &h2).len();
                    return Ok((stratum, Vec::new()));
                }
                other => other?,
            };
            let ctx = Context {
                rs,
                ell,
                transfer: transfers[w.l2].as_ref(),
                ribbon_ok,
                degenerate,
                lusztig: lusztig[w.l],
            };
            let mut reports = Vec::new();
            for g in enumerate_pairings(&h1, &h2) {
                let c = Candidate {
                    lie_type: rs.lie_type,
                    ell,
                    lattice: l.clone(),
                    lattice1: l1.clone(),
                    lattice2: l2.clone(),
                    kernel: kernel.clone(),
                    g,
                };
                let r = classify_in(&ctx, c)?;
                stratum.pairings += 1;
                stratum.quasitriangular += r.quasitriangular as usize;
                stratum.factorizable += r.factorizable as usize;
                reports.push(r);
            }
            Ok((stratum, reports))
        })
        .collect::<Result<_, ClassifierError>>()?;

    let mut strata = Vec::with_capacity(results.len());
    let mut all_reports = Vec::new();
    for (mut s, reports) in results {
        s.reports = (all_reports.len()..all_reports.len() + reports.len()).collect();
        all_reports.extend(reports);
        strata.push(s);
    }
    Ok(Enumeration {
        lie_type: rs.lie_type,
        ell,
        ribbon_ok,
        degenerate,
        strata,
        reports: all_reports,
    })
}

/// Convenience wrapper building the root system.
pub fn enumerate_type(t: LieType, ell: u64) -> Result<Enumeration, ClassifierError> {
    enumerate_all(&build_root_system(t), ell)
}

/// Weight vector `k * λ_i` in coweight coordinates.
pub(crate) fn weight_multiple(rs: &RootSystemData, i: usize, k: i64) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::from(0); rs.rank()];
    coeffs[i] = BigInt::from(k);
    rs.weight_to_coweight(&coeffs)
}
