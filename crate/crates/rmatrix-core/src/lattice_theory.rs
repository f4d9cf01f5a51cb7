//! Lattices between the root and weight lattice, `ell`-centralizers, the
//! forced kernel `Λ'` and the centralizer transfer map.
//!
//! For `L1, L2` the `ell`-centralizer is
//! `Cent_{L1}(L2) = { v in L1 : (v, w) in ell Z for all w in L2 }`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{
    dual_lattice, lattice_from_generators, lattice_index, lattices_equal, rational_lattice_intersection,
    smith_normal_form, IntMatrix, LatticeError, RatMatrix,
};
use crate::root_systems::{Family, RootSystemData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeTheoryError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("ell must be positive")]
    ZeroEll,
    #[error("Cent(Λ1) and Cent(Λ2) differ in the root lattice; the pair admits no common kernel")]
    KernelMismatch,
    #[error("lattice is not between the root and weight lattice")]
    NotIntermediate,
    #[error("no centralizer transfer map found: {0}")]
    ConstructionFailure(String),
}

/// How a lattice was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeLabel {
    Root,
    Weight,
    /// Root lattice plus the listed multiples `c * lambda_i` (0-based `i`).
    Subgroup(Vec<(u64, usize)>),
    Derived(String),
}

impl fmt::Display for LatticeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeLabel::Root => write!(f, "root"),
            LatticeLabel::Weight => write!(f, "weight"),
            LatticeLabel::Subgroup(gens) => {
                let parts: Vec<String> = gens
                    .iter()
                    .map(|&(c, i)| {
                        if c == 1 {
                            format!("λ{}", i + 1)
                        } else {
                            format!("{}λ{}", c, i + 1)
                        }
                    })
                    .collect();
                write!(f, "subgroup:{}", parts.join("+"))
            }
            LatticeLabel::Derived(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    /// Generators as columns, in coweight coordinates.
    pub basis: IntMatrix,
    pub label: LatticeLabel,
}

impl LatticeBasis {
    pub fn new(basis: IntMatrix, label: LatticeLabel) -> Result<Self, LatticeError> {
        Ok(LatticeBasis {
            basis: lattice_from_generators(&basis)?,
            label,
        })
    }

    pub fn root(rs: &RootSystemData) -> Self {
        LatticeBasis::new(rs.root_lattice(), LatticeLabel::Root).expect("root lattice has full rank")
    }

    pub fn weight(rs: &RootSystemData) -> Self {
        LatticeBasis::new(rs.weight_lattice(), LatticeLabel::Weight).expect("weight lattice has full rank")
    }

    /// The lattice generated by the root lattice and the given weights (weight-basis coefficients).
    pub fn from_weights(rs: &RootSystemData, weights: &[Vec<BigInt>]) -> Result<Self, LatticeTheoryError> {
        let mut cols = rs.root_lattice().columns();
        for w in weights {
            if w.len() != rs.rank() {
                return Err(LatticeError::DimensionMismatch.into());
            }
            cols.push(rs.weight_to_coweight(w));
        }
        let basis = lattice_from_generators(&IntMatrix::from_columns(rs.rank(), &cols))?;
        let lattice = LatticeBasis {
            basis,
            label: LatticeLabel::Derived(String::new()),
        };
        let label = identify_label(rs, &lattice)?;
        Ok(LatticeBasis { label, ..lattice })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn equals(&self, other: &LatticeBasis) -> bool {
        lattices_equal(&self.basis, &other.basis).unwrap_or(false)
    }

    pub fn contains(&self, other: &LatticeBasis) -> bool {
        crate::exact::is_sublattice(&other.basis, &self.basis).unwrap_or(false)
    }

    /// `|Λ_W^∨ / Λ|`, the covolume in coweight coordinates.
    pub fn covolume(&self) -> BigInt {
        self.basis.det().abs()
    }

    /// Invariant factors `d_i^Λ` of `Λ_W^∨ / Λ` (all `n` of them, ones included).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        smith_normal_form(&self.basis).diagonal()
    }
}

fn check_intermediate(rs: &RootSystemData, l: &LatticeBasis) -> Result<(), LatticeTheoryError> {
    let inside_weight = crate::exact::is_sublattice(&l.basis, &rs.weight_lattice())?;
    let contains_root = crate::exact::is_sublattice(&rs.root_lattice(), &l.basis)?;
    if inside_weight && contains_root {
        Ok(())
    } else {
        Err(LatticeTheoryError::NotIntermediate)
    }
}

fn to_u64_coords(v: &[BigInt]) -> Vec<u64> {
    v.iter().map(|x| x.to_u64().expect("small group")).collect()
}

/// Subgroup of `π_1` as the set of canonical element coordinates.
fn generated_subgroup(factors: &[u64], gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
    set.insert(vec![0; factors.len()]);
    loop {
        let mut added = Vec::new();
        for x in &set {
            for g in gens {
                let y: Vec<u64> = x.iter().zip(g).zip(factors).map(|((a, b), d)| (a + b) % d).collect();
                if !set.contains(&y) {
                    added.push(y);
                }
            }
        }
        if added.is_empty() {
            return set;
        }
        set.extend(added);
    }
}

fn weight_class(rs: &RootSystemData, multiple: u64, index: usize) -> Vec<u64> {
    let mut v = vec![BigInt::zero(); rs.rank()];
    v[index] = BigInt::from(multiple) * BigInt::from(rs.d[index]);
    to_u64_coords(
        &rs.fund_group
            .coordinates(&v)
            .expect("weights lie in the weight lattice"),
    )
}

/// Generators `c * lambda_i` for a subgroup, preferring the last two nodes, then
/// the first, then descending index, and small multiples within each node.
fn greedy_generators(rs: &RootSystemData, subgroup: &BTreeSet<Vec<u64>>) -> Vec<(u64, usize)> {
    let factors = rs.fund_group.invariant_factors_u64();
    let exponent = factors.last().copied().unwrap_or(1);
    let mut chosen: Vec<(u64, usize)> = Vec::new();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut span = generated_subgroup(&factors, &classes);
    let n = rs.rank();
    let mut order: Vec<usize> = (0..n).rev().collect();
    if n > 2 {
        order = vec![n - 1, n - 2, 0];
        order.extend((1..n - 2).rev());
    }
    for i in order {
        for c in 1..=exponent {
            if span.len() == subgroup.len() {
                return chosen;
            }
            let class = weight_class(rs, c, i);
            if subgroup.contains(&class) && !span.contains(&class) {
                chosen.push((c, i));
                classes.push(class);
                span = generated_subgroup(&factors, &classes);
            }
        }
    }
    chosen
}

fn label_for_subgroup(rs: &RootSystemData, subgroup: &BTreeSet<Vec<u64>>) -> LatticeLabel {
    let total: u64 = rs.fund_group.invariant_factors_u64().iter().product();
    if subgroup.len() == 1 {
        LatticeLabel::Root
    } else if subgroup.len() as u64 == total {
        LatticeLabel::Weight
    } else {
        LatticeLabel::Subgroup(greedy_generators(rs, subgroup))
    }
}

/// Canonical label of an intermediate lattice.
pub fn identify_label(rs: &RootSystemData, l: &LatticeBasis) -> Result<LatticeLabel, LatticeTheoryError> {
    check_intermediate(rs, l)?;
    let gens: Vec<Vec<u64>> = l
        .basis
        .columns()
        .iter()
        .map(|c| to_u64_coords(&rs.fund_group.coordinates(c).expect("inside the weight lattice")))
        .collect();
    let subgroup = generated_subgroup(&rs.fund_group.invariant_factors_u64(), &gens);
    Ok(label_for_subgroup(rs, &subgroup))
}

/// All lattices `Λ_R ⊆ Λ ⊆ Λ_W`, one per subgroup of `π_1`, ordered by index over `Λ_R`.
pub fn intermediate_lattices(rs: &RootSystemData) -> Vec<LatticeBasis> {
    let group = &rs.fund_group;
    let factors = group.invariant_factors_u64();
    let elements: Vec<Vec<u64>> = group.elements().iter().map(|e| to_u64_coords(e)).collect();
    let mut subgroups: BTreeSet<BTreeSet<Vec<u64>>> = BTreeSet::new();
    // Every fundamental group is generated by at most two elements.
    for a in &elements {
        for b in &elements {
            subgroups.insert(generated_subgroup(&factors, &[a.clone(), b.clone()]));
        }
    }
    let mut out: Vec<(usize, LatticeLabel, LatticeBasis)> = subgroups
        .into_iter()
        .map(|sub| {
            let mut cols = rs.root_lattice().columns();
            for e in &sub {
                let coords: Vec<BigInt> = e.iter().map(|&x| BigInt::from(x)).collect();
                cols.push(group.lift(&coords));
            }
            let basis =
                lattice_from_generators(&IntMatrix::from_columns(rs.rank(), &cols)).expect("contains the root lattice");
            let label = label_for_subgroup(rs, &sub);
            (sub.len(), label.clone(), LatticeBasis { basis, label })
        })
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, l)| l).collect()
}

/// `Cent_{L1}(L2) = L1 ∩ ell * dual(L2)`.
pub fn centralizer(
    rs: &RootSystemData,
    l1: &LatticeBasis,
    l2: &LatticeBasis,
    ell: u64,
) -> Result<LatticeBasis, LatticeTheoryError> {
    if ell == 0 {
        return Err(LatticeTheoryError::ZeroEll);
    }
    let dual = dual_lattice(&l2.basis.to_rat(), rs.gram())?;
    let scaled = dual.scale(&BigRational::from_integer(BigInt::from(ell)));
    let meet = rational_lattice_intersection(&l1.basis.to_rat(), &scaled)?;
    let basis = meet.to_int().expect("sublattice of an integral lattice");
    Ok(LatticeBasis {
        basis,
        label: LatticeLabel::Derived(format!("Cent[{}]({})", l1.label, l2.label)),
    })
}

/// `Diag(ell / gcd(ell, d_i))`.
pub fn ell_reduction(ell: u64, factors: &[BigInt]) -> IntMatrix {
    let ell = BigInt::from(ell);
    let diag: Vec<BigInt> = factors.iter().map(|d| &ell / ell.gcd(d)).collect();
    IntMatrix::diagonal(&diag)
}

/// Centralizers `(Cent_{Λ_R}(Λ), Cent_Λ(Λ_R))` from the Smith form `A_Λ = P S Q`:
/// `A_R P^{-T} D_ell` and `P S D_ell` with `D_ell = Diag(ell / gcd(ell, d_i^Λ))`.
pub fn centralizers_closed_form(
    rs: &RootSystemData,
    l: &LatticeBasis,
    ell: u64,
) -> Result<(LatticeBasis, LatticeBasis), LatticeTheoryError> {
    if ell == 0 {
        return Err(LatticeTheoryError::ZeroEll);
    }
    let snf = smith_normal_form(&l.basis);
    let d_ell = ell_reduction(ell, &snf.diagonal());
    let in_root = &(&rs.root_lattice() * &snf.p_inv.transpose()) * &d_ell;
    let in_l = &(&snf.p * &snf.s) * &d_ell;
    Ok((
        LatticeBasis::new(in_root, LatticeLabel::Derived(format!("Cent[root]({})", l.label)))?,
        LatticeBasis::new(in_l, LatticeLabel::Derived(format!("Cent[{}](root)", l.label)))?,
    ))
}

/// The unique admissible kernel `Λ' = Cent_{Λ_R}(L1) = Cent_{Λ_R}(L2)`.
pub fn lambda_prime(
    rs: &RootSystemData,
    l1: &LatticeBasis,
    l2: &LatticeBasis,
    ell: u64,
) -> Result<LatticeBasis, LatticeTheoryError> {
    let root = LatticeBasis::root(rs);
    let c1 = centralizer(rs, &root, l1, ell)?;
    if !l1.equals(l2) {
        let c2 = centralizer(rs, &root, l2, ell)?;
        if !c1.equals(&c2) {
            return Err(LatticeTheoryError::KernelMismatch);
        }
    }
    Ok(LatticeBasis {
        basis: c1.basis,
        label: LatticeLabel::Derived("kernel".to_string()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferMethod {
    /// `ell * id`, when `ell` is coprime to `|Λ_W^∨ / Λ|`.
    Scalar,
    /// `ell_1 * A_{ell_2}` with `ell_1` the part of `ell` coprime to `|Λ_W^∨ / Λ|`.
    SplitScalar,
    /// `Diag(d) D_ell Q_C^T P_C^{-1} Diag(d)^{-1}` from the Smith form of the Cartan matrix.
    WeightLattice,
    /// `P D_ell P^{-1}` for a unimodular `P` adapted to both `Λ_R` and `Λ`, with
    /// last column `lambda_n` (type `A` only).
    SymmetricSmith,
    /// `P D_ell P^{-1}` from the Smith form `A_Λ = P S Q`.
    SmithConjugate,
    /// Matching adapted bases of `Λ ⊇ Λ_R` and `Cent_Λ(Λ_R) ⊇ Cent_{Λ_R}(Λ)`.
    AdaptedBasis,
}

/// An endomorphism `A` of `Λ` with `A(Λ) = Cent_Λ(Λ_R)` and `A(Λ_R) = Cent_{Λ_R}(Λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerTransfer {
    /// Matrix in coweight coordinates; may be rational, but maps `Λ` into itself.
    pub matrix: RatMatrix,
    pub ell: u64,
    pub method: TransferMethod,
}

impl CentralizerTransfer {
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix
            .mul_int_vec(v)
            .into_iter()
            .map(|x| {
                assert!(x.is_integer(), "transfer map leaves the lattice");
                x.to_integer()
            })
            .collect()
    }
}

fn image(m: &RatMatrix, basis: &IntMatrix) -> Option<IntMatrix> {
    (m * &basis.to_rat()).to_int()
}

/// Checks both defining lattice equalities of a centralizer transfer map.
pub fn verify_transfer(
    rs: &RootSystemData,
    l: &LatticeBasis,
    ell: u64,
    matrix: &RatMatrix,
) -> Result<bool, LatticeTheoryError> {
    let root = LatticeBasis::root(rs);
    let cent_l = centralizer(rs, l, &root, ell)?;
    let cent_root = centralizer(rs, &root, l, ell)?;
    let (Some(img_l), Some(img_root)) = (image(matrix, &l.basis), image(matrix, &root.basis)) else {
        return Ok(false);
    };
    if img_l.det().is_zero() || img_root.det().is_zero() {
        return Ok(false);
    }
    Ok(lattices_equal(&img_l, &cent_l.basis)? && lattices_equal(&img_root, &cent_root.basis)?)
}

/// Unimodular `P` with `Λ_R(A_n) = P Diag(1, ..., 1, n+1) Z^n`: columns
/// `e_j - (n+1-j) e_n` for `j < n` and `e_n` (1-based).
pub fn a_series_adapted_basis(n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for j in 0..n.saturating_sub(1) {
        p[(n - 1, j)] = BigInt::from(-((n - j) as i64));
    }
    p
}

fn scalar_transfer(n: usize, ell: u64) -> RatMatrix {
    IntMatrix::scalar(n, ell).to_rat()
}

fn weight_lattice_transfer(rs: &RootSystemData, ell: u64) -> Result<RatMatrix, LatticeTheoryError> {
    let snf_c = smith_normal_form(&rs.cartan);
    let d: Vec<BigInt> = rs.d.iter().map(|&x| BigInt::from(x)).collect();
    let a_w = IntMatrix::diagonal(&d).to_rat();
    let a_cent = ell_reduction(ell, &d).to_rat();
    let a_w_inv = a_w.inverse()?;
    let m = &(&(&(&a_w * &a_cent) * &snf_c.q.transpose().to_rat()) * &snf_c.p_inv.to_rat()) * &a_w_inv;
    Ok(m)
}

fn symmetric_smith_transfer(
    rs: &RootSystemData,
    l: &LatticeBasis,
    ell: u64,
) -> Result<Option<RatMatrix>, LatticeTheoryError> {
    if rs.lie_type.family != Family::A {
        return Ok(None);
    }
    let n = rs.rank();
    let p = a_series_adapted_basis(n);
    let mut s = vec![BigInt::one(); n];
    s[n - 1] = l.covolume();
    if !lattices_equal(&(&p * &IntMatrix::diagonal(&s)), &l.basis)? {
        return Ok(None);
    }
    let d_ell = ell_reduction(ell, &s);
    let p_inv = p.to_rat().inverse()?;
    Ok(Some(&(&p.to_rat() * &d_ell.to_rat()) * &p_inv))
}

fn smith_conjugate_transfer(l: &LatticeBasis, ell: u64) -> RatMatrix {
    let snf = smith_normal_form(&l.basis);
    let d_ell = ell_reduction(ell, &snf.diagonal());
    (&(&snf.p * &d_ell) * &snf.p_inv).to_rat()
}

fn adapted_basis_transfer(
    rs: &RootSystemData,
    l: &LatticeBasis,
    ell: u64,
) -> Result<Result<RatMatrix, String>, LatticeTheoryError> {
    let root = LatticeBasis::root(rs);
    let cent_l = centralizer(rs, l, &root, ell)?;
    let cent_root = centralizer(rs, &root, l, ell)?;
    let adapted = |sup: &IntMatrix, sub: &IntMatrix| -> Result<(Vec<BigInt>, IntMatrix), LatticeError> {
        let rel = (&sup.to_rat().inverse()? * &sub.to_rat())
            .to_int()
            .ok_or(LatticeError::NotSublattice)?;
        let snf = smith_normal_form(&rel);
        Ok((snf.diagonal(), sup * &snf.p))
    };
    let (s_src, b_src) = adapted(&l.basis, &root.basis)?;
    let (s_dst, b_dst) = adapted(&cent_l.basis, &cent_root.basis)?;
    if s_src != s_dst {
        return Ok(Err(format!(
            "Λ/Λ_R has invariant factors {s_src:?} but Cent_Λ(Λ_R)/Cent_Λ_R(Λ) has {s_dst:?}"
        )));
    }
    Ok(Ok(&b_dst.to_rat() * &b_src.to_rat().inverse()?))
}

/// Largest divisor of `ell` coprime to `n`.
fn coprime_part(ell: u64, n: &BigInt) -> u64 {
    let mut rest = ell;
    loop {
        let g = BigInt::from(rest).gcd(n).to_u64().expect("divides ell");
        if g == 1 {
            return rest;
        }
        rest /= g;
    }
}

/// Constructs and verifies a centralizer transfer map for `Λ`.
pub fn centralizer_transfer(
    rs: &RootSystemData,
    l: &LatticeBasis,
    ell: u64,
) -> Result<CentralizerTransfer, LatticeTheoryError> {
    if ell == 0 {
        return Err(LatticeTheoryError::ZeroEll);
    }
    check_intermediate(rs, l)?;
    let n = rs.rank();
    let covolume = l.covolume();
    let mut attempts: Vec<String> = Vec::new();
    let accept =
        |matrix: RatMatrix, method: TransferMethod| -> Result<Option<CentralizerTransfer>, LatticeTheoryError> {
            if verify_transfer(rs, l, ell, &matrix)? {
                Ok(Some(CentralizerTransfer { matrix, ell, method }))
            } else {
                Ok(None)
            }
        };

    if BigInt::from(ell).gcd(&covolume).is_one() {
        if let Some(t) = accept(scalar_transfer(n, ell), TransferMethod::Scalar)? {
            return Ok(t);
        }
        attempts.push("scalar".into());
    }
    let ell1 = coprime_part(ell, &covolume);
    if ell1 > 1 {
        let inner = centralizer_transfer(rs, l, ell / ell1)?;
        let m = inner.matrix.scale(&BigRational::from_integer(BigInt::from(ell1)));
        if let Some(t) = accept(m, TransferMethod::SplitScalar)? {
            return Ok(t);
        }
        attempts.push("split scalar".into());
    }
    if l.equals(&LatticeBasis::weight(rs)) {
        if let Some(t) = accept(weight_lattice_transfer(rs, ell)?, TransferMethod::WeightLattice)? {
            return Ok(t);
        }
        attempts.push("weight lattice formula".into());
    }
    if let Some(m) = symmetric_smith_transfer(rs, l, ell)? {
        if let Some(t) = accept(m, TransferMethod::SymmetricSmith)? {
            return Ok(t);
        }
        attempts.push("symmetric Smith basis".into());
    }
    if let Some(t) = accept(smith_conjugate_transfer(l, ell), TransferMethod::SmithConjugate)? {
        return Ok(t);
    }
    attempts.push("Smith conjugate".into());
    match adapted_basis_transfer(rs, l, ell)? {
        Ok(m) => {
            if let Some(t) = accept(m, TransferMethod::AdaptedBasis)? {
                return Ok(t);
            }
            attempts.push("adapted basis (verification failed)".into());
        }
        Err(reason) => attempts.push(reason),
    }
    Err(LatticeTheoryError::ConstructionFailure(attempts.join("; ")))
}

/// `|Λ / Cent_Λ(Λ_R)|`.
pub fn centralizer_index(rs: &RootSystemData, l: &LatticeBasis, ell: u64) -> Result<BigInt, LatticeTheoryError> {
    let cent = centralizer(rs, l, &LatticeBasis::root(rs), ell)?;
    Ok(lattice_index(&cent.basis, &l.basis)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LusztigComparison {
    /// `2 gcd(ell, d_i^Λ) = gcd(ell, 2 d_i^W)` for all `i`.
    pub divisibility_condition: bool,
    /// `Λ' = 2 Cent_{Λ_R}(2 Λ_W)` as lattices.
    pub lattices_equal: bool,
}

impl LusztigComparison {
    pub fn matches(&self) -> bool {
        self.lattices_equal
    }

    pub fn consistent(&self) -> bool {
        self.divisibility_condition == self.lattices_equal
    }
}

/// Compares `Λ' = Cent_{Λ_R}(Λ)` with Lusztig's kernel `2 Cent_{Λ_R}(2 Λ_W)`.
pub fn lusztig_kernel_match(
    rs: &RootSystemData,
    l: &LatticeBasis,
    ell: u64,
) -> Result<LusztigComparison, LatticeTheoryError> {
    let ell_big = BigInt::from(ell);
    let two = BigInt::from(2);
    let d_l = l.invariant_factors();
    let d_w = LatticeBasis::weight(rs).invariant_factors();
    let divisibility_condition = d_l
        .iter()
        .zip(&d_w)
        .all(|(dl, dw)| &two * ell_big.gcd(dl) == ell_big.gcd(&(&two * dw)));
    let root = LatticeBasis::root(rs);
    let doubled_weight = LatticeBasis {
        basis: rs.weight_lattice().scale(&two),
        label: LatticeLabel::Derived("2·weight".into()),
    };
    let lusztig = centralizer(rs, &root, &doubled_weight, ell)?.basis.scale(&two);
    let ours = lambda_prime(rs, l, l, ell)?;
    Ok(LusztigComparison {
        divisibility_condition,
        lattices_equal: lattices_equal(&lusztig, &ours.basis)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{build_root_system, types_up_to_rank, LieType};

    fn rs(f: Family, n: usize) -> RootSystemData {
        build_root_system(LieType::new(f, n).unwrap())
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(intermediate_lattices(&rs(Family::A, 3)).len(), 3);
        assert_eq!(intermediate_lattices(&rs(Family::A, 5)).len(), 4);
        assert_eq!(intermediate_lattices(&rs(Family::D, 4)).len(), 5);
        assert_eq!(intermediate_lattices(&rs(Family::D, 5)).len(), 3);
        assert_eq!(intermediate_lattices(&rs(Family::E, 8)).len(), 1);
        let e6 = intermediate_lattices(&rs(Family::E, 6));
        assert_eq!(e6.len(), 2);
        assert_eq!(e6[0].label, LatticeLabel::Root);
        assert_eq!(e6[1].label, LatticeLabel::Weight);
    }

    #[test]
    fn subgroup_labels() {
        let a5 = intermediate_lattices(&rs(Family::A, 5));
        let labels: Vec<String> = a5.iter().map(|l| l.label.to_string()).collect();
        assert_eq!(labels, ["root", "subgroup:3λ5", "subgroup:2λ5", "weight"]);
        let d4: Vec<String> = intermediate_lattices(&rs(Family::D, 4))
            .iter()
            .map(|l| l.label.to_string())
            .collect();
        assert_eq!(d4, ["root", "subgroup:λ1", "subgroup:λ3", "subgroup:λ4", "weight"]);
        let d6: Vec<String> = intermediate_lattices(&rs(Family::D, 6))
            .iter()
            .map(|l| l.label.to_string())
            .collect();
        assert_eq!(d6, ["root", "subgroup:λ1", "subgroup:λ5", "subgroup:λ6", "weight"]);
        let c4: Vec<String> = intermediate_lattices(&rs(Family::C, 4))
            .iter()
            .map(|l| l.label.to_string())
            .collect();
        assert_eq!(c4, ["root", "weight"]);
        let d5: Vec<String> = intermediate_lattices(&rs(Family::D, 5))
            .iter()
            .map(|l| l.label.to_string())
            .collect();
        assert_eq!(d5, ["root", "subgroup:2λ5", "weight"]);
    }

    #[test]
    fn a1_centralizer() {
        let a1 = rs(Family::A, 1);
        let root = LatticeBasis::root(&a1);
        let c = centralizer(&a1, &root, &root, 4).unwrap();
        assert_eq!(c.basis, IntMatrix::from_rows(&[[4]]));
        let c1 = centralizer(&a1, &root, &LatticeBasis::weight(&a1), 1).unwrap();
        assert!(c1.equals(&root));
    }

    #[test]
    fn centralizer_divisibility_and_maximality() {
        let b3 = rs(Family::B, 3);
        for l in intermediate_lattices(&b3) {
            let root = LatticeBasis::root(&b3);
            let c = centralizer(&b3, &root, &l, 6).unwrap();
            let six = BigInt::from(6);
            for v in c.basis.columns() {
                for w in l.basis.columns() {
                    let p = b3.killing_form(&v, &w).unwrap();
                    assert!(p.is_integer() && p.to_integer().is_multiple_of(&six));
                }
            }
            // Every element of Λ_R pairing into 6Z lies in c.
            let index = lattice_index(&c.basis, &root.basis).unwrap();
            assert!(index > BigInt::one());
        }
    }

    #[test]
    fn closed_form_matches_generic() {
        for t in types_up_to_rank(4) {
            let r = build_root_system(t);
            let root = LatticeBasis::root(&r);
            for l in intermediate_lattices(&r) {
                for ell in 1..=12 {
                    let (in_root, in_l) = centralizers_closed_form(&r, &l, ell).unwrap();
                    assert!(in_root.equals(&centralizer(&r, &root, &l, ell).unwrap()), "{t} {ell}");
                    assert!(in_l.equals(&centralizer(&r, &l, &root, ell).unwrap()), "{t} {ell}");
                    let d_ell = ell_reduction(ell, &l.invariant_factors());
                    assert_eq!(centralizer_index(&r, &l, ell).unwrap(), d_ell.det());
                }
            }
        }
    }

    #[test]
    fn kernel_for_d_series_mixed_pair() {
        let d6 = rs(Family::D, 6);
        let lats = intermediate_lattices(&d6);
        let l1 = lats.iter().find(|l| l.label.to_string() == "subgroup:λ5").unwrap();
        let l2 = lats.iter().find(|l| l.label.to_string() == "subgroup:λ6").unwrap();
        let root = LatticeBasis::root(&d6);
        for ell in 1..=12 {
            let kernel = lambda_prime(&d6, l1, l2, ell);
            if ell % 2 == 0 {
                // ell * lambda_6 lies in Cent(Λ2) but not in Cent(Λ1).
                assert_eq!(kernel, Err(LatticeTheoryError::KernelMismatch));
            } else {
                let cent_rr = centralizer(&d6, &root, &root, ell).unwrap();
                assert!(cent_rr.contains(&kernel.unwrap()));
            }
        }
    }

    #[test]
    fn kernel_mismatch_detected() {
        let a3 = rs(Family::A, 3);
        let lats = intermediate_lattices(&a3);
        assert_eq!(
            lambda_prime(&a3, &lats[0], &lats[2], 4),
            Err(LatticeTheoryError::KernelMismatch)
        );
    }

    #[test]
    fn transfer_always_verifies() {
        for t in types_up_to_rank(5) {
            let r = build_root_system(t);
            for l in intermediate_lattices(&r) {
                for ell in 1..=12 {
                    let tr = centralizer_transfer(&r, &l, ell).unwrap_or_else(|e| panic!("{t} {} {ell}: {e}", l.label));
                    assert!(verify_transfer(&r, &l, ell, &tr.matrix).unwrap());
                }
            }
        }
    }

    #[test]
    fn transfer_scalar_for_simply_laced_weight_lattice() {
        let e6 = rs(Family::E, 6);
        let w = LatticeBasis::weight(&e6);
        let t = centralizer_transfer(&e6, &w, 6).unwrap();
        assert_eq!(t.method, TransferMethod::Scalar);
        assert_eq!(t.matrix, scalar_transfer(6, 6));
    }

    #[test]
    fn a_series_symmetric_transfer() {
        // Λ with |Λ/Λ_R| = d has covolume dh = (n+1)/d; the last row of A_ell is
        // (n+1-j)(m - ell) off the diagonal and m = ell / gcd(ell, dh) on it.
        let n = 5;
        let a5 = rs(Family::A, n);
        for l in intermediate_lattices(&a5) {
            let dh = l.covolume().to_u64().unwrap();
            if dh == 1 || dh == 6 {
                continue;
            }
            for ell in [2u64, 3, 4, 6, 12] {
                let m = symmetric_smith_transfer(&a5, &l, ell).unwrap().unwrap();
                assert!(verify_transfer(&a5, &l, ell, &m).unwrap());
                let red = (ell / ell.gcd(&dh)) as i64;
                for i in 0..n {
                    for j in 0..n {
                        let expected = if i + 1 < n {
                            if i == j {
                                ell as i64
                            } else {
                                0
                            }
                        } else if j + 1 < n {
                            (n as i64 - j as i64) * (red - ell as i64)
                        } else {
                            red
                        };
                        assert_eq!(
                            m[(i, j)],
                            BigRational::from_integer(expected.into()),
                            "ell {ell} ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn lusztig() {
        let a1 = rs(Family::A, 1);
        let w = LatticeBasis::weight(&a1);
        let c = lusztig_kernel_match(&a1, &w, 4).unwrap();
        assert!(c.divisibility_condition && c.lattices_equal);
        for t in types_up_to_rank(4) {
            let r = build_root_system(t);
            for l in intermediate_lattices(&r) {
                for ell in 1..=16 {
                    let c = lusztig_kernel_match(&r, &l, ell).unwrap();
                    if ell % 2 == 1 {
                        assert!(!c.matches());
                    }
                    assert!(c.consistent(), "{t} {} {ell}", l.label);
                }
                let w = LatticeBasis::weight(&r);
                let all = r.d.iter().fold(1u64, |acc, &d| acc.lcm(&(2 * d as u64)));
                assert!(lusztig_kernel_match(&r, &w, all).unwrap().matches());
            }
        }
    }
}
