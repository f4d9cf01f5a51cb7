//! Bimultiplicative pairings of finite abelian groups with values in `Q/Z`.
//!
//! A value `e` stands for the root of unity `exp(2 pi i e)`; exponents are
//! always reduced into `[0, 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{
    congruence_lattice, lattice_intersection, quotient_group, solve_linear_congruences, FiniteAbelianGroup, IntMatrix,
    LatticeError,
};
use crate::lattice_theory::{CentralizerTransfer, LatticeBasis};
use crate::root_systems::{RootSystemData, RootSystemError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("pairing is not well defined on the quotient: {0}")]
    IllDefined(String),
    #[error("pairing is not perfect")]
    NotPerfect,
}

/// Representative of `x mod 1` in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingMatrix {
    pub left: FiniteAbelianGroup,
    pub right: FiniteAbelianGroup,
    /// `exponents[i][j]` is the value on (left generator `i`, right generator `j`).
    pub exponents: Vec<Vec<BigRational>>,
}

impl PairingMatrix {
    /// Tabulates `f` on the generator lifts of both groups.
    pub fn from_fn<F>(left: FiniteAbelianGroup, right: FiniteAbelianGroup, f: F) -> Result<Self, PairingError>
    where
        F: Fn(&[BigInt], &[BigInt]) -> Result<BigRational, PairingError>,
    {
        let lg = left.generators.columns();
        let rg = right.generators.columns();
        let mut exponents = Vec::with_capacity(lg.len());
        for u in &lg {
            let mut row = Vec::with_capacity(rg.len());
            for v in &rg {
                row.push(frac(&f(u, v)?));
            }
            exponents.push(row);
        }
        Ok(PairingMatrix { left, right, exponents })
    }

    pub fn trivial(left: FiniteAbelianGroup, right: FiniteAbelianGroup) -> Self {
        let exponents = vec![vec![BigRational::zero(); right.rank()]; left.rank()];
        PairingMatrix { left, right, exponents }
    }

    /// Value on canonical coordinate vectors.
    pub fn value(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    acc += &self.exponents[i][j] * BigRational::from_integer(xi * yj);
                }
            }
        }
        frac(&acc)
    }

    /// Value on lattice representatives of elements.
    pub fn value_on_vectors(&self, u: &[BigInt], v: &[BigInt]) -> Result<BigRational, PairingError> {
        let x = self.left.coordinates(u)?;
        let y = self.right.coordinates(v)?;
        Ok(self.value(&x, &y))
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().flatten().all(Zero::is_zero)
    }

    /// Each exponent is killed by the orders of both generators.
    pub fn is_compatible(&self) -> bool {
        self.exponents.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                let di = BigRational::from_integer(self.left.invariant_factors[i].clone());
                let dj = BigRational::from_integer(self.right.invariant_factors[j].clone());
                (e * di).is_integer() && (e * dj).is_integer()
            })
        })
    }

    pub fn transpose(&self) -> PairingMatrix {
        let exponents = (0..self.right.rank())
            .map(|j| (0..self.left.rank()).map(|i| self.exponents[i][j].clone()).collect())
            .collect();
        PairingMatrix {
            left: self.right.clone(),
            right: self.left.clone(),
            exponents,
        }
    }

    /// Least common denominator of all exponents.
    pub fn denominator(&self) -> BigInt {
        self.exponents
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }
}

/// All pairings `H1 x H2 -> Q/Z`: `e_ij` ranges over multiples of `1 / gcd(d_i, d'_j)`.
pub fn enumerate_pairings(h1: &FiniteAbelianGroup, h2: &FiniteAbelianGroup) -> Vec<PairingMatrix> {
    let m = h1.rank();
    let k = h2.rank();
    let gcds: Vec<BigInt> = (0..m * k)
        .map(|idx| h1.invariant_factors[idx / k].gcd(&h2.invariant_factors[idx % k]))
        .collect();
    let mut out = Vec::new();
    let mut digits = vec![BigInt::zero(); m * k];
    loop {
        let exponents = (0..m)
            .map(|i| {
                (0..k)
                    .map(|j| ratio(digits[i * k + j].clone(), gcds[i * k + j].clone()))
                    .collect()
            })
            .collect();
        out.push(PairingMatrix {
            left: h1.clone(),
            right: h2.clone(),
            exponents,
        });
        let mut pos = m * k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < gcds[pos] {
                break;
            }
            digits[pos] = BigInt::zero();
        }
    }
}

/// Coordinate lattice (in `Z^{rank(left)}`) of the left radical.
fn left_radical_coordinates(p: &PairingMatrix) -> IntMatrix {
    let m = p.left.rank();
    let k = p.right.rank();
    let n = p.denominator();
    let mut a = IntMatrix::zeros(k, m);
    for i in 0..m {
        for j in 0..k {
            let scaled = &p.exponents[i][j] * BigRational::from_integer(n.clone());
            a[(j, i)] = scaled.to_integer();
        }
    }
    congruence_lattice(&a, &vec![n; k])
}

pub fn left_radical(p: &PairingMatrix) -> FiniteAbelianGroup {
    p.left
        .subgroup_from_coordinates(&left_radical_coordinates(p))
        .expect("radical lies in the group")
}

pub fn right_radical(p: &PairingMatrix) -> FiniteAbelianGroup {
    left_radical(&p.transpose())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalReport {
    pub rad_left: FiniteAbelianGroup,
    pub rad_right: FiniteAbelianGroup,
    /// Trivial left radical.
    pub is_nondegenerate: bool,
    /// Both radicals trivial.
    pub is_perfect: bool,
}

pub fn radical(p: &PairingMatrix) -> RadicalReport {
    let rad_left = left_radical(p);
    let rad_right = right_radical(p);
    let is_nondegenerate = rad_left.is_trivial();
    let is_perfect = is_nondegenerate && rad_right.is_trivial();
    RadicalReport {
        rad_left,
        rad_right,
        is_nondegenerate,
        is_perfect,
    }
}

/// `(u, v) -> -(u, v) / ell + g(u mod Λ_R, v mod Λ_R)` on lattice vectors.
pub struct CartanForm<'a> {
    pub rs: &'a RootSystemData,
    pub ell: u64,
    pub g: &'a PairingMatrix,
}

impl CartanForm<'_> {
    pub fn exponent(&self, u: &[BigInt], v: &[BigInt]) -> Result<BigRational, PairingError> {
        let k = self.rs.killing_form(u, v)?;
        let g = self.g.value_on_vectors(u, v)?;
        Ok(frac(&(g - k / BigRational::from_integer(BigInt::from(self.ell)))))
    }
}

/// `H = L / Λ_R`.
pub fn root_quotient(rs: &RootSystemData, l: &LatticeBasis) -> Result<FiniteAbelianGroup, LatticeError> {
    quotient_group(&rs.root_lattice(), &l.basis)
}

fn require_vanishing(e: BigRational, what: &str) -> Result<(), PairingError> {
    if e.is_zero() {
        Ok(())
    } else {
        Err(PairingError::IllDefined(format!("{what} pairs to {e}")))
    }
}

/// `f_hat` on `G1 x G2` with `Gi = Li / Lp`.
pub fn f_hat(
    rs: &RootSystemData,
    l1: &LatticeBasis,
    l2: &LatticeBasis,
    lp: &LatticeBasis,
    g: &PairingMatrix,
    ell: u64,
) -> Result<PairingMatrix, PairingError> {
    let g1 = quotient_group(&lp.basis, &l1.basis)?;
    let g2 = quotient_group(&lp.basis, &l2.basis)?;
    let form = CartanForm { rs, ell, g };
    for w in lp.basis.columns() {
        for v in l2.basis.columns() {
            require_vanishing(form.exponent(&w, &v)?, "kernel against Λ2")?;
        }
        for u in l1.basis.columns() {
            require_vanishing(form.exponent(&u, &w)?, "Λ1 against kernel")?;
        }
    }
    let p = PairingMatrix::from_fn(g1, g2, |u, v| form.exponent(u, v))?;
    if !p.is_compatible() {
        return Err(PairingError::IllDefined(
            "exponent not killed by generator orders".into(),
        ));
    }
    Ok(p)
}

/// `a_g(x, y) = f_hat(x, A y)` on `H1 x H2`, with `A` a transfer map for `Λ2`.
pub fn a_g_ell(
    rs: &RootSystemData,
    g: &PairingMatrix,
    ell: u64,
    transfer: &CentralizerTransfer,
) -> Result<PairingMatrix, PairingError> {
    let form = CartanForm { rs, ell, g };
    let apply = |v: &[BigInt]| -> Result<Vec<BigInt>, PairingError> {
        let w = transfer.matrix.mul_int_vec(v);
        if w.iter().all(|x| x.is_integer()) {
            Ok(w.into_iter().map(|x| x.to_integer()).collect())
        } else {
            Err(PairingError::IllDefined("transfer map leaves the lattice".into()))
        }
    };
    let root_cols = rs.root_lattice().columns();
    for r in &root_cols {
        let ar = apply(r)?;
        for u in g.left.ambient_lattice().columns() {
            require_vanishing(form.exponent(&u, &ar)?, "Λ1 against A(Λ_R)")?;
        }
        for v in g.right.ambient_lattice().columns() {
            require_vanishing(form.exponent(r, &apply(&v)?)?, "Λ_R against A(Λ2)")?;
        }
    }
    let p = PairingMatrix::from_fn(g.left.clone(), g.right.clone(), |u, v| form.exponent(u, &apply(v)?))?;
    if !p.is_compatible() {
        return Err(PairingError::IllDefined(
            "exponent not killed by generator orders".into(),
        ));
    }
    Ok(p)
}

/// `Sym(p)((m1, m2), (n1, n2)) = p(m1, n2) + p(n1, m2)` on `(G1 x G2)^2`.
pub fn sym_pairing(p: &PairingMatrix) -> Result<PairingMatrix, PairingError> {
    let product = p.left.direct_product(&p.right);
    let split = p.left.ambient_dim();
    PairingMatrix::from_fn(product.clone(), product, |u, v| {
        Ok(p.value_on_vectors(&u[..split], &v[split..])? + p.value_on_vectors(&v[..split], &u[split..])?)
    })
}

/// `G1 ∩ G2` inside `Λ / Λ'`.
pub fn intersection_group(fh: &PairingMatrix) -> Result<FiniteAbelianGroup, PairingError> {
    let meet = lattice_intersection(fh.left.ambient_lattice(), fh.right.ambient_lattice())?;
    Ok(quotient_group(fh.left.relation_lattice(), &meet)?)
}

/// `Rad_0`: elements `x` of `G1 ∩ G2` with `f_hat(x, y) + f_hat(y, x) = 0` for all `y` in `G1 ∩ G2`.
pub fn rad0(fh: &PairingMatrix) -> Result<FiniteAbelianGroup, PairingError> {
    let meet = intersection_group(fh)?;
    let s = PairingMatrix::from_fn(meet.clone(), meet, |u, v| {
        Ok(fh.value_on_vectors(u, v)? + fh.value_on_vectors(v, u)?)
    })?;
    Ok(left_radical(&s))
}

/// Characters of `G = Λ / Λ'`, written as `c` with `chi_c(x) = sum_i c_i x_i / d_i`.
pub fn character_value(g: &FiniteAbelianGroup, c: &[BigInt], v: &[BigInt]) -> Result<BigRational, LatticeError> {
    let x = g.coordinates(v)?;
    let mut acc = BigRational::zero();
    for ((ci, xi), d) in c.iter().zip(&x).zip(&g.invariant_factors) {
        acc += ratio(ci * xi, d.clone());
    }
    Ok(frac(&acc))
}

/// The transparent characters of `G` for a perfect `f_hat`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransparentGroup {
    /// The character group of `G`, realised as `Z^r / Diag(d)`.
    pub dual: FiniteAbelianGroup,
    /// Subgroup of `dual`.
    pub group: FiniteAbelianGroup,
    /// For each basis character `chi_i`, the element `mu_i` of `Λ1` with `f_hat(mu_i, -) = -chi_i` on `G2`.
    pub preimages: Vec<Vec<BigInt>>,
}

impl TransparentGroup {
    /// `mu_chi` for a character given in dual coordinates.
    pub fn preimage(&self, c: &[BigInt]) -> Vec<BigInt> {
        let dim = self.preimages.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); dim];
        for (ci, mu) in c.iter().zip(&self.preimages) {
            for (o, m) in out.iter_mut().zip(mu) {
                *o += ci * m;
            }
        }
        out
    }
}

/// Radical of `B(chi, psi) = chi(mu_psi) + psi(mu_chi)` on the character group of `G`.
///
/// The double braiding of the one-dimensional modules `chi`, `psi` over the
/// group algebra of `G` with `R_0` supported on `G1 x G2` is `exp(2 pi i B)`.
pub fn transparent_group(fh: &PairingMatrix, g: &FiniteAbelianGroup) -> Result<TransparentGroup, PairingError> {
    let g1 = &fh.left;
    let g2 = &fh.right;
    let r = g.rank();
    let v_gens = g2.generators.columns();
    let den_f = fh.denominator();
    let mut preimages = Vec::with_capacity(r);
    for i in 0..r {
        let mut basis = vec![BigInt::zero(); r];
        basis[i] = BigInt::one();
        let targets: Vec<BigRational> = v_gens
            .iter()
            .map(|v| Ok(frac(&-character_value(g, &basis, v)?)))
            .collect::<Result<_, LatticeError>>()?;
        let n = targets.iter().fold(den_f.clone(), |acc, t| acc.lcm(t.denom()));
        let nr = BigRational::from_integer(n.clone());
        let mut a = IntMatrix::zeros(v_gens.len(), g1.rank());
        for j in 0..v_gens.len() {
            for k in 0..g1.rank() {
                a[(j, k)] = (&fh.exponents[k][j] * &nr).to_integer();
            }
        }
        let b: Vec<BigInt> = targets.iter().map(|t| (t * &nr).to_integer()).collect();
        let x = solve_linear_congruences(&a, &b, &vec![n; v_gens.len()]).ok_or(PairingError::NotPerfect)?;
        preimages.push(g1.lift(&x));
    }
    let mut b = vec![vec![BigRational::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut ei = vec![BigInt::zero(); r];
            ei[i] = BigInt::one();
            let mut ej = vec![BigInt::zero(); r];
            ej[j] = BigInt::one();
            b[i][j] = frac(&(character_value(g, &ei, &preimages[j])? + character_value(g, &ej, &preimages[i])?));
        }
    }
    let dual = FiniteAbelianGroup::from_invariant_factors(&g.invariant_factors);
    let form = PairingMatrix::from_fn(dual.clone(), dual.clone(), |c1, c2| {
        let mut acc = BigRational::zero();
        for i in 0..r {
            for j in 0..r {
                acc += &b[i][j] * BigRational::from_integer(&c1[i] * &c2[j]);
            }
        }
        Ok(acc)
    })?;
    let group = left_radical(&form);
    Ok(TransparentGroup { dual, group, preimages })
}

/// Number of pairings `H1 x H2 -> Q/Z`.
pub fn pairing_count(h1: &FiniteAbelianGroup, h2: &FiniteAbelianGroup) -> u64 {
    h1.invariant_factors
        .iter()
        .flat_map(|a| h2.invariant_factors.iter().map(move |b| a.gcd(b)))
        .product::<BigInt>()
        .to_u64()
        .expect("pairing count fits")
}
