//! Brute-force verification: the R_0 equations, the monodromy matrix and transparent characters,
//! all evaluated directly from `f` in exact cyclotomic arithmetic.

mod cyclotomic;
mod verify;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, CyclotomicField};
pub use verify::{verify_enumeration, Check, Disagreement, Verification};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::Candidate;
use crate::exact::{lattice_coordinates, lattice_index, quotient_group, FiniteAbelianGroup, LatticeError};
use crate::lattice_theory::{lambda_prime, LatticeBasis, LatticeTheoryError};
use crate::pairings::{enumerate_pairings, frac, PairingError, PairingMatrix};
use crate::root_systems::{RootSystemData, RootSystemError};

/// Default bound on `|Λ / Λ'|` for enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 64;
/// Largest group for which the monodromy matrix is decided by exact elimination.
pub const EXACT_MONODROMY_LIMIT: usize = 64;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("|Λ/Λ'| = {order} exceeds the bound {bound}")]
    BoundExceeded { order: BigInt, bound: u64 },
    #[error("subgroups G1, G2 have different orders")]
    UnequalSupports,
    #[error("kernels of Λ1 and Λ2 differ")]
    Inadmissible,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    LatticeTheory(#[from] LatticeTheoryError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
}

/// `f(mu, nu) = q^{-(mu, nu)} g(mu, nu) / |G1|` on `G1 x G2`, zero elsewhere, tabulated on `G = Λ / Λ'`.
///
/// Values are stored as exponents `k` of `zeta_M^k`; the common prefactor is `1 / |G1|`.
#[derive(Clone, Debug)]
pub struct FMatrix {
    pub group: FiniteAbelianGroup,
    /// Cyclotomic order `M` holding every value, translation factor and character.
    pub order: usize,
    pub support1: Vec<bool>,
    pub support2: Vec<bool>,
    /// `|G1| = |G2| = d |Λ_R / Λ'|`.
    pub support_order: u64,
    exps: Vec<Option<u32>>,
    coords: Vec<Vec<u64>>,
    factors: Vec<u64>,
    add: Vec<u32>,
    neg: Vec<u32>,
    /// Per simple root `alpha`: the class of `mu + alpha` for each `mu`.
    shift: Vec<Vec<u32>>,
    /// Per simple root `alpha`: the exponent of `q^{-(nu, alpha)}` for each `nu`.
    shift_phase: Vec<Vec<u32>>,
}

impl FMatrix {
    /// Tabulates `f` for a candidate; `max_order` bounds `|Λ / Λ'|`.
    pub fn from_candidate(rs: &RootSystemData, c: &Candidate, max_order: u64) -> Result<Self, OracleError> {
        Self::build(
            rs,
            c.ell,
            &c.lattice,
            &c.lattice1,
            &c.lattice2,
            &c.kernel,
            &c.g,
            max_order,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        rs: &RootSystemData,
        ell: u64,
        lattice: &LatticeBasis,
        l1: &LatticeBasis,
        l2: &LatticeBasis,
        kernel: &LatticeBasis,
        g: &PairingMatrix,
        max_order: u64,
    ) -> Result<Self, OracleError> {
        let group = quotient_group(&kernel.basis, &lattice.basis)?;
        let order = group.order();
        if order > BigInt::from(max_order) {
            return Err(OracleError::BoundExceeded {
                order,
                bound: max_order,
            });
        }
        let n = order.to_usize().expect("bounded");
        let factors = group.invariant_factors_u64();
        let elements = group.elements();
        let lifts: Vec<Vec<BigInt>> = elements.iter().map(|x| group.lift(x)).collect();
        let coords: Vec<Vec<u64>> = elements
            .iter()
            .map(|x| x.iter().map(|v| v.to_u64().expect("small")).collect())
            .collect();
        let index_of = |c: &[u64]| -> usize {
            c.iter()
                .zip(&factors)
                .fold(0, |acc, (x, d)| acc * *d as usize + *x as usize)
        };

        let support1: Vec<bool> = lifts
            .iter()
            .map(|v| lattice_coordinates(&l1.basis, v).map(|c| c.is_some()))
            .collect::<Result<_, _>>()?;
        let support2: Vec<bool> = lifts
            .iter()
            .map(|v| lattice_coordinates(&l2.basis, v).map(|c| c.is_some()))
            .collect::<Result<_, _>>()?;
        let n1 = support1.iter().filter(|&&b| b).count() as u64;
        let n2 = support2.iter().filter(|&&b| b).count() as u64;
        if n1 != n2 {
            return Err(OracleError::UnequalSupports);
        }
        let root_index = lattice_index(&kernel.basis, &rs.root_lattice())?;
        let d = lattice_index(&rs.root_lattice(), &l1.basis)?;
        debug_assert_eq!(BigInt::from(n1), d * root_index);

        let ell_r = BigRational::from_integer(BigInt::from(ell));
        let mut values = vec![None; n * n];
        for i in (0..n).filter(|&i| support1[i]) {
            for j in (0..n).filter(|&j| support2[j]) {
                let k = rs.killing_form(&lifts[i], &lifts[j])?;
                let gv = g.value_on_vectors(&lifts[i], &lifts[j])?;
                values[i * n + j] = Some(frac(&(gv - k / &ell_r)));
            }
        }
        let mut m = BigInt::from(ell).lcm(&group.exponent());
        for v in values.iter().flatten() {
            m = m.lcm(v.denom());
        }
        let m_usize = m.to_usize().expect("small cyclotomic order");
        let to_exp = |x: &BigRational| -> u32 {
            let k = x * BigRational::from_integer(m.clone());
            debug_assert!(k.is_integer());
            k.to_integer().mod_floor(&m).to_u32().expect("small")
        };
        let exps: Vec<Option<u32>> = values.iter().map(|v| v.as_ref().map(to_exp)).collect();

        let mut add = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for i in 0..n {
            let c: Vec<u64> = coords[i].iter().zip(&factors).map(|(x, d)| (d - x) % d).collect();
            neg[i] = index_of(&c) as u32;
            for j in 0..n {
                let c: Vec<u64> = coords[i]
                    .iter()
                    .zip(&coords[j])
                    .zip(&factors)
                    .map(|((x, y), d)| (x + y) % d)
                    .collect();
                add[i * n + j] = index_of(&c) as u32;
            }
        }

        let mut shift = Vec::with_capacity(rs.rank());
        let mut shift_phase = Vec::with_capacity(rs.rank());
        for a in 0..rs.rank() {
            let alpha = rs.simple_root(a);
            let mut s = Vec::with_capacity(n);
            let mut p = Vec::with_capacity(n);
            for lift in &lifts {
                let moved: Vec<BigInt> = lift.iter().zip(&alpha).map(|(x, y)| x + y).collect();
                let c: Vec<u64> = group
                    .coordinates(&moved)?
                    .iter()
                    .map(|v| v.to_u64().expect("small"))
                    .collect();
                s.push(index_of(&c) as u32);
                p.push(to_exp(&frac(&(-rs.killing_form(lift, &alpha)? / &ell_r))));
            }
            shift.push(s);
            shift_phase.push(p);
        }

        Ok(FMatrix {
            group,
            order: m_usize,
            support1,
            support2,
            support_order: n1,
            exps,
            coords,
            factors,
            add,
            neg,
            shift,
            shift_phase,
        })
    }

    /// Number of elements of `G`.
    pub fn size(&self) -> usize {
        self.neg.len()
    }

    /// `|G1| f(mu, nu)` as an exponent of `zeta_M`, by element index.
    pub fn exponent(&self, mu: usize, nu: usize) -> Option<u32> {
        self.exps[mu * self.size() + nu]
    }

    /// `f(mu, nu)` by element index.
    pub fn value(&self, mu: usize, nu: usize) -> Cyclotomic {
        match self.exponent(mu, nu) {
            Some(k) => Cyclotomic::root(self.order, k as i64).scale(&self.prefactor()),
            None => Cyclotomic::zero(self.order),
        }
    }

    /// `1 / |G1|`.
    pub fn prefactor(&self) -> BigRational {
        BigRational::new(1.into(), BigInt::from(self.support_order))
    }

    /// Canonical coordinates of the element with the given index.
    pub fn element(&self, i: usize) -> &[u64] {
        &self.coords[i]
    }

    pub fn index_of(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (x, d)| acc * *d as usize + (*x % *d) as usize)
    }

    fn sum(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size() + b] as usize
    }

    fn diff(&self, a: usize, b: usize) -> usize {
        self.sum(a, self.neg[b] as usize)
    }

    fn g1(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.support1[i]).collect()
    }

    fn g2(&self) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.support2[i]).collect()
    }

    /// Exponent of `chi_c(x) = exp(2 pi i sum_i c_i x_i / d_i)` in units of `1 / M`.
    fn character_exponent(&self, c: &[u64], x: usize) -> u32 {
        let m = self.order as u64;
        let mut acc = 0u64;
        for ((ci, xi), d) in c.iter().zip(&self.coords[x]).zip(&self.factors) {
            acc = (acc + ci * xi % d * (m / d)) % m;
        }
        acc as u32
    }
}

/// Outcome of each family of R_0 equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct R0Equations {
    /// `f(mu + alpha, nu) = q^{-(nu, alpha)} f(mu, nu)`.
    pub translation_left: bool,
    /// `f(mu, nu + alpha) = q^{-(mu, alpha)} f(mu, nu)`.
    pub translation_right: bool,
    /// `sum_{nu1 + nu2 = nu} f(mu1, nu1) f(mu2, nu2) = delta_{mu1, mu2} f(mu1, nu)`.
    pub convolution_left: bool,
    /// `sum_{mu1 + mu2 = mu} f(mu1, nu1) f(mu2, nu2) = delta_{nu1, nu2} f(mu, nu1)`.
    pub convolution_right: bool,
    /// `sum_mu f(mu, nu) = delta_{nu, 0}`.
    pub sum_left: bool,
    /// `sum_nu f(mu, nu) = delta_{mu, 0}`.
    pub sum_right: bool,
}

impl R0Equations {
    pub fn all(&self) -> bool {
        self.translation_left
            && self.translation_right
            && self.convolution_left
            && self.convolution_right
            && self.sum_left
            && self.sum_right
    }
}

/// Evaluates every family of R_0 equations exactly.
pub fn check_r0_equations(f: &FMatrix) -> R0Equations {
    let field = CyclotomicField::new(f.order);
    let m = f.order as u32;
    let g1 = f.g1();
    let g2 = f.g2();
    let scale = f.support_order as i64;

    let translation = |left: bool| {
        (0..f.shift.len()).all(|a| {
            g1.iter().all(|&mu| {
                g2.iter().all(|&nu| {
                    let (moved, phase) = if left {
                        (f.exponent(f.shift[a][mu] as usize, nu), f.shift_phase[a][nu])
                    } else {
                        (f.exponent(mu, f.shift[a][nu] as usize), f.shift_phase[a][mu])
                    };
                    match (moved, f.exponent(mu, nu)) {
                        (Some(x), Some(y)) => x == (y + phase) % m,
                        (None, None) => true,
                        _ => false,
                    }
                })
            })
        })
    };

    let mut counts = vec![0i64; f.order];
    let mut convolution = |outer: &[usize], inner: &[usize], left: bool| {
        for &a1 in outer {
            for &a2 in outer {
                for &b in inner {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for &b1 in inner {
                        let b2 = f.diff(b, b1);
                        let (x, y) = if left {
                            (f.exponent(a1, b1), f.exponent(a2, b2))
                        } else {
                            (f.exponent(b1, a1), f.exponent(b2, a2))
                        };
                        if let (Some(x), Some(y)) = (x, y) {
                            counts[add_mod(x, y, m)] += 1;
                        }
                    }
                    if a1 == a2 {
                        let rhs = if left { f.exponent(a1, b) } else { f.exponent(b, a1) };
                        if let Some(k) = rhs {
                            counts[k as usize] -= scale;
                        }
                    }
                    if !field.counts_vanish(&counts) {
                        return false;
                    }
                }
            }
        }
        true
    };
    let convolution_left = convolution(&g1, &g2, true);
    let convolution_right = convolution(&g2, &g1, false);

    let zero = f.index_of(&vec![0; f.factors.len()]);
    let total = |outer: &[usize], inner: &[usize], left: bool| {
        outer.iter().all(|&b| {
            let mut counts = vec![0i64; f.order];
            for &a in inner {
                let e = if left { f.exponent(a, b) } else { f.exponent(b, a) };
                if let Some(k) = e {
                    counts[k as usize] += 1;
                }
            }
            if b == zero {
                counts[0] -= scale;
            }
            field.counts_vanish(&counts)
        })
    };

    R0Equations {
        translation_left: translation(true),
        translation_right: translation(false),
        convolution_left,
        convolution_right,
        sum_left: total(&g2, &g1, true),
        sum_right: total(&g1, &g2, false),
    }
}

/// Whether `f` solves every R_0 equation.
pub fn verify_r0_equations(f: &FMatrix) -> bool {
    check_r0_equations(f).all()
}

/// All `g` on `H1 x H2` whose `f` solves the R_0 equations.
pub fn oracle_enumerate(
    rs: &RootSystemData,
    ell: u64,
    lattice: &LatticeBasis,
    l1: &LatticeBasis,
    l2: &LatticeBasis,
    max_order: u64,
) -> Result<Vec<PairingMatrix>, OracleError> {
    let kernel = match lambda_prime(rs, l1, l2, ell) {
        Err(LatticeTheoryError::KernelMismatch) => return Err(OracleError::Inadmissible),
        other => other?,
    };
    let h1 = quotient_group(&rs.root_lattice(), &l1.basis)?;
    let h2 = quotient_group(&rs.root_lattice(), &l2.basis)?;
    let mut out = Vec::new();
    for g in enumerate_pairings(&h1, &h2) {
        let f = FMatrix::build(rs, ell, lattice, l1, l2, &kernel, &g, max_order)?;
        if verify_r0_equations(&f) {
            out.push(g);
        }
    }
    Ok(out)
}

/// `m_{mu, nu} = sum_{mu', nu'} f(mu - mu', nu - nu') f(nu', mu')`.
pub fn monodromy_matrix(f: &FMatrix) -> Vec<Vec<Cyclotomic>> {
    let n = f.size();
    let m = f.order as u32;
    let scale = f.prefactor() * f.prefactor();
    let mut out = Vec::with_capacity(n);
    // Terms vanish unless mu' lies in G2 and nu' in G1, with mu - mu' in G1 and nu - nu' in G2.
    let lefts: Vec<Vec<usize>> = (0..n)
        .map(|mu| (0..n).filter(|&p| f.support2[p] && f.support1[f.diff(mu, p)]).collect())
        .collect();
    let rights: Vec<Vec<usize>> = (0..n)
        .map(|nu| (0..n).filter(|&p| f.support1[p] && f.support2[f.diff(nu, p)]).collect())
        .collect();
    let mut counts = vec![0i64; f.order];
    for mu in 0..n {
        let mut row = Vec::with_capacity(n);
        for nu in 0..n {
            counts.iter_mut().for_each(|c| *c = 0);
            for &mu_p in &lefts[mu] {
                for &nu_p in &rights[nu] {
                    let x = f.exponent(f.diff(mu, mu_p), f.diff(nu, nu_p));
                    let y = f.exponent(nu_p, mu_p);
                    if let (Some(x), Some(y)) = (x, y) {
                        counts[add_mod(x, y, m)] += 1;
                    }
                }
            }
            row.push(Cyclotomic::from_counts(&counts, &scale));
        }
        out.push(row);
    }
    out
}

/// How invertibility of the monodromy matrix was decided.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MonodromyMethod {
    Exact,
    /// Partial-pivoting elimination in floating point; `condition` is the ratio of extreme pivots.
    Floating {
        condition: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyVerdict {
    pub size: usize,
    pub rank: usize,
    pub invertible: bool,
    pub method: MonodromyMethod,
}

const FLOAT_TOLERANCE: f64 = 1e-9;

/// Decides invertibility of `m`; exact up to [`EXACT_MONODROMY_LIMIT`], floating beyond.
///
/// A floating verdict whose smallest pivot falls within three orders of magnitude of the
/// tolerance is recomputed exactly.
pub fn monodromy_invertibility(f: &FMatrix, m: &[Vec<Cyclotomic>]) -> MonodromyVerdict {
    let size = m.len();
    if size <= EXACT_MONODROMY_LIMIT {
        return exact_verdict(f, m);
    }
    let (rank, smallest, largest) = floating_rank(m);
    let boundary = smallest > FLOAT_TOLERANCE * largest && smallest < 1e3 * FLOAT_TOLERANCE * largest;
    if boundary {
        return exact_verdict(f, m);
    }
    MonodromyVerdict {
        size,
        rank,
        invertible: rank == size,
        method: MonodromyMethod::Floating {
            condition: if smallest > 0.0 {
                largest / smallest
            } else {
                f64::INFINITY
            },
        },
    }
}

fn exact_verdict(f: &FMatrix, m: &[Vec<Cyclotomic>]) -> MonodromyVerdict {
    let rank = CyclotomicField::new(f.order).rank(m);
    MonodromyVerdict {
        size: m.len(),
        rank,
        invertible: rank == m.len(),
        method: MonodromyMethod::Exact,
    }
}

/// Rank by complex elimination with partial pivoting; also returns the extreme accepted pivots.
fn floating_rank(m: &[Vec<Cyclotomic>]) -> (usize, f64, f64) {
    let mut a: Vec<Vec<(f64, f64)>> = m
        .iter()
        .map(|r| r.iter().map(Cyclotomic::to_complex).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let abs = |z: (f64, f64)| z.0.hypot(z.1);
    let scale = a.iter().flatten().map(|&z| abs(z)).fold(0.0, f64::max);
    let mut rank = 0;
    let (mut smallest, mut largest) = (f64::INFINITY, 0.0f64);
    for col in 0..n_cols {
        let Some(p) = (rank..n_rows).max_by(|&x, &y| abs(a[x][col]).total_cmp(&abs(a[y][col]))) else {
            break;
        };
        let piv = a[p][col];
        if abs(piv) <= FLOAT_TOLERANCE * scale.max(1.0) {
            continue;
        }
        smallest = smallest.min(abs(piv));
        largest = largest.max(abs(piv));
        a.swap(rank, p);
        let den = piv.0 * piv.0 + piv.1 * piv.1;
        for r in rank + 1..n_rows {
            let x = a[r][col];
            let factor = ((x.0 * piv.0 + x.1 * piv.1) / den, (x.1 * piv.0 - x.0 * piv.1) / den);
            for c in col..n_cols {
                let y = a[rank][c];
                a[r][c].0 -= factor.0 * y.0 - factor.1 * y.1;
                a[r][c].1 -= factor.0 * y.1 + factor.1 * y.0;
            }
        }
        rank += 1;
    }
    (rank, if rank == 0 { 0.0 } else { smallest }, largest)
}

fn add_mod(x: u32, y: u32, m: u32) -> usize {
    let s = x + y;
    (if s >= m { s - m } else { s }) as usize
}

/// `Rad_0` by brute force: `x` in `G1 ∩ G2` with `f(x, y) f(y, x) = 1` for all `y` in `G1 ∩ G2`.
pub fn rad0_bruteforce(f: &FMatrix) -> Vec<usize> {
    let m = f.order as u32;
    let meet: Vec<usize> = (0..f.size()).filter(|&i| f.support1[i] && f.support2[i]).collect();
    meet.iter()
        .copied()
        .filter(|&x| {
            meet.iter().all(|&y| {
                let a = f.exponent(x, y).expect("in support");
                let b = f.exponent(y, x).expect("in support");
                (a + b).is_multiple_of(m)
            })
        })
        .collect()
}

/// `Sym_G(f_hat)(mu, nu)` by brute force, when `Rad_0 = 0`.
///
/// For each `mu` the unique fibre element `(mu1, mu2)` with `mu1 + mu2 = mu`, orthogonal to the
/// zero fibre, is located by search; `None` if some fibre has no such element or more than one.
pub fn sym_g_bruteforce(f: &FMatrix) -> Option<Vec<Vec<Cyclotomic>>> {
    let n = f.size();
    let m = f.order as u32;
    let meet: Vec<usize> = (0..n).filter(|&i| f.support1[i] && f.support2[i]).collect();
    let sym = |a: (usize, usize), b: (usize, usize)| -> u32 {
        (f.exponent(a.0, b.1).expect("in support") + f.exponent(b.0, a.1).expect("in support")) % m
    };
    let mut rep = Vec::with_capacity(n);
    for mu in 0..n {
        let found: Vec<(usize, usize)> = f
            .g1()
            .into_iter()
            .filter_map(|mu1| {
                let mu2 = f.diff(mu, mu1);
                f.support2[mu2].then_some((mu1, mu2))
            })
            .filter(|&pair| meet.iter().all(|&eta| sym(pair, (eta, f.neg[eta] as usize)) == 0))
            .collect();
        if found.len() != 1 {
            return None;
        }
        rep.push(found[0]);
    }
    Some(
        (0..n)
            .map(|mu| {
                (0..n)
                    .map(|nu| Cyclotomic::root(f.order, sym(rep[mu], rep[nu]) as i64))
                    .collect()
            })
            .collect(),
    )
}

/// Compares `m` with `(|G1 ∩ G2| / |G1|^2) Sym_G(f_hat)` entrywise.
pub fn monodromy_matches_sym(f: &FMatrix, m: &[Vec<Cyclotomic>]) -> bool {
    let Some(sym) = sym_g_bruteforce(f) else {
        return false;
    };
    let meet = (0..f.size()).filter(|&i| f.support1[i] && f.support2[i]).count();
    let scale = BigRational::new(BigInt::from(meet), BigInt::from(f.support_order * f.support_order));
    m.iter()
        .zip(&sym)
        .all(|(row, srow)| row.iter().zip(srow).all(|(x, s)| *x == s.scale(&scale)))
}

/// All characters of `G` whose double braiding with every character is trivial.
///
/// Characters are coordinate vectors `c` with `chi_c(x) = exp(2 pi i sum_i c_i x_i / d_i)`,
/// in the invariant-factor coordinates of `Λ / Λ'`, sorted.
pub fn transparent_bruteforce(f: &FMatrix) -> Vec<Vec<BigInt>> {
    let n = f.size();
    let m = f.order as u32;
    let field = CyclotomicField::new(f.order);
    let chars: Vec<Vec<u64>> = (0..n).map(|i| f.coords[i].clone()).collect();
    let chi: Vec<Vec<u32>> = chars
        .iter()
        .map(|c| (0..n).map(|x| f.character_exponent(c, x)).collect())
        .collect();
    let g1 = f.g1();
    let g2 = f.g2();
    // t[a][nu] = sum_{mu in G1} f(mu, nu) chi_a(mu), then s[a][b] = sum_{nu in G2} t[a][nu] chi_b(nu).
    let mut s = vec![vec![vec![0i64; f.order]; n]; n];
    let mut t = vec![vec![0i64; f.order]; g2.len()];
    for a in 0..n {
        for (row, &nu) in t.iter_mut().zip(&g2) {
            row.iter_mut().for_each(|c| *c = 0);
            for &mu in &g1 {
                let k = f.exponent(mu, nu).expect("in support");
                row[add_mod(k, chi[a][mu], m)] += 1;
            }
        }
        for b in 0..n {
            let counts = &mut s[a][b];
            for (row, &nu) in t.iter().zip(&g2) {
                let shift = chi[b][nu] as usize;
                for (k, &x) in row.iter().enumerate().filter(|(_, x)| **x != 0) {
                    let j = k + shift;
                    counts[if j >= f.order { j - f.order } else { j }] += x;
                }
            }
        }
    }
    let target = (f.support_order * f.support_order) as i64;
    let mut out = Vec::new();
    for a in 0..n {
        let transparent = (0..n).all(|b| {
            let mut prod = vec![0i64; f.order];
            for (i, x) in s[a][b].iter().enumerate().filter(|(_, x)| **x != 0) {
                for (j, y) in s[b][a].iter().enumerate().filter(|(_, y)| **y != 0) {
                    prod[(i + j) % f.order] += x * y;
                }
            }
            prod[0] -= target;
            field.counts_vanish(&prod)
        });
        if transparent {
            out.push(chars[a].iter().map(|&v| BigInt::from(v)).collect());
        }
    }
    out.sort();
    out
}

/// Characters `chi` with `chi = f_hat(-, xi)` on `G1` and `chi = f_hat(xi, -)^{-1}` on `G2` for some `xi` in `Rad_0`.
pub fn transparent_from_rad0(f: &FMatrix) -> Vec<Vec<BigInt>> {
    let n = f.size();
    let m = f.order as u32;
    let rad = rad0_bruteforce(f);
    let g1 = f.g1();
    let g2 = f.g2();
    let mut out = Vec::new();
    for a in 0..n {
        let c = &f.coords[a];
        let hit = rad.iter().any(|&xi| {
            g1.iter()
                .all(|&mu| f.character_exponent(c, mu) == f.exponent(mu, xi).expect("in support"))
                && g2.iter().all(|&nu| {
                    (f.character_exponent(c, nu) + f.exponent(xi, nu).expect("in support")).is_multiple_of(m)
                })
        });
        if hit {
            out.push(c.iter().map(|&v| BigInt::from(v)).collect());
        }
    }
    out.sort();
    out
}

/// Oracle verdicts for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub group_order: u64,
    pub equations: R0Equations,
    pub monodromy: Option<MonodromyVerdict>,
    pub monodromy_matches_sym: Option<bool>,
    pub rad0_order: Option<usize>,
    pub transparent: Option<Vec<Vec<BigInt>>>,
    pub transparent_closed_form: Option<Vec<Vec<BigInt>>>,
}

/// Runs every oracle check on a candidate; the monodromy and transparent checks need a solution
/// and `|G| <= max_monodromy`.
pub fn run_oracle(
    rs: &RootSystemData,
    c: &Candidate,
    max_order: u64,
    max_monodromy: u64,
) -> Result<OracleReport, OracleError> {
    let f = FMatrix::from_candidate(rs, c, max_order)?;
    let equations = check_r0_equations(&f);
    let mut report = OracleReport {
        group_order: f.size() as u64,
        equations,
        monodromy: None,
        monodromy_matches_sym: None,
        rad0_order: None,
        transparent: None,
        transparent_closed_form: None,
    };
    if equations.all() && f.size() as u64 <= max_monodromy {
        let m = monodromy_matrix(&f);
        let verdict = monodromy_invertibility(&f, &m);
        if verdict.invertible {
            report.monodromy_matches_sym = Some(monodromy_matches_sym(&f, &m));
        }
        report.monodromy = Some(verdict);
        report.rad0_order = Some(rad0_bruteforce(&f).len());
        report.transparent = Some(transparent_bruteforce(&f));
        report.transparent_closed_form = Some(transparent_from_rad0(&f));
    }
    Ok(report)
}

/// `|Λ / Λ'|` for a candidate, without building `f`.
pub fn group_order(c: &Candidate) -> Result<BigInt, OracleError> {
    Ok(lattice_index(&c.kernel.basis, &c.lattice.basis)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{classify, Candidate};
    use crate::lattice_theory::LatticeBasis;
    use crate::pairings::enumerate_pairings;
    use crate::root_systems::build_root_system;

    fn rs(t: &str) -> RootSystemData {
        build_root_system(t.parse().unwrap())
    }

    fn candidates(rs: &RootSystemData, ell: u64, weight: bool) -> Vec<Candidate> {
        let l = if weight {
            LatticeBasis::weight(rs)
        } else {
            LatticeBasis::root(rs)
        };
        let h = quotient_group(&rs.root_lattice(), &l.basis).unwrap();
        enumerate_pairings(&h, &h)
            .into_iter()
            .map(|g| Candidate::new(rs, ell, l.clone(), l.clone(), l.clone(), g).unwrap())
            .collect()
    }

    fn fmatrix(rs: &RootSystemData, c: &Candidate) -> FMatrix {
        FMatrix::from_candidate(rs, c, 4096).unwrap()
    }

    #[test]
    fn trivial_candidate_solves_the_equations() {
        for t in ["A1", "A2", "B2", "G2"] {
            let r = rs(t);
            let c = &candidates(&r, 3, false)[0];
            assert!(verify_r0_equations(&fmatrix(&r, c)), "{t}");
        }
    }

    #[test]
    fn b2_weight_lattice_at_four_has_two_solutions() {
        let r = rs("B2");
        let cs = candidates(&r, 4, true);
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| verify_r0_equations(&fmatrix(&r, c))));
    }

    #[test]
    fn a2_weight_lattice_gcd_predicate() {
        let r = rs("A2");
        // At ell = 3 every k passes; at ell = 4 the pairing with k = 2 fails.
        assert!(candidates(&r, 3, true)
            .iter()
            .all(|c| verify_r0_equations(&fmatrix(&r, c))));
        let verdicts: Vec<bool> = candidates(&r, 4, true)
            .iter()
            .map(|c| verify_r0_equations(&fmatrix(&r, c)))
            .collect();
        assert_eq!(verdicts, vec![true, true, false]);
    }

    #[test]
    fn oracle_enumeration_examples() {
        let a1 = rs("A1");
        let w = LatticeBasis::weight(&a1);
        assert_eq!(oracle_enumerate(&a1, 6, &w, &w, &w, 64).unwrap().len(), 2);

        let g2 = rs("G2");
        let root = LatticeBasis::root(&g2);
        assert_eq!(oracle_enumerate(&g2, 4, &root, &root, &root, 64).unwrap().len(), 1);

        let b2 = rs("B2");
        let w = LatticeBasis::weight(&b2);
        let sols = oracle_enumerate(&b2, 5, &w, &w, &w, 64).unwrap();
        assert_eq!(sols.len(), 1);
        let lam2 = b2.fundamental_weight(1);
        assert_eq!(
            sols[0].value_on_vectors(&lam2, &lam2).unwrap(),
            frac(&BigRational::new(1.into(), 2.into()))
        );

        let e8 = rs("E8");
        let root = LatticeBasis::root(&e8);
        assert!(matches!(
            oracle_enumerate(&e8, 3, &root, &root, &root, 64),
            Err(OracleError::BoundExceeded { .. })
        ));
    }

    fn monodromy_invertible(t: &str, ell: u64) -> bool {
        let r = rs(t);
        let c = &candidates(&r, ell, false)[0];
        let f = fmatrix(&r, c);
        let m = monodromy_matrix(&f);
        monodromy_invertibility(&f, &m).invertible
    }

    #[test]
    fn monodromy_examples() {
        let r = rs("A1");
        let f = fmatrix(&r, &candidates(&r, 2, false)[0]);
        assert_eq!(f.size(), 1);
        assert!(monodromy_invertible("A1", 2));
        assert!(monodromy_invertible("A1", 3));
        assert!(!monodromy_invertible("A1", 4));
        let f = fmatrix(&r, &candidates(&r, 3, false)[0]);
        let m = monodromy_matrix(&f);
        assert!(monodromy_matches_sym(&f, &m));
    }

    #[test]
    fn floating_rank_agrees_with_exact() {
        for (t, ell) in [("A1", 3), ("A1", 4), ("A2", 4), ("B2", 6)] {
            let r = rs(t);
            let f = fmatrix(&r, &candidates(&r, ell, false)[0]);
            let m = monodromy_matrix(&f);
            let (rank, _, _) = floating_rank(&m);
            assert_eq!(rank, exact_verdict(&f, &m).rank, "{t} {ell}");
        }
    }

    #[test]
    fn transparent_examples() {
        let r = rs("A1");
        let f = fmatrix(&r, &candidates(&r, 3, false)[0]);
        assert_eq!(transparent_bruteforce(&f).len(), 1);
        for (t, n) in [("A1", 1), ("B2", 2)] {
            let r = rs(t);
            let f = fmatrix(&r, &candidates(&r, 4, false)[0]);
            let chars = transparent_bruteforce(&f);
            assert_eq!(chars.len(), 1 << n, "{t}");
            assert_eq!(chars, transparent_from_rad0(&f));
        }
        let c3 = rs("C3");
        let cs = candidates(&c3, 3, true);
        let c = cs.iter().find(|c| verify_r0_equations(&fmatrix(&c3, c))).unwrap();
        let f = fmatrix(&c3, c);
        assert_eq!(transparent_bruteforce(&f).len(), 2);
        let report = classify(&c3, c).unwrap();
        assert_eq!(report.transparent_characters, transparent_bruteforce(&f));
    }
}
