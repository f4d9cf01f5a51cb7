//! Simple root systems of types A through G.
//!
//! Lattice vectors are written in the basis of fundamental coweights, in
//! which the simple root `alpha_j` is column `j` of the symmetrised Cartan
//! matrix `A_R = Diag(d) C`, the fundamental weight `lambda_i` is `d_i e_i`,
//! and the Gram matrix of the basis is `A_R^{-1}`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{quotient_group, FiniteAbelianGroup, IntMatrix, RatMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

impl FromStr for Family {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(RootSystemError::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("unknown Lie family `{0}`")]
    UnknownFamily(String),
    #[error("rank {rank} is not valid for family {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("ell must be at least 2, got {0}")]
    EllTooSmall(u64),
}

/// A simple Lie type such as `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(LieType { family, rank })
        } else {
            Err(RootSystemError::InvalidRank {
                family: family.letter(),
                rank,
            })
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let family: Family = head.parse()?;
        let rank: usize = tail
            .parse()
            .map_err(|_| RootSystemError::UnknownFamily(s.to_string()))?;
        LieType::new(family, rank)
    }
}

/// A positive root in simple-root coordinates together with `d_alpha = (alpha, alpha) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveRoot {
    pub simple_coords: Vec<i64>,
    pub d_alpha: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSystemData {
    pub lie_type: LieType,
    /// `C_ij = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`.
    pub cartan: IntMatrix,
    /// Half squared lengths of the simple roots.
    pub d: Vec<i64>,
    /// `(A_R)_ij = (alpha_i, alpha_j)`; columns are the simple roots in coweight coordinates.
    pub a_r: IntMatrix,
    pub positive_roots: Vec<PositiveRoot>,
    /// Weyl vector in coweight coordinates.
    pub rho: Vec<BigInt>,
    /// `Lambda_W / Lambda_R`.
    pub fund_group: FiniteAbelianGroup,
    gram: RatMatrix,
}

/// Inner products of simple roots for the Bourbaki numbering.
///
/// Adjacent nodes have `(alpha_i, alpha_j) = -max(d_i, d_j)`.
fn simple_root_products(t: LieType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let lengths: Vec<i64> = match t.family {
        Family::A | Family::D | Family::E => vec![1; n],
        Family::B => (0..n).map(|i| if i + 1 < n { 2 } else { 1 }).collect(),
        Family::C => (0..n).map(|i| if i + 1 < n { 1 } else { 2 }).collect(),
        Family::F => vec![2, 2, 1, 1],
        Family::G => vec![1, 3],
    };
    let mut edges: Vec<(usize, usize)> = match t.family {
        Family::D => (0..n - 2).map(|i| (i, i + 1)).collect(),
        Family::E => (2..n - 1).map(|i| (i, i + 1)).collect(),
        _ => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
    };
    match t.family {
        Family::D => edges.push((n - 3, n - 1)),
        Family::E => edges.extend([(0, 2), (1, 3)]),
        _ => {}
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, j) in edges {
        let v = -lengths[i].max(lengths[j]);
        a[i][j] = v;
        a[j][i] = v;
    }
    for i in 0..n {
        a[i][i] = 2 * lengths[i];
    }
    a
}

fn positive_roots(a_r: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a_r.len();
    let pair = |x: &[i64], i: usize| -> i64 { (0..n).map(|k| x[k] * a_r[k][i]).sum() };
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    // Breadth-first by height: beta + alpha_i is a root iff the alpha_i-string
    // through beta extends upwards, i.e. p - <beta, alpha_i^vee> > 0.
    while let Some(beta) = queue.pop_front() {
        order.push(beta.clone());
        for i in 0..n {
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if !seen.contains(&down) {
                    break;
                }
                p += 1;
            }
            let cartan_pairing = 2 * pair(&beta, i) / a_r[i][i];
            if p - cartan_pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if seen.insert(up.clone()) {
                    queue.push_back(up);
                }
            }
        }
    }
    order.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
    order
}

/// Builds the full root-system data for a Lie type.
pub fn build_root_system(t: LieType) -> RootSystemData {
    let n = t.rank;
    let products = simple_root_products(t);
    let d: Vec<i64> = (0..n).map(|i| products[i][i] / 2).collect();
    let a_r = IntMatrix::from_rows(&products);
    let mut cartan = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            cartan[(i, j)] = BigInt::from(2 * products[i][j] / products[i][i]);
        }
    }
    let roots = positive_roots(&products);
    let positive_roots: Vec<PositiveRoot> = roots
        .into_iter()
        .map(|c| {
            let norm: i64 = (0..n)
                .map(|i| (0..n).map(|j| c[i] * products[i][j] * c[j]).sum::<i64>())
                .sum();
            PositiveRoot {
                simple_coords: c,
                d_alpha: norm / 2,
            }
        })
        .collect();
    let rho: Vec<BigInt> = d.iter().map(|&x| BigInt::from(x)).collect();
    let weight_basis = IntMatrix::diagonal(&d);
    let fund_group = quotient_group(&a_r, &weight_basis).expect("root lattice has finite index");
    let gram = a_r.to_rat().inverse().expect("A_R is nonsingular");
    RootSystemData {
        lie_type: t,
        cartan,
        d,
        a_r,
        positive_roots,
        rho,
        fund_group,
        gram,
    }
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    /// Gram matrix of the fundamental-coweight basis, `A_R^{-1}`.
    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// Basis of the root lattice (the matrix `A_R`).
    pub fn root_lattice(&self) -> IntMatrix {
        self.a_r.clone()
    }

    /// Basis of the weight lattice, `Diag(d)`.
    pub fn weight_lattice(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.d)
    }

    /// Basis of the coweight lattice (the identity).
    pub fn coweight_lattice(&self) -> IntMatrix {
        IntMatrix::identity(self.rank())
    }

    pub fn simple_root(&self, i: usize) -> Vec<BigInt> {
        self.a_r.column(i)
    }

    /// Fundamental weight `lambda_i` (0-based index) in coweight coordinates.
    pub fn fundamental_weight(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::from(self.d[i]);
        v
    }

    /// Converts coefficients in the fundamental-weight basis to coweight coordinates.
    pub fn weight_to_coweight(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        coeffs.iter().zip(&self.d).map(|(c, &d)| c * BigInt::from(d)).collect()
    }

    /// Converts simple-root coefficients to coweight coordinates.
    pub fn root_to_coweight(&self, coeffs: &[i64]) -> Vec<BigInt> {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        self.a_r.mul_vec(&c)
    }

    /// Normalised Killing form `u^T A_R^{-1} v` on coweight coordinates.
    pub fn killing_form(&self, u: &[BigInt], v: &[BigInt]) -> Result<BigRational, RootSystemError> {
        let n = self.rank();
        if u.len() != n || v.len() != n {
            return Err(RootSystemError::InvalidRank {
                family: self.lie_type.family.letter(),
                rank: u.len().max(v.len()),
            });
        }
        let gv = self.gram.mul_int_vec(v);
        Ok(u.iter()
            .zip(gv)
            .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
            .sum())
    }

    /// `2 rho`, computed from the positive roots.
    pub fn two_rho_from_roots(&self) -> Vec<BigInt> {
        let n = self.rank();
        let mut sum = vec![0i64; n];
        for r in &self.positive_roots {
            for i in 0..n {
                sum[i] += r.simple_coords[i];
            }
        }
        self.root_to_coweight(&sum)
    }

    /// Sorted root lengths `d_i^W`: the Smith invariants of `Diag(d)`.
    pub fn sorted_root_lengths(&self) -> Vec<i64> {
        let mut d = self.d.clone();
        d.sort_unstable();
        d
    }
}

/// `ell_alpha` per positive root and the maximal degree `nu_0 = sum (ell_alpha - 1) alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonData {
    /// Coweight coordinates.
    pub nu0: Vec<BigInt>,
    /// Parallel to `RootSystemData::positive_roots`.
    pub ell_alpha: Vec<u64>,
}

pub fn ribbon_data(rs: &RootSystemData, ell: u64) -> Result<RibbonData, RootSystemError> {
    if ell < 2 {
        return Err(RootSystemError::EllTooSmall(ell));
    }
    let n = rs.rank();
    let mut coeffs = vec![0i64; n];
    let mut ell_alpha = Vec::with_capacity(rs.positive_roots.len());
    for r in &rs.positive_roots {
        let la = ell / ell.gcd(&(2 * r.d_alpha as u64));
        ell_alpha.push(la);
        for i in 0..n {
            coeffs[i] += (la as i64 - 1) * r.simple_coords[i];
        }
    }
    Ok(RibbonData {
        nu0: rs.root_to_coweight(&coeffs),
        ell_alpha,
    })
}

/// Whether `(nu_0 + 2 rho, alpha_j)` is divisible by `ell` for every simple root.
pub fn ribbon_condition_holds(rs: &RootSystemData, ell: u64) -> Result<bool, RootSystemError> {
    let data = ribbon_data(rs, ell)?;
    let two_rho = rs.two_rho_from_roots();
    let v: Vec<BigInt> = data.nu0.iter().zip(&two_rho).map(|(a, b)| a + b).collect();
    let ell = BigInt::from(ell);
    for j in 0..rs.rank() {
        let p = rs.killing_form(&v, &rs.simple_root(j))?;
        if !p.is_integer() || !p.to_integer().is_multiple_of(&ell) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every Lie type with rank at most `max_rank`, plus the exceptional types.
pub fn types_up_to_rank(max_rank: usize) -> Vec<LieType> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for rank in 1..=max_rank.max(8) {
            let exceptional = matches!(family, Family::E | Family::F | Family::G);
            if !exceptional && rank > max_rank {
                continue;
            }
            if let Ok(t) = LieType::new(family, rank) {
                out.push(t);
            }
        }
    }
    out
}
