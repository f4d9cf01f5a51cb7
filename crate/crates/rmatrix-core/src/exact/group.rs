//! Finite abelian groups realised as lattice quotients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{lattice_from_generators, quotient_group, IntMatrix, LatticeError, RatMatrix};

/// `sup / sub` for lattices `sub ⊆ sup`, in invariant-factor form.
///
/// Elements are coordinate vectors `(k_1, ..., k_m)` with `0 <= k_i < d_i`;
/// `generators` holds lattice lifts (columns, ambient coordinates) of the
/// cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub generators: IntMatrix,
    coordinate_map: RatMatrix,
    relations: IntMatrix,
    ambient: IntMatrix,
}

impl FiniteAbelianGroup {
    pub(crate) fn from_parts(
        invariant_factors: Vec<BigInt>,
        generators: IntMatrix,
        coordinate_map: RatMatrix,
        relations: IntMatrix,
        ambient: IntMatrix,
    ) -> Self {
        FiniteAbelianGroup {
            invariant_factors,
            generators,
            coordinate_map,
            relations,
            ambient,
        }
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Order as a machine integer, if it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Exponent (largest invariant factor, 1 for the trivial group).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// The lattice whose quotient this is.
    pub fn relation_lattice(&self) -> &IntMatrix {
        &self.relations
    }

    /// The lattice this is a quotient of.
    pub fn ambient_lattice(&self) -> &IntMatrix {
        &self.ambient
    }

    /// Dimension of the ambient coordinate space.
    pub fn ambient_dim(&self) -> usize {
        self.ambient.rows
    }

    /// Canonical coordinates of the class of `v`; errors if `v` is outside the ambient lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.ambient_dim() {
            return Err(LatticeError::DimensionMismatch);
        }
        let raw = self.coordinate_map.mul_int_vec(v);
        // Membership in the ambient lattice is checked independently of the quotient map.
        let inside = super::lattice_coordinates(&self.ambient, v)?.is_some();
        if !inside {
            return Err(LatticeError::NotSublattice);
        }
        Ok(raw
            .into_iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| x.to_integer().mod_floor(d))
            .collect())
    }

    /// Reduces an arbitrary coordinate vector into canonical range.
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    /// A lattice lift of the element with the given coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.rank(), "coordinate length mismatch");
        if coords.is_empty() {
            return vec![BigInt::zero(); self.ambient_dim()];
        }
        self.generators.mul_vec(coords)
    }

    pub fn is_identity(&self, coords: &[BigInt]) -> bool {
        coords
            .iter()
            .zip(&self.invariant_factors)
            .all(|(x, d)| x.is_multiple_of(d))
    }

    /// Whether the lattice vector `v` represents the identity.
    pub fn contains_in_relations(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        Ok(self.coordinates(v)?.iter().all(Zero::is_zero))
    }

    /// All elements as canonical coordinate vectors, in lexicographic order.
    ///
    /// Intended for small groups only.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let d = d.to_u64().expect("group too large to enumerate");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for k in 0..d {
                    let mut e = prefix.clone();
                    e.push(BigInt::from(k));
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Number of elements killed by `k`.
    pub fn torsion_count(&self, k: &BigInt) -> BigInt {
        self.invariant_factors.iter().map(|d| d.gcd(k)).product()
    }

    /// The subgroup generated by the given lattice vectors (which must lie in the ambient lattice).
    pub fn subgroup_generated_by(&self, gens: &[Vec<BigInt>]) -> Result<FiniteAbelianGroup, LatticeError> {
        let mut all = self.relations.columns();
        for g in gens {
            if super::lattice_coordinates(&self.ambient, g)?.is_none() {
                return Err(LatticeError::NotSublattice);
            }
            all.push(g.clone());
        }
        let lattice = lattice_from_generators(&IntMatrix::from_columns(self.ambient_dim(), &all))?;
        quotient_group(&self.relations, &lattice)
    }

    /// The subgroup whose coordinate vectors form the lattice spanned by the columns of `coords`.
    ///
    /// `coords` has one row per cyclic factor; the columns are coordinate vectors.
    pub fn subgroup_from_coordinates(&self, coords: &IntMatrix) -> Result<FiniteAbelianGroup, LatticeError> {
        let gens: Vec<Vec<BigInt>> = coords.columns().iter().map(|c| self.lift(c)).collect();
        self.subgroup_generated_by(&gens)
    }

    /// `Z_{d_1} x ... x Z_{d_m}` realised as `Z^m / Diag(d)`; coordinates are the vectors themselves.
    pub fn from_invariant_factors(factors: &[BigInt]) -> FiniteAbelianGroup {
        let m = factors.len();
        quotient_group(&IntMatrix::diagonal(factors), &IntMatrix::identity(m)).expect("positive invariant factors")
    }

    /// `self x other` on the concatenated ambient coordinates.
    pub fn direct_product(&self, other: &FiniteAbelianGroup) -> FiniteAbelianGroup {
        let block = |a: &IntMatrix, b: &IntMatrix| {
            let mut m = IntMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
            for i in 0..a.rows {
                for j in 0..a.cols {
                    m[(i, j)] = a[(i, j)].clone();
                }
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
                }
            }
            m
        };
        quotient_group(
            &block(&self.relations, &other.relations),
            &block(&self.ambient, &other.ambient),
        )
        .expect("product of quotients")
    }

    /// Isomorphism type as a list of invariant factors in machine integers.
    pub fn invariant_factors_u64(&self) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    /// Short human-readable isomorphism type, e.g. `Z2^3` or `Z2 x Z4`; `0` for the trivial group.
    pub fn type_label(&self) -> String {
        format_group_type(&self.invariant_factors_u64())
    }
}

/// Renders invariant factors as `Z2^2 x Z4`; `0` for the empty list.
pub fn format_group_type(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let mut j = i;
        while j < factors.len() && factors[j] == factors[i] {
            j += 1;
        }
        let count = j - i;
        if count == 1 {
            parts.push(format!("Z{}", factors[i]));
        } else {
            parts.push(format!("Z{}^{}", factors[i], count));
        }
        i = j;
    }
    parts.join(" x ")
}
