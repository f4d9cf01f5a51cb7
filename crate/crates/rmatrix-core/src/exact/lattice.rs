//! Full-rank lattices in `Z^n` given by basis matrices (generators as columns).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{hermite_basis, smith_normal_form, FiniteAbelianGroup, IntMatrix, LatticeError, RatMatrix};

fn require_full_rank(b: &IntMatrix) -> Result<(), LatticeError> {
    if !b.is_square() {
        return Err(LatticeError::NotSquare);
    }
    if b.det().is_zero() {
        return Err(LatticeError::RankDeficient);
    }
    Ok(())
}

/// Basis of `{x in Z^k : a x = 0}` as columns.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let d = smith_normal_form(a);
    let r = d.rank();
    d.q_inv.select_columns(r..a.cols)
}

/// Basis of `{x in Z^k : (a x)_i = 0 mod moduli_i}` as columns (full rank when all moduli are nonzero).
pub fn congruence_lattice(a: &IntMatrix, moduli: &[BigInt]) -> IntMatrix {
    assert_eq!(a.rows, moduli.len(), "one modulus per row");
    let k = a.cols;
    if a.rows == 0 || k == 0 {
        return IntMatrix::identity(k);
    }
    let stacked = a.hstack(&IntMatrix::diagonal(moduli).neg());
    let kernel = integer_kernel(&stacked);
    hermite_basis(&kernel.select_rows(0..k))
}

/// An integer solution of `(a x)_i = b_i mod moduli_i`, if one exists.
pub fn solve_linear_congruences(a: &IntMatrix, b: &[BigInt], moduli: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len(), "one right-hand side per row");
    assert_eq!(a.rows, moduli.len(), "one modulus per row");
    if a.rows == 0 {
        return Some(vec![BigInt::zero(); a.cols]);
    }
    let k = a.cols;
    let stacked = a.hstack(&IntMatrix::diagonal(moduli).neg());
    let d = smith_normal_form(&stacked);
    let rhs = d.p_inv.mul_vec(b);
    let diag = d.diagonal();
    let mut w = vec![BigInt::zero(); stacked.cols];
    for (i, r) in rhs.iter().enumerate() {
        let s = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if s.is_zero() {
            if !r.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = r.div_rem(&s);
            if !rem.is_zero() {
                return None;
            }
            w[i] = q;
        }
    }
    let z = d.q_inv.mul_vec(&w);
    Some(z[..k].to_vec())
}

/// Canonical basis of the lattice spanned by the columns of `gens`; must have full rank.
pub fn lattice_from_generators(gens: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let h = hermite_basis(gens);
    if h.cols != gens.rows {
        return Err(LatticeError::RankDeficient);
    }
    Ok(h)
}

/// `L1 + L2`.
pub fn lattice_sum(b1: &IntMatrix, b2: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    require_full_rank(b1)?;
    require_full_rank(b2)?;
    if b1.rows != b2.rows {
        return Err(LatticeError::DimensionMismatch);
    }
    lattice_from_generators(&b1.hstack(b2))
}

/// `L1 ∩ L2`, from the kernel of `[B1 | -B2]`.
pub fn lattice_intersection(b1: &IntMatrix, b2: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    require_full_rank(b1)?;
    require_full_rank(b2)?;
    if b1.rows != b2.rows {
        return Err(LatticeError::DimensionMismatch);
    }
    let n = b1.rows;
    let kernel = integer_kernel(&b1.hstack(&b2.neg()));
    let coeffs = kernel.select_rows(0..n);
    lattice_from_generators(&(b1 * &coeffs))
}

/// Intersection of two lattices whose bases may have rational entries.
pub fn rational_lattice_intersection(b1: &RatMatrix, b2: &RatMatrix) -> Result<RatMatrix, LatticeError> {
    let den = b1.common_denominator().lcm(&b2.common_denominator());
    let s = BigRational::from_integer(den.clone());
    let i1 = b1.scale(&s).to_int().expect("cleared denominators");
    let i2 = b2.scale(&s).to_int().expect("cleared denominators");
    let meet = lattice_intersection(&i1, &i2)?;
    Ok(meet.to_rat().scale(&BigRational::new(BigInt::one(), den)))
}

/// Coordinates of `v` in the basis `b`, if `v` lies in the lattice.
pub fn lattice_coordinates(b: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    require_full_rank(b)?;
    let inv = b.to_rat().inverse()?;
    let x = inv.mul_int_vec(v);
    if x.iter().all(|c| c.is_integer()) {
        Ok(Some(x.into_iter().map(|c| c.to_integer()).collect()))
    } else {
        Ok(None)
    }
}

/// Whether every column of `sub` lies in the lattice spanned by `sup`.
pub fn is_sublattice(sub: &IntMatrix, sup: &IntMatrix) -> Result<bool, LatticeError> {
    require_full_rank(sup)?;
    let inv = sup.to_rat().inverse()?;
    Ok((&inv * &sub.to_rat()).is_integral())
}

pub fn lattices_equal(a: &IntMatrix, b: &IntMatrix) -> Result<bool, LatticeError> {
    Ok(is_sublattice(a, b)? && is_sublattice(b, a)?)
}

/// `|L_sup / L_sub|` for `L_sub ⊆ L_sup`.
pub fn lattice_index(sub: &IntMatrix, sup: &IntMatrix) -> Result<BigInt, LatticeError> {
    if !is_sublattice(sub, sup)? {
        return Err(LatticeError::NotSublattice);
    }
    Ok((sub.det() / sup.det()).abs())
}

/// Dual lattice `{v : v^T gram b in Z for all b in L}`.
///
/// The returned basis `V` satisfies `V^T gram B = I`.
pub fn dual_lattice(b: &RatMatrix, gram: &RatMatrix) -> Result<RatMatrix, LatticeError> {
    if b.rows != b.cols || gram.rows != b.rows || gram.cols != b.rows {
        return Err(LatticeError::DimensionMismatch);
    }
    if !gram.is_symmetric() {
        return Err(LatticeError::NotSymmetric);
    }
    (&b.transpose() * gram).inverse()
}

/// `L_sup / L_sub` in invariant-factor form, trivial factors dropped.
pub fn quotient_group(sub: &IntMatrix, sup: &IntMatrix) -> Result<FiniteAbelianGroup, LatticeError> {
    require_full_rank(sub)?;
    require_full_rank(sup)?;
    let sup_inv = sup.to_rat().inverse()?;
    let c = (&sup_inv * &sub.to_rat()).to_int().ok_or(LatticeError::NotSublattice)?;
    let d = smith_normal_form(&c);
    let keep: Vec<usize> = (0..c.rows).filter(|&i| !d.s[(i, i)].is_one()).collect();
    let invariant_factors: Vec<BigInt> = keep.iter().map(|&i| d.s[(i, i)].clone()).collect();
    let generators = (sup * &d.p).select_columns(keep.iter().copied());
    let coordinate_map = &d.p_inv.select_rows(keep.iter().copied()).to_rat() * &sup_inv;
    Ok(FiniteAbelianGroup::from_parts(
        invariant_factors,
        generators,
        coordinate_map,
        sub.clone(),
        sup.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn coprime_scalings_intersect_to_product() {
        let meet = lattice_intersection(&IntMatrix::scalar(2, 2), &IntMatrix::scalar(2, 3)).unwrap();
        assert!(lattices_equal(&meet, &IntMatrix::scalar(2, 6)).unwrap());
        let join = lattice_sum(&IntMatrix::scalar(2, 2), &IntMatrix::scalar(2, 3)).unwrap();
        assert_eq!(join, IntMatrix::identity(2));
    }

    #[test]
    fn idempotent_meet_and_join() {
        let b = int(&[&[2, 1], &[0, 3]]);
        assert!(lattices_equal(&lattice_intersection(&b, &b).unwrap(), &b).unwrap());
        assert!(lattices_equal(&lattice_sum(&b, &b).unwrap(), &b).unwrap());
    }

    #[test]
    fn rank_deficient_rejected() {
        let b = int(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            lattice_intersection(&b, &IntMatrix::identity(2)),
            Err(LatticeError::RankDeficient)
        );
    }

    #[test]
    fn congruences() {
        let a = int(&[&[1, 1]]);
        let l = congruence_lattice(&a, &[BigInt::from(3)]);
        assert_eq!(l.det().abs(), BigInt::from(3));
        for col in l.columns() {
            assert!((&col[0] + &col[1]).is_multiple_of(&BigInt::from(3)));
        }
    }

    #[test]
    fn congruence_solutions() {
        let a = int(&[&[2, 3], &[1, 1]]);
        let m = [BigInt::from(5), BigInt::from(4)];
        let b = [BigInt::from(1), BigInt::from(3)];
        let x = solve_linear_congruences(&a, &b, &m).unwrap();
        let ax = a.mul_vec(&x);
        for i in 0..2 {
            assert!((&ax[i] - &b[i]).is_multiple_of(&m[i]));
        }
        let even = int(&[&[2]]);
        assert!(solve_linear_congruences(&even, &[BigInt::from(1)], &[BigInt::from(4)]).is_none());
    }

    #[test]
    fn quotient_of_scaled_lattice() {
        let g = quotient_group(&int(&[&[2, 0], &[0, 4]]), &IntMatrix::identity(2)).unwrap();
        assert_eq!(g.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
        let trivial = quotient_group(&IntMatrix::identity(2), &IntMatrix::identity(2)).unwrap();
        assert!(trivial.is_trivial());
        assert_eq!(
            quotient_group(&IntMatrix::identity(2), &IntMatrix::scalar(2, 2)).unwrap_err(),
            LatticeError::NotSublattice
        );
    }
}
