//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// The `m`-th cyclotomic polynomial, coefficients from the constant term upwards.
pub fn cyclotomic_polynomial(m: usize) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut cache = HashMap::new();
    phi_cached(m, &mut cache)
}

fn phi_cached(m: usize, cache: &mut HashMap<usize, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = cache.get(&m) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); m + 1];
    num[0] = -BigInt::one();
    num[m] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let den = phi_cached(d, cache);
        num = exact_monic_division(&num, &den);
    }
    cache.insert(m, num.clone());
    num
}

/// `a / b` for monic `b` dividing `a` exactly.
fn exact_monic_division(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division is not exact");
    q
}

/// An element `sum_k c_k zeta_M^k` of `Q(zeta_M)`, `zeta_M = exp(2 pi i / M)`.
///
/// The coefficient vector has length `M`; equality is decided modulo `Phi_M`.
#[derive(Clone, Serialize, Deserialize)]
pub struct Cyclotomic {
    pub order: usize,
    pub coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::root(order, 0)
    }

    /// `zeta_M^k`.
    pub fn root(order: usize, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[k.mod_floor(&(order as i64)) as usize] = BigRational::one();
        z
    }

    /// `scale * sum_k counts[k] zeta_M^k`.
    pub fn from_counts(counts: &[i64], scale: &BigRational) -> Self {
        Cyclotomic {
            order: counts.len(),
            coeffs: counts
                .iter()
                .map(|&c| scale * BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclotomic orders differ");
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclotomic orders differ");
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "cyclotomic orders differ");
        let m = self.order;
        let mut out = vec![BigRational::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[(i + j) % m] += a * b;
            }
        }
        Cyclotomic { order: m, coeffs: out }
    }

    /// Coefficients of the canonical representative modulo `Phi_M`, of length `phi(M)`.
    pub fn reduced(&self) -> Vec<BigRational> {
        let phi = cyclotomic_polynomial(self.order);
        reduce_rational(&self.coeffs, &phi)
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / m;
            (re + c * t.cos(), im + c * t.sin())
        })
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.sub(other).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .reduced()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}*z{}^{k}", self.order))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn reduce_rational(coeffs: &[BigRational], phi: &[BigInt]) -> Vec<BigRational> {
    let deg = phi.len() - 1;
    let mut a = coeffs.to_vec();
    if a.len() < deg {
        a.resize(deg, BigRational::zero());
    }
    for i in (deg..a.len()).rev() {
        let c = std::mem::replace(&mut a[i], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            a[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
        }
    }
    a.truncate(deg);
    a
}

/// `Q(zeta_M)` with elements stored as reduced coefficient vectors.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    pub order: usize,
    phi: Vec<BigInt>,
    phi_small: Vec<i128>,
}

impl CyclotomicField {
    pub fn new(order: usize) -> Self {
        let phi = cyclotomic_polynomial(order);
        let phi_small = phi
            .iter()
            .map(|c| c.to_i128().expect("small cyclotomic coefficient"))
            .collect();
        CyclotomicField { order, phi, phi_small }
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Whether `sum_k counts[k] zeta_M^k` vanishes.
    pub fn counts_vanish(&self, counts: &[i64]) -> bool {
        let deg = self.degree();
        let mut a: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
        for i in (deg..a.len()).rev() {
            let c = a[i];
            if c == 0 {
                continue;
            }
            a[i] = 0;
            for j in 0..deg {
                a[i - deg + j] -= c * self.phi_small[j];
            }
        }
        a.iter().take(deg).all(|&c| c == 0)
    }

    pub fn reduce(&self, x: &Cyclotomic) -> Vec<BigRational> {
        assert_eq!(x.order, self.order, "cyclotomic orders differ");
        reduce_rational(&x.coeffs, &self.phi)
    }

    pub fn embed(&self, reduced: &[BigRational]) -> Cyclotomic {
        let mut c = Cyclotomic::zero(self.order);
        for (k, v) in reduced.iter().enumerate() {
            c.coeffs[k] = v.clone();
        }
        c
    }

    fn mul_reduced(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let deg = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * deg.max(1)];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                prod[i + j] += x * y;
            }
        }
        reduce_rational(&prod, &self.phi)
    }

    /// Multiplicative inverse of a nonzero reduced element.
    fn inverse_reduced(&self, a: &[BigRational]) -> Vec<BigRational> {
        let phi: Vec<BigRational> = self.phi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (mut r0, mut r1) = (phi, trim(a.to_vec()));
        let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
        assert!(!r1.is_empty(), "inverse of zero");
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            assert!(!r1.is_empty(), "element is not invertible");
        }
        let c = r1[0].clone();
        let mut inv: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        inv.resize(self.degree(), BigRational::zero());
        reduce_rational(&inv, &self.phi)
    }

    /// Rank of a matrix with entries in the field, by exact Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<Cyclotomic>]) -> usize {
        let mut m: Vec<Vec<Vec<BigRational>>> = rows
            .iter()
            .map(|r| r.iter().map(|x| self.reduce(x)).collect())
            .collect();
        let is_zero = |x: &[BigRational]| x.iter().all(Zero::is_zero);
        let n_rows = m.len();
        let n_cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..n_cols {
            let Some(p) = (rank..n_rows).find(|&r| !is_zero(&m[r][col])) else {
                continue;
            };
            m.swap(rank, p);
            let inv = self.inverse_reduced(&m[rank][col]);
            let pivot_row: Vec<Vec<BigRational>> = m[rank].iter().map(|x| self.mul_reduced(x, &inv)).collect();
            for r in 0..n_rows {
                if r == rank || is_zero(&m[r][col]) {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in col..n_cols {
                    if is_zero(&pivot_row[c]) {
                        continue;
                    }
                    let t = self.mul_reduced(&factor, &pivot_row[c]);
                    for (x, y) in m[r][c].iter_mut().zip(t) {
                        *x -= y;
                    }
                }
            }
            m[rank] = pivot_row;
            rank += 1;
        }
        rank
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = &b[db];
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    (trim(q), trim(rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(15).len() - 1, 8);
    }

    #[test]
    fn roots_of_unity_relations() {
        for m in 1..=24 {
            assert_eq!(Cyclotomic::root(m, m as i64), Cyclotomic::one(m));
            if m > 1 {
                let s = (0..m).fold(Cyclotomic::zero(m), |acc, k| acc.add(&Cyclotomic::root(m, k as i64)));
                assert!(s.is_zero(), "sum of {m}-th roots");
            }
            let field = CyclotomicField::new(m);
            let x = Cyclotomic::root(m, 3).add(&Cyclotomic::root(m, 5));
            let once = field.reduce(&x);
            assert_eq!(field.reduce(&field.embed(&once)), once);
        }
    }

    #[test]
    fn inverse_and_rank() {
        let field = CyclotomicField::new(12);
        let x = Cyclotomic::one(12).add(&Cyclotomic::root(12, 1));
        let inv = field.embed(&field.inverse_reduced(&field.reduce(&x)));
        assert_eq!(x.mul(&inv), Cyclotomic::one(12));
        let z = |k| Cyclotomic::root(12, k);
        assert_eq!(field.rank(&[vec![z(0), z(1)], vec![z(1), z(2)]]), 1);
        assert_eq!(field.rank(&[vec![z(0), z(1)], vec![z(1), z(0)]]), 2);
    }

    #[test]
    fn counts_vanish_matches_reduction() {
        let field = CyclotomicField::new(6);
        assert!(field.counts_vanish(&[1, 0, 1, 0, 1, 0]));
        assert!(!field.counts_vanish(&[1, 1, 0, 0, 0, 0]));
        assert!(field.counts_vanish(&[1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn complex_evaluation() {
        let (re, im) = Cyclotomic::root(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }
}
