//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// `m = p * s * q` with `p`, `q` unimodular and `s` diagonal with a divisibility chain.
///
/// The inverses of both witnesses are carried along because every consumer
/// (quotient coordinates, kernels) needs one of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    pub p: IntMatrix,
    pub s: IntMatrix,
    pub q: IntMatrix,
    pub p_inv: IntMatrix,
    pub q_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `s_00, s_11, ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Reducer {
    a: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    q_inv: IntMatrix,
}

impl Reducer {
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        self.p_inv.add_row_multiple(dst, src, c);
        self.p.add_col_multiple(src, dst, &-c);
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.p_inv.swap_rows(x, y);
        self.p.swap_cols(x, y);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.p_inv.negate_row(i);
        self.p.negate_col(i);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        self.q_inv.add_col_multiple(dst, src, c);
        self.q.add_row_multiple(src, dst, &-c);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.q_inv.swap_cols(x, y);
        self.q.swap_rows(x, y);
    }

    /// Moves the smallest nonzero entry of row `t` and column `t` (from `t` on) to `(t, t)`.
    fn pivot_cross(&mut self, t: usize) -> bool {
        let mut best: Option<(BigInt, usize, bool)> = None;
        for i in t..self.a.rows {
            let v = self.a[(i, t)].abs();
            if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, i, true));
            }
        }
        for j in t + 1..self.a.cols {
            let v = self.a[(t, j)].abs();
            if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, j, false));
            }
        }
        match best {
            None => false,
            Some((_, i, true)) => {
                self.swap_rows(t, i);
                true
            }
            Some((_, j, false)) => {
                self.swap_cols(t, j);
                true
            }
        }
    }

    fn pivot_block(&mut self, t: usize) -> bool {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = self.a[(i, j)].abs();
                if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        match best {
            None => false,
            Some((_, i, j)) => {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                true
            }
        }
    }

    fn clear_cross(&mut self, t: usize) {
        loop {
            let pivot = self.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..self.a.rows {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let c = self.a[(i, t)].div_floor(&pivot);
                self.add_row(i, t, &-c);
                if !self.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..self.a.cols {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let c = self.a[(t, j)].div_floor(&pivot);
                self.add_col(j, t, &-c);
                if !self.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                return;
            }
            self.pivot_cross(t);
        }
    }
}

/// Smith normal form with unimodular witnesses.
///
/// Works for any shape and rank; trailing diagonal entries are zero when the
/// input is rank deficient.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut r = Reducer {
        a: m.clone(),
        p: IntMatrix::identity(m.rows),
        p_inv: IntMatrix::identity(m.rows),
        q: IntMatrix::identity(m.cols),
        q_inv: IntMatrix::identity(m.cols),
    };
    let steps = m.rows.min(m.cols);
    for t in 0..steps {
        if !r.pivot_block(t) {
            break;
        }
        loop {
            r.clear_cross(t);
            let pivot = r.a[(t, t)].clone();
            let offender = (t + 1..r.a.rows).find(|&i| (t + 1..r.a.cols).any(|j| !r.a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
    }
    SmithDecomposition {
        p: r.p,
        s: r.a,
        q: r.q,
        p_inv: r.p_inv,
        q_inv: r.q_inv,
    }
}

/// Column-style Hermite normal form of the lattice spanned by the columns of `gens`.
///
/// Returns a basis in echelon form: the pivot of each column is positive and
/// entries to the left of a pivot are reduced into `[0, pivot)`. Unique for a
/// given lattice. The number of returned columns is the rank.
pub fn hermite_basis(gens: &IntMatrix) -> IntMatrix {
    let mut a = gens.clone();
    let n = a.rows;
    let k = a.cols;
    let mut c = 0;
    for i in 0..n {
        if c == k {
            break;
        }
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for j in c..k {
                let v = a[(i, j)].abs();
                if !v.is_zero() && best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, j));
                }
            }
            let Some((_, j)) = best else { break };
            a.swap_cols(c, j);
            let pivot = a[(i, c)].clone();
            let mut clean = true;
            for j in c + 1..k {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let q = a[(i, j)].div_floor(&pivot);
                a.add_col_multiple(j, c, &-q);
                if !a[(i, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[(i, c)].is_zero() {
            continue;
        }
        if a[(i, c)].is_negative() {
            a.negate_col(c);
        }
        let pivot = a[(i, c)].clone();
        for j in 0..c {
            let q = a[(i, j)].div_floor(&pivot);
            a.add_col_multiple(j, c, &-q);
        }
        c += 1;
    }
    a.select_columns(0..c)
}
