//! Randomised property suites shared by the property tests and the acceptance run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use rmatrix_core::exact::{dual_lattice, lattice_index, quotient_group, smith_normal_form};
use rmatrix_core::pairings::{rad0, radical, PairingMatrix};
use rmatrix_core::root_systems::{build_root_system, types_up_to_rank};
use rmatrix_core::IntMatrix;

pub const CASES: u32 = 500;

fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        max_global_rejects: 50_000,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, cols), rows).prop_map(|r| IntMatrix::from_rows(&r))
}

fn any_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c, 20))
}

fn nonsingular(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    matrix(n, n, bound).prop_filter("singular", |m| !m.det().is_zero())
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

/// `m = p s q` with unimodular witnesses and a divisibility chain on `s`.
pub fn smith_witnesses() -> Result<(), String> {
    runner()
        .run(&any_matrix(), |m| {
            let d = smith_normal_form(&m);
            check(&(&d.p * &d.s) * &d.q == m, "p s q = m")?;
            check(&d.p * &d.p_inv == IntMatrix::identity(m.rows), "p p^-1 = 1")?;
            check(&d.q * &d.q_inv == IntMatrix::identity(m.cols), "q q^-1 = 1")?;
            check(d.p.det().abs().is_one() && d.q.det().abs().is_one(), "unimodular")?;
            check(d.s.is_diagonal(), "diagonal")?;
            let diag = d.diagonal();
            check(diag.iter().all(|x| !x.is_negative()), "nonnegative")?;
            for w in diag.windows(2) {
                let ok = if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    w[1].is_multiple_of(&w[0])
                };
                check(ok, "divisibility chain")?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// The dual of the dual is the original basis, for random bases and Killing forms.
pub fn dual_involution() -> Result<(), String> {
    let types = types_up_to_rank(4);
    let strategy = (0..types.len()).prop_flat_map(move |i| {
        let n = types[i].rank;
        (Just(types[i]), nonsingular(n, 6))
    });
    runner()
        .run(&strategy, |(t, b)| {
            let rs = build_root_system(t);
            let b = b.to_rat();
            let v = dual_lattice(&b, rs.gram()).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let w = dual_lattice(&v, rs.gram()).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(w == b, "dual of dual")?;
            let pairing = &(&v.transpose() * rs.gram()) * &b;
            check(pairing.is_integral(), "dual pairs integrally")
        })
        .map_err(|e| e.to_string())
}

/// `|sup / sub| = |det c|` for `sub = sup c`, and the invariant factors multiply to it.
pub fn quotient_orders() -> Result<(), String> {
    let strategy = (1usize..=4).prop_flat_map(|n| (nonsingular(n, 5), nonsingular(n, 4)));
    runner()
        .run(&strategy, |(sup, c)| {
            let sub = &sup * &c;
            let q = quotient_group(&sub, &sup).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let expected = c.det().abs();
            check(q.order() == expected, "order is |det c|")?;
            check(lattice_index(&sub, &sup).unwrap() == expected, "index")?;
            check(
                q.invariant_factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])),
                "chain",
            )?;
            check(
                q.invariant_factors.iter().all(|d| d > &BigInt::one()),
                "nontrivial factors",
            )?;
            if expected <= BigInt::from(400) {
                check(BigInt::from(q.elements().len()) == expected, "element count")?;
            }
            for col in sub.columns() {
                check(q.contains_in_relations(&col).unwrap(), "relations vanish")?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// For a perfect symmetric pairing on `G x G`, `Rad_0` is the two-torsion of `G`.
pub fn rad0_two_torsion() -> Result<(), String> {
    let strategy = prop::collection::vec(2u64..=12, 1..=3).prop_flat_map(|d| {
        let r = d.len();
        (Just(d), prop::collection::vec(0u64..144, r * r))
    });
    runner()
        .run(&strategy, |(d, raw)| {
            let r = d.len();
            let diag: Vec<BigInt> = d.iter().map(|&x| BigInt::from(x)).collect();
            let g = quotient_group(&IntMatrix::diagonal(&diag), &IntMatrix::identity(r)).unwrap();
            let mut b = vec![vec![BigRational::zero(); r]; r];
            for i in 0..r {
                for j in i..r {
                    let m = d[i].gcd(&d[j]);
                    let v = BigRational::new(BigInt::from(raw[i * r + j] % m), BigInt::from(m));
                    b[i][j] = v.clone();
                    b[j][i] = v;
                }
            }
            let p = PairingMatrix::from_fn(g.clone(), g.clone(), |u, v| {
                let mut acc = BigRational::zero();
                for i in 0..r {
                    for j in 0..r {
                        acc += &b[i][j] * BigRational::from_integer(&u[i] * &v[j]);
                    }
                }
                Ok(acc)
            })
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
            if !radical(&p).is_perfect {
                return Err(TestCaseError::reject("not perfect"));
            }
            let r0 = rad0(&p).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let two = BigInt::from(2);
            check(r0.order() == p.left.torsion_count(&two), "order of two-torsion")?;
            check(r0.invariant_factors.iter().all(|x| x == &two), "exponent two")
        })
        .map_err(|e| e.to_string())
}

#[allow(dead_code)]
pub const SUITES: [(&str, fn() -> Result<(), String>); 4] = [
    ("Smith witnesses", smith_witnesses),
    ("dual involution", dual_involution),
    ("quotient orders", quotient_orders),
    ("Rad_0 two-torsion", rad0_two_torsion),
];
