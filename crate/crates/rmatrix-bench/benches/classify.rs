use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rmatrix_core::classifier::{compare_enumeration, enumerate_all};
use rmatrix_core::exact::smith_normal_form;
use rmatrix_core::oracle::{check_r0_equations, monodromy_matrix, transparent_bruteforce, FMatrix};
use rmatrix_core::root_systems::{build_root_system, RootSystemData};

fn rs(t: &str) -> RootSystemData {
    build_root_system(t.parse().expect("valid type"))
}

fn smith(c: &mut Criterion) {
    for t in ["A4", "D5", "E8"] {
        let a_r = rs(t).a_r;
        c.bench_function(&format!("smith/{t}"), |b| b.iter(|| smith_normal_form(black_box(&a_r))));
    }
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for (t, ell) in [("B3", 6), ("D4", 6), ("E6", 3), ("F4", 12)] {
        let sys = rs(t);
        group.bench_function(format!("{t}/{ell}"), |b| {
            b.iter(|| enumerate_all(&sys, black_box(ell)).unwrap())
        });
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let sys = rs("A3");
    let en = enumerate_all(&sys, 12).unwrap();
    c.bench_function("compare/A3/12", |b| {
        b.iter(|| compare_enumeration(&sys, black_box(&en)))
    });
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (t, ell) in [("B2", 4), ("A2", 4)] {
        let sys = rs(t);
        let en = enumerate_all(&sys, ell).unwrap();
        let r = en
            .reports
            .iter()
            .filter(|r| r.quasitriangular)
            .next_back()
            .expect("a solution");
        let f = FMatrix::from_candidate(&sys, &r.candidate, 64).unwrap();
        group.bench_function(format!("equations/{t}/{ell}"), |b| {
            b.iter(|| check_r0_equations(black_box(&f)))
        });
        group.bench_function(format!("monodromy/{t}/{ell}"), |b| {
            b.iter(|| monodromy_matrix(black_box(&f)))
        });
        group.bench_function(format!("transparent/{t}/{ell}"), |b| {
            b.iter(|| transparent_bruteforce(black_box(&f)))
        });
    }
    group.finish();
}

criterion_group!(benches, smith, enumeration, table, oracle);
criterion_main!(benches);
