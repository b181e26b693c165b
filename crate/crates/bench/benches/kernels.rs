use corrdyn_core::dynamics::{expansive_oracle, gp_enumerate, Arc, ArcSet, CircleCorrespondence};
use corrdyn_core::ktheory::{smith_normal_form, IntegerMatrix};
use corrdyn_core::polyalg::{resultant_z, roots};
use corrdyn_core::{BivariatePolynomial, Correspondence, SpherePoint, UnivariatePolynomial};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

/// `(x - 1)^3 (x^d - 2)`: a triple root next to `d` simple ones.
fn clustered(d: usize) -> UnivariatePolynomial {
    let mut xd = vec![Complex64::default(); d + 1];
    xd[0] = Complex64::new(-2.0, 0.0);
    xd[d] = Complex64::new(1.0, 0.0);
    let mut p = UnivariatePolynomial::new(xd);
    for _ in 0..3 {
        p = &p
            * &UnivariatePolynomial::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
    }
    p
}

fn bench_roots(c: &mut Criterion) {
    let mut g = c.benchmark_group("roots");
    for d in [8, 16, 32] {
        let p = clustered(d);
        g.bench_with_input(BenchmarkId::from_parameter(d + 3), &p, |b, p| {
            b.iter(|| roots(black_box(p), 1e-6).unwrap())
        });
    }
    g.finish();
}

fn bench_resultant(c: &mut Criterion) {
    let mut g = c.benchmark_group("resultant_z");
    for k in [2, 3, 4] {
        let p = BivariatePolynomial::monomial_relation(k, k + 1).add(
            &BivariatePolynomial::from_int_terms(&[(1, 1, 3), (0, 0, -1)]),
        );
        let pz = p.partial_z();
        g.bench_with_input(BenchmarkId::from_parameter(k), &(p, pz), |b, (p, pz)| {
            b.iter(|| resultant_z(black_box(p), black_box(pz)).unwrap())
        });
    }
    g.finish();
}

fn bench_snf(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith_normal_form");
    for n in [4, 8, 16] {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| ((i * 7 + j * 13) % 11) as i64 - 5).collect())
            .collect();
        let m = IntegerMatrix::from_rows(&rows, n).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| smith_normal_form(black_box(m)))
        });
    }
    g.finish();
}

fn bench_fibers(c: &mut Criterion) {
    let k = Correspondence::product_of_powers(&[2, 3, 5]).unwrap();
    let w = SpherePoint::finite(Complex64::new(0.3, -0.7));
    c.bench_function("backward_fiber/product_2_3_5", |b| {
        b.iter(|| k.backward_fiber(black_box(&w), 1e-6).unwrap())
    });
    c.bench_function("forward_fiber/product_2_3_5", |b| {
        b.iter(|| k.forward_fiber(black_box(&w), 1e-6).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("expansive_oracle");
    let a = Arc::from_ints(0, 1, 1, 64);
    let seed = ArcSet::from_arc(a.start, a.end).unwrap();
    for (m, n) in [(2, 3), (2, 4), (5, 6)] {
        let cc = CircleCorrespondence::monomial(m, n).unwrap();
        g.bench_function(format!("{m}_{n}"), |b| {
            b.iter(|| expansive_oracle(black_box(&cc), &seed, 64).unwrap())
        });
    }
    g.finish();
}

fn bench_gp(c: &mut Criterion) {
    let mut g = c.benchmark_group("gp_enumerate");
    g.sample_size(10);
    for big_n in [1, 2, 3] {
        let cc = CircleCorrespondence::monomial(2, 3).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(big_n), &big_n, |b, &n| {
            b.iter(|| gp_enumerate(black_box(&cc), n).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    kernels,
    bench_roots,
    bench_resultant,
    bench_snf,
    bench_fibers,
    bench_oracle,
    bench_gp
);
criterion_main!(kernels);
