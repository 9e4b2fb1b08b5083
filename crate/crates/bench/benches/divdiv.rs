use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use divdiv::assembly::{assemble_mixed, default_quad_degree, Discretization};
use divdiv::biharmonic::{postprocess_ustar, solve_mixed_system, ExactLoad, SinSquared};
use divdiv::complexes::check_poly_complexes;
use divdiv::{structured_unit_square, DivDivElement, HermiteElement};
use divdiv_bench::skewed_triangle;

fn elements(c: &mut Criterion) {
    let tri = skewed_triangle();
    let mut g = c.benchmark_group("element");
    for (l, k) in [(2, 3), (3, 3), (4, 4)] {
        g.bench_with_input(BenchmarkId::new("divdiv", format!("{l},{k}")), &(l, k), |b, &(l, k)| {
            b.iter(|| DivDivElement::new(tri, l, k).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("hermite", l), &l, |b, &l| {
            b.iter(|| HermiteElement::new(tri, l).unwrap())
        });
    }
    g.finish();
}

fn assembly_and_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("mixed");
    g.sample_size(10);
    for n in [4, 8] {
        let mesh = structured_unit_square(n).unwrap();
        let disc = Discretization::new(&mesh, 3, 3).unwrap();
        let f = ExactLoad(&SinSquared);
        let qd = default_quad_degree(3);
        g.bench_with_input(BenchmarkId::new("discretize", n), &n, |b, _| {
            b.iter(|| Discretization::new(&mesh, 3, 3).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("assemble", n), &n, |b, _| {
            b.iter(|| assemble_mixed(&disc, &f, qd).unwrap())
        });
        let sys = assemble_mixed(&disc, &f, qd).unwrap();
        g.bench_with_input(BenchmarkId::new("solve", n), &n, |b, _| {
            b.iter(|| solve_mixed_system(&sys).unwrap())
        });
        let sol = solve_mixed_system(&sys).unwrap();
        g.bench_with_input(BenchmarkId::new("postprocess", n), &n, |b, _| {
            b.iter(|| postprocess_ustar(&disc, &sol).unwrap())
        });
    }
    g.finish();
}

fn complexes(c: &mut Criterion) {
    c.bench_function("poly_complexes_k4", |b| b.iter(|| check_poly_complexes(4).unwrap()));
}

criterion_group!(benches, elements, assembly_and_solve, complexes);
criterion_main!(benches);
