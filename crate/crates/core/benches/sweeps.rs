use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use recoupling::angmom::admissible_sixj;
use recoupling::families::families_report;
use recoupling::quad::canonical_quadrilaterals;
use recoupling::sweep::{map_seq, par_map};
use recoupling::volume::{volume_spectrum, DEFAULT_TOL};
use recoupling::{wigner_6j, Representation};
use std::hint::black_box;

fn spectra(c: &mut Criterion) {
    let quads = canonical_quadrilaterals(14);
    let mut g = c.benchmark_group("spectra_2j14");
    let f = |q: &recoupling::Quadrilateral| volume_spectrum(q, Representation::Antisym, DEFAULT_TOL).map(|s| s.residual);
    g.bench_function(BenchmarkId::new("seq", quads.len()), |b| b.iter(|| map_seq(black_box(&quads), f)));
    g.bench_function(BenchmarkId::new("par", quads.len()), |b| b.iter(|| par_map(black_box(&quads), f)));
    g.finish();
}

fn families(c: &mut Criterion) {
    let quads = canonical_quadrilaterals(8);
    let mut g = c.benchmark_group("families_2j8");
    g.sample_size(10);
    let f = |q: &recoupling::Quadrilateral| families_report(q, Representation::Antisym, DEFAULT_TOL).map(|r| r.pass);
    g.bench_function(BenchmarkId::new("seq", quads.len()), |b| b.iter(|| map_seq(black_box(&quads), f)));
    g.bench_function(BenchmarkId::new("par", quads.len()), |b| b.iter(|| par_map(black_box(&quads), f)));
    g.finish();
}

fn sixj(c: &mut Criterion) {
    let args = admissible_sixj(8);
    let mut g = c.benchmark_group("sixj_2j8");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("seq", args.len()), |b| b.iter(|| map_seq(black_box(&args), wigner_6j)));
    g.bench_function(BenchmarkId::new("par", args.len()), |b| b.iter(|| par_map(black_box(&args), wigner_6j)));
    g.finish();
}

criterion_group!(benches, spectra, families, sixj);
criterion_main!(benches);
