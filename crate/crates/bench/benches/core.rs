use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hf_core::estimate::circle_samples;
use hf_core::{
    certify_polylike, count_zeros, newton_preimages, parse_map, render_escape, separated_entropy_estimate, sft_entropy, winding_degree,
    ComplexVal, Disk, TransitionMatrix, Window,
};

fn c(re: f64, im: f64) -> ComplexVal {
    ComplexVal::new(re, im)
}

fn evaluation(cr: &mut Criterion) {
    let f = parse_map("exp(sin(z)) + z^3 - 2*cos(z)").unwrap();
    cr.bench_function("eval_jet", |b| b.iter(|| f.eval_jet(black_box(c(0.3, -0.7))).unwrap()));
}

fn shift(cr: &mut Criterion) {
    let full = TransitionMatrix::full_shift(9);
    let golden = TransitionMatrix::golden_mean();
    let big = full.direct_sum(&golden).direct_sum(&TransitionMatrix::full_shift(20));
    cr.bench_function("sft_entropy_full9", |b| b.iter(|| sft_entropy(black_box(&full))));
    cr.bench_function("sft_entropy_blocks", |b| b.iter(|| sft_entropy(black_box(&big))));
}

fn degrees(cr: &mut Criterion) {
    let sin = parse_map("sin(z)").unwrap();
    let circle: Vec<ComplexVal> = (0..1024).map(|k| ComplexVal::from_polar(4.0, std::f64::consts::TAU * k as f64 / 1024.0)).collect();
    cr.bench_function("winding_sin_r4", |b| b.iter(|| winding_degree(&sin, black_box(&circle), c(0.0, 0.0)).unwrap()));
    cr.bench_function("count_zeros_sin_r10", |b| b.iter(|| count_zeros(&sin, black_box(10.0)).unwrap()));
    let p = parse_map("z^5 - z + 0.3").unwrap();
    cr.bench_function("newton_preimages_quintic", |b| b.iter(|| newton_preimages(&p, c(0.0, 0.0), Disk::new(c(0.0, 0.0), 2.0), 32)));
}

fn polylike(cr: &mut Criterion) {
    let f = parse_map("z^2 - 0.1").unwrap();
    let v = Disk::new(c(0.0, 0.0), 2.0);
    let mut g = cr.benchmark_group("polylike");
    g.sample_size(10);
    g.bench_function("quadratic", |b| b.iter(|| certify_polylike(&f, &v, &v, c(0.0, 0.0)).unwrap()));
    g.finish();
}

fn estimator(cr: &mut Criterion) {
    let samples = circle_samples(1024);
    let mut g = cr.benchmark_group("estimate");
    g.sample_size(10);
    g.bench_function("doubling_1024", |b| b.iter(|| separated_entropy_estimate(|z| z * z, &samples, 8, 0.5).unwrap()));
    g.finish();
}

fn render(cr: &mut Criterion) {
    let f = parse_map("exp(z) - 1.5").unwrap();
    let w = Window::square(c(0.0, 0.0), 3.0);
    let mut g = cr.benchmark_group("render");
    g.sample_size(10);
    g.bench_function("exp_128", |b| b.iter(|| render_escape(&f, &w, 64, 50.0, 128, 128)));
    g.finish();
}

criterion_group!(benches, evaluation, shift, degrees, polylike, estimator, render);
criterion_main!(benches);
