use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use octoqkd::channel::{transmit, ChannelModel, NoiseShape};
use octoqkd::figures::linear_grid;
use octoqkd::gaussian::DetectorModel;
use octoqkd::keyrate::{sweep, FiniteSize, RateInputs, SweepAxis};
use octoqkd::modulation::sample_blocks;
use octoqkd::reconciliation::{reconcile, CodeSpec, VirtualChannel};
use octoqkd::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn quantum_phase(c: &mut Criterion) {
    let blocks = 1 << 16;
    let det = DetectorModel::new(0.6, 0.01, true).unwrap();
    let ch = ChannelModel::new(0.1, 0.01, NoiseShape::Gaussian).unwrap();
    let points = sample_blocks(1.0, blocks, 1, Execution::Parallel).unwrap();

    let mut group = c.benchmark_group("transmit");
    group.throughput(Throughput::Elements(blocks as u64));
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| transmit(black_box(&points), &ch, &det, 1, exec).unwrap()));
    }
    group.finish();
}

fn reconciliation(c: &mut Criterion) {
    let code = CodeSpec::load("peg-r1_2-n4096", 2).unwrap();
    let frames = 16;
    let det = DetectorModel::ideal();
    let ch = ChannelModel::new(1.0, 0.0, NoiseShape::Gaussian).unwrap();
    let (slope, noise) = ch.quadrature_response(&det, 0);
    let v_a = 0.75 * noise / (slope * slope);
    let points = sample_blocks(v_a, frames * code.blocks_per_frame(), 2, Execution::Parallel).unwrap();
    let records = transmit(&points, &ch, &det, 2, Execution::Parallel).unwrap();
    let alice: Vec<[f64; 8]> = points.iter().map(|p| p.q).collect();
    let bob: Vec<[f64; 8]> = records.iter().map(|r| r.y).collect();
    let vc = VirtualChannel { slope, noise_variance: noise, modulation_variance: v_a };

    let mut group = c.benchmark_group("reconcile");
    group.sample_size(10);
    group.throughput(Throughput::Elements(frames as u64));
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| reconcile(black_box(&bob), &alice, &code, &vc, 2, exec).unwrap()));
    }
    group.finish();
}

fn rate_sweep(c: &mut Criterion) {
    let det = DetectorModel::new(0.6, 0.0, true).unwrap();
    let asymptotic = RateInputs::asymptotic(1.0, 1.0, 0.01, det, 0.8).at_distance(50.0);
    let finite = asymptotic.with_finite(FiniteSize::new(1_000_000_000_000));
    let va_grid = linear_grid(0.25, 4.0, 0.05);
    let km_grid = linear_grid(0.0, 100.0, 5.0);

    let mut group = c.benchmark_group("sweep");
    group.measurement_time(Duration::from_secs(10));
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("modulation_variance", name), &va_grid, |b, g| {
            b.iter(|| sweep(SweepAxis::ModulationVariance, g, &asymptotic, false, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("distance_optimized", name), &km_grid, |b, g| {
            b.iter(|| sweep(SweepAxis::Distance, g, &finite, true, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, quantum_phase, reconciliation, rate_sweep);
criterion_main!(benches);
