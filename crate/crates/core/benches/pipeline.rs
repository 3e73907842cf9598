use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use texsynth::blocks::{classify_blocks_with, partition};
use texsynth::periodicity::{column_dmf_with, row_dmf_with};
use texsynth::synthesis::synthesize_with;
use texsynth::testgen::fixture;
use texsynth::{Execution, GroundTruth};

fn strategies() -> Vec<(&'static str, Execution)> {
    #[cfg_attr(not(feature = "parallel"), allow(unused_mut))]
    let mut v = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Execution::Parallel));
    v
}

fn fixture_image(side_reps: usize) -> texsynth::GrayImage {
    let gt = GroundTruth {
        texel_h: 16,
        texel_w: 16,
        reps_r: side_reps,
        reps_c: side_reps,
        defect_blocks: vec![(1, 1)],
        noise_amplitude: 3,
        seed: 7,
    };
    fixture(&gt).unwrap().1
}

fn bench_dmf(c: &mut Criterion) {
    let mut group = c.benchmark_group("dmf");
    for reps in [16, 32] {
        let img = fixture_image(reps);
        let d_max = img.width() / 2;
        for (name, exec) in strategies() {
            group.bench_with_input(
                BenchmarkId::new(format!("column/{name}"), img.width()),
                &img,
                |b, img| b.iter(|| column_dmf_with(black_box(img), d_max, exec).unwrap()),
            );
            group.bench_with_input(
                BenchmarkId::new(format!("row/{name}"), img.width()),
                &img,
                |b, img| b.iter(|| row_dmf_with(black_box(img), d_max, exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn bench_blocks(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_blocks");
    for reps in [16, 64] {
        let img = fixture_image(reps);
        let grid = partition(&img, 16, 16).unwrap();
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, grid.len()), &img, |b, img| {
                b.iter(|| classify_blocks_with(black_box(img), &grid, 0.02, 1e-6, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_synthesize(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesize");
    let texel = texsynth::random_texel(24, 24, 3).unwrap();
    for side in [512usize, 2048] {
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, side), &side, |b, &side| {
                b.iter(|| synthesize_with(black_box(&texel), side, side, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_dmf, bench_blocks, bench_synthesize);
criterion_main!(benches);
