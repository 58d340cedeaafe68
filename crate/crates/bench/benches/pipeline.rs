use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fermiroot::frustration::build_frustration_graph;
use fermiroot::models::{kitaev_honeycomb, planted_root, sierpinski_hanoi, xy_chain_random};
use fermiroot::solver::recognize_hamiltonian;
use fermiroot::{analyze, K3Root, SolveOptions};

fn recognition(c: &mut Criterion) {
    let mut group = c.benchmark_group("recognize");
    for v in [10, 20, 40] {
        let h = planted_root(v, 2 * v, 1).unwrap().hamiltonian;
        group.bench_with_input(BenchmarkId::new("planted_root", v), &h, |b, h| {
            b.iter(|| recognize_hamiltonian(black_box(h), K3Root::Claw).unwrap())
        });
    }
    let h = kitaev_honeycomb(6, 6, [1.0; 3]).unwrap();
    group.bench_function("frustration_graph/honeycomb_6x6", |b| b.iter(|| build_frustration_graph(black_box(&h))));
    group.finish();
}

fn symmetry_analysis(c: &mut Criterion) {
    let mut group = c.benchmark_group("analyze");
    for (name, h) in [
        ("honeycomb_4x4", kitaev_honeycomb(4, 4, [1.0; 3]).unwrap()),
        ("sierpinski_k4", sierpinski_hanoi(4, 0.3).unwrap()),
        ("sierpinski_k5", sierpinski_hanoi(5, 0.0).unwrap()),
        ("xy_chain_32", xy_chain_random(32, true, 0).unwrap()),
    ] {
        group.bench_function(name, |b| b.iter(|| analyze(black_box(&h), K3Root::Claw).unwrap()));
    }
    group.finish();
}

fn sector_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_sector");
    for (name, h) in [
        ("honeycomb_4x4", kitaev_honeycomb(4, 4, [1.0, 0.8, 0.6]).unwrap()),
        ("sierpinski_k4", sierpinski_hanoi(4, 0.3).unwrap()),
        ("xy_chain_16", xy_chain_random(16, false, 0).unwrap()),
    ] {
        let m = analyze(&h, K3Root::Claw).unwrap();
        let sector = vec![false; m.symmetry.center_size];
        // energies are enumerated only when the state cap allows
        let opts = SolveOptions { max_states: 1 << 12, ..Default::default() };
        group.bench_function(name, |b| b.iter(|| m.solve_sector(black_box(&sector), &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, recognition, symmetry_analysis, sector_solve);
criterion_main!(benches);
