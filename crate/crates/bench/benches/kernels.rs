use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use exotic_core::bicomb::bipartitions_of;
use exotic_core::census::{orbit_census, CensusOptions};
use exotic_core::classify::{classify_pair, Stabilizers};
use exotic_core::ffield::{commutant_basis, jordan_nilpotent};
use exotic_core::springer::{determine_correspondence, verify_restriction};
use exotic_core::symplectic::normal_form_pair;
use exotic_core::{CharacterTable, FpMatrix, SymplecticSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn linear_algebra(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("rank");
    for m in [8usize, 16, 32] {
        let entries: Vec<u32> = (0..m * m).map(|_| rng.gen_range(0..101)).collect();
        let a = FpMatrix::new(101, m, m, entries).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &a, |b, a| b.iter(|| black_box(a.rank())));
    }
    group.finish();
    let y = jordan_nilpotent(5, &[4, 3, 2, 1]);
    c.bench_function("commutant 10x10", |b| b.iter(|| black_box(commutant_basis(&y).unwrap().len())));
}

fn classification(c: &mut Criterion) {
    let space = SymplecticSpace::new(4, 5).unwrap();
    let pairs: Vec<_> = bipartitions_of(4)
        .iter()
        .map(|l| normal_form_pair(l, &space).unwrap().pair)
        .collect();
    c.bench_function("classify rank 4", |b| {
        b.iter(|| pairs.iter().map(|p| classify_pair(p).unwrap().dim_orbit).sum::<usize>())
    });
    let st = Stabilizers::new(space);
    c.bench_function("stabilizer dims rank 4", |b| {
        b.iter(|| pairs.iter().map(|p| st.stabilizer_dim(p, true)).sum::<usize>())
    });
}

fn characters(c: &mut Criterion) {
    let mut group = c.benchmark_group("character table");
    for n in [4usize, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(CharacterTable::build(n).values.len()))
        });
    }
    group.finish();
    c.bench_function("restriction n=6", |b| b.iter(|| verify_restriction(6).unwrap().passed()));
    c.bench_function("determine n=5", |b| b.iter(|| determine_correspondence(5).unwrap().is_identity()));
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    let opts = CensusOptions { orbit_checks: false, ..CensusOptions::default() };
    group.bench_function("n=2 p=3", |b| b.iter(|| orbit_census(2, 3, &opts).unwrap().total_points));
    group.finish();
}

criterion_group!(benches, linear_algebra, classification, characters, census);
criterion_main!(benches);
