use std::hint::black_box;

use chromatika::click::{random_relevance, relevance, simulate_survey};
use chromatika::color::{assignment_cost, hungarian, nearest_palettes, wed_distance, Palette5, WeightedColorHistogram};
use chromatika::corpus::{generate_synthetic_corpus, SyntheticConfig, TOTAL_BINS};
use chromatika::lda::{HyperParams, SamplerState};
use chromatika::Matrix;
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gibbs(c: &mut Criterion) {
    let synth = generate_synthetic_corpus(&SyntheticConfig { seed: 1, ..Default::default() }).unwrap();
    let docs = &synth.corpus.documents;
    let hp = HyperParams { k: 3, ..Default::default() };
    let mut state = SamplerState::random(docs, 30, synth.corpus.vocabulary.len(), hp.k, 0).unwrap();
    c.bench_function("gibbs_sweep_200x400", |b| b.iter(|| state.sweep(black_box(&hp))));
}

fn random_hist(rng: &mut ChaCha8Rng, support: usize) -> WeightedColorHistogram {
    let mut w = vec![0.0; TOTAL_BINS];
    for _ in 0..support {
        w[rng.random_range(0..TOTAL_BINS)] += rng.random_range(0.05..1.0);
    }
    WeightedColorHistogram::normalized(&w).unwrap()
}

fn color(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cost = Matrix::from_vec(5, 40, (0..200).map(|_| rng.random_range(0.0..100.0)).collect()).unwrap();
    c.bench_function("hungarian_5x40", |b| b.iter(|| hungarian(black_box(&cost)).unwrap()));
    c.bench_function("assignment_cost_5x40", |b| b.iter(|| assignment_cost(black_box(&cost)).unwrap()));

    let hist = random_hist(&mut rng, 120);
    let pool: Vec<Palette5> = (0..500).map(|_| Palette5::new(std::array::from_fn(|_| rng.random()))).collect();
    c.bench_function("wed_distance_support_120", |b| b.iter(|| wed_distance(black_box(&hist), &pool[0]).unwrap()));
    c.bench_function("nearest_palettes_pool_500", |b| b.iter(|| nearest_palettes(black_box(&hist), &pool, 5).unwrap()));
}

fn click(c: &mut Criterion) {
    let r = random_relevance(12, 0.9, 3);
    c.bench_function("simulate_survey_12x1000", |b| {
        b.iter(|| simulate_survey(&r, &[0.33, 0.36, 0.34], 1000, 1).unwrap())
    });
    c.bench_function("relevance_12x1000", |b| {
        b.iter_batched(
            || simulate_survey(&r, &[0.33, 0.36, 0.34], 1000, 1).unwrap(),
            |trials| relevance(&trials, 12).unwrap(),
            BatchSize::LargeInput,
        )
    });
}

criterion_group!(benches, gibbs, color, click);
criterion_main!(benches);
