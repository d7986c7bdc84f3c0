use std::hint::black_box;

use colldeco_bench::{grid, light_gas, momentum_cat, position_cat, skew_cat, tracer};
use colldeco_core::engine::{momentum_decoherence_from_parameter, sine_gauss_integral, sine_gauss_integral_quadrature};
use colldeco_core::special::dawson;
use colldeco_core::thermal::stream_rng;
use colldeco_core::wigner::oracle_wigner_at;
use colldeco_core::{collide_cat, mc_decoherence, wigner_at, wigner_grid, CollisionSampler, Constants};
use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};

fn special_functions(c: &mut Criterion) {
    let mut group = c.benchmark_group("special");
    group.bench_function("dawson", |b| b.iter(|| dawson(black_box(2.7))));
    group.bench_function("kernel_closed_form", |b| b.iter(|| sine_gauss_integral(black_box(3.0))));
    group.bench_function("kernel_quadrature", |b| b.iter(|| sine_gauss_integral_quadrature(black_box(3.0)).unwrap()));
    group.bench_function("momentum_series", |b| b.iter(|| momentum_decoherence_from_parameter(black_box(0.3))));
    group.finish();
}

fn wigner(c: &mut Criterion) {
    let consts = Constants::default();
    let cat = skew_cat();
    let mut group = c.benchmark_group("wigner");
    group.bench_function("closed_form_point", |b| b.iter(|| wigner_at(&cat, black_box(7.5), black_box(0.7), &consts)));
    group.sample_size(10);
    group.bench_function("oracle_point", |b| {
        b.iter(|| oracle_wigner_at(&cat, black_box(7.5), black_box(0.7), &consts).unwrap())
    });
    for n in [64, 256] {
        let spec = grid(n);
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::new("grid", n), &spec, |b, spec| {
            b.iter(|| wigner_grid(&position_cat(), spec, &consts).unwrap())
        });
    }
    group.finish();
}

fn collisions(c: &mut Criterion) {
    let env = light_gas(0.5);
    let tracer = tracer();
    let sampler = CollisionSampler::new(&env, 20.0).unwrap();
    let alpha = env.mass_ratio(&tracer);
    let cat = momentum_cat();
    let mut group = c.benchmark_group("collision");
    group.bench_function("sample_and_collide", |b| {
        b.iter_batched(
            || stream_rng(1, 0),
            |mut rng| collide_cat(&cat, &sampler.sample(&mut rng), alpha, &env.consts),
            BatchSize::SmallInput,
        )
    });
    group.sample_size(10);
    for n in [1_000usize, 10_000] {
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("mc_position", n), &n, |b, &n| {
            b.iter(|| mc_decoherence(&position_cat(), &light_gas(0.2), &tracer, 20.0, n, 3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, special_functions, wigner, collisions);
criterion_main!(benches);
