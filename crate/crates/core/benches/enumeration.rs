//! Corpus suite and single-instance checks on a one-thread pool versus the
//! default pool. Build with `--no-default-features` for the plain
//! sequential kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use modtop::instance::{corpus, InstanceSpec};
use modtop::suite::{run_instance, run_suite, SuiteOptions};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1-thread", one), ("default", all)]
}

fn suite(c: &mut Criterion) {
    let specs = corpus();
    let opts = SuiteOptions::default();
    let mut group = c.benchmark_group("corpus");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| run_suite(&specs, &opts)))
        });
    }
    group.finish();
}

fn single(c: &mut Criterion) {
    let opts = SuiteOptions::default();
    let mut group = c.benchmark_group("instance");
    group.sample_size(10);
    for sh in ["zmod:36", "product:2,2,2", "matrix:2:2"] {
        let spec = InstanceSpec::from_shorthand(sh).unwrap();
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(sh, name), &spec, |b, spec| {
                b.iter(|| pool.install(|| run_instance(spec, &opts)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suite, single);
criterion_main!(benches);
