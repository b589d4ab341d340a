use criterion::{criterion_group, criterion_main, Criterion};

use veronese_core::exec::Execution;
use veronese_core::orbits::{census, CensusOptions};
use veronese_core::planes::PlaneClassifier;
use veronese_core::Field;

fn bench_census(c: &mut Criterion) {
    let f = Field::new(2).unwrap();
    let pc = PlaneClassifier::new(&f).unwrap();
    let mut group = c.benchmark_group("census_q4");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(name, |b| b.iter(|| census(&pc, CensusOptions { exec, shards: 0 }).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_census);
criterion_main!(benches);
