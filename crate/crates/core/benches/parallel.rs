use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use dgker::category::DgCategory;
use dgker::corpus;
use dgker::kernel::{compose_kernels, unit_kernel};
use dgker::linalg::Field;
use dgker::module::{module_hom_complex, DgModule};
use dgker::par;

fn workloads(c: &mut Criterion) {
    let field = Field::Prime(3);
    let a3 = corpus::a3(field);
    let dual = corpus::dual_numbers(field);
    let big = Arc::new(DgCategory::tensor(&a3, &dual).unwrap());
    let modules: Vec<Arc<DgModule>> = corpus::module_battery(&big)
        .into_iter()
        .map(|(_, m)| Arc::new(m))
        .collect();
    let unit = unit_kernel(&big);

    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        let mut group = c.benchmark_group(label);
        group.sample_size(10);
        group.bench_function("validate A3⊗dual", |b| {
            par::set_parallel(parallel);
            b.iter(|| big.validate())
        });
        group.bench_function("hom complexes over A3⊗dual", |b| {
            par::set_parallel(parallel);
            b.iter(|| {
                for m in &modules {
                    for n in modules.iter().take(4) {
                        module_hom_complex(m, n).unwrap();
                    }
                }
            })
        });
        group.bench_function("compose unit kernels of A3⊗dual", |b| {
            par::set_parallel(parallel);
            b.iter(|| compose_kernels(&unit, &unit).unwrap())
        });
        group.finish();
    }
    par::set_parallel(true);
}

criterion_group!(benches, workloads);
criterion_main!(benches);
