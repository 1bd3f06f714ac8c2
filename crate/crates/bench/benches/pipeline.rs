use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sheetlint::eval::{analyze_workbook, EvalConfig};
use sheetlint::smells::{run_detectors, CellChains, DetectorConfig};
use sheetlint::structure::StructureModel;
use sheetlint_bench::{chain_workbook, department_workbook};

fn structure(c: &mut Criterion) {
    let mut g = c.benchmark_group("structure");
    for rows in [10, 50, 200] {
        let wb = department_workbook(4, rows, 12);
        g.bench_with_input(BenchmarkId::from_parameter(rows), &wb, |b, wb| {
            b.iter(|| StructureModel::build(black_box(wb)))
        });
    }
    g.finish();
}

fn detectors(c: &mut Criterion) {
    let wb = department_workbook(4, 50, 12);
    let model = StructureModel::build(&wb);
    let cfg = DetectorConfig::default();
    c.bench_function("detectors/all", |b| {
        b.iter(|| run_detectors(black_box(&wb), &model, &cfg))
    });
    let tags = EvalConfig::default().tags();
    c.bench_function("eval/analyze_workbook", |b| {
        b.iter(|| analyze_workbook(black_box(&wb), "bench", &tags))
    });
}

fn chains(c: &mut Criterion) {
    let mut g = c.benchmark_group("cell_chains");
    for cols in [20, 100, 400] {
        let wb = chain_workbook(20, cols);
        g.bench_with_input(BenchmarkId::from_parameter(cols), &wb, |b, wb| {
            b.iter(|| CellChains::compute(black_box(wb)))
        });
    }
    g.finish();
}

criterion_group!(benches, structure, detectors, chains);
criterion_main!(benches);
