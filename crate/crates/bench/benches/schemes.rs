use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use relaycache::erasure::ErasureCode;
use relaycache::harness::{auto_file_bytes, Prepared, SchemeId};
use relaycache::topology::baranyai_partition;
use relaycache::Rational;
use relaycache_bench::fixture;

fn deliver_and_decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("comb(6,2) N=50 M=10");
    let m = Rational::from_integer(10);
    let (net, _, _) = fixture(6, 2, 50, 1).unwrap();
    let bytes = auto_file_bytes(&net, 50, &[m], &SchemeId::ALL).unwrap();
    let (net, lib, demand) = fixture(6, 2, 50, bytes).unwrap();
    for scheme in SchemeId::ALL {
        let prepared = Prepared::new(&net, &lib, m, scheme).unwrap();
        group.bench_function(BenchmarkId::new("deliver", scheme), |b| {
            b.iter(|| prepared.deliver(black_box(&demand)).unwrap())
        });
        let log = prepared.deliver(&demand).unwrap();
        group.bench_function(BenchmarkId::new("decode", scheme), |b| {
            b.iter(|| prepared.decode(&log, black_box(0), demand.get(0)).unwrap())
        });
    }
    group.finish();
}

fn baranyai(c: &mut Criterion) {
    let mut group = c.benchmark_group("baranyai");
    for (h, r) in [(10, 2), (8, 4), (9, 3), (12, 3)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{h},{r}")),
            &(h, r),
            |b, &(h, r)| b.iter(|| baranyai_partition(black_box(h), r).unwrap()),
        );
    }
    group.finish();
}

fn erasure(c: &mut Criterion) {
    let mut group = c.benchmark_group("erasure");
    let payload: Vec<u8> = (0..1 << 16).map(|i| (i * 31 % 251) as u8).collect();
    group.throughput(Throughput::Bytes(payload.len() as u64));
    for (n, k) in [(4, 2), (6, 3), (10, 4)] {
        let code = ErasureCode::new(n, k).unwrap();
        let pieces = code.encode_padded(&payload).unwrap();
        let tail: Vec<(usize, Vec<u8>)> = (n - k + 1..=n)
            .map(|i| (i, pieces[i - 1].clone()))
            .collect();
        group.bench_function(BenchmarkId::new("encode", format!("{n},{k}")), |b| {
            b.iter(|| code.encode_padded(black_box(&payload)).unwrap())
        });
        group.bench_function(BenchmarkId::new("decode-parity", format!("{n},{k}")), |b| {
            b.iter(|| code.decode_padded(black_box(&tail), payload.len()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, deliver_and_decode, baranyai, erasure);
criterion_main!(benches);
