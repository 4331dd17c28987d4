use criterion::{black_box, criterion_group, criterion_main, Criterion};

use weylkit::axioms::{certify, Level, Limits};
use weylkit::cover::{universal_cover, DEFAULT_COVER_CAP};
use weylkit::coxeter::{CoxeterMatrix, Order, Word};
use weylkit::fixtures;
use weylkit::homotopy::HomotopyTable;
use weylkit::presentation::{fundamental_group_presentation, TreeChoice};
use weylkit::weyl::ChamberId;

fn coxeter(c: &mut Criterion) {
    let h3 = CoxeterMatrix::linear(&["s", "t", "u"], &[Order::Finite(5), Order::Finite(3)]).unwrap();
    c.bench_function("enumerate H3", |b| b.iter(|| h3.enumerate_elements(black_box(1000)).unwrap().len()));
    let w = Word::new((0..30).map(|k| [0, 1, 2, 1][k % 4]).collect());
    c.bench_function("reduce word of length 30 in H3", |b| b.iter(|| h3.reduce(black_box(&w))));
}

fn certification(c: &mut Criterion) {
    let fano = fixtures::fano();
    c.bench_function("certify Fano to building", |b| {
        b.iter(|| certify(black_box(&fano), Level::Building, &Limits::default()).report.level)
    });
}

fn covers(c: &mut Criterion) {
    let fano = fixtures::fano();
    let cert = certify(&fano, Level::PreWeyl, &Limits::default());
    c.bench_function("universal cover of Fano", |b| {
        b.iter(|| universal_cover(&fano, &cert.index, ChamberId(0), None, DEFAULT_COVER_CAP).unwrap().data.n_chambers())
    });
    let one = fixtures::thin_one_chamber(6);
    c.bench_function("homotopy table of one-chamber I2(6)", |b| {
        b.iter(|| HomotopyTable::build(black_box(&one), ChamberId(0), 100_000).unwrap())
    });
}

fn presentations(c: &mut Criterion) {
    let fano = fixtures::fano();
    c.bench_function("presentation of Fano with Tietze", |b| {
        b.iter(|| fundamental_group_presentation(black_box(&fano), &TreeChoice::Least).unwrap().tietze())
    });
}

criterion_group!(benches, coxeter, certification, covers, presentations);
criterion_main!(benches);
