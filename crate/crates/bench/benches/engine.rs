use criterion::{criterion_group, criterion_main, Criterion};

use clint_bench::{cubic, cusp, ideal, standard_sequence, truncated_maximal};
use clint_core::artinistic::{self, Window};
use clint_core::corehull::{self, Mode};
use clint_core::{Closure, Lattice, RingClosure};

fn interiors(c: &mut Criterion) {
    let m = cusp(5);
    let seq = standard_sequence(&m, 12);
    let i = ideal(&m, "(t^4 + t^5)");
    c.bench_function("tight interior of (t^4 + t^5) over F5", |b| {
        b.iter(|| artinistic::artinistic_interior(&i, &RingClosure::TightDim1, &seq, Window::default()).unwrap())
    });
    let m = cubic(5);
    let seq = standard_sequence(&m, 6);
    let i = ideal(&m, "(y, z)");
    let cl = RingClosure::Frobenius { e_max: 2 };
    c.bench_function("frobenius interior of (y, z) in the cubic over F5", |b| {
        b.iter(|| artinistic::artinistic_interior(&i, &cl, &seq, Window::default()).unwrap())
    });
}

fn hulls(c: &mut Criterion) {
    let m = cusp(7);
    let seq = standard_sequence(&m, 12);
    let i = ideal(&m, "(t^4, t^5)");
    c.bench_function("tight hull of (t^4, t^5) over F7", |b| {
        b.iter(|| artinistic::ideal_hull(&i, &RingClosure::TightDim1, &seq, Window::default()).unwrap())
    });
}

fn lattices(c: &mut Criterion) {
    let (model, reg, mm) = truncated_maximal(2, &[2, 3], 10);
    c.bench_function("submodule lattice of a cusp truncation over F2", |b| {
        b.iter(|| Lattice::enumerate(&reg, 20_000).unwrap().len())
    });
    let cl = Closure::integral(&model, &[10]).unwrap();
    c.bench_function("integral core of m by enumeration", |b| {
        b.iter(|| corehull::core(&cl, &reg, &mm, 20_000).unwrap())
    });
    c.bench_function("integral core of m via duality", |b| {
        b.iter(|| corehull::core_via_duality(&cl, &reg, &mm, 20_000).unwrap())
    });
    c.bench_function("minimal reduction of m by descent", |b| {
        b.iter(|| corehull::minimal_reductions(&cl, &reg, &mm, Mode::Descent, 20_000).unwrap())
    });
}

criterion_group!(benches, interiors, hulls, lattices);
criterion_main!(benches);
