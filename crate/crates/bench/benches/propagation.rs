use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use latticefusion::gauging::partial_gauge;
use latticefusion::model::{build_xm, p_plus};
use latticefusion::pauli::rank;
use latticefusion::simulator::{nso_apply, random_physical_state};
use latticefusion::{duality_unitary, verify_automorphism, Direction, GaugeRegion, Lattice, LatticeSpec};

fn automorphism(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_automorphism");
    for (lx, ly) in [(4, 3), (8, 5), (12, 12)] {
        let l = Lattice::torus(lx, ly).unwrap();
        let u = duality_unitary(&l).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("{lx}x{ly}")), &(l, u), |b, (l, u)| {
            b.iter(|| verify_automorphism(l, u).unwrap())
        });
    }
    g.finish();
}

fn conjugate_hamiltonian(c: &mut Criterion) {
    let l = Lattice::torus(12, 12).unwrap();
    let u = duality_unitary(&l).unwrap();
    let h = build_xm(&l, true);
    c.bench_function("conjugate extended H 12x12", |b| b.iter(|| h.conjugate(&u, Direction::UPUdag).unwrap()));
}

fn projector_rank(c: &mut Criterion) {
    let l = Lattice::torus(12, 12).unwrap();
    let u = duality_unitary(&l).unwrap();
    let u2 = u.clone().then(&u);
    let gens: Vec<_> = p_plus(&l).generators().iter().map(|g| u2.conjugate(g, Direction::UPUdag)).collect();
    c.bench_function("rank of U^2 sigma^z images 12x12", |b| b.iter(|| rank(black_box(&gens))));
    c.bench_function("partial gauge 6x6 / 4x3", |b| {
        b.iter(|| partial_gauge(LatticeSpec::torus(6, 6), GaugeRegion { qx: 0, qy: 0, sx: 4, sy: 3 }).unwrap())
    });
}

fn dense(c: &mut Criterion) {
    let l = Lattice::torus(3, 3).unwrap();
    let psi = random_physical_state(&l, 0).unwrap();
    c.bench_function("dense D on 3x3", |b| b.iter(|| nso_apply(black_box(&psi), &l).unwrap()));
}

criterion_group!(benches, automorphism, conjugate_hamiltonian, projector_rank, dense);
criterion_main!(benches);
