use latticefusion::model::{build_fracton_membrane, flipped_bonds, p_plus, MembraneExtent};
use latticefusion::pauli::{rank, same_group};
use latticefusion::simulator::StateVector;
use latticefusion::{CliffordCircuit, Direction, Gate, Lattice, PauliProjector, PauliString, SymplecticBasis};
use num_complex::Complex64;
use proptest::prelude::*;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (proptest::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(ops, ph)| {
        let mut p = PauliString::identity(n).with_phase(ph);
        for (q, o) in ops.into_iter().enumerate() {
            p.set_z(q, o & 1 == 1);
            p.set_x(q, o & 2 == 2);
        }
        p
    })
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..5u8, 0..n, 1..n).prop_map(move |(k, a, d)| {
        let b = (a + d) % n;
        match k {
            0 => Gate::H(a),
            1 => Gate::CZ(a, b),
            2 => Gate::CX(a, b),
            3 => Gate::X(a),
            _ => Gate::Z(a),
        }
    })
}

fn circuit(n: usize, len: usize) -> impl Strategy<Value = CliffordCircuit> {
    proptest::collection::vec(gate(n), 0..len).prop_map(move |g| CliffordCircuit::with_gates(n, g).unwrap())
}

fn dense(p: &PauliString, psi: &StateVector) -> StateVector {
    psi.apply_pauli(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_is_associative(a in pauli(70), b in pauli(70), c in pauli(70)) {
        let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inverse_gives_identity(a in pauli(70)) {
        prop_assert!(a.multiply(&a.inverse()).unwrap() == PauliString::identity(70));
    }

    #[test]
    fn commutation_matches_products(a in pauli(70), b in pauli(70)) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        prop_assert_eq!(a.commutes(&b).unwrap(), ab == ba);
        if !a.commutes(&b).unwrap() {
            prop_assert_eq!(ab, ba.neg());
        }
    }

    #[test]
    fn symbolic_product_matches_dense(a in pauli(5), b in pauli(5), seed in any::<u64>()) {
        let psi = StateVector::random(5, seed).unwrap();
        let lhs = dense(&a, &dense(&b, &psi));
        let rhs = dense(&a.multiply(&b).unwrap(), &psi);
        prop_assert!(lhs.distance(&rhs) < 1e-12);
    }

    #[test]
    fn conjugation_is_an_automorphism(c in circuit(70, 60), a in pauli(70), b in pauli(70)) {
        let ca = c.conjugate(&a, Direction::UPUdag);
        let cb = c.conjugate(&b, Direction::UPUdag);
        prop_assert_eq!(c.conjugate(&a.multiply(&b).unwrap(), Direction::UPUdag), ca.multiply(&cb).unwrap());
        prop_assert_eq!(ca.commutes(&cb).unwrap(), a.commutes(&b).unwrap());
        prop_assert_eq!(ca.is_hermitian(), a.is_hermitian());
    }

    #[test]
    fn inverse_circuit_undoes_conjugation(c in circuit(70, 60), a in pauli(70)) {
        let fwd = c.conjugate(&a, Direction::UPUdag);
        prop_assert_eq!(c.invert().conjugate(&fwd, Direction::UPUdag), a.clone());
        prop_assert_eq!(c.conjugate(&fwd, Direction::UdagPU), a);
    }

    #[test]
    fn conjugation_matches_dense(c in circuit(5, 20), a in pauli(5), seed in any::<u64>()) {
        // <psi| U^dag P U |psi> = <U psi| P |U psi>
        let psi = StateVector::random(5, seed).unwrap();
        let upsi = psi.apply_circuit(&c).unwrap();
        let lhs = psi.expectation(&c.conjugate(&a, Direction::UdagPU)).unwrap();
        let rhs = upsi.expectation(&a).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn products_of_generators_are_in_span(gens in proptest::collection::vec(pauli(70), 1..8), pick in any::<u8>()) {
        let basis = SymplecticBasis::new(&gens);
        prop_assert!(basis.rank() <= gens.len());
        let mut p = PauliString::identity(70);
        for (k, g) in gens.iter().enumerate() {
            if pick >> (k % 8) & 1 == 1 {
                p = p.multiply(g).unwrap();
            }
        }
        prop_assert!(basis.contains(&p));
        prop_assert!(same_group(&gens, basis.generators()));
    }

    #[test]
    fn rank_is_invariant_under_clifford(c in circuit(70, 40), gens in proptest::collection::vec(pauli(70), 1..8)) {
        let imgs: Vec<PauliString> = gens.iter().map(|g| c.conjugate(g, Direction::UPUdag)).collect();
        prop_assert_eq!(rank(&imgs), rank(&gens));
    }

    #[test]
    fn gatefile_round_trip(c in circuit(14, 40)) {
        let l = Lattice::torus(3, 3).unwrap();
        let text = c.to_gatefile(&l);
        prop_assert_eq!(CliffordCircuit::from_gatefile(&l, &text).unwrap(), c);
    }

    #[test]
    fn projector_is_idempotent(seed in any::<u64>()) {
        let l = Lattice::torus(3, 3).unwrap();
        let psi = StateVector::random(l.n_qubits(), seed).unwrap();
        let pp = p_plus(&l);
        let once = psi.apply_projector(&pp).unwrap();
        let twice = once.apply_projector(&pp).unwrap();
        prop_assert!(once.distance(&twice) < 1e-12);
        // Hermitian: <psi|P|psi> = ||P psi||^2
        prop_assert!((psi.inner(&once) - Complex64::new(once.norm_sqr(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn membranes_square_to_identity(i in 0i64..3, j in 0i64..3, w in 1i64..3, h in 1i64..3) {
        let l = Lattice::torus(6, 6).unwrap();
        let m = build_fracton_membrane(&l, i, j, MembraneExtent::Rect(i + w, j + h)).unwrap();
        prop_assert!(m.multiply(&m).unwrap().is_identity());
        prop_assert_eq!(flipped_bonds(&l, &m).len(), 4);
    }
}

#[test]
fn projector_rejects_noncommuting() {
    let a = PauliString::x_on(2, [0]);
    let b = PauliString::z_on(2, [0]);
    assert!(PauliProjector::new(vec![a, b]).is_err());
}
