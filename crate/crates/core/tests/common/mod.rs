#![allow(dead_code)]

use latticefusion::model::plaquette;
use latticefusion::{Coupling, Lattice, OperatorSum, PauliString};

/// Builds a Pauli string from tokens like `Z(1,0)`, `X(2,2)`, `sx(0,1)`, `sz(3,0)`, `B(2,2)`.
/// Auxiliary tokens use the anchor of the dual site.
pub fn op(l: &Lattice, text: &str) -> PauliString {
    let n = l.n_qubits();
    let mut p = PauliString::identity(n);
    for tok in text.split_whitespace() {
        let (name, rest) = tok.split_once('(').expect("token");
        let (a, b) = rest.trim_end_matches(')').split_once(',').expect("coords");
        let (i, j): (i64, i64) = (a.parse().unwrap(), b.parse().unwrap());
        let f = match name {
            "Z" => PauliString::z_on(n, [l.phys(i, j).unwrap()]),
            "X" => PauliString::x_on(n, [l.phys(i, j).unwrap()]),
            "sz" => PauliString::z_on(n, [l.aux(i, j).expect("aux")]),
            "sx" => PauliString::x_on(n, [l.aux(i, j).expect("aux")]),
            "B" => plaquette(l, i, j).unwrap(),
            _ => panic!("unknown factor {name}"),
        };
        p = p.multiply(&f).unwrap();
    }
    p
}

/// All terms carry sign -1: `-g^-1` on plaquette-type, `-g` on field-type.
pub fn oracle(l: &Lattice, terms: &[(Coupling, &str)]) -> OperatorSum {
    let mut h = OperatorSum::new(l.n_qubits());
    for (c, t) in terms {
        h.push(op(l, t), *c, -1).unwrap();
    }
    h
}

use Coupling::{KField as F, KPlaq as P};

/// 4x3 torus, extended Hamiltonian after `U_s`.
pub fn post_us_4x3(l: &Lattice) -> OperatorSum {
    oracle(
        l,
        &[
            (P, "sx(0,0) Z(0,0)"),
            (F, "X(0,0)"),
            (P, "sx(1,0) Z(1,0) Z(2,0)"),
            (F, "X(1,0) sz(0,2) sz(0,0)"),
            (P, "sx(0,1) Z(0,1) Z(0,2)"),
            (F, "X(0,1) sz(3,0) sz(0,0)"),
            (P, "sx(2,0) Z(2,0) Z(3,0)"),
            (F, "X(2,0)"),
            (P, "sx(3,0) Z(3,0) Z(0,0)"),
            (F, "X(3,0)"),
            (P, "sx(0,2) Z(0,2) Z(0,0)"),
            (F, "X(0,2)"),
            (P, "B(1,1)"),
            (F, "X(1,1) sz(0,1) sz(1,0) sz(0,0)"),
            (P, "B(1,2)"),
            (F, "X(1,2) sz(0,2) sz(0,1)"),
            (P, "B(2,1)"),
            (F, "X(2,1) sz(2,0) sz(1,0)"),
            (P, "B(3,1)"),
            (F, "X(3,1) sz(3,0) sz(2,0)"),
            (P, "B(2,2)"),
            (F, "X(2,2)"),
            (P, "B(3,2)"),
            (F, "X(3,2)"),
        ],
    )
}

/// 4x3 torus, extended Hamiltonian after `U_s` and the first movement step.
pub fn post_move1_4x3(l: &Lattice) -> OperatorSum {
    oracle(
        l,
        &[
            // tears
            (P, "sx(1,0) X(1,0)"),
            (F, "Z(1,0) Z(1,2) sz(0,2) sz(0,0)"),
            (P, "sx(0,1) X(0,1)"),
            (F, "Z(0,1) Z(3,1) sz(3,0) sz(0,0)"),
            (P, "sx(0,0) Z(0,0)"),
            (F, "X(0,0)"),
            // intersection with the defect lines
            (P, "sx(2,0) Z(2,0) Z(3,0)"),
            (F, "X(2,0) Z(1,0) Z(1,2)"),
            (P, "sx(0,2) Z(0,2) Z(0,0)"),
            (F, "X(0,2) Z(0,1) Z(3,1)"),
            // outer edge
            (P, "sx(3,0) Z(3,0) Z(0,0)"),
            (F, "X(3,0)"),
            // duality-transformed region
            (P, "X(1,1)"),
            (F, "Z(1,1) sz(1,0) sz(0,1) sz(0,0)"),
            (P, "X(1,2)"),
            (F, "Z(1,2) Z(1,1) sz(0,1) sz(0,2)"),
            (P, "X(2,1)"),
            (F, "Z(2,1) Z(1,1) sz(1,0) sz(2,0)"),
            (P, "X(3,1)"),
            (F, "Z(3,1) Z(2,1) sz(2,0) sz(3,0)"),
            // inner corner and edge
            (P, "B(2,2)"),
            (F, "X(2,2) Z(2,1) Z(1,2) Z(1,1)"),
            (P, "B(3,2)"),
            (F, "X(3,2) Z(3,1) Z(2,1)"),
        ],
    )
}
