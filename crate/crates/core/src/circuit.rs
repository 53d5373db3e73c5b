//! Clifford circuits acting on Pauli strings by conjugation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteId};
use crate::pauli::PauliString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    CZ(usize, usize),
    /// Control, target.
    CX(usize, usize),
    X(usize),
    Z(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `U P U^dagger`
    UPUdag,
    /// `U^dagger P U`
    UdagPU,
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(a) | Gate::X(a) | Gate::Z(a) => vec![a],
            Gate::CZ(a, b) | Gate::CX(a, b) => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::CZ(..) => "CZ",
            Gate::CX(..) => "CX",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
        }
    }

    /// `p <- g p g^dagger`. Every gate is self-inverse, so this is also `g^dagger p g`.
    pub fn conjugate_in_place(&self, p: &mut PauliString) {
        match *self {
            Gate::H(a) => {
                let (z, x) = (p.z(a), p.x(a));
                if z && x {
                    p.add_phase(2);
                }
                p.set_z(a, x);
                p.set_x(a, z);
            }
            Gate::CZ(a, b) => {
                let (xa, xb) = (p.x(a), p.x(b));
                if xa {
                    p.flip_z(b);
                }
                if xb {
                    p.flip_z(a);
                }
                if xa && xb {
                    p.add_phase(2);
                }
            }
            Gate::CX(c, t) => {
                if p.x(c) {
                    p.flip_x(t);
                }
                if p.z(t) {
                    p.flip_z(c);
                }
            }
            Gate::X(a) => {
                if p.z(a) {
                    p.add_phase(2);
                }
            }
            Gate::Z(a) => {
                if p.x(a) {
                    p.add_phase(2);
                }
            }
        }
    }
}

pub fn gate_conjugate(g: &Gate, p: &PauliString, _direction: Direction) -> PauliString {
    let mut out = p.clone();
    g.conjugate_in_place(&mut out);
    out
}

/// Ordered gate list; the first gate acts first, so the circuit operator is `g_n ... g_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordCircuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n_qubits: usize) -> Self {
        CliffordCircuit { n_qubits, gates: Vec::new() }
    }

    pub fn with_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            let qs = g.qubits();
            if qs.iter().any(|&q| q >= n_qubits) {
                return Err(Error::InvalidSpec(format!("gate {g:?} outside {n_qubits} qubits")));
            }
            if qs.len() == 2 && qs[0] == qs[1] {
                return Err(Error::InvalidSpec(format!("gate {g:?} repeats a qubit")));
            }
        }
        Ok(CliffordCircuit { n_qubits, gates })
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn conjugate(&self, p: &PauliString, direction: Direction) -> PauliString {
        let mut out = p.clone();
        match direction {
            Direction::UPUdag => self.gates.iter().for_each(|g| g.conjugate_in_place(&mut out)),
            Direction::UdagPU => self.gates.iter().rev().for_each(|g| g.conjugate_in_place(&mut out)),
        }
        out
    }

    /// Operator product `a * b`: `b` acts first.
    pub fn compose(a: &CliffordCircuit, b: &CliffordCircuit) -> Result<CliffordCircuit> {
        if a.n_qubits != b.n_qubits {
            return Err(Error::LatticeMismatch(a.n_qubits, b.n_qubits));
        }
        let mut gates = b.gates.clone();
        gates.extend_from_slice(&a.gates);
        Ok(CliffordCircuit { n_qubits: a.n_qubits, gates })
    }

    pub fn then(mut self, next: &CliffordCircuit) -> CliffordCircuit {
        assert_eq!(self.n_qubits, next.n_qubits);
        self.gates.extend_from_slice(&next.gates);
        self
    }

    pub fn invert(&self) -> CliffordCircuit {
        CliffordCircuit { n_qubits: self.n_qubits, gates: self.gates.iter().rev().copied().collect() }
    }

    /// Line-oriented gate file: `CZ (0.5,0.5) (0,0)`, first line acts first.
    pub fn to_gatefile(&self, lattice: &Lattice) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(g.name());
            for q in g.qubits() {
                out.push(' ');
                out.push_str(&lattice.site(q).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn from_gatefile(lattice: &Lattice, text: &str) -> Result<CliffordCircuit> {
        let lookup = |s: &str| -> Result<usize> {
            let site: SiteId = s.parse()?;
            lattice
                .index_of(site)
                .filter(|&q| lattice.site(q) == site)
                .ok_or_else(|| Error::Parse(format!("unknown site {s}")))
        };
        let mut gates = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: {line}", ln + 1));
            let g = match (toks[0], toks.len()) {
                ("H", 2) => Gate::H(lookup(toks[1])?),
                ("X", 2) => Gate::X(lookup(toks[1])?),
                ("Z", 2) => Gate::Z(lookup(toks[1])?),
                ("CZ", 3) => Gate::CZ(lookup(toks[1])?, lookup(toks[2])?),
                ("CX", 3) => Gate::CX(lookup(toks[1])?, lookup(toks[2])?),
                _ => return Err(bad()),
            };
            gates.push(g);
        }
        CliffordCircuit::with_gates(lattice.n_qubits(), gates)
    }
}

pub fn circuit_conjugate(c: &CliffordCircuit, p: &PauliString, direction: Direction) -> PauliString {
    c.conjugate(p, direction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    #[test]
    fn single_gate_rules() {
        let x0 = PauliString::single(2, 0, Pauli::X);
        let z0 = PauliString::single(2, 0, Pauli::Z);
        assert_eq!(gate_conjugate(&Gate::H(0), &x0, Direction::UPUdag), z0);
        let img = gate_conjugate(&Gate::CZ(0, 1), &x0, Direction::UPUdag);
        assert_eq!(img, PauliString::z_on(2, [1]).multiply(&x0).unwrap());
        let y0 = PauliString::single(2, 0, Pauli::Y);
        let img = gate_conjugate(&Gate::CX(0, 1), &y0, Direction::UPUdag);
        let mut want = y0.clone();
        want.flip_x(1);
        assert_eq!(img, want);
        // H Y H = -Y
        assert_eq!(gate_conjugate(&Gate::H(0), &y0, Direction::UPUdag), y0.neg());
    }

    #[test]
    fn compose_order() {
        let a = CliffordCircuit::with_gates(2, vec![Gate::H(0)]).unwrap();
        let b = CliffordCircuit::with_gates(2, vec![Gate::CX(0, 1)]).unwrap();
        let ab = CliffordCircuit::compose(&a, &b).unwrap();
        assert_eq!(ab.gates, vec![Gate::CX(0, 1), Gate::H(0)]);
        let x0 = PauliString::single(2, 0, Pauli::X);
        let step = a.conjugate(&b.conjugate(&x0, Direction::UPUdag), Direction::UPUdag);
        assert_eq!(ab.conjugate(&x0, Direction::UPUdag), step);
        assert!(CliffordCircuit::compose(&a, &CliffordCircuit::new(3)).is_err());
    }

    #[test]
    fn gatefile_round_trip() {
        let l = Lattice::torus(3, 3).unwrap();
        let c = CliffordCircuit::with_gates(
            l.n_qubits(),
            vec![
                Gate::H(l.aux(0, 0).unwrap()),
                Gate::CZ(l.aux(0, 0).unwrap(), l.phys(0, 0).unwrap()),
                Gate::CX(l.phys(1, 2).unwrap(), l.phys(1, 1).unwrap()),
            ],
        )
        .unwrap();
        let text = c.to_gatefile(&l);
        assert_eq!(text, "H (0.5,0.5)\nCZ (0.5,0.5) (0,0)\nCX (1,2) (1,1)\n");
        assert_eq!(CliffordCircuit::from_gatefile(&l, &text).unwrap(), c);
    }
}
