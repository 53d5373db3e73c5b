//! Dense state vectors for the checks that need actual states.
//!
//! Basis index bit `q` is the computational value of qubit `q` in lattice order, so the
//! first-listed site is the least significant bit. Auxiliary `sigma^z = +1` is bit 0.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::circuit::{CliffordCircuit, Gate};
use crate::duality::{duality_unitary, p_eta};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteKind};
use crate::model::{p_plus, PauliProjector};
use crate::pauli::PauliString;
use crate::report::Report;

pub const DEFAULT_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_cap(n: usize) -> Result<()> {
    if n > DEFAULT_CAP {
        return Err(Error::TooManyQubits(n, DEFAULT_CAP));
    }
    Ok(())
}

fn bits(mask: &[u64]) -> u64 {
    mask.first().copied().unwrap_or(0)
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self> {
        check_cap(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_cap(n)?;
        if amps.len() != 1 << n {
            return Err(Error::SiteSetMismatch(amps.len(), 1 << n));
        }
        Ok(StateVector { n, amps })
    }

    /// Normalized complex Gaussian state on all qubits.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_cap(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let mut s = StateVector { n, amps };
        s.normalize();
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&mut self, c: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= c);
    }

    /// `self - other` in the 2-norm.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match *g {
            Gate::H(a) => {
                let m = 1usize << a;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (x, y) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (x + y) * s;
                        self.amps[i | m] = (x - y) * s;
                    }
                }
            }
            Gate::CZ(a, b) => {
                let m = (1usize << a) | (1usize << b);
                for (i, v) in self.amps.iter_mut().enumerate() {
                    if i & m == m {
                        *v = -*v;
                    }
                }
            }
            Gate::CX(c, t) => {
                let (mc, mt) = (1usize << c, 1usize << t);
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
            Gate::X(a) => {
                let m = 1usize << a;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Z(a) => {
                let m = 1usize << a;
                for (i, v) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *v = -*v;
                    }
                }
            }
        }
    }

    pub fn apply_circuit(&self, c: &CliffordCircuit) -> Result<StateVector> {
        if c.n_qubits != self.n {
            return Err(Error::LatticeMismatch(c.n_qubits, self.n));
        }
        let mut out = self.clone();
        for g in &c.gates {
            out.apply_gate(g);
        }
        Ok(out)
    }

    /// `P|b> = i^k (-1)^{|z & (b ^ x)|} |b ^ x>`.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<StateVector> {
        if p.n_qubits() != self.n {
            return Err(Error::SiteSetMismatch(p.n_qubits(), self.n));
        }
        let (z, x) = (bits(p.zmask()) as usize, bits(p.xmask()) as usize);
        let ph = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][p.phase() as usize];
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let t = b ^ x;
            let sign = if (z & t).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            amps[t] = a * ph * sign;
        }
        Ok(StateVector { n: self.n, amps })
    }

    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        Ok(self.inner(&self.apply_pauli(p)?))
    }

    /// Applies `(1 + g)/2` for each generator in turn; the result is not renormalized.
    pub fn apply_projector(&self, proj: &PauliProjector) -> Result<StateVector> {
        let mut out = self.clone();
        for g in proj.generators() {
            let gp = out.apply_pauli(g)?;
            out.amps.iter_mut().zip(&gp.amps).for_each(|(a, b)| *a = (*a + b) * 0.5);
        }
        Ok(out)
    }

    /// Moves the value of qubit `q` to qubit `perm[q]`.
    pub fn permute(&self, perm: &[usize]) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let mut t = 0usize;
            for (q, &p) in perm.iter().enumerate() {
                t |= ((b >> q) & 1) << p;
            }
            amps[t] = *a;
        }
        StateVector { n: self.n, amps }
    }
}

/// Random physical state: Gaussian amplitudes on physical qubits, auxiliaries in `|0>`.
pub fn random_physical_state(lattice: &Lattice, seed: u64) -> Result<StateVector> {
    let n = lattice.n_qubits();
    check_cap(n)?;
    let aux_mask: usize = (0..n).filter(|&q| lattice.site(q).kind() == SiteKind::Auxiliary).map(|q| 1 << q).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = (0..1usize << n)
        .map(|b| {
            if b & aux_mask == 0 {
                Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut s = StateVector { n, amps };
    s.normalize();
    Ok(s)
}

/// `D = U P+` applied to `state`.
pub fn nso_apply(state: &StateVector, lattice: &Lattice) -> Result<StateVector> {
    let u = duality_unitary(lattice)?;
    state.apply_projector(&p_plus(lattice))?.apply_circuit(&u)
}

#[derive(Debug, Clone, Copy)]
struct Trial {
    wigner: f64,
    isometry: f64,
    footnote: f64,
}

/// Wigner, isometry and `D^2` checks on random states.
///
/// The `D^2` comparison fits one complex constant `c` on the first trial so that
/// `D^2 psi = c P_eta T psi`, then requires the same constant on every later trial.
pub fn wigner_and_anomaly_suite(lattice: &Lattice, trials: usize, seed: u64) -> Result<Report> {
    check_cap(lattice.n_qubits())?;
    let n = lattice.n_qubits();
    let u = duality_unitary(lattice)?;
    let pp = p_plus(lattice);
    let pe = p_eta(lattice)?;
    let both = pe.concat(&pp)?;
    let d = |s: &StateVector| -> Result<StateVector> { s.apply_projector(&pp)?.apply_circuit(&u) };
    let mut rep = Report::new("nso-suite", Some(*lattice.spec()));

    let results: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(3 * t as u64);
            let a = random_physical_state(lattice, s)?;
            let c = random_physical_state(lattice, s + 1)?;
            // mix so that overlaps are not all tiny
            let mut b = a.clone();
            let w = (t as f64 + 1.0) / (trials as f64 + 1.0);
            b.amps.iter_mut().zip(&c.amps).for_each(|(x, y)| *x = *x * w + y * (1.0 - w));
            b.normalize();
            let lhs = d(&a)?.inner(&d(&b)?).norm_sqr();
            let rhs = a.inner(&b).norm_sqr();
            let g = StateVector::random(n, s + 2)?;
            let dg = d(&g)?;
            let isometry = (dg.norm_sqr() - g.inner(&g.apply_projector(&pp)?).re).abs();
            let dd = dg.apply_projector(&pp)?;
            let footnote = (dd.norm_sqr() - g.inner(&g.apply_projector(&both)?).re).abs();
            Ok(Trial { wigner: (lhs - rhs).abs(), isometry, footnote })
        })
        .collect();
    let results: Vec<Trial> = results.into_iter().collect::<Result<_>>()?;
    let max = |f: fn(&Trial) -> f64| results.iter().map(f).fold(0.0, f64::max);
    let (w, i, f) = (max(|t| t.wigner), max(|t| t.isometry), max(|t| t.footnote));
    rep.check("Wigner: |<Da|Db>|^2 = |<a|b>|^2", w < 1e-10, Some(format!("max delta {w:.3e} over {trials} pairs")));
    rep.check("<psi|D^dagger D|psi> = <psi|P+|psi>", i < 1e-10, Some(format!("max delta {i:.3e}")));
    rep.check("P+ D with P+ satisfies D^dagger D = P_eta P+", f < 1e-10, Some(format!("max delta {f:.3e}")));

    if lattice.is_torus() {
        let perm = lattice.translation(1, 1)?;
        let mut constant: Option<Complex64> = None;
        let mut residual: f64 = 0.0;
        for t in 0..trials.min(50) {
            let psi = random_physical_state(lattice, seed.wrapping_add(7919 * (t as u64 + 1)))?;
            let lhs = d(&d(&psi)?)?;
            let rhs = psi.permute(&perm).apply_projector(&pe)?;
            let c = *constant.get_or_insert_with(|| {
                let den = rhs.norm_sqr();
                if den > 0.0 { rhs.inner(&lhs) / den } else { Complex64::new(0.0, 0.0) }
            });
            let mut scaled = rhs.clone();
            scaled.scale(c);
            residual = residual.max(lhs.distance(&scaled));
        }
        let c = constant.unwrap_or_default();
        rep.check(
            "D^2 = c P_eta T(1,1) on physical states",
            residual < 1e-10 && c.norm() > 1e-6,
            Some(format!("c = {:.6}{:+.6}i (|c| = {:.6}), max residual {residual:.3e}", c.re, c.im, c.norm())),
        );
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Direction;

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::H(0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-12 && (s.amplitudes()[1].re - h).abs() < 1e-12);
        assert_eq!(StateVector::zero(23).err(), Some(Error::TooManyQubits(23, 22)));
    }

    #[test]
    fn physical_state_is_in_plus_sector() {
        let l = Lattice::torus(3, 3).unwrap();
        let s = random_physical_state(&l, 0).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let p = s.apply_projector(&p_plus(&l)).unwrap();
        assert!(p.distance(&s) < 1e-12);
        let t = random_physical_state(&l, 1).unwrap();
        assert!(s.inner(&t).norm() < 1.0);
    }

    #[test]
    fn conjugation_matches_state_action() {
        let l = Lattice::torus(3, 3).unwrap();
        let u = duality_unitary(&l).unwrap();
        let psi = StateVector::random(l.n_qubits(), 5).unwrap();
        let upsi = psi.apply_circuit(&u).unwrap();
        for q in [0, 4, 9, 13] {
            let p = PauliString::x_on(l.n_qubits(), [q]).multiply(&PauliString::z_on(l.n_qubits(), [(q + 3) % 14])).unwrap();
            let lhs = psi.expectation(&u.conjugate(&p, Direction::UdagPU)).unwrap();
            let rhs = upsi.expectation(&p).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn suite_small() {
        let l = Lattice::torus(3, 3).unwrap();
        let rep = wigner_and_anomaly_suite(&l, 4, 0).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
    }
}
