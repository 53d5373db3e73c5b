//! Signed Pauli strings `i^phase * prod Z^z X^x` over bit-packed masks.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteId, SiteKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    z: Vec<u64>,
    x: Vec<u64>,
    phase: u8,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { n, z: vec![0; words(n)], x: vec![0; words(n)], phase: 0 }
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        match p {
            Pauli::I => {}
            Pauli::X => s.set_x(q, true),
            Pauli::Z => s.set_z(q, true),
            Pauli::Y => {
                s.set_z(q, true);
                s.set_x(q, true);
                s.phase = 1;
            }
        }
        s
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(n);
        for q in qubits {
            s.flip_z(q);
        }
        s
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(n);
        for q in qubits {
            s.flip_x(q);
        }
        s
    }

    pub fn from_masks(n: usize, z: Vec<u64>, x: Vec<u64>, phase: u8) -> Self {
        assert_eq!(z.len(), words(n));
        assert_eq!(x.len(), words(n));
        PauliString { n, z, x, phase: phase & 3 }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn zmask(&self) -> &[u64] {
        &self.z
    }

    pub fn xmask(&self) -> &[u64] {
        &self.x
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn set_z(&mut self, q: usize, v: bool) {
        if self.z(q) != v {
            self.flip_z(q);
        }
    }

    pub fn set_x(&mut self, q: usize, v: bool) {
        if self.x(q) != v {
            self.flip_x(q);
        }
    }

    pub fn flip_z(&mut self, q: usize) {
        self.z[q / 64] ^= 1 << (q % 64);
    }

    pub fn flip_x(&mut self, q: usize) {
        self.x[q / 64] ^= 1 << (q % 64);
    }

    pub fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        s.add_phase(2);
        s
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// No Pauli support, any phase.
    pub fn is_scalar(&self) -> bool {
        self.z.iter().chain(self.x.iter()).all(|w| *w == 0)
    }

    pub fn weight(&self) -> usize {
        self.z.iter().zip(&self.x).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.z(q) || self.x(q)).collect()
    }

    fn y_count(&self) -> u32 {
        self.z.iter().zip(&self.x).map(|(a, b)| (a & b).count_ones()).sum()
    }

    /// Hermitian iff the phase parity equals the number of `ZX` sites mod 2.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + self.y_count()).is_multiple_of(2)
    }

    /// Same Pauli support, ignoring phase.
    pub fn same_support(&self, other: &Self) -> bool {
        self.z == other.z && self.x == other.x
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SiteSetMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// `self <- self * other`.
    pub fn mul_assign_unchecked(&mut self, other: &Self) {
        let mut cross = 0u32;
        for w in 0..self.z.len() {
            cross += (self.x[w] & other.z[w]).count_ones();
            self.z[w] ^= other.z[w];
            self.x[w] ^= other.x[w];
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * cross) & 3) as u8;
    }

    pub fn inverse(&self) -> Self {
        // P^{-1} = P^dagger; P * P = i^{2p} (-1)^{#ZX}
        let s = (2 * self.phase as u32 + 2 * self.y_count()) & 3;
        let mut out = self.clone();
        out.add_phase(((4 - s) & 3) as u8);
        out
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SiteSetMismatch(self.n, other.n));
        }
        Ok(self.commutes_unchecked(other))
    }

    pub fn commutes_unchecked(&self, other: &Self) -> bool {
        let mut c = 0u32;
        for w in 0..self.z.len() {
            c += (self.z[w] & other.x[w]).count_ones() + (self.x[w] & other.z[w]).count_ones();
        }
        c.is_multiple_of(2)
    }

    /// Text form, e.g. `+ Z(0,0) Z(1,0) sz(0.5,0.5)`.
    pub fn render(&self, lattice: &Lattice) -> String {
        let mut out = String::from(["+", "+i", "-", "-i"][self.phase as usize]);
        for q in 0..self.n {
            let (z, x) = (self.z(q), self.x(q));
            if !(z || x) {
                continue;
            }
            let site = lattice.site(q);
            let letters = match (z, x) {
                (true, true) => "ZX",
                (true, false) => "Z",
                _ => "X",
            };
            out.push(' ');
            if site.kind() == SiteKind::Auxiliary {
                out.push('s');
                out.push_str(&letters.to_lowercase());
            } else {
                out.push_str(letters);
            }
            out.push_str(&site.to_string());
        }
        out
    }

    pub fn parse(lattice: &Lattice, text: &str) -> Result<Self> {
        let mut toks = text.split_whitespace();
        let phase = match toks.next() {
            Some("+") => 0,
            Some("+i") => 1,
            Some("-") => 2,
            Some("-i") => 3,
            other => return Err(Error::Parse(format!("bad phase {other:?}"))),
        };
        let mut p = PauliString::identity(lattice.n_qubits());
        let mut last: Option<usize> = None;
        for tok in toks {
            let open = tok.find('(').ok_or_else(|| Error::Parse(format!("bad factor {tok}")))?;
            let (letters, site) = tok.split_at(open);
            let site: SiteId = site.parse()?;
            let (aux, letters) = match letters.strip_prefix('s') {
                Some(rest) => (true, rest.to_uppercase()),
                None => (false, letters.to_string()),
            };
            if aux != (site.kind() == SiteKind::Auxiliary) {
                return Err(Error::Parse(format!("factor {tok} does not match site kind")));
            }
            let q = lattice
                .index_of(site)
                .filter(|&q| lattice.site(q) == site)
                .ok_or_else(|| Error::Parse(format!("unknown site {site}")))?;
            if last.is_some_and(|l| l >= q) {
                return Err(Error::Parse(format!("factor {tok} out of order")));
            }
            last = Some(q);
            match letters.as_str() {
                "Z" => p.set_z(q, true),
                "X" => p.set_x(q, true),
                "ZX" => {
                    p.set_z(q, true);
                    p.set_x(q, true);
                }
                _ => return Err(Error::Parse(format!("bad letters in {tok}"))),
            }
        }
        p.phase = phase;
        Ok(p)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ["+", "+i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.n {
            match (self.z(q), self.x(q)) {
                (true, true) => write!(f, " ZX{q}")?,
                (true, false) => write!(f, " Z{q}")?,
                (false, true) => write!(f, " X{q}")?,
                _ => {}
            }
        }
        Ok(())
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    /// Panics on a qubit-count mismatch; use [`PauliString::multiply`] for a checked product.
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.multiply(rhs).expect("qubit count mismatch")
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ProductOrder<'a> {
    /// `f[0] * f[1] * ... * f[k-1]`.
    AsGiven,
    /// Factors keyed by row; the lowest row is the rightmost factor.
    GammaColumn(&'a [i64]),
}

pub fn ordered_product(factors: &[PauliString], order: ProductOrder<'_>) -> Result<PauliString> {
    let first = factors.first().ok_or(Error::EmptyList)?;
    let mut idx: Vec<usize> = (0..factors.len()).collect();
    if let ProductOrder::GammaColumn(keys) = order {
        if keys.len() != factors.len() {
            return Err(Error::SiteSetMismatch(keys.len(), factors.len()));
        }
        idx.sort_by_key(|&k| std::cmp::Reverse(keys[k]));
    }
    let mut acc = PauliString::identity(first.n);
    for k in idx {
        acc = acc.multiply(&factors[k])?;
    }
    Ok(acc)
}

/// Row-reduced basis of a set of Pauli strings in the binary symplectic representation.
///
/// Each reduced row remembers which input generators it combines, so membership
/// queries return an explicit decomposition.
#[derive(Debug, Clone)]
pub struct SymplecticBasis {
    n: usize,
    gens: Vec<PauliString>,
    rows: Vec<(Vec<u64>, Vec<u64>)>,
    pivots: Vec<usize>,
}

impl SymplecticBasis {
    pub fn new(gens: &[PauliString]) -> Self {
        let n = gens.first().map(|g| g.n).unwrap_or(0);
        let mut b = SymplecticBasis { n, gens: Vec::new(), rows: Vec::new(), pivots: Vec::new() };
        for g in gens {
            b.push(g.clone());
        }
        b
    }

    fn bits(&self, p: &PauliString) -> Vec<u64> {
        let mut v = p.z.clone();
        v.extend_from_slice(&p.x);
        v
    }

    fn bit(v: &[u64], k: usize) -> bool {
        v[k / 64] >> (k % 64) & 1 == 1
    }

    fn reduce(&self, mut v: Vec<u64>, mut combo: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        for (r, &piv) in self.rows.iter().zip(&self.pivots) {
            if Self::bit(&v, piv) {
                for (a, b) in v.iter_mut().zip(&r.0) {
                    *a ^= b;
                }
                for (a, b) in combo.iter_mut().zip(&r.1) {
                    *a ^= b;
                }
            }
        }
        (v, combo)
    }

    /// Adds a generator; returns whether it was independent of the previous ones.
    pub fn push(&mut self, g: PauliString) -> bool {
        if self.gens.is_empty() {
            self.n = g.n;
        }
        let k = self.gens.len();
        self.gens.push(g);
        let cw = (k + 1).div_ceil(64).max(1);
        for r in &mut self.rows {
            r.1.resize(cw, 0);
        }
        let mut combo = vec![0u64; cw];
        combo[k / 64] |= 1 << (k % 64);
        let v = self.bits(&self.gens[k]);
        let (v, combo) = self.reduce(v, combo);
        let first = v.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| 64 * k + w.trailing_zeros() as usize);
        match first {
            Some(piv) => {
                // keep rows fully reduced on the new pivot
                for r in &mut self.rows {
                    if Self::bit(&r.0, piv) {
                        for (a, b) in r.0.iter_mut().zip(&v) {
                            *a ^= b;
                        }
                        for (a, b) in r.1.iter_mut().zip(&combo) {
                            *a ^= b;
                        }
                    }
                }
                self.rows.push((v, combo));
                self.pivots.push(piv);
                true
            }
            None => false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.gens
    }

    /// Indices of generators whose product equals `target` up to a phase, if any.
    pub fn decompose(&self, target: &PauliString) -> Option<Vec<usize>> {
        let cw = self.gens.len().div_ceil(64).max(1);
        let (v, combo) = self.reduce(self.bits(target), vec![0u64; cw]);
        if v.iter().any(|w| *w != 0) {
            return None;
        }
        Some((0..self.gens.len()).filter(|&k| Self::bit(&combo, k)).collect())
    }

    /// Product of generators equal to `target` up to phase, with its exact phase.
    pub fn express(&self, target: &PauliString) -> Option<PauliString> {
        let idx = self.decompose(target)?;
        let mut acc = PauliString::identity(self.n);
        for k in idx {
            acc.mul_assign_unchecked(&self.gens[k]);
        }
        Some(acc)
    }

    pub fn contains(&self, target: &PauliString) -> bool {
        self.decompose(target).is_some()
    }
}

/// Symplectic rank of a set of Pauli strings.
pub fn rank(gens: &[PauliString]) -> usize {
    SymplecticBasis::new(gens).rank()
}

/// Equality of the groups generated by two sets (ignoring phases).
pub fn same_group(a: &[PauliString], b: &[PauliString]) -> bool {
    let ba = SymplecticBasis::new(a);
    let bb = SymplecticBasis::new(b);
    ba.rank() == bb.rank() && b.iter().all(|g| ba.contains(g)) && a.iter().all(|g| bb.contains(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_and_phase() {
        let x = PauliString::single(3, 1, Pauli::X);
        assert!((&x * &x).is_identity());
        let z = PauliString::single(3, 1, Pauli::Z);
        let zx = &z * &x;
        assert_eq!(zx.phase(), 0);
        assert!(zx.z(1) && zx.x(1));
        // Z X = i Y and (iY)^2 = -1, so (ZX)^2 = -I
        assert_eq!((&zx * &zx).phase(), 2);
        let y = PauliString::single(3, 1, Pauli::Y);
        assert!((&y * &y).is_identity());
        assert!(y.is_hermitian() && !zx.is_hermitian());
    }

    #[test]
    fn xz_reorder() {
        let a = PauliString::z_on(3, [0, 1]);
        let b = PauliString::x_on(3, [1, 2]);
        let ab = &a * &b;
        assert_eq!(ab.phase(), 0);
        let ba = &b * &a;
        assert_eq!(ba.phase(), 2);
        assert!(ab.same_support(&ba));
    }

    #[test]
    fn commutation() {
        let x = PauliString::single(2, 0, Pauli::X);
        assert!(!x.commutes(&PauliString::single(2, 0, Pauli::Z)).unwrap());
        assert!(x.commutes(&PauliString::single(2, 1, Pauli::Z)).unwrap());
        assert!(x.commutes(&PauliString::single(3, 1, Pauli::Z)).is_err());
    }

    #[test]
    fn gamma_order() {
        let a = PauliString::single(1, 0, Pauli::X);
        let b = PauliString::single(1, 0, Pauli::Z);
        let given = ordered_product(&[a.clone(), b.clone()], ProductOrder::AsGiven).unwrap();
        let gamma = ordered_product(&[a, b], ProductOrder::GammaColumn(&[0, 1])).unwrap();
        assert!(given.same_support(&gamma));
        assert_eq!((given.phase() + 2) % 4, gamma.phase());
        assert_eq!(ordered_product(&[], ProductOrder::AsGiven), Err(Error::EmptyList));
    }

    #[test]
    fn basis_rank_and_express() {
        let g = vec![PauliString::z_on(4, [0, 1]), PauliString::z_on(4, [1, 2]), PauliString::z_on(4, [0, 2])];
        let b = SymplecticBasis::new(&g);
        assert_eq!(b.rank(), 2);
        let t = PauliString::z_on(4, [0, 2]);
        assert!(b.express(&t).unwrap().same_support(&t));
        assert!(!b.contains(&PauliString::z_on(4, [3])));
    }

    #[test]
    fn render_parse() {
        let l = Lattice::torus(3, 3).unwrap();
        let n = l.n_qubits();
        let mut p = PauliString::z_on(n, [l.phys(0, 0).unwrap(), l.phys(1, 0).unwrap(), l.aux(0, 0).unwrap()]);
        p.flip_x(l.phys(1, 0).unwrap());
        let text = p.render(&l);
        assert_eq!(text, "+ Z(0,0) ZX(1,0) sz(0.5,0.5)");
        assert_eq!(PauliString::parse(&l, &text).unwrap(), p);
        assert!(PauliString::parse(&l, "+ sz(1,1)").is_err());
    }
}
