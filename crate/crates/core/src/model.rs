//! Hamiltonians, symmetry operators and defect operators as Pauli sums.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::circuit::{CliffordCircuit, Direction};
use crate::error::{Error, Result};
use crate::lattice::{Geometry, Lattice, SiteKind};
use crate::pauli::{ordered_product, PauliString, ProductOrder, SymplecticBasis};

/// Symbolic coupling tag: `KPlaq` multiplies `1/g`, `KField` multiplies `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coupling {
    #[serde(rename = "Kplaq")]
    KPlaq,
    #[serde(rename = "Kfield")]
    KField,
}

impl Coupling {
    pub fn swapped(self) -> Self {
        match self {
            Coupling::KPlaq => Coupling::KField,
            Coupling::KField => Coupling::KPlaq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub pauli: PauliString,
    pub coupling: Coupling,
    pub sign: i8,
}

impl Term {
    /// Moves a factor of -1 out of the Pauli phase so that the phase is 0 or 1.
    pub fn normalized(mut self) -> Self {
        if self.pauli.phase() >= 2 {
            self.pauli = self.pauli.neg();
            self.sign = -self.sign;
        }
        self
    }
}

/// A Hamiltonian as a list of signed, tagged Hermitian Pauli terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSum {
    n_qubits: usize,
    terms: Vec<Term>,
    keys: HashMap<(PauliString, Coupling), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermText {
    pub pauli: String,
    pub coupling: Coupling,
    pub sign: i8,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TermDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    pub sign_mismatch: Vec<String>,
}

impl TermDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.sign_mismatch.is_empty()
    }
}

impl OperatorSum {
    pub fn new(n_qubits: usize) -> Self {
        OperatorSum { n_qubits, terms: Vec::new(), keys: HashMap::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds a term; non-Hermitian Paulis and repeated `(pauli, coupling)` keys are rejected.
    pub fn push(&mut self, pauli: PauliString, coupling: Coupling, sign: i8) -> Result<()> {
        if pauli.n_qubits() != self.n_qubits {
            return Err(Error::SiteSetMismatch(pauli.n_qubits(), self.n_qubits));
        }
        if !pauli.is_hermitian() {
            return Err(Error::InvalidSpec(format!("non-Hermitian term {pauli:?}")));
        }
        let t = Term { pauli, coupling, sign }.normalized();
        let key = (t.pauli.clone(), t.coupling);
        if self.keys.contains_key(&key) {
            return Err(Error::InvalidSpec(format!("duplicate term {:?}", t.pauli)));
        }
        self.keys.insert(key, self.terms.len());
        self.terms.push(t);
        Ok(())
    }

    pub fn get(&self, pauli: &PauliString, coupling: Coupling) -> Option<&Term> {
        let t = Term { pauli: pauli.clone(), coupling, sign: 1 }.normalized();
        self.keys.get(&(t.pauli, coupling)).map(|&k| &self.terms[k])
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Result<OperatorSum> {
        let mut out = OperatorSum::new(self.n_qubits);
        for t in &self.terms {
            let u = f(t);
            out.push(u.pauli, u.coupling, u.sign)?;
        }
        Ok(out)
    }

    pub fn conjugate(&self, c: &CliffordCircuit, direction: Direction) -> Result<OperatorSum> {
        self.map_terms(|t| Term { pauli: c.conjugate(&t.pauli, direction), ..t.clone() })
    }

    /// `P H P` for a Pauli `P`: each term keeps its operator and flips sign if it anticommutes.
    pub fn conjugate_by_pauli(&self, p: &PauliString) -> Result<OperatorSum> {
        self.map_terms(|t| {
            let s = if t.pauli.commutes_unchecked(p) { t.sign } else { -t.sign };
            Term { sign: s, ..t.clone() }
        })
    }

    pub fn swap_couplings(&self) -> OperatorSum {
        self.map_terms(|t| Term { coupling: t.coupling.swapped(), ..t.clone() })
            .expect("swapping tags keeps terms distinct")
    }

    pub fn filter(&self, mut keep: impl FnMut(&Term) -> bool) -> OperatorSum {
        let mut out = OperatorSum::new(self.n_qubits);
        for t in self.terms.iter().filter(|t| keep(t)) {
            out.push(t.pauli.clone(), t.coupling, t.sign).expect("subset of a valid sum");
        }
        out
    }

    /// Term-set comparison keyed on `(pauli, coupling)`, signs compared separately.
    pub fn diff(&self, other: &OperatorSum, lattice: &Lattice) -> TermDiff {
        let mut d = TermDiff::default();
        for t in &self.terms {
            match other.get(&t.pauli, t.coupling) {
                None => d.extra.push(render_term(t, lattice)),
                Some(u) if u.sign != t.sign => d.sign_mismatch.push(render_term(t, lattice)),
                Some(_) => {}
            }
        }
        for u in &other.terms {
            if self.get(&u.pauli, u.coupling).is_none() {
                d.missing.push(render_term(u, lattice));
            }
        }
        d.missing.sort();
        d.extra.sort();
        d.sign_mismatch.sort();
        d
    }

    /// Stable rendering, sorted by Pauli text.
    pub fn render(&self, lattice: &Lattice) -> Vec<TermText> {
        let mut v: Vec<TermText> = self
            .terms
            .iter()
            .map(|t| TermText { pauli: t.pauli.render(lattice), coupling: t.coupling, sign: t.sign })
            .collect();
        v.sort_by(|a, b| (&a.pauli, a.coupling).cmp(&(&b.pauli, b.coupling)));
        v
    }
}

fn render_term(t: &Term, lattice: &Lattice) -> String {
    let tag = match t.coupling {
        Coupling::KPlaq => "Kplaq",
        Coupling::KField => "Kfield",
    };
    format!("{}{} [{}]", if t.sign < 0 { "-" } else { "+" }, t.pauli.render(lattice), tag)
}

/// Projector onto the joint +1 eigenspace of commuting Hermitian Paulis.
#[derive(Debug, Clone)]
pub struct PauliProjector {
    generators: Vec<PauliString>,
    basis: SymplecticBasis,
}

impl PauliProjector {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            if !g.is_hermitian() {
                return Err(Error::InvalidSpec(format!("projector generator {g:?} is not Hermitian")));
            }
            if generators[..k].iter().any(|h| !h.commutes_unchecked(g)) {
                return Err(Error::NonCommutingGenerators);
            }
        }
        let mut basis = SymplecticBasis::new(&[]);
        for g in &generators {
            if g.is_scalar() {
                if !g.is_identity() {
                    return Err(Error::ContradictoryGenerators);
                }
            } else if let Some(e) = basis.express(g) {
                // dependent: must be reproduced with sign +1
                if &e != g {
                    return Err(Error::ContradictoryGenerators);
                }
            } else {
                basis.push(g.clone());
            }
        }
        Ok(PauliProjector { generators, basis })
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn n_independent(&self) -> usize {
        self.basis.rank()
    }

    /// `log2` of the projector rank.
    pub fn log2_rank(&self) -> usize {
        self.generators.first().map(|g| g.n_qubits()).unwrap_or(0) - self.n_independent()
    }

    /// Whether `p` is an element of the stabilizer group, sign included, so that `p P = P`.
    pub fn absorbs(&self, p: &PauliString) -> bool {
        if p.is_identity() {
            return true;
        }
        self.basis.express(p).as_ref() == Some(p)
    }

    pub fn concat(&self, other: &PauliProjector) -> Result<PauliProjector> {
        let mut g = self.generators.clone();
        g.extend_from_slice(&other.generators);
        PauliProjector::new(g)
    }
}

/// `P+`: every auxiliary qubit in the `sigma^z = +1` state.
pub fn p_plus(lattice: &Lattice) -> PauliProjector {
    let n = lattice.n_qubits();
    let gens: Vec<PauliString> = (0..n)
        .filter(|&q| lattice.site(q).kind() == SiteKind::Auxiliary)
        .map(|q| PauliString::z_on(n, [q]))
        .collect();
    PauliProjector::new(gens).expect("single-site Z generators commute")
}

/// The plaquette `Z Z Z Z` anchored at `(i, j)`.
pub fn plaquette(lattice: &Lattice, i: i64, j: i64) -> Result<PauliString> {
    Ok(PauliString::z_on(lattice.n_qubits(), lattice.plaquette_qubits(i, j)?))
}

/// The plaquette anchored at `(i, j)` times `sigma^z` on its dual site when that site exists.
pub fn extended_plaquette(lattice: &Lattice, i: i64, j: i64) -> Result<PauliString> {
    let mut b = plaquette(lattice, i, j)?;
    if let Some(a) = lattice.aux(i, j) {
        b.flip_z(a);
    }
    Ok(b)
}

pub fn field(lattice: &Lattice, i: i64, j: i64) -> Result<PauliString> {
    let q = lattice.phys(i, j).ok_or(Error::OutOfWindow(i, j))?;
    Ok(PauliString::x_on(lattice.n_qubits(), [q]))
}

/// `H = -sum(1/g B_q + g X_q)`; with `extended`, plaquettes with an auxiliary site carry its `sigma^z`.
pub fn build_xm(lattice: &Lattice, extended: bool) -> OperatorSum {
    let mut h = OperatorSum::new(lattice.n_qubits());
    for (i, j) in lattice.plaquette_anchors() {
        let b = if extended { extended_plaquette(lattice, i, j) } else { plaquette(lattice, i, j) };
        h.push(b.expect("anchor inside lattice"), Coupling::KPlaq, -1).expect("distinct plaquettes");
    }
    for (i, j) in lattice.physical_sites() {
        h.push(field(lattice, i, j).unwrap(), Coupling::KField, -1).expect("distinct sites");
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Row,
    Col,
}

/// `eta_row_j = prod_i X_(i,j)` or `eta_col_i = prod_j X_(i,j)`.
pub fn build_subsystem_symmetry(lattice: &Lattice, kind: LineKind, index: i64) -> Result<PauliString> {
    let n = lattice.n_qubits();
    let qs: Vec<usize> = match kind {
        LineKind::Row if (0..lattice.ly()).contains(&index) => {
            (0..lattice.lx()).map(|i| lattice.phys(i, index).unwrap()).collect()
        }
        LineKind::Col if (0..lattice.lx()).contains(&index) => {
            (0..lattice.ly()).map(|j| lattice.phys(index, j).unwrap()).collect()
        }
        _ => return Err(Error::IndexOutOfRange(index)),
    };
    Ok(PauliString::x_on(n, qs))
}

#[derive(Debug, Clone)]
pub struct Witness {
    /// Ordered product of the plaquettes along the line.
    pub lhs: PauliString,
    /// Product of the images under `B_q -> X_q`.
    pub naive_image: PauliString,
}

/// Plaquettes along a row or column multiply to the identity, while their naive images
/// multiply to a subsystem symmetry.
pub fn noninvertibility_witness(lattice: &Lattice, kind: LineKind, index: i64) -> Result<Witness> {
    if !lattice.is_torus() {
        return Err(Error::WrongGeometry("torus"));
    }
    let anchors: Vec<(i64, i64)> = match kind {
        LineKind::Row if (0..lattice.ly()).contains(&index) => (0..lattice.lx()).map(|i| (i, index)).collect(),
        LineKind::Col if (0..lattice.lx()).contains(&index) => (0..lattice.ly()).map(|j| (index, j)).collect(),
        _ => return Err(Error::IndexOutOfRange(index)),
    };
    let bonds: Vec<PauliString> = anchors.iter().map(|&(i, j)| plaquette(lattice, i, j).unwrap()).collect();
    let images: Vec<PauliString> = anchors.iter().map(|&(i, j)| field(lattice, i, j).unwrap()).collect();
    Ok(Witness {
        lhs: ordered_product(&bonds, ProductOrder::AsGiven)?,
        naive_image: ordered_product(&images, ProductOrder::AsGiven)?,
    })
}

#[derive(Debug, Clone)]
pub struct EtaDefect {
    /// Half-line operator; only defined on a plane window.
    pub line_op: Option<PauliString>,
    pub parent_h: OperatorSum,
    /// Anchors of the two plaquettes whose sign is flipped.
    pub flipped: [(i64, i64); 2],
}

/// Row defect at `(i + 1/2, j)` or column defect at `(i, j + 1/2)`.
///
/// The row defect flips the plaquettes anchored at `(i, j-1)` and `(i, j)`, the column defect
/// those at `(i-1, j)` and `(i, j)`.
pub fn build_eta_defect(lattice: &Lattice, kind: LineKind, i: i64, j: i64) -> Result<EtaDefect> {
    let flipped = match kind {
        LineKind::Row => [(i, j - 1), (i, j)],
        LineKind::Col => [(i - 1, j), (i, j)],
    };
    let anchors = lattice.plaquette_anchors();
    for &(a, b) in &flipped {
        let c = lattice.canonical(crate::lattice::SiteId::phys(a, b));
        if c.map(|s| !anchors.contains(&s.anchor())).unwrap_or(true) {
            return Err(Error::IndexOutOfRange(if kind == LineKind::Row { j } else { i }));
        }
    }
    let h = build_xm(lattice, false);
    let flip: Vec<PauliString> = flipped.iter().map(|&(a, b)| plaquette(lattice, a, b).unwrap()).collect();
    let parent_h = h.map_terms(|t| {
        let s = if t.coupling == Coupling::KPlaq && flip.contains(&t.pauli) { -t.sign } else { t.sign };
        Term { sign: s, ..t.clone() }
    })?;
    let line_op = match lattice.geometry() {
        Geometry::PlaneWindow => {
            let n = lattice.n_qubits();
            let qs: Vec<usize> = match kind {
                LineKind::Row => (i + 1..lattice.lx()).map(|k| lattice.phys(k, j).unwrap()).collect(),
                LineKind::Col => (j + 1..lattice.ly()).map(|l| lattice.phys(i, l).unwrap()).collect(),
            };
            Some(PauliString::x_on(n, qs))
        }
        _ => None,
    };
    Ok(EtaDefect { line_op, parent_h, flipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MembraneExtent {
    /// Everything above and to the right of the anchor; plane windows only.
    Quadrant,
    /// Columns `i+1..=i2` and rows `j+1..=j2`.
    Rect(i64, i64),
}

/// `prod X_(k,l)` over `k > i + 1/2`, `l > j + 1/2`, bounded by the extent.
pub fn build_fracton_membrane(lattice: &Lattice, i: i64, j: i64, extent: MembraneExtent) -> Result<PauliString> {
    let (i2, j2) = match extent {
        MembraneExtent::Quadrant => {
            if lattice.geometry() != Geometry::PlaneWindow {
                return Err(Error::WrongGeometry("plane"));
            }
            (lattice.lx() - 1, lattice.ly() - 1)
        }
        MembraneExtent::Rect(i2, j2) => (i2, j2),
    };
    if i2 <= i || j2 <= j {
        return Err(Error::DegenerateRect);
    }
    let mut qs = Vec::new();
    for l in j + 1..=j2 {
        for k in i + 1..=i2 {
            qs.push(lattice.phys(k, l).ok_or(Error::OutOfWindow(k, l))?);
        }
    }
    qs.sort_unstable();
    qs.dedup();
    Ok(PauliString::x_on(lattice.n_qubits(), qs))
}

/// Anchors of the plaquette terms of the bare Hamiltonian that anticommute with `p`.
pub fn flipped_bonds(lattice: &Lattice, p: &PauliString) -> Vec<(i64, i64)> {
    lattice
        .plaquette_anchors()
        .into_iter()
        .filter(|&(i, j)| !plaquette(lattice, i, j).unwrap().commutes_unchecked(p))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DefectClass {
    Identity,
    EtaRow,
    EtaCol,
    Membrane,
    Other,
}

#[derive(Debug, Clone)]
pub struct FusionProduct {
    pub product: PauliString,
    pub classification: DefectClass,
}

pub fn defect_fusion_product(lattice: &Lattice, a: &PauliString, b: &PauliString) -> Result<FusionProduct> {
    let product = a.multiply(b)?;
    let classification = classify(lattice, &product);
    Ok(FusionProduct { product, classification })
}

/// Matches `p` against operators produced by the line and membrane builders.
pub fn classify(lattice: &Lattice, p: &PauliString) -> DefectClass {
    if p.is_identity() {
        return DefectClass::Identity;
    }
    if p.phase() != 0 || p.zmask().iter().any(|w| *w != 0) {
        return DefectClass::Other;
    }
    let coords: Vec<(i64, i64)> = p
        .support()
        .into_iter()
        .map(|q| lattice.site(q))
        .filter(|s| s.kind() == SiteKind::Physical)
        .map(|s| s.anchor())
        .collect();
    if coords.len() != p.weight() {
        return DefectClass::Other;
    }
    let (imin, imax) = (coords.iter().map(|c| c.0).min().unwrap(), coords.iter().map(|c| c.0).max().unwrap());
    let (jmin, jmax) = (coords.iter().map(|c| c.1).min().unwrap(), coords.iter().map(|c| c.1).max().unwrap());
    let plane = lattice.geometry() == Geometry::PlaneWindow;
    let matches = |q: Result<PauliString>| q.map(|q| &q == p).unwrap_or(false);
    if jmin == jmax {
        let full = build_subsystem_symmetry(lattice, LineKind::Row, jmin);
        let half = plane && matches(build_eta_defect(lattice, LineKind::Row, imin - 1, jmin).and_then(|d| {
            d.line_op.ok_or(Error::WrongGeometry("plane"))
        }));
        if matches(full) || half {
            return DefectClass::EtaRow;
        }
    }
    if imin == imax {
        let full = build_subsystem_symmetry(lattice, LineKind::Col, imin);
        let half = plane && matches(build_eta_defect(lattice, LineKind::Col, imin, jmin - 1).and_then(|d| {
            d.line_op.ok_or(Error::WrongGeometry("plane"))
        }));
        if matches(full) || half {
            return DefectClass::EtaCol;
        }
    }
    let quadrant = plane && matches(build_fracton_membrane(lattice, imin - 1, jmin - 1, MembraneExtent::Quadrant));
    let rect = matches(build_fracton_membrane(lattice, imin - 1, jmin - 1, MembraneExtent::Rect(imax, jmax)));
    if quadrant || rect {
        return DefectClass::Membrane;
    }
    DefectClass::Other
}

/// Terms of a duality defect line anchored at physical site `q = (qx, qy)`.
///
/// Open: the corner `sx_Q Z_Q Z_(Q+x) Z_(Q+y)` plus legs `sx Z Z` along the row and column
/// through `Q`. Legs run to the lattice edge; on a window, legs whose plaquette leaves the
/// window are dropped. Closed: the boundary terms of the gauged region given by the lattice's
/// auxiliary sites (see [`crate::gauging::defect_line`]).
pub fn build_duality_defect_terms(lattice: &Lattice, qx: i64, qy: i64, closed: bool) -> Result<OperatorSum> {
    if closed {
        return crate::gauging::defect_line(lattice);
    }
    let n = lattice.n_qubits();
    let phys = |i: i64, j: i64| lattice.phys(i, j).ok_or(Error::OutOfWindow(i, j));
    let aux = |i: i64, j: i64| lattice.aux(i, j).ok_or(Error::OutOfWindow(i, j));
    let fits = |i: i64, j: i64| lattice.plaquette_anchors().contains(&(i, j));
    let mut h = OperatorSum::new(n);
    let mut corner = PauliString::z_on(n, [phys(qx, qy)?, phys(qx + 1, qy)?, phys(qx, qy + 1)?]);
    corner.set_x(aux(qx, qy)?, true);
    h.push(corner, Coupling::KPlaq, -1)?;
    let mut legs = Vec::new();
    for k in qx + 1..lattice.lx() {
        legs.push(((k, qy), (k, qy), (k + 1, qy)));
    }
    for k in qy + 1..lattice.ly() {
        legs.push(((qx, k), (qx, k), (qx, k + 1)));
    }
    for (d, a, b) in legs {
        if !fits(d.0, d.1) {
            continue;
        }
        let mut t = PauliString::z_on(n, [phys(a.0, a.1)?, phys(b.0, b.1)?]);
        t.set_x(aux(d.0, d.1)?, true);
        h.push(t, Coupling::KPlaq, -1)?;
    }
    Ok(h)
}

/// Counts of term families, used in reports.
pub fn coupling_counts(h: &OperatorSum) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for t in h.terms() {
        *m.entry(match t.coupling {
            Coupling::KPlaq => "Kplaq",
            Coupling::KField => "Kfield",
        })
        .or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xm_counts() {
        let l = Lattice::torus(3, 3).unwrap();
        let h = build_xm(&l, true);
        let with_sigma = h
            .terms()
            .iter()
            .filter(|t| t.coupling == Coupling::KPlaq && t.pauli.weight() == 5)
            .count();
        assert_eq!((h.len(), with_sigma), (18, 5));
        let l = Lattice::torus(5, 4).unwrap();
        assert_eq!(build_xm(&l, false).len(), 40);
        let c = Lattice::cylinder(4, 5, 1).unwrap();
        let h = build_xm(&c, true);
        assert_eq!(h.terms().iter().filter(|t| t.coupling == Coupling::KPlaq).count(), 16);
    }

    #[test]
    fn symmetry_commutes_with_xm() {
        let l = Lattice::torus(5, 4).unwrap();
        let h = build_xm(&l, false);
        let col = build_subsystem_symmetry(&l, LineKind::Col, 0).unwrap();
        assert_eq!(col.weight(), 4);
        assert!(h.terms().iter().all(|t| t.pauli.commutes_unchecked(&col)));
        assert!(build_subsystem_symmetry(&l, LineKind::Row, 4).is_err());
    }

    #[test]
    fn witness_rows() {
        let l = Lattice::torus(4, 3).unwrap();
        let w = noninvertibility_witness(&l, LineKind::Row, 0).unwrap();
        assert!(w.lhs.is_identity());
        assert_eq!(w.naive_image, build_subsystem_symmetry(&l, LineKind::Row, 0).unwrap());
        let c = Lattice::cylinder(4, 7, 2).unwrap();
        assert!(noninvertibility_witness(&c, LineKind::Row, 3).is_err());
    }

    #[test]
    fn eta_defect_window() {
        let l = Lattice::plane(6, 6).unwrap();
        let d = build_eta_defect(&l, LineKind::Row, 2, 3).unwrap();
        let line = d.line_op.clone().unwrap();
        let want = PauliString::x_on(l.n_qubits(), [3, 4, 5].map(|k| l.phys(k, 3).unwrap()));
        assert_eq!(line, want);
        assert_eq!(flipped_bonds(&l, &line), vec![(2, 2), (2, 3)]);
        let h = build_xm(&l, false);
        assert!(h.conjugate_by_pauli(&line).unwrap().diff(&d.parent_h, &l).is_empty());
    }

    #[test]
    fn membranes() {
        let w = Lattice::plane(7, 7).unwrap();
        let f = build_fracton_membrane(&w, 2, 2, MembraneExtent::Quadrant).unwrap();
        assert_eq!(flipped_bonds(&w, &f), vec![(2, 2)]);
        let t = Lattice::torus(5, 5).unwrap();
        let f = build_fracton_membrane(&t, 1, 1, MembraneExtent::Rect(3, 3)).unwrap();
        assert_eq!(flipped_bonds(&t, &f), vec![(1, 1), (3, 1), (1, 3), (3, 3)]);
        assert_eq!(build_fracton_membrane(&t, 1, 1, MembraneExtent::Rect(1, 3)), Err(Error::DegenerateRect));
    }

    #[test]
    fn fusion_classes() {
        let w = Lattice::plane(7, 7).unwrap();
        let f1 = build_fracton_membrane(&w, 2, 1, MembraneExtent::Quadrant).unwrap();
        let f2 = build_fracton_membrane(&w, 2, 2, MembraneExtent::Quadrant).unwrap();
        let r = defect_fusion_product(&w, &f1, &f2).unwrap();
        assert_eq!(r.classification, DefectClass::EtaRow);
        assert_eq!(Some(r.product), build_eta_defect(&w, LineKind::Row, 2, 2).unwrap().line_op);
        assert_eq!(defect_fusion_product(&w, &f2, &f2).unwrap().classification, DefectClass::Identity);
        assert_eq!(classify(&w, &f2), DefectClass::Membrane);
    }

    #[test]
    fn open_defect_torus_count() {
        let anchors: Vec<(i64, i64)> = (0..6).flat_map(|j| (0..6).map(move |i| (i, j))).collect();
        let l = Lattice::with_aux(crate::lattice::LatticeSpec::torus(6, 6), anchors).unwrap();
        let d = build_duality_defect_terms(&l, 1, 2, false).unwrap();
        assert_eq!(d.len(), 1 + 4 + 3);
        let corner = &d.terms()[0].pauli;
        assert!(d.terms().iter().all(|t| t.pauli.commutes_unchecked(corner)));
    }

    #[test]
    fn projector_rejects_bad_sets() {
        let x = PauliString::x_on(2, [0]);
        let z = PauliString::z_on(2, [0]);
        assert_eq!(PauliProjector::new(vec![x.clone(), z]).err(), Some(Error::NonCommutingGenerators));
        assert_eq!(PauliProjector::new(vec![x.clone(), x.neg()]).err(), Some(Error::ContradictoryGenerators));
        let p = PauliProjector::new(vec![x.clone(), x.clone()]).unwrap();
        assert_eq!(p.log2_rank(), 1);
    }
}
