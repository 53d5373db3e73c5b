//! The sequential Clifford circuit of the Xu-Moore self-duality and its checks.
//!
//! `build_stage(Full)` is the circuit `C` in the order it is written down (first stage acts
//! first). Conjugation `C P C^dagger` maps `X_(q+x+y)` to the extended plaquette at `q`, so
//! the duality unitary with `U P U^dagger = Phi^-1(P)` is `C^-1`; see [`duality_unitary`].

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::circuit::{CliffordCircuit, Direction, Gate};
use crate::error::{Error, Result};
use crate::lattice::{Geometry, Lattice, LatticeSpec, SiteId, SiteKind};
use crate::model::{build_subsystem_symmetry, build_xm, extended_plaquette, field, p_plus, plaquette};
use crate::model::{LineKind, OperatorSum, PauliProjector};
use crate::pauli::{same_group, PauliString, SymplecticBasis};
use crate::report::{phase_text, relative_phase, GeneratorCheck, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageId {
    UsPrime,
    UFlip,
    /// `UFlip` after `UsPrime`.
    Us,
    /// Torus: `U_(m-1,m)`, `1 <= m <= Ly`. Cylinder: the move onto column `m`, `1 <= m < Lx`.
    Movement(usize),
    Uf1,
    Uf2,
    /// `Uf2` after `Uf1`.
    UfCombined,
    Full,
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageId::UsPrime => write!(f, "UsPrime"),
            StageId::UFlip => write!(f, "UFlip"),
            StageId::Us => write!(f, "Us"),
            StageId::Movement(m) => write!(f, "Move{m}"),
            StageId::Uf1 => write!(f, "Uf1"),
            StageId::Uf2 => write!(f, "Uf2"),
            StageId::UfCombined => write!(f, "Uf"),
            StageId::Full => write!(f, "Full"),
        }
    }
}

impl FromStr for StageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "UsPrime" => StageId::UsPrime,
            "UFlip" => StageId::UFlip,
            "Us" => StageId::Us,
            "Uf1" => StageId::Uf1,
            "Uf2" => StageId::Uf2,
            "Uf" => StageId::UfCombined,
            "Full" => StageId::Full,
            _ => match s.strip_prefix("Move").and_then(|m| m.parse().ok()) {
                Some(m) => StageId::Movement(m),
                None => return Err(Error::InvalidStage(s.to_string())),
            },
        })
    }
}

impl Serialize for StageId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn default_anchors(spec: &LatticeSpec) -> Result<Vec<(i64, i64)>> {
    Ok(Lattice::new(*spec)?.anchors())
}

fn check_circuit_lattice(l: &Lattice) -> Result<()> {
    if l.geometry() == Geometry::PlaneWindow {
        return Err(Error::WrongGeometry("torus or cylinder"));
    }
    if l.anchors() != default_anchors(l.spec())? {
        return Err(Error::InvalidSpec("duality circuit needs the default auxiliary sites".into()));
    }
    Ok(())
}

/// Atomic stages in the order they act.
pub fn stage_sequence(l: &Lattice) -> Result<Vec<StageId>> {
    check_circuit_lattice(l)?;
    let moves = if l.is_torus() { l.ly() } else { l.lx() - 1 } as usize;
    let mut v = vec![StageId::UsPrime, StageId::UFlip];
    v.extend((1..=moves).map(StageId::Movement));
    v.extend([StageId::Uf1, StageId::Uf2]);
    Ok(v)
}

fn expand(l: &Lattice, stage: StageId) -> Result<Vec<StageId>> {
    let seq = stage_sequence(l)?;
    Ok(match stage {
        StageId::Us => vec![StageId::UsPrime, StageId::UFlip],
        StageId::UfCombined => vec![StageId::Uf1, StageId::Uf2],
        StageId::Full => seq,
        s if seq.contains(&s) => vec![s],
        s => return Err(Error::InvalidStage(s.to_string())),
    })
}

/// Gate list builder; gates touching a site outside the window are dropped.
struct Builder<'a> {
    l: &'a Lattice,
    gates: Vec<Gate>,
}

impl<'a> Builder<'a> {
    fn p(&self, i: i64, j: i64) -> Option<usize> {
        self.l.phys(i, j)
    }

    fn a(&self, i: i64, j: i64) -> Option<usize> {
        self.l.aux(i, j)
    }

    fn h(&mut self, q: Option<usize>) {
        if let Some(q) = q {
            self.gates.push(Gate::H(q));
        }
    }

    fn cz(&mut self, a: Option<usize>, b: Option<usize>) {
        if let (Some(a), Some(b)) = (a, b) {
            self.gates.push(Gate::CZ(a, b));
        }
    }

    fn cx(&mut self, c: Option<usize>, t: Option<usize>) {
        if let (Some(c), Some(t)) = (c, t) {
            self.gates.push(Gate::CX(c, t));
        }
    }
}

fn torus_stage(b: &mut Builder, stage: StageId) -> Result<()> {
    let (lx, ly) = (b.l.lx(), b.l.ly());
    let s = b.l.anchors();
    match stage {
        StageId::UsPrime => {
            for &(i, j) in &s {
                b.h(b.a(i, j));
            }
            for &(i, j) in &s {
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    b.cz(b.a(i, j), b.p(i + di, j + dj));
                }
            }
        }
        StageId::UFlip => {
            for k in 1..ly {
                b.cz(b.a(0, k), b.p(0, k));
                b.cz(b.a(0, k), b.p(0, k + 1));
            }
            for k in 1..lx {
                b.cz(b.a(k, 0), b.p(k, 0));
                b.cz(b.a(k, 0), b.p(k + 1, 0));
            }
            b.cz(b.a(0, 0), b.p(0, 0));
        }
        StageId::Movement(m) => {
            let layers = b.l.layer_decomposition()?;
            let layer: Vec<(i64, i64)> = layers.layer(m).iter().map(|q| q.anchor()).collect();
            let in_layer: HashSet<(i64, i64)> = layer.iter().copied().collect();
            let m1 = m as i64;
            for k in m1 + 1..=lx {
                b.cx(b.p(k, m1), b.p(k - 1, m1));
            }
            for k in m1 + 1..=ly {
                b.cx(b.p(m1, k), b.p(m1, k - 1));
            }
            for &(i, j) in &layer {
                b.h(b.p(i, j));
            }
            if m1 < ly {
                let excl = [(0, m1 % ly), (m1 % lx, 0)];
                for &(i, j) in layer.iter().filter(|q| !excl.contains(q)) {
                    for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
                        let r = ((i + di).rem_euclid(lx), (j + dj).rem_euclid(ly));
                        if !in_layer.contains(&r) {
                            b.cz(b.p(i, j), b.p(r.0, r.1));
                        }
                    }
                }
                b.cz(b.p(m1 % lx, 0), b.p((m1 + 1) % lx, 0));
                b.cz(b.p(0, m1 % ly), b.p(0, (m1 + 1) % ly));
            }
        }
        StageId::Uf1 => {
            for &(i, j) in &s {
                b.cx(b.p(i, j), b.a(i, j));
            }
        }
        StageId::Uf2 => {
            for k in 1..lx {
                b.cx(b.a(k + 1, 0), b.a(k, 0));
            }
            for k in 1..ly {
                b.cx(b.a(0, k + 1), b.a(0, k));
            }
            for &(i, j) in s.iter().filter(|&&q| q != (0, 0)) {
                b.cx(b.a(i, j), b.a(0, 0));
            }
        }
        _ => unreachable!("composite stages are expanded first"),
    }
    Ok(())
}

/// Column move: chain down column `k`, Hadamards, then couplings to column `k+1`.
fn cylinder_move(b: &mut Builder, k: i64) {
    let ly = b.l.ly();
    for j in 1..ly {
        b.cx(b.p(k, j), b.p(k, j - 1));
    }
    for j in 0..ly {
        b.h(b.p(k, j));
    }
    for j in 0..ly {
        b.cz(b.p(k, j), b.p(k + 1, j));
        b.cz(b.p(k, j), b.p(k + 1, j + 1));
    }
}

fn cylinder_stage(b: &mut Builder, stage: StageId) {
    let (lx, ly) = (b.l.lx(), b.l.ly());
    match stage {
        StageId::UsPrime => {
            for j in 0..ly {
                b.h(b.a(0, j));
                for (di, dj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    b.cz(b.a(0, j), b.p(di, j + dj));
                }
            }
        }
        StageId::UFlip => {
            for j in 0..ly {
                b.cz(b.a(0, j), b.p(0, j));
                b.cz(b.a(0, j), b.p(0, j + 1));
            }
        }
        StageId::Movement(k) => cylinder_move(b, k as i64),
        StageId::Uf1 => cylinder_move(b, lx),
        StageId::Uf2 => {
            for j in 0..ly {
                b.cx(b.p(0, j), b.a(0, j));
            }
            for j in 0..ly {
                b.cz(b.p(0, j), b.p(1, j));
            }
            for j in 0..ly {
                b.cz(b.p(0, j), b.p(1, j + 1));
            }
            for j in 0..ly - 1 {
                b.cx(b.a(0, j + 1), b.a(0, j));
            }
        }
        _ => unreachable!("composite stages are expanded first"),
    }
}

pub fn build_stage(l: &Lattice, stage: StageId) -> Result<CliffordCircuit> {
    let mut b = Builder { l, gates: Vec::new() };
    for s in expand(l, stage)? {
        if l.is_torus() {
            torus_stage(&mut b, s)?;
        } else {
            cylinder_stage(&mut b, s);
        }
    }
    CliffordCircuit::with_gates(l.n_qubits(), b.gates)
}

/// The circuit realizing `U P U^dagger = Phi^-1(P)`: the full sequence run backwards.
pub fn duality_unitary(l: &Lattice) -> Result<CliffordCircuit> {
    Ok(build_stage(l, StageId::Full)?.invert())
}

#[derive(Debug, Clone)]
pub struct PhiEntry {
    pub label: String,
    pub input: PauliString,
    /// `Phi(input)`.
    pub forward: PauliString,
    /// `Phi^-1(input)`.
    pub inverse: PauliString,
}

/// The duality map on the generators `X_q` and extended plaquettes, plus derived images of
/// the auxiliary `sigma^z`. On a cylinder only rows inside the margin are listed.
#[derive(Debug, Clone)]
pub struct PhiTable {
    pub generators: Vec<PhiEntry>,
    pub derived: Vec<PhiEntry>,
    basis: SymplecticBasis,
}

fn row_ok(l: &Lattice, j: i64) -> bool {
    l.is_torus() || (l.is_bulk_row(j) && j >= 1 && j <= l.ly() - 2)
}

pub fn phi_table(l: &Lattice) -> Result<PhiTable> {
    check_circuit_lattice(l)?;
    let mut generators = Vec::new();
    for (i, j) in l.physical_sites().filter(|&(_, j)| row_ok(l, j)) {
        generators.push(PhiEntry {
            label: format!("X{}", SiteId::phys(i, j)),
            input: field(l, i, j)?,
            forward: extended_plaquette(l, i - 1, j - 1)?,
            inverse: extended_plaquette(l, i, j)?,
        });
    }
    for (i, j) in l.plaquette_anchors().into_iter().filter(|&(_, j)| row_ok(l, j)) {
        generators.push(PhiEntry {
            label: format!("B{}", SiteId::dual(i, j)),
            input: extended_plaquette(l, i, j)?,
            forward: field(l, i, j)?,
            inverse: field(l, i + 1, j + 1)?,
        });
    }
    let basis = SymplecticBasis::new(&generators.iter().map(|e| e.input.clone()).collect::<Vec<_>>());
    let mut table = PhiTable { generators, derived: Vec::new(), basis };
    let n = l.n_qubits();
    for (i, j) in l.anchors() {
        if !l.is_torus() && !(l.is_bulk_row(j) && l.is_bulk_row(j + 1)) {
            continue;
        }
        let s = PauliString::z_on(n, [l.aux(i, j).unwrap()]);
        let (Some(forward), Some(inverse)) = (table.apply(&s, true), table.apply(&s, false)) else {
            continue;
        };
        table.derived.push(PhiEntry { label: format!("sz{}", SiteId::dual(i, j)), input: s, forward, inverse });
    }
    Ok(table)
}

impl PhiTable {
    /// Extends the map multiplicatively to products of generators, keeping the exact phase.
    pub fn apply(&self, p: &PauliString, forward: bool) -> Option<PauliString> {
        let idx = self.basis.decompose(p)?;
        let mut prod = PauliString::identity(p.n_qubits());
        let mut img = PauliString::identity(p.n_qubits());
        for k in idx {
            let e = &self.generators[k];
            prod.mul_assign_unchecked(&e.input);
            img.mul_assign_unchecked(if forward { &e.forward } else { &e.inverse });
        }
        let r = relative_phase(p, &prod)?;
        img.add_phase(r);
        Some(img)
    }
}

/// `Phi^-1(sigma^z)` on the torus, written as subsystem symmetries.
///
/// `(0, j)` with `j >= 1` maps to `eta_row_(j+1)`, `(i, 0)` with `i >= 1` to `eta_col_(i+1)`,
/// and the origin to `X_(1,1)` times `X` on every site off row 1 and column 1.
pub fn sigma_image(l: &Lattice, i: i64, j: i64) -> Result<PauliString> {
    if !l.is_torus() {
        return Err(Error::WrongGeometry("torus"));
    }
    let (lx, ly) = (l.lx(), l.ly());
    match (i, j) {
        (0, 0) => {
            let qs = l
                .physical_sites()
                .filter(|&(m, n)| (m, n) == (1, 1) || (m != 1 && n != 1))
                .map(|(m, n)| l.phys(m, n).unwrap());
            Ok(PauliString::x_on(l.n_qubits(), qs))
        }
        (0, j) if j > 0 && j < ly => build_subsystem_symmetry(l, LineKind::Row, (j + 1) % ly),
        (i, 0) if i > 0 && i < lx => build_subsystem_symmetry(l, LineKind::Col, (i + 1) % lx),
        _ => Err(Error::OutOfWindow(i, j)),
    }
}

fn generator_check(l: &Lattice, label: &str, input: &PauliString, expected: &PauliString, got: &PauliString) -> GeneratorCheck {
    let rel = relative_phase(got, expected);
    GeneratorCheck {
        generator: label.to_string(),
        input: input.render(l),
        expected: expected.render(l),
        got: got.render(l),
        phase: rel.map(phase_text).unwrap_or("mismatch").to_string(),
        pass: rel == Some(0),
    }
}

/// Checks `U g U^dagger = Phi^-1(g)` generator by generator for the circuit `U`, plus the
/// induced swap of the two coupling families in the extended Hamiltonian.
pub fn verify_automorphism(l: &Lattice, u: &CliffordCircuit) -> Result<Report> {
    if u.n_qubits != l.n_qubits() {
        return Err(Error::LatticeMismatch(u.n_qubits, l.n_qubits()));
    }
    let table = phi_table(l)?;
    let mut rep = Report::new("verify-automorphism", Some(*l.spec()));
    for e in &table.generators {
        let got = u.conjugate(&e.input, Direction::UPUdag);
        rep.generator(generator_check(l, &e.label, &e.input, &e.inverse, &got));
    }
    let bad: Vec<String> = table
        .derived
        .iter()
        .filter(|e| u.conjugate(&e.input, Direction::UPUdag) != e.inverse)
        .map(|e| e.label.clone())
        .collect();
    rep.check("auxiliary sigma^z images", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));

    let inputs: HashSet<&PauliString> = table.generators.iter().map(|e| &e.input).collect();
    let images: HashSet<&PauliString> = table.generators.iter().map(|e| &e.inverse).collect();
    let h = build_xm(l, true);
    let conj = h.filter(|t| inputs.contains(&t.pauli)).conjugate(u, Direction::UPUdag)?;
    let want = h.swap_couplings().filter(|t| images.contains(&t.pauli));
    let d = conj.diff(&want, l);
    rep.check(
        "Hamiltonian maps to its dual with couplings swapped",
        d.is_empty(),
        (!d.is_empty()).then(|| format!("{d:?}")),
    );
    Ok(rep)
}

/// Per-stage report: each prefix of the sequence applied to the extended Hamiltonian, with
/// the torn-bond census on the torus.
pub fn stage_trace(l: &Lattice) -> Result<Vec<(StageId, OperatorSum, Option<TearCensus>)>> {
    let seq = stage_sequence(l)?;
    let mut out = Vec::new();
    let mut h = build_xm(l, true);
    for s in seq {
        h = h.conjugate(&build_stage(l, s)?, Direction::UPUdag)?;
        let census = match s {
            StageId::Movement(m) if l.is_torus() => Some(tear_census_of(l, &h, m)?),
            _ => None,
        };
        out.push((s, h.clone(), census));
    }
    Ok(out)
}

/// The extended Hamiltonian after the given stages (a prefix of the full sequence) act.
pub fn snapshot_after(l: &Lattice, stages: &[StageId]) -> Result<OperatorSum> {
    let seq = stage_sequence(l)?;
    let mut flat = Vec::new();
    for &s in stages {
        flat.extend(expand(l, s)?);
    }
    if flat.len() > seq.len() || flat[..] != seq[..flat.len()] {
        return Err(Error::InvalidPrefix);
    }
    let mut c = CliffordCircuit::new(l.n_qubits());
    for s in flat {
        c = c.then(&build_stage(l, s)?);
    }
    build_xm(l, true).conjugate(&c, Direction::UPUdag)
}

#[derive(Debug, Clone, Serialize)]
pub struct TearCensus {
    pub after_movement: usize,
    pub found: Vec<SiteId>,
    pub expected: Vec<SiteId>,
}

impl TearCensus {
    pub fn passed(&self) -> bool {
        self.found == self.expected
    }
}

/// Sites `q` with a torn bond `X_q sigma^x_q` after `m` movement steps.
pub fn tear_census(l: &Lattice, m: usize) -> Result<TearCensus> {
    if !l.is_torus() {
        return Err(Error::WrongGeometry("torus"));
    }
    if m == 0 || m > l.ly() as usize {
        return Err(Error::InvalidStage(StageId::Movement(m).to_string()));
    }
    let mut stages = vec![StageId::Us];
    stages.extend((1..=m).map(StageId::Movement));
    let h = snapshot_after(l, &stages)?;
    tear_census_of(l, &h, m)
}

fn tear_census_of(l: &Lattice, h: &OperatorSum, m: usize) -> Result<TearCensus> {
    let n = l.n_qubits();
    let (lx, ly) = (l.lx(), l.ly());
    let mut found = Vec::new();
    for (i, j) in l.anchors() {
        let t = PauliString::x_on(n, [l.phys(i, j).unwrap(), l.aux(i, j).unwrap()]);
        if h.terms().iter().any(|x| x.pauli == t) {
            found.push(SiteId::phys(i, j));
        }
    }
    let mut expected: Vec<SiteId> = Vec::new();
    for k in 1..=m as i64 {
        expected.push(SiteId::phys(k % lx, 0));
        expected.push(SiteId::phys(0, k % ly));
    }
    if m as i64 == ly {
        expected.extend((ly..lx).map(|k| SiteId::phys(k, 0)));
    }
    expected.sort();
    expected.dedup();
    found.sort();
    Ok(TearCensus { after_movement: m, found, expected })
}

/// `A P = B P` for the stabilizer projector `P`.
pub fn projected_equal(a: &PauliString, b: &PauliString, proj: &PauliProjector) -> bool {
    match b.inverse().multiply(a) {
        Ok(c) => proj.absorbs(&c),
        Err(_) => false,
    }
}

/// Projector generators `U sigma^z U^dagger` of `P_eta`.
pub fn p_eta(l: &Lattice) -> Result<PauliProjector> {
    let u = duality_unitary(l)?;
    let gens = p_plus(l).generators().iter().map(|g| u.conjugate(g, Direction::UPUdag)).collect();
    PauliProjector::new(gens)
}

/// Relations of the non-invertible operator `D = U P+` that follow from the circuit:
/// `P_eta` generators, the shift of `sigma^z` under `U^2`, translation of bonds under `U^2`
/// modulo `P+`, and `D^dagger X_(q+x+y) D = B_q P+`.
pub fn nso_relations(l: &Lattice) -> Result<Report> {
    let u = duality_unitary(l)?;
    let u2 = u.clone().then(&u);
    let pp = p_plus(l);
    let mut rep = Report::new("nso-relations", Some(*l.spec()));
    let n = l.n_qubits();
    let sz = |i: i64, j: i64| PauliString::z_on(n, [l.aux(i, j).unwrap()]);

    if l.is_torus() {
        let mut bad = Vec::new();
        for (i, j) in l.anchors() {
            let got = u.conjugate(&sz(i, j), Direction::UPUdag);
            if got != sigma_image(l, i, j)? {
                bad.push(SiteId::dual(i, j).to_string());
            }
        }
        rep.check("P_eta generators are subsystem symmetries", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));
    }

    let mut bad = Vec::new();
    let shifts: Vec<((i64, i64), (i64, i64))> = if l.is_torus() {
        let mut v: Vec<_> = (1..l.ly() - 1).map(|j| ((0, j), (0, j + 1))).collect();
        v.extend((1..l.lx() - 1).map(|i| ((i, 0), (i + 1, 0))));
        v
    } else {
        (0..l.ly() - 1).filter(|&j| row_ok(l, j) && row_ok(l, j + 1)).map(|j| ((0, j), (0, j + 1))).collect()
    };
    for (a, b) in &shifts {
        if u2.conjugate(&sz(a.0, a.1), Direction::UPUdag) != sz(b.0, b.1) {
            bad.push(SiteId::dual(a.0, a.1).to_string());
        }
    }
    rep.check("U^2 shifts sigma^z by one", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));

    if l.is_torus() {
        let imgs: Vec<PauliString> = pp.generators().iter().map(|g| u2.conjugate(g, Direction::UPUdag)).collect();
        rep.check("U^2 preserves the sigma^z group", same_group(&imgs, pp.generators()), None);
    }

    // bonds two rows inside the margin so that both images stay in the verified region
    let deep = |j: i64| l.is_torus() || (row_ok(l, j) && row_ok(l, j - 1) && row_ok(l, j - 2));
    let mut bad = Vec::new();
    let mut adjoint_bad = Vec::new();
    for (i, j) in l.physical_sites().filter(|&(_, j)| deep(j)) {
        let x = field(l, i, j)?;
        let got = u2.conjugate(&x, Direction::UdagPU);
        if got != field(l, i - 1, j - 1)? {
            bad.push(format!("X{}", SiteId::phys(i, j)));
        }
        let d = u.conjugate(&field(l, i + 1, j + 1)?, Direction::UdagPU);
        if !projected_equal(&d, &plaquette(l, i, j)?, &pp) {
            adjoint_bad.push(format!("X{}", SiteId::phys(i + 1, j + 1)));
        }
    }
    for (i, j) in l.plaquette_anchors().into_iter().filter(|&(_, j)| deep(j)) {
        let got = u2.conjugate(&plaquette(l, i, j)?, Direction::UdagPU);
        if !projected_equal(&got, &plaquette(l, i - 1, j - 1)?, &pp) {
            bad.push(format!("B{}", SiteId::dual(i, j)));
        }
    }
    rep.check("U^2 translates bonds by -(x+y) under P+", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));
    rep.check("D^dagger X_(q+x+y) D = B_q P+", adjoint_bad.is_empty(), (!adjoint_bad.is_empty()).then(|| adjoint_bad.join(", ")));
    Ok(rep)
}

/// Auxiliary sites of `l` as `(anchor, qubit)` pairs.
pub fn auxiliary_qubits(l: &Lattice) -> Vec<((i64, i64), usize)> {
    (0..l.n_qubits())
        .filter(|&q| l.site(q).kind() == SiteKind::Auxiliary)
        .map(|q| (l.site(q).anchor(), q))
        .collect()
}
