//! Gauging the subsystem symmetry on all or part of the lattice.
//!
//! Gauge qubits live on the auxiliary (dual) sites of a [`Lattice`]. A physical site is
//! interior when all four surrounding dual sites carry a gauge qubit; those sites get a
//! Gauss law. Reduction to gauge-invariant variables is symbolic: `X_q` on an interior site is
//! traded for the `sigma^z` plaquette around it, and each `sigma^x` is dressed into
//! `X~ = sigma^x prod Z` over the interior corners of its plaquette, which is then written
//! as a bare `X` on the dual qubit. Interior physical qubits drop out.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{CliffordCircuit, Direction, Gate};
use crate::duality::{build_stage, StageId};
use crate::error::{Error, Result};
use crate::lattice::{Geometry, Lattice, LatticeSpec, SiteKind};
use crate::model::{build_eta_defect, build_xm, field, p_plus, plaquette, Coupling, LineKind, OperatorSum, Term};
use crate::duality::projected_equal;
use crate::pauli::{rank, PauliString};
use crate::report::Report;

/// Rectangular region of `Sx x Sy` plaquettes with lower-left plaquette anchored at `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeRegion {
    #[serde(rename = "Qx")]
    pub qx: i64,
    #[serde(rename = "Qy")]
    pub qy: i64,
    #[serde(rename = "Sx")]
    pub sx: usize,
    #[serde(rename = "Sy")]
    pub sy: usize,
}

impl GaugeRegion {
    pub fn anchors(&self) -> Vec<(i64, i64)> {
        let (qx, qy) = (self.qx, self.qy);
        (0..self.sy as i64).flat_map(|j| (0..self.sx as i64).map(move |i| (qx + i, qy + j))).collect()
    }
}

fn dual_corners(i: i64, j: i64) -> [(i64, i64); 4] {
    [(i, j), (i - 1, j), (i, j - 1), (i - 1, j - 1)]
}

pub fn is_interior(l: &Lattice, i: i64, j: i64) -> bool {
    l.phys(i, j).is_some() && dual_corners(i, j).iter().all(|&(a, b)| l.has_aux(a, b))
}

/// `G_q = X_q` times `sigma^z` on the four dual sites around `q`.
pub fn gauss_law(l: &Lattice, i: i64, j: i64) -> Result<PauliString> {
    if !is_interior(l, i, j) {
        return Err(Error::BoundarySite(i, j));
    }
    let mut g = field(l, i, j)?;
    for (a, b) in dual_corners(i, j) {
        g.set_z(l.aux(a, b).unwrap(), true);
    }
    Ok(g)
}

/// Hamiltonian with plaquettes that carry a gauge qubit coupled to its `sigma^x`.
pub fn coupled_hamiltonian(l: &Lattice) -> OperatorSum {
    let mut h = OperatorSum::new(l.n_qubits());
    for (i, j) in l.plaquette_anchors() {
        let mut b = plaquette(l, i, j).expect("anchor inside lattice");
        if let Some(a) = l.aux(i, j) {
            b.set_x(a, true);
        }
        h.push(b, Coupling::KPlaq, -1).expect("distinct plaquettes");
    }
    for (i, j) in l.physical_sites() {
        h.push(field(l, i, j).unwrap(), Coupling::KField, -1).expect("distinct sites");
    }
    h
}

/// A lattice with gauge qubits, its Gauss laws and the gauge-invariant reduction.
#[derive(Debug, Clone)]
pub struct Gauged {
    pub lattice: Lattice,
    /// Interior sites with their Gauss laws.
    pub gauss: Vec<((i64, i64), PauliString)>,
    pub coupled: OperatorSum,
    /// `coupled` written in reduced variables.
    pub reduced: OperatorSum,
    interior: HashSet<usize>,
}

impl Gauged {
    pub fn new(lattice: Lattice) -> Result<Self> {
        let mut gauss = Vec::new();
        let mut interior = HashSet::new();
        for (i, j) in lattice.physical_sites() {
            if is_interior(&lattice, i, j) {
                gauss.push(((i, j), gauss_law(&lattice, i, j)?));
                interior.insert(lattice.phys(i, j).unwrap());
            }
        }
        let coupled = coupled_hamiltonian(&lattice);
        let mut g = Gauged { lattice, gauss, coupled, reduced: OperatorSum::new(0), interior };
        let coupled = g.coupled.clone();
        g.reduced = coupled.map_terms(|t| Term {
            pauli: g.reduce(&t.pauli).expect("coupled terms are gauge invariant"),
            ..t.clone()
        })?;
        Ok(g)
    }

    pub fn gauss_generators(&self) -> Vec<PauliString> {
        self.gauss.iter().map(|(_, g)| g.clone()).collect()
    }

    /// Qubits left after reduction: everything except interior physical sites.
    pub fn reduced_qubits(&self) -> usize {
        self.lattice.n_qubits() - self.interior.len()
    }

    /// `log2` of the gauge-invariant subspace dimension.
    pub fn dim_log2(&self) -> usize {
        self.lattice.n_qubits() - rank(&self.gauss_generators())
    }

    /// `X~` on the dual site of anchor `(i, j)` in the original qubits.
    pub fn dual_x(&self, i: i64, j: i64) -> Result<PauliString> {
        let a = self.lattice.aux(i, j).ok_or(Error::OutOfWindow(i, j))?;
        let mut p = PauliString::x_on(self.lattice.n_qubits(), [a]);
        for q in self.lattice.plaquette_qubits(i, j)? {
            if self.interior.contains(&q) {
                p.set_z(q, true);
            }
        }
        Ok(p)
    }

    /// `Z~` on the dual site of anchor `(i, j)`.
    pub fn dual_z(&self, i: i64, j: i64) -> Result<PauliString> {
        let a = self.lattice.aux(i, j).ok_or(Error::OutOfWindow(i, j))?;
        Ok(PauliString::z_on(self.lattice.n_qubits(), [a]))
    }

    /// Rewrites a gauge-invariant operator in reduced variables.
    pub fn reduce(&self, o: &PauliString) -> Result<PauliString> {
        if let Some((q, _)) = self.gauss.iter().find(|(_, g)| !g.commutes_unchecked(o)) {
            return Err(Error::InvalidSpec(format!("operator is not gauge invariant at {:?}", q)));
        }
        let mut o = o.clone();
        for (q, g) in &self.gauss {
            if o.x(self.lattice.phys(q.0, q.1).unwrap()) {
                o = o.multiply(g)?;
            }
        }
        let n = self.lattice.n_qubits();
        let mut dressing = PauliString::identity(n);
        let mut bare = PauliString::identity(n);
        for &(i, j) in &self.lattice.anchors() {
            let a = self.lattice.aux(i, j).unwrap();
            if o.x(a) {
                dressing.mul_assign_unchecked(&self.dual_x(i, j)?);
                bare.set_x(a, true);
            }
        }
        let b = o.multiply(&dressing)?;
        debug_assert!(self.interior.iter().all(|&q| !b.z(q) && !b.x(q)));
        b.multiply(&bare)
    }
}

#[derive(Debug, Clone)]
pub struct FullGauge {
    pub gauged: Gauged,
    /// Reduced Hamiltonian moved onto the physical sites by `(i+1/2, j+1/2) -> (i+1, j+1)`.
    pub dual_h: OperatorSum,
    /// Lattice carrying `dual_h`: the same torus with no auxiliary sites.
    pub dual_lattice: Lattice,
}

/// Gauges the whole torus; the relabeled result is the Xu-Moore model with `g -> 1/g`.
pub fn full_gauge(lx: usize, ly: usize) -> Result<FullGauge> {
    let l = Lattice::full_dual(lx, ly)?;
    let gauged = Gauged::new(l)?;
    let plain = Lattice::with_aux(LatticeSpec::torus(lx, ly), [])?;
    let mut dual_h = OperatorSum::new(plain.n_qubits());
    for t in gauged.reduced.terms() {
        dual_h.push(relabel(&gauged.lattice, &plain, &t.pauli), t.coupling, t.sign)?;
    }
    Ok(FullGauge { gauged, dual_h, dual_lattice: plain })
}

/// Moves each dual qubit `(i+1/2, j+1/2)` to the physical site `(i+1, j+1)`; physical qubits
/// must be unused.
fn relabel(from: &Lattice, to: &Lattice, p: &PauliString) -> PauliString {
    let mut out = PauliString::identity(to.n_qubits()).with_phase(p.phase());
    for q in p.support() {
        let s = from.site(q);
        assert_eq!(s.kind(), SiteKind::Auxiliary, "physical qubit survived the reduction");
        let (i, j) = s.anchor();
        let t = to.phys(i + 1, j + 1).unwrap();
        out.set_z(t, p.z(q));
        out.set_x(t, p.x(q));
    }
    out
}

#[derive(Debug, Clone)]
pub struct PartialGauge {
    pub region: GaugeRegion,
    pub gauged: Gauged,
    pub gauged_h: OperatorSum,
    /// Terms of plaquettes in the region with a corner outside its interior.
    pub defect_terms: OperatorSum,
    pub dim_log2: usize,
}

pub fn partial_gauge(spec: LatticeSpec, region: GaugeRegion) -> Result<PartialGauge> {
    if spec.geometry != Geometry::Torus {
        return Err(Error::WrongGeometry("torus"));
    }
    if region.sx == 0 || region.sy == 0 || region.sx >= spec.lx || region.sy >= spec.ly {
        return Err(Error::RegionOutOfBounds(format!(
            "{}x{} region on a {}x{} torus",
            region.sx, region.sy, spec.lx, spec.ly
        )));
    }
    let l = Lattice::with_aux(spec, region.anchors())?;
    let gauged = Gauged::new(l)?;
    let defect_terms = defect_terms_of(&gauged);
    let formula = spec.lx * spec.ly + region.sx + region.sy - 1;
    let dim_log2 = gauged.dim_log2();
    debug_assert_eq!(dim_log2, formula);
    Ok(PartialGauge { region, gauged_h: gauged.reduced.clone(), gauged, defect_terms, dim_log2 })
}

fn defect_terms_of(g: &Gauged) -> OperatorSum {
    let l = &g.lattice;
    let touching: HashSet<PauliString> = l
        .anchors()
        .into_iter()
        .filter(|&(i, j)| {
            l.plaquette_qubits(i, j).map(|qs| qs.iter().any(|q| !g.interior.contains(q))).unwrap_or(false)
        })
        .map(|(i, j)| {
            let mut b = plaquette(l, i, j).unwrap();
            b.set_x(l.aux(i, j).unwrap(), true);
            g.reduce(&b).unwrap()
        })
        .collect();
    g.reduced.filter(|t| t.coupling == Coupling::KPlaq && touching.contains(&t.pauli))
}

/// Defect-line terms of the region gauged by the auxiliary sites of `l`.
pub fn defect_line(l: &Lattice) -> Result<OperatorSum> {
    Ok(defect_terms_of(&Gauged::new(l.clone())?))
}

#[derive(Debug, Clone)]
pub struct CylinderGauge {
    pub gauged: Gauged,
    pub gauged_h: OperatorSum,
    pub flip: CliffordCircuit,
    pub flipped_h: OperatorSum,
    pub sx: usize,
}

/// Gauges columns `0..Sx` of plaquettes on a cylinder window.
pub fn cylinder_partial_gauge(spec: LatticeSpec, sx: usize) -> Result<CylinderGauge> {
    if spec.geometry != Geometry::CylinderWindow {
        return Err(Error::WrongGeometry("cylinder"));
    }
    if sx == 0 || sx >= spec.lx {
        return Err(Error::BadRegion(format!("Sx = {sx} on a window of width {}", spec.lx)));
    }
    let anchors: Vec<(i64, i64)> =
        (0..spec.ly as i64 - 1).flat_map(|j| (0..sx as i64).map(move |i| (i, j))).collect();
    let gauged = Gauged::new(Lattice::with_aux(spec, anchors)?)?;
    let l = &gauged.lattice;
    let s = sx as i64;
    let mut gates = Vec::new();
    for j in 0..l.ly() - 1 {
        let d = l.aux(s - 1, j).unwrap();
        gates.push(Gate::CZ(d, l.phys(s, j).unwrap()));
        gates.push(Gate::CZ(d, l.phys(s, j + 1).unwrap()));
    }
    let flip = CliffordCircuit::with_gates(l.n_qubits(), gates)?;
    let flipped_h = gauged.reduced.conjugate(&flip, Direction::UPUdag)?;
    Ok(CylinderGauge { gauged_h: gauged.reduced.clone(), gauged, flip, flipped_h, sx })
}

impl CylinderGauge {
    /// Left line `X~_(0,j) Z_(0,j) Z_(0,j+1)` and right line `X_(Sx,j) Z~_(Sx-1,j) Z~_(Sx-1,j-1)`
    /// after the flip, on rows whose neighbours are all gauged.
    pub fn flipped_defect_families(&self) -> (Vec<PauliString>, Vec<PauliString>) {
        let l = &self.gauged.lattice;
        let s = self.sx as i64;
        let n = l.n_qubits();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for j in 1..l.ly() - 2 {
            let mut t = PauliString::z_on(n, [l.phys(0, j).unwrap(), l.phys(0, j + 1).unwrap()]);
            t.set_x(l.aux(0, j).unwrap(), true);
            left.push(t);
        }
        for j in 1..l.ly() - 1 {
            let mut t = PauliString::z_on(n, [l.aux(s - 1, j).unwrap(), l.aux(s - 1, j - 1).unwrap()]);
            t.set_x(l.phys(s, j).unwrap(), true);
            right.push(t);
        }
        (left, right)
    }
}

/// Window with gauge qubits on every plaquette `(i, j)` with `i >= qx` and `j >= qy`.
pub fn quadrant_lattice(spec: LatticeSpec, qx: i64, qy: i64) -> Result<Lattice> {
    let probe = Lattice::with_aux(spec, [])?;
    let anchors: Vec<(i64, i64)> =
        probe.plaquette_anchors().into_iter().filter(|&(i, j)| i >= qx && j >= qy).collect();
    if anchors.is_empty() {
        return Err(Error::BadRegion(format!("no plaquettes beyond ({qx},{qy})")));
    }
    Lattice::with_aux(spec, anchors)
}

/// Operator fusing an `eta` line at `(i + 1/2, j)` (row) or `(i, j + 1/2)` (column) into the
/// duality defect bounding the gauged quadrant at `(qx, qy)`.
///
/// Row: `prod_(k=i+1..=qx) X_(k,j)` times `sigma^z` on the duals `(qx, j-1)` and `(qx, j)`.
/// Column: `prod_(l=j+1..=qy) X_(i,l)` times `sigma^z` on the duals `(i-1, qy)` and `(i, qy)`.
pub fn eta_duality_fusion_operator(l: &Lattice, kind: LineKind, i: i64, j: i64, qx: i64, qy: i64) -> Result<PauliString> {
    build_eta_defect(l, kind, i, j)?;
    let n = l.n_qubits();
    let (string, duals): (Vec<_>, [_; 2]) = match kind {
        LineKind::Row if i < qx && j > qy => ((i + 1..=qx).map(|k| (k, j)).collect(), [(qx, j - 1), (qx, j)]),
        LineKind::Col if j < qy && i > qx => ((j + 1..=qy).map(|m| (i, m)).collect(), [(i - 1, qy), (i, qy)]),
        _ => return Err(Error::ImmobileDefect),
    };
    let mut lam = PauliString::identity(n);
    for (a, b) in string {
        lam.set_x(l.phys(a, b).ok_or(Error::ImmobileDefect)?, true);
    }
    for (a, b) in duals {
        lam.set_z(l.aux(a, b).ok_or(Error::ImmobileDefect)?, true);
    }
    Ok(lam)
}

/// Coupled Hamiltonian of `l` with the two plaquettes of an `eta` defect sign-flipped.
pub fn eta_defect_coupled(l: &Lattice, kind: LineKind, i: i64, j: i64) -> Result<OperatorSum> {
    let d = build_eta_defect(l, kind, i, j)?;
    let flip: Vec<PauliString> = d.flipped.iter().map(|&(a, b)| plaquette(l, a, b).unwrap()).collect();
    coupled_hamiltonian(l).map_terms(|t| {
        let bare = strip_aux(l, &t.pauli);
        let s = if t.coupling == Coupling::KPlaq && flip.contains(&bare) { -t.sign } else { t.sign };
        Term { sign: s, ..t.clone() }
    })
}

fn strip_aux(l: &Lattice, p: &PauliString) -> PauliString {
    let mut out = p.clone();
    for q in p.support() {
        if l.site(q).kind() == SiteKind::Auxiliary {
            out.set_z(q, false);
            out.set_x(q, false);
        }
    }
    out
}

/// Sweeps every `eta` position: reachable ones must fuse exactly, others must be immobile.
pub fn eta_d_fusion_suite(l: &Lattice, qx: i64, qy: i64) -> Result<Report> {
    let mut rep = Report::new("fusion-eta-d", Some(*l.spec()));
    let h_d = coupled_hamiltonian(l);
    let mut reachable = 0;
    let mut immobile = 0;
    let mut bad = Vec::new();
    for kind in [LineKind::Row, LineKind::Col] {
        for (i, j) in l.physical_sites() {
            if build_eta_defect(l, kind, i, j).is_err() {
                continue;
            }
            let h_eta = eta_defect_coupled(l, kind, i, j)?;
            match eta_duality_fusion_operator(l, kind, i, j, qx, qy) {
                Ok(lam) => {
                    reachable += 1;
                    let d = h_eta.conjugate_by_pauli(&lam)?.diff(&h_d, l);
                    let sq = lam.multiply(&lam)?.is_identity();
                    if !d.is_empty() || !sq {
                        bad.push(format!("{kind:?} ({i},{j})"));
                    }
                }
                Err(Error::ImmobileDefect) => {
                    immobile += 1;
                    let expect_reachable = match kind {
                        LineKind::Row => i < qx && j > qy,
                        LineKind::Col => j < qy && i > qx,
                    };
                    if expect_reachable {
                        bad.push(format!("{kind:?} ({i},{j}) wrongly immobile"));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    rep.check(
        format!("eta lines fuse into the duality defect ({reachable} reachable, {immobile} immobile)"),
        bad.is_empty() && reachable > 0 && immobile > 0,
        (!bad.is_empty()).then(|| bad.join("; ")),
    );
    Ok(rep)
}

/// Reduces the extended Hamiltonian in the auxiliary sector `signs` (`true` = `sigma^z = -1`).
fn sector_hamiltonian(l: &Lattice, h: &OperatorSum, twisted: &HashSet<usize>) -> Result<OperatorSum> {
    let mut out = OperatorSum::new(l.n_qubits());
    for t in h.terms() {
        let mut sign = t.sign;
        for q in t.pauli.support() {
            if l.site(q).kind() == SiteKind::Auxiliary {
                if t.pauli.x(q) {
                    return Err(Error::InvalidSpec("term flips an auxiliary qubit".into()));
                }
                if twisted.contains(&q) {
                    sign = -sign;
                }
            }
        }
        out.push(strip_aux(l, &t.pauli), t.coupling, sign)?;
    }
    Ok(out)
}

fn flip_pattern(l: &Lattice, h: &OperatorSum, base: &OperatorSum) -> BTreeSet<String> {
    h.terms()
        .iter()
        .filter(|t| base.get(&t.pauli, t.coupling).map(|u| u.sign != t.sign).unwrap_or(true))
        .map(|t| t.pauli.render(l))
        .collect()
}

/// Fusion of two duality defects: `lambda = U_s^dagger` undoes the pair, and each
/// auxiliary sector reduces to the Xu-Moore model with the matching `eta` defects.
pub fn dd_fusion_check(l: &Lattice, seed: u64) -> Result<Report> {
    let mut rep = Report::new("fusion-d-d", Some(*l.spec()));
    let us = build_stage(l, StageId::Us)?;
    let h_ext = build_xm(l, true);
    let h_dd = h_ext.conjugate(&us, Direction::UPUdag)?;
    let fused = h_dd.conjugate(&us, Direction::UdagPU)?;
    let d = fused.diff(&h_ext, l);
    rep.check("lambda H_DD lambda^-1 is the extended Hamiltonian", d.is_empty(), (!d.is_empty()).then(|| format!("{d:?}")));

    let xm = build_xm(l, false);
    let pp = p_plus(l);
    let untwisted = fused.map_terms(|t| Term { pauli: strip_aux(l, &t.pauli), ..t.clone() })?;
    let proj_ok = fused.terms().iter().all(|t| projected_equal(&t.pauli, &strip_aux(l, &t.pauli), &pp));
    let d = untwisted.diff(&xm, l);
    rep.check("untwisted sector reduces to H_XM", proj_ok && d.is_empty(), (!d.is_empty()).then(|| format!("{d:?}")));

    let aux: Vec<((i64, i64), usize)> = crate::duality::auxiliary_qubits(l);
    let singles: Vec<BTreeSet<String>> = aux
        .iter()
        .map(|&(_, q)| sector_hamiltonian(l, &fused, &HashSet::from([q])).map(|h| flip_pattern(l, &h, &xm)))
        .collect::<Result<_>>()?;
    let compose = |qs: &HashSet<usize>| -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        for (k, &(_, q)) in aux.iter().enumerate() {
            if qs.contains(&q) {
                acc = acc.symmetric_difference(&singles[k]).cloned().collect();
            }
        }
        acc
    };

    if l.geometry() != Geometry::CylinderWindow {
        let all: HashSet<usize> = aux.iter().map(|&(_, q)| q).collect();
        let h = sector_hamiltonian(l, &fused, &all)?;
        rep.notes.push(format!(
            "torus: sector decomposition reported, not asserted; all-twisted sector flips {} plaquettes",
            flip_pattern(l, &h, &xm).len()
        ));
        return Ok(rep);
    }

    // twisting sigma^z on rows j-1 and j is an eta row defect at (1/2, j)
    let rows: Vec<i64> = (1..l.ly() - 1).filter(|&j| l.is_bulk_row(j)).collect();
    let picks: Vec<i64> = [rows[0], rows[rows.len() / 2], rows[rows.len() - 1]].into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    for j in picks {
        let tw = HashSet::from([l.aux(0, j - 1).unwrap(), l.aux(0, j).unwrap()]);
        let h = sector_hamiltonian(l, &fused, &tw)?;
        let parent = build_eta_defect(l, LineKind::Row, 0, j)?.parent_h;
        let d = h.diff(&parent, l);
        rep.check(format!("twist rows {}..{} is the eta row defect at j={j}", j - 1, j), d.is_empty(), (!d.is_empty()).then(|| format!("{d:?}")));
    }

    let all: HashSet<usize> = aux.iter().map(|&(_, q)| q).collect();
    let h = sector_hamiltonian(l, &fused, &all)?;
    rep.check("all-twisted sector is the product of single patterns", flip_pattern(l, &h, &xm) == compose(&all), None);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for k in 0..8 {
        let m = rng.gen_range(2..=aux.len());
        let chosen: HashSet<usize> = aux.choose_multiple(&mut rng, m).map(|&(_, q)| q).collect();
        let h = sector_hamiltonian(l, &fused, &chosen)?;
        let expected = xm.map_terms(|t| {
            let hit = aux.iter().any(|&((i, j), q)| chosen.contains(&q) && t.coupling == Coupling::KPlaq && plaquette(l, i, j).map(|b| b == t.pauli).unwrap_or(false));
            Term { sign: if hit { -t.sign } else { t.sign }, ..t.clone() }
        })?;
        if !h.diff(&expected, l).is_empty() || flip_pattern(l, &h, &xm) != compose(&chosen) {
            bad.push(format!("sample {k}"));
        }
    }
    rep.check("8 random multi-twist sectors", bad.is_empty(), (!bad.is_empty()).then(|| bad.join(", ")));
    Ok(rep)
}
