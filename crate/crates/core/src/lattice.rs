//! Torus, cylinder-window and plane-window geometries in doubled coordinates.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Torus,
    #[serde(rename = "cylinder")]
    CylinderWindow,
    /// Open in both directions.
    #[serde(rename = "plane")]
    PlaneWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub geometry: Geometry,
    #[serde(rename = "Lx")]
    pub lx: usize,
    #[serde(rename = "Ly")]
    pub ly: usize,
    pub margin: usize,
}

impl LatticeSpec {
    pub fn torus(lx: usize, ly: usize) -> Self {
        LatticeSpec { geometry: Geometry::Torus, lx, ly, margin: 0 }
    }

    pub fn cylinder(lx: usize, height: usize, margin: usize) -> Self {
        LatticeSpec { geometry: Geometry::CylinderWindow, lx, ly: height, margin }
    }

    pub fn plane(lx: usize, ly: usize) -> Self {
        LatticeSpec { geometry: Geometry::PlaneWindow, lx, ly, margin: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self.geometry {
            Geometry::Torus => {
                if self.ly < 3 || self.lx < self.ly {
                    return Err(Error::InvalidSpec(format!(
                        "torus needs Lx >= Ly >= 3, got {}x{}",
                        self.lx, self.ly
                    )));
                }
            }
            Geometry::CylinderWindow => {
                if self.lx < 2 {
                    return Err(Error::InvalidSpec(format!("cylinder needs Lx >= 2, got {}", self.lx)));
                }
                if self.ly < 2 * self.margin + 3 {
                    return Err(Error::InvalidSpec(format!(
                        "window height {} too small for margin {}",
                        self.ly, self.margin
                    )));
                }
            }
            Geometry::PlaneWindow => {
                if self.lx < 2 || self.ly < 2 * self.margin + 2 {
                    return Err(Error::InvalidSpec(format!("plane window {}x{} too small", self.lx, self.ly)));
                }
            }
        }
        Ok(())
    }
}

/// A site in doubled coordinates: physical `(2i, 2j)`, auxiliary `(2i+1, 2j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiteId {
    pub dx: i64,
    pub dy: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    Physical,
    Auxiliary,
}

impl SiteId {
    pub fn new(dx: i64, dy: i64) -> Result<Self> {
        if (dx - dy).rem_euclid(2) != 0 {
            return Err(Error::Parse(format!("mixed parity doubled coordinates ({dx},{dy})")));
        }
        Ok(SiteId { dx, dy })
    }

    pub fn phys(i: i64, j: i64) -> Self {
        SiteId { dx: 2 * i, dy: 2 * j }
    }

    /// The dual site `q + (1/2, 1/2)` of the plaquette anchored at `(i, j)`.
    pub fn dual(i: i64, j: i64) -> Self {
        SiteId { dx: 2 * i + 1, dy: 2 * j + 1 }
    }

    pub fn kind(&self) -> SiteKind {
        if self.dx.rem_euclid(2) == 0 {
            SiteKind::Physical
        } else {
            SiteKind::Auxiliary
        }
    }

    /// Integer anchor `(i, j)`; for auxiliary sites this is the lower-left plaquette corner.
    pub fn anchor(&self) -> (i64, i64) {
        (self.dx.div_euclid(2), self.dy.div_euclid(2))
    }

    pub fn shifted(&self, ddx: i64, ddy: i64) -> Self {
        SiteId { dx: self.dx + ddx, dy: self.dy + ddy }
    }
}

fn half(v: i64) -> String {
    if v.rem_euclid(2) == 0 {
        format!("{}", v / 2)
    } else {
        format!("{}.5", v.div_euclid(2))
    }
}

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", half(self.dx), half(self.dy))
    }
}

fn parse_half(s: &str) -> Result<i64> {
    let s = s.trim();
    if let Some(base) = s.strip_suffix(".5") {
        let b: i64 = base.parse().map_err(|_| Error::Parse(format!("bad coordinate {s}")))?;
        Ok(2 * b + 1)
    } else {
        let b: i64 = s.parse().map_err(|_| Error::Parse(format!("bad coordinate {s}")))?;
        Ok(2 * b)
    }
}

impl std::str::FromStr for SiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad site {s}")))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad site {s}")))?;
        SiteId::new(parse_half(a)?, parse_half(b)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaquette {
    pub corners: [SiteId; 4],
    pub dual: SiteId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layers {
    /// Auxiliary anchors.
    pub sigma: Vec<SiteId>,
    /// Row 0 together with column 0.
    pub l0: Vec<SiteId>,
    /// `layers[k - 1]` is `L_k`.
    pub layers: Vec<Vec<SiteId>>,
}

impl Layers {
    pub fn kmax(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, k: usize) -> &[SiteId] {
        &self.layers[k - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiteSets {
    pub s: Vec<SiteId>,
    pub sx: Vec<SiteId>,
    pub sy: Vec<SiteId>,
    pub sbar: Vec<SiteId>,
    pub layers: Option<Layers>,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    spec: LatticeSpec,
    sites: Vec<SiteId>,
    index: HashMap<SiteId, usize>,
    n_phys: usize,
    anchors: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SiteEntry {
    pub dx: i64,
    pub dy: i64,
    pub kind: SiteKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeDescription {
    pub geometry: Geometry,
    #[serde(rename = "Lx")]
    pub lx: usize,
    #[serde(rename = "Ly")]
    pub ly: usize,
    pub margin: usize,
    pub sites: Vec<SiteEntry>,
}

impl Lattice {
    pub fn new(spec: LatticeSpec) -> Result<Self> {
        spec.validate()?;
        let (lx, ly) = (spec.lx as i64, spec.ly as i64);
        let anchors = match spec.geometry {
            Geometry::Torus => {
                let mut v: Vec<(i64, i64)> = (0..lx).map(|i| (i, 0)).collect();
                v.extend((1..ly).map(|j| (0, j)));
                v
            }
            Geometry::CylinderWindow => (0..ly).map(|j| (0, j)).collect(),
            Geometry::PlaneWindow => Vec::new(),
        };
        Ok(Self::build(spec, anchors))
    }

    /// A lattice whose auxiliary sites sit on the dual sites of the given plaquette anchors.
    pub fn with_aux(spec: LatticeSpec, anchors: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        spec.validate()?;
        let probe = Self::build(spec, Vec::new());
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (i, j) in anchors {
            let c = probe.canonical(SiteId::dual(i, j)).ok_or(Error::OutOfWindow(i, j))?;
            if seen.insert(c) {
                out.push(c.anchor());
            }
        }
        Ok(Self::build(spec, out))
    }

    /// Torus with an auxiliary site on every dual site.
    pub fn full_dual(lx: usize, ly: usize) -> Result<Self> {
        let anchors: Vec<(i64, i64)> =
            (0..ly as i64).flat_map(|j| (0..lx as i64).map(move |i| (i, j))).collect();
        Lattice::with_aux(LatticeSpec::torus(lx, ly), anchors)
    }

    fn build(spec: LatticeSpec, anchors: Vec<(i64, i64)>) -> Self {
        let (lx, ly) = (spec.lx as i64, spec.ly as i64);
        let aux: HashSet<SiteId> = anchors.iter().map(|&(i, j)| SiteId::dual(i, j)).collect();
        let mut sites = Vec::new();
        for dy in 0..2 * ly {
            for dx in 0..2 * lx {
                let s = SiteId { dx, dy };
                let keep = match (dx % 2, dy % 2) {
                    (0, 0) => true,
                    (1, 1) => aux.contains(&s),
                    _ => false,
                };
                if keep {
                    sites.push(s);
                }
            }
        }
        let index = sites.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        Lattice { spec, sites, index, n_phys: (lx * ly) as usize, anchors }
    }

    pub fn torus(lx: usize, ly: usize) -> Result<Self> {
        Lattice::new(LatticeSpec::torus(lx, ly))
    }

    pub fn cylinder(lx: usize, height: usize, margin: usize) -> Result<Self> {
        Lattice::new(LatticeSpec::cylinder(lx, height, margin))
    }

    pub fn plane(lx: usize, ly: usize) -> Result<Self> {
        Lattice::new(LatticeSpec::plane(lx, ly))
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn geometry(&self) -> Geometry {
        self.spec.geometry
    }

    pub fn is_torus(&self) -> bool {
        self.spec.geometry == Geometry::Torus
    }

    pub fn lx(&self) -> i64 {
        self.spec.lx as i64
    }

    pub fn ly(&self) -> i64 {
        self.spec.ly as i64
    }

    pub fn n_qubits(&self) -> usize {
        self.sites.len()
    }

    pub fn n_physical(&self) -> usize {
        self.n_phys
    }

    pub fn n_auxiliary(&self) -> usize {
        self.sites.len() - self.n_phys
    }

    pub fn sites(&self) -> &[SiteId] {
        &self.sites
    }

    pub fn site(&self, idx: usize) -> SiteId {
        self.sites[idx]
    }

    /// Wraps periodic directions; `None` when the site leaves an open window edge.
    pub fn canonical(&self, s: SiteId) -> Option<SiteId> {
        let (wx, wy) = (2 * self.lx(), 2 * self.ly());
        let inside = |v: i64, w: i64| (0..w).contains(&v);
        match self.spec.geometry {
            Geometry::Torus => Some(SiteId { dx: s.dx.rem_euclid(wx), dy: s.dy.rem_euclid(wy) }),
            Geometry::CylinderWindow => inside(s.dy, wy).then(|| SiteId { dx: s.dx.rem_euclid(wx), dy: s.dy }),
            Geometry::PlaneWindow => (inside(s.dx, wx) && inside(s.dy, wy)).then_some(s),
        }
    }

    pub fn index_of(&self, s: SiteId) -> Option<usize> {
        self.canonical(s).and_then(|c| self.index.get(&c).copied())
    }

    pub fn phys(&self, i: i64, j: i64) -> Option<usize> {
        self.index_of(SiteId::phys(i, j))
    }

    /// Auxiliary qubit at the dual site of anchor `(i, j)`, if one exists.
    pub fn aux(&self, i: i64, j: i64) -> Option<usize> {
        self.index_of(SiteId::dual(i, j))
    }

    pub fn has_aux(&self, i: i64, j: i64) -> bool {
        self.aux(i, j).is_some()
    }

    pub fn physical_sites(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (lx, ly) = (self.lx(), self.ly());
        (0..ly).flat_map(move |j| (0..lx).map(move |i| (i, j)))
    }

    pub fn auxiliary_sites(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.sites.iter().copied().filter(|s| s.kind() == SiteKind::Auxiliary)
    }

    /// Anchors carrying an auxiliary site. By default: bottom row then left column on the
    /// torus, column 0 on the cylinder, none on the plane.
    pub fn anchors(&self) -> Vec<(i64, i64)> {
        self.anchors.clone()
    }

    /// Anchors whose plaquette fits inside the lattice.
    pub fn plaquette_anchors(&self) -> Vec<(i64, i64)> {
        let (right, top) = match self.spec.geometry {
            Geometry::Torus => (self.lx(), self.ly()),
            Geometry::CylinderWindow => (self.lx(), self.ly() - 1),
            Geometry::PlaneWindow => (self.lx() - 1, self.ly() - 1),
        };
        (0..top).flat_map(|j| (0..right).map(move |i| (i, j))).collect()
    }

    pub fn plaquette(&self, q: SiteId) -> Result<Plaquette> {
        if q.kind() != SiteKind::Physical {
            return Err(Error::InvalidSpec(format!("plaquette anchor {q} is not physical")));
        }
        let (i, j) = q.anchor();
        let mut corners = [q; 4];
        for (k, (di, dj)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
            corners[k] = self
                .canonical(SiteId::phys(i + di, j + dj))
                .ok_or(Error::OutOfWindow(i + di, j + dj))?;
        }
        let dual = self.canonical(SiteId::dual(i, j)).ok_or(Error::OutOfWindow(i, j))?;
        Ok(Plaquette { corners, dual })
    }

    /// Qubit indices of the four plaquette corners anchored at `(i, j)`.
    pub fn plaquette_qubits(&self, i: i64, j: i64) -> Result<[usize; 4]> {
        let mut out = [0; 4];
        for (k, (di, dj)) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
            out[k] = self.phys(i + di, j + dj).ok_or(Error::OutOfWindow(i + di, j + dj))?;
        }
        Ok(out)
    }

    /// Rows `j` whose generators are verified on a window.
    pub fn is_bulk_row(&self, j: i64) -> bool {
        match self.spec.geometry {
            Geometry::Torus => true,
            Geometry::CylinderWindow | Geometry::PlaneWindow => {
                let m = self.spec.margin as i64;
                j >= m && j < self.ly() - m
            }
        }
    }

    pub fn site_sets(&self) -> SiteSets {
        let (lx, ly) = (self.lx(), self.ly());
        let (sx, sy): (Vec<SiteId>, Vec<SiteId>) = match self.spec.geometry {
            Geometry::Torus => (
                (0..lx).map(|i| SiteId::phys(i, 0)).collect(),
                (0..ly).map(|j| SiteId::phys(0, j)).collect(),
            ),
            Geometry::CylinderWindow => (vec![], (0..ly).map(|j| SiteId::phys(0, j)).collect()),
            Geometry::PlaneWindow => (vec![], vec![]),
        };
        let s = self.anchors.iter().map(|&(i, j)| SiteId::phys(i, j)).collect();
        SiteSets {
            s,
            sx,
            sy,
            sbar: self.auxiliary_sites().collect(),
            layers: self.layer_decomposition().ok(),
        }
    }

    /// L-shaped layers of the torus circuit.
    ///
    /// `L_k` for `1 <= k < Ly` is row `k` from column `k` rightwards, column `k` from row `k`
    /// upwards, plus the two leg ends `(0,k)` and `(k,0)`; the last layer `L_Ly` collects the
    /// rest of row 0 and the origin.
    pub fn layer_decomposition(&self) -> Result<Layers> {
        if !self.is_torus() {
            return Err(Error::WrongGeometry("torus"));
        }
        let (lx, ly) = (self.lx(), self.ly());
        let mut sigma: Vec<SiteId> = (0..lx).map(|i| SiteId::dual(i, 0)).collect();
        sigma.extend((1..ly).map(|j| SiteId::dual(0, j)));
        let mut l0: Vec<SiteId> = (0..lx).map(|i| SiteId::phys(i, 0)).collect();
        l0.extend((1..ly).map(|j| SiteId::phys(0, j)));
        let mut layers = Vec::new();
        for k in 1..ly {
            let mut l: Vec<SiteId> = (k..ly).map(|y| SiteId::phys(k, y)).collect();
            l.extend((k + 1..lx).map(|x| SiteId::phys(x, k)));
            l.push(SiteId::phys(0, k));
            l.push(SiteId::phys(k, 0));
            layers.push(l);
        }
        let mut last: Vec<SiteId> = (ly..lx).map(|x| SiteId::phys(x, 0)).collect();
        last.push(SiteId::phys(0, 0));
        layers.push(last);
        let out = Layers { sigma, l0, layers };
        self.check_partition(&out)?;
        Ok(out)
    }

    fn check_partition(&self, layers: &Layers) -> Result<()> {
        let mut seen = vec![0usize; self.n_qubits()];
        for l in &layers.layers {
            for s in l {
                let k = self.index_of(*s).ok_or(Error::OutOfWindow(s.dx / 2, s.dy / 2))?;
                seen[k] += 1;
            }
        }
        for (i, j) in self.physical_sites() {
            let k = self.phys(i, j).unwrap();
            if seen[k] != 1 {
                return Err(Error::InvalidSpec(format!(
                    "site ({i},{j}) covered {} times by the layers",
                    seen[k]
                )));
            }
        }
        Ok(())
    }

    /// Permutation of qubits under the translation `q -> q + (di, dj)`; auxiliary qubits stay put.
    pub fn translation(&self, di: i64, dj: i64) -> Result<Vec<usize>> {
        if !self.is_torus() {
            return Err(Error::WrongGeometry("torus"));
        }
        let mut perm: Vec<usize> = (0..self.n_qubits()).collect();
        for (i, j) in self.physical_sites() {
            perm[self.phys(i, j).unwrap()] = self.phys(i + di, j + dj).unwrap();
        }
        Ok(perm)
    }

    pub fn describe(&self) -> LatticeDescription {
        LatticeDescription {
            geometry: self.spec.geometry,
            lx: self.spec.lx,
            ly: self.spec.ly,
            margin: self.spec.margin,
            sites: self.sites.iter().map(|s| SiteEntry { dx: s.dx, dy: s.dy, kind: s.kind() }).collect(),
        }
    }
}
