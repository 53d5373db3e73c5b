//! Machine-readable pass/fail reports shared by the verification routines.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::lattice::LatticeSpec;
use crate::pauli::PauliString;

pub const SCHEMA: &str = "latticefusion/1";

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub input: String,
    pub expected: String,
    pub got: String,
    /// `got / expected` when the two agree up to a phase, else `"mismatch"`.
    pub phase: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    pub generators: Vec<GeneratorCheck>,
    pub tears: Vec<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Named integer results such as dimensions and counts.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, i64>,
    pub summary: Summary,
}

/// Phase `got / expected` as text, or `None` when the Pauli parts differ.
pub fn relative_phase(got: &PauliString, expected: &PauliString) -> Option<u8> {
    if got.zmask() != expected.zmask() || got.xmask() != expected.xmask() {
        return None;
    }
    Some((got.phase() + 4 - expected.phase()) % 4)
}

pub fn phase_text(k: u8) -> &'static str {
    ["+1", "+i", "-1", "-i"][k as usize % 4]
}

impl Report {
    pub fn new(kind: &str, lattice: Option<LatticeSpec>) -> Self {
        Report {
            schema: SCHEMA,
            kind: kind.to_string(),
            lattice,
            stage: None,
            generators: Vec::new(),
            tears: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            values: BTreeMap::new(),
            summary: Summary::default(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail });
        self.tally();
        pass
    }

    pub fn value(&mut self, name: &str, v: i64) {
        self.values.insert(name.to_string(), v);
    }

    /// Appends the checks, generators and notes of `other`.
    pub fn absorb(&mut self, other: Report) {
        self.generators.extend(other.generators);
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        self.values.extend(other.values);
        self.tally();
    }

    pub fn generator(&mut self, g: GeneratorCheck) {
        self.generators.push(g);
        self.tally();
    }

    fn tally(&mut self) {
        let pass = self.generators.iter().filter(|g| g.pass).count() + self.checks.iter().filter(|c| c.pass).count();
        let total = self.generators.len() + self.checks.len();
        self.summary = Summary { pass, fail: total - pass };
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn generators_passed(&self) -> (usize, usize) {
        (self.generators.iter().filter(|g| g.pass).count(), self.generators.len())
    }

    pub fn failures(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .generators
            .iter()
            .filter(|g| !g.pass)
            .map(|g| format!("{}: got {} expected {}", g.generator, g.got, g.expected))
            .collect();
        v.extend(self.checks.iter().filter(|c| !c.pass).map(|c| match &c.detail {
            Some(d) => format!("{}: {}", c.name, d),
            None => c.name.clone(),
        }));
        v
    }
}
