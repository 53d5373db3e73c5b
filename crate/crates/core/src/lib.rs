//! Exact Pauli and Clifford algebra for the non-invertible duality of the Xu-Moore plaquette model.

pub mod circuit;
pub mod duality;
pub mod error;
pub mod gauging;
pub mod lattice;
pub mod model;
pub mod pauli;
pub mod report;
pub mod simulator;

pub use circuit::{CliffordCircuit, Direction, Gate};
pub use duality::{build_stage, duality_unitary, projected_equal, snapshot_after, verify_automorphism, StageId};
pub use error::{Error, Result};
pub use gauging::GaugeRegion;
pub use lattice::{Geometry, Lattice, LatticeSpec, SiteId, SiteKind};
pub use model::{Coupling, LineKind, OperatorSum, PauliProjector, Term};
pub use pauli::{Pauli, PauliString, ProductOrder, SymplecticBasis};
pub use report::Report;
