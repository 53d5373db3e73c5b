use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),
    #[error("site ({0},{1}) lies outside the window")]
    OutOfWindow(i64, i64),
    #[error("operation needs a {0} lattice")]
    WrongGeometry(&'static str),
    #[error("operands act on {0} and {1} qubits")]
    SiteSetMismatch(usize, usize),
    #[error("empty factor list")]
    EmptyList,
    #[error("circuits act on {0} and {1} qubits")]
    LatticeMismatch(usize, usize),
    #[error("stage {0} is not defined here")]
    InvalidStage(String),
    #[error("stage list is not a prefix of the full sequence")]
    InvalidPrefix,
    #[error("index {0} out of range")]
    IndexOutOfRange(i64),
    #[error("degenerate rectangle")]
    DegenerateRect,
    #[error("site ({0},{1}) is on the region boundary")]
    BoundarySite(i64, i64),
    #[error("region does not fit the lattice: {0}")]
    RegionOutOfBounds(String),
    #[error("bad region: {0}")]
    BadRegion(String),
    #[error("defect line cannot reach the duality defect")]
    ImmobileDefect,
    #[error("{0} qubits exceeds the dense cap of {1}")]
    TooManyQubits(usize, usize),
    #[error("projector generators do not commute")]
    NonCommutingGenerators,
    #[error("projector generators contradict each other")]
    ContradictoryGenerators,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
