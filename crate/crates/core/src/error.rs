//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty input: at least one maximal simplex is required")]
    EmptyInput,
    #[error("duplicate maximal simplex {0:?}")]
    DuplicateMaximalSimplex(Vec<u32>),
    #[error("invalid simplex {0:?}: repeated vertex")]
    InvalidSimplex(Vec<u32>),
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("complex is not a closed oriented manifold: {0}")]
    NotClosedOriented(String),
    #[error("cocycle is not flat: triangle {0:?} has nontrivial holonomy")]
    CocycleNotFlat(Vec<u32>),
    #[error("cocycle missing edge ({0}, {1})")]
    MissingEdge(u32, u32),
    #[error("unknown irrep {0:?}")]
    UnknownIrrep(String),
    #[error("vertex sequence is not a path: ({0}, {1}) is not an edge")]
    NotAPath(u32, u32),
    #[error("complex has no boundary")]
    NoBoundary,
    #[error("boundary is not a manifold: ridge {0:?} has {1} cofacets")]
    NonManifoldBoundary(Vec<u32>, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0:?} is not a subset of the ambient based set")]
    NotASubset(String),
    #[error("control space carries no group action")]
    NoGroupAction,
    #[error("middle form is degenerate: {0}")]
    DegenerateForm(String),
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("unsupported scalar mode: {0}")]
    UnsupportedMode(String),
}

impl Error {
    /// Stable machine-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::DuplicateMaximalSimplex(_) => "DuplicateMaximalSimplex",
            Error::InvalidSimplex(_) => "InvalidSimplex",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::NotClosedOriented(_) => "NotClosedOriented",
            Error::CocycleNotFlat(_) => "CocycleNotFlat",
            Error::MissingEdge(_, _) => "MissingEdge",
            Error::UnknownIrrep(_) => "UnknownIrrep",
            Error::NotAPath(_, _) => "NotAPath",
            Error::NoBoundary => "NoBoundary",
            Error::NonManifoldBoundary(_, _) => "NonManifoldBoundary",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotASubset(_) => "NotASubset",
            Error::NoGroupAction => "NoGroupAction",
            Error::DegenerateForm(_) => "DegenerateForm",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::UnsupportedMode(_) => "UnsupportedMode",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
