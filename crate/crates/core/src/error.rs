use thiserror::Error;

/// Errors produced by lattice construction, algebra and numeric routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimensions {rows}x{cols} not 3-face-colorable: {constraint}")]
    NotThreeColorable {
        rows: usize,
        cols: usize,
        constraint: String,
    },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("expected a bordered lattice but the input is closed")]
    ClosedInput,

    #[error("degenerate patch: {0}")]
    DegeneratePatch(String),

    #[error("X face operator requested on partial face {face}")]
    PartialFaceRole { face: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("singular coupling on {what} {index}: the cosh factor vanishes")]
    SingularCoupling { what: &'static str, index: usize },

    #[error("coupling dictionary undefined: {0}")]
    DictionaryDomain(String),

    #[error(
        "homology obstruction: the closed surface carries boundary-free cycles, \
         so the overlap identity is not guaranteed; use a bordered lattice"
    )]
    HomologyObstruction,

    #[error("measurement outcome has zero amplitude")]
    ImpossibleOutcome,

    #[error("projection norm underflow while sampling qubit {qubit}")]
    ResampleGuard { qubit: usize },

    #[error("measurement basis at qubit {qubit} is not orthonormal")]
    NonOrthonormalBasis { qubit: usize },

    #[error("stabilizer generators {0} and {1} anticommute; the lattice is inconsistent")]
    CommutationFailure(usize, usize),

    #[error("power iteration did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("strip width {0} does not admit a 3-colorable periodic strip")]
    BadStripWidth(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
