use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("unknown shape `{0}`")]
    UnknownShape(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("cube dimension {0} not supported (must be 2 or 3)")]
    CubeDimension(u32),

    #[error("category is not strictly homotopy finite: {0}")]
    NotStrictlyHomotopyFinite(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("functoriality violation on composable pair ({g} after {f})")]
    Functoriality { g: String, f: String },

    #[error("naturality violation at morphism `{0}`")]
    Naturality(String),

    #[error("resource cap exceeded: total dimension {got} > cap {cap}")]
    ResourceCap { got: usize, cap: usize },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown operation `{0}`")]
    UnknownOp(String),

    #[error("unknown adjunction pair `{0}`")]
    UnknownAdjunction(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code per the CLI contract: 1 theorem failure, 2 input
    /// error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TheoremViolation(_) => 1,
            Error::ResourceCap { .. } => 3,
            _ => 2,
        }
    }
}
