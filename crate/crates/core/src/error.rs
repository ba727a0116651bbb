use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {message} (witness {witness:?})")]
    Validation {
        message: String,
        witness: Vec<usize>,
    },

    #[error("elements belong to different groups")]
    MismatchedGroups,

    #[error(
        "degree {degree} out of computational range: {required} cube functions to enumerate, budget is {budget}"
    )]
    Budget {
        degree: usize,
        required: u128,
        budget: u64,
    },

    #[error("bar term (p = {p}, q = {q}) out of computational range: {source}")]
    BarBudget {
        p: usize,
        q: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("position {position} out of range 1..={max}")]
    Position { position: usize, max: usize },

    #[error("morphisms are not composable: {0}")]
    NotComposable(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("degree {degree} outside the complex window [{lo}, {hi}]")]
    Window { degree: usize, lo: usize, hi: usize },

    #[error("lattice inclusion fails at column {column}")]
    NotSublattice { column: usize },

    #[error("chain complex condition violated: {0}")]
    NotAComplex(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
