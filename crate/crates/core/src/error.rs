use thiserror::Error;

/// Errors raised by the ring, embedding, morphism, ordering and module engines.
///
/// Variants named `*NotFound`, `DecompositionFailed`, `NoConvergence` and
/// `CounterexampleFound` guard against internal bugs: a correct build never
/// produces them on valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring tables: {law} fails at {witness}")]
    InvalidTables { law: String, witness: String },
    #[error("ring of size {size} exceeds the cap of {cap} elements")]
    SizeCapExceeded { size: u128, cap: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("ring {ring} is not semisimple: radical has {radical_size} elements")]
    NotSemisimple { ring: String, radical_size: usize },
    #[error("semisimple decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("element {0} is not idempotent in the quotient")]
    NotIdempotent(usize),
    #[error("idempotent lifting did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("no conjugator pair found for block {block}, index {index}")]
    ConjugatorNotFound { block: usize, index: usize },
    #[error("matrix is not in the image of the Artin-Wedderburn embedding")]
    RecoverOutsideImage,
    #[error("map is not surjective: block {block} has rank {rank}, expected {expected}")]
    NotSurjective { block: usize, rank: usize, expected: usize },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("splitting equations have no solution")]
    NoSolution,
    #[error("map is not column-adapted")]
    NotColumnAdapted,
    #[error("source ranks differ: {0} vs {1}")]
    SourceMismatch(usize, usize),
    #[error("invalid insertion move (a={a}, b={b}) at rank {n}")]
    InvalidMove { a: usize, b: usize, n: usize },
    #[error("search exceeded the node budget of {0}")]
    SearchBudgetExceeded(usize),
    #[error("invalid insertion chain: {0}")]
    InvalidChain(String),
    #[error("enumeration of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("element is zero")]
    ZeroElement,
    #[error("degree {degree} is beyond the computed horizon {horizon}")]
    HorizonExceeded { degree: usize, horizon: usize },
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable kind name, used by the CLI when reporting structured errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidTables { .. } => "InvalidTables",
            Error::SizeCapExceeded { .. } => "SizeCapExceeded",
            Error::NotSquare { .. } => "NotSquare",
            Error::NotSemisimple { .. } => "NotSemisimple",
            Error::DecompositionFailed(_) => "DecompositionFailed",
            Error::NotIdempotent(_) => "NotIdempotent",
            Error::NoConvergence(_) => "NoConvergence",
            Error::ConjugatorNotFound { .. } => "ConjugatorNotFound",
            Error::RecoverOutsideImage => "RecoverOutsideImage",
            Error::NotSurjective { .. } => "NotSurjective",
            Error::RankMismatch(_) => "RankMismatch",
            Error::BadShape(_) => "BadShape",
            Error::NoSolution => "NoSolution",
            Error::NotColumnAdapted => "NotColumnAdapted",
            Error::SourceMismatch(..) => "SourceMismatch",
            Error::InvalidMove { .. } => "InvalidMove",
            Error::SearchBudgetExceeded(_) => "SearchBudgetExceeded",
            Error::InvalidChain(_) => "InvalidChain",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::ZeroElement => "ZeroElement",
            Error::HorizonExceeded { .. } => "HorizonExceeded",
            Error::CounterexampleFound(_) => "CounterexampleFound",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
