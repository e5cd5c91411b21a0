use thiserror::Error;

/// Errors reported by graph construction, language queries, and cover
/// computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph is not essential: vertex {0} is stranded")]
    NotEssential(String),
    #[error("predecessor separation is only defined for essential graphs")]
    PredSepRequiresEssential,
    #[error("no vertices remain after trimming to the essential part")]
    EmptyAfterTrim,
    #[error("fresh symbol {0} already occurs in the alphabet")]
    FreshSymbolClash(String),
    #[error("alphabets overlap on symbol {0}")]
    AlphabetOverlap(String),
    #[error("induced subgraph has no edges, so it presents nothing")]
    EmptyInducedAlphabet,
    #[error("empty vertex selection")]
    EmptySelection,
    #[error("state cap exceeded: {kind} needs more than {cap} states")]
    StateCapExceeded { kind: &'static str, cap: usize },
    #[error("presented shift is not irreducible")]
    NotIrreducible,
    #[error("no foundation cover exists for vertex {0}")]
    NoCoverExists(String),
    #[error("invalid eventually periodic ray: {0}")]
    InvalidRay(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("vertex set is bound to a different graph")]
    GraphMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
