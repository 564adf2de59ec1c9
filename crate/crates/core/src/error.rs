use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("relator {0} is empty after reduction")]
    EmptyRelator(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown generator {name:?}")]
    UnknownGenerator {
        line: usize,
        column: usize,
        name: String,
    },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("coset table is partial")]
    Partial,
    #[error("subgroup word uses generator {0} outside the presentation")]
    ForeignGenerator(usize),
    #[error("coset {0} out of range")]
    CosetOutOfRange(usize),
    #[error("table audit failed: {0}")]
    Audit(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("images do not form a bijection")]
    NotBijection,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("empty generator list")]
    NoGenerators,
    #[error("expected {expected} images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("subgroup orders {0} and {1} both exceed the enumeration cap {2}")]
    CapExceeded(u128, u128, u128),
    #[error("invalid cycle notation: {0}")]
    CycleSyntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("relation {0} fails")]
    RelationViolated(String),
    #[error("generators do not generate the group")]
    NonGeneration,
    #[error("generator sigma{index} has order {order} < 2")]
    DegenerateGenerator { index: usize, order: u64 },
    #[error("intersection condition fails; the triple is not a polytope rotation group")]
    NotPolytopal,
    #[error("map does not extend to a homomorphism")]
    NotHomomorphism,
    #[error("group order {order} exceeds exhaustive limit {limit}; enable sampling")]
    TooLarge { order: u128, limit: u128 },
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("m must be at least 1 (got {0})")]
    BadParameter(u64),
    #[error("stage {stage} failed: {message}")]
    Stage {
        stage: &'static str,
        message: String,
    },
}
