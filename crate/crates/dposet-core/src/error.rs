use thiserror::Error;

/// Errors raised by digraph construction and the basic operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DigraphError {
    #[error("digraphs must have at least one vertex")]
    Empty,
    #[error("vertex count {0} exceeds the capacity of {max}", max = crate::digraph::MAX_VERTICES)]
    TooLarge(usize),
    #[error("vertex {0} out of range for a digraph on {1} vertices")]
    OutOfRange(usize, usize),
    #[error("induced substructure on an empty vertex subset")]
    EmptySubset,
    #[error("one-vertex deletions are undefined on a single vertex")]
    NoDeletion,
    #[error("substructure size {0} out of range 1..={1}")]
    BadSize(usize, usize),
}

/// Errors raised while reading the DGF text format.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DgfError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("invalid digraph: {0}")]
    Invalid(#[from] DigraphError),
}

/// Errors raised by the named-family constructors and composite constructions.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("circles need at least 3 vertices and pairwise distinct sizes")]
    BadCircle,
    #[error("size must be at least 1")]
    BadSize,
    #[error("the two gadget sizes must differ")]
    EqualSizes,
    #[error("expected a loop-full digraph")]
    NotLoopFull,
    #[error("expected a loop-free digraph")]
    NotLoopFree,
    #[error("invalid attachment or support specification: {0}")]
    BadSpec(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// Errors raised by catalog construction and the level cache.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("level bound {0} exceeds the configured maximum of {1}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// Errors raised while loading a catalog cache directory.
#[derive(Debug, Error)]
pub enum CacheError {
    #[error("{path} line {line}: {msg}")]
    Corrupt {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Errors raised by the local-rule machinery.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("malformed permutation of {{A,B,C,D}}: `{0}`")]
    BadPermutation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rule table violates a local-rule invariant: {0}")]
    InvalidRule(String),
}

/// Errors raised by the lemma verifier entry points.
#[derive(Debug, Error)]
pub enum LemmaError {
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("bad parameters for {id}: {msg}")]
    BadParams { id: String, msg: String },
    #[error("X is not a vertex subset of the construction")]
    BadSubset,
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}
