use thiserror::Error;

/// Errors produced by graph construction, growth operations and formula checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing vertex {vertex}: every id below {n} must appear in some edge")]
    MissingVertex { vertex: usize, n: usize },

    #[error("not a tree: {0}")]
    NotATree(NotATree),

    #[error("graph is disconnected (vertex {unreached} unreachable from 0)")]
    Disconnected { unreached: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("saturation violated: vertex {vertex} has degree {degree} > m = {m}")]
    Saturation {
        vertex: usize,
        degree: usize,
        m: u32,
    },

    #[error("pipeline stage {index} ({op}) failed: {source}")]
    Pipeline {
        index: usize,
        op: String,
        #[source]
        source: Box<Error>,
    },

    #[error("graph too large for {what}: {n} vertices exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        n: String,
        cap: usize,
    },

    #[error("formula violation in {what}: {detail}")]
    FormulaViolation { what: String, detail: String },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("random walk from {from} to {target} exceeded {max_steps} steps")]
    WalkCap {
        from: usize,
        target: usize,
        max_steps: u64,
    },

    #[error("domain error: {0}")]
    Domain(String),
}

/// Which tree condition a graph failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotATree {
    TooSmall,
    Cyclic,
    Disconnected,
}

impl std::fmt::Display for NotATree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotATree::TooSmall => f.write_str("fewer than 2 vertices"),
            NotATree::Cyclic => f.write_str("contains a cycle"),
            NotATree::Disconnected => f.write_str("disconnected"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
