//! Finite strong approximations of the free pseudospace of dimension `n`.
//!
//! The universe is an (n+1)-coloured graph whose edges join adjacent levels
//! only ([`graph::LevelGraph`]). On top of that sit:
//!
//! * [`amalgam`] — the amalgamation classes `K_n` / `K_n'`, one-point strong
//!   extensions, free amalgams, and a deterministic seeded generator for
//!   finite approximations of the saturated and prime limits;
//! * [`closure`] — reduced paths, algebraic closure, nice sets, projections,
//!   forking independence and regular-type classification, all relative to a
//!   finite ambient graph;
//! * [`coxeter`] — the word calculus of the right-angled Coxeter group with
//!   generators `t_0..t_n` and relations `t_i^2 = (t_i t_k)^2 = 1` for
//!   `|i-k| >= 2`;
//! * [`building`] — the chamber system of a graph, galleries, Weyl distance,
//!   and the building axioms;
//! * [`ample`] — verification of n-ampleness witness tuples.
//!
//! Everything is computed on finite graphs; clauses of the theory that are
//! intrinsically infinitary ("infinitely many neighbours", residues of
//! cardinality aleph_0) are reported as statistics or warnings, never
//! enforced.

pub mod ample;
pub mod amalgam;
pub mod building;
pub mod closure;
pub mod coxeter;
pub mod graph;
pub mod io;

pub use graph::{FlagKind, Level, LevelGraph, MeetJoin, PathCert, VertexId};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("edge {0}..{1} does not join adjacent levels")]
    EdgeLevelMismatch(usize, usize),
    #[error("dimension must be at least 1")]
    DimensionZero,
    #[error("vertices {0} and {1} must be distinct")]
    NotDistinct(usize, usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("letter {letter} out of range for dimension {dim}")]
    LetterOutOfRange { letter: usize, dim: usize },
    #[error("words have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("invalid extension step: {0}")]
    InvalidStep(String),
    #[error("budget {budget} too small, need at least {min}")]
    BudgetTooSmall { budget: usize, min: usize },
    #[error("not a one-point extension: {0}")]
    NotOnePoint(String),
    #[error("embedding is not an induced-subgraph isomorphism: {0}")]
    BadEmbedding(String),
    #[error("graph has {0} vertices, exceeding the oracle guard of {1}")]
    OracleGuard(usize, usize),
    #[error("vertex {0} is contained in no chamber")]
    NoChamber(usize),
    #[error("graph contains no chamber")]
    NoChamberInGraph,
    #[error("io: {0}")]
    Io(String),
    #[error("schema: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
