use thiserror::Error;

use crate::structure::{Language, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("handle belongs to a different store")]
    ForeignHandle,

    #[error("APG node {node} is not reachable from the point")]
    Inaccessible { node: usize },

    #[error("APG edge {from} -> {to} refers to an undeclared node")]
    UndeclaredNode { from: usize, to: usize },

    #[error("unknown name `{name}` in the equation for `{equation}`")]
    UnknownName { name: String, equation: String },

    #[error("duplicate equation for `{0}`")]
    DuplicateEquation(String),

    #[error("name `{0}` is both an indeterminate and an atom")]
    NameClash(String),

    #[error("atom `{0}` is not well-founded")]
    NonWellFoundedAtom(String),

    #[error("set is not well-founded, so it has no foundational rank")]
    NotWellFounded,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for a domain of size {size}")]
    VertexOutOfRange { vertex: usize, size: usize },

    #[error("language mismatch: expected {expected}, found {found}")]
    LanguageMismatch { expected: Language, found: Language },

    #[error("relation symbol {symbol} is not in language {language}")]
    SymbolNotInLanguage { symbol: Symbol, language: Language },

    #[error("structure invariant violated: {0}")]
    InvalidStructure(String),

    #[error("set is not a member of the slice")]
    NotInSlice,

    #[error("argument must be a positive natural number")]
    NotPositive,

    #[error("A0 and A1 must be disjoint, both contain {0}")]
    Overlap(usize),

    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),

    #[error("graph needs at least {0} vertices")]
    TooFewVertices(usize),

    #[error("tag condition {condition} violated: {detail}")]
    TagCondition { condition: &'static str, detail: String },

    #[error("source ball and target slice are not separated: {0}")]
    NotSeparated(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("tuples have different lengths ({0} and {1})")]
    TupleLength(usize, usize),

    #[error("formula does not imply symmetry of D: {0}")]
    NotInPhi(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
