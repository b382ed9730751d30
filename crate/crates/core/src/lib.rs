//! Hereditarily finite hypersets and the graphs they induce.
//!
//! The crate has four layers:
//!
//! * [`store`] and [`system`]: a bisimulation-collapsed store of hypersets and
//!   a solver for flat systems of equations `x = S_x`.
//! * [`reducts`], [`structure`], [`iso`]: single/double-membership reducts of
//!   finite slices, regions, components and isomorphism of small structures.
//! * [`constructions`]: graph embeddings, flowers, bouquets, Rieger
//!   permutation models and ball grafting.
//! * [`logic`]: first-order formulas over the reduct languages, evaluation,
//!   the neighbourhood transform, digraph-in-graph interpretation and an
//!   Ehrenfeucht–Fraïssé engine.

pub mod constructions;
pub mod dump;
pub mod error;
pub mod iso;
pub mod logic;
pub mod reducts;
mod refine;
pub mod store;
pub mod structure;
pub mod system;
pub mod unionfind;

pub use constructions::{bouquet, embed_graph, flower, graft_ball, rieger, BallSpec, Graph};
pub use dump::Dump;
pub use error::{Error, Result};
pub use iso::{is_isomorphic, is_isomorphism};
pub use logic::{ef_equiv, eval, Formula, PhiClass};
pub use reducts::{components, d_closure, d_graph, region, sd_graph, Slice};
pub use store::{Apg, Hyperset, Store, StoreId};
pub use structure::{FiniteStructure, Language, Relation, Symbol};
pub use system::{solve, FlatSystem};
