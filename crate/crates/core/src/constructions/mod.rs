//! Explicit hyperset constructions: graph embeddings, flowers and bouquets,
//! permutation models and ball grafting.

mod embed;
mod flowers;
mod graft;
mod graph;
mod rieger;

pub use embed::{check_embedding, embed_graph, embed_graph_tagged, EmbeddingCheck};
pub use flowers::{bouquet, flower};
pub use graft::{check_graft, check_graft_preconditions, fresh_tags, graft_ball, BallSpec, GraftCheck};
pub use graph::Graph;
pub use rieger::{populate_cumulative, rieger, PermutedMembership, RiegerModel, RiegerReport};
