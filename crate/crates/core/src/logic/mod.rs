//! First-order logic over the reduct languages.

pub mod ef;
pub mod eval;
pub mod formula;
pub mod interpret;
mod parse;
pub mod phi;

pub use ef::ef_equiv;
pub use eval::{eval, eval_at, eval_sentence};
pub use formula::{fresh_var, Formula};
pub use interpret::{interpret_digraph, interpreted_digraph, translate};
pub use phi::{beta_fragment, flower_neighbor, mu, phi_n, phi_n_at, symmetry_axiom, Evidence, PhiClass};
