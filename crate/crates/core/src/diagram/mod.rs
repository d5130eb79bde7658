//! String diagrams of the free Cartesian bicategory, drawn as hypergraphs,
//! and their translation to and from conjunctive queries.

mod eval;
mod lexicon;
mod translate;
mod union_find;
mod wiring;

pub use eval::direct_eval;
pub use lexicon::{apply_l, Lexicon, LexiconEntry, LexiconFile, Template};
pub use translate::{lambda_translate, theta_translate};
pub use union_find::UnionFind;
pub use wiring::{merge_signature, BoxNode, RelSignature, Wiring};
