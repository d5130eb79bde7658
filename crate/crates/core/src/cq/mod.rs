//! Conjunctive queries, finite structures and the homomorphism reductions
//! for evaluation, containment and entailment.

mod entail;
mod eval;
mod hom;
mod query;
mod structure;

pub use entail::entails;
pub use eval::{contains, equivalent, eval, Answers};
pub use hom::{enumerate_homomorphisms, find_homomorphism, is_homomorphism, Mapping, Pins};
pub use query::{natural_key, Atom, Query, QueryBuilder};
pub use structure::{DatabaseFile, RelStructure, Tuple};
