//! Relational semantics for pregroup grammars.
//!
//! Sentences are parsed into reduction diagrams ([`pregroup`]), sent to
//! string diagrams of relations ([`diagram`]) and read as conjunctive
//! queries ([`cq`]). A corpus compiles into a database that answers
//! questions by homomorphism search ([`qa`]).
//!
//! ```
//! use discorel::cq::{eval, Query, RelStructure};
//!
//! let mut db = RelStructure::new(vec!["Spinoza".into(), "Leibniz".into()]).unwrap();
//! db.insert_named("infl", &["Spinoza", "Leibniz"]).unwrap();
//! let q: Query = "exists x1 . infl(x0,x1)".parse().unwrap();
//! assert_eq!(eval(&q, &db).unwrap().to_string(), "x0=Spinoza\n");
//! ```

pub mod cq;
pub mod diagram;
mod error;
pub mod oracle;
pub mod pregroup;
pub mod qa;

pub use error::{Error, JsonError, Result};
