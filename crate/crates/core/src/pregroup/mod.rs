//! Pregroup grammars: types, dictionaries and parsing into reduction diagrams.

mod parse;
mod types;

pub use parse::{enumerate_parses, expand_induced_steps, grammatical, parse, tokenize, ParseDiagram};
pub use types::{BasicTypePoset, Entry, Grammar, GrammarFile, PregroupType, Side, Token};
