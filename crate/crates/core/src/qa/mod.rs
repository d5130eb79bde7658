//! Question answering: corpora compiled into databases through entity
//! linking, and questions evaluated against them.

mod compile;
mod corpus;
mod graph;

pub use compile::{
    answer, answer_query, blank_entity, compile, corpus_query, corpus_variable, sentence_queries,
    CompiledDatabase, CompiledDatabaseFile, ProvenanceRecord,
};
pub use corpus::{Corpus, EntityLinking, Link, LinkingFile};
pub use graph::{edge_symbol, graph_pattern, graph_to_corpus, micro_grammar, GraphCorpus};
