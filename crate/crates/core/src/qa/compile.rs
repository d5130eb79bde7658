use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::corpus::{Corpus, EntityLinking};
use crate::cq::{eval, Answers, DatabaseFile, Query, RelStructure};
use crate::diagram::{apply_l, lambda_translate, Lexicon};
use crate::error::{Error, Result};
use crate::pregroup::ParseDiagram;

/// A database built from a corpus, remembering which sentences produced
/// each tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledDatabase {
    pub structure: RelStructure,
    /// `(symbol, tuple of entity names)` → sentence indices.
    pub provenance: BTreeMap<(String, Vec<String>), BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    pub symbol: String,
    pub tuple: Vec<String>,
    pub sentences: Vec<usize>,
}

/// On-disk format: the database format plus a `provenance` section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledDatabaseFile {
    #[serde(flatten)]
    pub database: DatabaseFile,
    #[serde(default)]
    pub provenance: Vec<ProvenanceRecord>,
}

impl CompiledDatabase {
    pub fn to_json(&self) -> String {
        let file = CompiledDatabaseFile {
            database: self.structure.to_file(),
            provenance: self
                .provenance
                .iter()
                .map(|((symbol, tuple), sentences)| ProvenanceRecord {
                    symbol: symbol.clone(),
                    tuple: tuple.clone(),
                    sentences: sentences.iter().copied().collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("database serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CompiledDatabaseFile = serde_json::from_str(text)?;
        let structure = RelStructure::try_from(file.database)?;
        let provenance = file
            .provenance
            .into_iter()
            .map(|p| ((p.symbol, p.tuple), p.sentences.into_iter().collect()))
            .collect();
        Ok(CompiledDatabase {
            structure,
            provenance,
        })
    }
}

/// The query of each sentence, in corpus order. Sentences must translate to
/// closed queries.
pub fn sentence_queries(c: &Corpus, lex: &Lexicon) -> Result<Vec<Query>> {
    c.sentences
        .iter()
        .enumerate()
        .map(|(index, (_, r))| {
            let q = lambda_translate(&apply_l(lex, r)?);
            if q.is_closed() {
                Ok(q)
            } else {
                Err(Error::NonClosedSentence {
                    index,
                    free: q.free().len(),
                })
            }
        })
        .collect()
}

/// Name of variable `v` of sentence `i` in the corpus query.
pub fn corpus_variable(i: usize, v: &str) -> String {
    format!("s{i}_{v}")
}

/// The conjunction of all sentence queries, variables renamed apart with
/// [`corpus_variable`].
pub fn corpus_query(c: &Corpus, lex: &Lexicon) -> Result<Query> {
    let mut acc = Query::truth();
    for (i, q) in sentence_queries(c, lex)?.iter().enumerate() {
        acc = acc.conjoin(q, str::to_owned, |v| corpus_variable(i, v))?;
    }
    Ok(acc)
}

/// Entity standing for an unlinked variable.
pub fn blank_entity(i: usize, v: &str) -> String {
    format!("_:s{i}.{v}")
}

/// The canonical structure of the corpus query with every variable replaced
/// by its entity. Unlinked variables get blank entities of their own; the
/// universe is exactly the set of entities used, sorted.
pub fn compile(c: &Corpus, lex: &Lexicon, mu: &EntityLinking) -> Result<CompiledDatabase> {
    let queries = sentence_queries(c, lex)?;
    for ((sentence, variable), entity) in &mu.links {
        if !mu.entities.contains(entity) {
            return Err(Error::UnknownEntity(entity.clone()));
        }
        if queries
            .get(*sentence)
            .and_then(|q| q.variable_index(variable))
            .is_none()
        {
            return Err(Error::UnknownLinkTarget {
                sentence: *sentence,
                variable: variable.clone(),
            });
        }
    }
    let images: Vec<Vec<String>> = queries
        .iter()
        .enumerate()
        .map(|(i, q)| {
            q.variables()
                .iter()
                .map(|v| mu.get(i, v).map_or_else(|| blank_entity(i, v), str::to_owned))
                .collect()
        })
        .collect();
    let universe: BTreeSet<&String> = images.iter().flatten().collect();
    let mut structure = RelStructure::new(universe.into_iter().cloned().collect())?;
    let mut provenance: BTreeMap<(String, Vec<String>), BTreeSet<usize>> = BTreeMap::new();
    for (i, (q, image)) in queries.iter().zip(&images).enumerate() {
        for a in q.atoms() {
            let tuple: Vec<String> = a.args.iter().map(|&v| image[v].clone()).collect();
            let names: Vec<&str> = tuple.iter().map(String::as_str).collect();
            structure.insert_named(&a.symbol, &names)?;
            provenance
                .entry((a.symbol.clone(), tuple))
                .or_default()
                .insert(i);
        }
    }
    Ok(CompiledDatabase {
        structure,
        provenance,
    })
}

/// Evaluates the query of a question parse against the compiled database.
/// Answers have one column per wire of the question type.
pub fn answer(db: &CompiledDatabase, question: &ParseDiagram, lex: &Lexicon) -> Result<Answers> {
    let q = lambda_translate(&apply_l(lex, question)?);
    let width = lex.wire_count(&question.target);
    if q.free().len() != width {
        return Err(Error::ArityMismatch(format!(
            "question has {} free variables but type {} has {width} wires",
            q.free().len(),
            question.target
        )));
    }
    answer_query(db, &q)
}

pub fn answer_query(db: &CompiledDatabase, q: &Query) -> Result<Answers> {
    eval(q, &db.structure)
}
