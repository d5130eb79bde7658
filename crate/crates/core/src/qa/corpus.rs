use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pregroup::{parse, tokenize, Grammar, ParseDiagram, PregroupType};

/// Parsed sentences, each reducing to the sentence type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub sentences: Vec<(String, ParseDiagram)>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, text: impl Into<String>, r: ParseDiagram) {
        self.sentences.push((text.into(), r));
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Parses one sentence per non-blank line at type `sentence`, taking the
    /// canonical parse of each. Sentence indices count non-blank lines.
    pub fn parse_text(g: &Grammar, text: &str, sentence: &PregroupType) -> Result<Self> {
        let mut corpus = Corpus::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let r = parse(g, &tokenize(line), sentence)?.ok_or_else(|| Error::Ungrammatical {
                index: corpus.len(),
                text: line.to_owned(),
            })?;
            corpus.push(line, r);
        }
        Ok(corpus)
    }

    /// One sentence per line.
    pub fn to_text(&self) -> String {
        self.sentences.iter().map(|(s, _)| format!("{s}\n")).collect()
    }
}

/// Variables of sentence queries mapped to entities. Keys are the sentence
/// index and the variable name in that sentence's own query.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityLinking {
    pub entities: BTreeSet<String>,
    pub links: BTreeMap<(usize, String), String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub sentence: usize,
    pub variable: String,
    pub entity: String,
}

/// On-disk entity-linking format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingFile {
    pub entities: Vec<String>,
    #[serde(default)]
    pub links: Vec<Link>,
}

impl EntityLinking {
    pub fn new() -> Self {
        Self::default()
    }

    /// Links `variable` of sentence `sentence`, declaring the entity.
    pub fn link(&mut self, sentence: usize, variable: &str, entity: &str) {
        self.entities.insert(entity.to_owned());
        self.links
            .insert((sentence, variable.to_owned()), entity.to_owned());
    }

    pub fn get(&self, sentence: usize, variable: &str) -> Option<&str> {
        self.links
            .get(&(sentence, variable.to_owned()))
            .map(String::as_str)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LinkingFile = serde_json::from_str(text)?;
        let mut mu = EntityLinking {
            entities: file.entities.into_iter().collect(),
            links: BTreeMap::new(),
        };
        for l in file.links {
            if !mu.entities.contains(&l.entity) {
                return Err(Error::UnknownEntity(l.entity));
            }
            let key = (l.sentence, l.variable);
            if mu.links.get(&key).is_some_and(|e| *e != l.entity) {
                return Err(Error::Precondition(format!(
                    "variable `{}` of sentence {} linked twice",
                    key.1, key.0
                )));
            }
            mu.links.insert(key, l.entity);
        }
        Ok(mu)
    }

    pub fn to_json(&self) -> String {
        let file = LinkingFile {
            entities: self.entities.iter().cloned().collect(),
            links: self
                .links
                .iter()
                .map(|((sentence, variable), entity)| Link {
                    sentence: *sentence,
                    variable: variable.clone(),
                    entity: entity.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("linking serializes")
    }
}
