use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::query::Query;
use crate::diagram::{merge_signature, RelSignature};
use crate::error::{Error, Result};

pub type Tuple = Vec<usize>;

/// A finite Σ-structure: a universe of named elements and one table per symbol.
/// Symbols without a table are interpreted as empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelStructure {
    signature: RelSignature,
    universe: Vec<String>,
    tables: BTreeMap<String, BTreeSet<Tuple>>,
}

impl RelStructure {
    pub fn new(universe: Vec<String>) -> Result<Self> {
        if universe.iter().collect::<BTreeSet<_>>().len() != universe.len() {
            return Err(Error::InvalidStructure("duplicate universe element".into()));
        }
        Ok(RelStructure {
            signature: RelSignature::new(),
            universe,
            tables: BTreeMap::new(),
        })
    }

    /// Declares `symbol` with an (initially empty) table.
    pub fn declare(&mut self, symbol: &str, arity: usize) -> Result<()> {
        merge_signature(&mut self.signature, &[(symbol.to_owned(), arity)].into())?;
        self.tables.entry(symbol.to_owned()).or_default();
        Ok(())
    }

    pub fn insert(&mut self, symbol: &str, tuple: Tuple) -> Result<bool> {
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.universe.len()) {
            return Err(Error::InvalidStructure(format!(
                "element {e} outside a universe of {}",
                self.universe.len()
            )));
        }
        self.declare(symbol, tuple.len())?;
        Ok(self.tables.get_mut(symbol).expect("declared").insert(tuple))
    }

    pub fn insert_named(&mut self, symbol: &str, tuple: &[&str]) -> Result<bool> {
        let t = tuple
            .iter()
            .map(|e| {
                self.element(e)
                    .ok_or_else(|| Error::InvalidStructure(format!("unknown element `{e}`")))
            })
            .collect::<Result<Tuple>>()?;
        self.insert(symbol, t)
    }

    pub fn signature(&self) -> &RelSignature {
        &self.signature
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    pub fn tables(&self) -> &BTreeMap<String, BTreeSet<Tuple>> {
        &self.tables
    }

    pub fn table(&self, symbol: &str) -> Option<&BTreeSet<Tuple>> {
        self.tables.get(symbol)
    }

    pub fn tuple_count(&self) -> usize {
        self.tables.values().map(BTreeSet::len).sum()
    }

    /// Fails if `other` uses a symbol at a different arity.
    pub fn check_compatible(&self, other: &RelSignature) -> Result<()> {
        let mut sig = self.signature.clone();
        merge_signature(&mut sig, other)
    }

    /// The structure whose elements are the query's variables and whose
    /// tuples are its atoms.
    pub fn canonical(query: &Query) -> RelStructure {
        let mut k = RelStructure {
            signature: query.signature().clone(),
            universe: query.variables().to_vec(),
            tables: BTreeMap::new(),
        };
        for a in query.atoms() {
            k.tables
                .entry(a.symbol.clone())
                .or_default()
                .insert(a.args.clone());
        }
        k
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DatabaseFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_file(&self) -> DatabaseFile {
        DatabaseFile {
            universe: self.universe.clone(),
            tables: self
                .tables
                .iter()
                .map(|(s, rows)| {
                    let rows = rows
                        .iter()
                        .map(|t| t.iter().map(|&e| self.universe[e].clone()).collect())
                        .collect();
                    (s.clone(), rows)
                })
                .collect(),
            arities: self
                .signature
                .iter()
                .filter(|(s, _)| self.tables.get(*s).is_none_or(BTreeSet::is_empty))
                .map(|(s, &a)| (s.clone(), a))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("structure serializes")
    }
}

/// On-disk database format. `arities` is only needed for empty tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatabaseFile {
    pub universe: Vec<String>,
    pub tables: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arities: BTreeMap<String, usize>,
}

impl TryFrom<DatabaseFile> for RelStructure {
    type Error = Error;

    fn try_from(file: DatabaseFile) -> Result<Self> {
        let mut k = RelStructure::new(file.universe)?;
        for (symbol, &arity) in &file.arities {
            k.declare(symbol, arity)?;
        }
        for (symbol, rows) in &file.tables {
            if let Some(first) = rows.first() {
                k.declare(symbol, first.len())?;
            } else if !file.arities.contains_key(symbol) {
                return Err(Error::InvalidStructure(format!(
                    "empty table `{symbol}` needs an entry in `arities`"
                )));
            }
            for row in rows {
                let names: Vec<&str> = row.iter().map(String::as_str).collect();
                k.insert_named(symbol, &names)?;
            }
        }
        Ok(k)
    }
}
