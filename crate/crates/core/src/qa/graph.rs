use std::collections::BTreeSet;

use super::corpus::{Corpus, EntityLinking};
use crate::cq::{Atom, Query, RelStructure};
use crate::diagram::{Lexicon, Template};
use crate::error::{Error, Result};
use crate::pregroup::{parse, tokenize, BasicTypePoset, Entry, Grammar, PregroupType};

/// A graph written as a corpus over a fixed micro-grammar.
#[derive(Debug, Clone)]
pub struct GraphCorpus {
    pub grammar: Grammar,
    pub lexicon: Lexicon,
    pub corpus: Corpus,
    pub linking: EntityLinking,
}

/// Symbol of the single binary relation of `g`; `edge` when it has none.
pub fn edge_symbol(g: &RelStructure) -> Result<String> {
    let mut symbols = g.signature().iter();
    match (symbols.next(), symbols.next()) {
        (None, _) => Ok("edge".to_owned()),
        (Some((s, 2)), None) => Ok(s.clone()),
        _ => Err(Error::InvalidStructure(
            "a graph has exactly one binary symbol".into(),
        )),
    }
}

/// The grammar and lexicon of the encoding: `node : n`, `links : *n s n*`
/// drawn as the edge symbol, and `exists : *n s` drawn as a bare wire.
pub fn micro_grammar(symbol: &str) -> Result<(Grammar, Lexicon)> {
    let ty = |s: &str| s.parse::<PregroupType>().expect("static type");
    let grammar = Grammar::new(
        BasicTypePoset::discrete(["s", "n"]),
        vec![
            Entry::new("node", ty("n")),
            Entry::new("links", ty("*n s n*")),
            Entry::new("exists", ty("*n s")),
        ],
        [],
    )?;
    let mut lexicon = Lexicon::new([("s".to_owned(), 0), ("n".to_owned(), 1)].into());
    let wire = Template::Wiring {
        wires: 1,
        boxes: vec![],
        codomain: vec![0],
    };
    lexicon.insert("node", ty("n"), wire.clone())?;
    lexicon.insert_symbol("links", ty("*n s n*"), symbol)?;
    lexicon.insert("exists", ty("*n s"), wire)?;
    Ok((grammar, lexicon))
}

/// One `node links node` sentence per edge, its two nouns linked to the
/// endpoints, and one `node exists` sentence per vertex without edges.
/// With `symmetric`, every edge is also written in reverse.
pub fn graph_to_corpus(g: &RelStructure, symmetric: bool) -> Result<GraphCorpus> {
    let symbol = edge_symbol(g)?;
    let (grammar, lexicon) = micro_grammar(&symbol)?;
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    if let Some(table) = g.table(&symbol) {
        for t in table {
            edges.insert((t[0], t[1]));
            if symmetric {
                edges.insert((t[1], t[0]));
            }
        }
    }
    let s = PregroupType::basic("s");
    let sentence = |text: &str| {
        parse(&grammar, &tokenize(text), &s).map(|r| r.expect("micro-grammar sentence parses"))
    };
    let edge_parse = sentence("node links node")?;
    let vertex_parse = sentence("node exists")?;

    let mut corpus = Corpus::new();
    let mut linking = EntityLinking::new();
    let name = |v: usize| g.universe()[v].as_str();
    for &(u, v) in &edges {
        let i = corpus.len();
        corpus.push("node links node", edge_parse.clone());
        linking.link(i, "x0", name(u));
        linking.link(i, "x1", name(v));
    }
    let touched: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    for v in (0..g.universe().len()).filter(|v| !touched.contains(v)) {
        let i = corpus.len();
        corpus.push("node exists", vertex_parse.clone());
        linking.link(i, "x0", name(v));
    }
    Ok(GraphCorpus {
        grammar,
        lexicon,
        corpus,
        linking,
    })
}

/// The graph as a query with every vertex free: vertex `k` is column `xk`.
pub fn graph_pattern(g: &RelStructure, symmetric: bool) -> Result<Query> {
    let symbol = edge_symbol(g)?;
    let n = g.universe().len();
    let mut atoms = Vec::new();
    if let Some(table) = g.table(&symbol) {
        for t in table {
            atoms.push(Atom {
                symbol: symbol.clone(),
                args: t.clone(),
            });
            if symmetric {
                atoms.push(Atom {
                    symbol: symbol.clone(),
                    args: vec![t[1], t[0]],
                });
            }
        }
    }
    let names: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
    Query::new(names.clone(), (0..n).collect(), names, atoms)
}
