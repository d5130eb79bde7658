use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::diagram::{merge_signature, RelSignature, UnionFind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub symbol: String,
    /// Indices into the query's variables.
    pub args: Vec<usize>,
}

/// A conjunctive query in prenex form: `∃ bound · ⋀ atoms`.
///
/// `free` lists the answer columns as variable indices. A variable may occupy
/// several columns when free variables were equated; each column keeps its
/// own name in `free_names`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    signature: RelSignature,
    variables: Vec<String>,
    free: Vec<usize>,
    free_names: Vec<String>,
    atoms: Vec<Atom>,
}

impl Query {
    pub fn new(
        variables: Vec<String>,
        free: Vec<usize>,
        free_names: Vec<String>,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        let n = variables.len();
        if variables.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::QuerySyntax("duplicate variable name".into()));
        }
        if free.len() != free_names.len()
            || free_names.iter().collect::<BTreeSet<_>>().len() != free_names.len()
        {
            return Err(Error::QuerySyntax("free column names must be distinct".into()));
        }
        if free.iter().any(|&v| v >= n) || atoms.iter().flat_map(|a| &a.args).any(|&v| v >= n) {
            return Err(Error::QuerySyntax("variable index out of range".into()));
        }
        let mut signature = RelSignature::new();
        let mut deduped = Vec::with_capacity(atoms.len());
        let mut seen = BTreeSet::new();
        for a in atoms {
            merge_signature(&mut signature, &[(a.symbol.clone(), a.args.len())].into())?;
            if seen.insert(a.clone()) {
                deduped.push(a);
            }
        }
        Ok(Query {
            signature,
            variables,
            free,
            free_names,
            atoms: deduped,
        })
    }

    /// `⊤` with no variables.
    pub fn truth() -> Self {
        Query {
            signature: RelSignature::new(),
            variables: Vec::new(),
            free: Vec::new(),
            free_names: Vec::new(),
            atoms: Vec::new(),
        }
    }

    pub fn signature(&self) -> &RelSignature {
        &self.signature
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn free_names(&self) -> &[String] {
        &self.free_names
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_closed(&self) -> bool {
        self.free.is_empty()
    }

    pub fn bound(&self) -> Vec<usize> {
        let free: BTreeSet<usize> = self.free.iter().copied().collect();
        (0..self.variables.len()).filter(|v| !free.contains(v)).collect()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Conjunction with variables renamed apart by `rename_self` and
    /// `rename_other`. Free columns are concatenated.
    pub fn conjoin(
        &self,
        other: &Query,
        rename_self: impl Fn(&str) -> String,
        rename_other: impl Fn(&str) -> String,
    ) -> Result<Query> {
        let off = self.variables.len();
        let variables = self
            .variables
            .iter()
            .map(|v| rename_self(v))
            .chain(other.variables.iter().map(|v| rename_other(v)))
            .collect();
        let free = self
            .free
            .iter()
            .copied()
            .chain(other.free.iter().map(|v| v + off))
            .collect();
        let free_names = self
            .free_names
            .iter()
            .map(|v| rename_self(v))
            .chain(other.free_names.iter().map(|v| rename_other(v)))
            .collect();
        let atoms = self
            .atoms
            .iter()
            .cloned()
            .chain(other.atoms.iter().map(|a| Atom {
                symbol: a.symbol.clone(),
                args: a.args.iter().map(|v| v + off).collect(),
            }))
            .collect();
        Query::new(variables, free, free_names, atoms)
    }

    /// Same query with every variable (and free column) renamed.
    pub fn renamed(&self, rename: impl Fn(&str) -> String) -> Result<Query> {
        Query::new(
            self.variables.iter().map(|v| rename(v)).collect(),
            self.free.clone(),
            self.free_names.iter().map(|v| rename(v)).collect(),
            self.atoms.clone(),
        )
    }
}

/// Order used for free columns of parsed queries: `x2` before `x10`.
pub fn natural_key(name: &str) -> (String, u128, String) {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, num) = name.split_at(name.len() - digits);
    (
        stem.to_owned(),
        num.parse().unwrap_or(0),
        name.to_owned(),
    )
}

/// Accumulates named variables, atoms and equalities; equalities are removed
/// by merging variables when the query is built.
#[derive(Debug, Default)]
pub struct QueryBuilder {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    bound: BTreeSet<usize>,
    atoms: Vec<(String, Vec<usize>)>,
    equalities: Vec<(usize, usize)>,
}

impl QueryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn bind(&mut self, name: &str) {
        let v = self.var(name);
        self.bound.insert(v);
    }

    pub fn atom(&mut self, symbol: &str, args: &[&str]) {
        let args = args.iter().map(|a| self.var(a)).collect();
        self.atoms.push((symbol.to_owned(), args));
    }

    pub fn equal(&mut self, a: &str, b: &str) {
        let (a, b) = (self.var(a), self.var(b));
        self.equalities.push((a, b));
    }

    /// Free columns are the unbound names in natural order. Merged classes
    /// keep a free name when they have one, else the smallest name.
    pub fn build(self) -> Result<Query> {
        let n = self.names.len();
        let mut free_cols: Vec<usize> = (0..n).filter(|v| !self.bound.contains(v)).collect();
        free_cols.sort_by_key(|&v| natural_key(&self.names[v]));

        let mut uf = UnionFind::new(n);
        for &(a, b) in &self.equalities {
            uf.union(a, b);
        }
        let (class, classes) = uf.compact();
        let mut rep_name: Vec<Option<String>> = vec![None; classes];
        // free names first, in column order
        for &v in &free_cols {
            rep_name[class[v]].get_or_insert_with(|| self.names[v].clone());
        }
        for v in 0..n {
            let slot = &mut rep_name[class[v]];
            let better = match slot {
                Some(cur) => !free_cols.iter().any(|&f| self.names[f] == *cur) && self.names[v] < *cur,
                None => true,
            };
            if better {
                *slot = Some(self.names[v].clone());
            }
        }
        let variables: Vec<String> = rep_name.into_iter().map(|n| n.expect("named")).collect();
        let atoms = self
            .atoms
            .into_iter()
            .map(|(symbol, args)| Atom {
                symbol,
                args: args.into_iter().map(|v| class[v]).collect(),
            })
            .collect();
        let free = free_cols.iter().map(|&v| class[v]).collect();
        let free_names = free_cols.iter().map(|&v| self.names[v].clone()).collect();
        Query::new(variables, free, free_names, atoms)
    }
}

impl fmt::Display for Query {
    /// `exists b1 b2 . R(x0,b1) & S(b2)`; `true` for the empty conjunction.
    /// Free columns sharing a variable are printed as equalities, and free
    /// variables occurring nowhere else as `x = x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| {
                let args: Vec<&str> = a.args.iter().map(|&v| self.variables[v].as_str()).collect();
                format!("{}({})", a.symbol, args.join(","))
            })
            .collect();
        let mut mentioned: BTreeSet<usize> = self.atoms.iter().flat_map(|a| a.args.iter().copied()).collect();
        for (col, &v) in self.free_names.iter().zip(&self.free) {
            if *col != self.variables[v] {
                parts.push(format!("{col} = {}", self.variables[v]));
                mentioned.insert(v);
            }
        }
        for &v in &self.free {
            if mentioned.insert(v) {
                parts.push(format!("{0} = {0}", self.variables[v]));
            }
        }
        let bound = self.bound();
        if !bound.is_empty() {
            let names: Vec<&str> = bound.iter().map(|&v| self.variables[v].as_str()).collect();
            write!(f, "exists {} . ", names.join(" "))?;
        }
        if parts.is_empty() {
            f.write_str("true")
        } else {
            f.write_str(&parts.join(" & "))
        }
    }
}

impl FromStr for Query {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lex = Lexer::new(text);
        let mut b = QueryBuilder::new();
        if lex.peek_ident() == Some("exists") {
            lex.next();
            let mut any = false;
            while let Some(Tok::Ident(name)) = lex.peek() {
                b.bind(name);
                lex.next();
                any = true;
            }
            if !any {
                return Err(lex.error("expected variables after `exists`"));
            }
            lex.expect(Tok::Dot)?;
        }
        loop {
            match lex.next() {
                Some(Tok::Ident("true")) => {}
                Some(Tok::Ident(name)) => match lex.next() {
                    Some(Tok::Open) => {
                        let mut args = Vec::new();
                        if lex.peek() == Some(Tok::Close) {
                            lex.next();
                        } else {
                            loop {
                                match lex.next() {
                                    Some(Tok::Ident(a)) => args.push(a),
                                    _ => return Err(lex.error("expected variable")),
                                }
                                match lex.next() {
                                    Some(Tok::Comma) => {}
                                    Some(Tok::Close) => break,
                                    _ => return Err(lex.error("expected `,` or `)`")),
                                }
                            }
                        }
                        b.atom(name, &args);
                    }
                    Some(Tok::Eq) => match lex.next() {
                        Some(Tok::Ident(other)) => b.equal(name, other),
                        _ => return Err(lex.error("expected variable after `=`")),
                    },
                    _ => return Err(lex.error("expected `(` or `=`")),
                },
                _ => return Err(lex.error("expected atom")),
            }
            match lex.next() {
                None => break,
                Some(Tok::And) => {}
                Some(_) => return Err(lex.error("expected `&`")),
            }
        }
        b.build()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Open,
    Close,
    Comma,
    Dot,
    And,
    Eq,
    Bad(char),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, pos: 0 }
    }

    fn scan(&self) -> Option<(Tok<'a>, usize)> {
        let rest = &self.text[self.pos..];
        let trimmed = rest.trim_start();
        let start = self.pos + (rest.len() - trimmed.len());
        let c = trimmed.chars().next()?;
        let tok = match c {
            '(' => Tok::Open,
            ')' => Tok::Close,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '&' => Tok::And,
            '=' => Tok::Eq,
            c if c.is_alphanumeric() || c == '_' => {
                let len = trimmed
                    .find(|c: char| !(c.is_alphanumeric() || c == '_'))
                    .unwrap_or(trimmed.len());
                return Some((Tok::Ident(&trimmed[..len]), start + len));
            }
            c => Tok::Bad(c),
        };
        Some((tok, start + c.len_utf8()))
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.scan().map(|(t, _)| t)
    }

    fn peek_ident(&self) -> Option<&'a str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let (t, end) = self.scan()?;
        self.pos = end;
        Some(t)
    }

    fn expect(&mut self, want: Tok<'a>) -> Result<()> {
        if self.next() == Some(want) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {want:?}")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::QuerySyntax(format!("{msg} at byte {} of `{}`", self.pos, self.text))
    }
}
