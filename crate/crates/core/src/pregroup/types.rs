use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite poset of basic types, stored as its reflexive-transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicTypePoset {
    names: BTreeSet<String>,
    leq: BTreeSet<(String, String)>,
}

impl BasicTypePoset {
    /// Builds the reflexive-transitive closure of `pairs` over `names`.
    pub fn closure<I, P, S>(names: I, pairs: P) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        P: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let names: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let n = names.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let (a, b): (String, String) = (a.into(), b.into());
            let ia = *index.get(a.as_str()).ok_or_else(|| Error::UnknownBasic(a.clone()))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| Error::UnknownBasic(b.clone()))?;
            reach[ia][ib] = true;
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut().filter(|row| row[k]) {
                for (r, &v) in row.iter_mut().zip(&via) {
                    *r |= v;
                }
            }
        }
        let by_index: Vec<&String> = names.iter().collect();
        let mut leq = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] {
                    if i != j && reach[j][i] {
                        let (a, b) = if i < j { (i, j) } else { (j, i) };
                        return Err(Error::Cycle(by_index[a].clone(), by_index[b].clone()));
                    }
                    leq.insert((by_index[i].clone(), by_index[j].clone()));
                }
            }
        }
        Ok(BasicTypePoset { names, leq })
    }

    pub fn discrete<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        let leq = names.iter().map(|n| (n.clone(), n.clone())).collect();
        BasicTypePoset { names, leq }
    }

    pub fn names(&self) -> &BTreeSet<String> {
        &self.names
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn leq(&self, a: &str, b: &str) -> bool {
        self.leq.contains(&(a.to_owned(), b.to_owned()))
    }

    /// Strict pairs `a < b` of the order.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.leq
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn is_discrete(&self) -> bool {
        self.strict_pairs().next().is_none()
    }

    /// Basics `b` with `a ≤ b`.
    pub fn upper(&self, a: &str) -> impl Iterator<Item = &str> + '_ {
        let a = a.to_owned();
        self.leq
            .iter()
            .filter(move |(x, _)| *x == a)
            .map(|(_, y)| y.as_str())
    }

    /// Basics `b` with `b ≤ a`.
    pub fn lower(&self, a: &str) -> impl Iterator<Item = &str> + '_ {
        let a = a.to_owned();
        self.leq
            .iter()
            .filter(move |(_, y)| *y == a)
            .map(|(x, _)| x.as_str())
    }

    /// `(a, z) ≤ (b, z)` as simple types. The map `a ↦ a^(z)` is monotone for
    /// even `z` and antitone for odd `z`.
    pub fn token_leq(&self, a: &Token, b: &Token) -> bool {
        a.exp == b.exp
            && if a.exp.rem_euclid(2) == 0 {
                self.leq(&a.basic, &b.basic)
            } else {
                self.leq(&b.basic, &a.basic)
            }
    }

    /// Generalised contraction `left · right ≤ ε`.
    ///
    /// Adjacent tokens cancel when the left exponent is one above the right
    /// one, e.g. `t · *t` and `t* · t`. Induced steps are allowed on either
    /// side, which amounts to `left ≤ right` on basics when the left exponent
    /// is even and `right ≤ left` when it is odd.
    pub fn contracts(&self, left: &Token, right: &Token) -> bool {
        left.exp == right.exp + 1
            && if left.exp.rem_euclid(2) == 0 {
                self.leq(&left.basic, &right.basic)
            } else {
                self.leq(&right.basic, &left.basic)
            }
    }
}

/// A simple type `b` with adjoint exponent: `-1` is `*b`, `+1` is `b*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub basic: String,
    pub exp: i32,
}

impl Token {
    pub fn new(basic: impl Into<String>, exp: i32) -> Self {
        Token {
            basic: basic.into(),
            exp,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stars = "*".repeat(self.exp.unsigned_abs() as usize);
        if self.exp < 0 {
            write!(f, "{stars}{}", self.basic)
        } else {
            write!(f, "{}{stars}", self.basic)
        }
    }
}

impl FromStr for Token {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let prefix = s.len() - s.trim_start_matches('*').len();
        let suffix = s.len() - s.trim_end_matches('*').len();
        if prefix == s.len() || (prefix > 0 && suffix > 0) {
            return Err(Error::TypeSyntax(s.to_owned()));
        }
        let basic = &s[prefix..s.len() - suffix];
        if !basic
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
        {
            return Err(Error::TypeSyntax(s.to_owned()));
        }
        Ok(Token::new(basic, suffix as i32 - prefix as i32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An element of the free pregroup: a word of simple types. Empty is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PregroupType(pub Vec<Token>);

impl PregroupType {
    pub fn unit() -> Self {
        PregroupType(Vec::new())
    }

    pub fn basic(b: impl Into<String>) -> Self {
        PregroupType(vec![Token::new(b, 0)])
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn adjoint(&self, side: Side) -> Self {
        let delta = match side {
            Side::Left => -1,
            Side::Right => 1,
        };
        PregroupType(
            self.0
                .iter()
                .rev()
                .map(|t| Token::new(t.basic.clone(), t.exp + delta))
                .collect(),
        )
    }

    pub fn concat(&self, other: &PregroupType) -> Self {
        let mut tokens = self.0.clone();
        tokens.extend(other.0.iter().cloned());
        PregroupType(tokens)
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for PregroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(PregroupType)
    }
}

impl Serialize for PregroupType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PregroupType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dictionary entry `(word, type)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub word: String,
    #[serde(rename = "type")]
    pub ty: PregroupType,
}

impl Entry {
    pub fn new(word: impl Into<String>, ty: PregroupType) -> Self {
        Entry {
            word: word.into(),
            ty,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.word, self.ty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    vocabulary: BTreeSet<String>,
    basics: BasicTypePoset,
    dictionary: Vec<Entry>,
}

impl Grammar {
    /// The vocabulary is the set of dictionary words plus `extra_words`.
    pub fn new(
        basics: BasicTypePoset,
        dictionary: Vec<Entry>,
        extra_words: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for entry in &dictionary {
            for t in entry.ty.tokens() {
                if !basics.contains(&t.basic) {
                    return Err(Error::UnknownBasic(t.basic.clone()));
                }
            }
            if !seen.insert(entry) {
                return Err(Error::DuplicateEntry {
                    word: entry.word.clone(),
                    ty: entry.ty.to_string(),
                });
            }
        }
        let mut vocabulary: BTreeSet<String> = extra_words.into_iter().collect();
        vocabulary.extend(dictionary.iter().map(|e| e.word.clone()));
        Ok(Grammar {
            vocabulary,
            basics,
            dictionary,
        })
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn basics(&self) -> &BasicTypePoset {
        &self.basics
    }

    pub fn dictionary(&self) -> &[Entry] {
        &self.dictionary
    }

    /// Entries for `word` in dictionary order.
    pub fn entries_for<'a>(&'a self, word: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.dictionary.iter().filter(move |e| e.word == word)
    }

    pub fn check_type(&self, ty: &PregroupType) -> Result<()> {
        match ty.tokens().iter().find(|t| !self.basics.contains(&t.basic)) {
            Some(t) => Err(Error::UnknownBasic(t.basic.clone())),
            None => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GrammarFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        let file = GrammarFile::from(self);
        serde_json::to_string_pretty(&file).expect("grammar serializes")
    }
}

/// On-disk grammar format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrammarFile {
    pub basics: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub dictionary: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vocabulary: Vec<String>,
}

impl TryFrom<GrammarFile> for Grammar {
    type Error = Error;

    fn try_from(file: GrammarFile) -> Result<Self> {
        let basics = BasicTypePoset::closure(file.basics, file.order)?;
        Grammar::new(basics, file.dictionary, file.vocabulary)
    }
}

impl From<&Grammar> for GrammarFile {
    fn from(g: &Grammar) -> Self {
        let dict_words: BTreeSet<&String> = g.dictionary.iter().map(|e| &e.word).collect();
        GrammarFile {
            basics: g.basics.names().iter().cloned().collect(),
            order: g
                .basics
                .strict_pairs()
                .map(|(a, b)| (a.to_owned(), b.to_owned()))
                .collect(),
            dictionary: g.dictionary.clone(),
            vocabulary: g
                .vocabulary
                .iter()
                .filter(|w| !dict_words.contains(w))
                .cloned()
                .collect(),
        }
    }
}
