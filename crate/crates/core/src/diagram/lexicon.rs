use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::wiring::{merge_signature, BoxNode, RelSignature, Wiring};
use crate::error::{Error, Result};
use crate::pregroup::{Entry, ParseDiagram, PregroupType};

/// How a dictionary entry is drawn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Template {
    /// A single box over all the entry's wires.
    Symbol { name: String },
    /// An explicit wiring `0 → codomain.len()`.
    Wiring {
        wires: usize,
        #[serde(default)]
        boxes: Vec<BoxNode>,
        codomain: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub word: String,
    #[serde(rename = "type")]
    pub ty: PregroupType,
    pub template: Template,
}

/// On-disk lexicon format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconFile {
    #[serde(default)]
    pub basic_arity: BTreeMap<String, usize>,
    pub entries: Vec<LexiconEntry>,
}

/// The free model on generators: a wire count per basic type and a wiring
/// per dictionary entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    basic_arity: BTreeMap<String, usize>,
    entries: Vec<LexiconEntry>,
    wirings: BTreeMap<Entry, Wiring>,
    signature: RelSignature,
}

impl Lexicon {
    /// Basic types missing from `basic_arity` get one wire.
    pub fn new(basic_arity: BTreeMap<String, usize>) -> Self {
        Lexicon {
            basic_arity,
            ..Lexicon::default()
        }
    }

    pub fn arity(&self, basic: &str) -> usize {
        self.basic_arity.get(basic).copied().unwrap_or(1)
    }

    pub fn wire_count(&self, ty: &PregroupType) -> usize {
        ty.tokens().iter().map(|t| self.arity(&t.basic)).sum()
    }

    pub fn basic_arity(&self) -> &BTreeMap<String, usize> {
        &self.basic_arity
    }

    pub fn signature(&self) -> &RelSignature {
        &self.signature
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn wiring(&self, entry: &Entry) -> Option<&Wiring> {
        self.wirings.get(entry)
    }

    pub fn insert(&mut self, word: &str, ty: PregroupType, template: Template) -> Result<()> {
        let entry = Entry::new(word, ty.clone());
        if self.wirings.contains_key(&entry) {
            return Err(Error::DuplicateEntry {
                word: word.to_owned(),
                ty: ty.to_string(),
            });
        }
        let width = self.wire_count(&ty);
        let wiring = match &template {
            Template::Symbol { name } => Wiring::generator(name.clone(), width),
            Template::Wiring {
                wires,
                boxes,
                codomain,
            } => Wiring::new(*wires, boxes.clone(), Vec::new(), codomain.clone())?,
        };
        if wiring.codomain().len() != width {
            return Err(Error::ArityMismatch(format!(
                "template for `{entry}` has {} outputs but the type needs {width}",
                wiring.codomain().len()
            )));
        }
        merge_signature(&mut self.signature, &wiring.signature())?;
        self.entries.push(LexiconEntry {
            word: word.to_owned(),
            ty,
            template,
        });
        self.wirings.insert(entry, wiring);
        Ok(())
    }

    pub fn insert_symbol(&mut self, word: &str, ty: PregroupType, symbol: &str) -> Result<()> {
        self.insert(word, ty, Template::Symbol { name: symbol.to_owned() })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LexiconFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        let file = LexiconFile {
            basic_arity: self.basic_arity.clone(),
            entries: self.entries.clone(),
        };
        serde_json::to_string_pretty(&file).expect("lexicon serializes")
    }
}

impl TryFrom<LexiconFile> for Lexicon {
    type Error = Error;

    fn try_from(file: LexiconFile) -> Result<Self> {
        let mut lex = Lexicon::new(file.basic_arity);
        for e in file.entries {
            lex.insert(&e.word, e.ty, e.template)?;
        }
        Ok(lex)
    }
}

/// Sends a parse to the free Cartesian bicategory: the word templates side
/// by side, each cup gluing the wire bundles of its two tokens, the bundle
/// on the right taken in reverse. The codomain is the bundles of the output
/// tokens.
pub fn apply_l(lex: &Lexicon, r: &ParseDiagram) -> Result<Wiring> {
    let mut whole = Wiring::empty();
    for e in &r.assignment {
        let w = lex.wiring(e).ok_or_else(|| Error::MissingEntry {
            word: e.word.clone(),
            ty: e.ty.to_string(),
        })?;
        whole = whole.tensor(w);
    }
    let mut bundles = Vec::new();
    let mut at = 0;
    for t in r.tokens() {
        let k = lex.arity(&t.basic);
        bundles.push(&whole.codomain()[at..at + k]);
        at += k;
    }
    let mut pairs = Vec::new();
    for &(i, j) in &r.matching {
        let (left, right) = (bundles[i], bundles[j]);
        if left.len() != right.len() {
            return Err(Error::ArityMismatch(format!(
                "cup ({i}, {j}) joins {} wires to {}",
                left.len(),
                right.len()
            )));
        }
        pairs.extend(left.iter().copied().zip(right.iter().rev().copied()));
    }
    let glued = whole.merge_wires(&pairs)?;
    let mut codomain = Vec::new();
    let mut at = 0;
    let mut starts = Vec::new();
    for b in &bundles {
        starts.push(at);
        at += b.len();
    }
    for &o in &r.output {
        codomain.extend_from_slice(&glued.codomain()[starts[o]..starts[o] + bundles[o].len()]);
    }
    Wiring::new(glued.wires(), glued.boxes().to_vec(), Vec::new(), codomain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::lambda_translate;
    use crate::pregroup::{parse, tokenize, Grammar};

    const GRAMMAR: &str = r#"{
        "basics": ["s", "q", "d", "n", "i", "o"],
        "order": [["n", "i"], ["n", "o"]],
        "dictionary": [
            {"word": "Who", "type": "q s* i"},
            {"word": "who", "type": "*n n s* i"},
            {"word": "influenced", "type": "*i s o*"},
            {"word": "discovered", "type": "*i s o*"},
            {"word": "the", "type": "d"},
            {"word": "philosopher", "type": "*d n"},
            {"word": "philosopher", "type": "*d n n*"},
            {"word": "calculus", "type": "n"},
            {"word": "Spinoza", "type": "n"},
            {"word": "Leibniz", "type": "n"}
        ]
    }"#;

    fn lexicon() -> Lexicon {
        let mut lex = Lexicon::new(
            [("s", 0), ("q", 1), ("d", 1), ("n", 1), ("i", 1), ("o", 1)]
                .into_iter()
                .map(|(b, k)| (b.to_string(), k))
                .collect(),
        );
        let ty = |s: &str| s.parse::<PregroupType>().unwrap();
        let spider = |outputs: usize| Template::Wiring {
            wires: 1,
            boxes: vec![],
            codomain: vec![0; outputs],
        };
        lex.insert("Who", ty("q s* i"), spider(2)).unwrap();
        lex.insert("who", ty("*n n s* i"), spider(3)).unwrap();
        lex.insert_symbol("influenced", ty("*i s o*"), "infl").unwrap();
        lex.insert_symbol("discovered", ty("*i s o*"), "disc").unwrap();
        lex.insert("the", ty("d"), spider(1)).unwrap();
        let phil = |outputs: usize| Template::Wiring {
            wires: 1,
            boxes: vec![BoxNode::new("phil", vec![0])],
            codomain: vec![0; outputs],
        };
        lex.insert("philosopher", ty("*d n"), phil(2)).unwrap();
        lex.insert("philosopher", ty("*d n n*"), phil(3)).unwrap();
        lex.insert_symbol("calculus", ty("n"), "calc").unwrap();
        lex.insert_symbol("Spinoza", ty("n"), "Spin").unwrap();
        lex.insert_symbol("Leibniz", ty("n"), "Leib").unwrap();
        lex
    }

    fn translate(sentence: &str, target: &str) -> String {
        let g = Grammar::from_json(GRAMMAR).unwrap();
        let r = parse(&g, &tokenize(sentence), &target.parse().unwrap())
            .unwrap()
            .expect("grammatical");
        lambda_translate(&apply_l(&lexicon(), &r).unwrap()).to_string()
    }

    #[test]
    fn question_translates_to_conjunctive_query() {
        assert_eq!(
            translate("Who influenced the philosopher who discovered calculus?", "q"),
            "exists x1 x2 . infl(x0,x1) & phil(x1) & disc(x1,x2) & calc(x2)"
        );
    }

    #[test]
    fn sentences_are_closed() {
        assert_eq!(
            translate("Spinoza influenced Leibniz", "s"),
            "exists x0 x1 . Spin(x0) & infl(x0,x1) & Leib(x1)"
        );
        assert_eq!(
            translate("Spinoza influenced the philosopher Leibniz", "s"),
            "exists x0 x1 . Spin(x0) & infl(x0,x1) & phil(x1) & Leib(x1)"
        );
        assert_eq!(
            translate("Leibniz discovered calculus", "s"),
            "exists x0 x1 . Leib(x0) & disc(x0,x1) & calc(x1)"
        );
    }

    #[test]
    fn svo_wiring_shape() {
        let g = Grammar::from_json(GRAMMAR).unwrap();
        let r = parse(&g, &tokenize("Spinoza influenced Leibniz"), &"s".parse().unwrap())
            .unwrap()
            .unwrap();
        let d = apply_l(&lexicon(), &r).unwrap();
        assert_eq!(d.codomain().len(), 0);
        assert_eq!(d.boxes().len(), 3);
        assert_eq!(d.wires(), 2);
    }

    #[test]
    fn single_noun() {
        assert_eq!(translate("calculus", "n"), "calc(x0)");
    }

    #[test]
    fn missing_entry() {
        let g = Grammar::from_json(GRAMMAR).unwrap();
        let r = parse(&g, &tokenize("calculus"), &"n".parse().unwrap()).unwrap().unwrap();
        let err = apply_l(&Lexicon::default(), &r).unwrap_err();
        assert!(matches!(err, Error::MissingEntry { .. }));
    }

    #[test]
    fn bundles_pair_in_reverse() {
        // a : n, b : *n with two wires per n; the cup glues a0–b1 and a1–b0
        let mut lex = Lexicon::new([("n".to_string(), 2)].into());
        lex.insert_symbol("a", "n".parse().unwrap(), "A").unwrap();
        lex.insert_symbol("b", "*n".parse().unwrap(), "B").unwrap();
        let r = ParseDiagram {
            words: vec!["a".into(), "b".into()],
            assignment: vec![
                Entry::new("a", "n".parse().unwrap()),
                Entry::new("b", "*n".parse().unwrap()),
            ],
            matching: vec![(0, 1)],
            output: vec![],
            target: PregroupType::unit(),
        };
        let d = apply_l(&lex, &r).unwrap();
        assert_eq!(lambda_translate(&d).to_string(), "exists x0 x1 . A(x0,x1) & B(x1,x0)");
    }

    #[test]
    fn cup_between_different_widths() {
        let mut lex = Lexicon::new([("n".to_string(), 2), ("m".to_string(), 1)].into());
        lex.insert_symbol("a", "n".parse().unwrap(), "A").unwrap();
        lex.insert_symbol("b", "*m".parse().unwrap(), "B").unwrap();
        let r = ParseDiagram {
            words: vec!["a".into(), "b".into()],
            assignment: vec![
                Entry::new("a", "n".parse().unwrap()),
                Entry::new("b", "*m".parse().unwrap()),
            ],
            matching: vec![(0, 1)],
            output: vec![],
            target: PregroupType::unit(),
        };
        assert!(matches!(apply_l(&lex, &r), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn template_width_checked() {
        let mut lex = Lexicon::default();
        let bad = Template::Wiring {
            wires: 1,
            boxes: vec![],
            codomain: vec![0],
        };
        assert!(matches!(
            lex.insert("x", "n n".parse().unwrap(), bad),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let lex = lexicon();
        let back = Lexicon::from_json(&lex.to_json()).unwrap();
        assert_eq!(back, lex);
        let text = r#"{"basic_arity":{"s":0},"entries":[
            {"word":"runs","type":"*n s","template":{"kind":"symbol","name":"run"}}]}"#;
        let lex = Lexicon::from_json(text).unwrap();
        assert_eq!(lex.signature()["run"], 1);
    }
}
