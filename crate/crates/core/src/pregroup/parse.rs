use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::types::{BasicTypePoset, Entry, Grammar, PregroupType, Token};
use crate::error::{Error, Result};

/// A reduction diagram: a dictionary entry per word and a planar pattern of
/// cups over the concatenated tokens. Unmatched positions are the outputs,
/// which reduce to `target` by induced steps alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParseDiagram {
    pub words: Vec<String>,
    pub assignment: Vec<Entry>,
    /// Cups `(i, j)` with `i < j`, sorted by left endpoint.
    pub matching: Vec<(usize, usize)>,
    pub output: Vec<usize>,
    pub target: PregroupType,
}

impl ParseDiagram {
    /// The concatenated tokens of the assigned types.
    pub fn tokens(&self) -> Vec<Token> {
        self.assignment
            .iter()
            .flat_map(|e| e.ty.tokens().iter().cloned())
            .collect()
    }

    /// For each token position, the index of the word it belongs to.
    pub fn word_of_position(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .flat_map(|(w, e)| std::iter::repeat_n(w, e.ty.len()))
            .collect()
    }

    /// Checks every structural invariant against `grammar`, returning the
    /// first violation found.
    pub fn validate(&self, grammar: &Grammar) -> std::result::Result<(), String> {
        if self.words.len() != self.assignment.len() {
            return Err("one entry per word required".into());
        }
        for (w, e) in self.words.iter().zip(&self.assignment) {
            if *w != e.word {
                return Err(format!("entry `{e}` assigned to word `{w}`"));
            }
            if !grammar.dictionary().contains(e) {
                return Err(format!("`{e}` is not a dictionary entry"));
            }
        }
        let tokens = self.tokens();
        let basics = grammar.basics();
        let n = tokens.len();
        let mut seen = vec![false; n];
        for &(i, j) in &self.matching {
            if i >= j || j >= n {
                return Err(format!("bad cup ({i}, {j})"));
            }
            for p in [i, j] {
                if std::mem::replace(&mut seen[p], true) {
                    return Err(format!("position {p} used twice"));
                }
            }
            if !basics.contracts(&tokens[i], &tokens[j]) {
                return Err(format!(
                    "cup ({i}, {j}) joins {} and {}",
                    tokens[i], tokens[j]
                ));
            }
        }
        if self.matching.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err("matching not sorted by left endpoint".into());
        }
        for &(i, j) in &self.matching {
            for &(k, l) in &self.matching {
                if i < k && k < j && j < l {
                    return Err(format!("cups ({i}, {j}) and ({k}, {l}) cross"));
                }
            }
            if let Some(p) = self.output.iter().find(|&&p| i < p && p < j) {
                return Err(format!("cup ({i}, {j}) encloses output {p}"));
            }
        }
        if self.output.windows(2).any(|w| w[0] >= w[1]) {
            return Err("outputs not increasing".into());
        }
        for &p in &self.output {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(format!("output position {p} invalid"));
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(format!("position {p} neither matched nor output"));
        }
        let target = self.target.tokens();
        if target.len() != self.output.len()
            || !self
                .output
                .iter()
                .zip(target)
                .all(|(&p, t)| basics.token_leq(&tokens[p], t))
        {
            return Err(format!("outputs do not reduce to {}", self.target));
        }
        Ok(())
    }
}

impl fmt::Display for ParseDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "words: {}", self.words.join(" "))?;
        let mut pos = 0;
        for e in &self.assignment {
            let end = pos + e.ty.len();
            writeln!(f, "  [{pos}..{end}) {e}")?;
            pos = end;
        }
        let cups: Vec<String> = self
            .matching
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        writeln!(f, "cups: {}", cups.join(" "))?;
        let outs: Vec<String> = self.output.iter().map(usize::to_string).collect();
        write!(f, "output: [{}] -> {}", outs.join(","), self.target)
    }
}

/// Splits on whitespace and strips sentence-final punctuation from the last
/// word.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut words: Vec<String> = sentence.split_whitespace().map(str::to_owned).collect();
    if let Some(last) = words.last_mut() {
        let trimmed = last.trim_end_matches(['?', '.', '!']).to_owned();
        if trimmed.is_empty() {
            words.pop();
        } else {
            *last = trimmed;
        }
    }
    words
}

/// Callback receiving the cups and outputs of one reduction.
type Visit<'a> = dyn FnMut(&[(usize, usize)], &[usize]) -> ControlFlow<()> + 'a;

/// Reducibility tables for one concatenated token sequence against a target.
struct Chart<'a> {
    basics: &'a BasicTypePoset,
    tokens: Vec<Token>,
    target: &'a [Token],
    /// `reducible[i][j]`: positions `i..j` cancel completely.
    reducible: Vec<Vec<bool>>,
    /// `feasible[p][m]`: positions `p..` reduce to `target[m..]`.
    feasible: Vec<Vec<bool>>,
}

impl<'a> Chart<'a> {
    fn new(basics: &'a BasicTypePoset, tokens: Vec<Token>, target: &'a [Token]) -> Self {
        let n = tokens.len();
        let mut reducible = vec![vec![false; n + 1]; n + 1];
        for (i, row) in reducible.iter_mut().enumerate() {
            row[i] = true;
        }
        for len in (2..=n).step_by(2) {
            for i in 0..=n - len {
                let j = i + len;
                reducible[i][j] = (i + 1..j).step_by(2).any(|k| {
                    reducible[i + 1][k]
                        && reducible[k + 1][j]
                        && basics.contracts(&tokens[i], &tokens[k])
                });
            }
        }
        let m = target.len();
        let mut feasible = vec![vec![false; m + 1]; n + 1];
        feasible[n][m] = true;
        for p in (0..n).rev() {
            for q in 0..=m {
                let as_output = q < m
                    && feasible[p + 1][q + 1]
                    && basics.token_leq(&tokens[p], &target[q]);
                feasible[p][q] = as_output
                    || (p + 1..n).step_by(2).any(|k| {
                        reducible[p + 1][k]
                            && feasible[k + 1][q]
                            && basics.contracts(&tokens[p], &tokens[k])
                    });
            }
        }
        Chart {
            basics,
            tokens,
            target,
            reducible,
            feasible,
        }
    }

    fn accepts(&self) -> bool {
        self.feasible[0][0]
    }

    /// Positions `p..` can all be outputs for `target[q..]`.
    fn all_outputs(&self, p: usize, q: usize) -> bool {
        self.tokens.len() - p == self.target.len() - q
            && self.tokens[p..]
                .iter()
                .zip(&self.target[q..])
                .all(|(t, s)| self.basics.token_leq(t, s))
    }

    /// Visits every reduction in canonical order: cup lists sorted by left
    /// endpoint, compared lexicographically.
    fn for_each(
        &self,
        visit: &mut Visit<'_>,
    ) -> ControlFlow<()> {
        if !self.accepts() {
            return ControlFlow::Continue(());
        }
        let mut state = Walk::default();
        self.walk(0, 0, false, &mut state, visit)
    }

    /// Decides position `p` onwards. At a free position the order is: all
    /// remaining positions as outputs, then a cup to each partner in
    /// increasing order, then `p` as an output followed by at least one more
    /// cup. `must_cup` records that last obligation.
    fn walk(
        &self,
        p: usize,
        q: usize,
        must_cup: bool,
        st: &mut Walk,
        visit: &mut Visit<'_>,
    ) -> ControlFlow<()> {
        let n = self.tokens.len();
        if p == n {
            debug_assert!(st.open.is_empty() && q == self.target.len());
            if must_cup {
                return ControlFlow::Continue(());
            }
            return visit(&st.pairs, &st.outputs);
        }
        if st.open.last() == Some(&p) {
            st.open.pop();
            let flow = self.walk(p + 1, q, must_cup, st, visit);
            st.open.push(p);
            return flow;
        }
        let bound = st.open.last().copied();
        if bound.is_none() && !must_cup && self.all_outputs(p, q) {
            let before = st.outputs.len();
            st.outputs.extend(p..n);
            let flow = visit(&st.pairs, &st.outputs);
            st.outputs.truncate(before);
            flow?;
        }
        for k in (p + 1..bound.unwrap_or(n)).step_by(2) {
            let rest_ok = match bound {
                Some(end) => self.reducible[k + 1][end],
                None => self.feasible[k + 1][q],
            };
            if rest_ok
                && self.reducible[p + 1][k]
                && self.basics.contracts(&self.tokens[p], &self.tokens[k])
            {
                st.open.push(k);
                st.pairs.push((p, k));
                let flow = self.walk(p + 1, q, false, st, visit);
                st.pairs.pop();
                st.open.pop();
                flow?;
            }
        }
        if bound.is_none()
            && q < self.target.len()
            && self.feasible[p + 1][q + 1]
            && self.basics.token_leq(&self.tokens[p], &self.target[q])
        {
            st.outputs.push(p);
            let flow = self.walk(p + 1, q + 1, true, st, visit);
            st.outputs.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

#[derive(Default)]
struct Walk {
    open: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    outputs: Vec<usize>,
}

/// Per-word dictionary entries, in dictionary order.
fn lexical_choices<'g>(g: &'g Grammar, words: &[String]) -> Result<Vec<Vec<&'g Entry>>> {
    words
        .iter()
        .map(|w| {
            if !g.vocabulary().contains(w) {
                return Err(Error::UnknownWord(w.clone()));
            }
            Ok(g.dictionary().iter().filter(|e| e.word == *w).collect())
        })
        .collect()
}

/// Visits type assignments in lexicographic order of per-word entry index.
fn for_each_assignment(
    choices: &[Vec<&Entry>],
    visit: &mut dyn FnMut(&[&Entry]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if choices.iter().any(Vec::is_empty) {
        return ControlFlow::Continue(());
    }
    let mut odometer = vec![0usize; choices.len()];
    loop {
        let picked: Vec<&Entry> = odometer
            .iter()
            .zip(choices)
            .map(|(&i, c)| c[i])
            .collect();
        visit(&picked)?;
        let mut w = choices.len();
        loop {
            if w == 0 {
                return ControlFlow::Continue(());
            }
            w -= 1;
            odometer[w] += 1;
            if odometer[w] < choices[w].len() {
                break;
            }
            odometer[w] = 0;
        }
    }
}

fn for_each_parse(
    g: &Grammar,
    words: &[String],
    target: &PregroupType,
    visit: &mut dyn FnMut(ParseDiagram) -> ControlFlow<()>,
) -> Result<()> {
    g.check_type(target)?;
    let choices = lexical_choices(g, words)?;
    let _ = for_each_assignment(&choices, &mut |picked| {
        let tokens: Vec<Token> = picked
            .iter()
            .flat_map(|e| e.ty.tokens().iter().cloned())
            .collect();
        let chart = Chart::new(g.basics(), tokens, target.tokens());
        chart.for_each(&mut |pairs, outputs| {
            visit(ParseDiagram {
                words: words.to_vec(),
                assignment: picked.iter().map(|&e| e.clone()).collect(),
                matching: pairs.to_vec(),
                output: outputs.to_vec(),
                target: target.clone(),
            })
        })
    });
    Ok(())
}

/// Whether some assignment of dictionary types to `words` reduces to `target`.
pub fn grammatical(g: &Grammar, words: &[String], target: &PregroupType) -> Result<bool> {
    g.check_type(target)?;
    let choices = lexical_choices(g, words)?;
    let flow = for_each_assignment(&choices, &mut |picked| {
        let tokens = picked
            .iter()
            .flat_map(|e| e.ty.tokens().iter().cloned())
            .collect();
        if Chart::new(g.basics(), tokens, target.tokens()).accepts() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(flow.is_break())
}

/// The canonical parse: first by per-word entry index, then by the cup list
/// sorted on left endpoints.
pub fn parse(g: &Grammar, words: &[String], target: &PregroupType) -> Result<Option<ParseDiagram>> {
    let mut found = None;
    for_each_parse(g, words, target, &mut |d| {
        found = Some(d);
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Up to `limit` distinct parses in canonical order.
pub fn enumerate_parses(
    g: &Grammar,
    words: &[String],
    target: &PregroupType,
    limit: usize,
) -> Result<Vec<ParseDiagram>> {
    if limit == 0 {
        return Err(Error::Precondition("parse limit must be at least 1".into()));
    }
    let mut out = Vec::new();
    for_each_parse(g, words, target, &mut |d| {
        out.push(d);
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

/// An equivalent grammar over the discrete poset: every entry is closed under
/// induced steps token by token. Original entries come first, in order.
pub fn expand_induced_steps(g: &Grammar) -> Grammar {
    let basics = g.basics();
    let mut seen: BTreeSet<Entry> = g.dictionary().iter().cloned().collect();
    let mut dictionary = g.dictionary().to_vec();
    for entry in g.dictionary() {
        let options: Vec<Vec<Token>> = entry
            .ty
            .tokens()
            .iter()
            .map(|t| {
                let bases: Vec<&str> = if t.exp.rem_euclid(2) == 0 {
                    basics.upper(&t.basic).collect()
                } else {
                    basics.lower(&t.basic).collect()
                };
                bases.into_iter().map(|b| Token::new(b, t.exp)).collect()
            })
            .collect();
        let mut acc: Vec<Vec<Token>> = vec![Vec::new()];
        for opts in &options {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |t| {
                        let mut v = prefix.clone();
                        v.push(t.clone());
                        v
                    })
                })
                .collect();
        }
        for tokens in acc {
            let e = Entry::new(entry.word.clone(), PregroupType(tokens));
            if seen.insert(e.clone()) {
                dictionary.push(e);
            }
        }
    }
    let discrete = BasicTypePoset::discrete(basics.names().iter().cloned());
    Grammar::new(discrete, dictionary, g.vocabulary().iter().cloned())
        .expect("expansion preserves well-formedness")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pregroup::types::BasicTypePoset;

    fn ty(s: &str) -> PregroupType {
        s.parse().unwrap()
    }

    fn words(s: &str) -> Vec<String> {
        tokenize(s)
    }

    fn example_grammar() -> Grammar {
        let basics = BasicTypePoset::closure(
            ["s", "q", "d", "n", "i", "o"],
            [("n", "i"), ("n", "o")],
        )
        .unwrap();
        let entries = [
            ("Who", "q s* i"),
            ("Who", "*n n s* i"),
            ("who", "*n n s* i"),
            ("who", "q s* i"),
            ("influenced", "*i s o*"),
            ("discovered", "*i s o*"),
            ("the", "d"),
            ("philosopher", "*d n"),
            ("calculus", "n"),
        ];
        Grammar::new(
            basics,
            entries
                .iter()
                .map(|(w, t)| Entry::new(*w, ty(t)))
                .collect(),
            [],
        )
        .unwrap()
    }

    #[test]
    fn example_question_is_grammatical() {
        let g = example_grammar();
        let u = words("Who influenced the philosopher who discovered calculus?");
        assert!(grammatical(&g, &u, &ty("q")).unwrap());
        assert!(!grammatical(&g, &u, &ty("s")).unwrap());
    }

    #[test]
    fn example_question_cup_pattern() {
        let g = example_grammar();
        let u = words("Who influenced the philosopher who discovered calculus?");
        let d = parse(&g, &u, &ty("q")).unwrap().unwrap();
        d.validate(&g).unwrap();
        assert_eq!(d.assignment[0].ty, ty("q s* i"));
        assert_eq!(d.assignment[4].ty, ty("*n n s* i"));
        // q s* i | *i s o* | d | *d n | *n n s* i | *i s o* | n
        // 0  1 2 |  3 4  5 | 6 |  7 8 |  9 10 11 12 | 13 14 15 | 16
        assert_eq!(
            d.matching,
            vec![(1, 4), (2, 3), (5, 10), (6, 7), (8, 9), (11, 14), (12, 13), (15, 16)]
        );
        assert_eq!(d.output, vec![0]);
        let all = enumerate_parses(&g, &u, &ty("q"), 10).unwrap();
        assert_eq!(all, vec![d]);
    }

    #[test]
    fn single_word_identity() {
        let g = example_grammar();
        let d = parse(&g, &words("calculus"), &ty("n")).unwrap().unwrap();
        assert!(d.matching.is_empty());
        assert_eq!(d.output, vec![0]);
        // induced step n ≤ o
        assert!(grammatical(&g, &words("calculus"), &ty("o")).unwrap());
    }

    #[test]
    fn word_order_matters() {
        let g = example_grammar();
        assert!(!grammatical(&g, &words("calculus influenced"), &ty("s")).unwrap());
    }

    #[test]
    fn empty_utterance() {
        let g = example_grammar();
        assert!(grammatical(&g, &[], &PregroupType::unit()).unwrap());
        assert!(!grammatical(&g, &[], &ty("s")).unwrap());
        let d = parse(&g, &[], &PregroupType::unit()).unwrap().unwrap();
        assert!(d.words.is_empty() && d.matching.is_empty() && d.output.is_empty());
    }

    #[test]
    fn unknown_word() {
        let g = example_grammar();
        assert_eq!(
            grammatical(&g, &words("Who likes"), &ty("q")).unwrap_err(),
            Error::UnknownWord("likes".into())
        );
        assert!(parse(&g, &words("zebra"), &ty("q")).is_err());
    }

    #[test]
    fn limit_zero_rejected() {
        let g = example_grammar();
        assert!(matches!(
            enumerate_parses(&g, &words("calculus"), &ty("n"), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn coordination_ambiguity() {
        // "men and women who read": two bracketings.
        let basics = BasicTypePoset::discrete(["n", "s"]);
        let entries = [
            ("men", "n"),
            ("women", "n"),
            ("and", "*n n n*"),
            ("who", "*n n s* n"),
            ("read", "*n s"),
        ];
        let g = Grammar::new(
            basics,
            entries
                .iter()
                .map(|(w, t)| Entry::new(*w, ty(t)))
                .collect(),
            [],
        )
        .unwrap();
        let parses = enumerate_parses(&g, &words("men and women who read"), &ty("n"), 10).unwrap();
        assert_eq!(parses.len(), 2);
        for p in &parses {
            p.validate(&g).unwrap();
        }
        assert_ne!(parses[0].matching, parses[1].matching);
        assert!(parses[0].matching < parses[1].matching);
    }

    #[test]
    fn expansion_of_noun() {
        let g = example_grammar();
        let e = expand_induced_steps(&g);
        assert!(e.basics().is_discrete());
        let calc: Vec<String> = e.entries_for("calculus").map(|e| e.ty.to_string()).collect();
        assert_eq!(calc, vec!["n", "i", "o"]);
        assert_eq!(&e.dictionary()[..g.dictionary().len()], g.dictionary());
    }

    #[test]
    fn expansion_discrete_unchanged() {
        let g = Grammar::new(
            BasicTypePoset::discrete(["n", "s"]),
            vec![Entry::new("x", ty("*n s"))],
            [],
        )
        .unwrap();
        assert_eq!(expand_induced_steps(&g), g);
    }

    #[test]
    fn expansion_product_of_choices() {
        let basics = BasicTypePoset::closure(["a", "b", "c", "d"], [("a", "b"), ("c", "d")]).unwrap();
        let g = Grammar::new(basics, vec![Entry::new("w", ty("a c"))], []).unwrap();
        let e = expand_induced_steps(&g);
        let got: BTreeSet<String> = e.entries_for("w").map(|e| e.ty.to_string()).collect();
        let want: BTreeSet<String> = ["a c", "a d", "b c", "b d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn expansion_moves_odd_exponents_down() {
        let basics = BasicTypePoset::closure(["n", "i"], [("n", "i")]).unwrap();
        let g = Grammar::new(basics, vec![Entry::new("v", ty("*i"))], []).unwrap();
        let e = expand_induced_steps(&g);
        let got: Vec<String> = e.entries_for("v").map(|e| e.ty.to_string()).collect();
        assert_eq!(got, vec!["*i", "*n"]);
    }

    #[test]
    fn validator_catches_crossing_and_enclosure() {
        let g = Grammar::new(
            BasicTypePoset::discrete(["a", "b"]),
            vec![Entry::new("w", ty("a b *a *b"))],
            [],
        )
        .unwrap();
        let bad = ParseDiagram {
            words: vec!["w".into()],
            assignment: vec![g.dictionary()[0].clone()],
            matching: vec![(0, 2), (1, 3)],
            output: vec![],
            target: PregroupType::unit(),
        };
        assert!(bad.validate(&g).is_err());
        assert!(!grammatical(&g, &bad.words, &PregroupType::unit()).unwrap());
    }

    #[test]
    fn tokenizer() {
        assert_eq!(words("a b?"), vec!["a", "b"]);
        assert_eq!(words("a b ?"), vec!["a", "b"]);
        assert_eq!(words("  "), Vec::<String>::new());
    }

    #[test]
    fn determinism() {
        let g = example_grammar();
        let u = words("Who influenced the philosopher who discovered calculus");
        assert_eq!(parse(&g, &u, &ty("q")).unwrap(), parse(&g, &u, &ty("q")).unwrap());
    }
}
