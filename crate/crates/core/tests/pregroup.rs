use discorel::oracle::{
    brute_force_grammatical, brute_force_parses, brute_force_parses_up_to, brute_force_reduce,
};
use discorel::pregroup::{
    enumerate_parses, expand_induced_steps, grammatical, parse, BasicTypePoset, Entry, Grammar,
    PregroupType, Side, Token,
};
use proptest::prelude::*;

fn token() -> impl Strategy<Value = Token> {
    (0..3usize, -2..=2i32).prop_map(|(b, exp)| Token::new(format!("b{b}"), exp))
}

fn pregroup_type(max: usize) -> impl Strategy<Value = PregroupType> {
    prop::collection::vec(token(), 0..=max).prop_map(PregroupType)
}

#[derive(Debug, Clone)]
struct Case {
    grammar: Grammar,
    words: Vec<String>,
    target: PregroupType,
}

/// Small grammars over basics b0..b{k}, an order drawn from pairs `bi < bj`
/// with `i < j` (so always acyclic), and utterances of up to 5 words.
fn case() -> impl Strategy<Value = Case> {
    let basics = 1..=4usize;
    basics
        .prop_flat_map(|k| {
            let order = prop::collection::vec((0..k, 0..k), 0..3);
            let entry = (
                0..3usize,
                prop::collection::vec((0..k, -1..=1i32), 1..=3),
            );
            let dict = prop::collection::vec(entry, 1..=8);
            let words = prop::collection::vec(0..3usize, 0..=5);
            let target = prop::collection::vec(0..k, 0..=1);
            (Just(k), order, dict, words, target)
        })
        .prop_map(|(k, order, dict, words, target)| {
            let names: Vec<String> = (0..k).map(|i| format!("b{i}")).collect();
            let order: Vec<(String, String)> = order
                .into_iter()
                .filter(|(a, b)| a < b)
                .map(|(a, b)| (names[a].clone(), names[b].clone()))
                .collect();
            let basics = BasicTypePoset::closure(names.clone(), order).unwrap();
            let mut dictionary: Vec<Entry> = Vec::new();
            for (w, toks) in dict {
                let ty = PregroupType(
                    toks.into_iter()
                        .map(|(b, e)| Token::new(names[b].clone(), e))
                        .collect(),
                );
                let e = Entry::new(format!("w{w}"), ty);
                if !dictionary.contains(&e) {
                    dictionary.push(e);
                }
            }
            let grammar = Grammar::new(basics, dictionary, (0..3).map(|w| format!("w{w}"))).unwrap();
            Case {
                grammar,
                words: words.into_iter().map(|w| format!("w{w}")).collect(),
                target: PregroupType(target.into_iter().map(|b| Token::new(names[b].clone(), 0)).collect()),
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn adjoints_are_inverse(t in pregroup_type(6)) {
        prop_assert_eq!(t.adjoint(Side::Left).adjoint(Side::Right), t.clone());
        prop_assert_eq!(t.adjoint(Side::Right).adjoint(Side::Left), t.clone());
    }

    #[test]
    fn type_syntax_round_trips(t in pregroup_type(6)) {
        let text = t.to_string();
        prop_assert_eq!(text.parse::<PregroupType>().unwrap(), t);
    }

    #[test]
    fn parser_agrees_with_oracle(c in case()) {
        let fast = grammatical(&c.grammar, &c.words, &c.target).unwrap();
        let slow = brute_force_grammatical(&c.grammar, &c.words, &c.target).unwrap();
        prop_assert_eq!(fast, slow);
        prop_assert_eq!(parse(&c.grammar, &c.words, &c.target).unwrap().is_some(), fast);
    }

    #[test]
    fn enumeration_matches_oracle_in_order(c in case()) {
        let expected = brute_force_parses(&c.grammar, &c.words, &c.target).unwrap();
        let got = if expected.is_empty() {
            enumerate_parses(&c.grammar, &c.words, &c.target, 1).unwrap()
        } else {
            enumerate_parses(&c.grammar, &c.words, &c.target, expected.len() + 1).unwrap()
        };
        prop_assert_eq!(&got, &expected);
        prop_assert_eq!(parse(&c.grammar, &c.words, &c.target).unwrap(), expected.first().cloned());
        for d in &got {
            prop_assert!(d.validate(&c.grammar).is_ok(), "{}", d);
        }
    }

    #[test]
    fn limit_truncates(c in case(), limit in 1..4usize) {
        let all = brute_force_parses(&c.grammar, &c.words, &c.target).unwrap();
        let some = enumerate_parses(&c.grammar, &c.words, &c.target, limit).unwrap();
        prop_assert_eq!(&some[..], &all[..all.len().min(limit)]);
    }

    #[test]
    fn expansion_preserves_grammaticality(c in case()) {
        let expanded = expand_induced_steps(&c.grammar);
        prop_assert!(expanded.basics().is_discrete());
        prop_assert!(c.grammar.dictionary().iter().all(|e| expanded.dictionary().contains(e)));
        prop_assert_eq!(
            grammatical(&c.grammar, &c.words, &c.target).unwrap(),
            grammatical(&expanded, &c.words, &c.target).unwrap()
        );
    }

    #[test]
    fn parsing_is_deterministic(c in case()) {
        prop_assert_eq!(
            parse(&c.grammar, &c.words, &c.target).unwrap(),
            parse(&c.grammar, &c.words, &c.target).unwrap()
        );
    }

    #[test]
    fn types_reduce_to_themselves(t in pregroup_type(5)) {
        let basics = BasicTypePoset::discrete(["b0", "b1", "b2"]);
        let found = brute_force_reduce(&t, &t, &basics).unwrap();
        prop_assert!(found.contains(&(vec![], (0..t.len()).collect())));
    }

    #[test]
    fn adjoint_pairs_cancel(t in pregroup_type(4)) {
        let basics = BasicTypePoset::discrete(["b0", "b1", "b2"]);
        let left = t.concat(&t.adjoint(Side::Left));
        let right = t.adjoint(Side::Right).concat(&t);
        prop_assert!(!brute_force_reduce(&left, &PregroupType::unit(), &basics).unwrap().is_empty());
        prop_assert!(!brute_force_reduce(&right, &PregroupType::unit(), &basics).unwrap().is_empty());
    }
}

#[test]
fn example_sentence_with_demo_grammar() {
    let g = Grammar::from_json(include_str!("../../../demo/grammar.json")).unwrap();
    let words = discorel::pregroup::tokenize("Who influenced the philosopher who discovered calculus?");
    let q = PregroupType::basic("q");
    let all = enumerate_parses(&g, &words, &q, 10).unwrap();
    assert_eq!(all.len(), 1);
    // the appositive assignment has 18 tokens
    assert_eq!(brute_force_parses_up_to(&g, &words, &q, 20).unwrap(), all);
}
