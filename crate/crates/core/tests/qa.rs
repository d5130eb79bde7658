use std::collections::BTreeSet;

use discorel::cq::{enumerate_homomorphisms, eval, find_homomorphism, Pins, Query, QueryBuilder, RelStructure};
use discorel::diagram::Lexicon;
use discorel::oracle::brute_force_homomorphisms;
use discorel::pregroup::{parse, tokenize, Grammar, PregroupType};
use discorel::qa::{
    answer, answer_query, compile, corpus_query, graph_pattern, graph_to_corpus, sentence_queries, Corpus,
    EntityLinking,
};
use proptest::prelude::*;

fn demo() -> (Grammar, Lexicon) {
    (
        Grammar::from_json(include_str!("../../../demo/grammar.json")).unwrap(),
        Lexicon::from_json(include_str!("../../../demo/lexicon.json")).unwrap(),
    )
}

const NOUN_PHRASES: [&str; 6] = [
    "Spinoza",
    "Leibniz",
    "calculus",
    "the philosopher Leibniz",
    "a philosopher",
    "the philosopher who discovered calculus",
];
const VERBS: [&str; 2] = ["influenced", "discovered"];
const SIGNATURE: [(&str, usize); 6] = [
    ("infl", 2),
    ("disc", 2),
    ("phil", 1),
    ("calc", 1),
    ("Spin", 1),
    ("Leib", 1),
];

fn corpus(g: &Grammar, picks: &[(usize, usize, usize)]) -> Corpus {
    let text: String = picks
        .iter()
        .map(|&(s, v, o)| format!("{} {} {}\n", NOUN_PHRASES[s], VERBS[v], NOUN_PHRASES[o]))
        .collect();
    Corpus::parse_text(g, &text, &PregroupType::basic("s")).unwrap()
}

fn sentences() -> impl Strategy<Value = Vec<(usize, usize, usize)>> {
    prop::collection::vec((0..6usize, 0..2usize, 0..6usize), 0..=4)
}

/// Links every variable of every sentence to an entity of the same name as
/// its corpus variable, so the linking is injective.
fn injective_linking(c: &Corpus, lex: &Lexicon) -> EntityLinking {
    let mut mu = EntityLinking::new();
    for (i, q) in sentence_queries(c, lex).unwrap().iter().enumerate() {
        for v in q.variables() {
            mu.link(i, v, &format!("s{i}_{v}"));
        }
    }
    mu
}

fn question() -> impl Strategy<Value = Query> {
    (
        1..=3usize,
        prop::collection::vec(any::<bool>(), 3),
        prop::collection::vec((0..6usize, 0..3usize, 0..3usize), 0..=3),
    )
        .prop_map(|(n, free, atoms)| {
            let mut b = QueryBuilder::new();
            for (v, &is_free) in free.iter().enumerate().take(n) {
                b.var(&format!("x{v}"));
                if !is_free {
                    b.bind(&format!("x{v}"));
                }
            }
            for (s, a, c) in atoms {
                let (symbol, arity) = SIGNATURE[s];
                let args = [format!("x{}", a % n), format!("x{}", c % n)];
                let refs: Vec<&str> = args[..arity].iter().map(String::as_str).collect();
                b.atom(symbol, &refs);
            }
            b.build().unwrap()
        })
}

fn graph(n: usize, edges: &[(usize, usize)]) -> RelStructure {
    let mut k = RelStructure::new((0..n).map(|i| format!("v{i}")).collect()).unwrap();
    k.declare("edge", 2).unwrap();
    for &(a, b) in edges {
        k.insert("edge", vec![a, b]).unwrap();
    }
    k
}

fn any_graph() -> impl Strategy<Value = RelStructure> {
    (1..=4usize).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=6).prop_map(move |edges| graph(n, &edges))
    })
}

fn declare_signature(k: &mut RelStructure) {
    for (s, a) in SIGNATURE {
        k.declare(s, a).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn pipeline_factors_through_homomorphisms(picks in sentences(), q in question()) {
        let (g, lex) = demo();
        let c = corpus(&g, &picks);
        let mu = injective_linking(&c, &lex);
        let mut db = compile(&c, &lex, &mu).unwrap();
        declare_signature(&mut db.structure);
        let got = answer_query(&db, &q).unwrap().rows;

        let mut cm_corpus = RelStructure::canonical(&corpus_query(&c, &lex).unwrap());
        declare_signature(&mut cm_corpus);
        let cm_q = RelStructure::canonical(&q);
        let expected: BTreeSet<Vec<String>> =
            enumerate_homomorphisms(&cm_q, &cm_corpus, &Pins::new(), usize::MAX)
                .unwrap()
                .into_iter()
                .map(|h| q.free().iter().map(|&v| cm_corpus.universe()[h[v]].clone()).collect())
                .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn graph_encoding_reproduces_homomorphisms(pattern in any_graph(), target in any_graph(), symmetric in any::<bool>()) {
        let enc = graph_to_corpus(&target, symmetric).unwrap();
        let db = compile(&enc.corpus, &enc.lexicon, &enc.linking).unwrap();
        let q = graph_pattern(&pattern, symmetric).unwrap();
        let got = answer_query(&db, &q).unwrap().rows;

        let mut closed_pattern = pattern.clone();
        let mut closed_target = target.clone();
        if symmetric {
            for k in [&mut closed_pattern, &mut closed_target] {
                let rows: Vec<Vec<usize>> = k.table("edge").unwrap().iter().cloned().collect();
                for t in rows {
                    k.insert("edge", vec![t[1], t[0]]).unwrap();
                }
            }
        }
        let expected: BTreeSet<Vec<String>> = brute_force_homomorphisms(&closed_pattern, &closed_target)
            .into_iter()
            .map(|h| h.iter().map(|&v| target.universe()[v].clone()).collect())
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn every_tuple_has_provenance(picks in sentences()) {
        let (g, lex) = demo();
        let c = corpus(&g, &picks);
        let db = compile(&c, &lex, &EntityLinking::new()).unwrap();
        let mut tuples = BTreeSet::new();
        for (symbol, rows) in db.structure.tables() {
            for t in rows {
                let names: Vec<String> = t.iter().map(|&e| db.structure.universe()[e].clone()).collect();
                let sources = db.provenance.get(&(symbol.clone(), names.clone()));
                prop_assert!(sources.is_some_and(|s| !s.is_empty() && s.iter().all(|&i| i < c.len())));
                tuples.insert((symbol.clone(), names));
            }
        }
        prop_assert_eq!(tuples.len(), db.provenance.len());
    }

    #[test]
    fn sentence_order_does_not_matter(picks in sentences(), seed in any::<u64>()) {
        let (g, lex) = demo();
        let c = corpus(&g, &picks);
        let n = c.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        // sentence i moves to position perm[i]; the linking moves with it
        let mut shuffled = Corpus::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| perm[i]);
        for &i in &order {
            shuffled.sentences.push(c.sentences[i].clone());
        }
        let mu = injective_linking(&c, &lex);
        let mut moved = EntityLinking::new();
        for ((i, v), e) in &mu.links {
            moved.link(perm[*i], v, e);
        }
        let a = compile(&c, &lex, &mu).unwrap();
        let b = compile(&shuffled, &lex, &moved).unwrap();
        prop_assert_eq!(&a.structure, &b.structure);

        // with blank entities the databases agree up to renaming
        let a = compile(&c, &lex, &EntityLinking::new()).unwrap().structure;
        let b = compile(&shuffled, &lex, &EntityLinking::new()).unwrap().structure;
        prop_assert_eq!(a.universe().len(), b.universe().len());
        prop_assert_eq!(a.tuple_count(), b.tuple_count());
        prop_assert!(find_homomorphism(&a, &b, &Pins::new()).unwrap().is_some());
        prop_assert!(find_homomorphism(&b, &a, &Pins::new()).unwrap().is_some());
    }
}

#[test]
fn demo_question_end_to_end() {
    let (g, lex) = demo();
    let c = Corpus::parse_text(&g, include_str!("../../../demo/corpus.txt"), &PregroupType::basic("s")).unwrap();
    let mu = EntityLinking::from_json(include_str!("../../../demo/linking.json")).unwrap();
    let db = compile(&c, &lex, &mu).unwrap();
    let r = parse(
        &g,
        &tokenize(include_str!("../../../demo/question.txt")),
        &PregroupType::basic("q"),
    )
    .unwrap()
    .unwrap();
    let answers = answer(&db, &r, &lex).unwrap();
    assert_eq!(answers.rows, BTreeSet::from([vec!["Spinoza".to_string()]]));
    // the same answers come from evaluating the compiled query directly
    let q: Query = "exists x1 x2 . infl(x0,x1) & phil(x1) & disc(x1,x2) & calc(x2)".parse().unwrap();
    assert_eq!(eval(&q, &db.structure).unwrap(), answers);
}

#[test]
fn apposition_entails_plain_sentence() {
    let (g, lex) = demo();
    let s = PregroupType::basic("s");
    let long = parse(&g, &tokenize("Spinoza influenced the philosopher Leibniz"), &s).unwrap().unwrap();
    let short = parse(&g, &tokenize("Spinoza influenced Leibniz"), &s).unwrap().unwrap();
    assert!(discorel::cq::entails(&long, &short, &lex).unwrap());
    assert!(!discorel::cq::entails(&short, &long, &lex).unwrap());
}
