//! Exhaustive reference implementations, used to check the fast algorithms
//! on small inputs.

use std::collections::{BTreeSet, HashMap};

use crate::cq::{Mapping, Query, RelStructure};
use crate::error::{Error, Result};
use crate::pregroup::{BasicTypePoset, Entry, Grammar, ParseDiagram, PregroupType, Token};

/// Largest token sequence the reduction oracle accepts.
pub const MAX_ORACLE_TOKENS: usize = 16;

/// Sorted cups and the output positions.
pub type Reduction = (Vec<(usize, usize)>, Vec<usize>);

fn cancels(basics: &BasicTypePoset, l: &Token, r: &Token) -> bool {
    l.exp == r.exp + 1
        && if l.exp.rem_euclid(2) == 0 {
            basics.leq(&l.basic, &r.basic)
        } else {
            basics.leq(&r.basic, &l.basic)
        }
}

fn below(basics: &BasicTypePoset, t: &Token, s: &Token) -> bool {
    t.exp == s.exp
        && if t.exp.rem_euclid(2) == 0 {
            basics.leq(&t.basic, &s.basic)
        } else {
            basics.leq(&s.basic, &t.basic)
        }
}

/// Every planar cup pattern witnessing `t ≤ s`, found by cancelling
/// adjacent pairs in every possible order.
pub fn brute_force_reduce(
    t: &PregroupType,
    s: &PregroupType,
    basics: &BasicTypePoset,
) -> Result<BTreeSet<Reduction>> {
    brute_force_reduce_up_to(t, s, basics, MAX_ORACLE_TOKENS)
}

/// [`brute_force_reduce`] with a custom scale guard, at most 31 tokens.
pub fn brute_force_reduce_up_to(
    t: &PregroupType,
    s: &PregroupType,
    basics: &BasicTypePoset,
    limit: usize,
) -> Result<BTreeSet<Reduction>> {
    let limit = limit.min(31);
    let n = t.len();
    if n > limit {
        return Err(Error::Scale { len: n, limit });
    }
    let mut memo = HashMap::new();
    Ok(reductions((1u32 << n) - 1, t.tokens(), s.tokens(), basics, &mut memo))
}

fn reductions(
    mask: u32,
    t: &[Token],
    s: &[Token],
    basics: &BasicTypePoset,
    memo: &mut HashMap<u32, BTreeSet<Reduction>>,
) -> BTreeSet<Reduction> {
    if let Some(done) = memo.get(&mask) {
        return done.clone();
    }
    let left: Vec<usize> = (0..t.len()).filter(|&i| mask & (1 << i) != 0).collect();
    let mut out = BTreeSet::new();
    if left.len() == s.len() && left.iter().zip(s).all(|(&i, b)| below(basics, &t[i], b)) {
        out.insert((Vec::new(), left.clone()));
    }
    for w in left.windows(2) {
        let (a, b) = (w[0], w[1]);
        if cancels(basics, &t[a], &t[b]) {
            for (mut pairs, outs) in reductions(mask & !(1 << a) & !(1 << b), t, s, basics, memo) {
                pairs.push((a, b));
                pairs.sort_unstable();
                out.insert((pairs, outs));
            }
        }
    }
    memo.insert(mask, out.clone());
    out
}

/// Every parse of `words`, ordered by per-word entry index and then by cup
/// list.
pub fn brute_force_parses(g: &Grammar, words: &[String], target: &PregroupType) -> Result<Vec<ParseDiagram>> {
    brute_force_parses_up_to(g, words, target, MAX_ORACLE_TOKENS)
}

/// [`brute_force_parses`] with a custom scale guard on each assignment.
pub fn brute_force_parses_up_to(
    g: &Grammar,
    words: &[String],
    target: &PregroupType,
    limit: usize,
) -> Result<Vec<ParseDiagram>> {
    let mut choices: Vec<Vec<&Entry>> = Vec::new();
    for w in words {
        if !g.vocabulary().contains(w) {
            return Err(Error::UnknownWord(w.clone()));
        }
        choices.push(g.dictionary().iter().filter(|e| e.word == *w).collect());
    }
    let mut assignments: Vec<Vec<&Entry>> = vec![Vec::new()];
    for c in &choices {
        assignments = assignments
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |&e| {
                    let mut next = prefix.clone();
                    next.push(e);
                    next
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for a in assignments {
        let t = PregroupType(a.iter().flat_map(|e| e.ty.tokens().iter().cloned()).collect());
        for (matching, output) in brute_force_reduce_up_to(&t, target, g.basics(), limit)? {
            out.push(ParseDiagram {
                words: words.to_vec(),
                assignment: a.iter().map(|&e| e.clone()).collect(),
                matching,
                output,
                target: target.clone(),
            });
        }
    }
    Ok(out)
}

pub fn brute_force_grammatical(g: &Grammar, words: &[String], target: &PregroupType) -> Result<bool> {
    Ok(!brute_force_parses(g, words, target)?.is_empty())
}

fn all_maps(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = m.checked_pow(n as u32).expect("oracle scale");
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let v = code % m;
                code /= m;
                v
            })
            .collect()
    })
}

/// Answers by trying every valuation of every variable.
pub fn brute_force_eval(q: &Query, k: &RelStructure) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    let n = q.variables().len();
    let m = k.universe().len();
    if n > 0 && m == 0 {
        return out;
    }
    for val in all_maps(n, m.max(1)) {
        let holds = q.atoms().iter().all(|a| {
            let image: Vec<usize> = a.args.iter().map(|&v| val[v]).collect();
            k.table(&a.symbol).is_some_and(|t| t.contains(&image))
        });
        if holds {
            out.insert(q.free().iter().map(|&v| k.universe()[val[v]].clone()).collect());
        }
    }
    out
}

/// Every map `src → dst` preserving all tuples, in the order of the
/// valuation code with element 0 least significant.
pub fn brute_force_homomorphisms(src: &RelStructure, dst: &RelStructure) -> Vec<Mapping> {
    let n = src.universe().len();
    let m = dst.universe().len();
    if n > 0 && m == 0 {
        return Vec::new();
    }
    all_maps(n, m.max(1))
        .filter(|h| {
            src.tables().iter().all(|(symbol, rows)| {
                rows.iter().all(|t| {
                    let image: Vec<usize> = t.iter().map(|&x| h[x]).collect();
                    dst.table(symbol).is_some_and(|table| table.contains(&image))
                })
            })
        })
        .collect()
}

/// `q1 ⊆ q2` decided on the canonical database of `q1`: the tuple of its
/// own free variables must be an answer to `q2` there.
pub fn canonical_database_contains(q1: &Query, q2: &Query) -> Result<bool> {
    if q1.free().len() != q2.free().len() {
        return Err(Error::FreeArityMismatch {
            left: q1.free().len(),
            right: q2.free().len(),
        });
    }
    let cm = RelStructure::canonical(q1);
    let frozen: Vec<String> = q1.free().iter().map(|&v| q1.variables()[v].clone()).collect();
    Ok(brute_force_eval(q2, &cm).contains(&frozen))
}
