use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use super::hom::{find_homomorphism, Pins, Search};
use super::query::Query;
use super::structure::RelStructure;
use crate::error::{Error, Result};

/// Answers to a query: one row of universe elements per satisfying
/// assignment of the free columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Answers {
    pub columns: Vec<String>,
    pub rows: BTreeSet<Vec<String>>,
}

impl Answers {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }
}

impl fmt::Display for Answers {
    /// One line per row as `col=value` pairs; a closed query that holds
    /// prints `true`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            if row.is_empty() {
                writeln!(f, "true")?;
                continue;
            }
            let cells: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| format!("{c}={v}"))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Restrictions to the free columns of all homomorphisms from the canonical
/// structure of `query` into `k`.
pub fn eval(query: &Query, k: &RelStructure) -> Result<Answers> {
    k.check_compatible(query.signature())?;
    let cm = RelStructure::canonical(query);
    let free_vars: Vec<usize> = query.free().iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows = BTreeSet::new();
    if let Some(search) = Search::new(&cm, k, &Pins::new(), &free_vars)? {
        debug_assert!(search.order()[..free_vars.len()].iter().all(|x| free_vars.contains(x)));
        search.for_each_projection(free_vars.len(), &mut |h| {
            rows.insert(
                query
                    .free()
                    .iter()
                    .map(|&v| k.universe()[h[v]].clone())
                    .collect(),
            );
            ControlFlow::Continue(())
        });
    }
    Ok(Answers {
        columns: query.free_names().to_vec(),
        rows,
    })
}

/// `q1 ⊆ q2`: a homomorphism from the canonical structure of `q2` to that of
/// `q1` sending the free columns of `q2` onto those of `q1` position by
/// position.
pub fn contains(q1: &Query, q2: &Query) -> Result<bool> {
    if q1.free().len() != q2.free().len() {
        return Err(Error::FreeArityMismatch {
            left: q1.free().len(),
            right: q2.free().len(),
        });
    }
    let cm1 = RelStructure::canonical(q1);
    let cm2 = RelStructure::canonical(q2);
    cm1.check_compatible(cm2.signature())?;
    let mut pins = Pins::new();
    for (&x2, &x1) in q2.free().iter().zip(q1.free()) {
        if *pins.entry(x2).or_insert(x1) != x1 {
            return Ok(false);
        }
    }
    Ok(find_homomorphism(&cm2, &cm1, &pins)?.is_some())
}

/// Mutual containment.
pub fn equivalent(q1: &Query, q2: &Query) -> Result<bool> {
    Ok(contains(q1, q2)? && contains(q2, q1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Query {
        s.parse().unwrap()
    }

    fn corpus_db() -> RelStructure {
        let mut k = RelStructure::new(
            ["Leibniz", "Spinoza", "calculus"].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap();
        k.insert_named("Spin", &["Spinoza"]).unwrap();
        k.insert_named("infl", &["Spinoza", "Leibniz"]).unwrap();
        k.insert_named("phil", &["Leibniz"]).unwrap();
        k.insert_named("Leib", &["Leibniz"]).unwrap();
        k.insert_named("disc", &["Leibniz", "calculus"]).unwrap();
        k.insert_named("calc", &["calculus"]).unwrap();
        k
    }

    #[test]
    fn demo_question_on_corpus() {
        let query = q("exists x1 x2 . infl(x0,x1) & phil(x1) & disc(x1,x2) & calc(x2)");
        let answers = eval(&query, &corpus_db()).unwrap();
        assert_eq!(answers.columns, vec!["x0"]);
        assert_eq!(answers.rows, BTreeSet::from([vec!["Spinoza".to_string()]]));
        assert_eq!(answers.to_string(), "x0=Spinoza\n");
    }

    #[test]
    fn truth_has_one_empty_answer() {
        let answers = eval(&Query::truth(), &corpus_db()).unwrap();
        assert_eq!(answers.rows, BTreeSet::from([vec![]]));
        assert_eq!(answers.to_string(), "true\n");
    }

    #[test]
    fn absent_symbol_gives_nothing() {
        assert!(eval(&q("read(x)"), &corpus_db()).unwrap().is_empty());
    }

    #[test]
    fn repeated_free_column() {
        let answers = eval(&q("Spin(x0) & x1 = x0"), &corpus_db()).unwrap();
        assert_eq!(
            answers.rows,
            BTreeSet::from([vec!["Spinoza".to_string(), "Spinoza".to_string()]])
        );
    }

    #[test]
    fn eval_signature_mismatch() {
        assert!(matches!(eval(&q("infl(x)"), &corpus_db()), Err(Error::SignatureMismatch { .. })));
    }

    #[test]
    fn containment_basics() {
        let a = q("R(x0,x1) & S(x1)");
        let b = q("R(x0,x1)");
        assert!(contains(&a, &a).unwrap());
        assert!(contains(&a, &b).unwrap());
        assert!(!contains(&b, &a).unwrap());
    }

    #[test]
    fn dropping_conjuncts_weakens() {
        let full = q("exists x1 x2 . infl(x0,x1) & phil(x1) & disc(x1,x2) & calc(x2)");
        let weak = q("exists x1 . infl(x0,x1) & phil(x1)");
        assert!(contains(&full, &weak).unwrap());
        assert!(!contains(&weak, &full).unwrap());
    }

    #[test]
    fn containment_is_positional() {
        let a = q("R(a,b)");
        let b = q("R(u,v)");
        assert!(equivalent(&a, &b).unwrap());
        let swapped = q("R(v,u)");
        // free columns are [u, v] in both, so R(v,u) ≠ R(u,v)
        assert!(!contains(&b, &swapped).unwrap());
    }

    #[test]
    fn equated_free_columns() {
        let diag = q("R(x0,x0) & x1 = x0");
        let pair = q("R(x0,x1)");
        assert!(contains(&diag, &pair).unwrap());
        assert!(!contains(&pair, &diag).unwrap());
    }

    #[test]
    fn free_arity_mismatch() {
        assert_eq!(
            contains(&q("R(x)"), &q("exists y . R(y)")).unwrap_err(),
            Error::FreeArityMismatch { left: 1, right: 0 }
        );
    }
}
