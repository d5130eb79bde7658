use super::eval::contains;
use crate::diagram::{apply_l, lambda_translate, Lexicon};
use crate::error::{Error, Result};
use crate::pregroup::ParseDiagram;

/// `r` entails `r′` in the free model: the query of `r` is contained in the
/// query of `r′`.
pub fn entails(r: &ParseDiagram, r_prime: &ParseDiagram, lex: &Lexicon) -> Result<bool> {
    if r.target != r_prime.target {
        return Err(Error::Precondition(format!(
            "entailment compares parses of one type, got {} and {}",
            r.target, r_prime.target
        )));
    }
    let q = lambda_translate(&apply_l(lex, r)?);
    let q_prime = lambda_translate(&apply_l(lex, r_prime)?);
    contains(&q, &q_prime)
}
