use std::collections::BTreeSet;

use super::wiring::Wiring;
use crate::cq::RelStructure;
use crate::error::{Error, Result};

/// Interprets a wiring in `interp` as a relation on its boundary: the natural
/// join of the box tables over shared wires, projected onto the domain then
/// codomain slots. Wires outside every box range over the whole universe.
pub fn direct_eval(d: &Wiring, interp: &RelStructure) -> Result<BTreeSet<Vec<String>>> {
    for b in d.boxes() {
        if let Some(&a) = interp.signature().get(&b.symbol) {
            if a != b.ports.len() {
                return Err(Error::ArityMismatch(format!(
                    "box `{}` has {} ports but its table has arity {a}",
                    b.symbol,
                    b.ports.len()
                )));
            }
        }
    }
    let universe = interp.universe().len();
    let mut rows: Vec<Vec<Option<usize>>> = vec![vec![None; d.wires()]];
    for b in d.boxes() {
        let Some(table) = interp.table(&b.symbol) else {
            return Ok(BTreeSet::new());
        };
        let mut joined = Vec::new();
        for row in &rows {
            'tuples: for t in table {
                let mut ext = row.clone();
                for (&w, &e) in b.ports.iter().zip(t) {
                    match ext[w] {
                        Some(v) if v != e => continue 'tuples,
                        _ => ext[w] = Some(e),
                    }
                }
                joined.push(ext);
            }
        }
        joined.sort();
        joined.dedup();
        rows = joined;
    }
    let boundary: Vec<usize> = d.domain().iter().chain(d.codomain()).copied().collect();
    let in_box: BTreeSet<usize> = d.boxes().iter().flat_map(|b| b.ports.iter().copied()).collect();
    let loose_bound = (0..d.wires()).any(|w| !in_box.contains(&w) && !boundary.contains(&w));
    if loose_bound && universe == 0 {
        return Ok(BTreeSet::new());
    }
    let mut out = BTreeSet::new();
    for row in rows {
        // unconstrained boundary wires range over the universe
        let loose: Vec<usize> = {
            let mut seen = BTreeSet::new();
            boundary
                .iter()
                .copied()
                .filter(|&w| row[w].is_none() && seen.insert(w))
                .collect()
        };
        let combos = universe.checked_pow(loose.len() as u32).expect("result fits in memory");
        for mut code in 0..combos {
            let mut full = row.clone();
            for &w in &loose {
                full[w] = Some(code % universe);
                code /= universe;
            }
            out.insert(
                boundary
                    .iter()
                    .map(|&w| interp.universe()[full[w].expect("bound")].clone())
                    .collect(),
            );
        }
    }
    Ok(out)
}
