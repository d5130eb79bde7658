use super::wiring::{BoxNode, Wiring};
use crate::cq::{Atom, Query};

/// Reads a wiring as a conjunctive query.
///
/// Each wire is a variable and each box an atom. The `m + n` boundary slots
/// (domain, then codomain) are the free columns `x0 … x{m+n-1}`; the other
/// wires are bound and numbered on from `x{m+n}` in wire order. A wire on
/// several boundary slots yields equated free columns.
pub fn lambda_translate(d: &Wiring) -> Query {
    let boundary: Vec<usize> = d.domain().iter().chain(d.codomain()).copied().collect();
    let mut names: Vec<Option<String>> = vec![None; d.wires()];
    for (k, &w) in boundary.iter().enumerate() {
        names[w].get_or_insert_with(|| format!("x{k}"));
    }
    let mut next = boundary.len();
    let variables: Vec<String> = names
        .into_iter()
        .map(|n| {
            n.unwrap_or_else(|| {
                next += 1;
                format!("x{}", next - 1)
            })
        })
        .collect();
    let free_names = (0..boundary.len()).map(|k| format!("x{k}")).collect();
    let atoms = d
        .boxes()
        .iter()
        .map(|b| Atom {
            symbol: b.symbol.clone(),
            args: b.ports.clone(),
        })
        .collect();
    Query::new(variables, boundary, free_names, atoms).expect("wirings translate to well-formed queries")
}

/// Draws a query as a wiring `0 → |free|`: a wire per variable, a box per
/// atom, the free columns on the codomain.
pub fn theta_translate(q: &Query) -> Wiring {
    let boxes = q
        .atoms()
        .iter()
        .map(|a| BoxNode::new(a.symbol.clone(), a.args.clone()))
        .collect();
    Wiring::new(q.variables().len(), boxes, Vec::new(), q.free().to_vec())
        .expect("queries translate to well-formed wirings")
}
