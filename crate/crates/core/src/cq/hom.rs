//! Backtracking search for structure homomorphisms.
//!
//! Candidate sets start from a generalised arc-consistency pass over every
//! source tuple. Elements are then bound in order of decreasing degree, and
//! each tuple is checked against the target table as soon as its last
//! element is bound.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use super::structure::{RelStructure, Tuple};
use crate::error::Result;

/// `mapping[x]` is the image of source element `x`.
pub type Mapping = Vec<usize>;

/// Partial assignment fixed in advance: source element → target element.
pub type Pins = BTreeMap<usize, usize>;

static EMPTY: BTreeSet<Tuple> = BTreeSet::new();

pub(crate) struct Search<'a> {
    /// Source tuples with their target table.
    constraints: Vec<(&'a [usize], &'a BTreeSet<Tuple>)>,
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    /// Constraints whose last element is bound at each depth.
    checks: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    /// `None` when pins or arc consistency already rule out every map.
    /// `first` lists source elements to bind before all others.
    pub(crate) fn new(
        src: &'a RelStructure,
        dst: &'a RelStructure,
        pins: &Pins,
        first: &[usize],
    ) -> Result<Option<Self>> {
        src.check_compatible(dst.signature())?;
        let n = src.universe().len();
        let m = dst.universe().len();
        let constraints: Vec<(&[usize], &BTreeSet<Tuple>)> = src
            .tables()
            .iter()
            .flat_map(|(symbol, rows)| {
                let target = dst.table(symbol).unwrap_or(&EMPTY);
                rows.iter().map(move |t| (t.as_slice(), target))
            })
            .collect();

        let mut candidates: Vec<Vec<usize>> = vec![(0..m).collect(); n];
        for (&x, &y) in pins {
            if x >= n || y >= m {
                return Ok(None);
            }
            candidates[x].retain(|&c| c == y);
        }
        if !arc_consistency(&constraints, &mut candidates) {
            return Ok(None);
        }

        let mut degree = vec![0usize; n];
        for (t, _) in &constraints {
            for &x in t.iter() {
                degree[x] += 1;
            }
        }
        let rank = |x: &usize| (candidates[*x].len() != 1, std::cmp::Reverse(degree[*x]), *x);
        let mut head: Vec<usize> = first.to_vec();
        head.sort_by_key(rank);
        let mut tail: Vec<usize> = (0..n).filter(|x| !first.contains(x)).collect();
        tail.sort_by_key(rank);
        let order: Vec<usize> = head.into_iter().chain(tail).collect();

        let mut depth_of = vec![0; n];
        for (d, &x) in order.iter().enumerate() {
            depth_of[x] = d;
        }
        let mut checks = vec![Vec::new(); n];
        let mut ground = Vec::new();
        for (i, (t, _)) in constraints.iter().enumerate() {
            match t.iter().map(|&x| depth_of[x]).max() {
                Some(d) => checks[d].push(i),
                None => ground.push(i),
            }
        }
        // nullary tuples: the target table must contain `()`
        if ground.iter().any(|&i| !constraints[i].1.contains(&Vec::new())) {
            return Ok(None);
        }
        Ok(Some(Search {
            constraints,
            candidates,
            order,
            checks,
        }))
    }

    fn consistent(&self, depth: usize, mapping: &[usize]) -> bool {
        self.checks[depth].iter().all(|&i| {
            let (t, table) = self.constraints[i];
            let image: Tuple = t.iter().map(|&x| mapping[x]).collect();
            table.contains(&image)
        })
    }

    /// Visits every homomorphism in search order.
    pub(crate) fn for_each(&self, visit: &mut dyn FnMut(&Mapping) -> ControlFlow<()>) {
        let mut mapping = vec![usize::MAX; self.order.len()];
        let _ = self.walk(0, self.order.len(), &mut mapping, visit);
    }

    /// Visits each distinct restriction to the first `cut` elements of the
    /// search order that extends to a homomorphism. The visited mapping is
    /// one such extension.
    pub(crate) fn for_each_projection(
        &self,
        cut: usize,
        visit: &mut dyn FnMut(&Mapping) -> ControlFlow<()>,
    ) {
        let mut mapping = vec![usize::MAX; self.order.len()];
        let _ = self.walk(0, cut, &mut mapping, visit);
    }

    fn walk(
        &self,
        depth: usize,
        cut: usize,
        mapping: &mut Mapping,
        visit: &mut dyn FnMut(&Mapping) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if depth == cut {
            if depth == self.order.len() || self.extend(depth, mapping) {
                visit(mapping)?;
            }
            return ControlFlow::Continue(());
        }
        let x = self.order[depth];
        for &y in &self.candidates[x] {
            mapping[x] = y;
            if self.consistent(depth, mapping) {
                self.walk(depth + 1, cut, mapping, visit)?;
            }
        }
        mapping[x] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn extend(&self, depth: usize, mapping: &mut Mapping) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        for &y in &self.candidates[x] {
            mapping[x] = y;
            if self.consistent(depth, mapping) && self.extend(depth + 1, mapping) {
                return true;
            }
        }
        mapping[x] = usize::MAX;
        false
    }

    pub(crate) fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Shrinks candidate sets until every candidate of every element is
/// supported by some target tuple in each constraint it occurs in.
fn arc_consistency(constraints: &[(&[usize], &BTreeSet<Tuple>)], candidates: &mut [Vec<usize>]) -> bool {
    let mut changed = true;
    while changed {
        changed = false;
        for (t, table) in constraints {
            let mut support: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); t.len()];
            for row in table.iter() {
                let fits = t.iter().enumerate().all(|(p, &x)| {
                    candidates[x].contains(&row[p])
                        && t.iter()
                            .enumerate()
                            .all(|(q, &x2)| x2 != x || row[q] == row[p])
                });
                if fits {
                    for (p, &e) in row.iter().enumerate() {
                        support[p].insert(e);
                    }
                }
            }
            for (p, &x) in t.iter().enumerate() {
                let before = candidates[x].len();
                candidates[x].retain(|c| support[p].contains(c));
                if candidates[x].is_empty() {
                    return false;
                }
                changed |= candidates[x].len() != before;
            }
        }
    }
    true
}

/// Some homomorphism `src → dst` extending `pins`, if one exists.
pub fn find_homomorphism(src: &RelStructure, dst: &RelStructure, pins: &Pins) -> Result<Option<Mapping>> {
    let Some(search) = Search::new(src, dst, pins, &[])? else {
        return Ok(None);
    };
    let mut found = None;
    search.for_each(&mut |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Up to `limit` homomorphisms `src → dst` extending `pins`, in search order.
pub fn enumerate_homomorphisms(
    src: &RelStructure,
    dst: &RelStructure,
    pins: &Pins,
    limit: usize,
) -> Result<Vec<Mapping>> {
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    let Some(search) = Search::new(src, dst, pins, &[])? else {
        return Ok(out);
    };
    search.for_each(&mut |m| {
        out.push(m.clone());
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(out)
}

/// Checks the defining property of a homomorphism.
pub fn is_homomorphism(src: &RelStructure, dst: &RelStructure, mapping: &[usize]) -> bool {
    mapping.len() == src.universe().len()
        && mapping.iter().all(|&y| y < dst.universe().len())
        && src.tables().iter().all(|(symbol, rows)| {
            rows.iter().all(|t| {
                let image: Tuple = t.iter().map(|&x| mapping[x]).collect();
                dst.table(symbol).is_some_and(|table| table.contains(&image))
            })
        })
}
