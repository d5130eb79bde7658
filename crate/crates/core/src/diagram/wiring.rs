use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::union_find::UnionFind;
use crate::error::{Error, Result};

/// Symbol arities.
pub type RelSignature = BTreeMap<String, usize>;

/// Merges `extra` into `sig`, failing on conflicting arities.
pub fn merge_signature(sig: &mut RelSignature, extra: &RelSignature) -> Result<()> {
    for (symbol, &arity) in extra {
        match sig.get(symbol) {
            Some(&a) if a != arity => {
                return Err(Error::SignatureMismatch {
                    symbol: symbol.clone(),
                    expected: a,
                    found: arity,
                })
            }
            _ => {
                sig.insert(symbol.clone(), arity);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BoxNode {
    pub symbol: String,
    pub ports: Vec<usize>,
}

impl BoxNode {
    pub fn new(symbol: impl Into<String>, ports: Vec<usize>) -> Self {
        BoxNode {
            symbol: symbol.into(),
            ports,
        }
    }
}

/// An arrow `m → n` of the free Cartesian bicategory, drawn as a hypergraph.
///
/// Wires are `0..wires`. A wire touched by several ports or boundary slots is
/// a Frobenius spider; a wire touched by nothing is a discarded unit, i.e. an
/// unconstrained existential variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wiring {
    wires: usize,
    boxes: Vec<BoxNode>,
    domain: Vec<usize>,
    codomain: Vec<usize>,
}

impl Wiring {
    pub fn new(
        wires: usize,
        boxes: Vec<BoxNode>,
        domain: Vec<usize>,
        codomain: Vec<usize>,
    ) -> Result<Self> {
        let mut arity = RelSignature::new();
        for b in &boxes {
            if let Some(&w) = b.ports.iter().find(|&&w| w >= wires) {
                return Err(Error::InvalidWiring(format!(
                    "box `{}` references wire {w} of {wires}",
                    b.symbol
                )));
            }
            merge_signature(&mut arity, &[(b.symbol.clone(), b.ports.len())].into())?;
        }
        if let Some(&w) = domain.iter().chain(&codomain).find(|&&w| w >= wires) {
            return Err(Error::InvalidWiring(format!(
                "boundary references wire {w} of {wires}"
            )));
        }
        Ok(Wiring {
            wires,
            boxes,
            domain,
            codomain,
        })
    }

    pub fn empty() -> Self {
        Wiring {
            wires: 0,
            boxes: Vec::new(),
            domain: Vec::new(),
            codomain: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Wiring {
            wires: n,
            boxes: Vec::new(),
            domain: (0..n).collect(),
            codomain: (0..n).collect(),
        }
    }

    /// A single box `symbol : 0 → arity`.
    pub fn generator(symbol: impl Into<String>, arity: usize) -> Self {
        Wiring {
            wires: arity,
            boxes: vec![BoxNode::new(symbol, (0..arity).collect())],
            domain: Vec::new(),
            codomain: (0..arity).collect(),
        }
    }

    /// One wire with `inputs` legs on the domain and `outputs` on the codomain.
    pub fn spider(inputs: usize, outputs: usize) -> Self {
        Wiring {
            wires: 1,
            boxes: Vec::new(),
            domain: vec![0; inputs],
            codomain: vec![0; outputs],
        }
    }

    /// `0 → 2n`, bending `n` wires: codomain `0..n` then `n-1..=0`.
    pub fn cap(n: usize) -> Self {
        Wiring {
            wires: n,
            boxes: Vec::new(),
            domain: Vec::new(),
            codomain: (0..n).chain((0..n).rev()).collect(),
        }
    }

    /// `2n → 0`, the transpose of [`Wiring::cap`].
    pub fn cup(n: usize) -> Self {
        Wiring {
            wires: n,
            boxes: Vec::new(),
            domain: (0..n).chain((0..n).rev()).collect(),
            codomain: Vec::new(),
        }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn boxes(&self) -> &[BoxNode] {
        &self.boxes
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn codomain(&self) -> &[usize] {
        &self.codomain
    }

    pub fn signature(&self) -> RelSignature {
        self.boxes
            .iter()
            .map(|b| (b.symbol.clone(), b.ports.len()))
            .collect()
    }

    /// Side-by-side composition: disjoint union, boundaries concatenated.
    pub fn tensor(&self, other: &Wiring) -> Wiring {
        let off = self.wires;
        let shift = |ws: &[usize]| ws.iter().map(|w| w + off).collect::<Vec<_>>();
        let mut boxes = self.boxes.clone();
        boxes.extend(
            other
                .boxes
                .iter()
                .map(|b| BoxNode::new(b.symbol.clone(), shift(&b.ports))),
        );
        let mut domain = self.domain.clone();
        domain.extend(shift(&other.domain));
        let mut codomain = self.codomain.clone();
        codomain.extend(shift(&other.codomain));
        Wiring {
            wires: self.wires + other.wires,
            boxes,
            domain,
            codomain,
        }
    }

    /// Sequential composition `self ; other`, gluing `self.codomain[k]` to
    /// `other.domain[k]`.
    pub fn compose(&self, other: &Wiring) -> Result<Wiring> {
        if self.codomain.len() != other.domain.len() {
            return Err(Error::BoundaryMismatch {
                left: self.codomain.len(),
                right: other.domain.len(),
            });
        }
        let joined = self.tensor(other);
        let off = self.wires;
        let mut uf = UnionFind::new(joined.wires);
        for (a, b) in self.codomain.iter().zip(&other.domain) {
            uf.union(*a, b + off);
        }
        let Quotient { mut wiring, relabel } = joined.quotient(&mut uf);
        wiring.domain = self.domain.iter().map(|&w| relabel[w]).collect();
        wiring.codomain = other.codomain.iter().map(|&w| relabel[w + off]).collect();
        Ok(wiring)
    }

    /// Identifies wires according to `uf`, keeping boundaries in place.
    pub(crate) fn quotient(&self, uf: &mut UnionFind) -> Quotient {
        let (relabel, wires) = uf.compact();
        let wiring = Wiring {
            wires,
            boxes: self
                .boxes
                .iter()
                .map(|b| BoxNode::new(b.symbol.clone(), b.ports.iter().map(|&w| relabel[w]).collect()))
                .collect(),
            domain: self.domain.iter().map(|&w| relabel[w]).collect(),
            codomain: self.codomain.iter().map(|&w| relabel[w]).collect(),
        };
        Quotient { wiring, relabel }
    }

    /// Identifies each listed pair of wires.
    pub fn merge_wires(&self, pairs: &[(usize, usize)]) -> Result<Wiring> {
        let mut uf = UnionFind::new(self.wires);
        for &(a, b) in pairs {
            if a >= self.wires || b >= self.wires {
                return Err(Error::InvalidWiring(format!("no wire pair ({a}, {b})")));
            }
            uf.union(a, b);
        }
        Ok(self.quotient(&mut uf).wiring)
    }

    /// Same arrow with boundary turned around: `n → m`.
    pub fn transpose(&self) -> Wiring {
        Wiring {
            wires: self.wires,
            boxes: self.boxes.clone(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        }
    }

    /// A relabelling that is stable under most wire renamings. Boundary wires
    /// are numbered first, then wires in order of the smallest box touching
    /// them. Equal canonical forms imply isomorphism; the converse can fail
    /// on symmetric diagrams, see [`Wiring::is_isomorphic`].
    pub fn canonical_form(&self) -> Wiring {
        let mut label = vec![usize::MAX; self.wires];
        let mut next = 0;
        let mut assign = |w: usize, label: &mut Vec<usize>| {
            if label[w] == usize::MAX {
                label[w] = next;
                next += 1;
            }
        };
        for &w in self.domain.iter().chain(&self.codomain) {
            assign(w, &mut label);
        }
        let mut pending: Vec<&BoxNode> = self.boxes.iter().collect();
        while !pending.is_empty() {
            let key = |b: &BoxNode, label: &[usize]| {
                (
                    b.symbol.clone(),
                    b.ports.iter().map(|&w| label[w]).collect::<Vec<_>>(),
                )
            };
            let (idx, _) = pending
                .iter()
                .enumerate()
                .min_by_key(|(_, b)| key(b, &label))
                .expect("nonempty");
            let b = pending.swap_remove(idx);
            for &w in &b.ports {
                assign(w, &mut label);
            }
        }
        for w in 0..self.wires {
            assign(w, &mut label);
        }
        let mut boxes: Vec<BoxNode> = self
            .boxes
            .iter()
            .map(|b| BoxNode::new(b.symbol.clone(), b.ports.iter().map(|&w| label[w]).collect()))
            .collect();
        boxes.sort();
        Wiring {
            wires: self.wires,
            boxes,
            domain: self.domain.iter().map(|&w| label[w]).collect(),
            codomain: self.codomain.iter().map(|&w| label[w]).collect(),
        }
    }

    /// Exact test for a boundary-preserving bijection of wires carrying the
    /// box multiset of `self` onto that of `other`.
    pub fn is_isomorphic(&self, other: &Wiring) -> bool {
        if self.wires != other.wires
            || self.boxes.len() != other.boxes.len()
            || self.domain.len() != other.domain.len()
            || self.codomain.len() != other.codomain.len()
        {
            return false;
        }
        let mut fwd = vec![usize::MAX; self.wires];
        let mut back = vec![usize::MAX; other.wires];
        let boundary = self
            .domain
            .iter()
            .zip(&other.domain)
            .chain(self.codomain.iter().zip(&other.codomain));
        for (&a, &b) in boundary {
            if !bind(&mut fwd, &mut back, a, b) {
                return false;
            }
        }
        let mut used = vec![false; other.boxes.len()];
        self.match_boxes(other, 0, &mut fwd, &mut back, &mut used)
    }

    fn match_boxes(
        &self,
        other: &Wiring,
        i: usize,
        fwd: &mut Vec<usize>,
        back: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let Some(b) = self.boxes.get(i) else {
            return true;
        };
        for j in 0..other.boxes.len() {
            let c = &other.boxes[j];
            if used[j] || c.symbol != b.symbol || c.ports.len() != b.ports.len() {
                continue;
            }
            let (saved_f, saved_b) = (fwd.clone(), back.clone());
            if b.ports.iter().zip(&c.ports).all(|(&x, &y)| bind(fwd, back, x, y)) {
                used[j] = true;
                if self.match_boxes(other, i + 1, fwd, back, used) {
                    return true;
                }
                used[j] = false;
            }
            *fwd = saved_f;
            *back = saved_b;
        }
        false
    }
}

fn bind(fwd: &mut [usize], back: &mut [usize], a: usize, b: usize) -> bool {
    match (fwd[a], back[b]) {
        (usize::MAX, usize::MAX) => {
            fwd[a] = b;
            back[b] = a;
            true
        }
        (x, y) => x == b && y == a,
    }
}

pub(crate) struct Quotient {
    pub wiring: Wiring,
    pub relabel: Vec<usize>,
}
