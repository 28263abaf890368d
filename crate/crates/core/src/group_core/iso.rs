//! Isomorphism testing: invariant fingerprint, then backtracking over images
//! of a generating sequence.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group_core::{
    abelian_invariants, derived_subgroup, minimal_generators_from, nilpotency_class, CayleyGroup, ElementSet,
};

pub const DEFAULT_ISO_BUDGET: u64 = 10_000_000;

type Signature = (u32, usize, u32);

/// Element data preserved by isomorphisms: order, conjugacy class size and
/// number of square roots.
fn signatures(g: &CayleyGroup) -> Vec<Signature> {
    let n = g.order();
    let mut roots = vec![0u32; n];
    for x in 0..n {
        roots[g.mul(x, x)] += 1;
    }
    (0..n)
        .map(|x| {
            let class = &g.conjugacy_classes()[g.class_index(x)];
            (g.element_order(x), class.len(), roots[x])
        })
        .collect()
}

/// Isomorphism-invariant summary; unequal fingerprints prove
/// non-isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    order: usize,
    signature_counts: BTreeMap<Signature, usize>,
    center: usize,
    class: u32,
    derived: usize,
    invariants: Option<Vec<u64>>,
}

pub fn fingerprint(g: &CayleyGroup) -> Fingerprint {
    let mut signature_counts = BTreeMap::new();
    for s in signatures(g) {
        *signature_counts.entry(s).or_insert(0) += 1;
    }
    Fingerprint {
        order: g.order(),
        signature_counts,
        center: g.center().len(),
        class: nilpotency_class(g),
        derived: derived_subgroup(g).len(),
        invariants: abelian_invariants(g).ok(),
    }
}

/// Checks that `map` is a bijective homomorphism `g -> h` on all pairs.
pub fn verify_isomorphism(g: &CayleyGroup, h: &CayleyGroup, map: &[usize]) -> bool {
    let n = g.order();
    if h.order() != n || map.len() != n {
        return false;
    }
    let mut hit = ElementSet::new(n);
    for &y in map {
        if y >= n || !hit.insert(y) {
            return false;
        }
    }
    (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])))
}

pub fn is_isomorphic(g: &CayleyGroup, h: &CayleyGroup) -> Result<Option<Vec<usize>>> {
    is_isomorphic_with_budget(g, h, DEFAULT_ISO_BUDGET)
}

/// Returns a verified isomorphism `g -> h` as an image table, `None` when
/// the groups are not isomorphic, or `Undecided` once `budget` search nodes
/// are spent.
pub fn is_isomorphic_with_budget(g: &CayleyGroup, h: &CayleyGroup, budget: u64) -> Result<Option<Vec<usize>>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    if fingerprint(g) != fingerprint(h) {
        return Ok(None);
    }
    let sg = signatures(g);
    let sh = signatures(h);
    let mut frequency: BTreeMap<Signature, usize> = BTreeMap::new();
    for s in &sg {
        *frequency.entry(*s).or_insert(0) += 1;
    }
    // rarest signatures first keeps the branching factor small
    let mut candidates: Vec<usize> = (1..g.order()).collect();
    candidates.sort_by_key(|&x| (frequency[&sg[x]], x));
    let gens = minimal_generators_from(g, candidates);

    let mut search = Search {
        g,
        h,
        gens: &gens,
        images: Vec::new(),
        options: gens
            .iter()
            .map(|&x| (0..h.order()).filter(|&y| sh[y] == sg[x]).collect())
            .collect(),
        nodes: 0,
        budget,
    };
    match search.extend()? {
        Some(map) => {
            if verify_isomorphism(g, h, &map) {
                Ok(Some(map))
            } else {
                Err(Error::InvariantViolation("isomorphism witness failed verification".into()))
            }
        }
        None => Ok(None),
    }
}

struct Search<'a> {
    g: &'a CayleyGroup,
    h: &'a CayleyGroup,
    gens: &'a [usize],
    images: Vec<usize>,
    options: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn extend(&mut self) -> Result<Option<Vec<usize>>> {
        let k = self.images.len();
        if k == self.gens.len() {
            return Ok(self.partial_map(k));
        }
        for idx in 0..self.options[k].len() {
            let y = self.options[k][idx];
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Undecided { nodes: self.budget });
            }
            self.images.push(y);
            if self.partial_map(k + 1).is_some() {
                if let Some(map) = self.extend()? {
                    return Ok(Some(map));
                }
            }
            self.images.pop();
        }
        Ok(None)
    }

    /// Extends the first `k` generator images to the subgroup they generate.
    /// Fails if some Cayley-graph edge is inconsistent or two elements
    /// collide. For `k = gens.len()` the result is a full table.
    fn partial_map(&self, k: usize) -> Option<Vec<usize>> {
        let n = self.g.order();
        let mut map = vec![usize::MAX; n];
        let mut used = ElementSet::new(n);
        map[0] = 0;
        used.insert(0);
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for j in 0..k {
                let y = self.g.mul(x, self.gens[j]);
                let image = self.h.mul(map[x], self.images[j]);
                if map[y] == usize::MAX {
                    if !used.insert(image) {
                        return None;
                    }
                    map[y] = image;
                    queue.push(y);
                } else if map[y] != image {
                    return None;
                }
            }
        }
        if k == self.gens.len() && queue.len() != n {
            return None;
        }
        Some(map)
    }
}
