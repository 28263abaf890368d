//! Normal subgroups and direct-product decomposition.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group_core::{generate, CayleyGroup, ElementSet};

/// Largest order for which normal subgroups are enumerated.
pub const INDECOMPOSABLE_CAP: usize = 128;

/// All normal subgroups, found as joins of conjugacy classes, sorted by size
/// then by least differing element.
pub fn normal_subgroups(g: &CayleyGroup) -> Result<Vec<ElementSet>> {
    let n = g.order();
    if n > INDECOMPOSABLE_CAP {
        return Err(Error::OrderCap {
            order: n,
            cap: INDECOMPOSABLE_CAP,
        });
    }
    let classes = g.conjugacy_classes();
    let trivial = ElementSet::from_indices(n, [0]);
    let mut seen: HashSet<ElementSet> = HashSet::from([trivial.clone()]);
    let mut found = vec![trivial];
    let mut i = 0;
    while i < found.len() {
        let current = found[i].clone();
        i += 1;
        for class in classes {
            if current.contains(class[0]) {
                continue;
            }
            let mut gens: Vec<usize> = current.iter().collect();
            gens.extend(class);
            let next = generate(g, &gens);
            if seen.insert(next.clone()) {
                found.push(next);
            }
        }
    }
    found.sort_by_key(|s| (s.len(), s.to_vec()));
    Ok(found)
}

/// A pair of nontrivial normal subgroups `(A, B)` with `G = A x B`, taking
/// the smallest possible `A`.
fn split(g: &CayleyGroup, normals: &[ElementSet]) -> Option<(ElementSet, ElementSet)> {
    let n = g.order();
    for a in normals {
        if a.len() == 1 || a.len() == n {
            continue;
        }
        let want = n / a.len();
        if let Some(b) = normals
            .iter()
            .find(|b| b.len() == want && b.intersection_len(a) == 1)
        {
            return Some((a.clone(), b.clone()));
        }
    }
    None
}

/// True unless `G` is a direct product of two nontrivial subgroups.
pub fn is_indecomposable(g: &CayleyGroup) -> Result<bool> {
    if g.is_abelian() {
        // an abelian 2-group is indecomposable exactly when it is cyclic
        return Ok(g.exponent() as usize == g.order());
    }
    let normals = normal_subgroups(g)?;
    Ok(split(g, &normals).is_none())
}

/// Splits `G` into indecomposable direct factors, returned as subgroups of
/// `G` in the order found. The trivial group has no factors.
pub fn direct_factors(g: &CayleyGroup) -> Result<Vec<ElementSet>> {
    let n = g.order();
    if n == 1 {
        return Ok(Vec::new());
    }
    let normals = normal_subgroups(g)?;
    let mut pending = vec![ElementSet::full(n)];
    let mut done = Vec::new();
    while let Some(h) = pending.pop() {
        // normal subgroups of a direct factor that are normal in G suffice:
        // a direct factor of a direct factor is normal in G
        let inside: Vec<ElementSet> = normals.iter().filter(|s| s.is_subset(&h)).cloned().collect();
        match split_within(g, &h, &inside) {
            Some((a, b)) => {
                pending.push(b);
                pending.push(a);
            }
            None => done.push(h),
        }
    }
    Ok(done)
}

fn split_within(g: &CayleyGroup, h: &ElementSet, normals: &[ElementSet]) -> Option<(ElementSet, ElementSet)> {
    let size = h.len();
    for a in normals {
        if a.len() == 1 || a.len() == size {
            continue;
        }
        let want = size / a.len();
        for b in normals.iter().filter(|b| b.len() == want && b.intersection_len(a) == 1) {
            if commute(g, a, b) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

fn commute(g: &CayleyGroup, a: &ElementSet, b: &ElementSet) -> bool {
    a.iter().all(|x| b.iter().all(|y| g.mul(x, y) == g.mul(y, x)))
}
