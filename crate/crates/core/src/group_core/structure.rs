use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_core::{CayleyGroup, ElementSet, Generator, MAX_ORDER};

/// Summary of the structural data consumed by the screeners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub order: usize,
    pub exponent: u32,
    pub nilpotency_class: u32,
    pub center: Vec<usize>,
    pub center_invariants: Vec<u64>,
    pub abelian_invariants: Vec<u64>,
    /// `None` when the group is too large for the normal-subgroup search.
    pub indecomposable: Option<bool>,
    pub minimal_generator_count: usize,
    pub derived_subgroup_order: usize,
    pub generators: Vec<String>,
}

pub fn structure_report(g: &CayleyGroup) -> StructureReport {
    let center: ElementSet = ElementSet::from_indices(g.order(), g.center().iter().copied());
    StructureReport {
        order: g.order(),
        exponent: g.exponent(),
        nilpotency_class: nilpotency_class(g),
        center: g.center().to_vec(),
        center_invariants: subset_abelian_invariants(g, &center),
        abelian_invariants: abelian_invariants(g).unwrap_or_default(),
        indecomposable: crate::group_core::is_indecomposable(g).ok(),
        minimal_generator_count: minimal_generators(g).len(),
        derived_subgroup_order: derived_subgroup(g).len(),
        generators: g.generators().iter().map(|x| x.name.clone()).collect(),
    }
}

/// Subgroup generated by a list of elements; redundant generators are
/// skipped so the closure work stays proportional to the result.
pub fn generate(g: &CayleyGroup, gens: &[usize]) -> ElementSet {
    let mut current = ElementSet::from_indices(g.order(), [0]);
    let mut basis: Vec<usize> = Vec::new();
    for &x in gens {
        if !current.contains(x) {
            basis.push(x);
            current = g.subgroup(&basis);
        }
    }
    current
}

/// Length of the upper central series; the trivial group has class 0.
pub fn nilpotency_class(g: &CayleyGroup) -> u32 {
    let n = g.order();
    if n == 1 {
        return 0;
    }
    let mut zi = ElementSet::from_indices(n, [0]);
    let mut class = 0;
    while zi.len() < n {
        let next: Vec<usize> = (0..n)
            .filter(|&x| (0..n).all(|y| zi.contains(g.commutator(x, y))))
            .collect();
        let next = ElementSet::from_indices(n, next);
        if next.len() == zi.len() {
            // not nilpotent; cannot happen for 2-groups
            return u32::MAX;
        }
        zi = next;
        class += 1;
    }
    class
}

/// Least `N >= 0` with `b^(2^N)` in `<a>` for every `b` centralizing `a`.
pub fn n_a(g: &CayleyGroup, a: usize) -> u32 {
    let cyclic = g.cyclic_subgroup(a);
    let cent = g.centralizer(a);
    let mut n = 0;
    loop {
        let e = 1i64 << n;
        if cent.iter().all(|&b| cyclic.contains(g.pow(b, e))) {
            return n;
        }
        n += 1;
    }
}

/// For 2-groups the Frattini subgroup is generated by the squares.
pub fn frattini_subgroup(g: &CayleyGroup) -> ElementSet {
    let squares: Vec<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
    generate(g, &squares)
}

pub fn derived_subgroup(g: &CayleyGroup) -> ElementSet {
    let n = g.order();
    let mut comms = Vec::new();
    for x in 0..n {
        for y in 0..n {
            comms.push(g.commutator(x, y));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    generate(g, &comms)
}

/// Greedy minimal generating sequence: elements taken in index order that are
/// independent modulo the Frattini subgroup.
pub fn minimal_generators(g: &CayleyGroup) -> Vec<usize> {
    minimal_generators_from(g, 0..g.order())
}

/// Same greedy rule over a caller-chosen candidate order.
pub fn minimal_generators_from(g: &CayleyGroup, candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let phi = frattini_subgroup(g);
    let mut span = phi.clone();
    let mut chosen = Vec::new();
    for x in candidates {
        if span.len() == g.order() {
            break;
        }
        if !span.contains(x) {
            chosen.push(x);
            let mut gens: Vec<usize> = phi.iter().collect();
            gens.extend(&chosen);
            span = generate(g, &gens);
        }
    }
    chosen
}

/// Invariant factors (descending) of an abelian group; empty for the trivial
/// group.
pub fn abelian_invariants(g: &CayleyGroup) -> Result<Vec<u64>> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    Ok(subset_abelian_invariants(g, &ElementSet::full(g.order())))
}

/// Invariant factors of an abelian 2-subgroup `h` (the caller guarantees it
/// is an abelian subgroup).
///
/// For an abelian 2-group with cyclic factors `2^e_1 >= 2^e_2 >= ...`, the
/// number of elements killed by `2^k` is `2^(sum min(k, e_i))`, so the
/// successive differences of those logarithms count the factors with
/// `e_i >= k`.
pub fn subset_abelian_invariants(g: &CayleyGroup, h: &ElementSet) -> Vec<u64> {
    let elems: Vec<usize> = h.iter().collect();
    let max_e = elems
        .iter()
        .map(|&x| g.element_order(x).trailing_zeros())
        .max()
        .unwrap_or(0);
    let mut logs = vec![0u32];
    for k in 1..=max_e {
        let count = elems
            .iter()
            .filter(|&&x| g.element_order(x).trailing_zeros() <= k)
            .count();
        logs.push(count.trailing_zeros());
    }
    // at_least[k] = number of factors with exponent >= k
    let at_least: Vec<u32> = (1..=max_e as usize).map(|k| logs[k] - logs[k - 1]).collect();
    let mut out = Vec::new();
    for k in (1..=max_e as usize).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        for _ in 0..exactly {
            out.push(1u64 << k);
        }
    }
    out
}

/// Quotient by a normal subgroup. Cosets are numbered by their least element,
/// so the identity coset is 0. Returns the group and the coset of each
/// element; the least element of each coset is its representative.
pub fn quotient_group(g: &CayleyGroup, normal: &ElementSet) -> Result<(CayleyGroup, Vec<usize>, Vec<usize>)> {
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for h in normal.iter() {
            let y = g.mul(x, h);
            if coset_of[y] != usize::MAX && coset_of[y] != id {
                return Err(Error::InvalidArgument("subgroup is not normal".into()));
            }
            coset_of[y] = id;
        }
    }
    let q = reps.len();
    let mut mul = vec![0; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            mul[i * q + j] = coset_of[g.mul(a, b)];
        }
    }
    // normality check: left and right cosets agree
    for x in 0..n {
        for h in normal.iter() {
            if !normal.contains(g.conjugate(h, x)) {
                return Err(Error::InvalidArgument("subgroup is not normal".into()));
            }
        }
    }
    let gens: Vec<Generator> = g
        .generators()
        .iter()
        .filter(|gen| coset_of[gen.element] != 0)
        .map(|gen| Generator {
            name: gen.name.clone(),
            element: coset_of[gen.element],
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    let gens: Vec<Generator> = gens.into_iter().filter(|x| seen.insert(x.element)).collect();
    let group = CayleyGroup::from_table(q, mul, gens)?;
    Ok((group, coset_of, reps))
}

/// A subgroup as a group in its own right, with the embedding into `g`.
/// Element 0 of the result is the identity; the others follow index order.
pub fn subgroup_as_group(g: &CayleyGroup, h: &ElementSet) -> Result<(CayleyGroup, Vec<usize>)> {
    let elems: Vec<usize> = h.iter().collect();
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &x) in elems.iter().enumerate() {
        pos[x] = i;
    }
    let k = elems.len();
    let mut mul = vec![0; k * k];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            let p = pos[g.mul(a, b)];
            if p == usize::MAX {
                return Err(Error::InvalidArgument("set is not closed under multiplication".into()));
            }
            mul[i * k + j] = p;
        }
    }
    let group = CayleyGroup::from_table(k, mul, Vec::new())?;
    Ok((group, elems))
}

/// Componentwise product; element `(g, h)` has index `g * |H| + h`.
/// Generator names of the right factor that clash with the left get a `_k`
/// suffix.
pub fn direct_product(left: &CayleyGroup, right: &CayleyGroup) -> Result<CayleyGroup> {
    let (n, m) = (left.order(), right.order());
    let order = n * m;
    if order > MAX_ORDER {
        return Err(Error::OrderCap { order, cap: MAX_ORDER });
    }
    let mut mul = vec![0; order * order];
    for a in 0..n {
        for b in 0..m {
            let x = a * m + b;
            for c in 0..n {
                let ac = left.mul(a, c) * m;
                for d in 0..m {
                    mul[x * order + c * m + d] = ac + right.mul(b, d);
                }
            }
        }
    }
    let mut gens: Vec<Generator> = left
        .generators()
        .iter()
        .map(|gen| Generator {
            name: gen.name.clone(),
            element: gen.element * m,
        })
        .collect();
    let left_gens = if left.generators().is_empty() {
        crate::group_core::minimal_generators(left)
            .into_iter()
            .enumerate()
            .map(|(i, e)| Generator {
                name: format!("g{}", i + 1),
                element: e * m,
            })
            .collect()
    } else {
        Vec::new()
    };
    gens.extend(left_gens);
    let right_gens: Vec<(String, usize)> = if right.generators().is_empty() {
        crate::group_core::minimal_generators(right)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (format!("g{}", i + 1), e))
            .collect()
    } else {
        right
            .generators()
            .iter()
            .map(|gen| (gen.name.clone(), gen.element))
            .collect()
    };
    for (name, e) in right_gens {
        let name = unique_name(&gens, name);
        gens.push(Generator { name, element: e });
    }
    CayleyGroup::from_table(order, mul, gens)
}

fn unique_name(existing: &[Generator], name: String) -> String {
    let taken = |s: &str| existing.iter().any(|g| g.name == s);
    if !taken(&name) {
        return name;
    }
    (2..)
        .map(|k| format!("{name}_{k}"))
        .find(|candidate| !taken(candidate))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::build_group;

    #[test]
    fn invariants_of_small_abelian_groups() {
        assert_eq!(abelian_invariants(&build_group("C8xC2").unwrap()).unwrap(), vec![8, 2]);
        assert_eq!(abelian_invariants(&build_group("C1").unwrap()).unwrap(), Vec::<u64>::new());
        assert_eq!(
            abelian_invariants(&build_group("C4xC2xC4").unwrap()).unwrap(),
            vec![4, 4, 2]
        );
        assert!(matches!(abelian_invariants(&build_group("Q8").unwrap()), Err(Error::NotAbelian)));
    }

    #[test]
    fn class_of_abelian_and_small_groups() {
        assert_eq!(nilpotency_class(&build_group("C4xC2").unwrap()), 1);
        assert_eq!(nilpotency_class(&build_group("M16").unwrap()), 2);
        assert_eq!(nilpotency_class(&build_group("D16").unwrap()), 3);
        assert_eq!(nilpotency_class(&build_group("C1").unwrap()), 0);
    }

    #[test]
    fn n_a_matches_hand_values() {
        let c8 = build_group("C8").unwrap();
        assert_eq!(n_a(&c8, c8.generators()[0].element), 0);
        let g = build_group("C8xC2").unwrap();
        let a = g.generator_by_name("a").unwrap();
        assert_eq!(g.element_order(a), 8);
        assert_eq!(n_a(&g, a), 1);
        let g = build_group("C16xC4xC2xC2").unwrap();
        let a = g.generators()[0].element;
        assert_eq!(g.element_order(a), 16);
        assert_eq!(n_a(&g, a), 2);
    }

    #[test]
    fn product_names_are_made_unique() {
        let g = build_group("C4xC4xC4").unwrap();
        let names: Vec<_> = g.generators().iter().map(|x| x.name.clone()).collect();
        assert_eq!(names, vec!["a", "a_2", "a_3"]);
    }

    #[test]
    fn quotient_by_center_of_d8() {
        let g = build_group("D8").unwrap();
        let z = ElementSet::from_indices(8, g.center().iter().copied());
        let (q, coset_of, _) = quotient_group(&g, &z).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        assert_eq!(coset_of[0], 0);
    }

    #[test]
    fn frattini_and_generators() {
        let g = build_group("C4xC4").unwrap();
        assert_eq!(frattini_subgroup(&g).len(), 4);
        assert_eq!(minimal_generators(&g).len(), 2);
        assert_eq!(minimal_generators(&build_group("C4").unwrap()).len(), 1);
        assert_eq!(minimal_generators(&build_group("M16").unwrap()).len(), 2);
    }
}
