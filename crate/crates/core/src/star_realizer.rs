//! Realization of groups of exponent at most 4 in characteristic 2.
//!
//! A composition basis `x_1, ..., x_k` (every element is uniquely
//! `x_1^d_1 ... x_k^d_k` with `d_i` in `{0, 1}`) turns `G` into an
//! elementary abelian group under `a * b`, the XOR of exponent vectors. When
//! `*` satisfies
//!
//! ```text
//! (1)  (c (a*b)) * c = (c a) * (c b)
//! (2)  ((a*b) c) * c = (a c) * (b c)
//! ```
//!
//! the even-size subsets of `G` whose `*`-sum is the identity span a
//! two-sided ideal `I` of `Z_2[G]` with `(Z_2[G] / I)^x = G`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::{Certificate, Method, Realization};
use crate::error::{Error, Result};
use crate::group_core::{is_isomorphic, quotient_group, CayleyGroup, ElementSet, GroupSpec};
use crate::group_ring::linalg::{BitRow, Gf2Basis};
use crate::group_ring::{GroupRing, IdealBasis, QuotientRing, UnitGroup};

/// Default number of basis orderings tried before giving up.
pub const DEFAULT_STAR_ATTEMPTS: u32 = 64;

/// A composition basis of `G`. `elements[r..]` is a basis of the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PcSequence {
    pub elements: Vec<usize>,
    pub split: usize,
}

/// Exponent-vector encoding of a composition basis. Bit `i` of `encode[g]`
/// is the exponent of `x_(i+1)` in the normal form of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarTable {
    bits: u32,
    encode: Vec<u32>,
    decode: Vec<usize>,
}

impl StarTable {
    pub fn from_sequence(g: &CayleyGroup, seq: &PcSequence) -> Result<Self> {
        let k = seq.elements.len() as u32;
        if 1usize << k != g.order() {
            return Err(Error::InvalidArgument(format!(
                "sequence has {k} elements for a group of order {}",
                g.order()
            )));
        }
        let mut decode = vec![0usize; g.order()];
        let mut encode = vec![u32::MAX; g.order()];
        for (v, slot) in decode.iter_mut().enumerate() {
            let mut x = 0;
            for (i, &e) in seq.elements.iter().enumerate() {
                if v >> i & 1 == 1 {
                    x = g.mul(x, e);
                }
            }
            if encode[x] != u32::MAX {
                return Err(Error::InvalidArgument("normal forms are not unique".into()));
            }
            encode[x] = v as u32;
            *slot = x;
        }
        Ok(StarTable { bits: k, encode, decode })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn encode(&self, x: usize) -> u32 {
        self.encode[x]
    }

    pub fn decode(&self, v: u32) -> usize {
        self.decode[v as usize]
    }

    #[inline]
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.decode[(self.encode[a] ^ self.encode[b]) as usize]
    }
}

/// Which identity fails at a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub first_fails: bool,
    pub second_fails: bool,
}

/// Evaluates both identities at one triple.
pub fn check_triple(g: &CayleyGroup, t: &StarTable, a: usize, b: usize, c: usize) -> Option<Violation> {
    let ab = t.star(a, b);
    let first = t.star(g.mul(c, ab), c) == t.star(g.mul(c, a), g.mul(c, b));
    let second = t.star(g.mul(ab, c), c) == t.star(g.mul(a, c), g.mul(b, c));
    (!first || !second).then_some(Violation {
        a,
        b,
        c,
        first_fails: !first,
        second_fails: !second,
    })
}

/// Exhaustive check over all triples; returns the lexicographically least
/// violation. With `workers > 1` the first coordinate is split across a
/// thread pool; the answer does not depend on the worker count.
pub fn verify_star_conditions(g: &CayleyGroup, t: &StarTable, workers: usize) -> Option<Violation> {
    let n = g.order();
    let scan = |a: usize| (0..n).find_map(|b| (0..n).find_map(|c| check_triple(g, t, a, b, c)));
    if workers <= 1 {
        return (0..n).find_map(scan);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..n).into_par_iter().find_map_first(scan)),
        Err(_) => (0..n).find_map(scan),
    }
}

/// Bijection of `0..n` used to vary tie-breaking between attempts:
/// `x -> (2t+1) x + t mod n` with 0 kept fixed.
fn candidate_order(n: usize, attempt: u32) -> Vec<usize> {
    let t = attempt as usize;
    (0..n).map(|x| ((2 * t + 1) * x + t) % n).filter(|&x| x != 0).collect()
}

/// A basis of an abelian subgroup `h`, as `(base, order)` pairs giving a
/// direct decomposition into cyclic factors. Bases are taken greedily with
/// maximal order modulo the part already chosen, then corrected to have
/// exactly that order.
fn abelian_basis(g: &CayleyGroup, h: &ElementSet, order: &[usize]) -> Vec<(usize, u32)> {
    let mut chosen: Vec<(usize, u32)> = Vec::new();
    let mut span = ElementSet::from_indices(g.order(), [0]);
    while span.len() < h.len() {
        // order of x modulo span
        let rel = |x: usize| {
            let mut k = 1u32;
            let mut y = x;
            while !span.contains(y) {
                y = g.mul(y, x);
                k += 1;
            }
            k
        };
        let best = order
            .iter()
            .enumerate()
            .filter(|&(_, &x)| h.contains(x) && !span.contains(x))
            .max_by_key(|&(pos, &x)| (rel(x), std::cmp::Reverse(pos)))
            .map(|(_, &x)| x)
            .unwrap();
        let k = rel(best);
        let fixed = span
            .iter()
            .map(|s| g.mul(best, s))
            .find(|&y| g.pow(y, k as i64) == 0)
            .expect("a maximal-order element lifts to a complement generator");
        chosen.push((fixed, k));
        let gens: Vec<usize> = chosen.iter().map(|&(x, _)| x).collect();
        span = g.subgroup(&gens);
    }
    chosen
}

/// Expands `(base, order)` pairs into `base, base^2, base^4, ...`.
fn expand_powers(g: &CayleyGroup, basis: &[(usize, u32)]) -> Vec<usize> {
    let mut out = Vec::new();
    for &(x, k) in basis {
        let mut y = x;
        for _ in 0..k.trailing_zeros() {
            out.push(y);
            y = g.mul(y, y);
        }
    }
    out
}

/// Completes a central composition basis. Candidates are tried in order;
/// a candidate is kept when it doubles the set of subset products.
fn central_basis(g: &CayleyGroup, center: &ElementSet, candidates: &[usize]) -> Vec<usize> {
    let mut products = ElementSet::from_indices(g.order(), [0]);
    let mut chosen = Vec::new();
    for &c in candidates {
        if products.len() == center.len() {
            break;
        }
        if !center.contains(c) {
            continue;
        }
        let shifted: Vec<usize> = products.iter().map(|p| g.mul(c, p)).collect();
        if shifted.iter().all(|&y| !products.contains(y)) {
            for y in shifted {
                products.insert(y);
            }
            chosen.push(c);
        }
    }
    chosen
}

/// Composition basis of `g`: lifts of a basis of `G / Z(G)` (recursively),
/// then a central basis preferring squares and commutators of the lifts.
fn pc_bases(g: &CayleyGroup, attempt: u32) -> Result<Vec<usize>> {
    let n = g.order();
    let order = candidate_order(n, attempt);
    let center = ElementSet::from_indices(n, g.center().iter().copied());
    if g.is_abelian() {
        let basis = abelian_basis(g, &center, &order);
        // generators first, then their squares
        let mut out: Vec<usize> = basis.iter().map(|&(x, _)| x).collect();
        let expanded = expand_powers(g, &basis);
        out.extend(expanded.into_iter().filter(|x| !basis.iter().any(|&(b, _)| b == *x)));
        return Ok(out);
    }
    let (q, _, reps) = quotient_group(g, &center)?;
    let upper = pc_bases(&q, attempt)?;
    let lifted: Vec<usize> = upper.iter().map(|&y| reps[y]).collect();
    let mut candidates: Vec<usize> = lifted.iter().map(|&x| g.mul(x, x)).collect();
    for (j, &xj) in lifted.iter().enumerate() {
        for &xi in &lifted[..j] {
            candidates.push(g.commutator(xj, xi));
        }
    }
    candidates.extend(order.iter().copied());
    let mut out = lifted;
    out.extend(central_basis(g, &center, &candidates));
    Ok(out)
}

/// Composition basis with the center last, varying tie-breaks by `attempt`.
pub fn pc_sequence_attempt(g: &CayleyGroup, attempt: u32) -> Result<PcSequence> {
    let elements = pc_bases(g, attempt)?;
    let center_rank = g.center().len().trailing_zeros() as usize;
    let seq = PcSequence {
        split: elements.len() - center_rank,
        elements,
    };
    // normal forms are checked exhaustively here
    StarTable::from_sequence(g, &seq)?;
    Ok(seq)
}

pub fn pc_sequence(g: &CayleyGroup) -> Result<PcSequence> {
    pc_sequence_attempt(g, 0)
}

/// Kernel of `v -> (augmentation mod 2, *-sum of the support)` on
/// `GF(2)^G`, verified to be a two-sided ideal of `Z_2[G]`.
pub fn complement_ideal(ring: &GroupRing, t: &StarTable) -> Result<IdealBasis> {
    if ring.m() != 1 {
        return Err(Error::InvalidArgument("the star construction works in characteristic 2".into()));
    }
    let n = ring.dimension();
    let mut map = Gf2Basis::new(n);
    map.insert(&BitRow::from_bits(&vec![1u8; n]));
    for bit in 0..t.bits() {
        let row: Vec<u8> = (0..n).map(|g| (t.encode(g) >> bit & 1) as u8).collect();
        map.insert(&BitRow::from_bits(&row));
    }
    let kernel = map.null_space();
    let rows: Vec<_> = kernel
        .rows()
        .iter()
        .map(|r| ring.element(&r.to_bits(n).iter().map(|&b| b as u64).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut ideal = IdealBasis::span_of(ring, &rows)?;
    if !ideal.verify_closed(ring) {
        return Err(Error::InvariantViolation(
            "kernel of the star map is not a two-sided ideal".into(),
        ));
    }
    Ok(ideal)
}

/// Output of the full pipeline, with the intermediate data kept for
/// inspection.
pub struct StarRealization {
    pub sequence: PcSequence,
    pub attempts: u32,
    pub ideal: IdealBasis,
    pub quotient: QuotientRing,
    pub units: UnitGroup,
    pub certificate: Certificate,
}

/// Options for [`realize_exponent4`].
#[derive(Clone, Copy, Debug)]
pub struct StarOptions {
    pub attempts: u32,
    pub workers: usize,
}

impl Default for StarOptions {
    fn default() -> Self {
        StarOptions {
            attempts: DEFAULT_STAR_ATTEMPTS,
            workers: 1,
        }
    }
}

/// Runs basis, star table, identity check, kernel ideal, quotient, units and
/// isomorphism, and packages a certificate.
pub fn realize_exponent4(spec: &GroupSpec, options: StarOptions) -> Result<StarRealization> {
    let g = Arc::new(spec.build()?);
    if g.exponent() > 4 {
        return Err(Error::InvalidArgument(format!(
            "{spec} has exponent {}; the star construction needs exponent at most 4 (run `screen`)",
            g.exponent()
        )));
    }
    let mut found = None;
    for attempt in 0..options.attempts.max(1) {
        let Ok(seq) = pc_sequence_attempt(&g, attempt) else {
            continue;
        };
        let table = StarTable::from_sequence(&g, &seq)?;
        if verify_star_conditions(&g, &table, options.workers).is_none() {
            found = Some((seq, table, attempt + 1));
            break;
        }
    }
    let (sequence, table, attempts) = found.ok_or_else(|| {
        Error::InvariantViolation(format!(
            "no basis ordering satisfied the identities in {} attempts",
            options.attempts
        ))
    })?;
    let ring = GroupRing::new(g.clone(), 1)?;
    let ideal = complement_ideal(&ring, &table)?;
    let quotient = QuotientRing::new(ring.clone(), ideal.clone())?;
    let units = quotient.unit_group()?;
    let iso = natural_embedding(&g, &quotient, &units)
        .map(Ok)
        .unwrap_or_else(|| {
            is_isomorphic(&g, &units.group)?
                .ok_or_else(|| Error::InvariantViolation("unit group is not isomorphic to G".into()))
        })?;
    let certificate = Certificate::assemble(Realization {
        group_spec: spec.to_string(),
        ring_group_spec: None,
        ring: &ring,
        ideal: &ideal,
        ideal_generators: None,
        target: &g,
        units: &units,
        iso: &iso,
        method: Method::Star,
        star_attempts: Some(attempts),
    });
    Ok(StarRealization {
        sequence,
        attempts,
        ideal,
        quotient,
        units,
        certificate,
    })
}

/// `g -> g + I` as a map into the unit group, if it is an isomorphism.
pub fn natural_embedding(g: &CayleyGroup, q: &QuotientRing, units: &UnitGroup) -> Option<Vec<usize>> {
    if units.group.order() != g.order() {
        return None;
    }
    let index: std::collections::HashMap<&[u8], usize> = units
        .residues
        .iter()
        .enumerate()
        .map(|(i, r)| (r.coeffs(), i))
        .collect();
    let mut map = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let r = q.reduce(&q.ring().basis_element(x)).ok()?;
        map.push(*index.get(r.coeffs())?);
    }
    crate::group_core::verify_isomorphism(g, &units.group, &map).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::{build_group, parse_group_spec};

    #[test]
    fn sequences_of_small_groups() {
        let c2 = build_group("C2").unwrap();
        let s = pc_sequence(&c2).unwrap();
        assert_eq!(s.elements.len(), 1);
        assert_eq!(s.split, 0);

        let c4 = build_group("C4").unwrap();
        let s = pc_sequence(&c4).unwrap();
        let a = s.elements[0];
        assert_eq!(c4.element_order(a), 4);
        assert_eq!(s.elements, vec![a, c4.mul(a, a)]);

        let q8 = build_group("Q8").unwrap();
        let s = pc_sequence(&q8).unwrap();
        assert_eq!(s.elements.len(), 3);
        assert_eq!(s.split, 2);
        assert!(q8.center().contains(&s.elements[2]));
    }

    #[test]
    fn star_in_c4() {
        let c4 = build_group("C4").unwrap();
        let t = StarTable::from_sequence(&c4, &pc_sequence(&c4).unwrap()).unwrap();
        let a = c4.generators()[0].element;
        let a2 = c4.mul(a, a);
        let a3 = c4.mul(a, a2);
        assert_eq!(t.star(a, a3), a2);
        for x in 0..4 {
            assert_eq!(t.star(x, x), 0);
            assert_eq!(t.star(0, x), x);
        }
    }

    #[test]
    fn c8_power_basis_fails_at_the_classic_triple() {
        let c8 = build_group("C8").unwrap();
        let a = c8.generators()[0].element;
        let seq = PcSequence {
            elements: vec![a, c8.pow(a, 2), c8.pow(a, 4)],
            split: 0,
        };
        let t = StarTable::from_sequence(&c8, &seq).unwrap();
        let v = check_triple(&c8, &t, a, c8.pow(a, 3), a).unwrap();
        assert!(v.first_fails);
        assert!(verify_star_conditions(&c8, &t, 1).is_some());
    }

    #[test]
    fn worker_count_does_not_change_the_answer() {
        let c8 = build_group("C8").unwrap();
        let t = StarTable::from_sequence(&c8, &pc_sequence(&c8).unwrap()).unwrap();
        assert_eq!(verify_star_conditions(&c8, &t, 1), verify_star_conditions(&c8, &t, 4));
    }

    #[test]
    fn kernel_dimensions() {
        for (spec, dim) in [("C2", 0), ("C4", 1), ("Q8", 4)] {
            let g = Arc::new(build_group(spec).unwrap());
            let t = StarTable::from_sequence(&g, &pc_sequence(&g).unwrap()).unwrap();
            let ring = GroupRing::new(g, 1).unwrap();
            assert_eq!(complement_ideal(&ring, &t).unwrap().size_log2(), dim, "{spec}");
        }
    }

    #[test]
    fn realize_small_groups() {
        for spec in ["C2xC2", "Q8", "D8"] {
            let r = realize_exponent4(&parse_group_spec(spec).unwrap(), StarOptions::default()).unwrap();
            assert_eq!(r.quotient.size(), Some(2 * r.units.group.order()));
        }
        assert!(realize_exponent4(&parse_group_spec("C8").unwrap(), StarOptions::default()).is_err());
    }
}
