//! Non-realizability screens and characteristic constraints.
//!
//! Each rule inspects the group table only. Rules differ in how much they
//! exclude, so every fired rule carries its own [`Scope`].

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::group_core::{direct_factors, n_a, subset_abelian_invariants, CayleyGroup, ElementSet, GroupSpec,
    INDECOMPOSABLE_CAP};
use crate::group_ring::MAX_CHAR_EXPONENT;
use crate::star_realizer::{realize_exponent4, StarOptions};

/// What a refutation rules out, weakest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scope {
    #[serde(rename = "characteristic 2")]
    Characteristic2,
    #[serde(rename = "all characteristics 2^m")]
    AllCharacteristics,
    #[serde(rename = "any finite ring")]
    AnyFiniteRing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub rule: String,
    pub citation: String,
    pub scope: Scope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Realizable,
    NotRealizable,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub group: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<Scope>,
    pub reasons: Vec<Reason>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub allowed_characteristics: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

pub const RULE_CENTRAL_UNITS: &str = "central-scalar-units";
pub const RULE_EXPONENT_BOUND: &str = "exponent-bound";
pub const RULE_SELF_CENTRALIZING: &str = "self-centralizing-element";
pub const RULE_CENTRALIZER_POWERS: &str = "centralizer-power-depth";
pub const RULE_MAXIMAL_EXPONENT: &str = "maximal-exponent";
pub const RULE_NONABELIAN_FACTORS: &str = "nonabelian-indecomposable-factors";

/// Invariants of `Z_{2^m}^x`: trivial, `C2`, then `C_{2^(m-2)} x C2`.
pub fn scalar_unit_invariants(m: u32) -> Vec<u64> {
    match m {
        0 | 1 => Vec::new(),
        2 => vec![2],
        _ => vec![1 << (m - 2), 2],
    }
}

/// Whether an abelian 2-group embeds in another, both given by invariants.
/// Holds iff, after sorting in decreasing order, the first list is no longer
/// and dominated entrywise.
pub fn embeds(small: &[u64], big: &[u64]) -> bool {
    let mut s = small.to_vec();
    let mut b = big.to_vec();
    s.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable_by(|x, y| y.cmp(x));
    s.len() <= b.len() && s.iter().zip(&b).all(|(x, y)| x <= y)
}

fn center_invariants(g: &CayleyGroup) -> Vec<u64> {
    let z = ElementSet::from_indices(g.order(), g.center().iter().copied());
    subset_abelian_invariants(g, &z)
}

fn candidates_up_to(g: &CayleyGroup, max_m: u32) -> Vec<u32> {
    let z = center_invariants(g);
    (1..=max_m).filter(|&m| embeds(&scalar_unit_invariants(m), &z)).collect()
}

/// Values of `m` in `1..=6` for which the scalar units `Z_{2^m}^x` embed in
/// `Z(G)`.
pub fn characteristic_candidates(g: &CayleyGroup) -> Vec<u32> {
    candidates_up_to(g, MAX_CHAR_EXPONENT)
}

/// `2^(L+m-1)` with `L = ceil(log2(n+1))`.
pub fn exponent_bound(n: u32, m: u32) -> u64 {
    // ceil(log2(n+1)) is the bit length of n
    let l = u32::BITS - n.leading_zeros();
    1u64 << (l + m - 1)
}

/// Lowest-index `a` with `|a| >= 8` and `C_G(a) = <a>`.
pub fn self_centralizing_obstruction(g: &CayleyGroup) -> Option<usize> {
    (0..g.order()).find(|&a| {
        let order = g.element_order(a) as usize;
        order >= 8 && g.centralizer(a).len() == order
    })
}

/// Which threshold on `|a|` relative to `N_a` was met.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthCondition {
    /// `N_a = 0` and `|a| >= 8`.
    Zero,
    /// `N_a = 1` and `|a| >= 16`.
    One,
    /// `N_a >= 2` and `|a| >= 2^(2 N_a + 1)`.
    AtLeastTwo,
}

impl DepthCondition {
    fn describe(self) -> &'static str {
        match self {
            DepthCondition::Zero => "N_a = 0 and |a| >= 8",
            DepthCondition::One => "N_a = 1 and |a| >= 16",
            DepthCondition::AtLeastTwo => "N_a >= 2 and |a| >= 2^(2 N_a + 1)",
        }
    }
}

/// Lowest-index `a` whose order is large relative to `N_a`, the least `n`
/// with `b^(2^n)` in `<a>` for every `b` centralizing `a`.
pub fn higher_exp_obstruction(g: &CayleyGroup) -> Option<(usize, DepthCondition)> {
    (0..g.order()).find_map(|a| {
        let order = u64::from(g.element_order(a));
        if order < 8 {
            return None;
        }
        match n_a(g, a) {
            0 => Some((a, DepthCondition::Zero)),
            1 if order >= 16 => Some((a, DepthCondition::One)),
            n if n >= 2 && order >= 1u64 << (2 * n + 1) => Some((a, DepthCondition::AtLeastTwo)),
            _ => None,
        }
    })
}

/// Nonabelian of order `2^n`, `n >= 4`, with exponent `2^(n-1)`.
pub fn maximal_exponent_obstruction(g: &CayleyGroup) -> bool {
    let n = g.order();
    !g.is_abelian() && n >= 16 && g.exponent() as usize * 2 == n
}

fn commutes_within(g: &CayleyGroup, h: &ElementSet) -> bool {
    let elems: Vec<usize> = h.iter().collect();
    elems.iter().all(|&x| elems.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
}

/// Whether every indecomposable direct factor of `G` is nonabelian, in which
/// case a realizing ring must have characteristic a power of 2.
pub fn char_constraint(g: &CayleyGroup) -> Result<bool> {
    if g.order() > INDECOMPOSABLE_CAP {
        return Err(Error::OrderCap {
            order: g.order(),
            cap: INDECOMPOSABLE_CAP,
        });
    }
    let factors = direct_factors(g)?;
    Ok(!factors.is_empty() && factors.iter().all(|f| !commutes_within(g, f)))
}

fn reason(rule: &str, citation: String, scope: Scope, witness: Option<String>) -> Reason {
    Reason {
        rule: rule.to_string(),
        citation,
        scope,
        witness,
    }
}

/// Aggregates a verdict. Groups of exponent at most 4 are realized directly
/// in characteristic 2; all others go through [`obstructions`].
pub fn screen(spec: &GroupSpec, options: StarOptions) -> Result<Verdict> {
    let g = spec.build()?;
    if g.exponent() > 4 {
        return verdict_from_rules(spec, &g);
    }
    let realization = realize_exponent4(spec, options)?;
    let mut verdict = verdict_from_rules(spec, &g)?;
    verdict.status = Status::Realizable;
    verdict.certificate = Some(realization.certificate);
    Ok(verdict)
}

/// Applies every rule without attempting a construction.
pub fn obstructions(spec: &GroupSpec) -> Result<Verdict> {
    verdict_from_rules(spec, &spec.build()?)
}

fn verdict_from_rules(spec: &GroupSpec, g: &CayleyGroup) -> Result<Verdict> {
    let n = g.order().trailing_zeros();
    let exponent = u64::from(g.exponent());
    let candidates = characteristic_candidates(g);
    let within_bound = |m: &u32| exponent <= exponent_bound(n, *m);
    let mut allowed: Vec<u32> = candidates.iter().copied().filter(within_bound).collect();

    let mut verdict = Verdict {
        group: spec.to_string(),
        status: Status::Unknown,
        scope: None,
        reasons: Vec::new(),
        constraints: Vec::new(),
        notes: Vec::new(),
        allowed_characteristics: Vec::new(),
        certificate: None,
    };

    let excluded: Vec<u32> = (1..=MAX_CHAR_EXPONENT).filter(|m| !candidates.contains(m)).collect();
    if !excluded.is_empty() {
        verdict.constraints.push(format!(
            "{RULE_CENTRAL_UNITS}: Z_(2^m)^x must embed in Z(G) (invariants {:?}); excludes m in {excluded:?}",
            center_invariants(g)
        ));
    }
    let too_small: Vec<u32> = candidates.iter().copied().filter(|m| !within_bound(m)).collect();
    if !too_small.is_empty() {
        verdict.constraints.push(format!(
            "{RULE_EXPONENT_BOUND}: exponent {exponent} exceeds 2^(L+m-1) for |G| = 2^{n}; excludes m in {too_small:?}"
        ));
    }

    let mut refuted: Option<Scope> = None;
    if let Some(a) = self_centralizing_obstruction(g) {
        verdict.reasons.push(reason(
            RULE_SELF_CENTRALIZING,
            format!(
                "element of order {} equal to its own centralizer; no ring of characteristic 2^m has this unit group",
                g.element_order(a)
            ),
            Scope::AllCharacteristics,
            Some(g.label(a)),
        ));
        refuted = Some(Scope::AllCharacteristics);
        allowed.clear();
    }
    if let Some((a, cond)) = higher_exp_obstruction(g) {
        verdict.reasons.push(reason(
            RULE_CENTRALIZER_POWERS,
            format!(
                "{} with |a| = {}; excludes characteristic 2",
                cond.describe(),
                g.element_order(a)
            ),
            Scope::Characteristic2,
            Some(g.label(a)),
        ));
        allowed.retain(|&m| m != 1);
    }
    if maximal_exponent_obstruction(g) {
        verdict.reasons.push(reason(
            RULE_MAXIMAL_EXPONENT,
            format!("nonabelian of order 2^{n} with exponent 2^{}; not the unit group of any finite ring", n - 1),
            Scope::AnyFiniteRing,
            None,
        ));
        refuted = Some(Scope::AnyFiniteRing);
    }

    let constrained = match char_constraint(g) {
        Ok(c) => Some(c),
        Err(Error::OrderCap { .. }) => {
            verdict.notes.push(format!(
                "direct-factor analysis skipped above order {INDECOMPOSABLE_CAP}"
            ));
            None
        }
        Err(e) => return Err(e),
    };
    // Z(G) has exponent at most 2^n, so no m above n + 2 passes the central-units test
    let char2_excluded = verdict.reasons.iter().any(|r| r.scope == Scope::Characteristic2);
    let open = candidates_up_to(g, n + 2)
        .into_iter()
        .any(|m| within_bound(&m) && !(m == 1 && char2_excluded));
    if refuted.is_none() && !open {
        verdict.reasons.push(reason(
            RULE_EXPONENT_BOUND,
            "no characteristic 2^m passes both the central-units and exponent-bound tests".into(),
            Scope::AllCharacteristics,
            None,
        ));
        refuted = Some(Scope::AllCharacteristics);
    }
    if constrained == Some(true) {
        let rfc = reason(
            RULE_NONABELIAN_FACTORS,
            "every indecomposable direct factor is nonabelian, so a realizing ring has characteristic 2^m".into(),
            Scope::AnyFiniteRing,
            None,
        );
        let all_char = verdict.reasons.iter().any(|r| r.scope == Scope::AllCharacteristics);
        if all_char {
            refuted = Some(Scope::AnyFiniteRing);
            verdict.reasons.push(rfc);
        } else {
            verdict.constraints.push(format!("{}: {}", rfc.rule, rfc.citation));
        }
    }
    if verdict.reasons.iter().any(|r| r.rule == RULE_MAXIMAL_EXPONENT) && constrained == Some(false) {
        verdict
            .notes
            .push("maximal-exponent rule applied to a group with an abelian direct factor".into());
    }
    if refuted.is_some() {
        allowed.clear();
    }

    verdict.allowed_characteristics = allowed;
    match refuted {
        Some(scope) => {
            verdict.status = Status::NotRealizable;
            verdict.scope = Some(scope);
        }
        None if char2_excluded => verdict.constraints.push("characteristic 2 excluded".into()),
        None => {}
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::{build_group, parse_group_spec};

    fn verdict(spec: &str) -> Verdict {
        screen(&parse_group_spec(spec).unwrap(), StarOptions::default()).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(exponent_bound(3, 1), 4);
        assert_eq!(exponent_bound(5, 1), 8);
        assert_eq!(exponent_bound(5, 6), 256);
        assert_eq!(exponent_bound(1, 1), 2);
        assert_eq!(exponent_bound(7, 1), 8);
        assert_eq!(exponent_bound(8, 1), 16);
    }

    #[test]
    fn candidates_for_small_centers() {
        assert_eq!(characteristic_candidates(&build_group("Q8").unwrap()), vec![1, 2]);
        assert_eq!(characteristic_candidates(&build_group("C2").unwrap()), vec![1, 2]);
        assert_eq!(characteristic_candidates(&build_group("C16xC2").unwrap()), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(characteristic_candidates(&build_group("C8").unwrap()), vec![1, 2]);
    }

    #[test]
    fn self_centralizing_witnesses() {
        let m16 = build_group("M16").unwrap();
        let a = self_centralizing_obstruction(&m16).unwrap();
        assert_eq!(m16.element_order(a), 8);
        let c8 = build_group("C8").unwrap();
        assert!(self_centralizing_obstruction(&c8).is_some());
        assert!(self_centralizing_obstruction(&build_group("Q8").unwrap()).is_none());
    }

    #[test]
    fn depth_conditions() {
        let g = build_group("C16xC2").unwrap();
        let (a, c) = higher_exp_obstruction(&g).unwrap();
        assert_eq!(c, DepthCondition::One);
        assert_eq!(g.element_order(a), 16);
        assert!(higher_exp_obstruction(&build_group("C8xC2").unwrap()).is_none());
        assert!(higher_exp_obstruction(&build_group("C4").unwrap()).is_none());
        assert!(higher_exp_obstruction(&build_group("C16xC4xC2xC2").unwrap()).is_none());
    }

    #[test]
    fn maximal_exponent_cases() {
        assert!(maximal_exponent_obstruction(&build_group("Q16").unwrap()));
        assert!(maximal_exponent_obstruction(&build_group("QD32").unwrap()));
        assert!(!maximal_exponent_obstruction(&build_group("D8").unwrap()));
        assert!(!maximal_exponent_obstruction(&build_group("C16").unwrap()));
    }

    #[test]
    fn nonabelian_factor_constraint() {
        assert!(char_constraint(&build_group("Q16").unwrap()).unwrap());
        assert!(char_constraint(&build_group("M16").unwrap()).unwrap());
        assert!(char_constraint(&build_group("D8xQ8").unwrap()).unwrap());
        assert!(!char_constraint(&build_group("C8").unwrap()).unwrap());
        assert!(!char_constraint(&build_group("D8xC2").unwrap()).unwrap());
    }

    #[test]
    fn verdict_table() {
        let v = verdict("M16");
        assert_eq!(v.status, Status::NotRealizable);
        assert_eq!(v.scope, Some(Scope::AnyFiniteRing));
        let rules: Vec<&str> = v.reasons.iter().map(|r| r.rule.as_str()).collect();
        assert!(rules.contains(&RULE_SELF_CENTRALIZING) && rules.contains(&RULE_NONABELIAN_FACTORS));

        let v = verdict("C16xC2");
        assert_eq!(v.status, Status::Unknown);
        assert!(!v.allowed_characteristics.contains(&1));
        assert!(v.allowed_characteristics.contains(&6));

        let v = verdict("Q8");
        assert_eq!(v.status, Status::Realizable);
        assert!(v.certificate.is_some());
        assert!(v.reasons.is_empty());
    }

    #[test]
    fn scalar_unit_shapes() {
        assert!(embeds(&scalar_unit_invariants(6), &[16, 2]));
        assert!(!embeds(&scalar_unit_invariants(3), &[2]));
        assert!(embeds(&[], &[]));
        assert!(!embeds(&[4], &[2, 2]));
    }
}
