use std::sync::Arc;

use proptest::prelude::*;

use ringunits::certificate::{certificate_failure, verify_certificate, Certificate};
use ringunits::group_core::{
    abelian_invariants, build_group, direct_product, is_isomorphic, nilpotency_class, parse_group_spec, CayleyGroup,
};
use ringunits::group_ring::{
    format_element, ideal_closure, parse_element_literal, GroupRing, IdealBasis, QuotientRing, RingElement,
};
use ringunits::screeners::{
    characteristic_candidates, higher_exp_obstruction, obstructions, screen, self_centralizing_obstruction, Status,
};
use ringunits::star_realizer::{realize_exponent4, StarOptions};

const SMALL: &[&str] = &["C2", "C4", "C8", "C2xC2", "C4xC2", "D8", "Q8", "D16", "Q16", "QD16", "M16", "C4xC4"];

const ATOMS: &[&str] = &["C1", "C2", "C4", "C8", "C16", "D4", "D8", "D16", "Q8", "Q16", "QD16", "M16"];

fn ring(spec: &str, m: u32) -> GroupRing {
    GroupRing::new(Arc::new(build_group(spec).unwrap()), m).unwrap()
}

fn element_strategy() -> impl Strategy<Value = (&'static str, u32, Vec<u64>, Vec<u64>, Vec<u64>)> {
    (prop::sample::select(SMALL), 1u32..=3).prop_flat_map(|(spec, m)| {
        let n = build_group(spec).unwrap().order();
        let c = prop::collection::vec(0u64..(1 << m), n);
        (Just(spec), Just(m), c.clone(), c.clone(), c)
    })
}

/// All two-sided translates `g x h`, spanned.
fn brute_closure(r: &GroupRing, gens: &[RingElement]) -> IdealBasis {
    let n = r.dimension();
    let mut rows = Vec::new();
    for x in gens {
        for g in 0..n {
            let left = r.multiply(&r.basis_element(g), x).unwrap();
            for h in 0..n {
                rows.push(r.multiply(&left, &r.basis_element(h)).unwrap());
            }
        }
    }
    IdealBasis::span_of(r, &rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((spec, m, a, b, c) in element_strategy()) {
        let r = ring(spec, m);
        let (x, y, z) = (r.element(&a).unwrap(), r.element(&b).unwrap(), r.element(&c).unwrap());
        let xy = r.multiply(&x, &y).unwrap();
        prop_assert_eq!(r.multiply(&xy, &z).unwrap(), r.multiply(&x, &r.multiply(&y, &z).unwrap()).unwrap());
        let left = r.multiply(&x, &r.add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, r.add(&xy, &r.multiply(&x, &z).unwrap()).unwrap());
        let modulus = 1u64 << m;
        let aug = (u64::from(r.augmentation(&x)) * u64::from(r.augmentation(&y))) % modulus;
        prop_assert_eq!(u64::from(r.augmentation(&xy)), aug);
        prop_assert_eq!(r.multiply(&r.one(), &x).unwrap(), x.clone());
    }

    #[test]
    fn units_invert((spec, m, a, _b, _c) in element_strategy()) {
        let r = ring(spec, m);
        let x = r.element(&a).unwrap();
        if r.is_unit(&x) {
            let y = r.invert(&x).unwrap();
            prop_assert_eq!(r.multiply(&x, &y).unwrap(), r.one());
            prop_assert_eq!(r.multiply(&y, &x).unwrap(), r.one());
        } else {
            prop_assert!(r.invert(&x).is_err());
        }
    }

    #[test]
    fn translates_match_products((spec, m, a, _b, _c) in element_strategy(), g in 0usize..16) {
        let r = ring(spec, m);
        let g = g % r.dimension();
        let x = r.element(&a).unwrap();
        let left = r.multiply(&r.basis_element(g), &x).unwrap();
        prop_assert_eq!(left.coeffs(), &r.left_translate(g, x.coeffs())[..]);
        let right = r.multiply(&x, &r.basis_element(g)).unwrap();
        prop_assert_eq!(right.coeffs(), &r.right_translate(x.coeffs(), g)[..]);
    }

    #[test]
    fn closure_matches_all_translates((spec, m, a, b, _c) in element_strategy()) {
        let r = ring(spec, m);
        // push the generators into the even-augmentation ideal so the closure is proper
        let mut gens = vec![r.element(&a).unwrap(), r.element(&b).unwrap()];
        for x in &mut gens {
            if r.augmentation(x) % 2 == 1 {
                *x = r.sub(x, &r.one()).unwrap();
            }
        }
        let closed = ideal_closure(&r, &gens).unwrap();
        prop_assert!(closed.is_closed());
        prop_assert_eq!(closed.rows(), brute_closure(&r, &gens).rows());
        for x in &gens {
            prop_assert!(closed.contains(x.coeffs()));
        }
        prop_assert!(closed.inside_even_augmentation());
    }

    #[test]
    fn literal_round_trip((spec, m, a, _b, _c) in element_strategy()) {
        let r = ring(spec, m);
        let x = r.element(&a).unwrap();
        let text = format_element(&x, &r);
        prop_assert_eq!(parse_element_literal(&text, &r).unwrap(), x);
    }

    #[test]
    fn spec_round_trip(atoms in prop::collection::vec(prop::sample::select(ATOMS), 1..4)) {
        let text = atoms.join("x");
        let order: usize = atoms.iter().map(|a| build_group(a).unwrap().order()).product();
        match parse_group_spec(&text) {
            Ok(spec) => {
                prop_assert!(order <= 512);
                let printed = spec.to_string();
                prop_assert_eq!(parse_group_spec(&printed).unwrap(), spec.clone());
                prop_assert_eq!(spec.build().unwrap().order(), order);
            }
            Err(_) => prop_assert!(order > 512),
        }
    }

    #[test]
    fn products_commute_up_to_isomorphism(
        a in prop::sample::select(&ATOMS[..10]),
        b in prop::sample::select(&ATOMS[..10]),
    ) {
        let (g, h) = (build_group(a).unwrap(), build_group(b).unwrap());
        let gh = direct_product(&g, &h).unwrap();
        let hg = direct_product(&h, &g).unwrap();
        prop_assert!(is_isomorphic(&gh, &hg).unwrap().is_some());
        prop_assert_eq!(gh.order(), g.order() * h.order());
        prop_assert_eq!(gh.exponent(), g.exponent().max(h.exponent()));
        prop_assert_eq!(nilpotency_class(&gh), nilpotency_class(&g).max(nilpotency_class(&h)));
        prop_assert_eq!(gh.center().len(), g.center().len() * h.center().len());
    }

    #[test]
    fn abelian_invariants_concatenate(cyclic in prop::collection::vec(0u32..4, 1..4)) {
        let spec = cyclic.iter().map(|e| format!("C{}", 1u32 << e)).collect::<Vec<_>>().join("x");
        let g = build_group(&spec).unwrap();
        let mut expected: Vec<u64> = cyclic.iter().filter(|&&e| e > 0).map(|&e| 1u64 << e).collect();
        expected.sort_unstable_by(|x, y| y.cmp(x));
        prop_assert_eq!(abelian_invariants(&g).unwrap(), expected);
    }

    #[test]
    fn quotient_units_are_half_of_a_local_ring((spec, _m, a, _b, _c) in element_strategy()) {
        let r = ring(spec, 1);
        let bits: Vec<u64> = a.iter().map(|c| c & 1).collect();
        let mut x = r.element(&bits).unwrap();
        if r.augmentation(&x) % 2 == 1 {
            x = r.sub(&x, &r.one()).unwrap();
        }
        let q = QuotientRing::new(r.clone(), ideal_closure(&r, &[x]).unwrap()).unwrap();
        if let Some(size) = q.size() {
            if size <= 2048 {
                let units = q.unit_group().unwrap();
                prop_assert_eq!(units.group.order() * 2, size);
                let searched = q.units_by_inverse_search().unwrap();
                prop_assert_eq!(searched.len(), units.group.order());
            }
        }
    }
}

fn catalog() -> Vec<&'static str> {
    vec![
        "C2", "C4", "C8", "C16", "C32", "C2xC2", "C4xC2", "C8xC2", "C16xC2", "C8xC4", "C4xC4", "D8", "D16", "D32",
        "Q8", "Q16", "Q32", "QD16", "QD32", "M16", "SG32_37", "SG64_88", "SG64_104", "D8xC2", "Q8xC2", "M16xC2",
        "Q16xC2", "D8xQ8",
    ]
}

#[test]
fn self_centralizing_implies_depth_rule() {
    for spec in catalog() {
        let g: CayleyGroup = build_group(spec).unwrap();
        if self_centralizing_obstruction(&g).is_some() {
            assert!(higher_exp_obstruction(&g).is_some(), "{spec}");
        }
        assert!(characteristic_candidates(&g).contains(&1), "{spec}");
    }
}

#[test]
fn verdicts_never_mix_certificates_and_obstructions() {
    for spec in catalog() {
        let s = parse_group_spec(spec).unwrap();
        let v = screen(&s, StarOptions::default()).unwrap();
        if v.status == Status::Realizable {
            assert!(v.reasons.is_empty(), "{spec}");
            assert!(verify_certificate(v.certificate.as_ref().unwrap()).unwrap());
        }
        if v.status == Status::NotRealizable {
            assert!(!v.reasons.is_empty() && v.allowed_characteristics.is_empty(), "{spec}");
        }
        let o = obstructions(&s).unwrap();
        assert_eq!(o.reasons, v.reasons, "{spec}");
    }
}

fn q8_certificate() -> Certificate {
    realize_exponent4(&parse_group_spec("Q8").unwrap(), StarOptions::default()).unwrap().certificate
}

#[test]
fn certificate_json_round_trip() {
    let cert = q8_certificate();
    let back = Certificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    assert_eq!(back.to_json(), cert.to_json());
}

#[test]
fn certificate_mutations_are_rejected() {
    let cert = q8_certificate();
    assert!(verify_certificate(&cert).unwrap());

    let mut dropped = cert.clone();
    dropped.ideal_basis.remove(0);
    assert!(!verify_certificate(&dropped).unwrap());

    let mut wrong_size = cert.clone();
    wrong_size.quotient_size *= 2;
    assert!(!verify_certificate(&wrong_size).unwrap());

    let mut collapsed = cert.clone();
    collapsed.iso_witness.insert("j".into(), "i".into());
    assert!(certificate_failure(&collapsed).unwrap().is_some());

    let mut wrong_group = cert.clone();
    wrong_group.group = "D8".into();
    assert!(!matches!(verify_certificate(&wrong_group), Ok(true)));

    let mut garbage = cert;
    garbage.ideal_basis.push("1+k".into());
    assert!(verify_certificate(&garbage).is_err());
}
