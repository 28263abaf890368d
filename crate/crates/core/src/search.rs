//! Bounded search for realizing ideals, and the catalogue of explicit
//! residue rings with known unit groups.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::certificate::verify_certificate;
use crate::certificate::{Certificate, Method, Realization};
use crate::error::{Error, Result};
use crate::group_core::{build_group, is_isomorphic, parse_group_spec, CayleyGroup, GroupSpec};
use crate::group_ring::{
    close_within_limit, format_element, ideal_closure, parse_element_literal, GroupRing, IdealBasis, QuotientRing,
    RingElement, UnitGroup, MAX_CHAR_EXPONENT,
};
use crate::star_realizer::natural_embedding;

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_CACHE: usize = 1 << 20;
const CHUNK: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub m: u32,
    /// Support sizes of candidate generators, all even.
    pub supports: Vec<usize>,
    pub max_generators: usize,
    /// Maximum number of ideal closures.
    pub budget: u64,
    pub workers: usize,
    /// Maximum number of remembered ideals, for deduplication and for the
    /// pending generator sets of the next level.
    pub cache_size: usize,
}

impl SearchConfig {
    pub fn new(m: u32) -> Self {
        SearchConfig {
            m,
            supports: vec![2, 4],
            max_generators: 4,
            budget: DEFAULT_BUDGET,
            workers: 1,
            cache_size: DEFAULT_CACHE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_CHAR_EXPONENT).contains(&self.m) {
            return Err(Error::InvalidArgument(format!("m = {} outside 1..={MAX_CHAR_EXPONENT}", self.m)));
        }
        if self.budget == 0 {
            return Err(Error::InvalidArgument("budget must be positive".into()));
        }
        if self.supports.is_empty() || self.supports.iter().any(|&s| s < 2 || s % 2 == 1) {
            return Err(Error::InvalidArgument(format!(
                "support sizes {:?} must be even and at least 2",
                self.supports
            )));
        }
        if self.max_generators == 0 {
            return Err(Error::InvalidArgument("at least one generator per ideal is needed".into()));
        }
        Ok(())
    }
}

/// Candidate generators in enumeration order: for each support size, each
/// scalar `2^k < 2^m`, and each set of non-identity elements in
/// lexicographic index order, the element `2^k (1 + g_1 + ... + g_{s-1})`.
pub fn candidate_elements(ring: &GroupRing, config: &SearchConfig) -> Vec<RingElement> {
    let n = ring.dimension();
    let mut out = Vec::new();
    for &s in &config.supports {
        if s > n {
            continue;
        }
        for k in 0..ring.m() {
            let mut combo: Vec<usize> = (1..s).collect();
            loop {
                let mut support = vec![0];
                support.extend(&combo);
                let x = ring.scale(&ring.sum_of(&support), 1 << k);
                debug_assert_eq!(ring.augmentation(&x) % 2, 0);
                out.push(x);
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
    }
    out
}

/// Advances a strictly increasing tuple drawn from `1..n`.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A generator set, by positions in [`candidate_elements`], with its closure.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub generators: Vec<usize>,
    pub ideal: IdealBasis,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub closures: u64,
    pub distinct_ideals: u64,
    pub unit_checks: u64,
    pub budget_exhausted: bool,
}

fn fingerprint(ideal: &IdealBasis) -> u64 {
    let mut h = DefaultHasher::new();
    ideal.rows().hash(&mut h);
    h.finish()
}

/// Walks generator sets level by level: single generators first, then each
/// surviving set extended by later candidates. Closures are computed in
/// parallel chunks and visited in order, so the visit sequence does not
/// depend on the worker count. `max_ideal_log2` bounds the ideal size;
/// larger or improper closures are dropped. Extensions only shrink the
/// quotient, so sets whose quotient reaches `stop_log2` are not extended.
fn explore(
    ring: &GroupRing,
    config: &SearchConfig,
    max_ideal_log2: u32,
    stop_log2: u32,
    mut visit: impl FnMut(&Candidate, &mut SearchStats) -> ControlFlow<()>,
) -> Result<SearchStats> {
    config.validate()?;
    let elements = candidate_elements(ring, config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let mut stats = SearchStats::default();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut frontier: Vec<Candidate> = vec![Candidate {
        generators: Vec::new(),
        ideal: IdealBasis::zero(ring),
    }];

    for _level in 0..config.max_generators {
        let mut next = Vec::new();
        let mut children = frontier.iter().flat_map(|parent| {
            let start = parent.generators.last().map_or(0, |&l| l + 1);
            (start..elements.len()).map(move |j| (parent, j))
        });
        loop {
            let room = config.budget - stats.closures;
            let chunk: Vec<(&Candidate, usize)> = children.by_ref().take(CHUNK.min(room as usize)).collect();
            if chunk.is_empty() {
                break;
            }
            stats.closures += chunk.len() as u64;
            let closed: Vec<Result<Option<IdealBasis>>> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|(parent, j)| {
                        let mut gens = parent.ideal.row_elements(ring);
                        gens.push(elements[*j].clone());
                        close_within_limit(ring, &gens, max_ideal_log2)
                    })
                    .collect()
            });
            for ((parent, j), ideal) in chunk.into_iter().zip(closed) {
                let Some(ideal) = ideal? else { continue };
                let key = fingerprint(&ideal);
                if seen.contains(&key) {
                    continue;
                }
                if seen.len() < config.cache_size {
                    seen.insert(key);
                }
                stats.distinct_ideals += 1;
                let mut generators = parent.generators.clone();
                generators.push(j);
                let cand = Candidate { generators, ideal };
                if visit(&cand, &mut stats).is_break() {
                    return Ok(stats);
                }
                if cand.ideal.quotient_size_log2() > stop_log2 && next.len() < config.cache_size {
                    next.push(cand);
                }
            }
            if stats.closures >= config.budget {
                stats.budget_exhausted = true;
                return Ok(stats);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(stats)
}

/// Proper generator sets in enumeration order, deduplicated by closure, up
/// to the closure budget.
pub fn enumerate_candidates(ring: &GroupRing, config: &SearchConfig) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    let full = ring.dimension() as u32 * ring.m();
    explore(ring, config, full, 0, |c, _| {
        out.push(c.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Whether the quotient by `ideal` has characteristic exactly `2^m`.
pub fn has_full_characteristic(ring: &GroupRing, ideal: &IdealBasis) -> bool {
    let top = ring.scale(&ring.one(), 1 << (ring.m() - 1));
    !ideal.contains(top.coeffs())
}

/// An isomorphism from `target` onto the units of `q`, the natural map when
/// `target` is the ring's group and it works.
fn unit_isomorphism(target: &CayleyGroup, q: &QuotientRing, units: &UnitGroup, natural: bool) -> Result<Option<Vec<usize>>> {
    if units.group.order() != target.order() {
        return Ok(None);
    }
    if natural {
        if let Some(map) = natural_embedding(target, q, units) {
            return Ok(Some(map));
        }
    }
    is_isomorphic(target, &units.group)
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub certificate: Option<Certificate>,
    pub stats: SearchStats,
}

/// First generator set in enumeration order whose residue ring has `2|G|`
/// elements, characteristic `2^m`, and unit group isomorphic to `G`.
/// Exhausting the budget is not a refutation.
pub fn search_realizing_ideal(spec: &GroupSpec, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let g = Arc::new(spec.build()?);
    let ring = GroupRing::new(g.clone(), config.m)?;
    let target_log2 = g.order().trailing_zeros() + 1;
    let full = ring.dimension() as u32 * config.m;
    let elements = candidate_elements(&ring, config);
    let mut found: Option<Certificate> = None;
    let mut failure: Option<Error> = None;
    let stats = explore(&ring, config, full - target_log2, target_log2, |cand, stats| {
        if cand.ideal.quotient_size_log2() != target_log2 || !has_full_characteristic(&ring, &cand.ideal) {
            return ControlFlow::Continue(());
        }
        stats.unit_checks += 1;
        let attempt = (|| -> Result<Option<Certificate>> {
            let q = QuotientRing::new(ring.clone(), cand.ideal.clone())?;
            let units = q.unit_group()?;
            let Some(iso) = unit_isomorphism(&g, &q, &units, true)? else {
                return Ok(None);
            };
            let generators: Vec<String> = cand
                .generators
                .iter()
                .map(|&j| format_element(&elements[j], &ring))
                .collect();
            Ok(Some(Certificate::assemble(Realization {
                group_spec: spec.to_string(),
                ring_group_spec: None,
                ring: &ring,
                ideal: &cand.ideal,
                ideal_generators: Some(generators),
                target: &g,
                units: &units,
                iso: &iso,
                method: Method::Search,
                star_attempts: None,
            })))
        })();
        match attempt {
            Ok(Some(cert)) => {
                found = Some(cert);
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SearchOutcome {
        certificate: found,
        stats,
    })
}

/// An explicit residue ring `Z_{2^m}[ring_group] / <generators>` whose unit
/// group should be `expected`.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub ring_group: &'static str,
    pub m: u32,
    pub generators: &'static [&'static str],
    pub expected: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "sg32_37",
        ring_group: "SG32_37",
        m: 1,
        generators: &["1+x1+x2+x1^5*x2", "1+x1+x1^2+x1^7*x3", "1+x1+x1^4+x1^5"],
        expected: "SG32_37",
    },
    Fixture {
        name: "sg64_88",
        ring_group: "SG64_88",
        m: 1,
        generators: &["1+x1+x1^2+x1^3*[x2,x1]", "1+x1+x1*x2+x2*x3", "1+x1+x1*x3+x1^3*x3"],
        expected: "SG64_88",
    },
    Fixture {
        name: "sg64_104",
        ring_group: "SG64_104",
        m: 1,
        generators: &["1+x1+x1^2+x1^3*x2^2", "1+x1+x1*x2+x2*x3", "1+x1+x1*x3+x1^4*x3"],
        expected: "SG64_104",
    },
    Fixture {
        name: "q8_char4",
        ring_group: "Q8",
        m: 2,
        generators: &["2*i+2", "2*j+2", "1+i+i^2+i^3", "1+i+j+i*j"],
        expected: "Q8",
    },
    Fixture {
        name: "c8_quotient",
        ring_group: "C8",
        m: 1,
        generators: &["1+a+a^4+a^5"],
        expected: "C8xC2",
    },
    Fixture {
        name: "c16_quotient",
        ring_group: "C16",
        m: 1,
        generators: &[
            "1+a+a^2+a^3+a^4+a^5+a^6+a^7+a^8+a^9+a^10+a^11+a^12+a^13+a^14+a^15",
            "1+a+a^8+a^9",
            "1+a^2+a^8+a^10",
        ],
        expected: "C16xC4xC2xC2",
    },
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureResult {
    pub name: String,
    pub expected_group: String,
    pub verified: bool,
    pub quotient_size: u64,
    pub unit_group_order: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// Closes the stated generators, extracts the units and compares them with
/// the expected group.
pub fn run_fixture(f: &Fixture) -> Result<FixtureResult> {
    let g = Arc::new(build_group(f.ring_group)?);
    let ring = GroupRing::new(g.clone(), f.m)?;
    let gens = f
        .generators
        .iter()
        .map(|s| parse_element_literal(s, &ring))
        .collect::<Result<Vec<_>>>()?;
    let ideal = ideal_closure(&ring, &gens)?;
    let q = QuotientRing::new(ring.clone(), ideal.clone())?;
    let units = q.unit_group()?;
    let expected_spec = parse_group_spec(f.expected)?;
    let target = expected_spec.build()?;
    let same_group = f.ring_group == f.expected;
    let full_char = has_full_characteristic(&ring, &ideal);
    let iso = if full_char {
        unit_isomorphism(&target, &q, &units, same_group)?
    } else {
        None
    };
    let certificate = iso.map(|iso| {
        Certificate::assemble(Realization {
            group_spec: expected_spec.to_string(),
            ring_group_spec: (!same_group).then(|| f.ring_group.to_string()),
            ring: &ring,
            ideal: &ideal,
            ideal_generators: Some(gens.iter().map(|x| format_element(x, &ring)).collect()),
            target: &target,
            units: &units,
            iso: &iso,
            method: Method::Fixture,
            star_attempts: None,
        })
    });
    Ok(FixtureResult {
        name: f.name.to_string(),
        expected_group: f.expected.to_string(),
        verified: certificate.is_some(),
        quotient_size: 1u64 << q.size_log2(),
        unit_group_order: units.group.order() as u64,
        certificate,
    })
}

pub fn run_fixtures() -> Result<Vec<FixtureResult>> {
    FIXTURES.iter().map(run_fixture).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(spec: &str, m: u32) -> GroupRing {
        GroupRing::new(Arc::new(build_group(spec).unwrap()), m).unwrap()
    }

    fn config(m: u32, supports: &[usize], max_generators: usize, budget: u64) -> SearchConfig {
        SearchConfig {
            supports: supports.to_vec(),
            max_generators,
            budget,
            ..SearchConfig::new(m)
        }
    }

    #[test]
    fn support_two_in_c4() {
        let r = ring("C4", 1);
        let names: Vec<String> = candidate_elements(&r, &config(1, &[2], 1, 10))
            .iter()
            .map(|x| format_element(x, &r))
            .collect();
        assert_eq!(names, ["1+a", "1+a^2", "1+a^3"]);
    }

    #[test]
    fn closures_deduplicate() {
        let r = ring("C4", 1);
        let cands = enumerate_candidates(&r, &config(1, &[2], 1, 10)).unwrap();
        // <1+a> = <1+a^3> is the augmentation ideal
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[0].generators, vec![0]);
        assert_eq!(cands[1].generators, vec![1]);
        for c in &cands {
            assert!(c.ideal.inside_even_augmentation());
        }
    }

    #[test]
    fn scaled_candidates_in_higher_characteristic() {
        let r = ring("C2", 2);
        let names: Vec<String> = candidate_elements(&r, &config(2, &[2], 1, 10))
            .iter()
            .map(|x| format_element(x, &r))
            .collect();
        assert_eq!(names, ["1+a", "2+2*a"]);
    }

    #[test]
    fn combinations_advance_in_order() {
        let mut c = vec![1, 2];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 5) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![3, 4]);
    }

    #[test]
    fn config_validation() {
        assert!(config(1, &[3], 1, 10).validate().is_err());
        assert!(config(1, &[2], 1, 0).validate().is_err());
        assert!(config(7, &[2], 1, 10).validate().is_err());
        assert!(config(1, &[2, 4], 4, 10).validate().is_ok());
    }

    #[test]
    fn size_pruning_matches_unit_count() {
        // every pruned closure has a unit group of the wrong order
        for spec in ["C4", "C2xC2", "D8", "Q8", "C8", "C4xC2"] {
            let r = ring(spec, 1);
            let n = r.dimension();
            for c in enumerate_candidates(&r, &config(1, &[2, 4], 1, 1000)).unwrap() {
                let q = QuotientRing::new(r.clone(), c.ideal.clone()).unwrap();
                let units = q.unit_group().unwrap().group.order();
                if q.size_log2() != n.trailing_zeros() + 1 {
                    assert_ne!(units, n, "{spec}");
                }
            }
        }
    }

    #[test]
    fn finds_c8xc2() {
        let spec = parse_group_spec("C8xC2").unwrap();
        let out = search_realizing_ideal(&spec, &config(1, &[4], 4, DEFAULT_BUDGET)).unwrap();
        let cert = out.certificate.expect("C8xC2 is realizable in characteristic 2");
        assert!(verify_certificate(&cert).unwrap());
        assert_eq!(cert.quotient_size, 32);
    }

    #[test]
    fn c8_is_never_found() {
        let spec = parse_group_spec("C8").unwrap();
        let out = search_realizing_ideal(&spec, &config(1, &[2, 4], 4, 20_000)).unwrap();
        assert!(out.certificate.is_none());
    }

    #[test]
    fn fixture_with_c8() {
        let r = run_fixture(&FIXTURES[4]).unwrap();
        assert!(r.verified);
        assert_eq!((r.quotient_size, r.unit_group_order), (32, 16));
        assert!(verify_certificate(r.certificate.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn printed_char4_quaternion_ideal_gives_q8xc2() {
        let f = FIXTURES.iter().find(|f| f.name == "q8_char4").unwrap();
        let r = run_fixture(f).unwrap();
        assert!(!r.verified);
        assert_eq!((r.quotient_size, r.unit_group_order), (32, 16));

        let ring = ring("Q8", 2);
        let gens: Vec<_> = f.generators.iter().map(|t| parse_element_literal(t, &ring).unwrap()).collect();
        let q = QuotientRing::new(ring.clone(), ideal_closure(&ring, &gens).unwrap()).unwrap();
        let units = q.unit_group().unwrap();
        assert!(is_isomorphic(&build_group("Q8xC2").unwrap(), &units.group).unwrap().is_some());
    }

    #[test]
    fn q8_is_found_in_characteristic_4() {
        let spec = parse_group_spec("Q8").unwrap();
        let cert = search_realizing_ideal(&spec, &SearchConfig::new(2)).unwrap().certificate.unwrap();
        assert_eq!((cert.characteristic, cert.quotient_size), (4, 16));
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn sg64_88_ideal_with_one_term_changed() {
        let f = FIXTURES.iter().find(|f| f.name == "sg64_88").unwrap();
        let r = run_fixture(f).unwrap();
        assert!(!r.verified);
        assert_eq!((r.quotient_size, r.unit_group_order), (4, 2));

        let variant = Fixture {
            generators: &["1+x1+x1^2+x1^3*[x2,x1]", "1+x1+x1*x2+x2*x3", "1+x1+x1*x3+x1^4*x3"],
            ..*f
        };
        let r = run_fixture(&variant).unwrap();
        assert!(r.verified);
        assert_eq!((r.quotient_size, r.unit_group_order), (128, 64));
        assert!(verify_certificate(r.certificate.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn search_ignores_worker_count() {
        let spec = parse_group_spec("D8").unwrap();
        let runs: Vec<_> = [1, 3]
            .iter()
            .map(|&workers| {
                let c = SearchConfig { workers, ..SearchConfig::new(2) };
                search_realizing_ideal(&spec, &c).unwrap().certificate.unwrap().to_json()
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
    }
}
