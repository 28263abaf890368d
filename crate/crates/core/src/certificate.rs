//! Realization certificates and their independent verification.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::{build_group, CayleyGroup, ElementSet};
use crate::group_ring::{
    format_element, ideal_closure, parse_element_literal, GroupRing, IdealBasis, QuotientRing, UnitGroup,
};

pub const TOOL_VERSION: &str = concat!("ringunits ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Star,
    Search,
    Fixture,
}

/// A claim that `(Z_{2^m}[H] / I)^x` is isomorphic to `group`, where `H` is
/// `ring_group` when present and `group` otherwise.
///
/// Field order and the sorted witness map make the JSON form byte-stable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_group: Option<String>,
    #[serde(rename = "char")]
    pub characteristic: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_generators: Option<Vec<String>>,
    pub ideal_basis: Vec<String>,
    pub quotient_size: u64,
    pub unit_group_order: u64,
    pub iso_witness: BTreeMap<String, String>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_attempts: Option<u32>,
    pub tool_version: String,
}

/// Everything needed to assemble a certificate.
pub struct Realization<'a> {
    pub group_spec: String,
    pub ring_group_spec: Option<String>,
    pub ring: &'a GroupRing,
    pub ideal: &'a IdealBasis,
    pub ideal_generators: Option<Vec<String>>,
    pub target: &'a CayleyGroup,
    pub units: &'a UnitGroup,
    /// Target element index to unit index.
    pub iso: &'a [usize],
    pub method: Method,
    pub star_attempts: Option<u32>,
}

impl Certificate {
    pub fn assemble(r: Realization<'_>) -> Self {
        let iso_witness = r
            .target
            .generators()
            .iter()
            .map(|g| {
                let unit = &r.units.residues[r.iso[g.element]];
                (g.name.clone(), format_element(unit, r.ring))
            })
            .collect();
        Certificate {
            group: r.group_spec,
            ring_group: r.ring_group_spec,
            characteristic: r.ring.modulus(),
            ideal_generators: r.ideal_generators,
            ideal_basis: r.ideal.row_elements(r.ring).iter().map(|x| format_element(x, r.ring)).collect(),
            quotient_size: 1u64 << r.ideal.quotient_size_log2(),
            unit_group_order: r.units.group.order() as u64,
            iso_witness,
            method: r.method,
            star_attempts: r.star_attempts,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn m(&self) -> Result<u32> {
        let c = self.characteristic;
        if !c.is_power_of_two() || c < 2 {
            return Err(Error::MalformedCertificate(format!("characteristic {c} is not 2^m")));
        }
        Ok(c.trailing_zeros())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }
}

/// Re-checks a certificate from scratch. Returns `None` when every check
/// passes, otherwise the first failed check. Parse failures are errors.
pub fn certificate_failure(cert: &Certificate) -> Result<Option<String>> {
    let m = cert.m()?;
    let target = build_group(&cert.group).map_err(|e| Error::MalformedCertificate(format!("group: {e}")))?;
    let ring_group = match &cert.ring_group {
        Some(spec) => build_group(spec).map_err(|e| Error::MalformedCertificate(format!("ring_group: {e}")))?,
        None => target.clone(),
    };
    let ring = GroupRing::new(Arc::new(ring_group), m)?;
    let parse = |s: &String| {
        parse_element_literal(s, &ring).map_err(|e| Error::MalformedCertificate(format!("literal `{s}`: {e}")))
    };
    let rows = cert.ideal_basis.iter().map(parse).collect::<Result<Vec<_>>>()?;

    let mut ideal = IdealBasis::span_of(&ring, &rows)?;
    if ideal.rows() != rows.iter().map(|r| r.coeffs().to_vec()).collect::<Vec<_>>() {
        return Ok(Some("ideal basis is not in canonical form".into()));
    }
    if !ideal.verify_closed(&ring) {
        return Ok(Some("ideal basis is not closed under multiplication by the group".into()));
    }
    if ideal.contains_one() {
        return Ok(Some("ideal is improper".into()));
    }
    if ideal.contains(ring.scale(&ring.one(), 1 << (m - 1)).coeffs()) {
        return Ok(Some("quotient characteristic is smaller than stated".into()));
    }
    if let Some(gens) = &cert.ideal_generators {
        let gens = gens.iter().map(parse).collect::<Result<Vec<_>>>()?;
        match ideal_closure(&ring, &gens) {
            Ok(closed) if closed.rows() == ideal.rows() => {}
            _ => return Ok(Some("ideal generators do not close to the stated basis".into())),
        }
    }
    let quotient = QuotientRing::new(ring.clone(), ideal)?;
    if 1u64.checked_shl(quotient.size_log2()) != Some(cert.quotient_size) {
        return Ok(Some(format!(
            "quotient has 2^{} elements, certificate states {}",
            quotient.size_log2(),
            cert.quotient_size
        )));
    }
    let units = quotient.unit_group()?;
    if units.group.order() as u64 != cert.unit_group_order || units.group.order() != target.order() {
        return Ok(Some(format!(
            "unit group has order {}, target has order {}",
            units.group.order(),
            target.order()
        )));
    }

    // images of the target generators, as unit indices
    let mut unit_index = BTreeMap::new();
    for (i, r) in units.residues.iter().enumerate() {
        unit_index.insert(r.coeffs().to_vec(), i);
    }
    let mut images = Vec::new();
    for g in target.generators() {
        let Some(literal) = cert.iso_witness.get(&g.name) else {
            return Ok(Some(format!("witness has no image for generator {}", g.name)));
        };
        let image = quotient.reduce(&parse(literal)?)?;
        match unit_index.get(image.coeffs()) {
            Some(&u) => images.push(u),
            None => return Ok(Some(format!("image of {} is not a unit", g.name))),
        }
    }
    if cert.iso_witness.len() != target.generators().len() {
        return Ok(Some("witness names unknown generators".into()));
    }
    match extend_to_isomorphism(&target, &units.group, &images) {
        Some(_) => Ok(None),
        None => Ok(Some("witness does not extend to an isomorphism".into())),
    }
}

pub fn verify_certificate(cert: &Certificate) -> Result<bool> {
    Ok(certificate_failure(cert)?.is_none())
}

/// Extends generator images along the target's generator words and checks
/// the result is a bijective homomorphism on all pairs.
pub fn extend_to_isomorphism(target: &CayleyGroup, units: &CayleyGroup, images: &[usize]) -> Option<Vec<usize>> {
    let n = target.order();
    if units.order() != n {
        return None;
    }
    let mut map = vec![0usize; n];
    for (x, slot) in map.iter_mut().enumerate() {
        let word = target.word(x)?;
        *slot = word.iter().fold(0, |acc, &gi| units.mul(acc, images[gi]));
    }
    let hit = ElementSet::from_indices(n, map.iter().copied());
    if hit.len() != n {
        return None;
    }
    let hom = (0..n).all(|a| (0..n).all(|b| map[target.mul(a, b)] == units.mul(map[a], map[b])));
    hom.then_some(map)
}
