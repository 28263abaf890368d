use crate::error::{Error, Result};
use crate::group_core::{CayleyGroup, MAX_TABLE_ORDER};
use crate::group_ring::{GroupRing, IdealBasis, RingElement};

/// Largest residue ring whose elements are enumerated.
pub const MAX_RESIDUES: usize = 4096;

/// `Z_{2^m}[G] / I` with canonical representatives.
///
/// Residues are the vectors reduced against the ideal basis. Coordinate `j`
/// of a residue ranges over `[0, 2^bits[j])`, so residues are numbered in
/// mixed radix over the coordinates with `bits[j] > 0`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    ring: GroupRing,
    ideal: IdealBasis,
    bits: Vec<u32>,
    free: Vec<usize>,
}

/// Unit group of a residue ring together with the residue behind each unit.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub group: CayleyGroup,
    pub residues: Vec<RingElement>,
}

impl QuotientRing {
    pub fn new(ring: GroupRing, ideal: IdealBasis) -> Result<Self> {
        if !ideal.is_closed() {
            return Err(Error::UnclosedIdeal);
        }
        if ideal.m() != ring.m() || ideal.dimension() != ring.dimension() {
            return Err(Error::RingMismatch);
        }
        if ideal.contains_one() {
            return Err(Error::ImproperIdeal);
        }
        let bits = ideal.residue_bits();
        let free = (0..bits.len()).filter(|&j| bits[j] > 0).collect();
        Ok(QuotientRing {
            ring,
            ideal,
            bits,
            free,
        })
    }

    /// The group ring itself, as the quotient by the zero ideal.
    pub fn full(ring: GroupRing) -> Self {
        let ideal = IdealBasis::zero(&ring);
        QuotientRing::new(ring, ideal).expect("the zero ideal is proper and closed")
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn size_log2(&self) -> u32 {
        self.ideal.quotient_size_log2()
    }

    /// Number of residues, if it fits the enumeration cap.
    pub fn size(&self) -> Option<usize> {
        let l = self.size_log2();
        (l <= MAX_RESIDUES.trailing_zeros()).then(|| 1usize << l)
    }

    pub fn reduce(&self, x: &RingElement) -> Result<RingElement> {
        self.ring.check(x)?;
        Ok(self.ring.element_from_residues(self.ideal.reduce(x.coeffs())))
    }

    pub fn equivalent(&self, x: &RingElement, y: &RingElement) -> Result<bool> {
        Ok(self.reduce(x)? == self.reduce(y)?)
    }

    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        let p = self.ring.multiply(x, y)?;
        self.reduce(&p)
    }

    /// Every proper ideal of `Z_{2^m}[G]` lies in the even-augmentation
    /// ideal, which is the unique maximal ideal.
    pub fn is_local(&self) -> bool {
        self.ideal.inside_even_augmentation()
    }

    /// Position of a canonical residue in the mixed-radix numbering.
    pub fn residue_index(&self, v: &[u8]) -> usize {
        let mut idx = 0usize;
        let mut shift = 0u32;
        for &j in &self.free {
            idx |= (v[j] as usize) << shift;
            shift += self.bits[j];
        }
        idx
    }

    pub fn residue(&self, index: usize) -> RingElement {
        let mut v = vec![0u8; self.ring.dimension()];
        let mut shift = 0u32;
        for &j in &self.free {
            let b = self.bits[j];
            v[j] = ((index >> shift) & ((1 << b) - 1)) as u8;
            shift += b;
        }
        self.ring.element_from_residues(v)
    }

    fn enumeration_size(&self) -> Result<usize> {
        self.size().ok_or(Error::SizeCap {
            what: "residue ring",
            size: usize::try_from(1u128 << self.size_log2().min(100)).unwrap_or(usize::MAX),
            cap: MAX_RESIDUES,
        })
    }

    /// Units as the odd-augmentation residues of a local quotient, with the
    /// multiplication table. Unit 0 is the residue of 1; the others follow
    /// residue order.
    pub fn unit_group(&self) -> Result<UnitGroup> {
        let size = self.enumeration_size()?;
        let units: Vec<usize> = if self.is_local() {
            (0..size)
                .filter(|&i| self.ring.augmentation(&self.residue(i)) & 1 == 1)
                .collect()
        } else {
            self.units_by_inverse_search()?
        };
        self.unit_table(units)
    }

    /// Residues with a right inverse, decided by whether `1` lies in
    /// `x R + I`; in a finite ring a right inverse is two-sided. Independent
    /// of the augmentation criterion.
    pub fn units_by_inverse_search(&self) -> Result<Vec<usize>> {
        let size = self.enumeration_size()?;
        let ideal_rows = self.ideal.row_elements(&self.ring);
        let mut units = Vec::new();
        for i in 0..size {
            let x = self.residue(i);
            let mut rows: Vec<RingElement> = (0..self.ring.dimension())
                .map(|g| self.ring.element_from_residues(self.ring.right_translate(x.coeffs(), g)))
                .collect();
            rows.extend(ideal_rows.iter().cloned());
            let span = IdealBasis::span_of(&self.ring, &rows)?;
            if span.contains_one() {
                units.push(i);
            }
        }
        Ok(units)
    }

    fn unit_table(&self, mut units: Vec<usize>) -> Result<UnitGroup> {
        let one = self.residue_index(&self.ideal.reduce(self.ring.one().coeffs()));
        let pos = units
            .iter()
            .position(|&u| u == one)
            .ok_or_else(|| Error::InvariantViolation("1 is not among the units".into()))?;
        units.remove(pos);
        units.insert(0, one);
        let k = units.len();
        if !k.is_power_of_two() {
            return Err(Error::InvariantViolation(format!("unit group has order {k}, not a power of 2")));
        }
        if k > MAX_TABLE_ORDER {
            return Err(Error::SizeCap {
                what: "unit group",
                size: k,
                cap: MAX_TABLE_ORDER,
            });
        }
        let mut unit_of = vec![usize::MAX; self.size().unwrap_or(0)];
        for (u, &r) in units.iter().enumerate() {
            unit_of[r] = u;
        }
        let residues: Vec<RingElement> = units.iter().map(|&r| self.residue(r)).collect();
        let mut mul = vec![0usize; k * k];
        for (a, x) in residues.iter().enumerate() {
            for (b, y) in residues.iter().enumerate() {
                let p = self.ring.convolve(x.coeffs(), y.coeffs());
                let r = self.residue_index(&self.ideal.reduce(&p));
                let u = unit_of[r];
                if u == usize::MAX {
                    return Err(Error::InvariantViolation("product of units is not a unit".into()));
                }
                mul[a * k + b] = u;
            }
        }
        let group = CayleyGroup::from_table(k, mul, Vec::new())?;
        Ok(UnitGroup { group, residues })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::{abelian_invariants, build_group};
    use crate::group_ring::ideal_closure;
    use std::sync::Arc;

    fn ring(spec: &str, m: u32) -> GroupRing {
        GroupRing::new(Arc::new(build_group(spec).unwrap()), m).unwrap()
    }

    #[test]
    fn units_of_z2_c8() {
        let q = QuotientRing::full(ring("C8", 1));
        let u = q.unit_group().unwrap();
        assert_eq!(u.group.order(), 128);
        assert_eq!(abelian_invariants(&u.group).unwrap(), vec![8, 4, 2, 2]);
    }

    #[test]
    fn c8_fixture_units() {
        let r = ring("C8", 1);
        let a = r.group().generators()[0].element;
        let g: Vec<usize> = [0, 1, 4, 5].iter().map(|&e| r.group().pow(a, e)).collect();
        let ideal = ideal_closure(&r, &[r.sum_of(&g)]).unwrap();
        let q = QuotientRing::new(r, ideal).unwrap();
        assert_eq!(q.size(), Some(32));
        let u = q.unit_group().unwrap();
        assert_eq!(abelian_invariants(&u.group).unwrap(), vec![8, 2]);
    }

    #[test]
    fn field_of_two_elements_has_trivial_units() {
        // Z_2[C2] / <1 + a> is the field with two elements
        let r = ring("C2", 1);
        let ideal = ideal_closure(&r, &[r.sum_of(&[0, 1])]).unwrap();
        let q = QuotientRing::new(r, ideal).unwrap();
        assert_eq!(q.size(), Some(2));
        assert_eq!(q.unit_group().unwrap().group.order(), 1);
    }

    #[test]
    fn residue_numbering_round_trips() {
        let r = ring("D8", 2);
        let i = r.group().generators()[0].element;
        let ideal = ideal_closure(&r, &[r.scale(&r.sum_of(&[0, i]), 2)]).unwrap();
        let q = QuotientRing::new(r, ideal).unwrap();
        for idx in [0, 1, 7, 100] {
            let v = q.residue(idx);
            assert_eq!(q.reduce(&v).unwrap(), v);
            assert_eq!(q.residue_index(v.coeffs()), idx);
        }
    }

    #[test]
    fn unclosed_ideal_is_rejected() {
        let r = ring("C4", 1);
        let b = IdealBasis::span_of(&r, &[r.sum_of(&[0, 1])]).unwrap();
        assert!(matches!(QuotientRing::new(r, b), Err(Error::UnclosedIdeal)));
    }

    #[test]
    fn inverse_search_agrees_with_augmentation() {
        let q = QuotientRing::full(ring("C2xC2", 2));
        let by_search = q.units_by_inverse_search().unwrap();
        let by_aug: Vec<usize> = (0..256)
            .filter(|&i| q.ring().augmentation(&q.residue(i)) & 1 == 1)
            .collect();
        assert_eq!(by_search, by_aug);
    }
}
