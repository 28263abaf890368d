use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group_core::{minimal_generators, CayleyGroup};

/// Largest characteristic exponent: rings of characteristic up to `2^6`.
pub const MAX_CHAR_EXPONENT: u32 = 6;

/// The group ring `Z_{2^m}[G]`.
#[derive(Clone, Debug)]
pub struct GroupRing {
    group: Arc<CayleyGroup>,
    m: u32,
    translators: Vec<usize>,
}

/// An element of `Z_{2^m}[G]`: one residue per group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    m: u32,
    coeffs: Vec<u8>,
}

impl RingElement {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> u8 {
        self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Group elements with nonzero coefficient, in index order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&g| self.coeffs[g] != 0).collect()
    }

    pub fn into_coeffs(self) -> Vec<u8> {
        self.coeffs
    }
}

impl GroupRing {
    pub fn new(group: Arc<CayleyGroup>, m: u32) -> Result<Self> {
        if !(1..=MAX_CHAR_EXPONENT).contains(&m) {
            return Err(Error::InvalidArgument(format!(
                "characteristic exponent {m} outside 1..={MAX_CHAR_EXPONENT}"
            )));
        }
        let translators = minimal_generators(&group);
        Ok(GroupRing { group, m, translators })
    }

    pub fn group(&self) -> &CayleyGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<CayleyGroup> {
        &self.group
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Minimal generating sequence of `G` used for ideal closure.
    pub fn translators(&self) -> &[usize] {
        &self.translators
    }

    pub fn modulus(&self) -> u32 {
        1 << self.m
    }

    pub fn dimension(&self) -> usize {
        self.group.order()
    }

    fn mask(&self) -> u8 {
        (self.modulus() - 1) as u8
    }

    /// Builds an element from coefficients, reducing them modulo `2^m`.
    pub fn element(&self, coeffs: &[u64]) -> Result<RingElement> {
        if coeffs.len() != self.dimension() {
            return Err(Error::RingMismatch);
        }
        let modulus = self.modulus() as u64;
        Ok(RingElement {
            m: self.m,
            coeffs: coeffs.iter().map(|&c| (c % modulus) as u8).collect(),
        })
    }

    pub(crate) fn element_from_residues(&self, coeffs: Vec<u8>) -> RingElement {
        debug_assert_eq!(coeffs.len(), self.dimension());
        RingElement { m: self.m, coeffs }
    }

    pub fn zero(&self) -> RingElement {
        self.element_from_residues(vec![0; self.dimension()])
    }

    pub fn one(&self) -> RingElement {
        self.basis_element(0)
    }

    /// The group element `g` as a ring element.
    pub fn basis_element(&self, g: usize) -> RingElement {
        let mut c = vec![0; self.dimension()];
        c[g] = 1;
        self.element_from_residues(c)
    }

    /// Sum of the given group elements, each with coefficient 1.
    pub fn sum_of(&self, elements: &[usize]) -> RingElement {
        let mut c = vec![0u8; self.dimension()];
        let mask = self.mask();
        for &g in elements {
            c[g] = c[g].wrapping_add(1) & mask;
        }
        self.element_from_residues(c)
    }

    pub fn check(&self, x: &RingElement) -> Result<()> {
        if x.m != self.m || x.coeffs.len() != self.dimension() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        let mask = self.mask();
        Ok(self.element_from_residues(
            x.coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| a.wrapping_add(b) & mask)
                .collect(),
        ))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        let mask = self.mask();
        Ok(self.element_from_residues(
            x.coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| a.wrapping_sub(b) & mask)
                .collect(),
        ))
    }

    pub fn scale(&self, x: &RingElement, s: u64) -> RingElement {
        let mask = self.mask() as u64;
        self.element_from_residues(x.coeffs.iter().map(|&a| ((a as u64 * s) & mask) as u8).collect())
    }

    /// Group-convolution product.
    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.element_from_residues(self.convolve(&x.coeffs, &y.coeffs)))
    }

    pub(crate) fn convolve(&self, x: &[u8], y: &[u8]) -> Vec<u8> {
        let n = self.dimension();
        let mask = self.mask();
        let mut out = vec![0u8; n];
        let ys: Vec<(usize, u8)> = (0..n).filter(|&h| y[h] != 0).map(|h| (h, y[h])).collect();
        for (g, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = self.group.table_row(g);
            for &(h, b) in &ys {
                let k = row[h] as usize;
                out[k] = out[k].wrapping_add(a.wrapping_mul(b));
            }
        }
        for c in &mut out {
            *c &= mask;
        }
        out
    }

    /// `g * x`: coefficient of `h` moves to `g h`.
    pub fn left_translate(&self, g: usize, x: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; x.len()];
        for (h, &c) in x.iter().enumerate() {
            out[self.group.mul(g, h)] = c;
        }
        out
    }

    /// `x * g`: coefficient of `h` moves to `h g`.
    pub fn right_translate(&self, x: &[u8], g: usize) -> Vec<u8> {
        let mut out = vec![0u8; x.len()];
        for (h, &c) in x.iter().enumerate() {
            out[self.group.mul(h, g)] = c;
        }
        out
    }

    /// Sum of coefficients modulo `2^m`.
    pub fn augmentation(&self, x: &RingElement) -> u32 {
        x.coeffs.iter().map(|&c| c as u32).sum::<u32>() & (self.modulus() - 1)
    }

    /// Units of `Z_{2^m}[G]` are exactly the elements of odd augmentation,
    /// since the ring is local with maximal ideal the even-augmentation
    /// elements.
    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.augmentation(x) & 1 == 1
    }

    /// Inverse of a unit. With `s` the inverse of the augmentation, `s x =
    /// 1 - n` where `n` lies in the nilpotent maximal ideal, so
    /// `(s x)^-1 = (1 + n)(1 + n^2)(1 + n^4)...` terminates.
    pub fn invert(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        if !self.is_unit(x) {
            return Err(Error::NotUnit);
        }
        let aug = self.augmentation(x) as u64;
        let s = crate::group_ring::odd_inverse(aug, self.m);
        let sx = self.scale(x, s);
        let one = self.one();
        let mut n = self.sub(&one, &sx)?;
        let mut inv = one.clone();
        for _ in 0..64 {
            if n.is_zero() {
                break;
            }
            inv = self.multiply(&inv, &self.add(&one, &n)?)?;
            n = self.multiply(&n, &n)?;
        }
        if !n.is_zero() {
            return Err(Error::InvariantViolation("radical element is not nilpotent".into()));
        }
        let inv = self.scale(&inv, s);
        if self.multiply(&inv, x)? != one || self.multiply(x, &inv)? != one {
            return Err(Error::InvariantViolation("computed inverse failed verification".into()));
        }
        Ok(inv)
    }

    pub fn power(&self, x: &RingElement, mut e: u64) -> Result<RingElement> {
        self.check(x)?;
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            base = self.multiply(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }
}
