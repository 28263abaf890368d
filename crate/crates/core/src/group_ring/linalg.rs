//! Canonical bases of submodules of `(Z_{2^m})^n`.
//!
//! For `m = 1` rows are bit-packed and kept in reduced row echelon form. For
//! `m >= 2` rows are kept in Howell form: one row per pivot column, pivot
//! entries powers of two, entries above a pivot reduced below it, and closed
//! under the annihilating multiples `2^(m-e) * row` so that reduction decides
//! membership.

/// A bit-packed vector over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zero(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut r = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                r.flip(i);
            }
        }
        r
    }

    pub fn to_bits(&self, len: usize) -> Vec<u8> {
        (0..len).map(|i| self.get(i) as u8).collect()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

/// Reduced row echelon basis over GF(2), rows sorted by pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Basis {
    len: usize,
    rows: Vec<BitRow>,
    pivots: Vec<usize>,
}

impl Gf2Basis {
    pub fn new(len: usize) -> Self {
        Gf2Basis {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Clears every pivot coordinate of `v`.
    pub fn reduce(&self, v: &mut BitRow) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_with(row);
            }
        }
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the span. Returns true if the rank grew.
    pub fn insert(&mut self, v: &BitRow) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        let Some(p) = w.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_with(&w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    /// Basis of `{x : <x, r> = 0 for every row r}`, i.e. the null space of
    /// the matrix whose rows are this basis.
    pub fn null_space(&self) -> Gf2Basis {
        let mut out = Gf2Basis::new(self.len);
        let is_pivot = {
            let mut v = vec![false; self.len];
            for &p in &self.pivots {
                v[p] = true;
            }
            v
        };
        for free in (0..self.len).filter(|&c| !is_pivot[c]) {
            let mut x = BitRow::zero(self.len);
            x.flip(free);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if row.get(free) {
                    x.flip(p);
                }
            }
            out.insert(&x);
        }
        out
    }
}

/// Howell-form basis over `Z_{2^m}`. `rows[j]` is the row with pivot column
/// `j`, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellBasis {
    len: usize,
    m: u32,
    rows: Vec<Option<Vec<u8>>>,
}

#[inline]
fn valuation(x: u8) -> u32 {
    x.trailing_zeros()
}

/// Inverse of an odd residue modulo `2^m`.
pub fn odd_inverse(u: u64, m: u32) -> u64 {
    let modulus = 1u64 << m;
    let mut inv = 1u64;
    // Newton iteration doubles the number of correct bits each step
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(inv)));
    }
    inv & (modulus - 1)
}

impl HowellBasis {
    pub fn new(len: usize, m: u32) -> Self {
        HowellBasis {
            len,
            m,
            rows: vec![None; len],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn modulus_bits(&self) -> u32 {
        self.m
    }

    fn mask(&self) -> u8 {
        ((1u16 << self.m) - 1) as u8
    }

    /// Rows in pivot-column order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &Vec<u8>)> {
        self.rows.iter().enumerate().filter_map(|(j, r)| r.as_ref().map(|r| (j, r)))
    }

    /// `(column, pivot valuation)` for every row.
    pub fn pivots(&self) -> Vec<(usize, u32)> {
        self.rows().map(|(j, r)| (j, valuation(r[j]))).collect()
    }

    /// log2 of the number of elements of the span.
    pub fn size_log2(&self) -> u32 {
        self.rows().map(|(j, r)| self.m - valuation(r[j])).sum()
    }

    fn axpy(&self, v: &mut [u8], q: u8, row: &[u8]) {
        let mask = self.mask();
        for (a, &b) in v.iter_mut().zip(row) {
            *a = a.wrapping_sub(q.wrapping_mul(b)) & mask;
        }
    }

    fn scale(&self, v: &[u8], s: u8) -> Vec<u8> {
        let mask = self.mask();
        v.iter().map(|&x| x.wrapping_mul(s) & mask).collect()
    }

    /// Reduces `v` to its canonical representative modulo the span: every
    /// pivot-column entry ends below its pivot.
    pub fn reduce(&self, v: &mut [u8]) {
        for j in 0..self.len {
            if let Some(row) = &self.rows[j] {
                let p = row[j];
                let q = v[j] / p;
                if q != 0 {
                    self.axpy(v, q, row);
                }
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span and restores the canonical form. Returns true if
    /// the span grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        if self.contains(v) {
            return false;
        }
        let mut pending = vec![v.to_vec()];
        while let Some(mut w) = pending.pop() {
            let mut j = 0;
            loop {
                while j < self.len && w[j] == 0 {
                    j += 1;
                }
                if j == self.len {
                    break;
                }
                let e = valuation(w[j]);
                let unit = (w[j] >> e) as u64;
                let inv = odd_inverse(unit, self.m) as u8;
                w = self.scale(&w, inv);
                match self.rows[j].take() {
                    None => {
                        if e > 0 {
                            pending.push(self.scale(&w, 1 << (self.m - e)));
                        }
                        self.rows[j] = Some(w);
                        break;
                    }
                    Some(row) => {
                        let f = valuation(row[j]);
                        if f <= e {
                            self.axpy(&mut w, 1 << (e - f), &row);
                            self.rows[j] = Some(row);
                        } else {
                            let mut old = row;
                            self.axpy(&mut old, 1 << (f - e), &w);
                            pending.push(old);
                            if e > 0 {
                                pending.push(self.scale(&w, 1 << (self.m - e)));
                            }
                            self.rows[j] = Some(w);
                            break;
                        }
                    }
                }
            }
        }
        self.normalize();
        true
    }

    /// Reduces the entries above each pivot.
    fn normalize(&mut self) {
        for j in 0..self.len {
            let Some(row) = self.rows[j].clone() else {
                continue;
            };
            let p = row[j];
            for k in 0..j {
                if let Some(mut other) = self.rows[k].take() {
                    let q = other[j] / p;
                    if q != 0 {
                        self.axpy(&mut other, q, &row);
                    }
                    self.rows[k] = Some(other);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn span_gf2(rows: &[Vec<u8>], len: usize) -> Vec<Vec<u8>> {
        // brute-force: all subset sums
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut v = vec![0u8; len];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, b) in v.iter_mut().zip(r) {
                        *a ^= b;
                    }
                }
            }
            out.insert(v);
        }
        out.into_iter().collect()
    }

    fn span_mod(rows: &[Vec<u8>], len: usize, m: u32) -> std::collections::BTreeSet<Vec<u8>> {
        // breadth-first closure under adding generators
        let modulus = 1u16 << m;
        let mut seen = std::collections::BTreeSet::from([vec![0u8; len]]);
        let mut frontier = vec![vec![0u8; len]];
        while let Some(v) = frontier.pop() {
            for r in rows {
                let w: Vec<u8> = v
                    .iter()
                    .zip(r)
                    .map(|(&a, &b)| ((a as u16 + b as u16) % modulus) as u8)
                    .collect();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        seen
    }

    #[test]
    fn odd_inverses() {
        for m in 1..=6 {
            for u in (1..(1u64 << m)).step_by(2) {
                assert_eq!(u * odd_inverse(u, m) % (1 << m), 1);
            }
        }
    }

    #[test]
    fn null_space_is_orthogonal() {
        let mut b = Gf2Basis::new(5);
        b.insert(&BitRow::from_bits(&[1, 1, 0, 0, 1]));
        b.insert(&BitRow::from_bits(&[0, 1, 1, 1, 0]));
        let k = b.null_space();
        assert_eq!(k.rank(), 3);
        for x in k.rows() {
            for r in b.rows() {
                let mut dot = 0;
                for i in 0..5 {
                    dot ^= (x.get(i) & r.get(i)) as u8;
                }
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn howell_membership_needs_the_annihilator_multiple() {
        // over Z_4, span of (2, 1): contains (0, 2) = 2 * (2, 1)
        let mut h = HowellBasis::new(2, 2);
        h.insert(&[2, 1]);
        assert!(h.contains(&[0, 2]));
        assert_eq!(h.size_log2(), 2);
        assert!(!h.contains(&[0, 1]));
    }

    proptest! {
        #[test]
        fn gf2_span_matches_brute_force(rows in prop::collection::vec(prop::collection::vec(0u8..2, 7), 0..6)) {
            let mut b = Gf2Basis::new(7);
            for r in &rows {
                b.insert(&BitRow::from_bits(r));
            }
            let span = span_gf2(&rows, 7);
            prop_assert_eq!(span.len(), 1usize << b.rank());
            for v in &span {
                prop_assert!(b.contains(&BitRow::from_bits(v)));
            }
        }

        #[test]
        fn howell_span_matches_brute_force(
            m in 2u32..4,
            rows in prop::collection::vec(prop::collection::vec(0u8..8, 4), 1..4),
        ) {
            let mask = (1u8 << m) - 1;
            let rows: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|x| x & mask).collect()).collect();
            let mut h = HowellBasis::new(4, m);
            for r in &rows {
                h.insert(r);
            }
            let span = span_mod(&rows, 4, m);
            prop_assert_eq!(span.len(), 1usize << h.size_log2());
            for v in &span {
                prop_assert!(h.contains(v));
            }
            // reduction is constant on cosets
            let probe: Vec<u8> = (0..4).map(|i| (i as u8 * 3 + 1) & mask).collect();
            let mut a = probe.clone();
            h.reduce(&mut a);
            for v in span.iter().take(16) {
                let mut b: Vec<u8> = probe.iter().zip(v).map(|(&x, &y)| x.wrapping_add(y) & mask).collect();
                h.reduce(&mut b);
                prop_assert_eq!(&a, &b);
            }
        }

        #[test]
        fn howell_form_is_canonical(
            rows in prop::collection::vec(prop::collection::vec(0u8..4, 5), 1..4),
            seed in 0u8..4,
        ) {
            let mut a = HowellBasis::new(5, 2);
            for r in &rows {
                a.insert(r);
            }
            // same span from a different generating list
            let mut b = HowellBasis::new(5, 2);
            let mut gens: Vec<Vec<u8>> = rows.iter().rev().cloned().collect();
            let combo: Vec<u8> = rows[0].iter().zip(rows.last().unwrap())
                .map(|(&x, &y)| (x.wrapping_mul(seed).wrapping_add(y.wrapping_mul(3))) & 3).collect();
            gens.push(combo);
            for r in &gens {
                b.insert(r);
            }
            prop_assert_eq!(a, b);
        }
    }
}
