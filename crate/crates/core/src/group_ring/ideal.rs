use crate::error::{Error, Result};
use crate::group_ring::linalg::{BitRow, Gf2Basis, HowellBasis};
use crate::group_ring::{GroupRing, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Span {
    Gf2(Gf2Basis),
    Howell(HowellBasis),
}

/// Canonical basis of an additive subgroup of `Z_{2^m}[G]`, normally a
/// two-sided ideal. `closed` is set only after closure under left and right
/// translation has been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    m: u32,
    dimension: usize,
    span: Span,
    closed: bool,
}

impl IdealBasis {
    /// The zero ideal.
    pub fn zero(ring: &GroupRing) -> Self {
        let n = ring.dimension();
        let span = if ring.m() == 1 {
            Span::Gf2(Gf2Basis::new(n))
        } else {
            Span::Howell(HowellBasis::new(n, ring.m()))
        };
        IdealBasis {
            m: ring.m(),
            dimension: n,
            span,
            closed: true,
        }
    }

    /// Additive span of `rows`, not yet checked for closure.
    pub fn span_of(ring: &GroupRing, rows: &[RingElement]) -> Result<Self> {
        let mut b = IdealBasis::zero(ring);
        b.closed = false;
        for r in rows {
            ring.check(r)?;
            b.insert(r.coeffs());
        }
        Ok(b)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Adds a vector to the span; true if the span grew.
    fn insert(&mut self, v: &[u8]) -> bool {
        match &mut self.span {
            Span::Gf2(b) => b.insert(&BitRow::from_bits(v)),
            Span::Howell(b) => b.insert(v),
        }
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        match &self.span {
            Span::Gf2(b) => {
                let mut r = BitRow::from_bits(v);
                b.reduce(&mut r);
                r.to_bits(self.dimension)
            }
            Span::Howell(b) => {
                let mut w = v.to_vec();
                b.reduce(&mut w);
                w
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        match &self.span {
            Span::Gf2(b) => b.contains(&BitRow::from_bits(v)),
            Span::Howell(b) => b.contains(v),
        }
    }

    /// Canonical rows in pivot-column order.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        match &self.span {
            Span::Gf2(b) => b.rows().iter().map(|r| r.to_bits(self.dimension)).collect(),
            Span::Howell(b) => b.rows().map(|(_, r)| r.clone()).collect(),
        }
    }

    pub fn row_elements(&self, ring: &GroupRing) -> Vec<RingElement> {
        self.rows().into_iter().map(|r| ring.element_from_residues(r)).collect()
    }

    /// log2 of the number of elements of the ideal.
    pub fn size_log2(&self) -> u32 {
        match &self.span {
            Span::Gf2(b) => b.rank() as u32,
            Span::Howell(b) => b.size_log2(),
        }
    }

    /// For each coordinate, the number of bits a canonical residue can carry
    /// there: `m` for non-pivot columns, `e` for a pivot `2^e`.
    pub fn residue_bits(&self) -> Vec<u32> {
        let mut bits = vec![self.m; self.dimension];
        match &self.span {
            Span::Gf2(b) => {
                for &p in b.pivots() {
                    bits[p] = 0;
                }
            }
            Span::Howell(b) => {
                for (j, e) in b.pivots() {
                    bits[j] = e;
                }
            }
        }
        bits
    }

    /// log2 of the size of the quotient ring.
    pub fn quotient_size_log2(&self) -> u32 {
        self.m * self.dimension as u32 - self.size_log2()
    }

    pub fn contains_one(&self) -> bool {
        let mut one = vec![0u8; self.dimension];
        one[0] = 1;
        self.contains(&one)
    }

    /// True if every element of the ideal has even augmentation.
    pub fn inside_even_augmentation(&self) -> bool {
        self.rows()
            .iter()
            .all(|r| r.iter().map(|&c| c as u32).sum::<u32>() % 2 == 0)
    }

    /// Checks `g x` and `x g` against the span for every row `x` and every
    /// translator `g`, setting the closed flag on success.
    pub fn verify_closed(&mut self, ring: &GroupRing) -> bool {
        if self.m != ring.m() || self.dimension != ring.dimension() {
            return false;
        }
        let rows = self.rows();
        let ok = rows.iter().all(|r| {
            ring.translators().iter().all(|&g| {
                self.contains(&ring.left_translate(g, r)) && self.contains(&ring.right_translate(r, g))
            })
        });
        self.closed = ok;
        ok
    }
}

/// Smallest two-sided ideal containing `gens`, as a closed canonical basis.
/// Fails with `ImproperIdeal` if the closure contains 1.
pub fn ideal_closure(ring: &GroupRing, gens: &[RingElement]) -> Result<IdealBasis> {
    let basis = close_within_limit(ring, gens, u32::MAX)?.ok_or(Error::ImproperIdeal)?;
    Ok(basis)
}

/// Closure that gives up (returning `None`) as soon as the ideal has more
/// than `2^max_size_log2` elements or contains 1. Used by the search to
/// abandon candidates early.
pub fn close_within_limit(ring: &GroupRing, gens: &[RingElement], max_size_log2: u32) -> Result<Option<IdealBasis>> {
    let mut basis = IdealBasis::zero(ring);
    basis.closed = false;
    let mut queue: Vec<Vec<u8>> = Vec::new();
    for g in gens {
        ring.check(g)?;
        if basis.insert(g.coeffs()) {
            queue.push(g.coeffs().to_vec());
        }
    }
    while let Some(v) = queue.pop() {
        if basis.size_log2() > max_size_log2 || basis.contains_one() {
            return Ok(None);
        }
        for &g in ring.translators() {
            for w in [ring.left_translate(g, &v), ring.right_translate(&v, g)] {
                if basis.insert(&w) {
                    queue.push(w);
                }
            }
        }
    }
    if basis.size_log2() > max_size_log2 || basis.contains_one() {
        return Ok(None);
    }
    basis.closed = true;
    Ok(Some(basis))
}
