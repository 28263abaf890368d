//! Two ring identities used by the characteristic-2^m screens, checked by
//! direct computation in group rings of cyclic groups.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group_core::build_group;
use crate::group_ring::{ideal_closure, GroupRing, QuotientRing, MAX_CHAR_EXPONENT};

/// Multiplicative order of the image of `t` in
/// `Z_2[C_{2^n}] / <1 + t + t^2 + t^k>`, for `2 <= n <= 6` and odd
/// `1 <= k < 2^n`.
pub fn cyclic_quotient_order(n: u32, k: u64) -> Result<u64> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} outside 2..=6")));
    }
    if k.is_multiple_of(2) || k >= 1 << n {
        return Err(Error::InvalidArgument(format!("k = {k} must be odd and below 2^{n}")));
    }
    let group = Arc::new(build_group(&format!("C{}", 1u64 << n))?);
    let ring = GroupRing::new(group, 1)?;
    let t = ring.group().generators()[0].element;
    let g = ring.group();
    let relation = ring.sum_of(&[0, t, g.pow(t, 2), g.pow(t, k as i64)]);
    let ideal = ideal_closure(&ring, &[relation])?;
    let q = QuotientRing::new(ring.clone(), ideal)?;
    let one = q.reduce(&ring.one())?;
    let x = q.reduce(&ring.basis_element(t))?;
    let mut power = x.clone();
    let mut order = 1;
    while power != one {
        power = q.multiply(&power, &x)?;
        order += 1;
        if order > 1 << n {
            return Err(Error::InvariantViolation("t has no finite order in the quotient".into()));
        }
    }
    Ok(order)
}

/// Checks `(1 + 2t)^(2^(m-1)) = 1` over `Z_{2^m}` with `t` a free
/// indeterminate, realized in `Z_{2^m}[C_{2^m}]` where the expansion (degree
/// `2^(m-1)`) does not wrap around.
pub fn scalar_unit_identity_check(m: u32) -> Result<bool> {
    if !(1..=MAX_CHAR_EXPONENT).contains(&m) {
        return Err(Error::InvalidArgument(format!("m = {m} outside 1..={MAX_CHAR_EXPONENT}")));
    }
    let group = Arc::new(build_group(&format!("C{}", 1u64 << m))?);
    let ring = GroupRing::new(group, m)?;
    let t = ring.group().generators()[0].element;
    let x = ring.add(&ring.one(), &ring.scale(&ring.basis_element(t), 2))?;
    let p = ring.power(&x, 1 << (m - 1))?;
    Ok(p == ring.one())
}
