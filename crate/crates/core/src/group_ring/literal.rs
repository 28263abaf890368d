//! Text form of group-ring elements.
//!
//! ```text
//! elem := ['-'] term (('+' | '-') term)*
//! term := coeff ['*'] word | coeff | word
//! ```
//!
//! Words follow the group-word grammar, so `2i+2`, `2*i + 2` and
//! `1+x1+x1^2+x1^3*[x2,x1]` are all accepted. Coefficients must be below the
//! characteristic.

use crate::error::{Error, Result};
use crate::group_core::words::Cursor;
use crate::group_ring::{GroupRing, RingElement};

pub fn parse_element_literal(text: &str, ring: &GroupRing) -> Result<RingElement> {
    let group = ring.group();
    let names: Vec<String> = group.generators().iter().map(|g| g.name.clone()).collect();
    let modulus = ring.modulus() as u64;
    let mut coeffs = vec![0u64; ring.dimension()];
    let mut c = Cursor::new(text);
    let mut negative = c.eat('-');
    loop {
        c.skip_ws();
        let start = c.pos();
        let starts_with_digit = c.peek().is_some_and(|ch| ch.is_ascii_digit());
        let (coeff, element) = if starts_with_digit {
            let k = c.parse_uint()?;
            if k >= modulus {
                return Err(Error::parse(start, format!("a coefficient below {modulus}"), k.to_string()));
            }
            let explicit = c.eat('*');
            let juxtaposed = matches!(c.peek(), Some(ch) if ch.is_ascii_alphabetic() || ch == '[' || ch == '(');
            if explicit || juxtaposed {
                (k, c.parse_word(&names)?.evaluate(group))
            } else {
                (k, group.identity())
            }
        } else {
            (1, c.parse_word(&names)?.evaluate(group))
        };
        let signed = if negative { modulus - coeff } else { coeff };
        coeffs[element] = (coeffs[element] + signed) % modulus;
        if c.eat('+') {
            negative = false;
        } else if c.eat('-') {
            negative = true;
        } else if c.at_end() {
            break;
        } else {
            return Err(c.error("'+', '-' or end of element"));
        }
    }
    ring.element(&coeffs)
}

/// Canonical text: terms in element-index order, coefficient 1 omitted,
/// `0` for the zero element.
pub fn format_element(x: &RingElement, ring: &GroupRing) -> String {
    let group = ring.group();
    let terms: Vec<String> = x
        .support()
        .into_iter()
        .map(|g| {
            let c = x.coeff(g);
            let label = group.label(g);
            match (c, label.as_str()) {
                (_, "1") => c.to_string(),
                (1, _) => label,
                _ => format!("{c}*{label}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::build_group;
    use std::sync::Arc;

    fn ring(spec: &str, m: u32) -> GroupRing {
        GroupRing::new(Arc::new(build_group(spec).unwrap()), m).unwrap()
    }

    #[test]
    fn fixture_literals_parse() {
        let r = ring("C8", 1);
        let x = parse_element_literal("1+a+a^4+a^5", &r).unwrap();
        assert_eq!(x.support().len(), 4);
        assert_eq!(r.augmentation(&x), 0);

        let r = ring("Q8", 2);
        let x = parse_element_literal("2*i+2", &r).unwrap();
        assert_eq!(x, parse_element_literal("2i + 2", &r).unwrap());
        assert_eq!(x.support().len(), 2);

        let r = ring("SG64_88", 1);
        let x = parse_element_literal("1+x1+x1^2+x1^3*[x2,x1]", &r).unwrap();
        assert_eq!(x.support().len(), 4);
    }

    #[test]
    fn format_round_trips() {
        let r = ring("D8", 3);
        let x = parse_element_literal("3*a*b + 5 - a^2 + b", &r).unwrap();
        let text = format_element(&x, &r);
        assert_eq!(parse_element_literal(&text, &r).unwrap(), x);
        assert_eq!(format_element(&r.zero(), &r), "0");
        assert_eq!(parse_element_literal("0", &r).unwrap(), r.zero());
    }

    #[test]
    fn literal_errors() {
        let r = ring("C4", 1);
        assert!(matches!(parse_element_literal("2*a", &r), Err(Error::Parse { .. })));
        assert!(parse_element_literal("1+b", &r).is_err());
        assert!(parse_element_literal("1+", &r).is_err());
        assert!(parse_element_literal("a a^", &r).is_err());
        match parse_element_literal("1 + a ? a", &r) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn repeated_terms_accumulate() {
        let r = ring("C4", 2);
        let x = parse_element_literal("a + a + a", &r).unwrap();
        assert_eq!(x.coeff(r.group().generators()[0].element), 3);
        let y = parse_element_literal("a-a", &r).unwrap();
        assert!(y.is_zero());
    }
}
