use crate::error::{Error, Result};
use crate::group_core::todd_coxeter;
use crate::group_core::words::{Cursor, Letter, WordExpr};
use crate::group_core::{CayleyGroup, Generator, MAX_ORDER};

/// A relator together with the text it was parsed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub text: String,
    pub expr: WordExpr,
}

impl Relator {
    pub fn letters(&self) -> Vec<Letter> {
        self.expr.letters()
    }

    /// `Some((g, k))` when the relator is the pure power `g^k`.
    fn pure_power(&self) -> Option<(usize, u64)> {
        let letters = self.letters();
        let (g, inv) = *letters.first()?;
        if letters.iter().all(|&l| l == (g, inv)) {
            Some((g, letters.len() as u64))
        } else {
            None
        }
    }
}

/// Generators and relators; the presented group is `F(gens) / <<relators>>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Relator>,
}

/// Coset-table size at which enumeration gives up.
pub const DEFAULT_COSET_LIMIT: usize = 1 << 20;

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Relator>) -> Self {
        Presentation { generators, relators }
    }

    /// Parses a comma-separated relator list against `generators`.
    pub fn from_relators(generators: &[&str], relators: &str) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let relators = parse_relators(relators, &generators)?;
        Ok(Presentation { generators, relators })
    }

    /// Parses the presentation file format:
    ///
    /// ```text
    /// gens: a b
    /// rels: a^8, a^4*b^-2, b*a*b^-1*a
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_file_format(text: &str) -> Result<Self> {
        let mut gens: Option<Vec<String>> = None;
        let mut rels: Option<String> = None;
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let trimmed = line.trim();
            let here = offset;
            offset += line.len();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("gens:") {
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                for n in &names {
                    let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !valid {
                        return Err(Error::parse(here, "generator name", n.clone()));
                    }
                }
                gens = Some(names);
            } else if let Some(rest) = trimmed.strip_prefix("rels:") {
                rels = Some(rest.to_string());
            } else {
                return Err(Error::parse(here, "'gens:' or 'rels:' line", trimmed.to_string()));
            }
        }
        let generators = gens.ok_or_else(|| Error::parse(0, "'gens:' line", "none"))?;
        if generators.is_empty() {
            return Err(Error::parse(0, "at least one generator", "none"));
        }
        let relators = match rels {
            Some(r) => parse_relators(&r, &generators)?,
            None => Vec::new(),
        };
        Ok(Presentation { generators, relators })
    }

    /// Enumerates the group and checks that every pure-power relator `g^k`
    /// gives `g` order exactly `k`, and that no generator collapses.
    pub fn build(&self) -> Result<CayleyGroup> {
        self.build_with_limit(DEFAULT_COSET_LIMIT)
    }

    pub fn build_with_limit(&self, coset_limit: usize) -> Result<CayleyGroup> {
        let letters: Vec<Vec<Letter>> = self.relators.iter().map(|r| r.letters()).collect();
        let table = todd_coxeter::enumerate(self.generators.len(), &letters, coset_limit, MAX_ORDER)?;
        let (order, mul, gen_elements) = table.into_group_table();
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .zip(&gen_elements)
            .map(|(name, &element)| Generator {
                name: name.clone(),
                element,
            })
            .collect();
        let group = CayleyGroup::from_table(order, mul, generators)?;

        for r in &self.relators {
            if let Some((g, k)) = r.pure_power() {
                let actual = group.element_order(gen_elements[g]) as u64;
                if actual != k {
                    return Err(Error::InconsistentRelator {
                        relator: r.text.clone(),
                        detail: format!(
                            "declares {} of order {k} but the presented group gives order {actual}",
                            self.generators[g]
                        ),
                    });
                }
            }
        }
        for (g, &e) in gen_elements.iter().enumerate() {
            let declared_trivial = self
                .relators
                .iter()
                .any(|r| r.pure_power() == Some((g, 1)));
            if e == 0 && !declared_trivial {
                let all: Vec<&str> = self.relators.iter().map(|r| r.text.as_str()).collect();
                return Err(Error::InconsistentRelator {
                    relator: all.join(", "),
                    detail: format!("generator {} collapses to the identity", self.generators[g]),
                });
            }
        }
        Ok(group)
    }
}

fn parse_relators(text: &str, generators: &[String]) -> Result<Vec<Relator>> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in split_top_level(text) {
        let trimmed = piece.trim();
        let lead = piece.len() - piece.trim_start().len();
        if trimmed.is_empty() {
            start += piece.len() + 1;
            continue;
        }
        let mut cursor = Cursor::new(trimmed);
        let expr = cursor
            .parse_word(generators)
            .map_err(|e| shift(e, start + lead))?;
        if !cursor.at_end() {
            return Err(shift(cursor.error("',' or end of relators"), start + lead));
        }
        out.push(Relator {
            text: trimmed.to_string(),
            expr,
        });
        start += piece.len() + 1;
    }
    Ok(out)
}

/// Splits on commas that are not inside brackets.
fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut last = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[last..i]);
                last = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[last..]);
    parts
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse {
            position,
            expected,
            found,
        } => Error::Parse {
            position: position + by,
            expected,
            found,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_format_round_trip() {
        let p = Presentation::parse_file_format("gens: a b\nrels: a^8, a^4*b^-2, b*a*b^-1*a\n").unwrap();
        assert_eq!(p.generators, vec!["a", "b"]);
        assert_eq!(p.relators.len(), 3);
        let g = p.build().unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.exponent(), 8);
    }

    #[test]
    fn commutator_with_word_argument() {
        let p = Presentation::from_relators(&["x", "y"], "x^4, y^2, [y, x^2], (x*y)^2").unwrap();
        assert_eq!(p.build().unwrap().order(), 8);
    }

    #[test]
    fn inconsistent_power_is_reported() {
        // b^2 = 1 together with a^4 = b^2 kills a^4
        let p = Presentation::from_relators(&["a", "b"], "a^8, b^2, a^4*b^-2, b*a*b^-1*a^-3").unwrap();
        match p.build() {
            Err(Error::InconsistentRelator { relator, .. }) => assert_eq!(relator, "a^8"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infinite_presentation_hits_a_cap() {
        let p = Presentation::from_relators(&["a", "b"], "a^2, b^2").unwrap();
        assert!(matches!(
            p.build_with_limit(4096),
            Err(Error::EnumerationLimit { .. }) | Err(Error::OrderCap { .. })
        ));
    }

    #[test]
    fn missing_gens_line() {
        assert!(Presentation::parse_file_format("rels: a^2").is_err());
        assert!(Presentation::parse_file_format("gens: a\nfoo: bar").is_err());
    }

    #[test]
    fn relator_syntax_error_position_is_absolute() {
        match Presentation::from_relators(&["a"], "a^2, a*") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("unexpected {other:?}"),
        }
    }
}
