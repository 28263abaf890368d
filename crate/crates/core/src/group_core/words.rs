//! Group words: a small recursive-descent parser shared by presentation files
//! and ring-element literals.
//!
//! ```text
//! word   := factor ( '*'? factor )*
//! factor := atom [ '^' ['-'] int ]
//! atom   := gen | '1' | '[' word ',' word ']' | '(' word ')'
//! ```
//!
//! Generator names are matched longest-first against the declared names, so
//! `x1x2` reads as `x1 * x2` and `ij` as `i * j`. The commutator `[x, y]` is
//! `x^-1 y^-1 x y`.

use crate::error::{Error, Result};
use crate::group_core::CayleyGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    Identity,
    Gen(usize),
    Product(Vec<WordExpr>),
    Power(Box<WordExpr>, i64),
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

/// A generator letter: `(generator index, inverted)`.
pub type Letter = (usize, bool);

impl WordExpr {
    /// Free-group expansion into letters (no cancellation).
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.push_letters(&mut out);
        out
    }

    fn push_letters(&self, out: &mut Vec<Letter>) {
        match self {
            WordExpr::Identity => {}
            WordExpr::Gen(g) => out.push((*g, false)),
            WordExpr::Product(parts) => parts.iter().for_each(|p| p.push_letters(out)),
            WordExpr::Power(base, k) => {
                let mut b = base.letters();
                if *k < 0 {
                    b = invert_letters(&b);
                }
                for _ in 0..k.unsigned_abs() {
                    out.extend_from_slice(&b);
                }
            }
            WordExpr::Commutator(x, y) => {
                let x = x.letters();
                let y = y.letters();
                out.extend(invert_letters(&x));
                out.extend(invert_letters(&y));
                out.extend(x);
                out.extend(y);
            }
        }
    }

    /// Evaluates the word in a group whose generator list matches the indices.
    pub fn evaluate(&self, group: &CayleyGroup) -> usize {
        let gens = group.generators();
        match self {
            WordExpr::Identity => group.identity(),
            WordExpr::Gen(g) => gens[*g].element,
            WordExpr::Product(parts) => parts
                .iter()
                .fold(group.identity(), |acc, p| group.mul(acc, p.evaluate(group))),
            WordExpr::Power(base, k) => group.pow(base.evaluate(group), *k),
            WordExpr::Commutator(x, y) => group.commutator(x.evaluate(group), y.evaluate(group)),
        }
    }
}

pub fn invert_letters(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|&(g, inv)| (g, !inv)).collect()
}

/// Character cursor with whitespace skipping and position tracking.
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    /// Moves past `bytes` bytes of the remaining input.
    pub fn advance(&mut self, bytes: usize) {
        self.pos = (self.pos + bytes).min(self.src.len());
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("'{c}'")))
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn error(&mut self, expected: impl Into<String>) -> Error {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        Error::parse(self.pos, expected, found)
    }

    /// Unsigned decimal integer.
    pub fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("integer"));
        }
        let start = self.pos;
        self.pos += digits.len();
        digits
            .parse()
            .map_err(|_| Error::parse(start, "integer that fits in 64 bits", digits))
    }

    pub fn parse_int(&mut self) -> Result<i64> {
        let negative = self.eat('-');
        let start = self.pos;
        let v = self.parse_uint()?;
        let v = i64::try_from(v).map_err(|_| Error::parse(start, "smaller integer", v.to_string()))?;
        Ok(if negative { -v } else { v })
    }

    /// Longest declared generator name at the cursor.
    fn parse_generator(&mut self, names: &[String]) -> Result<usize> {
        self.skip_ws();
        let rest = self.rest();
        let run: String = rest
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_')
            .collect();
        let best = names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_empty() && run.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len());
        match best {
            Some((i, n)) => {
                self.pos += n.len();
                Ok(i)
            }
            None => Err(Error::parse(
                self.pos,
                format!("a generator ({})", names.join(", ")),
                format!("'{run}'"),
            )),
        }
    }

    pub fn at_factor_start(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == '[' || c == '(' || c == '1')
    }

    pub fn parse_word(&mut self, names: &[String]) -> Result<WordExpr> {
        let mut factors = vec![self.parse_factor(names)?];
        loop {
            if self.eat('*') {
                if !self.at_factor_start() {
                    return Err(self.error("a generator, '1', '[' or '(' after '*'"));
                }
                factors.push(self.parse_factor(names)?);
            } else if self.at_factor_start() {
                factors.push(self.parse_factor(names)?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            WordExpr::Product(factors)
        })
    }

    fn parse_factor(&mut self, names: &[String]) -> Result<WordExpr> {
        let atom = match self.peek() {
            Some('[') => {
                self.pos += 1;
                let x = self.parse_word(names)?;
                self.expect(',')?;
                let y = self.parse_word(names)?;
                self.expect(']')?;
                WordExpr::Commutator(Box::new(x), Box::new(y))
            }
            Some('(') => {
                self.pos += 1;
                let w = self.parse_word(names)?;
                self.expect(')')?;
                w
            }
            Some('1') => {
                self.pos += 1;
                WordExpr::Identity
            }
            Some(c) if c.is_ascii_alphabetic() => WordExpr::Gen(self.parse_generator(names)?),
            _ => return Err(self.error("a generator, '1', '[' or '(' ")),
        };
        if self.eat('^') {
            let k = self.parse_int()?;
            Ok(WordExpr::Power(Box::new(atom), k))
        } else {
            Ok(atom)
        }
    }
}

/// Parses a complete word, rejecting trailing input.
pub fn parse_word(text: &str, names: &[String]) -> Result<WordExpr> {
    let mut c = Cursor::new(text);
    let w = c.parse_word(names)?;
    if !c.at_end() {
        return Err(c.error("end of word"));
    }
    Ok(w)
}
