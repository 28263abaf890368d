//! Built-in groups and the group-spec grammar `spec := atom ('x' atom)*`.
//!
//! Atoms: `Cn`, `Dn`, `Qn`, `QDn` (subscript = group order), `M16`,
//! `SG32_37`, `SG64_88`, `SG64_104`, and `file:<path>` for a presentation
//! file. A file path ends at the next whitespace.

use std::fmt;

use crate::error::{Error, Result};
use crate::group_core::words::Cursor;
use crate::group_core::{direct_product, CayleyGroup, Presentation, MAX_ORDER};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupAtom {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion(usize),
    Quasidihedral(usize),
    M16,
    Sg32_37,
    Sg64_88,
    Sg64_104,
    File(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub factors: Vec<GroupAtom>,
}

impl GroupAtom {
    /// Order for built-in atoms; `None` for files.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupAtom::Cyclic(n) | GroupAtom::Dihedral(n) | GroupAtom::Quaternion(n) | GroupAtom::Quasidihedral(n) => {
                Some(*n)
            }
            GroupAtom::M16 => Some(16),
            GroupAtom::Sg32_37 => Some(32),
            GroupAtom::Sg64_88 | GroupAtom::Sg64_104 => Some(64),
            GroupAtom::File(_) => None,
        }
    }

    pub fn presentation(&self) -> Result<Presentation> {
        let p = |gens: &[&str], rels: String| Presentation::from_relators(gens, &rels);
        match self {
            GroupAtom::Cyclic(n) => p(&["a"], format!("a^{n}")),
            GroupAtom::Dihedral(n) => p(&["a", "b"], format!("a^{}, b^2, (a*b)^2", n / 2)),
            GroupAtom::Quaternion(8) => p(&["i", "j"], "i^4, i^2*j^-2, j*i*j^-1*i".to_string()),
            GroupAtom::Quaternion(n) => p(&["a", "b"], format!("a^{}, a^{}*b^-2, b*a*b^-1*a", n / 2, n / 4)),
            GroupAtom::Quasidihedral(n) => p(&["a", "b"], format!("a^{}, b^2, b*a*b^-1*a^-{}", n / 2, n / 4 - 1)),
            GroupAtom::M16 => p(&["x1", "x2"], "x1^8, x2^2, [x2,x1]^2, x1^4*[x2,x1]".to_string()),
            GroupAtom::Sg32_37 => p(
                &["x1", "x2", "x3"],
                "x1^8, x2^2, x3^2, x1^4*[x2,x1], [x3,x1], [x3,x2]".to_string(),
            ),
            GroupAtom::Sg64_88 => p(
                &["x1", "x2", "x3"],
                "x1^8, x2^2, x3^2, [x2,x1]^2, [x2,x1^2], x1^4*[x3,x1], [x3,x2]".to_string(),
            ),
            GroupAtom::Sg64_104 => p(
                &["x1", "x2", "x3"],
                "x1^8, x2^4, x3^2, x2^2*[x2,x1], x1^4*[x3,x1], [x3,x2]".to_string(),
            ),
            GroupAtom::File(path) => Presentation::parse_file_format(&std::fs::read_to_string(path)?),
        }
    }

    pub fn build(&self) -> Result<CayleyGroup> {
        self.presentation()?.build()
    }
}

impl fmt::Display for GroupAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAtom::Cyclic(n) => write!(f, "C{n}"),
            GroupAtom::Dihedral(n) => write!(f, "D{n}"),
            GroupAtom::Quaternion(n) => write!(f, "Q{n}"),
            GroupAtom::Quasidihedral(n) => write!(f, "QD{n}"),
            GroupAtom::M16 => f.write_str("M16"),
            GroupAtom::Sg32_37 => f.write_str("SG32_37"),
            GroupAtom::Sg64_88 => f.write_str("SG64_88"),
            GroupAtom::Sg64_104 => f.write_str("SG64_104"),
            GroupAtom::File(p) => write!(f, "file:{p}"),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                // a file path runs to the next whitespace
                let after_file = matches!(self.factors[i - 1], GroupAtom::File(_));
                f.write_str(if after_file { " x " } else { "x" })?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<CayleyGroup> {
        let mut iter = self.factors.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty group spec".into()))?;
        let mut g = first.build()?;
        for atom in iter {
            let h = atom.build()?;
            g = direct_product(&g, &h)?;
        }
        Ok(g)
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group_spec(s)
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let mut c = Cursor::new(text);
    let mut factors = vec![parse_atom(&mut c)?];
    while !c.at_end() {
        if !c.eat('x') {
            return Err(c.error("'x' or end of spec"));
        }
        factors.push(parse_atom(&mut c)?);
    }
    let order: usize = factors.iter().filter_map(GroupAtom::order).product();
    if order > MAX_ORDER {
        return Err(Error::OrderCap { order, cap: MAX_ORDER });
    }
    Ok(GroupSpec { factors })
}

/// Parses and builds a group spec in one step.
pub fn build_group(text: &str) -> Result<CayleyGroup> {
    parse_group_spec(text)?.build()
}

const NAMED: [(&str, GroupAtom); 4] = [
    ("SG64_104", GroupAtom::Sg64_104),
    ("SG64_88", GroupAtom::Sg64_88),
    ("SG32_37", GroupAtom::Sg32_37),
    ("M16", GroupAtom::M16),
];

fn parse_atom(c: &mut Cursor) -> Result<GroupAtom> {
    c.skip_ws();
    let rest = c.rest();
    for (name, atom) in NAMED {
        if rest.starts_with(name) {
            c.advance(name.len());
            return Ok(atom);
        }
    }
    if let Some(path) = rest.strip_prefix("file:") {
        let len = path.find(char::is_whitespace).unwrap_or(path.len());
        if len == 0 {
            c.advance(5);
            return Err(c.error("a file path"));
        }
        let path = path[..len].to_string();
        c.advance(5 + len);
        return Ok(GroupAtom::File(path));
    }
    let (prefix, min): (&str, usize) = if rest.starts_with("QD") {
        ("QD", 16)
    } else if rest.starts_with('Q') {
        ("Q", 8)
    } else if rest.starts_with('D') {
        ("D", 4)
    } else if rest.starts_with('C') {
        ("C", 1)
    } else {
        return Err(c.error("a group atom (Cn, Dn, Qn, QDn, M16, SG32_37, SG64_88, SG64_104, file:<path>)"));
    };
    c.advance(prefix.len());
    let start = c.pos();
    if !c.rest().starts_with(|ch: char| ch.is_ascii_digit()) {
        return Err(c.error("an integer order"));
    }
    let n = c.parse_uint()?;
    let n = usize::try_from(n).unwrap_or(usize::MAX);
    if !n.is_power_of_two() {
        return Err(Error::parse(start, "a power of 2", n.to_string()));
    }
    if n < min {
        return Err(Error::parse(start, format!("an order of at least {min}"), n.to_string()));
    }
    if n > MAX_ORDER {
        return Err(Error::OrderCap { order: n, cap: MAX_ORDER });
    }
    Ok(match prefix {
        "QD" => GroupAtom::Quasidihedral(n),
        "Q" => GroupAtom::Quaternion(n),
        "D" => GroupAtom::Dihedral(n),
        _ => GroupAtom::Cyclic(n),
    })
}
