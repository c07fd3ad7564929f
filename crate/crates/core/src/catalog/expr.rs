//! Symbolic expressions used by catalog lines: integer combinations of
//! products of named factors, e.g. `2*y6*y10`, `v1^2*y1*y2`, `c_3*y10`, `rho^7`.
//!
//! Grammar (no whitespace inside an expression):
//!
//! ```text
//! expr   := "0" | ["-"] term (("+" | "-") term)*
//! term   := int | [int "*"] factor ("*" factor)*
//! factor := name ["^" int]
//! name   := letter (letter | digit | "_" | "'")*
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub name: String,
    pub power: u32,
}

impl Factor {
    pub fn new(name: impl Into<String>, power: u32) -> Self {
        Factor {
            name: name.into(),
            power,
        }
    }

    /// Index `k` when the factor is the cobordism variable `v<k>`.
    pub fn v_index(&self) -> Option<u32> {
        let rest = self.name.strip_prefix('v')?;
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        rest.parse().ok()
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 1 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}^{}", self.name, self.power)
        }
    }
}

/// `coefficient · Π factors`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coefficient: i64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn monomial(factors: Vec<Factor>) -> Self {
        Term {
            coefficient: 1,
            factors,
        }
    }

    pub fn scalar(c: i64) -> Self {
        Term {
            coefficient: c,
            factors: Vec::new(),
        }
    }

    /// Parse a single term without sign handling (`2*v1`, `y^2*y'`, `5`).
    pub fn parse(s: &str) -> Result<Self> {
        let mut coefficient = 1i64;
        let mut factors = Vec::new();
        if s.is_empty() {
            return Err(Error::Invalid("empty term".to_string()));
        }
        for (i, part) in s.split('*').enumerate() {
            if part.is_empty() {
                return Err(Error::Invalid(alloc::format!("empty factor in `{s}`")));
            }
            if part.bytes().all(|b| b.is_ascii_digit()) {
                if i != 0 {
                    return Err(Error::Invalid(alloc::format!(
                        "integer `{part}` must lead the term `{s}`"
                    )));
                }
                coefficient = part
                    .parse()
                    .map_err(|_| Error::Invalid(alloc::format!("bad integer `{part}`")))?;
                continue;
            }
            let (name, power) = match part.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e
                        .parse()
                        .map_err(|_| Error::Invalid(alloc::format!("bad exponent in `{part}`")))?;
                    (n, e)
                }
                None => (part, 1),
            };
            if !is_name(name) {
                return Err(Error::Invalid(alloc::format!("bad name `{name}`")));
            }
            if power == 0 {
                return Err(Error::Invalid(alloc::format!("zero exponent in `{part}`")));
            }
            factors.push(Factor::new(name, power));
        }
        Ok(Term {
            coefficient,
            factors,
        })
    }
}

pub(crate) fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficient;
        if self.factors.is_empty() {
            return write!(f, "{c}");
        }
        if c == -1 {
            write!(f, "-")?;
        } else if c != 1 {
            write!(f, "{c}*")?;
        }
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// A sum of terms; the empty sum is written `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(t: Term) -> Self {
        Expr { terms: alloc::vec![t] }
    }

    /// Every factor name mentioned, in order of appearance.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.name.as_str()))
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(Expr::zero());
        }
        if s.is_empty() || s.contains(char::is_whitespace) {
            return Err(Error::Invalid(alloc::format!("bad expression `{s}`")));
        }
        let mut terms = Vec::new();
        let mut sign = 1i64;
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut i = 0;
        if bytes[0] == b'-' {
            sign = -1;
            start = 1;
            i = 1;
        }
        loop {
            let at_end = i == bytes.len();
            if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start) {
                let mut t = Term::parse(&s[start..i])?;
                t.coefficient *= sign;
                terms.push(t);
                if at_end {
                    break;
                }
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            i += 1;
        }
        Ok(Expr { terms })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 && t.coefficient > 0 {
                write!(f, "+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) {
        let e: Expr = s.parse().unwrap();
        assert_eq!(e.to_string(), s);
    }

    #[test]
    fn round_trips() {
        for s in ["0", "2*y6*y10", "v1^2*y1*y2", "c_3*y10", "rho^7", "-y10+2*v1*y6", "3", "y^2*y'^2", "9*y"] {
            rt(s);
        }
    }

    #[test]
    fn parses_terms() {
        let e: Expr = "2*v1*y1-v1^2*y'".parse().unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[1].coefficient, -1);
        assert_eq!(e.terms[1].factors[0], Factor::new("v1", 2));
        assert_eq!(e.terms[1].factors[0].v_index(), Some(1));
        assert_eq!(Factor::new("v", 1).v_index(), None);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "2**y", "y^", "y 1", "2*3", "+", "y^0", "_y"] {
            assert!(s.parse::<Expr>().is_err(), "{s}");
        }
    }
}
