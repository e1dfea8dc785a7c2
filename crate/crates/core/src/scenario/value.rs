use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::group::FgAbelianGroup;

/// A computed quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    Rational(BigRational),
    Bool(bool),
    Group(FgAbelianGroup),
    Text(String),
}

impl Value {
    pub fn int(x: impl Into<BigInt>) -> Self {
        Value::Int(x.into())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value::Text(s.into())
    }

    /// Rationals that are integers are stored as `Int`.
    pub fn rational(q: BigRational) -> Self {
        if q.is_integer() {
            Value::Int(q.to_integer())
        } else {
            Value::Rational(q)
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Rational(_) => "rational",
            Value::Bool(_) => "boolean",
            Value::Group(_) => "group",
            Value::Text(_) => "text",
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        match self {
            Value::Int(n) => Some(BigRational::from_integer(n.clone())),
            Value::Rational(q) => Some(q.clone()),
            _ => None,
        }
    }

    /// Compares against a literal. Numbers compare numerically, groups
    /// structurally, booleans and text exactly.
    pub fn matches(&self, literal: &str) -> Result<bool, String> {
        let lit = literal.trim();
        match self {
            Value::Int(_) | Value::Rational(_) => {
                let want = parse_rational(lit).ok_or_else(|| format!("`{lit}` is not a number"))?;
                Ok(self.as_rational() == Some(want))
            }
            Value::Bool(b) => match lit {
                "true" => Ok(*b),
                "false" => Ok(!*b),
                _ => Err(format!("`{lit}` is not a boolean")),
            },
            Value::Group(g) => {
                let want: FgAbelianGroup = lit.parse().map_err(|e| format!("{e}"))?;
                Ok(*g == want)
            }
            Value::Text(t) => Ok(t == lit),
        }
    }
}

/// `n` or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Rational(q) => write!(f, "{q}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Group(g) => write!(f, "{g}"),
            Value::Text(t) => write!(f, "{t}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        let q = Value::rational(BigRational::new(9.into(), 10.into()));
        assert_eq!(q.matches("9/10"), Ok(true));
        assert_eq!(q.matches("18/20"), Ok(true));
        assert_eq!(q.matches("1/10"), Ok(false));
        assert!(q.matches("abc").is_err());
        assert_eq!(Value::int(20).matches("20"), Ok(true));
        assert_eq!(Value::int(20).matches("40/2"), Ok(true));
        let g = Value::Group("Z + Z_3^2 + Z_9^2".parse().unwrap());
        assert_eq!(g.matches("Z_9^2 + Z + Z_3^2"), Ok(true));
        assert_eq!(g.matches("Z"), Ok(false));
        assert_eq!(Value::Bool(true).matches("true"), Ok(true));
        assert_eq!(Value::text("(10, 9)").matches(" (10, 9) "), Ok(true));
    }
}
