//! `${expr}` substitution, `[item for i in a..b]` comprehensions and
//! `i in a..b` ranges.

use std::collections::BTreeMap;

pub type Env = BTreeMap<String, i128>;

/// Error with a byte offset into the templated text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateError {
    pub offset: usize,
    pub message: String,
}

impl TemplateError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        Self { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i128),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, TemplateError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = s[start..i].parse().map_err(|_| TemplateError::new(start, "integer too large"))?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/%^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(TemplateError::new(i, format!("unexpected character `{c}` in expression")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    env: &'a Env,
    end: usize,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn overflow(&self) -> TemplateError {
        TemplateError::new(self.offset(), "arithmetic overflow")
    }

    fn expr(&mut self) -> Result<i128, TemplateError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc.checked_add(rhs) } else { acc.checked_sub(rhs) }.ok_or_else(|| self.overflow())?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<i128, TemplateError> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/' | '%')) = self.peek_op() {
            let at = self.offset();
            self.pos += 1;
            let rhs = self.power()?;
            acc = match op {
                '*' => acc.checked_mul(rhs).ok_or_else(|| self.overflow())?,
                _ if rhs == 0 => return Err(TemplateError::new(at, "division by zero")),
                '/' => acc.div_euclid(rhs),
                _ => acc.rem_euclid(rhs),
            };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<i128, TemplateError> {
        let base = self.unary()?;
        if self.peek_op() == Some('^') {
            let at = self.offset();
            self.pos += 1;
            let e = self.power()?;
            let e = u32::try_from(e).map_err(|_| TemplateError::new(at, "negative exponent"))?;
            return base.checked_pow(e).ok_or_else(|| self.overflow());
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<i128, TemplateError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<i128, TemplateError> {
        let at = self.offset();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(n)
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                self.env.get(&name).copied().ok_or_else(|| TemplateError::new(at, format!("unknown variable `{name}`")))
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(TemplateError::new(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(TemplateError::new(at, "expected a number, variable or `(`")),
        }
    }
}

/// Evaluates an integer expression over the variables in `env`.
pub fn eval_expr(s: &str, env: &Env) -> Result<i128, TemplateError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, env, end: s.len() };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(TemplateError::new(p.offset(), "unexpected trailing input"));
    }
    Ok(v)
}

/// Replaces every `${expr}` by its value.
pub fn substitute(s: &str, env: &Env) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    let mut base = 0;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let body_start = start + 2;
        let end = rest[body_start..]
            .find('}')
            .ok_or_else(|| TemplateError::new(base + start, "unterminated `${`"))?;
        let body = &rest[body_start..body_start + end];
        let v = eval_expr(body, env).map_err(|e| TemplateError::new(base + body_start + e.offset, e.message))?;
        out.push_str(&v.to_string());
        let consumed = body_start + end + 1;
        base += consumed;
        rest = &rest[consumed..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Parses `var in a..b` (inclusive) after substitution.
pub fn parse_range(s: &str, env: &Env) -> Result<(String, i128, i128), TemplateError> {
    let s = substitute(s, env)?;
    let (var, range) = s
        .split_once(" in ")
        .ok_or_else(|| TemplateError::new(0, "expected `var in a..b`"))?;
    let var = var.trim();
    if var.is_empty() || !var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(TemplateError::new(0, format!("bad loop variable `{var}`")));
    }
    let (a, b) = range
        .split_once("..")
        .ok_or_else(|| TemplateError::new(0, "expected a range `a..b`"))?;
    let lo = eval_expr(a, env)?;
    let hi = eval_expr(b, env)?;
    Ok((var.to_string(), lo, hi))
}

/// Expands `[item for i in a..b]` into a comma-separated list, then applies
/// `${…}` substitution to the whole value.
pub fn expand(s: &str, env: &Env) -> Result<String, TemplateError> {
    let mut out = String::new();
    let mut i = 0;
    let bytes = s.as_bytes();
    while i < bytes.len() {
        if bytes[i] == b'[' {
            let close = s[i..].find(']').map(|j| i + j).ok_or_else(|| TemplateError::new(i, "unterminated `[`"))?;
            let inner = &s[i + 1..close];
            if let Some(k) = inner.rfind(" for ") {
                let item = &inner[..k];
                let (var, lo, hi) =
                    parse_range(&inner[k + 5..], env).map_err(|e| TemplateError::new(i + 1 + k + 5 + e.offset, e.message))?;
                let mut items = Vec::new();
                let mut local = env.clone();
                for x in lo..=hi {
                    local.insert(var.clone(), x);
                    items.push(substitute(item.trim(), &local).map_err(|e| TemplateError::new(i + 1 + e.offset, e.message))?);
                }
                out.push_str(&items.join(", "));
                i = close + 1;
                continue;
            }
        }
        let ch = s[i..].chars().next().expect("in bounds");
        out.push(ch);
        i += ch.len_utf8();
    }
    substitute(&out, env)
}
