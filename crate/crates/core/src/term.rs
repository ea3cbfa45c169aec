//! Canonical text form of ring elements.
//!
//! A term is written `c*L^k*[A]*[B]`. A coefficient of `1` is elided when
//! other factors are present (`-1` becomes a leading `-`), `L^0` is elided and
//! `L^1` is written `L`. Terms are joined by ` + ` / ` - ` in canonical order.
//! The zero element is `0`. In K0(sGT) the unit basis element prints as `[pt]`.
//!
//! The parser accepts the same grammar with free whitespace, factors in any
//! order, repeated integer factors and `[pt]` anywhere.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::ring::{ClassMonomial, SgtElement, VarElement, PT};

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &BigInt,
    factors: &[String],
) -> fmt::Result {
    let neg = coeff.is_negative();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let abs = coeff.abs();
    let mut parts: Vec<String> = Vec::with_capacity(factors.len() + 1);
    if !abs.is_one() || factors.is_empty() {
        parts.push(abs.to_string());
    }
    parts.extend(factors.iter().cloned());
    f.write_str(&parts.join("*"))
}

impl fmt::Display for VarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, k, c)) in self.terms().enumerate() {
            let mut factors = Vec::new();
            match k {
                0 => {}
                1 => factors.push("L".to_string()),
                _ => factors.push(format!("L^{k}")),
            }
            factors.extend(m.labels().iter().map(|n| format!("[{n}]")));
            write_term(f, i == 0, c, &factors)?;
        }
        Ok(())
    }
}

impl fmt::Display for SgtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (b, c)) in self.terms().enumerate() {
            let factors: Vec<String> = if b.is_unit() {
                vec![format!("[{PT}]")]
            } else {
                b.labels().iter().map(|n| format!("[{n}]")).collect()
            };
            write_term(f, i == 0, c, &factors)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    L,
    Caret,
    Label(String),
    Star,
    Plus,
    Minus,
}

/// Largest L-exponent or dimension accepted from text; keeps exponent
/// arithmetic in products far from `u32` overflow.
pub const MAX_DIM: u32 = 1 << 16;

pub fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '\''
}

/// Checks that `name` is usable as an atomic label.
pub fn valid_label_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_label_char)
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: BigInt = s[i..end]
                    .parse()
                    .map_err(|_| Error::parse(format!("bad integer at offset {i}")))?;
                out.push(Tok::Int(n));
            }
            'L' => {
                chars.next();
                out.push(Tok::L);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '[' => {
                chars.next();
                let start = i + 1;
                let mut end = None;
                for (j, d) in chars.by_ref() {
                    if d == ']' {
                        end = Some(j);
                        break;
                    }
                }
                let end = end.ok_or_else(|| Error::parse(format!("unclosed '[' at offset {i}")))?;
                let name = &s[start..end];
                if !valid_label_name(name) {
                    return Err(Error::parse(format!("invalid label name {name:?}")));
                }
                out.push(Tok::Label(name.to_string()));
            }
            other => {
                return Err(Error::parse(format!(
                    "unexpected character {other:?} at offset {i}"
                )))
            }
        }
    }
    Ok(out)
}

struct ParsedTerm {
    coeff: BigInt,
    l_exp: u32,
    labels: Vec<String>,
}

fn parse_terms(s: &str, allow_l: bool) -> Result<Vec<ParsedTerm>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::parse("empty expression"));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut first = true;
    while pos < toks.len() {
        let mut sign = BigInt::one();
        match toks[pos] {
            Tok::Plus if !first => pos += 1,
            Tok::Minus => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(Error::parse("expected '+' or '-' between terms")),
        }
        first = false;
        let mut term = ParsedTerm {
            coeff: sign,
            l_exp: 0,
            labels: Vec::new(),
        };
        let mut expect_factor = true;
        loop {
            if expect_factor {
                match toks.get(pos) {
                    Some(Tok::Int(n)) => {
                        term.coeff *= n;
                        pos += 1;
                    }
                    Some(Tok::L) if allow_l => {
                        pos += 1;
                        let mut e = 1u32;
                        if let Some(Tok::Caret) = toks.get(pos) {
                            pos += 1;
                            match toks.get(pos) {
                                Some(Tok::Int(n)) => {
                                    e = u32::try_from(n)
                                        .map_err(|_| Error::parse("L exponent out of range"))?;
                                    pos += 1;
                                }
                                _ => return Err(Error::parse("expected exponent after '^'")),
                            }
                        }
                        term.l_exp = term
                            .l_exp
                            .checked_add(e)
                            .filter(|&k| k <= MAX_DIM)
                            .ok_or_else(|| Error::parse("L exponent out of range"))?;
                    }
                    Some(Tok::L) => return Err(Error::parse("L is not allowed here")),
                    Some(Tok::Label(n)) => {
                        term.labels.push(n.clone());
                        pos += 1;
                    }
                    _ => return Err(Error::parse("expected a factor")),
                }
                expect_factor = false;
            } else {
                match toks.get(pos) {
                    Some(Tok::Star) => {
                        pos += 1;
                        expect_factor = true;
                    }
                    None | Some(Tok::Plus) | Some(Tok::Minus) => break,
                    _ => return Err(Error::parse("expected '*' between factors")),
                }
            }
        }
        terms.push(term);
    }
    Ok(terms)
}

impl FromStr for VarElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = VarElement::zero();
        for t in parse_terms(s, true)? {
            out.add_term(ClassMonomial::new(t.labels), t.l_exp, t.coeff);
        }
        Ok(out)
    }
}

impl FromStr for SgtElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = SgtElement::zero();
        for t in parse_terms(s, false)? {
            out.add_term(ClassMonomial::new(t.labels), t.coeff);
        }
        Ok(out)
    }
}
