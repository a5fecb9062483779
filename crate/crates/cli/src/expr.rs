//! Parser for power-series support expressions.
//!
//! Grammar: a sum of terms; each term is an optional integer or rational
//! coefficient followed by a product of `var^exp` factors, with `*`
//! optional everywhere. Variable names are alphanumeric and are assigned
//! coordinates in order of first appearance unless an explicit list is
//! supplied. Coefficients are carried along for the echo but never enter
//! the mathematics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed support: variables in coordinate order, exponent vectors,
/// and the (mathematically ignored) coefficients, merged over duplicate
/// monomials.
#[derive(Debug, Clone)]
pub struct ParsedSupport {
    pub variables: Vec<String>,
    pub support: Vec<Vec<BigInt>>,
    pub coefficients: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '+' => {
                out.push((Tok::Plus, start));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, start));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, start));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, start));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, start));
                i += 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: BigInt = text[i..j].parse().expect("digits");
                out.push((Tok::Num(n), start));
                i = j;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                out.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
            }
            other => {
                return Err(ParseError {
                    pos: start,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    vars: Vec<String>,
    pinned: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn var_index(&mut self, name: &str, pos: usize) -> Result<usize, ParseError> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Ok(i);
        }
        if self.pinned {
            return Err(ParseError {
                pos,
                message: format!("unknown variable '{name}' (declared: {})", self.vars.join(", ")),
            });
        }
        self.vars.push(name.to_string());
        Ok(self.vars.len() - 1)
    }

    /// One term: `[coeff *?]? factor (*? factor)*`, where the sign has
    /// already been consumed. Returns (coefficient, exponents by variable
    /// index).
    fn term(&mut self) -> Result<(BigRational, BTreeMap<usize, BigInt>), ParseError> {
        let mut coeff = BigRational::one();
        let mut exps: BTreeMap<usize, BigInt> = BTreeMap::new();
        let mut saw_factor = false;
        let mut saw_coeff = false;

        loop {
            match self.peek() {
                Some(Tok::Num(_)) => {
                    if saw_coeff || saw_factor {
                        return Err(ParseError {
                            pos: self.pos(),
                            message: "unexpected number; coefficients come first in a term".into(),
                        });
                    }
                    let Some(Tok::Num(n)) = self.bump() else { unreachable!() };
                    let mut c = BigRational::from_integer(n);
                    if self.peek() == Some(&Tok::Slash) {
                        self.bump();
                        let pos = self.pos();
                        match self.bump() {
                            Some(Tok::Num(d)) => {
                                if d.is_zero() {
                                    return Err(ParseError {
                                        pos,
                                        message: "zero denominator".into(),
                                    });
                                }
                                c /= BigRational::from_integer(d);
                            }
                            _ => {
                                return Err(ParseError {
                                    pos,
                                    message: "expected a denominator after '/'".into(),
                                });
                            }
                        }
                    }
                    coeff *= c;
                    saw_coeff = true;
                }
                Some(Tok::Ident(_)) => {
                    let pos = self.pos();
                    let Some(Tok::Ident(name)) = self.bump() else { unreachable!() };
                    let idx = self.var_index(&name, pos)?;
                    let mut exp = BigInt::one();
                    if self.peek() == Some(&Tok::Caret) {
                        self.bump();
                        let pos = self.pos();
                        match self.bump() {
                            Some(Tok::Num(e)) => exp = e,
                            Some(Tok::Minus) => {
                                return Err(ParseError {
                                    pos,
                                    message: "exponents must be nonnegative integers".into(),
                                });
                            }
                            _ => {
                                return Err(ParseError {
                                    pos,
                                    message: "expected an exponent after '^'".into(),
                                });
                            }
                        }
                    }
                    *exps.entry(idx).or_insert_with(BigInt::zero) += exp;
                    saw_factor = true;
                }
                Some(Tok::Star) => {
                    self.bump();
                    match self.peek() {
                        Some(Tok::Ident(_)) => {}
                        Some(Tok::Num(_)) if !saw_factor && !saw_coeff => {}
                        _ => {
                            return Err(ParseError {
                                pos: self.pos(),
                                message: "expected a variable after '*'".into(),
                            });
                        }
                    }
                }
                _ => break,
            }
        }
        if !saw_factor && !saw_coeff {
            return Err(ParseError {
                pos: self.pos(),
                message: "expected a term".into(),
            });
        }
        Ok((coeff, exps))
    }
}

/// Parse an expression into its support. When `variables` is given, it
/// pins both the coordinate order and the admissible names.
pub fn parse_expression(
    text: &str,
    variables: Option<Vec<String>>,
) -> Result<ParsedSupport, ParseError> {
    let toks = tokenize(text)?;
    let pinned = variables.is_some();
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        vars: variables.unwrap_or_default(),
        pinned,
    };
    let mut monomials: Vec<(BTreeMap<usize, BigInt>, BigRational)> = Vec::new();
    let mut sign = BigRational::one();
    // Leading sign.
    loop {
        match p.peek() {
            Some(Tok::Plus) => {
                p.bump();
            }
            Some(Tok::Minus) => {
                p.bump();
                sign = -sign;
            }
            _ => break,
        }
    }
    loop {
        let (coeff, exps) = p.term()?;
        monomials.push((exps, sign.clone() * coeff));
        match p.peek() {
            None => break,
            Some(Tok::Plus) | Some(Tok::Minus) => {
                sign = BigRational::one();
                loop {
                    match p.peek() {
                        Some(Tok::Plus) => {
                            p.bump();
                        }
                        Some(Tok::Minus) => {
                            p.bump();
                            sign = -sign;
                        }
                        _ => break,
                    }
                }
            }
            _ => {
                return Err(ParseError {
                    pos: p.pos(),
                    message: "expected '+' or '-' between terms".into(),
                });
            }
        }
    }

    let nvars = p.vars.len();
    // Merge duplicate exponent vectors, summing coefficients.
    let mut merged: BTreeMap<Vec<BigInt>, BigRational> = BTreeMap::new();
    for (exps, coeff) in monomials {
        let mut vector = vec![BigInt::zero(); nvars];
        for (idx, e) in exps {
            vector[idx] = e;
        }
        *merged.entry(vector).or_insert_with(BigRational::zero) += coeff;
    }
    let mut support = Vec::with_capacity(merged.len());
    let mut coefficients = Vec::with_capacity(merged.len());
    for (v, c) in merged {
        support.push(v);
        coefficients.push(c);
    }
    Ok(ParsedSupport {
        variables: p.vars,
        support,
        coefficients,
    })
}

/// Canonical printer, the inverse of [`parse_expression`] on canonical
/// expressions: terms sorted by exponent vector, coefficients shown when
/// not 1, factors joined with `*`.
pub fn print_expression(parsed: &ParsedSupport) -> String {
    let mut terms = Vec::with_capacity(parsed.support.len());
    for (vector, coeff) in parsed.support.iter().zip(&parsed.coefficients) {
        let mut factors = Vec::new();
        if !coeff.is_one() {
            let c = if coeff.denom() == &BigInt::one() {
                coeff.numer().to_string()
            } else {
                format!("{}/{}", coeff.numer(), coeff.denom())
            };
            factors.push(c);
        }
        for (i, e) in vector.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if e == &BigInt::one() {
                factors.push(parsed.variables[i].clone());
            } else {
                factors.push(format!("{}^{}", parsed.variables[i], e));
            }
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        terms.push(factors.join("*"));
    }
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exps(p: &ParsedSupport) -> Vec<Vec<i64>> {
        p.support
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn parses_the_e8_expression() {
        let p = parse_expression("x^2 + y^3 + z^5", None).unwrap();
        assert_eq!(p.variables, vec!["x", "y", "z"]);
        let mut s = exps(&p);
        s.sort();
        assert_eq!(s, vec![vec![0, 0, 5], vec![0, 3, 0], vec![2, 0, 0]]);
    }

    #[test]
    fn parses_twosimp_with_implicit_products() {
        let p = parse_expression("x*y + x*z + 2*y*z + z^2", None).unwrap();
        assert_eq!(p.variables, vec!["x", "y", "z"]);
        assert_eq!(p.support.len(), 4);
        let q = parse_expression("x y + x z + 2 y z + z^2", None).unwrap();
        assert_eq!(exps(&p), exps(&q));
    }

    #[test]
    fn rejects_negative_exponents_with_position() {
        let err = parse_expression("x^-1 + y", None).unwrap_err();
        assert_eq!(err.pos, 2);
        assert!(err.message.contains("nonnegative"));
    }

    #[test]
    fn merges_duplicates_and_tracks_coefficients() {
        let p = parse_expression("x^2 + 3x^2 + 1/2 y", None).unwrap();
        assert_eq!(p.support.len(), 2);
        let idx = p
            .support
            .iter()
            .position(|v| v[0] == BigInt::from(2))
            .unwrap();
        assert_eq!(p.coefficients[idx], BigRational::from_integer(4.into()));
    }

    #[test]
    fn pinned_variables_fix_order_and_reject_strangers() {
        let p =
            parse_expression("b + a^2", Some(vec!["a".into(), "b".into(), "c".into()])).unwrap();
        assert_eq!(p.variables, vec!["a", "b", "c"]);
        let mut s = exps(&p);
        s.sort();
        assert_eq!(s, vec![vec![0, 1, 0], vec![2, 0, 0]]);
        assert!(parse_expression("q^2", Some(vec!["x".into()])).is_err());
    }

    #[test]
    fn signs_merge_into_coefficients() {
        let p = parse_expression("-x^2 - -y", None).unwrap();
        assert_eq!(p.support.len(), 2);
        assert!(p.coefficients.iter().any(|c| c < &BigRational::zero()));
    }

    #[test]
    fn parse_after_print_is_the_identity() {
        for text in [
            "x^2 + y^3 + z^5",
            "x*y + x*z + 2*y*z + z^2",
            "3/2*a^4 + a*b^7 + b^2",
        ] {
            let p = parse_expression(text, None).unwrap();
            let printed = print_expression(&p);
            let q = parse_expression(&printed, Some(p.variables.clone())).unwrap();
            assert_eq!(p.variables, q.variables);
            assert_eq!(p.support, q.support);
            assert_eq!(p.coefficients, q.coefficients);
            // Printing is canonical: a second round trip is stable.
            assert_eq!(printed, print_expression(&q));
        }
    }
}
