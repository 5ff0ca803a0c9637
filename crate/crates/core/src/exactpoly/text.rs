//! Deterministic text form: terms in descending canonical order, `a/b`
//! rationals, `i` for the imaginary unit, complex coefficients in parentheses.

use num_traits::{One, Signed, Zero};

use super::gauss::{GaussRational, Rational};
use super::poly::MPoly;
use super::PolyError;

fn monomial_str(vars: &[String], m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, e) in vars.iter().zip(m) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

pub fn format_poly(p: &MPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (k, (m, c)) in terms.iter().rev().enumerate() {
        let mono = monomial_str(p.vars(), m);
        let (neg, body) = if c.is_real() {
            let r: &Rational = &c.re;
            let neg = r.is_negative();
            let a = r.abs();
            let body = if mono.is_empty() {
                a.to_string()
            } else if a.is_one() {
                mono.clone()
            } else {
                format!("{a}*{mono}")
            };
            (neg, body)
        } else if c.re.is_zero() {
            let neg = c.im.is_negative();
            let a = c.im.abs();
            let unit = if a.is_one() { "i".to_string() } else { format!("{a}*i") };
            let body = if mono.is_empty() { unit } else { format!("{unit}*{mono}") };
            (neg, body)
        } else {
            let cs = c.to_string();
            let body = if mono.is_empty() { cs } else { format!("{cs}*{mono}") };
            (false, body)
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, PolyError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut k = 0;
    while k < cs.len() {
        let ch = cs[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let st = k;
            while k < cs.len() && (cs[k].is_ascii_digit() || cs[k] == '.') {
                k += 1;
            }
            out.push(Tok::Num(cs[st..k].iter().collect()));
        } else if ch.is_alphabetic() || ch == '_' {
            let st = k;
            while k < cs.len() && (cs[k].is_alphanumeric() || cs[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(cs[st..k].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            k += 1;
        } else {
            return Err(PolyError::Parse(format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(PolyError::Parse("division by a non-constant or zero".into()));
                }
                acc = acc.scale(&d.constant_term().inv().unwrap());
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| PolyError::Parse(format!("bad exponent {n}")))?;
                    Ok(base.pow(e))
                }
                other => Err(PolyError::Parse(format!("expected exponent, got {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::rational(super::gauss::parse_rational(&n)?))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if id == "i" {
                    Ok(MPoly::constant(GaussRational::i()))
                } else {
                    Ok(MPoly::var(&id))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(PolyError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(PolyError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses the text form (and ordinary polynomial expressions). `i` is reserved.
pub fn parse_poly(s: &str) -> Result<MPoly, PolyError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(PolyError::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(PolyError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}
