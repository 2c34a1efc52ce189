//! Expression language for MZV combinations.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | rational | zeta | word | '(' expr ')'
//! zeta   := 'z' '(' int (',' int)* ')' | 'zr' '(' uint ';' [int (',' int)*] ')'
//! word   := 'I' '(' letter (',' letter)* ')'
//! letter := '0' | '1' | '-1'
//! ```
//!
//! A negative zeta argument is a barred entry: `z(2,-10)` is `ζ(2, 10̄)`.
//! `zr(k0;)` is the regularized integral of `k0` zeros alone.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use mzv_core::identities::{mul_comb, Monomial};
use mzv_core::word::{word_to_index, IndexVector, Letter, Word};
use mzv_core::MonomialComb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Non-negative rational literal.
    Rational(BigRational),
    Zeta(IndexVector),
    /// `zr(k0; …)`, explicitly regularized even when `k0 = 0`.
    RegZeta(IndexVector),
    Word(Word),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Expands into a combination of index monomials. A word literal `I(w)`
    /// becomes `(−1)^depth ζ(word_to_index(w))`.
    pub fn to_comb(&self) -> MonomialComb {
        match self {
            Expr::Rational(q) => MonomialComb::from_term(Monomial::one(), q.clone()),
            Expr::Zeta(ix) | Expr::RegZeta(ix) => MonomialComb::basis(Monomial::single(ix.clone())),
            Expr::Word(w) => {
                let ix = word_to_index(w);
                let sign = if ix.depth().is_multiple_of(2) { 1 } else { -1 };
                MonomialComb::from_term(
                    Monomial::single(ix),
                    BigRational::from_integer(sign.into()),
                )
            }
            Expr::Neg(x) => -x.to_comb(),
            Expr::Add(a, b) => a.to_comb() + b.to_comb(),
            Expr::Sub(a, b) => a.to_comb() - b.to_comb(),
            Expr::Mul(a, b) => mul_comb(&a.to_comb(), &b.to_comb()),
        }
    }

    /// The first literal that denotes a divergent value without asking for
    /// regularization (`zr(…)` is always accepted).
    pub fn first_divergent(&self) -> Option<String> {
        match self {
            Expr::Rational(_) | Expr::RegZeta(_) => None,
            Expr::Zeta(ix) => (ix.k0() == 0 && !ix.is_convergent()).then(|| ix.to_string()),
            Expr::Word(w) => (!w.is_convergent()).then(|| Expr::Word(w.clone()).to_string()),
            Expr::Neg(x) => x.first_divergent(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.first_divergent().or_else(|| b.first_divergent())
            }
        }
    }

    /// Canonical expression for a combination: terms in basis order, unit
    /// coefficients omitted.
    pub fn from_comb(comb: &MonomialComb) -> Expr {
        let mut out: Option<Expr> = None;
        for (mono, c) in comb.iter() {
            let magnitude = c.abs();
            let lead = (!magnitude.is_one() || mono.is_one()).then_some(Expr::Rational(magnitude));
            let term = lead
                .into_iter()
                .chain(mono.factors().iter().map(|ix| {
                    if ix.k0() == 0 && ix.is_convergent() {
                        Expr::Zeta(ix.clone())
                    } else {
                        Expr::RegZeta(ix.clone())
                    }
                }))
                .reduce(|a, b| Expr::Mul(Box::new(a), Box::new(b)))
                .expect("non-empty term");
            let negative = c.is_negative();
            out = Some(match (out, negative) {
                (None, false) => term,
                (None, true) => negate_leftmost(term),
                (Some(acc), false) => Expr::Add(Box::new(acc), Box::new(term)),
                (Some(acc), true) => Expr::Sub(Box::new(acc), Box::new(term)),
            });
        }
        out.unwrap_or_else(|| Expr::Rational(BigRational::zero()))
    }

    fn is_sum(&self) -> bool {
        matches!(self, Expr::Add(..) | Expr::Sub(..))
    }
}

/// `-a*b*c` with the sign on the first factor, which reads back unchanged.
fn negate_leftmost(e: Expr) -> Expr {
    match e {
        Expr::Mul(a, b) => Expr::Mul(Box::new(negate_leftmost(*a)), b),
        other => Expr::Neg(Box::new(other)),
    }
}

fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Expr::Zeta(ix) => write!(f, "{ix}"),
            Expr::RegZeta(ix) => {
                let entries: Vec<String> = ix.signed_entries().iter().map(i64::to_string).collect();
                if entries.is_empty() {
                    write!(f, "zr({};)", ix.k0())
                } else {
                    write!(f, "zr({}; {})", ix.k0(), entries.join(","))
                }
            }
            Expr::Word(w) => {
                let letters: Vec<String> = w.letters().iter().map(|l| l.to_string()).collect();
                write!(f, "I({})", letters.join(","))
            }
            Expr::Neg(x) => {
                f.write_str("-")?;
                paren(
                    f,
                    x,
                    x.is_sum() || matches!(**x, Expr::Neg(_) | Expr::Mul(..)),
                )
            }
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                paren(f, b, b.is_sum())
            }
            Expr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                paren(f, b, b.is_sum())
            }
            Expr::Mul(a, b) => {
                paren(f, a, a.is_sum())?;
                f.write_str("*")?;
                paren(f, b, b.is_sum() || matches!(**b, Expr::Mul(..)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(text.parse().expect("digits")), column));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), column));
        } else if "()+-*/,;".contains(c) {
            toks.push((Tok::Sym(c), column));
            i += 1;
        } else {
            return Err(ParseError {
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser {
    lexer: Lexer,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexer.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.lexer
            .toks
            .get(self.pos)
            .map_or(self.lexer.end, |(_, c)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lexer.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.eat('/') {
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            Ok(Expr::Rational(BigRational::new(n, d)))
                        }
                        Some(Tok::Int(_)) => {
                            self.pos -= 1;
                            self.error("zero denominator")
                        }
                        _ => {
                            self.pos -= 1;
                            self.error("expected a denominator")
                        }
                    }
                } else {
                    Ok(Expr::Rational(BigRational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                let column = self.column();
                self.pos += 1;
                match name.as_str() {
                    "z" => {
                        self.expect('(')?;
                        Ok(Expr::Zeta(self.zeta_body(0)?))
                    }
                    "zr" => {
                        self.expect('(')?;
                        let k0 = match self.bump() {
                            Some(Tok::Int(n)) => u32::try_from(n).ok(),
                            _ => None,
                        };
                        let Some(k0) = k0 else {
                            self.pos -= 1;
                            return self.error("expected the number of regularization zeros");
                        };
                        self.expect(';')?;
                        if self.eat(')') {
                            return Ok(Expr::RegZeta(
                                IndexVector::signed(k0, &[]).expect("empty index"),
                            ));
                        }
                        Ok(Expr::RegZeta(self.zeta_body(k0)?))
                    }
                    "I" => self.word(),
                    other => Err(ParseError {
                        column,
                        message: format!("unknown function `{other}`"),
                    }),
                }
            }
            Some(_) => self.error("expected a number, z(…), zr(…), I(…) or `(`"),
            None => self.error("unexpected end of input"),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        match self.bump() {
            Some(Tok::Int(n)) => {
                let Ok(v) = i64::try_from(n) else {
                    self.pos -= 1;
                    return self.error("integer out of range");
                };
                Ok(if neg { -v } else { v })
            }
            _ => {
                self.pos -= 1;
                self.error("expected an integer")
            }
        }
    }

    fn int_list(&mut self) -> Result<Vec<(i64, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            let column = self.column();
            out.push((self.signed_int()?, column));
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        Ok(out)
    }

    fn zeta_body(&mut self, k0: u32) -> Result<IndexVector, ParseError> {
        let args = self.int_list()?;
        if let Some((_, column)) = args.iter().find(|(v, _)| *v == 0) {
            return Err(ParseError {
                column: *column,
                message: "zeta arguments must be nonzero".into(),
            });
        }
        let entries: Vec<i64> = args.iter().map(|(v, _)| *v).collect();
        IndexVector::signed(k0, &entries).map_err(|e| ParseError {
            column: args[0].1,
            message: e.to_string(),
        })
    }

    fn word(&mut self) -> Result<Expr, ParseError> {
        self.expect('(')?;
        let mut letters = Vec::new();
        for (v, column) in self.int_list()? {
            let letter = Letter::from_value(v).map_err(|e| ParseError {
                column,
                message: e.to_string(),
            })?;
            letters.push(letter);
        }
        Ok(Expr::Word(Word::new(letters)))
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lexer: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos < p.lexer.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}
