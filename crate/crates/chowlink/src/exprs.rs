//! Divisor-class expressions such as `(2*Dh + 3*F)^3`, evaluated as
//! intersection numbers on a 3-fold or a surface.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT | NAME | 'K' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::chow_core::DivisorClass;
use crate::error::{Error, Result};
use crate::models::{SurfaceModel, ThreefoldModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    K,
    Int(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn gen(name: &str) -> Self {
        Expr::Gen(name.to_string())
    }

    pub fn int(v: i64) -> Self {
        Expr::Int(BigInt::from(v))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen(n) => write!(f, "{n}"),
            Expr::K => write!(f, "K"),
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                wrap(f, x, x.prec() < 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(f, a, a.prec() < 1)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                wrap(f, b, b.prec() <= 1)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, a.prec() < 2)?;
                write!(f, " * ")?;
                wrap(f, b, b.prec() <= 2)
            }
            Expr::Pow(x, k) => {
                wrap(f, x, x.prec() < 4)?;
                write!(f, "^{k}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
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
            out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(text[start..i].to_string())));
        } else if "+-*^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { offset: i, expected: "a number, a name, an operator or a parenthesis".into() });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), expected: expected.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = lhs * self.unary()?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let k = match self.peek() {
                Tok::Int(v) if *v >= BigInt::one() && *v <= BigInt::from(3) => u32::try_from(v).expect("small"),
                _ => return self.fail("exponent 1, 2 or 3"),
            };
            self.pos += 1;
            base = Expr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.peek().clone();
        match tok {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Tok::Name(n) => {
                self.pos += 1;
                Ok(if n == "K" { Expr::K } else { Expr::Gen(n) })
            }
            Tok::Op('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.fail("`)`");
                }
                Ok(inner)
            }
            _ => self.fail("a number, a name, `K` or `(`"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

/// Something expressions can be evaluated on.
pub trait Target {
    fn dim(&self) -> usize;
    fn class(&self, name: &str) -> Option<DivisorClass>;
    fn canonical_class(&self) -> DivisorClass;
    /// Intersection number of exactly `dim` classes.
    fn intersect(&self, classes: &[DivisorClass]) -> Result<BigRational>;
}

impl Target for ThreefoldModel {
    fn dim(&self) -> usize {
        3
    }

    fn class(&self, name: &str) -> Option<DivisorClass> {
        if self.form.has(name) {
            Some(DivisorClass::gen(name))
        } else {
            self.tracked(name).cloned()
        }
    }

    fn canonical_class(&self) -> DivisorClass {
        self.canonical.clone()
    }

    fn intersect(&self, c: &[DivisorClass]) -> Result<BigRational> {
        Ok(BigRational::from_integer(self.triple(&c[0], &c[1], &c[2])?))
    }
}

impl Target for SurfaceModel {
    fn dim(&self) -> usize {
        2
    }

    fn class(&self, name: &str) -> Option<DivisorClass> {
        self.pairing.has(name).then(|| DivisorClass::gen(name))
    }

    fn canonical_class(&self) -> DivisorClass {
        self.canonical.clone()
    }

    fn intersect(&self, c: &[DivisorClass]) -> Result<BigRational> {
        self.pair(&c[0], &c[1])
    }
}

/// A homogeneous value: a sum of coefficient times product of classes.
#[derive(Debug, Clone)]
struct Graded {
    degree: usize,
    terms: Vec<(BigRational, Vec<DivisorClass>)>,
}

impl Graded {
    fn scalar(v: BigRational) -> Self {
        Self { degree: 0, terms: vec![(v, vec![])] }
    }

    fn class(d: DivisorClass) -> Self {
        Self { degree: 1, terms: vec![(BigRational::one(), vec![d])] }
    }

    fn neg(mut self) -> Self {
        for t in &mut self.terms {
            t.0 = -t.0.clone();
        }
        self
    }

    fn add(mut self, other: Self, dim: usize) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: dim, found: self.degree.max(other.degree) });
        }
        if self.degree == 1 {
            // keep degree-1 values as a single class so powers stay small
            let (a, b) = (self.single(), other.single());
            return Ok(Graded::class(a + b));
        }
        self.terms.extend(other.terms);
        Ok(self)
    }

    fn single(&self) -> DivisorClass {
        self.terms.iter().fold(DivisorClass::zero(), |acc, (c, v)| {
            let k = c.to_integer();
            debug_assert!(c.is_integer());
            acc + v[0].scale(&k)
        })
    }

    fn mul(self, other: Self, dim: usize) -> Result<Self> {
        let degree = self.degree + other.degree;
        if degree > dim {
            return Err(Error::DegreeMismatch { expected: dim, found: degree });
        }
        if self.degree == 0 && other.degree == 1 || self.degree == 1 && other.degree == 0 {
            let (s, c) = if self.degree == 0 { (self, other) } else { (other, self) };
            let k: BigRational = s.terms.iter().map(|t| t.0.clone()).sum();
            if k.is_integer() {
                return Ok(Graded::class(c.single().scale(&k.to_integer())));
            }
            return Ok(Self { degree, terms: c.terms.into_iter().map(|(a, v)| (a * &k, v)).collect() });
        }
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut v = x.clone();
                v.extend(y.iter().cloned());
                terms.push((a * b, v));
            }
        }
        Ok(Self { degree, terms })
    }
}

fn value<T: Target>(e: &Expr, t: &T) -> Result<Graded> {
    let dim = t.dim();
    Ok(match e {
        Expr::Int(v) => Graded::scalar(BigRational::from_integer(v.clone())),
        Expr::K => Graded::class(t.canonical_class()),
        Expr::Gen(n) => Graded::class(t.class(n).ok_or_else(|| Error::UnknownName(n.clone()))?),
        Expr::Neg(x) => value(x, t)?.neg(),
        Expr::Add(a, b) => value(a, t)?.add(value(b, t)?, dim)?,
        Expr::Sub(a, b) => value(a, t)?.add(value(b, t)?.neg(), dim)?,
        Expr::Mul(a, b) => value(a, t)?.mul(value(b, t)?, dim)?,
        Expr::Pow(x, k) => {
            let base = value(x, t)?;
            let mut acc = Graded::scalar(BigRational::one());
            for _ in 0..*k {
                acc = acc.mul(base.clone(), dim)?;
            }
            acc
        }
    })
}

/// Exact value of a top-degree expression.
pub fn eval<T: Target>(e: &Expr, t: &T) -> Result<BigRational> {
    let g = value(e, t)?;
    if g.degree != t.dim() {
        return Err(Error::DegreeMismatch { expected: t.dim(), found: g.degree });
    }
    let mut total = BigRational::zero();
    for (c, classes) in &g.terms {
        total += c * t.intersect(classes)?;
    }
    Ok(total)
}

/// The class of a degree-one expression.
pub fn eval_class<T: Target>(e: &Expr, t: &T) -> Result<DivisorClass> {
    let g = value(e, t)?;
    if g.degree != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: g.degree });
    }
    Ok(g.single())
}

pub fn eval_str<T: Target>(text: &str, t: &T) -> Result<BigRational> {
    eval(&parse(text)?, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hirzebruch, p2_bundle, quadric_fibration, DF, DH, F, H};

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn shapes() {
        let e = parse("(2*Dh + 3*F)^3").unwrap();
        assert!(matches!(e, Expr::Pow(_, 3)));
        let e = parse("Dh^2 * F").unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::gen("Dh")), 2) * Expr::gen("F"));
        assert_eq!(parse("Dh ^"), Err(Error::Syntax { offset: 4, expected: "exponent 1, 2 or 3".into() }));
        assert!(matches!(parse("Dh^4"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("(F"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("F F"), Err(Error::Syntax { offset: 2, .. })));
        assert_eq!(parse("-x^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::gen("x")), 2))));
    }

    #[test]
    fn printing_roundtrips() {
        for s in ["(2*Dh + 3*F)^3", "Dh^2 * F", "-(a - b) * c", "a - (b - c)", "(-x)^2", "a * (b * c)", "K^3", "x^2^3", "a + -b"] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }

    #[test]
    fn standard_quadric() {
        let q = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));
        assert_eq!(eval_str("(2*Dh+3*F)^3", &q).unwrap(), r(40));
        assert_eq!(eval_str("-K^3", &q).unwrap(), r(40));
        assert_eq!(eval_str("F^3", &q).unwrap(), r(0));
        assert_eq!(eval_str("Dh^3", &q).unwrap(), r(-4));
        assert_eq!(eval_str("Df * Dh^2", &q).unwrap(), r(2));
    }

    #[test]
    fn bundles_and_surfaces() {
        for (a, b, c) in [(0, 0, 1), (0, 1, 5), (2, -3, 4)] {
            assert_eq!(eval_str("K^3", &p2_bundle(a, b, c)).unwrap(), r(-54));
        }
        let s = hirzebruch(3);
        assert_eq!(eval_str("S^2", &s).unwrap(), r(-3));
        assert_eq!(eval_str("K^2", &s).unwrap(), r(8));
    }

    #[test]
    fn errors() {
        let p = p2_bundle(0, 0, 1);
        assert_eq!(eval_str("xi^2", &p), Err(Error::DegreeMismatch { expected: 3, found: 2 }));
        assert_eq!(eval_str("xi^2 * F * F", &p), Err(Error::DegreeMismatch { expected: 3, found: 4 }));
        assert_eq!(eval_str("Q^3", &p), Err(Error::UnknownName("Q".into())));
        assert!(matches!(eval_str("xi + 1", &p), Err(Error::DegreeMismatch { .. })));
    }
}
