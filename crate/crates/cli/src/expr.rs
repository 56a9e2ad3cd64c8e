//! The expression language: algebra elements and one-forms in ASCII.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' int)?
//! atom   := int | 'i' | 's' | 'q' ('^' int ('/2')?)? | 'h' | 'k'
//!         | 'x(' int ')' | 'r(' int ')' | 'L' | 'K' | 'xi(' int ')' | 'xibar(' int ')'
//!         | '[' expr ',' expr ']' | '(' expr ')'
//! ```
//!
//! `q^m/2` is read as the half-integer power `q^{m/2}`; write `(q^m)/2` for
//! the quotient.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use qeuclid_core::{
    AlgebraElement, AlgebraError, Calculus, CalculusError, CalculusTag, Coefficient, GaussRational, Monomial,
    OneForm, Space,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("forms appear at most linearly: {0}")]
    NonlinearForm(&'static str),
    #[error("cannot mix xi and xibar forms")]
    MixedCalculi,
    #[error("cannot add a function and a form")]
    KindMismatch,
    #[error("exponent {0} is too large")]
    Exponent(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Imag,
    /// `s^e = q^{e/2}`.
    SPow(i32),
    H,
    K,
    X(i32),
    R(i32),
    Lambda,
    Kappa,
    Xi(CalculusTag, i32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Commutator(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut p = 0;
    while p < bytes.len() {
        let c = bytes[p] as char;
        if c.is_ascii_whitespace() {
            p += 1;
        } else if c.is_ascii_digit() {
            let start = p;
            while p < bytes.len() && bytes[p].is_ascii_digit() {
                p += 1;
            }
            out.push((start, Tok::Int(text[start..p].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = p;
            while p < bytes.len() && bytes[p].is_ascii_alphabetic() {
                p += 1;
            }
            out.push((start, Tok::Ident(text[start..p].to_string())));
        } else if "+-*/^()[],".contains(c) {
            out.push((p, Tok::Sym(c)));
            p += 1;
        } else {
            let ch = text[p..].chars().next().unwrap_or('?');
            return Err(ParseError { pos: p, msg: format!("unexpected character {ch:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                let n: i64 = n.try_into().map_err(|_| ParseError { pos, msg: "integer too large".into() })?;
                Ok(if neg { -n } else { n })
            }
            _ => self.error("expected an integer"),
        }
    }

    fn index(&mut self) -> Result<i32, ParseError> {
        self.expect('(')?;
        let pos = self.pos();
        let i = self.int()?;
        self.expect(')')?;
        i32::try_from(i).map_err(|_| ParseError { pos, msg: "index too large".into() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let is_q = self.peek() == Some(&Tok::Ident("q".into()));
        let atom = self.atom()?;
        if !self.eat('^') {
            return Ok(atom);
        }
        let e = self.int()?;
        if is_q {
            let half = self.toks.get(self.at..self.at + 2).is_some_and(|t| {
                t[0].1 == Tok::Sym('/') && t[1].1 == Tok::Int(2.into())
            });
            let s = if half {
                self.at += 2;
                e
            } else {
                2 * e
            };
            return match i32::try_from(s) {
                Ok(s) => Ok(Expr::SPow(s)),
                Err(_) => self.error("exponent too large"),
            };
        }
        Ok(Expr::Pow(Box::new(atom), e))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Commutator(Box::new(a), Box::new(b)))
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Expr::Imag),
                "s" => Ok(Expr::SPow(1)),
                "q" => Ok(Expr::SPow(2)),
                "h" => Ok(Expr::H),
                "k" => Ok(Expr::K),
                "L" => Ok(Expr::Lambda),
                "K" => Ok(Expr::Kappa),
                "x" => Ok(Expr::X(self.index()?)),
                "r" => Ok(Expr::R(self.index()?)),
                "xi" => Ok(Expr::Xi(CalculusTag::Plain, self.index()?)),
                "xibar" => Ok(Expr::Xi(CalculusTag::Barred, self.index()?)),
                _ => Err(ParseError { pos, msg: format!("unknown name {name:?}") }),
            },
            Tok::Sym(c) => Err(ParseError { pos, msg: format!("unexpected '{c}'") }),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// A normalized value: a function or a one-form with left coefficients.
pub enum Value<S> {
    Elem(AlgebraElement<S>),
    Form(OneForm<S>),
}

impl<S: Coefficient> Clone for Value<S> {
    fn clone(&self) -> Self {
        match self {
            Value::Elem(u) => Value::Elem(u.clone()),
            Value::Form(u) => Value::Form(u.clone()),
        }
    }
}

impl<S: Coefficient> PartialEq for Value<S> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Elem(a), Value::Elem(b)) => a == b,
            (Value::Form(a), Value::Form(b)) => a == b,
            _ => false,
        }
    }
}

impl<S: Coefficient> fmt::Debug for Value<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Elem(u) => f.debug_tuple("Elem").field(u).finish(),
            Value::Form(u) => f.debug_tuple("Form").field(u).finish(),
        }
    }
}

pub struct Evaluator<'a, S> {
    space: &'a Space<S>,
    calculi: [Option<Calculus<'a, S>>; 2],
}

fn slot(tag: CalculusTag) -> usize {
    match tag {
        CalculusTag::Plain => 0,
        CalculusTag::Barred => 1,
    }
}

impl<'a, S: Coefficient> Evaluator<'a, S> {
    pub fn new(space: &'a Space<S>) -> Self {
        Self { space, calculi: [None, None] }
    }

    fn calculus(&mut self, tag: CalculusTag) -> &Calculus<'a, S> {
        let space = self.space;
        self.calculi[slot(tag)].get_or_insert_with(|| Calculus::new(space, tag))
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Value<S>, EvalError> {
        let alg = &self.space.alg;
        let ctx = self.space.ctx();
        let elem = |c: S| Ok(Value::Elem(alg.scalar(c)));
        match e {
            Expr::Int(n) => elem(S::from_gauss(&GaussRational::real(BigRational::from_integer(n.clone())))),
            Expr::Imag => elem(S::imag_unit()),
            Expr::SPow(k) => elem(ctx.s_pow(*k)),
            Expr::H => elem(ctx.h().clone()),
            Expr::K => elem(ctx.k().clone()),
            Expr::X(i) => Ok(Value::Elem(alg.x_pow(*i, 1)?)),
            Expr::R(i) => Ok(Value::Elem(alg.r_pow(*i, 1)?)),
            Expr::Lambda => Ok(Value::Elem(alg.lambda_pow(1))),
            Expr::Kappa => Ok(Value::Elem(alg.kappa_pow(1)?)),
            Expr::Xi(tag, i) => {
                ctx.check_index(*i).map_err(AlgebraError::from)?;
                Ok(Value::Form(self.calculus(*tag).xi(*i)))
            }
            Expr::Neg(a) => Ok(match self.eval(a)? {
                Value::Elem(u) => Value::Elem(u.neg()),
                Value::Form(u) => Value::Form(u.scale(&-S::one())),
            }),
            Expr::Add(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.sum(a, b)
            }
            Expr::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                let b = match b {
                    Value::Elem(u) => Value::Elem(u.neg()),
                    Value::Form(u) => Value::Form(u.scale(&-S::one())),
                };
                self.sum(a, b)
            }
            Expr::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.product(a, b)
            }
            Expr::Div(a, b) => {
                let a = self.eval(a)?;
                let Value::Elem(b) = self.eval(b)? else {
                    return Err(EvalError::NonlinearForm("division by a form"));
                };
                let inv = self.inverse(&b)?;
                self.product(a, Value::Elem(inv))
            }
            Expr::Pow(a, n) => self.power(a, *n),
            Expr::Commutator(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match (a, b) {
                    (Value::Elem(u), Value::Elem(v)) => Ok(Value::Elem(alg.commutator(&u, &v))),
                    (Value::Form(u), Value::Elem(f)) => Ok(Value::Form(self.calculus(u.tag()).commutator(&u, &f)?)),
                    (Value::Elem(f), Value::Form(u)) => {
                        Ok(Value::Form(self.calculus(u.tag()).commutator(&u, &f)?.scale(&-S::one())))
                    }
                    (Value::Form(_), Value::Form(_)) => Err(EvalError::NonlinearForm("commutator of two forms")),
                }
            }
        }
    }

    fn power(&mut self, base: &Expr, n: i64) -> Result<Value<S>, EvalError> {
        let alg = &self.space.alg;
        let e = i32::try_from(n).map_err(|_| EvalError::Exponent(n))?;
        // generators take their powers directly so that the index checks
        // report the right error
        let direct = match base {
            Expr::X(i) => Some(alg.x_pow(*i, e)?),
            Expr::R(i) => Some(alg.r_pow(*i, e)?),
            Expr::Lambda => Some(alg.lambda_pow(e)),
            Expr::Kappa => Some(alg.kappa_pow(e)?),
            _ => None,
        };
        if let Some(u) = direct {
            return Ok(Value::Elem(u));
        }
        match self.eval(base)? {
            Value::Form(u) if n == 1 => Ok(Value::Form(u)),
            Value::Form(_) => Err(EvalError::NonlinearForm("power of a form")),
            Value::Elem(u) => {
                let u = if e < 0 { self.inverse(&u)? } else { u };
                Ok(Value::Elem(alg.pow(&u, e.unsigned_abs())))
            }
        }
    }

    fn sum(&mut self, a: Value<S>, b: Value<S>) -> Result<Value<S>, EvalError> {
        match (a, b) {
            (Value::Elem(u), Value::Elem(v)) => Ok(Value::Elem(u.add(&v))),
            (Value::Form(u), Value::Form(v)) if u.tag() == v.tag() => Ok(Value::Form(u.add(&v))),
            (Value::Form(_), Value::Form(_)) => Err(EvalError::MixedCalculi),
            (Value::Elem(z), form) | (form, Value::Elem(z)) if z.is_empty() => Ok(form),
            _ => Err(EvalError::KindMismatch),
        }
    }

    fn product(&mut self, a: Value<S>, b: Value<S>) -> Result<Value<S>, EvalError> {
        let alg = &self.space.alg;
        match (a, b) {
            (Value::Elem(u), Value::Elem(v)) => Ok(Value::Elem(alg.mul(&u, &v))),
            (Value::Elem(f), Value::Form(u)) => Ok(Value::Form(self.calculus(u.tag()).left_mul(&f, &u))),
            (Value::Form(u), Value::Elem(f)) => Ok(Value::Form(self.calculus(u.tag()).right_mul(&u, &f)?)),
            (Value::Form(_), Value::Form(_)) => Err(EvalError::NonlinearForm("product of two forms")),
        }
    }

    /// Inverse of a nonzero scalar or of a single term built from invertible
    /// generators.
    pub fn inverse(&self, u: &AlgebraElement<S>) -> Result<AlgebraElement<S>, EvalError> {
        let alg = &self.space.alg;
        let layout = alg.layout();
        let text = || alg.text(u);
        let mut terms = u.terms();
        let (m, c) = match (terms.next(), terms.next()) {
            (None, _) => return Err(EvalError::DivisionByZero),
            (Some(t), None) => t,
            _ => return Err(EvalError::NotInvertible(text())),
        };
        let c_inv = c.checked_inv().ok_or(EvalError::DivisionByZero)?;
        // m = L^a K^b r^.. x^.. in this order, so the inverse runs backwards
        let mut factors = Vec::new();
        for &i in self.space.indices().iter().rev() {
            let e = m.x(layout, i);
            if e != 0 {
                factors.push(alg.x_pow(i, -e).map_err(|_| EvalError::NotInvertible(text()))?);
            }
        }
        for i in (1..=alg.rank()).rev() {
            if m.r(i) != 0 {
                factors.push(alg.r_pow(i as i32, -m.r(i))?);
            }
        }
        if m.kappa() != 0 {
            factors.push(alg.kappa_pow(-m.kappa())?);
        }
        factors.push(alg.lambda_pow(-m.lambda()));
        let refs: Vec<_> = factors.iter().collect();
        Ok(alg.product(&refs).scale(&c_inv))
    }
}

/// Canonical text; `parse_expr` reads it back to the same value.
pub struct ValueText<'a, S>(pub &'a Space<S>, pub &'a Value<S>);

impl<S: Coefficient> fmt::Display for ValueText<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alg = &self.0.alg;
        match self.1 {
            Value::Elem(u) => write!(f, "{}", alg.text(u)),
            Value::Form(u) => {
                let name = match u.tag() {
                    CalculusTag::Plain => "xi",
                    CalculusTag::Barred => "xibar",
                };
                let mut first = true;
                for (i, c) in u.components() {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    if c.terms().count() == 1 && c.coeff(&Monomial::one()).is_some_and(|c| c.is_one()) {
                        write!(f, "{name}({i})")?;
                    } else {
                        write!(f, "({})*{name}({i})", alg.text(c))?;
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses and normalizes `text` over `space`.
pub fn normalize<S: Coefficient>(space: &Space<S>, text: &str) -> Result<Value<S>, ExprError> {
    let ast = parse_expr(text)?;
    Ok(Evaluator::new(space).eval(&ast)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

const COEFFS: [&str; 9] = ["1", "2", "-1/3", "(1+2*i)", "q", "q^-1/2", "h", "(q - 1)/(q + 1)", "-k"];

/// `count` random expressions over `space`, a third of them one-forms.
pub fn random_texts<S: Coefficient>(space: &Space<S>, count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = space.ctx();
    let idx = space.indices();
    let rank = ctx.rank() as i32;
    (0..count)
        .map(|_| {
            let form = match rng.gen_range(0..6) {
                0 => Some("xi"),
                1 => Some("xibar"),
                _ => None,
            };
            let terms: Vec<String> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let mut factors = vec![COEFFS[rng.gen_range(0..COEFFS.len())].to_string()];
                    for _ in 0..rng.gen_range(0..=3) {
                        let g = match rng.gen_range(0..8) {
                            0 => format!("L^{}", rng.gen_range(-2..=2)),
                            1 if !ctx.is_odd() => format!("K^{}", rng.gen_range(-1..=1)),
                            2 if form.is_none() => format!("r({})^{}", rng.gen_range(1..=rank), rng.gen_range(-1..=1)),
                            3 if form.is_none() => {
                                let i = if ctx.is_odd() { 0 } else if rng.gen_bool(0.5) { 1 } else { -1 };
                                format!("x({i})^-1")
                            }
                            _ => format!("x({})", idx[rng.gen_range(0..idx.len())]),
                        };
                        factors.push(g);
                    }
                    if let Some(name) = form {
                        let at = rng.gen_range(1..=factors.len());
                        factors.insert(at, format!("{name}({})", idx[rng.gen_range(0..idx.len())]));
                    }
                    factors.join("*")
                })
                .collect();
            terms.join(" + ")
        })
        .collect()
}
