//! Demazure operators on `R = k[x_1, ..., x_n]` and nested operator
//! expressions, including the evaluation of intersection-form entries by
//! erasing one operator at a time.
//!
//! Text format (prefix notation):
//!
//! ```text
//! expr   := 'D' i expr | poly '*' expr | '(' expr ')' | poly
//! poly   := '-'? factor
//! factor := atom ('^' k)?
//! atom   := 'a' i | 'x' i | integer | '[' sum ']'
//! sum    := poly ('*' poly)* (('+' | '-') poly ('*' poly)*)*
//! ```
//!
//! where `Di` is the Demazure operator of `s_i`, `ai` the simple root
//! `x_{i+1} - x_i` and `xi` a variable.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{matrix_rank, Field};
use crate::multipoly::{MultiPoly, PolyError};
use crate::ring::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DemazureError {
    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("operator index {index} out of range 1..={count}")]
    EraseOutOfRange { index: usize, count: usize },
    #[error("erasing operator {index} leaves the non-constant value {value}")]
    DegreeAuditFailure { index: usize, value: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `f -> (f - s_i f) / alpha_i`.
pub fn apply_demazure<C: Coefficient>(
    i: usize,
    f: &MultiPoly<C>,
) -> Result<MultiPoly<C>, PolyError> {
    let Some((_, c)) = f.terms().next() else {
        return Ok(MultiPoly::zero());
    };
    let diff = f.sub(&f.swap_vars(i));
    if diff.is_zero() {
        return Ok(diff);
    }
    diff.div_exact(&MultiPoly::simple_root(c, i))
}

/// A nested product of polynomials and Demazure operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemazureExpr {
    Const(MultiPoly),
    Mul(MultiPoly, Box<DemazureExpr>),
    Op(usize, Box<DemazureExpr>),
}

/// Builtin expression name.
pub const PAPER_GL15: &str = "paper-GL15";

/// The nested expression whose single-operator erasures give the degree
/// `-1` intersection form for the `GL_15` example.
pub const PAPER_GL15_TEXT: &str =
    "D1 D2 D3 ( a4 * D2 D3 ( a4^2 * D3 ( a4^2 * D1 D2 D3 ( a4^2 * D2 D3 ( a4^2 * D3 ( a4^2 ) ) ) ) ) )";

impl DemazureExpr {
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            PAPER_GL15 => Some(Self::parse(PAPER_GL15_TEXT).expect("builtin parses")),
            _ => None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, DemazureError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(e)
    }

    /// Operator indices in written (prefix) order.
    pub fn operators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut node = self;
        loop {
            match node {
                DemazureExpr::Const(_) => return out,
                DemazureExpr::Mul(_, child) => node = child,
                DemazureExpr::Op(i, child) => {
                    out.push(*i);
                    node = child;
                }
            }
        }
    }

    /// Graded degree of all polynomial factors.
    pub fn content_degree(&self) -> i64 {
        match self {
            DemazureExpr::Const(p) => p.graded_degree().unwrap_or(0),
            DemazureExpr::Mul(p, child) => p.graded_degree().unwrap_or(0) + child.content_degree(),
            DemazureExpr::Op(_, child) => child.content_degree(),
        }
    }

    /// Degree of the value if nonzero: content minus two per operator.
    pub fn expected_degree(&self) -> i64 {
        self.content_degree() - 2 * self.operators().len() as i64
    }

    /// The expression with its `k`-th operator (1-based, written order)
    /// replaced by the identity.
    pub fn erase(&self, k: usize) -> Result<Self, DemazureError> {
        let count = self.operators().len();
        if k == 0 || k > count {
            return Err(DemazureError::EraseOutOfRange { index: k, count });
        }
        Ok(self.erase_inner(&mut { k }))
    }

    fn erase_inner(&self, k: &mut usize) -> Self {
        match self {
            DemazureExpr::Const(p) => DemazureExpr::Const(p.clone()),
            DemazureExpr::Mul(p, child) => {
                DemazureExpr::Mul(p.clone(), Box::new(child.erase_inner(k)))
            }
            DemazureExpr::Op(i, child) => {
                *k -= 1;
                if *k == 0 {
                    // Counter that never reaches zero again.
                    let mut done = usize::MAX;
                    child.erase_inner(&mut done)
                } else {
                    DemazureExpr::Op(*i, Box::new(child.erase_inner(k)))
                }
            }
        }
    }

    /// Bottom-up evaluation with coefficients mapped into the ring of `one`.
    pub fn eval_in<C: Coefficient>(&self, one: &C) -> Result<MultiPoly<C>, DemazureError> {
        let lift = |p: &MultiPoly| p.map_coeffs(|c| one.from_int_like(c));
        Ok(match self {
            DemazureExpr::Const(p) => lift(p),
            DemazureExpr::Mul(p, child) => lift(p).mul(&child.eval_in(one)?),
            DemazureExpr::Op(i, child) => apply_demazure(*i, &child.eval_in(one)?)?,
        })
    }

    pub fn eval(&self) -> Result<MultiPoly, DemazureError> {
        self.eval_in(&BigInt::from(1))
    }

    /// Evaluation that also records `(expected degree, value)` for every
    /// subexpression, innermost first.
    pub fn eval_audited(&self) -> Result<(MultiPoly, Vec<DegreeCheck>), DemazureError> {
        let mut log = Vec::new();
        let v = self.eval_audited_inner(&mut log)?;
        Ok((v, log))
    }

    fn eval_audited_inner(&self, log: &mut Vec<DegreeCheck>) -> Result<MultiPoly, DemazureError> {
        let value = match self {
            DemazureExpr::Const(p) => p.clone(),
            DemazureExpr::Mul(p, child) => p.mul(&child.eval_audited_inner(log)?),
            DemazureExpr::Op(i, child) => apply_demazure(*i, &child.eval_audited_inner(log)?)?,
        };
        log.push(DegreeCheck {
            expected: self.expected_degree(),
            actual: value.graded_degree(),
            zero: value.is_zero(),
        });
        Ok(value)
    }
}

/// One line of the grading audit: a nonzero value must be homogeneous of
/// the expected degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub expected: i64,
    pub actual: Option<i64>,
    pub zero: bool,
}

impl DegreeCheck {
    pub fn ok(&self) -> bool {
        self.zero || self.actual == Some(self.expected)
    }
}

impl fmt::Display for DemazureExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemazureExpr::Const(p) => write!(f, "( {} )", poly_text(p)),
            DemazureExpr::Mul(p, child) => write!(f, "( {} * {child} )", poly_text(p)),
            DemazureExpr::Op(i, child) => write!(f, "D{i} {child}"),
        }
    }
}

/// `a{i}^k` when `p` is a power of a simple root, else a bracketed sum.
fn poly_text(p: &MultiPoly) -> String {
    let one = BigInt::from(1);
    let deg = p.graded_degree().unwrap_or(0) / 2;
    if deg > 0 {
        for i in 1..p.num_vars() {
            if MultiPoly::simple_root(&one, i).pow(deg as u32) == *p {
                return if deg == 1 {
                    format!("a{i}")
                } else {
                    format!("a{i}^{deg}")
                };
            }
        }
    }
    format!("[{p}]")
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Op(usize),
    Root(usize),
    Var(usize),
    Int(BigInt),
    Caret,
    Star,
    Plus,
    Minus,
    Open,
    Close,
    OpenBracket,
    CloseBracket,
}

fn tokenize(text: &str) -> Result<Vec<Token>, DemazureError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let number = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (*i > start).then(|| chars[start..*i].iter().collect())
    };
    while i < chars.len() {
        let c = chars[i];
        let bad = |msg: &str| DemazureError::Parse {
            position: out.len(),
            message: msg.to_string(),
        };
        let simple = match c {
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            '[' => Some(Token::OpenBracket),
            ']' => Some(Token::CloseBracket),
            '*' => Some(Token::Star),
            '^' => Some(Token::Caret),
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            _ => None,
        };
        if let Some(t) = simple {
            out.push(t);
            i += 1;
            continue;
        }
        match c {
            _ if c.is_whitespace() => i += 1,
            'D' | 'a' | 'x' => {
                i += 1;
                let digits =
                    number(&mut i).ok_or_else(|| bad(&format!("expected an index after {c:?}")))?;
                let idx: usize = digits.parse().map_err(|_| bad("index too large"))?;
                if idx == 0 {
                    return Err(bad("indices are 1-based"));
                }
                out.push(match c {
                    'D' => Token::Op(idx),
                    'a' => Token::Root(idx),
                    _ => Token::Var(idx),
                });
            }
            '0'..='9' => {
                let digits = number(&mut i).expect("at a digit");
                out.push(Token::Int(digits.parse().map_err(|_| bad("bad integer"))?));
            }
            _ => return Err(bad(&format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

/// Recursive descent over the token stream. Polynomials outside brackets
/// are single (possibly signed) factors; `[ ... ]` admits sums.
struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> DemazureError {
        DemazureError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<DemazureExpr, DemazureError> {
        match self.peek() {
            Some(Token::Op(i)) => {
                let i = *i;
                self.pos += 1;
                Ok(DemazureExpr::Op(i, Box::new(self.expr()?)))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Token::Close) {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(
                Token::Root(_) | Token::Var(_) | Token::Int(_) | Token::Minus | Token::OpenBracket,
            ) => {
                let f = self.signed_factor()?;
                if self.eat(&Token::Star) {
                    Ok(DemazureExpr::Mul(f, Box::new(self.expr()?)))
                } else {
                    Ok(DemazureExpr::Const(f))
                }
            }
            _ => Err(self.error("expected an operator, '(' or a polynomial")),
        }
    }

    fn signed_factor(&mut self) -> Result<MultiPoly, DemazureError> {
        if self.eat(&Token::Minus) {
            return Ok(self.factor()?.neg());
        }
        self.factor()
    }

    /// `term (('+' | '-') term)*` inside brackets.
    fn sum(&mut self) -> Result<MultiPoly, DemazureError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(&Token::Plus) {
                acc = acc.add(&self.product()?);
            } else if self.eat(&Token::Minus) {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<MultiPoly, DemazureError> {
        let mut acc = self.signed_factor()?;
        while self.eat(&Token::Star) {
            acc = acc.mul(&self.signed_factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, DemazureError> {
        let one = BigInt::from(1);
        let base = match self.tokens.get(self.pos).cloned() {
            Some(Token::Root(i)) => MultiPoly::simple_root(&one, i),
            Some(Token::Var(i)) => MultiPoly::var(&one, i),
            Some(Token::Int(v)) => MultiPoly::constant(v),
            Some(Token::OpenBracket) => {
                self.pos += 1;
                let p = self.sum()?;
                if self.peek() != Some(&Token::CloseBracket) {
                    return Err(self.error("expected ']'"));
                }
                p
            }
            _ => return Err(self.error("expected a factor")),
        };
        self.pos += 1;
        if !self.eat(&Token::Caret) {
            return Ok(base);
        }
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Int(k)) if k <= BigInt::from(u32::MAX) => {
                self.pos += 1;
                let k: u32 = k.try_into().expect("bounded");
                if base.is_zero() && k == 0 {
                    return Err(self.error("0^0"));
                }
                Ok(base.pow(k))
            }
            _ => Err(self.error("expected a non-negative exponent")),
        }
    }
}

/// Value of one erasure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErasureAudit {
    /// 1-based position in written order
    pub index: usize,
    pub generator: usize,
    pub expected_degree: i64,
    /// `None` for the zero polynomial
    pub value_degree: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionFormReport {
    #[serde(serialize_with = "ser_bigints")]
    pub entries: Vec<BigInt>,
    pub rank_over_q: usize,
    pub prime: u64,
    pub rank_over_p: usize,
    pub degree_audit: Vec<ErasureAudit>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        // Entries are small in practice; fall back to strings otherwise.
        match i64::try_from(x) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// Value of the expression with operator `k` erased.
pub fn erase_and_eval(expr: &DemazureExpr, k: usize) -> Result<MultiPoly, DemazureError> {
    expr.erase(k)?.eval()
}

/// The row of degree-zero values obtained by erasing each operator in
/// turn, with its ranks over `Q` and `F_p`.
pub fn intersection_vector(
    expr: &DemazureExpr,
    prime: u64,
) -> Result<IntersectionFormReport, DemazureError> {
    let ops = expr.operators();
    let values: Vec<Result<MultiPoly, DemazureError>> = (1..=ops.len())
        .into_par_iter()
        .map(|k| erase_and_eval(expr, k))
        .collect();
    let mut entries = Vec::with_capacity(ops.len());
    let mut degree_audit = Vec::with_capacity(ops.len());
    for (idx, value) in values.into_iter().enumerate() {
        let value = value?;
        let k = idx + 1;
        if !value.is_constant() {
            return Err(DemazureError::DegreeAuditFailure {
                index: k,
                value: value.to_string(),
            });
        }
        degree_audit.push(ErasureAudit {
            index: k,
            generator: ops[idx],
            expected_degree: expr.erase(k)?.expected_degree(),
            value_degree: value.graded_degree(),
        });
        entries.push(value.constant_term().cloned().unwrap_or_default());
    }
    let rows: Vec<Vec<BigInt>> = if entries.is_empty() {
        Vec::new()
    } else {
        vec![entries.clone()]
    };
    Ok(IntersectionFormReport {
        rank_over_q: matrix_rank(&rows, Field::Rationals),
        rank_over_p: matrix_rank(&rows, Field::Prime(prime)),
        prime,
        entries,
        degree_audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn one() -> BigInt {
        BigInt::from(1)
    }

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(&one(), i)
    }

    fn c(v: i64) -> MultiPoly {
        MultiPoly::constant(BigInt::from(v))
    }

    #[test]
    fn demazure_examples() {
        assert_eq!(apply_demazure(1, &x(2)).unwrap(), c(1));
        assert_eq!(apply_demazure(1, &x(1)).unwrap(), c(-1));
        let a4 = MultiPoly::simple_root(&one(), 4);
        let expected = x(3).add(&x(4)).sub(&x(5).scale(&BigInt::from(2)));
        assert_eq!(apply_demazure(3, &a4.pow(2)).unwrap(), expected);
        assert!(apply_demazure(2, &c(5)).unwrap().is_zero());
        assert!(apply_demazure(2, &MultiPoly::<BigInt>::zero())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn parse_and_print() {
        let e = DemazureExpr::parse("D3(a4^2)").unwrap();
        assert_eq!(
            e,
            DemazureExpr::Op(
                3,
                Box::new(DemazureExpr::Const(
                    MultiPoly::simple_root(&one(), 4).pow(2)
                ))
            )
        );
        assert_eq!(
            e.eval().unwrap(),
            x(3).add(&x(4)).sub(&x(5).scale(&BigInt::from(2)))
        );
        let builtin = DemazureExpr::builtin(PAPER_GL15).unwrap();
        assert_eq!(
            builtin.operators(),
            vec![1, 2, 3, 2, 3, 3, 1, 2, 3, 2, 3, 3]
        );
        assert_eq!(builtin.content_degree(), 22);
        let reparsed = DemazureExpr::parse(&builtin.to_string()).unwrap();
        assert_eq!(reparsed, builtin);
        assert_eq!(
            DemazureExpr::parse("a4").unwrap().eval().unwrap(),
            MultiPoly::simple_root(&one(), 4)
        );
        assert_eq!(
            DemazureExpr::parse("2 * x1 * D1 x2")
                .unwrap()
                .eval()
                .unwrap(),
            x(1).scale(&BigInt::from(2))
        );
        assert!(DemazureExpr::builtin("nope").is_none());
        let general = DemazureExpr::parse("D1 ( [x1^2 - 3*x2 + 1] * -x3 * D2 ( 2 ) )").unwrap();
        assert_eq!(DemazureExpr::parse(&general.to_string()).unwrap(), general);
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "D",
            "D0 (a1)",
            "D1 (a1",
            "a1 *",
            "a1 a2",
            "D1 ( a1 ) )",
            "a1^",
            "a1^-1",
            "q1",
            "0^0",
            "[x1 + ]",
            "[x1",
        ] {
            assert!(
                matches!(DemazureExpr::parse(bad), Err(DemazureError::Parse { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn erase_examples() {
        let e = DemazureExpr::builtin(PAPER_GL15).unwrap();
        assert_eq!(erase_and_eval(&e, 4).unwrap(), c(-2));
        assert_eq!(erase_and_eval(&e, 1).unwrap(), c(-2));
        assert!(erase_and_eval(&e, 3).unwrap().is_zero());
        assert!(matches!(
            e.erase(0),
            Err(DemazureError::EraseOutOfRange {
                index: 0,
                count: 12
            })
        ));
        assert!(matches!(
            e.erase(13),
            Err(DemazureError::EraseOutOfRange { .. })
        ));
        assert_eq!(
            e.erase(4).unwrap().operators(),
            vec![1, 2, 3, 3, 3, 1, 2, 3, 2, 3, 3]
        );
    }

    #[test]
    fn full_expression_vanishes() {
        let e = DemazureExpr::builtin(PAPER_GL15).unwrap();
        assert_eq!(e.expected_degree(), -2);
        let (value, audit) = e.eval_audited().unwrap();
        assert!(value.is_zero());
        assert!(audit.iter().all(DegreeCheck::ok), "{audit:?}");
    }

    #[test]
    fn intersection_vector_examples() {
        let e = DemazureExpr::builtin(PAPER_GL15).unwrap();
        let r = intersection_vector(&e, 2).unwrap();
        // Checked against an independent symbolic evaluation of the same tree.
        let expected: Vec<BigInt> = [-2, -2, 0, -2, -2, 0, -2, -2, 0, -2, 0, 0]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(r.entries, expected);
        assert_eq!((r.rank_over_q, r.rank_over_p), (1, 0));
        assert!(r.degree_audit.iter().all(|a| a.expected_degree == 0));

        let trivial = DemazureExpr::parse("a1").unwrap();
        let r = intersection_vector(&trivial, 2).unwrap();
        assert!(r.entries.is_empty());
        assert_eq!((r.rank_over_q, r.rank_over_p), (0, 0));

        let nonconstant = DemazureExpr::parse("D1 ( x2^2 )").unwrap();
        assert!(matches!(
            intersection_vector(&nonconstant, 2),
            Err(DemazureError::DegreeAuditFailure { index: 1, .. })
        ));
    }

    #[test]
    fn rational_evaluation_agrees() {
        let e = DemazureExpr::builtin(PAPER_GL15).unwrap();
        let q_one = BigRational::from_integer(one());
        for k in 1..=12 {
            let z = erase_and_eval(&e, k).unwrap();
            let q = e.erase(k).unwrap().eval_in(&q_one).unwrap();
            assert_eq!(q, z.map_coeffs(|c| BigRational::from_integer(c.clone())));
        }
    }
}
