//! Sparse multivariate polynomials `k[x_1, x_2, ...]` with `deg x_i = 2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ring::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: {dividend} by {divisor}")]
    InexactDivision { dividend: String, divisor: String },
}

/// Exponent vector with trailing zeros removed, so that `Vec` ordering is
/// lexicographic order with `x_1 > x_2 > ...`.
pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, e) in out.iter_mut().zip(short) {
        *o += e;
    }
    out
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (o, e) in out.iter_mut().zip(b) {
        *o = o.checked_sub(*e)?;
    }
    Some(trim(out))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<C = BigInt> {
    terms: BTreeMap<Monomial, C>,
}

impl<C> Default for MultiPoly<C> {
    fn default() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn term(c: C, mono: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(mono, &c);
        p
    }

    /// `x_i` (1-based), with coefficients in the ring of `one`.
    pub fn var(one: &C, i: usize) -> Self {
        assert!(i >= 1, "variables are 1-based");
        let mut mono = vec![0; i];
        mono[i - 1] = 1;
        Self::term(one.one_like(), mono)
    }

    /// `alpha_i = x_{i+1} - x_i`.
    pub fn simple_root(one: &C, i: usize) -> Self {
        Self::var(one, i + 1).sub(&Self::var(one, i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, mono: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        let mono = trim(mono);
        match self.terms.get_mut(&mono) {
            Some(slot) => {
                let sum = slot.add(c);
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(mono, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), &ca.mul(cb));
            }
        }
        out
    }

    /// `self^k`; the base must be nonzero when `k == 0` so the unit has a
    /// ring to live in.
    pub fn pow(&self, k: u32) -> Self {
        let Some(c) = self.terms.values().next() else {
            assert!(k > 0, "0^0");
            return Self::zero();
        };
        (0..k).fold(Self::constant(c.one_like()), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &x.mul(c));
        }
        out
    }

    /// Number of variables actually used.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// The action of `s_i`: exchange `x_i` and `x_{i+1}`.
    pub fn swap_vars(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut m = m.clone();
            if m.len() < i + 1 {
                m.resize(i + 1, 0);
            }
            m.swap(i - 1, i);
            out.add_term(m, c);
        }
        out
    }

    fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient by `divisor`, by long division in lex order. Fails
    /// when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (lead_m, lead_c) = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let inexact = || PolyError::InexactDivision {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = mono_div(m, lead_m).ok_or_else(inexact)?;
            let qc = c.checked_div(lead_c).ok_or_else(inexact)?;
            let step = Self::term(qc, qm);
            rem = rem.sub(&step.mul(divisor));
            quotient = quotient.add(&step);
        }
        debug_assert_eq!(&quotient.mul(divisor), self);
        Ok(quotient)
    }

    /// Graded degree (`2 *` total degree) if homogeneous and nonzero.
    pub fn graded_degree(&self) -> Option<i64> {
        let mut degs = self
            .terms
            .keys()
            .map(|m| 2 * m.iter().map(|&e| e as i64).sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.graded_degree().is_some()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Vec::is_empty)
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&Vec::new())
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{e}", i + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                f.write_str(&mag)?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> BigInt {
        BigInt::from(1)
    }

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(&one(), i)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = x(1).add(&x(2)).pow(2);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
        assert_eq!(p.graded_degree(), Some(4));
        assert_eq!(p.sub(&p), MultiPoly::zero());
        assert_eq!(x(3).swap_vars(2), x(2));
        assert_eq!(x(1).swap_vars(2), x(1));
        assert_eq!(x(1).add(&MultiPoly::constant(one())).graded_degree(), None);
    }

    #[test]
    fn division() {
        let a = MultiPoly::simple_root(&one(), 1);
        let f = a.mul(&x(3).add(&x(1).pow(2)));
        assert_eq!(f.div_exact(&a).unwrap(), x(3).add(&x(1).pow(2)));
        assert!(matches!(
            x(1).div_exact(&a),
            Err(PolyError::InexactDivision { .. })
        ));
        assert_eq!(
            x(1).div_exact(&MultiPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
        let two = MultiPoly::constant(BigInt::from(2));
        assert!(x(1).div_exact(&two).is_err());
    }
}
