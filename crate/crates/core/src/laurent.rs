//! Sparse Laurent polynomials in one variable `v`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::de::{self, Deserialize, Deserializer};
use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

use crate::ring::{parse_bigint, Coefficient, Fp, RingKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(RingKind, RingKind),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: {dividend} is not a multiple of {divisor}")]
    InexactDivision { dividend: String, divisor: String },
}

/// A Laurent polynomial `sum c_k v^k`.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty
/// map and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C = BigInt> {
    terms: BTreeMap<i64, C>,
}

pub type IntLaurent = LaurentPoly<BigInt>;

impl<C> Default for LaurentPoly<C> {
    fn default() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: C, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> Option<&C> {
        self.terms.get(&exp)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Ring of the stored coefficients; `None` for the zero polynomial.
    pub fn ring(&self) -> Option<RingKind> {
        self.terms.values().next().map(Coefficient::kind)
    }

    pub fn add_term(&mut self, exp: i64, coeff: &C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                let sum = c.add(coeff);
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(exp, coeff.clone());
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), LaurentError> {
        match (self.ring(), other.ring()) {
            (Some(a), Some(b)) if a != b => Err(LaurentError::RingMismatch(a, b)),
            _ => Ok(()),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_ring(other)?;
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, &ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, x)| {
                let y = x.mul(c);
                (!y.is_zero()).then_some((*e, y))
            })
            .collect();
        LaurentPoly { terms }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// The involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Membership in `k[v]`.
    pub fn is_nonnegative_powers(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// Membership in `v k[v]`.
    pub fn is_positive_powers(&self) -> bool {
        self.min_exp().is_none_or(|e| e > 0)
    }

    /// Only a constant term (or zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&0)
    }

    /// The exact quotient `a / b`, or `InexactDivision` when `b` does not
    /// divide `a` in the Laurent ring.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, LaurentError> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        let inexact = || LaurentError::InexactDivision {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Strip the powers of v (units), then long division of ordinary
        // polynomials from the top degree down.
        let dmin = divisor.min_exp().unwrap();
        let dmax = divisor.max_exp().unwrap();
        let lead = divisor.terms[&dmax].clone();
        let mut rem = self.shift(-self.min_exp().unwrap());
        let b = divisor.shift(-dmin);
        let top_b = dmax - dmin;
        let mut quotient = Self::zero();
        while let Some(top) = rem.max_exp() {
            if top < top_b {
                return Err(inexact());
            }
            let c = rem.terms[&top].checked_div(&lead).ok_or_else(inexact)?;
            let k = top - top_b;
            quotient.add_term(k, &c);
            for (e, bc) in &b.terms {
                rem.add_term(e + k, &bc.mul(&c).neg());
            }
            debug_assert!(rem.coeff(top).is_none());
        }
        Ok(quotient.shift(self.min_exp().unwrap() - dmin))
    }

    /// Apply a ring map coefficientwise (e.g. reduction `Z -> F_p`).
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, &f(c));
        }
        out
    }
}

impl LaurentPoly<BigInt> {
    pub fn int(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `c v^exp` with an integer coefficient.
    pub fn term(c: i64, exp: i64) -> Self {
        Self::monomial(BigInt::from(c), exp)
    }

    /// `v^exp`.
    pub fn v_pow(exp: i64) -> Self {
        Self::term(1, exp)
    }

    /// `v + v^{-1}`.
    pub fn quantum_two() -> Self {
        Self::from_terms([(1, BigInt::from(1)), (-1, BigInt::from(1))])
    }

    /// Integer polynomial from `(exponent, coefficient)` pairs.
    pub fn from_ints(pairs: &[(i64, i64)]) -> Self {
        Self::from_terms(pairs.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    pub fn reduce_mod(&self, p: u64) -> LaurentPoly<Fp> {
        self.map_coeffs(|c| Fp::from_bigint(c, p))
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest power first, as usually written.
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let unit = mag == "1";
            match *e {
                0 => f.write_str(&mag)?,
                _ => {
                    if !unit {
                        f.write_str(&mag)?;
                    }
                    if *e == 1 {
                        f.write_str("v")?;
                    } else {
                        write!(f, "v^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<C: Coefficient> $trait<&LaurentPoly<C>> for &LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $method(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<C: Coefficient> $trait<LaurentPoly<C>> for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $method(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }
}

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

/// `{"<exponent>": "<coefficient>", ...}` in increasing exponent order.
impl<C: Coefficient> Serialize for LaurentPoly<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut p = LaurentPoly::zero();
        for (k, v) in raw {
            let e: i64 = k
                .trim()
                .parse()
                .map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
            let c = parse_bigint(&v)
                .ok_or_else(|| de::Error::custom(format!("bad coefficient {v:?}")))?;
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn p(pairs: &[(i64, i64)]) -> IntLaurent {
        IntLaurent::from_ints(pairs)
    }

    #[test]
    fn quantum_two_squared() {
        let q = IntLaurent::quantum_two();
        assert_eq!(&q * &q, p(&[(2, 1), (0, 2), (-2, 1)]));
    }

    #[test]
    fn zero_is_canonical() {
        let v = IntLaurent::v_pow(1);
        let z = &v - &v;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
        assert_eq!(&z * &p(&[(3, 7), (-1, 2)]), IntLaurent::zero());
        let a = p(&[(1, 4), (-3, 1)]);
        assert_eq!(&a + &IntLaurent::zero(), a);
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p(&[(2, 1), (-1, 3)]).bar(), p(&[(-2, 1), (1, 3)]));
        assert_eq!(IntLaurent::quantum_two().bar(), IntLaurent::quantum_two());
        assert!(IntLaurent::zero().bar().is_zero());
    }

    #[test]
    fn nonnegative_powers() {
        assert!(p(&[(2, 1), (0, 1)]).is_nonnegative_powers());
        assert!(!IntLaurent::v_pow(-1).is_nonnegative_powers());
        assert!(IntLaurent::zero().is_nonnegative_powers());
    }

    #[test]
    fn exact_division_examples() {
        let a = p(&[(0, 1), (2, 1)]);
        assert_eq!(a.exact_divide(&a).unwrap(), IntLaurent::one());
        let num = p(&[(-1, 1), (1, 2), (3, 1)]);
        let den = p(&[(-1, 1), (1, 1)]);
        let q = num.exact_divide(&den).unwrap();
        assert_eq!(q, p(&[(0, 1), (2, 1)]));
        assert_eq!(&q * &den, num);
        let err = p(&[(0, 1), (1, 1)]).exact_divide(&p(&[(0, 1), (2, 1)]));
        assert!(matches!(err, Err(LaurentError::InexactDivision { .. })));
        assert_eq!(
            IntLaurent::one().exact_divide(&IntLaurent::zero()),
            Err(LaurentError::DivisionByZero)
        );
        // Integer content must divide too.
        assert!(p(&[(0, 3)]).exact_divide(&p(&[(0, 2)])).is_err());
        assert_eq!(
            p(&[(0, 4), (2, 6)]).exact_divide(&p(&[(1, 2)])).unwrap(),
            p(&[(-1, 2), (1, 3)])
        );
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = IntLaurent::one().reduce_mod(2);
        let b = IntLaurent::one().reduce_mod(3);
        assert_eq!(
            a.checked_add(&b),
            Err(LaurentError::RingMismatch(
                RingKind::Prime(2),
                RingKind::Prime(3)
            ))
        );
        assert!(a.checked_mul(&b).is_err());
        // The zero polynomial is compatible with everything.
        assert!(a.checked_add(&LaurentPoly::zero()).is_ok());
    }

    #[test]
    fn rational_coefficients() {
        let half = BigRational::new(1.into(), 2.into());
        let a = LaurentPoly::monomial(half.clone(), 1);
        let b = LaurentPoly::monomial(BigRational::from_integer(2.into()), -1);
        assert_eq!(
            (&a * &b).constant_term(),
            Some(&BigRational::from_integer(1.into()))
        );
        let q = LaurentPoly::monomial(BigRational::from_integer(1.into()), 0)
            .exact_divide(&LaurentPoly::monomial(
                BigRational::from_integer(3.into()),
                0,
            ))
            .unwrap();
        assert_eq!(
            q.constant_term(),
            Some(&BigRational::new(1.into(), 3.into()))
        );
    }

    #[test]
    fn display_and_json() {
        let a = p(&[(-1, 1), (1, 1)]);
        assert_eq!(a.to_string(), "v + v^-1");
        assert_eq!(p(&[(2, -3), (0, 1)]).to_string(), "-3v^2 + 1");
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"-1":"1","1":"1"}"#);
        let back: IntLaurent = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        let big: IntLaurent =
            serde_json::from_str(r#"{"0":"123456789012345678901234567890"}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&big).unwrap(),
            r#"{"0":"123456789012345678901234567890"}"#
        );
        assert!(serde_json::from_str::<IntLaurent>(r#"{"x":"1"}"#).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = IntLaurent> {
        proptest::collection::vec((-6i64..=6, -20i64..=20), 0..6)
            .prop_map(|v| IntLaurent::from_ints(&v))
    }

    proptest! {
        #[test]
        fn bar_is_involutive_ring_map(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn divide_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.exact_divide(&b).unwrap(), a);
        }

        #[test]
        fn reduction_is_a_ring_map(a in arb_poly(), b in arb_poly(), idx in 0usize..3) {
            let prime = [2u64, 3, 7][idx];
            prop_assert_eq!((&a * &b).reduce_mod(prime), &a.reduce_mod(prime) * &b.reduce_mod(prime));
            prop_assert_eq!((&a + &b).reduce_mod(prime), &a.reduce_mod(prime) + &b.reduce_mod(prime));
        }
    }
}
