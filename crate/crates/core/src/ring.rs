//! Exact coefficient rings: the integers, the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Which ring a coefficient lives in. Two values can only be combined when
/// their kinds agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Integer,
    Rational,
    Prime(u64),
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Integer => f.write_str("Z"),
            RingKind::Rational => f.write_str("Q"),
            RingKind::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact commutative ring element.
///
/// Elements of prime fields carry their modulus, so constants are always
/// produced from an existing element (`zero_like`, `from_int_like`).
pub trait Coefficient:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn kind(&self) -> RingKind;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn from_int_like(&self, n: &BigInt) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `Some(q)` with `q * other == self`, if such `q` exists in the ring.
    fn checked_div(&self, other: &Self) -> Option<Self>;

    fn one_like(&self) -> Self {
        self.from_int_like(&BigInt::one())
    }
}

impl Coefficient for BigInt {
    fn kind(&self) -> RingKind {
        RingKind::Integer
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        n.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        Zero::is_zero(&r).then_some(q)
    }
}

impl Coefficient for BigRational {
    fn kind(&self) -> RingKind {
        RingKind::Rational
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }
}

/// An element of the prime field `F_p`, stored as its least non-negative
/// residue together with `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    /// `p` must be prime; only small primes (below 2^32) are supported so
    /// products fit in `u64`.
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(
            (2..(1 << 32)).contains(&modulus),
            "unsupported modulus {modulus}"
        );
        let m = modulus as i64;
        Fp {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn from_bigint(n: &BigInt, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let r = n.mod_floor(&m);
        Fp {
            value: r.to_u64().expect("residue fits"),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = self.value;
        let mut exp = self.modulus - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        Some(Fp {
            value: acc,
            modulus: self.modulus,
        })
    }

    fn same(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixing F_{} and F_{}",
            self.modulus, other.modulus
        );
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Coefficient for Fp {
    fn kind(&self) -> RingKind {
        RingKind::Prime(self.modulus)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn zero_like(&self) -> Self {
        Fp {
            value: 0,
            modulus: self.modulus,
        }
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        Fp::from_bigint(n, self.modulus)
    }
    fn add(&self, other: &Self) -> Self {
        self.same(other);
        Fp {
            value: (self.value + other.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.same(other);
        Fp {
            value: (self.value + self.modulus - other.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self.same(other);
        Fp {
            value: self.value * other.value % self.modulus,
            modulus: self.modulus,
        }
    }
    fn neg(&self) -> Self {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        self.same(other);
        other.inverse().map(|inv| self.mul(&inv))
    }
}

/// Parse a decimal integer, as used by the JSON formats.
pub fn parse_bigint(s: &str) -> Option<BigInt> {
    s.trim().parse::<BigInt>().ok()
}

/// `true` for primes `p >= 2`; trial division is plenty for CLI-sized input.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
