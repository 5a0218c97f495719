//! The spherical (left) module `M` attached to a parabolic subset `A`, with
//! standard basis `{m_x}` indexed by minimal coset representatives `W^A`.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;
use thiserror::Error;

use crate::coxeter::{
    bruhat_leq, classify_step, is_min_coset_rep, longest_element, min_coset_rep,
    parabolic_elements, ParabolicSubset, Permutation, Step, Word,
};
use crate::hecke::{pairing, HeckeElement, KlBasis, OrderedPairs};
use crate::laurent::{IntLaurent, LaurentError};
use crate::subexpr::{tally, EnumConstraint, SubexprError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SphericalError {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Subexpr(#[from] SubexprError),
    #[error("parabolic subsets differ: {0} vs {1}")]
    ParabolicMismatch(String, String),
    #[error("{0} is not a minimal coset representative for {1}")]
    NotMinimal(Permutation, String),
    #[error("b_{0} does not lie in the image of the embedding")]
    PullbackMismatch(Permutation),
}

/// A `Z[v, v^-1]`-combination of the `m_x`, `x` in `W^A`.
#[derive(Clone, PartialEq, Eq)]
pub struct SphericalElement {
    parabolic: ParabolicSubset,
    coeffs: BTreeMap<Permutation, IntLaurent>,
}

impl SphericalElement {
    pub fn zero(a: &ParabolicSubset) -> Self {
        SphericalElement {
            parabolic: a.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    /// `m_x` for the coset `x W_A`.
    pub fn standard(x: &Permutation, a: &ParabolicSubset) -> Self {
        let mut m = Self::zero(a);
        m.add_term(x, &IntLaurent::one());
        m
    }

    /// `m_id`.
    pub fn identity(a: &ParabolicSubset) -> Self {
        Self::standard(&Permutation::identity(a.rank()), a)
    }

    pub fn parabolic(&self) -> &ParabolicSubset {
        &self.parabolic
    }

    pub fn rank(&self) -> usize {
        self.parabolic.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &IntLaurent)> + '_ {
        self.coeffs.iter()
    }

    pub fn coeff(&self, x: &Permutation) -> IntLaurent {
        self.coeffs
            .get(&min_coset_rep(x, &self.parabolic))
            .cloned()
            .unwrap_or_default()
    }

    /// Adds `p m_x`; `x` may be any element of its coset.
    pub fn add_term(&mut self, x: &Permutation, p: &IntLaurent) {
        if p.is_zero() {
            return;
        }
        let key = min_coset_rep(x, &self.parabolic);
        let slot = self.coeffs.entry(key.clone()).or_default();
        *slot = &*slot + p;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    fn same_parabolic(&self, other: &Self) -> Result<(), SphericalError> {
        if self.parabolic != other.parabolic {
            return Err(SphericalError::ParabolicMismatch(
                self.parabolic.to_string(),
                other.parabolic.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SphericalError> {
        self.same_parabolic(other)?;
        let mut out = self.clone();
        for (x, p) in &other.coeffs {
            out.add_term(x, p);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SphericalError> {
        self.add(&other.scale(&IntLaurent::int(-1)))
    }

    pub fn scale(&self, p: &IntLaurent) -> Self {
        let mut out = Self::zero(&self.parabolic);
        for (x, q) in &self.coeffs {
            out.add_term(x, &(q * p));
        }
        out
    }

    /// `b_s m`:
    /// `b_s m_u = m_{su} + v m_u` (U), `m_{su} + v^-1 m_u` (D),
    /// `(v + v^-1) m_u` (S).
    pub fn act_by_gen(&self, s: usize) -> Self {
        let mut out = Self::zero(&self.parabolic);
        for (u, p) in &self.coeffs {
            match classify_step(s, u, &self.parabolic) {
                Step::U => {
                    out.add_term(&u.left_mul_gen(s), p);
                    out.add_term(u, &p.shift(1));
                }
                Step::D => {
                    out.add_term(&u.left_mul_gen(s), p);
                    out.add_term(u, &p.shift(-1));
                }
                Step::S => out.add_term(u, &(p * &IntLaurent::quantum_two())),
            }
        }
        out
    }

    /// `b_{s_1} ... b_{s_m} m_id`.
    pub fn bott_samelson(word: &Word, a: &ParabolicSubset) -> Self {
        word.letters()
            .iter()
            .rev()
            .fold(Self::identity(a), |m, &s| m.act_by_gen(s))
    }

    /// `phi(m)`, with `phi(m_x) = h_x b_{w_A}`.
    pub fn embed(&self) -> HeckeElement {
        let wa_len = self.parabolic.longest_length() as i64;
        let w_a = parabolic_elements(&self.parabolic);
        let mut out = HeckeElement::zero(self.rank());
        for (x, p) in &self.coeffs {
            for u in &w_a {
                out.add_term(&x.compose(u), &p.shift(wa_len - u.length() as i64));
            }
        }
        out
    }

    /// The preimage of `h` under [`Self::embed`], if there is one.
    pub fn pull_back(h: &HeckeElement, a: &ParabolicSubset) -> Option<Self> {
        let w_a = longest_element(a);
        let mut m = Self::zero(a);
        for (y, p) in h.terms() {
            let z = y.compose(&w_a);
            if is_min_coset_rep(&z, a) {
                m.add_term(&z, p);
            }
        }
        (m.embed() == *h).then_some(m)
    }

    pub fn map_coeffs(&self, f: impl Fn(&IntLaurent) -> IntLaurent) -> Self {
        let mut out = Self::zero(&self.parabolic);
        for (x, p) in &self.coeffs {
            out.add_term(x, &f(p));
        }
        out
    }
}

impl fmt::Display for SphericalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(x, p)| format!("({p})m{x}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SphericalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SphericalElement[{}]({self})", self.parabolic)
    }
}

/// `{"parabolic": [..], "coeffs": {"<one-line>": <poly>, ..}}`.
impl Serialize for SphericalElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        let a: Vec<usize> = self.parabolic.indices().collect();
        map.serialize_entry("parabolic", &a)?;
        let terms: Vec<(String, &IntLaurent)> =
            self.coeffs.iter().map(|(x, p)| (x.key(), p)).collect();
        map.serialize_entry("coeffs", &OrderedPairs(&terms))?;
        map.end()
    }
}

/// `pi~(A) = sum_{x in W_A} v^{2 l(x)}`.
pub fn pi_tilde(a: &ParabolicSubset) -> IntLaurent {
    let mut p = IntLaurent::zero();
    for x in parabolic_elements(a) {
        p = &p + &IntLaurent::v_pow(2 * x.length() as i64);
    }
    p
}

/// `(m, m') = (phi(m), phi(m')) / pi~(A)`; the division is exact.
pub fn spherical_pairing(
    m: &SphericalElement,
    m2: &SphericalElement,
) -> Result<IntLaurent, SphericalError> {
    m.same_parabolic(m2)?;
    let raw = pairing(&m.embed(), &m2.embed());
    Ok(raw.exact_divide(&pi_tilde(&m.parabolic))?)
}

/// `c_x`, obtained by pulling `b_{x w_A}` back along the embedding.
pub fn spherical_kl_basis(
    x: &Permutation,
    a: &ParabolicSubset,
) -> Result<SphericalElement, SphericalError> {
    if !is_min_coset_rep(x, a) {
        return Err(SphericalError::NotMinimal(x.clone(), a.to_string()));
    }
    let xw = x.compose(&longest_element(a));
    let b = KlBasis::for_rank(a.rank()).get(&xw);
    SphericalElement::pull_back(&b, a).ok_or(SphericalError::PullbackMismatch(xw))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalPerversityReport {
    pub perverse: bool,
    pub expansion: BTreeMap<Permutation, IntLaurent>,
}

impl Serialize for SphericalPerversityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("perverse", &self.perverse)?;
        let exp: Vec<(String, &IntLaurent)> =
            self.expansion.iter().map(|(x, p)| (x.key(), p)).collect();
        map.serialize_entry("expansion", &OrderedPairs(&exp))?;
        map.end()
    }
}

/// Expansion of `m` in `{c_z}`, by peeling off maximal standard terms.
pub fn spherical_kl_expand(
    m: &SphericalElement,
) -> Result<BTreeMap<Permutation, IntLaurent>, SphericalError> {
    let mut rest = m.clone();
    let mut out = BTreeMap::new();
    while let Some(top) = crate::hecke::maximal_in_support(rest.coeffs.keys()) {
        let p = rest.coeff(&top);
        let c = spherical_kl_basis(&top, &m.parabolic)?;
        rest = rest.sub(&c.scale(&p))?;
        out.insert(top, p);
    }
    Ok(out)
}

/// Perverse iff every coefficient in the `{c_z}` expansion is constant.
pub fn is_perverse_spherical(
    m: &SphericalElement,
) -> Result<SphericalPerversityReport, SphericalError> {
    let expansion = spherical_kl_expand(m)?;
    let perverse = expansion.values().all(IntLaurent::is_constant);
    Ok(SphericalPerversityReport {
        perverse,
        expansion,
    })
}

/// `sum_e v^{pdf(e)} m_{x^e}` over the subexpressions allowed by
/// `constraint`. With the free constraint this is `c_word`.
pub fn deodhar_expand(
    word: &Word,
    a: &ParabolicSubset,
    constraint: &EnumConstraint,
    threads: usize,
) -> Result<SphericalElement, SphericalError> {
    let t = tally(word, a, constraint, threads)?;
    Ok(expansion_from_tally(&t, a))
}

pub fn expansion_from_tally(t: &crate::subexpr::Tally, a: &ParabolicSubset) -> SphericalElement {
    let mut m = SphericalElement::zero(a);
    for (z, hist) in t.by_endpoint() {
        let p =
            IntLaurent::from_terms(hist.iter().map(|(&d, &c)| (d, num_bigint::BigInt::from(c))));
        m.add_term(&z, &p);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, DeriveSerialize)]
pub struct IntervalEntry {
    pub coset: Permutation,
    pub coefficient: IntLaurent,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, DeriveSerialize)]
pub struct IntervalReport {
    pub lower: Permutation,
    pub upper: Permutation,
    pub entries: Vec<IntervalEntry>,
    pub pass: bool,
}

impl IntervalReport {
    pub fn failures(&self) -> impl Iterator<Item = &IntervalEntry> + '_ {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Checks that every `m_z` with `x < z <= w` has its coefficient in `Z[v]`.
/// Cosets outside that interval are unconstrained.
pub fn interval_condition_check(
    expansion: &SphericalElement,
    x: &Permutation,
    w: &Permutation,
) -> Result<IntervalReport, SphericalError> {
    let a = expansion.parabolic();
    for y in [x, w] {
        if !is_min_coset_rep(y, a) {
            return Err(SphericalError::NotMinimal(y.clone(), a.to_string()));
        }
    }
    let entries: Vec<IntervalEntry> = expansion
        .terms()
        .filter(|(z, _)| *z != x && bruhat_leq(x, z) && bruhat_leq(z, w))
        .map(|(z, p)| IntervalEntry {
            coset: z.clone(),
            coefficient: p.clone(),
            pass: p.is_nonnegative_powers(),
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    Ok(IntervalReport {
        lower: x.clone(),
        upper: w.clone(),
        entries,
        pass,
    })
}
