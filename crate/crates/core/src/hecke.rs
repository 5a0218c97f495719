//! The Hecke algebra of `S_n` over `Z[v, v^-1]` in the standard basis
//! `{h_x}`, normalised by `b_s = h_s + v h_id`, so that
//! `h_s^2 = h_id + (v^-1 - v) h_s` and `b_s^2 = (v + v^-1) b_s`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::coxeter::{all_permutations, Permutation, Word};
use crate::laurent::IntLaurent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A finite `Z[v, v^-1]`-combination of standard basis elements `h_x`.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    coeffs: BTreeMap<Permutation, IntLaurent>,
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        HeckeElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// `h_x`.
    pub fn standard(x: &Permutation) -> Self {
        Self::from_terms(x.rank(), [(x.clone(), IntLaurent::one())])
    }

    pub fn identity(n: usize) -> Self {
        Self::standard(&Permutation::identity(n))
    }

    /// `b_s = h_s + v h_id`.
    pub fn kl_generator(n: usize, s: usize) -> Self {
        Self::bott_samelson(&Word::new(n, vec![s]).expect("valid generator"))
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Permutation, IntLaurent)>,
    ) -> Self {
        let mut h = Self::zero(n);
        for (x, p) in terms {
            h.add_term(&x, &p);
        }
        h
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, x: &Permutation) -> IntLaurent {
        self.coeffs.get(x).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &IntLaurent)> + '_ {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.coeffs.keys()
    }

    pub fn add_term(&mut self, x: &Permutation, p: &IntLaurent) {
        assert_eq!(x.rank(), self.n, "rank mismatch");
        if p.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(x.clone()).or_default();
        *slot = &*slot + p;
        if slot.is_zero() {
            self.coeffs.remove(x);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (x, p) in &other.coeffs {
            self.add_term(x, p);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&IntLaurent::int(-1)))
    }

    pub fn scale(&self, p: &IntLaurent) -> Self {
        let mut out = Self::zero(self.n);
        for (x, q) in &self.coeffs {
            out.add_term(x, &(q * p));
        }
        out
    }

    /// Product with `h_s` on the given side.
    pub fn mul_standard_gen(&self, s: usize, side: Side) -> Self {
        let mut out = Self::zero(self.n);
        let drop = IntLaurent::from_ints(&[(-1, 1), (1, -1)]);
        for (x, p) in &self.coeffs {
            let (sx, descent) = match side {
                Side::Left => (x.left_mul_gen(s), x.has_left_descent(s)),
                Side::Right => (x.right_mul_gen(s), x.has_right_descent(s)),
            };
            out.add_term(&sx, p);
            if descent {
                out.add_term(x, &(p * &drop));
            }
        }
        out
    }

    /// Product with `b_s = h_s + v h_id` on the given side.
    pub fn mul_kl_gen(&self, s: usize, side: Side) -> Self {
        let mut out = self.mul_standard_gen(s, side);
        out.add_assign(&self.scale(&IntLaurent::v_pow(1)));
        out
    }

    /// Product with `h_s^-1 = h_s + (v - v^-1) h_id`.
    fn mul_standard_gen_inverse(&self, s: usize, side: Side) -> Self {
        let mut out = self.mul_standard_gen(s, side);
        out.add_assign(&self.scale(&IntLaurent::from_ints(&[(1, 1), (-1, -1)])));
        out
    }

    /// General product, expanding `other` through reduced words.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "rank mismatch");
        let mut out = Self::zero(self.n);
        for (y, q) in &other.coeffs {
            let mut acc = self.clone();
            for &s in y.reduced_word().letters() {
                acc = acc.mul_standard_gen(s, Side::Right);
            }
            out.add_assign(&acc.scale(q));
        }
        out
    }

    /// `b_{s_1} b_{s_2} ... b_{s_m}`.
    pub fn bott_samelson(word: &Word) -> Self {
        word.letters()
            .iter()
            .fold(Self::identity(word.rank()), |acc, &s| {
                acc.mul_kl_gen(s, Side::Right)
            })
    }

    /// The ring involution with `v -> v^-1` and `h_x -> (h_{x^-1})^-1`.
    pub fn bar_involution(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (x, p) in &self.coeffs {
            // (h_{x^-1})^-1 = h_{s_1}^-1 ... h_{s_k}^-1 for x = s_1 ... s_k reduced
            let mut img = Self::identity(self.n);
            for &s in x.reduced_word().letters() {
                img = img.mul_standard_gen_inverse(s, Side::Right);
            }
            out.add_assign(&img.scale(&p.bar()));
        }
        out
    }

    /// The `v -> v^-1`-semilinear anti-automorphism fixing every `b_s`;
    /// it sends `h_x` to `h_x^-1`.
    pub fn anti_involution(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (x, p) in &self.coeffs {
            // h_x^-1 = h_{s_k}^-1 ... h_{s_1}^-1
            let mut img = Self::identity(self.n);
            for &s in x.reduced_word().letters() {
                img = img.mul_standard_gen_inverse(s, Side::Left);
            }
            out.add_assign(&img.scale(&p.bar()));
        }
        out
    }

    /// Coefficient of `h_id`.
    pub fn trace(&self) -> IntLaurent {
        self.coeff(&Permutation::identity(self.n))
    }

    pub fn map_coeffs(&self, f: impl Fn(&IntLaurent) -> IntLaurent) -> Self {
        Self::from_terms(self.n, self.coeffs.iter().map(|(x, p)| (x.clone(), f(p))))
    }
}

/// The form `(h, h') = trace(a(h) h')` where `a` is
/// [`HeckeElement::anti_involution`]. It is semilinear in the first slot
/// and `b_s` is self-adjoint from either side.
pub fn pairing(h: &HeckeElement, h2: &HeckeElement) -> IntLaurent {
    h.anti_involution().mul(h2).trace()
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(x, p)| format!("({p})h{x}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElement({self})")
    }
}

impl Serialize for HeckeElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (x, p) in &self.coeffs {
            map.serialize_entry(&x.key(), p)?;
        }
        map.end()
    }
}

/// Kazhdan-Lusztig basis elements of `S_n`, memoised.
///
/// Entries are only published once fully computed, so concurrent readers
/// never see partial results. The cost grows with `n!`; this is meant for
/// small ranks.
pub struct KlBasis {
    n: usize,
    table: RwLock<HashMap<Permutation, Arc<HeckeElement>>>,
}

impl KlBasis {
    pub fn new(n: usize) -> Self {
        KlBasis {
            n,
            table: RwLock::new(HashMap::new()),
        }
    }

    /// Shared cache for rank `n`.
    pub fn for_rank(n: usize) -> Arc<KlBasis> {
        static CACHES: OnceLock<Mutex<HashMap<usize, Arc<KlBasis>>>> = OnceLock::new();
        let caches = CACHES.get_or_init(|| Mutex::new(HashMap::new()));
        caches
            .lock()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::new(KlBasis::new(n)))
            .clone()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// `b_x`, via `b_s b_{sx} = b_x + sum mu(y, sx) b_y` over `y < sx`
    /// with `sy < y`, where `mu` is the coefficient of `v` in `beta_{y,sx}`.
    pub fn get(&self, x: &Permutation) -> Arc<HeckeElement> {
        assert_eq!(x.rank(), self.n, "rank mismatch");
        if let Some(b) = self.table.read().unwrap().get(x) {
            return b.clone();
        }
        let computed = Arc::new(self.compute(x));
        self.table
            .write()
            .unwrap()
            .entry(x.clone())
            .or_insert(computed)
            .clone()
    }

    fn compute(&self, x: &Permutation) -> HeckeElement {
        let n = self.n;
        let Some(s) = (1..n).find(|&s| x.has_left_descent(s)) else {
            return HeckeElement::identity(n);
        };
        let sx = x.left_mul_gen(s);
        let b_sx = self.get(&sx);
        let mut out = b_sx.mul_kl_gen(s, Side::Left);
        for (y, beta) in b_sx.terms() {
            if y == &sx || !y.has_left_descent(s) {
                continue;
            }
            let mu = beta.coeff(1).cloned().unwrap_or_default();
            if mu != num_bigint::BigInt::from(0) {
                let by = self.get(y);
                out = out.sub(&by.scale(&IntLaurent::monomial(mu, 0)));
            }
        }
        out
    }

    /// All `b_x` for `x` in `S_n`.
    pub fn all(&self) -> Vec<(Permutation, Arc<HeckeElement>)> {
        all_permutations(self.n)
            .into_iter()
            .map(|x| {
                let b = self.get(&x);
                (x, b)
            })
            .collect()
    }
}

/// `b_x` from the shared cache.
pub fn kl_basis(x: &Permutation) -> HeckeElement {
    KlBasis::for_rank(x.rank()).get(x).as_ref().clone()
}

/// Expansion `h = sum_x p_x b_x`, by peeling off maximal standard basis
/// elements (the KL basis is unitriangular against the standard basis).
pub fn kl_expand(h: &HeckeElement) -> BTreeMap<Permutation, IntLaurent> {
    let kl = KlBasis::for_rank(h.rank());
    let mut rest = h.clone();
    let mut out = BTreeMap::new();
    while let Some(top) = maximal_in_support(rest.support()) {
        let p = rest.coeff(&top);
        rest = rest.sub(&kl.get(&top).scale(&p));
        out.insert(top, p);
    }
    out
}

/// An element of maximal length in the support; it is Bruhat-maximal.
pub(crate) fn maximal_in_support<'a>(
    support: impl Iterator<Item = &'a Permutation>,
) -> Option<Permutation> {
    support
        .max_by(|a, b| a.length().cmp(&b.length()).then_with(|| b.cmp(a)))
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerversityReport {
    pub perverse: bool,
    pub expansion: BTreeMap<Permutation, IntLaurent>,
}

impl Serialize for PerversityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("perverse", &self.perverse)?;
        let exp: Vec<(String, &IntLaurent)> =
            self.expansion.iter().map(|(x, p)| (x.key(), p)).collect();
        map.serialize_entry("expansion", &OrderedPairs(&exp))?;
        map.end()
    }
}

pub(crate) struct OrderedPairs<'a, V>(pub &'a [(String, V)]);

impl<V: Serialize> Serialize for OrderedPairs<'_, V> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Perverse iff every KL coefficient is a constant.
pub fn is_perverse_character(h: &HeckeElement) -> PerversityReport {
    let expansion = kl_expand(h);
    let perverse = expansion.values().all(IntLaurent::is_constant);
    PerversityReport {
        perverse,
        expansion,
    }
}
