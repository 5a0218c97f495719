//! The symmetric group `S_n` as a Coxeter system with simple reflections
//! `s_i = (i, i+1)`, `1 <= i < n`.
//!
//! Permutations are stored in one-line notation. Words are read as products
//! `s_{i_1} s_{i_2} ... s_{i_m}` of functions, so right multiplication by
//! `s_i` swaps the entries in positions `i, i+1` and left multiplication
//! swaps the values `i, i+1`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("not a permutation of 1..{n}: {images:?}")]
    NotAPermutation { n: usize, images: Vec<u32> },
    #[error("generator index {index} is not in 1..{n}")]
    BadGenerator { index: usize, n: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// A permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n as u32).collect(),
        }
    }

    pub fn from_one_line(images: Vec<u32>) -> Result<Self, CoxeterError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(CoxeterError::NotAPermutation { n, images });
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Simple reflection `s_i` in `S_n`.
    pub fn generator(n: usize, i: usize) -> Result<Self, CoxeterError> {
        check_generator(n, i)?;
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self(k)` for `1 <= k <= n`.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i + 1)
    }

    /// Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let n = self.images.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (pos, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = pos as u32 + 1;
        }
        Permutation { images: inv }
    }

    /// The product `self * other`, i.e. `k -> self(other(k))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        Permutation {
            images: other
                .images
                .iter()
                .map(|&k| self.images[k as usize - 1])
                .collect(),
        }
    }

    /// `s_i * self`.
    pub fn left_mul_gen(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.left_mul_gen_in_place(i);
        p
    }

    pub fn left_mul_gen_in_place(&mut self, i: usize) {
        let (a, b) = (i as u32, i as u32 + 1);
        for v in self.images.iter_mut() {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
    }

    /// `self * s_i`.
    pub fn right_mul_gen(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.images.swap(i - 1, i);
        p
    }

    /// `l(self * s_i) < l(self)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.images[i - 1] > self.images[i]
    }

    /// `l(s_i * self) < l(self)`: the value `i + 1` appears before `i`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let pos = |v: u32| self.images.iter().position(|&x| x == v).unwrap();
        pos(i as u32 + 1) < pos(i as u32)
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.rank())
            .filter(|&i| self.has_right_descent(i))
            .collect()
    }

    /// A reduced word, built by stripping right descents (lowest index first).
    pub fn reduced_word(&self) -> Word {
        let mut x = self.clone();
        let mut rev = Vec::with_capacity(x.length());
        while let Some(i) = (1..x.rank()).find(|&i| x.has_right_descent(i)) {
            rev.push(i);
            x.images.swap(i - 1, i);
        }
        rev.reverse();
        Word {
            n: self.rank(),
            letters: rev,
        }
    }

    pub fn parse(s: &str) -> Result<Self, CoxeterError> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let images = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| CoxeterError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_one_line(images)
    }

    /// Compact key `"3,2,1"` used in JSON maps.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.key())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let images = Vec::<u32>::deserialize(deserializer)?;
        Permutation::from_one_line(images).map_err(serde::de::Error::custom)
    }
}

fn check_generator(n: usize, i: usize) -> Result<(), CoxeterError> {
    if i == 0 || i >= n {
        Err(CoxeterError::BadGenerator { index: i, n })
    } else {
        Ok(())
    }
}

/// A word `(s_{i_1}, ..., s_{i_m})` in the simple reflections of `S_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    n: usize,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self, CoxeterError> {
        for &i in &letters {
            check_generator(n, i)?;
        }
        Ok(Word { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        Word {
            n,
            letters: Vec::new(),
        }
    }

    /// Accepts `"s1 s2 s1"`, `"1 2 1"` or `"1,2,1"`.
    pub fn parse(n: usize, s: &str) -> Result<Self, CoxeterError> {
        let letters = s
            .split(|c: char| {
                c == ',' || c.is_whitespace() || c == '(' || c == ')' || c == '[' || c == ']'
            })
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim_start_matches(['s', 'S'])
                    .parse::<usize>()
                    .map_err(|_| CoxeterError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, letters)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The product `s_{i_1} ... s_{i_m}`.
    pub fn evaluate(&self) -> Permutation {
        let mut p = Permutation::identity(self.n);
        for &i in &self.letters {
            p.images.swap(i - 1, i);
        }
        p
    }

    pub fn is_reduced(&self) -> bool {
        self.evaluate().length() == self.letters.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|i| format!("s{i}")).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// A subset `A` of the simple reflections of `S_n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParabolicSubset {
    n: usize,
    indices: BTreeSet<usize>,
}

impl ParabolicSubset {
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self, CoxeterError> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        for &i in &indices {
            check_generator(n, i)?;
        }
        Ok(ParabolicSubset { n, indices })
    }

    pub fn empty(n: usize) -> Self {
        ParabolicSubset {
            n,
            indices: BTreeSet::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        ParabolicSubset {
            n,
            indices: (1..n).collect(),
        }
    }

    /// Every subset of the simple reflections of `S_n`.
    pub fn all_subsets(n: usize) -> Vec<Self> {
        let gens = n.saturating_sub(1);
        (0u64..1 << gens)
            .map(|mask| ParabolicSubset {
                n,
                indices: (1..n).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Maximal runs of positions `[lo, hi]` (1-based, inclusive) that `W_A`
    /// permutes among themselves.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut lo = 1;
        for pos in 1..=self.n {
            if pos == self.n || !self.contains(pos) {
                out.push((lo, pos));
                lo = pos + 1;
            }
        }
        out
    }

    /// Block index of every position `1..=n` (entry 0 unused).
    pub fn block_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.n + 1];
        for (b, (lo, hi)) in self.blocks().into_iter().enumerate() {
            for slot in &mut ids[lo..=hi] {
                *slot = b;
            }
        }
        ids
    }

    /// `l(w_A)`.
    pub fn longest_length(&self) -> usize {
        self.blocks()
            .iter()
            .map(|(lo, hi)| (hi - lo + 1) * (hi - lo) / 2)
            .sum()
    }

    /// Number of elements of `W_A`.
    pub fn order(&self) -> u128 {
        self.blocks()
            .iter()
            .map(|(lo, hi)| (1..=(hi - lo + 1) as u128).product::<u128>())
            .product()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Bruhat order via the rank-matrix criterion: `x <= y` iff for every
/// prefix `1..=i` and threshold `k`,
/// `#{j <= i : x(j) >= k} <= #{j <= i : y(j) >= k}`.
pub fn bruhat_leq(x: &Permutation, y: &Permutation) -> bool {
    let n = x.rank();
    assert_eq!(n, y.rank(), "rank mismatch");
    if x.length() > y.length() {
        return false;
    }
    // diff[k] = #{j <= i : y(j) >= k} - #{j <= i : x(j) >= k}
    let mut diff = vec![0i64; n + 2];
    for i in 0..n {
        let (a, b) = (x.images[i] as usize, y.images[i] as usize);
        for d in diff.iter_mut().take(b + 1).skip(1) {
            *d += 1;
        }
        for d in diff.iter_mut().take(a + 1).skip(1) {
            *d -= 1;
        }
        if diff[1..=n].iter().any(|&d| d < 0) {
            return false;
        }
    }
    true
}

/// The unique shortest element of `x W_A`, found by stripping right
/// descents that lie in `A`.
pub fn min_coset_rep(x: &Permutation, a: &ParabolicSubset) -> Permutation {
    let mut u = x.clone();
    loop {
        match a.indices().find(|&i| u.has_right_descent(i)) {
            Some(i) => u.images.swap(i - 1, i),
            None => return u,
        }
    }
}

pub fn is_min_coset_rep(x: &Permutation, a: &ParabolicSubset) -> bool {
    a.indices().all(|i| !x.has_right_descent(i))
}

/// `w_A`: each block of positions reversed.
pub fn longest_element(a: &ParabolicSubset) -> Permutation {
    let mut p = Permutation::identity(a.rank());
    for (lo, hi) in a.blocks() {
        p.images[lo - 1..hi].reverse();
    }
    p
}

/// How left multiplication by `s` moves the coset `y W_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    U,
    D,
    S,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::U => "U",
            Step::D => "D",
            Step::S => "S",
        })
    }
}

pub fn classify_step(s: usize, y: &Permutation, a: &ParabolicSubset) -> Step {
    let u = min_coset_rep(y, a);
    let u2 = min_coset_rep(&y.left_mul_gen(s), a);
    if u == u2 {
        return Step::S;
    }
    if u2.length() > u.length() {
        Step::U
    } else {
        Step::D
    }
}

/// Elements of `W_A`, by breadth-first search from the identity.
pub fn parabolic_elements(a: &ParabolicSubset) -> Vec<Permutation> {
    let start = Permutation::identity(a.rank());
    let mut seen: HashSet<Permutation> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(p) = queue.pop_front() {
        for i in a.indices() {
            let q = p.right_mul_gen(i);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
        out.push(p);
    }
    out.sort_by(|x, y| x.length().cmp(&y.length()).then_with(|| x.cmp(y)));
    out
}

/// All of `S_n`, sorted by length and then lexicographically.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    parabolic_elements(&ParabolicSubset::full(n))
}

/// `W^A`, sorted by length and then lexicographically.
pub fn min_coset_reps(a: &ParabolicSubset) -> Vec<Permutation> {
    all_permutations(a.rank())
        .into_iter()
        .filter(|x| is_min_coset_rep(x, a))
        .collect()
}
