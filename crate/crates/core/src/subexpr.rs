//! Decorated subexpressions of a word and the enumeration engine over them.
//!
//! For a word `(s_{i_1}, ..., s_{i_m})` and bits `e_1 ... e_m`, the suffix
//! products are `y_0 = id`, `y_j = s_{i_{m+1-j}}^{e_{m+1-j}} y_{j-1}`. The
//! decoration of position `j` records how `s_{i_j}` moves the coset
//! `y_{m-j} W_A`, and the defect counts `U0, S1` positively and `D0, S0`
//! negatively.
//!
//! The engine walks positions from `m` down to `1` keeping `y` (and its
//! inverse) up to date, so each step costs O(1): the coset of `y` is
//! determined by which block of positions each value sits in, and left
//! multiplication by `s` only exchanges the values `s` and `s + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{classify_step, min_coset_rep, ParabolicSubset, Permutation, Step, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubexprError {
    #[error("length mismatch: word has {word} letters, got {got}")]
    LengthMismatch { word: usize, got: usize },
    #[error("rank mismatch between word (S_{word}) and parabolic subset (S_{parabolic})")]
    RankMismatch { word: usize, parabolic: usize },
    #[error("bits must be 0 or 1, got {0}")]
    BadBit(u8),
}

/// Which values a position may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Allowed {
    Zero,
    One,
    Free,
}

/// Per-position restriction of the bits visited by the enumerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnumConstraint {
    allowed: Vec<Allowed>,
}

impl EnumConstraint {
    pub fn new(allowed: Vec<Allowed>) -> Self {
        EnumConstraint { allowed }
    }

    pub fn free(len: usize) -> Self {
        EnumConstraint {
            allowed: vec![Allowed::Free; len],
        }
    }

    /// Only the bits `bits` (one subexpression).
    pub fn fixed(bits: &[u8]) -> Self {
        EnumConstraint {
            allowed: bits
                .iter()
                .map(|&b| if b == 0 { Allowed::Zero } else { Allowed::One })
                .collect(),
        }
    }

    /// Force `e_i = 1` wherever the letter `t_i` lies in `B`.
    pub fn forced_in(word: &Word, b: &ParabolicSubset) -> Self {
        EnumConstraint {
            allowed: word
                .letters()
                .iter()
                .map(|&s| {
                    if b.contains(s) {
                        Allowed::One
                    } else {
                        Allowed::Free
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn allowed(&self) -> &[Allowed] {
        &self.allowed
    }

    /// 0-based indices of free positions.
    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.allowed.len())
            .filter(|&i| self.allowed[i] == Allowed::Free)
            .collect()
    }

    /// Number of bit sequences satisfying the constraint.
    pub fn count(&self) -> u128 {
        1u128 << self.free_positions().len()
    }

    /// Split into `2^k` constraints by fixing the `k` highest free positions
    /// (the ones the depth-first walk decides first). The parts are listed
    /// in visiting order, so running them in sequence reproduces the order of
    /// the undivided run.
    pub fn partition(&self, k: usize) -> Vec<EnumConstraint> {
        let free = self.free_positions();
        let k = k.min(free.len());
        let top: Vec<usize> = free.iter().rev().take(k).copied().collect();
        (0u64..1 << k)
            .map(|code| {
                let mut allowed = self.allowed.clone();
                // The first decided position is the most significant bit of
                // `code`, giving 0-before-1 order at every level.
                for (depth, &pos) in top.iter().enumerate() {
                    let bit = code >> (k - 1 - depth) & 1;
                    allowed[pos] = if bit == 1 {
                        Allowed::One
                    } else {
                        Allowed::Zero
                    };
                }
                EnumConstraint { allowed }
            })
            .collect()
    }
}

/// One subexpression together with its decorations, endpoint coset and
/// parabolic defect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedSubexpression {
    pub bits: Vec<u8>,
    pub decorations: Vec<Step>,
    /// Minimal representative of `y_m W_A`.
    pub endpoint: Permutation,
    pub defect: i64,
}

impl fmt::Display for DecoratedSubexpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .decorations
            .iter()
            .zip(&self.bits)
            .map(|(d, e)| format!("{d}{e}"))
            .collect();
        write!(
            f,
            "({}) -> {} pdf={}",
            parts.join(","),
            self.endpoint,
            self.defect
        )
    }
}

pub fn defect_contribution(step: Step, bit: u8) -> i64 {
    match (step, bit) {
        (Step::U, 0) | (Step::S, 1) => 1,
        (Step::D, 0) | (Step::S, 0) => -1,
        _ => 0,
    }
}

/// Decorate one subexpression directly from the definitions.
pub fn decorate(
    word: &Word,
    bits: &[u8],
    a: &ParabolicSubset,
) -> Result<DecoratedSubexpression, SubexprError> {
    check_ranks(word, a)?;
    if bits.len() != word.len() {
        return Err(SubexprError::LengthMismatch {
            word: word.len(),
            got: bits.len(),
        });
    }
    if let Some(&b) = bits.iter().find(|&&b| b > 1) {
        return Err(SubexprError::BadBit(b));
    }
    let m = word.len();
    let mut decorations = vec![Step::S; m];
    let mut y = Permutation::identity(word.rank());
    let mut defect = 0;
    for j in (0..m).rev() {
        let s = word.letters()[j];
        let d = classify_step(s, &y, a);
        decorations[j] = d;
        defect += defect_contribution(d, bits[j]);
        if bits[j] == 1 {
            y = y.left_mul_gen(s);
        }
    }
    Ok(DecoratedSubexpression {
        bits: bits.to_vec(),
        decorations,
        endpoint: min_coset_rep(&y, a),
        defect,
    })
}

fn check_ranks(word: &Word, a: &ParabolicSubset) -> Result<(), SubexprError> {
    if word.rank() != a.rank() {
        return Err(SubexprError::RankMismatch {
            word: word.rank(),
            parabolic: a.rank(),
        });
    }
    Ok(())
}

/// What the engine hands to a visitor at each leaf. Slices are indexed by
/// word position (0-based).
pub struct Leaf<'a> {
    pub bits: &'a [u8],
    pub decorations: &'a [Step],
    pub defect: i64,
    /// `y_m` in one-line notation (not reduced modulo `W_A`).
    pub product: &'a [u32],
    blocks: &'a CosetBlocks,
}

impl Leaf<'_> {
    /// Minimal coset representative of the endpoint, in one-line notation.
    pub fn endpoint_images(&self) -> Vec<u32> {
        self.blocks.canonical(self.product)
    }

    pub fn endpoint(&self) -> Permutation {
        Permutation::from_one_line(self.endpoint_images()).expect("valid permutation")
    }

    pub fn to_decorated(&self) -> DecoratedSubexpression {
        DecoratedSubexpression {
            bits: self.bits.to_vec(),
            decorations: self.decorations.to_vec(),
            endpoint: self.endpoint(),
            defect: self.defect,
        }
    }
}

pub trait Visitor {
    fn visit(&mut self, leaf: &Leaf<'_>);
}

impl<F: FnMut(&Leaf<'_>)> Visitor for F {
    fn visit(&mut self, leaf: &Leaf<'_>) {
        self(leaf)
    }
}

/// Block structure of `W_A` on positions.
#[derive(Clone, Debug)]
struct CosetBlocks {
    /// block id of each 0-based position
    block_of: Vec<u32>,
    /// (start, end) 0-based half-open ranges of non-trivial blocks
    ranges: Vec<(usize, usize)>,
}

impl CosetBlocks {
    fn new(a: &ParabolicSubset) -> Self {
        let ids = a.block_ids();
        CosetBlocks {
            block_of: ids[1..].iter().map(|&b| b as u32).collect(),
            ranges: a
                .blocks()
                .into_iter()
                .filter(|(lo, hi)| hi > lo)
                .map(|(lo, hi)| (lo - 1, hi))
                .collect(),
        }
    }

    fn canonical(&self, product: &[u32]) -> Vec<u32> {
        let mut out = product.to_vec();
        for &(lo, hi) in &self.ranges {
            out[lo..hi].sort_unstable();
        }
        out
    }
}

/// Depth-first enumerator over the subexpressions allowed by a constraint.
pub struct Enumerator<'a> {
    word: &'a Word,
    constraint: &'a EnumConstraint,
    blocks: CosetBlocks,
    // mutable walk state
    images: Vec<u32>,
    positions: Vec<u32>,
    bits: Vec<u8>,
    decorations: Vec<Step>,
}

impl<'a> Enumerator<'a> {
    pub fn new(
        word: &'a Word,
        a: &ParabolicSubset,
        constraint: &'a EnumConstraint,
    ) -> Result<Self, SubexprError> {
        check_ranks(word, a)?;
        if constraint.len() != word.len() {
            return Err(SubexprError::LengthMismatch {
                word: word.len(),
                got: constraint.len(),
            });
        }
        let n = word.rank();
        let m = word.len();
        Ok(Enumerator {
            word,
            constraint,
            blocks: CosetBlocks::new(a),
            images: (1..=n as u32).collect(),
            // positions[v] = 0-based position of value v (index 0 unused)
            positions: std::iter::once(0).chain(0..n as u32).collect(),
            bits: vec![0; m],
            decorations: vec![Step::S; m],
        })
    }

    /// Visit every allowed subexpression: positions are decided from the
    /// last letter to the first, and a free position tries 0 before 1.
    pub fn run<V: Visitor + ?Sized>(&mut self, visitor: &mut V) {
        let m = self.word.len();
        self.descend(m, 0, visitor);
    }

    fn descend<V: Visitor + ?Sized>(&mut self, remaining: usize, defect: i64, visitor: &mut V) {
        if remaining == 0 {
            let leaf = Leaf {
                bits: &self.bits,
                decorations: &self.decorations,
                defect,
                product: &self.images,
                blocks: &self.blocks,
            };
            visitor.visit(&leaf);
            return;
        }
        let j = remaining - 1;
        let s = self.word.letters()[j];
        let p_lo = self.positions[s] as usize;
        let p_hi = self.positions[s + 1] as usize;
        let step = if self.blocks.block_of[p_lo] == self.blocks.block_of[p_hi] {
            Step::S
        } else if p_lo < p_hi {
            Step::U
        } else {
            Step::D
        };
        self.decorations[j] = step;
        let allowed = self.constraint.allowed[j];
        if allowed != Allowed::One {
            self.bits[j] = 0;
            self.descend(j, defect + defect_contribution(step, 0), visitor);
        }
        if allowed != Allowed::Zero {
            self.bits[j] = 1;
            self.swap_values(s);
            self.descend(j, defect + defect_contribution(step, 1), visitor);
            self.swap_values(s);
            self.bits[j] = 0;
        }
    }

    /// `y <- s y`.
    #[inline]
    fn swap_values(&mut self, s: usize) {
        let p_lo = self.positions[s] as usize;
        let p_hi = self.positions[s + 1] as usize;
        self.images[p_lo] = s as u32 + 1;
        self.images[p_hi] = s as u32;
        self.positions[s] = p_hi as u32;
        self.positions[s + 1] = p_lo as u32;
    }
}

/// Visit every allowed subexpression of `word` in deterministic order.
pub fn enumerate<V: Visitor + ?Sized>(
    word: &Word,
    a: &ParabolicSubset,
    constraint: &EnumConstraint,
    visitor: &mut V,
) -> Result<(), SubexprError> {
    Enumerator::new(word, a, constraint)?.run(visitor);
    Ok(())
}

/// Counts of subexpressions by endpoint (minimal coset representative) and
/// defect.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    counts: HashMap<Vec<u32>, BTreeMap<i64, u64>>,
    visited: u64,
}

impl Tally {
    pub fn record(&mut self, endpoint: Vec<u32>, defect: i64) {
        *self
            .counts
            .entry(endpoint)
            .or_default()
            .entry(defect)
            .or_insert(0) += 1;
        self.visited += 1;
    }

    pub fn merge(&mut self, other: Tally) {
        for (e, hist) in other.counts {
            let slot = self.counts.entry(e).or_default();
            for (d, c) in hist {
                *slot.entry(d).or_insert(0) += c;
            }
        }
        self.visited += other.visited;
    }

    pub fn visited(&self) -> u64 {
        self.visited
    }

    /// Endpoints with their defect histograms, sorted by endpoint.
    pub fn by_endpoint(&self) -> BTreeMap<Permutation, BTreeMap<i64, u64>> {
        self.counts
            .iter()
            .map(|(e, h)| {
                (
                    Permutation::from_one_line(e.clone()).expect("valid permutation"),
                    h.clone(),
                )
            })
            .collect()
    }

    /// Histogram over all endpoints, or restricted to one endpoint.
    pub fn histogram(&self, target: Option<&Permutation>) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for (e, hist) in &self.counts {
            if target.is_some_and(|t| t.images() != e.as_slice()) {
                continue;
            }
            for (d, c) in hist {
                *out.entry(*d).or_insert(0) += c;
            }
        }
        out
    }
}

struct TallyVisitor(Tally);

impl Visitor for TallyVisitor {
    fn visit(&mut self, leaf: &Leaf<'_>) {
        self.0.record(leaf.endpoint_images(), leaf.defect);
    }
}

/// Tally all allowed subexpressions, splitting the walk into independent
/// parts run on `threads` workers. The result does not depend on `threads`.
pub fn tally(
    word: &Word,
    a: &ParabolicSubset,
    constraint: &EnumConstraint,
    threads: usize,
) -> Result<Tally, SubexprError> {
    // Validate once up front so workers cannot fail.
    Enumerator::new(word, a, constraint)?;
    let threads = threads.max(1);
    if threads == 1 {
        let mut v = TallyVisitor(Tally::default());
        enumerate(word, a, constraint, &mut v)?;
        return Ok(v.0);
    }
    // A few parts per worker keeps the load even.
    let mut k = 0;
    while (1usize << k) < threads * 8 {
        k += 1;
    }
    let parts = constraint.partition(k);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let tallies: Vec<Tally> = pool.install(|| {
        parts
            .par_iter()
            .map(|part| {
                let mut v = TallyVisitor(Tally::default());
                Enumerator::new(word, a, part)
                    .expect("validated")
                    .run(&mut v);
                v.0
            })
            .collect()
    });
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }
    Ok(total)
}

/// Defect histogram of the allowed subexpressions, optionally restricted to
/// those whose endpoint coset is `target`'s.
pub fn defect_histogram(
    word: &Word,
    a: &ParabolicSubset,
    constraint: &EnumConstraint,
    target: Option<&Permutation>,
    threads: usize,
) -> Result<BTreeMap<i64, u64>, SubexprError> {
    let t = tally(word, a, constraint, threads)?;
    let target = target.map(|x| min_coset_rep(x, a));
    Ok(t.histogram(target.as_ref()))
}
