//! Exact rank of integer matrices over `Q` and over `F_p`.

use num_bigint::BigInt;

use crate::ring::{Coefficient, Fp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    Prime(u64),
}

pub fn matrix_rank(rows: &[Vec<BigInt>], field: Field) -> usize {
    match field {
        Field::Rationals => rank_over_q(rows),
        Field::Prime(p) => rank_mod_p(rows, p),
    }
}

/// Fraction-free (Bareiss) elimination; every intermediate entry stays an
/// integer and divisions are exact.
pub fn rank_over_q(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    for r in &mut m {
        r.resize(ncols, BigInt::from(0));
    }
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = Coefficient::checked_div(&num, &prev).expect("Bareiss division is exact");
            }
            m[r][col] = BigInt::from(0);
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Gaussian elimination over `F_p`.
pub fn rank_mod_p(rows: &[Vec<BigInt>], p: u64) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<Fp>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<Fp> = r.iter().map(|c| Fp::from_bigint(c, p)).collect();
            row.resize(ncols, Fp::new(0, p));
            row
        })
        .collect();
    let nrows = m.len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inverse().expect("nonzero pivot");
        for r in rank + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&inv);
            for c in col..ncols {
                let delta = factor.mul(&m[rank][c]);
                m[r][c] = m[r][c].sub(&delta);
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn published_row() {
        let m = mat(&[&[-2, -2, 0, -2, -2, 0, -2, -2, -2, 2, 0, 0]]);
        assert_eq!(matrix_rank(&m, Field::Rationals), 1);
        assert_eq!(matrix_rank(&m, Field::Prime(2)), 0);
        assert_eq!(matrix_rank(&m, Field::Prime(3)), 1);
    }

    #[test]
    fn small_cases() {
        assert_eq!(rank_over_q(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank_over_q(&[]), 0);
        assert_eq!(rank_over_q(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_over_q(&mat(&[&[1, 2], &[3, 4]])), 2);
        // det = -2: full rank over Q, rank 1 mod 2
        assert_eq!(rank_mod_p(&mat(&[&[1, 2], &[3, 4]]), 2), 1);
        assert_eq!(rank_over_q(&mat(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]])), 2);
    }

    /// Rank over Q through explicit rational elimination, as an oracle for
    /// the fraction-free path.
    fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
        use num_rational::BigRational;
        use num_traits::Zero;
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let (nr, nc) = (m.len(), m.first().map_or(0, Vec::len));
        let mut rank = 0;
        for col in 0..nc {
            let Some(p) = (rank..nr).find(|&r| !Zero::is_zero(&m[r][col])) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..nr {
                if r != rank && !Zero::is_zero(&m[r][col]) {
                    let f = &m[r][col] / &m[rank][col];
                    for c in 0..nc {
                        let d = &f * &m[rank][c];
                        m[r][c] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_rational_elimination(
            entries in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 0..5)
        ) {
            let m: Vec<Vec<BigInt>> = entries.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            prop_assert_eq!(rank_over_q(&m), rational_rank(&m));
            prop_assert!(rank_mod_p(&m, 2) <= rank_over_q(&m));
        }
    }
}
