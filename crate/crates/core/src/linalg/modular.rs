//! Reduced row echelon form through the prime field `𝔽_p`, `p = 2^61 − 1`.
//!
//! Rows are reduced mod `p`, eliminated there, and every entry of the
//! result is lifted back to ℚ by rational reconstruction. The lift is only
//! returned after an exact check that every input row is the combination
//! `Σ_k row[pivot_k] · R_k` of the lifted rows. Together with
//! `rank_p ≤ rank_ℚ` this proves the lift is the RREF over ℚ.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use super::matrix::{linear_combination, Vector};
use crate::rational::Rational;

const P: u64 = (1 << 61) - 1;

/// Reconstructed numerators and denominators are at most this in absolute
/// value, which keeps `2·B² < p` and the lift unique.
const BOUND: i128 = 1 << 30;

#[inline]
fn fold(x: u128) -> u64 {
    let r = (x & P as u128) + (x >> 61);
    let r = ((r & P as u128) + (r >> 61)) as u64;
    if r >= P {
        r - P
    } else {
        r
    }
}

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    fold(a as u128 * b as u128)
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_i64(v: i64) -> u64 {
    v.rem_euclid(P as i64) as u64
}

fn reduce_big(v: &BigInt) -> u64 {
    let r = v % BigInt::from(P);
    let r = if r.is_negative() { r + BigInt::from(P) } else { r };
    r.to_u64().expect("residue below p")
}

/// Image of `r` in `𝔽_p`, or `None` if `p` divides the denominator.
fn reduce(r: &Rational) -> Option<u64> {
    let (n, d) = match r.as_small() {
        Some((n, d)) => (reduce_i64(n), reduce_i64(d)),
        None => (reduce_big(&r.numer()), reduce_big(&r.denom())),
    };
    if d == 0 {
        None
    } else if d == 1 {
        Some(n)
    } else {
        Some(mul(n, inv(d)))
    }
}

/// The `a/b ≡ v (mod p)` with `|a|, b ≤ BOUND`, if there is one.
fn reconstruct(v: u64) -> Option<Rational> {
    if v == 0 {
        return Some(Rational::zero());
    }
    let (mut r0, mut r1) = (P as i128, v as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 > BOUND {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() > BOUND {
        return None;
    }
    let (a, b) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    let candidate = Rational::new(a as i64, b as i64);
    // a common factor means the true value was not in range
    match candidate.as_small() {
        Some((_, den)) if den as i128 == b => Some(candidate),
        _ => None,
    }
}

/// Canonical RREF rows and pivot columns, or `None` when the prime or the
/// reconstruction bound does not suit this matrix.
pub(crate) fn rref_rows(rows: &[Vector], cols: usize) -> Option<(Vec<Vector>, Vec<usize>)> {
    let mut m: Vec<Vec<u64>> = rows
        .par_iter()
        .map(|r| r.iter().map(reduce).collect::<Option<Vec<u64>>>())
        .collect::<Option<Vec<_>>>()?;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let Some(found) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, found);
        let mut pivot_row = std::mem::take(&mut m[rank]);
        let s = inv(pivot_row[col]);
        for v in pivot_row[col..].iter_mut() {
            *v = mul(*v, s);
        }
        let support: Vec<usize> = (col + 1..cols).filter(|&j| pivot_row[j] != 0).collect();
        let eliminate = |row: &mut Vec<u64>| {
            if row.is_empty() || row[col] == 0 {
                return;
            }
            let f = row[col];
            row[col] = 0;
            for &j in &support {
                row[j] = sub(row[j], mul(f, pivot_row[j]));
            }
        };
        if m.len() * cols >= 1 << 14 {
            m.par_iter_mut().with_min_len(8).for_each(eliminate);
        } else {
            m.iter_mut().for_each(eliminate);
        }
        m[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    let lifted: Vec<Vector> = m
        .par_iter()
        .map(|row| row.iter().map(|&v| reconstruct(v)).collect::<Option<Vector>>())
        .collect::<Option<Vec<_>>>()?;
    let certified = rows.par_iter().all(|row| {
        let comb = linear_combination(
            pivots
                .iter()
                .zip(&lifted)
                .map(|(&pc, r)| (row[pc].clone(), r.as_slice())),
            cols,
        );
        comb == *row
    });
    certified.then_some((lifted, pivots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::subspace::rref_rows_fraction_free;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn field_arithmetic() {
        assert_eq!(mul(P - 1, P - 1), 1);
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(sub(3, 5), P - 2);
        assert_eq!(reduce(&q(-1, 1)), Some(P - 1));
        assert_eq!(reduce(&q(1, 2)), Some(inv(2)));
    }

    #[test]
    fn reconstruction_round_trip() {
        for (n, d) in [(0, 1), (1, 1), (-7, 3), (123456, 789), (-(1 << 29), (1 << 30) - 1)] {
            let r = q(n, d);
            assert_eq!(reconstruct(reduce(&r).unwrap()), Some(r));
        }
        let big = Rational::from_int(1 << 40);
        assert_ne!(reconstruct(reduce(&big).unwrap()), Some(big));
    }

    #[test]
    fn large_entries_are_refused_and_not_misreported() {
        // RREF entry 2^40 cannot be reconstructed within the bound
        let rows = vec![vec![q(1, 1), Rational::from_int(1 << 40)]];
        assert_eq!(rref_rows(&rows, 2), None);
        let rows = vec![vec![q(3, 1), Rational::from_int(1 << 40) * q(3, 1)], vec![q(1, 1), q(0, 1)]];
        assert_eq!(rref_rows(&rows, 2).unwrap().1, vec![0, 1]);
    }

    #[test]
    fn denominator_divisible_by_p_is_refused() {
        let huge = Rational::from_bigint(BigInt::from(P)).recip();
        assert_eq!(rref_rows(&[vec![huge]], 1), None);
    }

    fn small_matrix() -> impl Strategy<Value = (Vec<Vector>, usize)> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            (
                prop::collection::vec(prop::collection::vec((-4i64..5, 1i64..4), c), r)
                    .prop_map(|rows| {
                        rows.into_iter()
                            .map(|row| row.into_iter().map(|(n, d)| q(n, d)).collect())
                            .collect()
                    }),
                Just(c),
            )
        })
    }

    proptest! {
        #[test]
        fn agrees_with_fraction_free((rows, cols) in small_matrix()) {
            let expected = rref_rows_fraction_free(rows.clone(), cols);
            if let Some(got) = rref_rows(&rows, cols) {
                prop_assert_eq!(got, expected);
            }
        }

        #[test]
        fn low_rank_products_agree((rows, cols) in small_matrix()) {
            // stack the rows with sums of pairs to force dependencies
            let mut all = rows.clone();
            for w in rows.windows(2) {
                all.push(w[0].iter().zip(&w[1]).map(|(a, b)| a + b).collect());
            }
            let expected = rref_rows_fraction_free(all.clone(), cols);
            let got = rref_rows(&all, cols).expect("small entries reconstruct");
            prop_assert_eq!(got, expected);
        }
    }
}
