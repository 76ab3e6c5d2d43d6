//! Matrix rank over `F_p` and over `Q`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The Mersenne prime `2⁶¹ − 1`.
pub const PRIME: u64 = (1 << 61) - 1;

/// Coefficient ring for building evaluation matrices.
pub trait Coeff: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i128(v: i128) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

/// Residue mod [`PRIME`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(pub u64);

impl Coeff for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i128(v: i128) -> Self {
        Fp(v.rem_euclid(PRIME as i128) as u64)
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % PRIME as u128) as u64)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i128(v: i128) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = Fp(r).mul(&Fp(b)).0;
        }
        b = Fp(b).mul(&Fp(b)).0;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

/// Rank over `F_p`; a lower bound for the rank over `Q` of an integer matrix.
pub fn rank_mod_p(mut rows: Vec<Vec<Fp>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col].0 != 0) else { continue };
        rows.swap(rank, piv);
        let inv = Fp(inv_mod(rows[rank][col].0));
        for x in rows[rank][col..].iter_mut() {
            *x = x.mul(&inv);
        }
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let f = row[col];
            if f.0 == 0 {
                continue;
            }
            let neg = Fp(PRIME - f.0);
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = x.add(&p.mul(&neg));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Exact rank over `Q` by fraction-free (Bareiss) elimination.
pub fn rank_exact(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = <BigInt as One>::one();
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !Zero::is_zero(&rows[r][col])) else { continue };
        rows.swap(rank, piv);
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let p = &top[rank];
        for row in bottom.iter_mut() {
            let f = row[col].clone();
            for j in col..ncols {
                let v = &row[j] * &p[col] - &f * &p[j];
                row[j] = v / &prev;
            }
        }
        prev = top[rank][col].clone();
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_fp(m: &[Vec<i64>]) -> Vec<Vec<Fp>> {
        m.iter().map(|r| r.iter().map(|&x| Fp::from_i128(x as i128)).collect()).collect()
    }

    fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(rank_mod_p(to_fp(&m)), 2);
        assert_eq!(rank_exact(to_big(&m)), 2);
        assert_eq!(rank_exact(vec![]), 0);
        assert_eq!(rank_exact(to_big(&[vec![0, 0], vec![0, 0]])), 0);
    }

    proptest! {
        #[test]
        fn modular_and_exact_agree_on_small_entries(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..6),
            dup in 0usize..5,
        ) {
            let mut m = rows.clone();
            // a dependent row keeps the rank below full
            let extra: Vec<i64> = m[dup % m.len()].iter().map(|x| 2 * x).collect();
            m.push(extra);
            let exact = rank_exact(to_big(&m));
            prop_assert_eq!(rank_mod_p(to_fp(&m)), exact);
            prop_assert!(exact <= rows.len());
        }
    }
}
