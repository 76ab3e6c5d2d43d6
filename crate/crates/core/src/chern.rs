//! Chern characters of coherent sheaves on P³ and their Euler characteristics.
//!
//! A character is stored as its coefficients against the powers of the
//! hyperplane class: `rank + ch1·H + ch2·H² + ch3·H³`. All arithmetic is exact.
//! The Euler characteristic is read off with the Todd class of P³,
//! `χ = ch3 + 2·ch2 + (11/6)·ch1 + rank`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChernError {
    #[error("Euler characteristic {0} is not an integer")]
    NonIntegerChi(String),
    #[error("Chern class c{degree} = {value} is not an integer")]
    NonIntegralClass { degree: u8, value: String },
    #[error("operation supports rank 2 only, got rank {0}")]
    RankUnsupported(i64),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact Chern character of a sheaf on P³.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernCharacter {
    pub rank: i64,
    pub ch1: i64,
    #[serde(with = "crate::ratstr")]
    pub ch2: BigRational,
    #[serde(with = "crate::ratstr")]
    pub ch3: BigRational,
}

/// Integral Chern classes `(rank, c1, c2, c3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernClasses {
    pub rank: i64,
    pub c1: i64,
    pub c2: i64,
    pub c3: i64,
}

impl ChernClasses {
    pub fn new(rank: i64, c1: i64, c2: i64, c3: i64) -> Self {
        Self { rank, c1, c2, c3 }
    }
}

impl fmt::Display for ChernClasses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, c1 {}, c2 {}, c3 {})", self.rank, self.c1, self.c2, self.c3)
    }
}

impl ChernCharacter {
    pub fn new(rank: i64, ch1: i64, ch2: BigRational, ch3: BigRational) -> Self {
        Self { rank, ch1, ch2, ch3 }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, BigRational::zero(), BigRational::zero())
    }

    /// The structure sheaf `O`.
    pub fn trivial() -> Self {
        Self::line_bundle(0)
    }

    /// `ch(O(d)) = exp(d·H)` truncated at degree three.
    pub fn line_bundle(d: i64) -> Self {
        Self::new(1, d, frac(d * d, 2), frac(d * d * d, 6))
    }

    /// Character with the given Chern classes (Newton's identities).
    pub fn from_classes(c: ChernClasses) -> Self {
        let c1 = rat(c.c1);
        let c2 = rat(c.c2);
        let c3 = rat(c.c3);
        let ch2 = (&c1 * &c1 - rat(2) * &c2) / rat(2);
        let ch3 = (&c1 * &c1 * &c1 - rat(3) * &c1 * &c2 + rat(3) * &c3) / rat(6);
        Self::new(c.rank, c.c1, ch2, ch3)
    }

    /// Inverse of [`ChernCharacter::from_classes`]; fails when a class is not integral.
    pub fn to_classes(&self) -> Result<ChernClasses, ChernError> {
        let c1 = rat(self.ch1);
        let c2 = (&c1 * &c1 - rat(2) * &self.ch2) / rat(2);
        let c3 = (rat(6) * &self.ch3 - &c1 * &c1 * &c1 + rat(3) * &c1 * &c2) / rat(3);
        let c2 = integral(&c2).ok_or_else(|| ChernError::NonIntegralClass {
            degree: 2,
            value: c2.to_string(),
        })?;
        let c3 = integral(&c3).ok_or_else(|| ChernError::NonIntegralClass {
            degree: 3,
            value: c3.to_string(),
        })?;
        Ok(ChernClasses::new(self.rank, self.ch1, c2, c3))
    }

    /// Riemann–Roch on P³.
    pub fn euler_characteristic(&self) -> Result<i64, ChernError> {
        let chi = self.chi_rational();
        integral(&chi).ok_or_else(|| ChernError::NonIntegerChi(chi.to_string()))
    }

    /// The Riemann–Roch value before the integrality check.
    pub fn chi_rational(&self) -> BigRational {
        &self.ch3 + rat(2) * &self.ch2 + frac(11, 6) * rat(self.ch1) + rat(self.rank)
    }

    /// `self ⊗ O(t)`.
    pub fn twist(&self, t: i64) -> Self {
        if t == 0 {
            return self.clone();
        }
        self * &Self::line_bundle(t)
    }

    /// Character of `S²E` for a rank-2 `E` with Chern roots `x₁, x₂`: roots `2x₁, x₁+x₂, 2x₂`.
    pub fn sym2_rank2(&self) -> Result<Self, ChernError> {
        if self.rank != 2 {
            return Err(ChernError::RankUnsupported(self.rank));
        }
        // power sums of the roots: p_k = k!·ch_k
        let p1 = rat(self.ch1);
        let p2 = rat(2) * &self.ch2;
        let p3 = rat(6) * &self.ch3;
        let ch1 = 3 * self.ch1;
        let ch2 = (rat(4) * &p2 + &p1 * &p1) / rat(2);
        let ch3 = (rat(8) * &p3 + &p1 * &p1 * &p1) / rat(6);
        Ok(Self::new(3, ch1, ch2, ch3))
    }

    /// Character of `∧²E = det E` for rank-2 `E`.
    pub fn wedge2_rank2(&self) -> Result<Self, ChernError> {
        if self.rank != 2 {
            return Err(ChernError::RankUnsupported(self.rank));
        }
        Ok(Self::line_bundle(self.ch1))
    }

    /// `O_S(p, q)` on a smooth quadric `S ≅ P¹×P¹`, pushed forward to P³.
    ///
    /// Determined by `χ(O_S(p+t, q+t)) = (p+t+1)(q+t+1)` and `[S] = 2H`.
    pub fn quadric(p: i64, q: i64) -> Self {
        let ch2 = rat(p + q - 2);
        let ch3 = rat((p + 1) * (q + 1)) - rat(2) * &ch2 - frac(11, 3);
        Self::new(0, 2, ch2, ch3)
    }

    /// Structure sheaf of a reduced curve of the given degree with `χ(O_C) = chi`.
    pub fn curve(degree: i64, chi: i64) -> Self {
        Self::new(0, 0, rat(degree), rat(chi - 2 * degree))
    }

    /// Disjoint union of `k` lines.
    pub fn lines(k: i64) -> Self {
        Self::curve(k, k)
    }

    /// Disjoint union of `k` plane conics.
    pub fn conics(k: i64) -> Self {
        Self::curve(2 * k, k)
    }

    /// `k` reduced points.
    pub fn points(k: i64) -> Self {
        Self::new(0, 0, BigRational::zero(), rat(k))
    }

    /// Ideal sheaf of a subscheme with structure-sheaf character `sub`.
    pub fn ideal_of(sub: &Self) -> Self {
        &Self::trivial() - sub
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(
            self.rank * k,
            self.ch1 * k,
            &self.ch2 * rat(k),
            &self.ch3 * rat(k),
        )
    }
}

fn integral(x: &BigRational) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}

impl Add for &ChernCharacter {
    type Output = ChernCharacter;
    fn add(self, rhs: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(
            self.rank + rhs.rank,
            self.ch1 + rhs.ch1,
            &self.ch2 + &rhs.ch2,
            &self.ch3 + &rhs.ch3,
        )
    }
}

impl Add for ChernCharacter {
    type Output = ChernCharacter;
    fn add(self, rhs: ChernCharacter) -> ChernCharacter {
        &self + &rhs
    }
}

impl Neg for &ChernCharacter {
    type Output = ChernCharacter;
    fn neg(self) -> ChernCharacter {
        self.scale(-1)
    }
}

impl Sub for &ChernCharacter {
    type Output = ChernCharacter;
    fn sub(self, rhs: &ChernCharacter) -> ChernCharacter {
        self + &(-rhs)
    }
}

impl Sub for ChernCharacter {
    type Output = ChernCharacter;
    fn sub(self, rhs: ChernCharacter) -> ChernCharacter {
        &self - &rhs
    }
}

/// Tensor product: the product of characters truncated at degree three.
impl Mul for &ChernCharacter {
    type Output = ChernCharacter;
    fn mul(self, rhs: &ChernCharacter) -> ChernCharacter {
        let (r, a1, a2, a3) = (rat(self.rank), rat(self.ch1), &self.ch2, &self.ch3);
        let (s, b1, b2, b3) = (rat(rhs.rank), rat(rhs.ch1), &rhs.ch2, &rhs.ch3);
        let ch2 = &r * b2 + &a1 * &b1 + &s * a2;
        let ch3 = &r * b3 + &a1 * b2 + a2 * &b1 + &s * a3;
        ChernCharacter::new(
            self.rank * rhs.rank,
            self.rank * rhs.ch1 + rhs.rank * self.ch1,
            ch2,
            ch3,
        )
    }
}

impl Mul for ChernCharacter {
    type Output = ChernCharacter;
    fn mul(self, rhs: ChernCharacter) -> ChernCharacter {
        &self * &rhs
    }
}

impl std::iter::Sum for ChernCharacter {
    fn sum<I: Iterator<Item = ChernCharacter>>(iter: I) -> Self {
        iter.fold(ChernCharacter::zero(), |acc, c| &acc + &c)
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ch({}, {}, {}, {})", self.rank, self.ch1, self.ch2, self.ch3)
    }
}

/// `binomial(n, k)` for `n ≥ 0`; zero when `k > n` or `k < 0`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k)).to_i64().expect("binomial overflows i64")
}

/// The Hilbert polynomial `(d+1)(d+2)(d+3)/6 = χ(O(d))`, valid for every integer `d`.
pub fn chi_line(d: i64) -> i64 {
    (d + 1) * (d + 2) * (d + 3) / 6
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(rank: i64, c1: i64, c2: i64, c3: i64) -> ChernCharacter {
        ChernCharacter::from_classes(ChernClasses::new(rank, c1, c2, c3))
    }

    #[test]
    fn line_bundle_expansions() {
        assert_eq!(ChernCharacter::line_bundle(0), ChernCharacter::new(1, 0, rat(0), rat(0)));
        assert_eq!(
            ChernCharacter::line_bundle(-2),
            ChernCharacter::new(1, -2, rat(2), frac(-4, 3))
        );
        assert_eq!(
            ChernCharacter::line_bundle(2),
            ChernCharacter::new(1, 2, rat(2), frac(4, 3))
        );
    }

    #[test]
    fn chi_of_o3_counts_cubic_monomials() {
        // brute force: monomials of degree 3 in four variables
        let mut count = 0;
        for a in 0..=3 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    let _d = 3 - a - b - c;
                    count += 1;
                }
            }
        }
        assert_eq!(count, 20);
        assert_eq!(ChernCharacter::line_bundle(3).euler_characteristic().unwrap(), count);
    }

    #[test]
    fn chi_of_middle_term_twist() {
        // E1 ⊕ E2 with c2 = 1 each, twisted by 2
        let e = &ch(2, 0, 1, 0) + &ch(2, 0, 1, 0);
        assert_eq!(e.to_classes().unwrap(), ChernClasses::new(4, 0, 2, 0));
        assert_eq!(e.twist(2).euler_characteristic().unwrap(), 32);
    }

    #[test]
    fn tensor_of_two_instantons() {
        let p = &ch(2, 0, 1, 0) * &ch(2, 0, 1, 0);
        assert_eq!(p.rank, 4);
        assert_eq!(p.ch2, rat(-4));
        assert_eq!(p.euler_characteristic().unwrap(), -4);
    }

    #[test]
    fn twist_rank_two() {
        let e = ch(2, 0, 5, 0);
        for t in -4..=4 {
            let c = e.twist(t).to_classes().unwrap();
            assert_eq!(c.c2, 5 + t * t);
        }
        let odd = ch(2, -1, 6, 0).twist(1).to_classes().unwrap();
        assert_eq!((odd.c1, odd.c2), (1, 6));
        assert_eq!(ChernCharacter::trivial().twist(0), ChernCharacter::trivial());
    }

    #[test]
    fn product_with_line_bundle_is_twist() {
        let e = ch(2, -1, 4, 0);
        assert_eq!(&e * &ChernCharacter::line_bundle(3), e.twist(3));
    }

    #[test]
    fn wedge_and_sym() {
        assert_eq!(ch(2, 0, 3, 0).wedge2_rank2().unwrap(), ChernCharacter::trivial());
        assert_eq!(ch(2, -1, 2, 0).wedge2_rank2().unwrap(), ChernCharacter::line_bundle(-1));
        for m in 1..6 {
            let s = ch(2, 0, m, 0).sym2_rank2().unwrap();
            assert_eq!(s.rank, 3);
            assert_eq!(s.euler_characteristic().unwrap(), 3 - 8 * m);
        }
        assert_eq!(
            ChernCharacter::line_bundle(1).sym2_rank2(),
            Err(ChernError::RankUnsupported(1))
        );
    }

    #[test]
    fn malformed_character_has_no_integral_chi() {
        let bad = ChernCharacter::new(1, 0, rat(0), frac(1, 2));
        assert!(matches!(bad.euler_characteristic(), Err(ChernError::NonIntegerChi(_))));
    }

    #[test]
    fn geometric_characters() {
        for t in -6..6 {
            assert_eq!(ChernCharacter::lines(3).twist(t).euler_characteristic().unwrap(), 3 * (t + 1));
            assert_eq!(ChernCharacter::conics(2).twist(t).euler_characteristic().unwrap(), 2 * (2 * t + 1));
            assert_eq!(ChernCharacter::points(5).twist(t).euler_characteristic().unwrap(), 5);
            assert_eq!(
                ChernCharacter::quadric(-2, 1).twist(t).euler_characteristic().unwrap(),
                (t - 1) * (t + 2)
            );
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        for d in -10..=10 {
            let expected = if d >= 0 { binomial(d + 3, 3) } else if d <= -4 { -binomial(-d - 1, 3) } else { 0 };
            assert_eq!(chi_line(d), expected);
        }
    }
}
