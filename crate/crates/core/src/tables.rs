//! Closed-form cohomology of the sheaves the exact triples are built from.
//!
//! Everything here is viewed on P³: curves, points and the quadric surface
//! are pushed forward, which does not change cohomology.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chern::binomial;

/// Dimensions `h⁰, h¹, h², h³`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyVector(pub [u64; 4]);

impl CohomologyVector {
    pub const ZERO: Self = Self([0; 4]);

    pub fn new(h0: u64, h1: u64, h2: u64, h3: u64) -> Self {
        Self([h0, h1, h2, h3])
    }

    pub fn h(&self, i: usize) -> u64 {
        self.0[i]
    }

    /// Alternating sum `h⁰ − h¹ + h² − h³`.
    pub fn chi(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &h)| if i % 2 == 0 { h as i64 } else { -(h as i64) })
            .sum()
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self(self.0.map(|h| h * k))
    }
}

impl std::ops::Add for CohomologyVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Self(out)
    }
}

impl fmt::Display for CohomologyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

fn nonneg(x: i64) -> u64 {
    x.max(0) as u64
}

/// Cohomology of `O_{P³}(d)`.
pub fn h_p3_line(d: i64) -> CohomologyVector {
    let h0 = if d >= 0 { binomial(d + 3, 3) } else { 0 };
    let h3 = if d <= -4 { binomial(-d - 1, 3) } else { 0 };
    CohomologyVector::new(h0 as u64, 0, 0, h3 as u64)
}

/// `(h⁰, h¹)` of `O_{P¹}(d)`.
pub fn h_p1_line(d: i64) -> (u64, u64) {
    (nonneg(d + 1), nonneg(-d - 1))
}

/// Künneth formula for `O(p) ⊠ O(q)` on `P¹ × P¹`, pushed into P³.
pub fn h_quadric(p: i64, q: i64) -> CohomologyVector {
    let (a0, a1) = h_p1_line(p);
    let (b0, b1) = h_p1_line(q);
    CohomologyVector::new(a0 * b0, a0 * b1 + a1 * b0, a1 * b1, 0)
}

/// `O_l(d)` for a line `l`.
pub fn h_line_structure(d: i64) -> CohomologyVector {
    CohomologyVector::new(nonneg(d + 1), nonneg(-d - 1), 0, 0)
}

/// `O_C(d)` for a plane conic (degree 2, arithmetic genus 0), smooth or a pair of meeting lines.
pub fn h_conic_structure(d: i64) -> CohomologyVector {
    CohomologyVector::new(nonneg(2 * d + 1), nonneg(-2 * d - 1), 0, 0)
}

/// `k` reduced points; independent of twist.
pub fn h_points(k: u64) -> CohomologyVector {
    CohomologyVector::new(k, 0, 0, 0)
}

/// Disjoint union of `lines` lines and `conics` conics, twisted by `d`.
pub fn h_curve_union(lines: u64, conics: u64, d: i64) -> CohomologyVector {
    h_line_structure(d).scaled(lines) + h_conic_structure(d).scaled(conics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::ChernCharacter;
    use proptest::prelude::*;

    #[test]
    fn line_bundles() {
        assert_eq!(h_p3_line(0), CohomologyVector::new(1, 0, 0, 0));
        assert_eq!(h_p3_line(-4), CohomologyVector::new(0, 0, 0, 1));
        assert_eq!(h_p3_line(-5), CohomologyVector::new(0, 0, 0, 4));
        assert_eq!(h_p1_line(0), (1, 0));
        assert_eq!(h_p1_line(-1), (0, 0));
        assert_eq!(h_p1_line(-3), (0, 2));
    }

    #[test]
    fn kunneth_examples() {
        // a = 2, m = 3: bidegree (a - m, a + 1)
        assert_eq!(h_quadric(-1, 3), CohomologyVector::ZERO);
        assert_eq!(h_quadric(1, 1), CohomologyVector::new(4, 0, 0, 0));
        assert_eq!(h_quadric(-2, -2), CohomologyVector::new(0, 0, 1, 0));
    }

    #[test]
    fn curves_and_points() {
        assert_eq!(h_conic_structure(1 - 2).h(0), 0);
        assert_eq!(h_line_structure(0), CohomologyVector::new(1, 0, 0, 0));
        assert_eq!(h_points(6), CohomologyVector::new(6, 0, 0, 0));
    }

    proptest! {
        #[test]
        fn tables_match_riemann_roch(d in -12i64..12, p in -8i64..8, q in -8i64..8) {
            prop_assert_eq!(h_p3_line(d).chi(), ChernCharacter::line_bundle(d).euler_characteristic().unwrap());
            prop_assert_eq!(h_line_structure(d).chi(), d + 1);
            prop_assert_eq!(h_line_structure(d).chi(), ChernCharacter::lines(1).twist(d).euler_characteristic().unwrap());
            prop_assert_eq!(h_conic_structure(d).chi(), 2 * d + 1);
            prop_assert_eq!(h_conic_structure(d).chi(), ChernCharacter::conics(1).twist(d).euler_characteristic().unwrap());
            prop_assert_eq!(h_quadric(p, q).chi(), (p + 1) * (q + 1));
            prop_assert_eq!(h_quadric(p, q).chi(), ChernCharacter::quadric(p, q).euler_characteristic().unwrap());
        }

        #[test]
        fn kunneth_symmetry_and_duality(p in -10i64..10, q in -10i64..10) {
            prop_assert_eq!(h_quadric(p, q), h_quadric(q, p));
            let mut dual = h_quadric(-p - 2, -q - 2).0;
            dual[..3].reverse();
            prop_assert_eq!(h_quadric(p, q).0, dual);
        }
    }
}
