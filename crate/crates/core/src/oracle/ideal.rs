//! Evaluation matrices and the cohomology of ideal sheaves they compute.

use num_bigint::BigInt;

use super::config::{pr1, pr2, Component, Line, LineConfiguration, Point, Selection};
use super::linalg::{rank_exact, rank_mod_p, Coeff, Fp};
use super::OracleError;
use crate::chern::binomial;
use crate::engine::ConfigKind;

/// Exponent vectors of the degree-`k` monomials in four variables.
pub fn monomials(k: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=k).rev() {
        for b in (0..=k - a).rev() {
            for c in (0..=k - a - b).rev() {
                out.push([a, b, c, k - a - b - c]);
            }
        }
    }
    out
}

fn poly_mul<C: Coeff>(x: &[C], y: &[C]) -> Vec<C> {
    let mut out = vec![C::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] = out[i + j].add(&a.mul(b));
        }
    }
    out
}

/// Rows are the `k + 1` coefficients of the restriction to `s·p + t·q`.
fn line_block<C: Coeff>(line: &Line, k: u32, monos: &[[u32; 4]]) -> Vec<Vec<C>> {
    let powers: Vec<Vec<Vec<C>>> = (0..4)
        .map(|i| {
            let lin = vec![C::from_i128(line.p[i]), C::from_i128(line.q[i])];
            let mut acc = vec![vec![C::one()]];
            for e in 1..=k as usize {
                let next = poly_mul(&acc[e - 1], &lin);
                acc.push(next);
            }
            acc
        })
        .collect();
    let mut rows = vec![Vec::with_capacity(monos.len()); k as usize + 1];
    for m in monos {
        let mut f = powers[0][m[0] as usize].clone();
        for i in 1..4 {
            f = poly_mul(&f, &powers[i][m[i] as usize]);
        }
        for (row, c) in rows.iter_mut().zip(f) {
            row.push(c);
        }
    }
    rows
}

fn power<C: Coeff>(x: &C, e: u32) -> C {
    (0..e).fold(C::one(), |acc, _| acc.mul(x))
}

fn point_row<C: Coeff>(x: &Point, monos: &[[u32; 4]]) -> Vec<C> {
    let xs: Vec<C> = x.iter().map(|&v| C::from_i128(v)).collect();
    monos
        .iter()
        .map(|m| (0..4).fold(C::one(), |acc, i| acc.mul(&power(&xs[i], m[i]))))
        .collect()
}

/// Values of the bihomogeneous monomials `λⁱμ^{p−i}sʲt^{q−j}` at a point of the quadric.
fn bidegree_row<C: Coeff>(x: &Point, p: u32, q: u32) -> Vec<C> {
    let (l, m) = pr1(x);
    let (s, t) = pr2(x);
    let (l, m, s, t) = (C::from_i128(l), C::from_i128(m), C::from_i128(s), C::from_i128(t));
    let mut row = Vec::with_capacity(((p + 1) * (q + 1)) as usize);
    for i in 0..=p {
        for j in 0..=q {
            row.push(power(&l, i).mul(&power(&m, p - i)).mul(&power(&s, j)).mul(&power(&t, q - j)));
        }
    }
    row
}

/// Rank of the matrix built by `build`, knowing it cannot exceed `bound`.
/// A modular rank reaching the bound is exact; otherwise the rank is recomputed over `Q`.
fn certified_rank(build_fp: impl Fn() -> Vec<Vec<Fp>>, build_q: impl Fn() -> Vec<Vec<BigInt>>, bound: usize) -> usize {
    let r = rank_mod_p(build_fp());
    if r >= bound {
        r
    } else {
        rank_exact(build_q())
    }
}

fn curve_matrix<C: Coeff>(comps: &[Component], k: u32) -> Vec<Vec<C>> {
    let monos = monomials(k);
    comps.iter().flat_map(|c| c.lines()).flat_map(|l| line_block::<C>(&l, k, &monos)).collect()
}

/// Rank of `H⁰(O(k)) → H⁰(O_Y(k))`.
pub fn restriction_rank(comps: &[Component], k: i64) -> usize {
    if k < 0 || comps.is_empty() {
        return 0;
    }
    let k = k as u32;
    let target: u64 = comps.iter().map(|c| c.h0_structure(k as i64)).sum();
    let bound = (target as usize).min(binomial(k as i64 + 3, 3) as usize);
    certified_rank(|| curve_matrix::<Fp>(comps, k), || curve_matrix::<BigInt>(comps, k), bound)
}

/// Rank of evaluation of degree-`k` forms at the points.
pub fn point_rank(points: &[Point], k: i64) -> usize {
    if k < 0 || points.is_empty() {
        return 0;
    }
    let monos = monomials(k as u32);
    let bound = points.len().min(monos.len());
    certified_rank(
        || points.iter().map(|x| point_row::<Fp>(x, &monos)).collect(),
        || points.iter().map(|x| point_row::<BigInt>(x, &monos)).collect(),
        bound,
    )
}

/// Rank of evaluation of bidegree `(p, q)` forms on the quadric at the points.
pub fn bidegree_rank(points: &[Point], p: i64, q: i64) -> usize {
    if p < 0 || q < 0 || points.is_empty() {
        return 0;
    }
    let (p, q) = (p as u32, q as u32);
    let bound = points.len().min(((p + 1) * (q + 1)) as usize);
    certified_rank(
        || points.iter().map(|x| bidegree_row::<Fp>(x, p, q)).collect(),
        || points.iter().map(|x| bidegree_row::<BigInt>(x, p, q)).collect(),
        bound,
    )
}

fn h0_p3(k: i64) -> u64 {
    if k < 0 {
        0
    } else {
        binomial(k + 3, 3) as u64
    }
}

fn curve(cfg: &LineConfiguration, part: &str) -> Result<Vec<Component>, OracleError> {
    match cfg.select(part)? {
        Selection::Curve(c) => Ok(c),
        Selection::Points(_) => Err(OracleError::UnknownSelector(format!("{}.{part} is not a curve", cfg.label))),
    }
}

/// `h⁰(I_Y(k))`: the nullity of the evaluation matrix.
pub fn h0_ideal(cfg: &LineConfiguration, part: &str, k: i64) -> Result<u64, OracleError> {
    let comps = curve(cfg, part)?;
    Ok(h0_p3(k) - restriction_rank(&comps, k) as u64)
}

/// `h¹(I_Y(k)) = h⁰(O_Y(k)) − h⁰(O(k)) + h⁰(I_Y(k))`, valid for every `k`.
pub fn h1_ideal(cfg: &LineConfiguration, part: &str, k: i64) -> Result<u64, OracleError> {
    let comps = curve(cfg, part)?;
    let target: i128 = comps.iter().map(|c| c.h0_structure(k) as i128).sum();
    let v = target - h0_p3(k) as i128 + h0_ideal(cfg, part, k)? as i128;
    u64::try_from(v).map_err(|_| OracleError::NegativeDimension { what: format!("h1 I({k})"), value: v })
}

/// Source of a restriction map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Forms of degree `k` on P³.
    P3(i64),
    /// Forms of bidegree `(p, q)` on the quadric.
    Quadric(i64, i64),
}

/// Whether `H⁰(source) → H⁰(target)` is onto, the target given by a selector.
/// For a curve target the degree is that of the source.
pub fn restriction_surjective(cfg: &LineConfiguration, source: Source, part: &str) -> Result<bool, OracleError> {
    match (source, cfg.select(part)?) {
        (Source::P3(k), Selection::Curve(comps)) => {
            let target: u64 = comps.iter().map(|c| c.h0_structure(k)).sum();
            Ok(restriction_rank(&comps, k) as u64 == target)
        }
        (Source::P3(k), Selection::Points(pts)) => Ok(point_rank(&pts, k) == pts.len()),
        (Source::Quadric(p, q), Selection::Points(pts)) => {
            if pts.iter().any(|x| !super::config::quadric_form(x).eq(&BigInt::from(0))) {
                return Err(OracleError::Parameter("marked points are not on the quadric".into()));
            }
            Ok(bidegree_rank(&pts, p, q) == pts.len())
        }
        (Source::Quadric(..), Selection::Curve(_)) => {
            Err(OracleError::Parameter("restriction from quadric forms to a curve is not supported".into()))
        }
    }
}

/// Which Serre construction a configuration carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    /// `0 → O(−1) → E → I_Y(1) → 0` over disjoint lines.
    Thooft,
    /// `0 → O(−2) → E → I_Y(1) → 0` over disjoint conics.
    ConicSerre,
}

/// `h¹(E(l)) = h¹(I_Y(l + 1))` for the Serre bundle of the configuration.
pub fn serre_bundle_h1(cfg: &LineConfiguration, series: Series, l: i64) -> Result<u64, OracleError> {
    let ok = match series {
        Series::Thooft => matches!(cfg.kind, ConfigKind::RulingLines | ConfigKind::GeneralLines),
        Series::ConicSerre => matches!(cfg.kind, ConfigKind::ConicPairs | ConfigKind::GeneralConics),
    };
    if !ok {
        return Err(OracleError::Parameter(format!("{series:?} needs another configuration kind than {:?}", cfg.kind)));
    }
    h1_ideal(cfg, "", l + 1)
}
