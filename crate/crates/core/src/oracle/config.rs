//! Explicit line and conic configurations with integer coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::engine::ConfigKind;

/// Ruling parameters and random points are drawn from `[-BOX, BOX]`.
pub const BOX: i64 = 9;
/// Resamples allowed before giving up.
pub const RETRIES: usize = 64;

/// Homogeneous coordinates of a point of P³.
pub type Point = [i128; 4];

/// The line spanned by two distinct points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub p: Point,
    pub q: Point,
}

/// A sampled configuration. `lines` are the main lines (the `lᵢ` of conic pairs),
/// `second` the partners `lᵢ'`, `aux` the auxiliary lines, `points` the marked points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineConfiguration {
    pub kind: ConfigKind,
    pub count: u64,
    pub aux_count: u64,
    pub seed: u64,
    pub label: String,
    pub lines: Vec<Line>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub second: Vec<Line>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<Line>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point>,
    /// Matrix `g` with the partner lines on the quadric `g(S)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<[[i128; 4]; 4]>,
}

/// A reduced connected component of a selected curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Line(Line),
    Conic(Line, Line),
}

impl Component {
    pub fn lines(&self) -> Vec<Line> {
        match *self {
            Component::Line(l) => vec![l],
            Component::Conic(a, b) => vec![a, b],
        }
    }

    /// `h⁰(O_C(k))`.
    pub fn h0_structure(&self, k: i64) -> u64 {
        match self {
            Component::Line(_) => (k + 1).max(0) as u64,
            Component::Conic(..) => (2 * k + 1).max(0) as u64,
        }
    }
}

/// What a selector resolves to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Curve(Vec<Component>),
    Points(Vec<Point>),
}

fn big(x: i128) -> BigInt {
    BigInt::from(x)
}

/// Quadratic form of `x₀x₃ = x₁x₂`.
pub fn quadric_form(x: &Point) -> BigInt {
    big(x[0]) * big(x[3]) - big(x[1]) * big(x[2])
}

/// Polar bilinear form: `Q(x + uy) = Q(x) + u·B(x, y) + u²·Q(y)`.
pub fn quadric_polar(x: &Point, y: &Point) -> BigInt {
    big(x[0]) * big(y[3]) + big(x[3]) * big(y[0]) - big(x[1]) * big(y[2]) - big(x[2]) * big(y[1])
}

/// 4×4 determinant of four points.
pub fn det4(rows: [&Point; 4]) -> BigInt {
    let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| big(v)).collect()).collect();
    let mut total = BigInt::zero();
    for (perm, sign) in permutations4() {
        let mut prod = BigInt::from(sign);
        for (i, &j) in perm.iter().enumerate() {
            prod *= &m[i][j];
        }
        total += prod;
    }
    total
}

fn permutations4() -> Vec<([usize; 4], i32)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    let mut inv = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if p[i] > p[j] {
                                inv += 1;
                            }
                        }
                    }
                    out.push((p, if inv % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
    }
    out
}

/// Whether two points are proportional (or one is zero).
pub fn proportional(x: &Point, y: &Point) -> bool {
    (0..4).all(|i| (i + 1..4).all(|j| big(x[i]) * big(y[j]) == big(x[j]) * big(y[i])))
}

fn proportional2(x: (i128, i128), y: (i128, i128)) -> bool {
    big(x.0) * big(y.1) == big(x.1) * big(y.0)
}

pub fn lines_meet(l: &Line, m: &Line) -> bool {
    det4([&l.p, &l.q, &m.p, &m.q]).is_zero()
}

pub fn line_on_quadric(l: &Line) -> bool {
    quadric_form(&l.p).is_zero() && quadric_form(&l.q).is_zero() && quadric_polar(&l.p, &l.q).is_zero()
}

/// First-factor coordinate `(λ:μ)` of a point of the quadric.
pub fn pr1(x: &Point) -> (i128, i128) {
    if x[0] != 0 || x[2] != 0 {
        (x[0], x[2])
    } else {
        (x[1], x[3])
    }
}

/// Second-factor coordinate `(s:t)` of a point of the quadric.
pub fn pr2(x: &Point) -> (i128, i128) {
    if x[0] != 0 || x[1] != 0 {
        (x[0], x[1])
    } else {
        (x[2], x[3])
    }
}

fn on_quadric(l: i128, m: i128, s: i128, t: i128) -> Point {
    normalize([l * s, l * t, m * s, m * t])
}

/// The first-ruling line `(λ:μ) = const` of the quadric.
pub fn ruling_line(l: i128, m: i128) -> Line {
    Line { p: normalize([l, 0, m, 0]), q: normalize([0, l, 0, m]) }
}

fn normalize(x: Point) -> Point {
    let g = x.iter().fold(0i128, |g, &v| g.gcd(&v));
    if g == 0 {
        return x;
    }
    let sign = if x.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) { -1 } else { 1 };
    x.map(|v| sign * v / g)
}

fn normalize_big(x: [BigInt; 4]) -> Option<Point> {
    let g = x.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return None;
    }
    let mut out = [0i128; 4];
    for (o, v) in out.iter_mut().zip(x.iter()) {
        *o = (v / &g).to_i128()?;
    }
    Some(normalize(out))
}

fn apply(g: &[[BigInt; 4]; 4], x: &Point) -> Option<Point> {
    let y: [BigInt; 4] = std::array::from_fn(|i| (0..4).map(|j| &g[i][j] * big(x[j])).sum());
    normalize_big(y)
}

/// FNV-1a, used to give every configuration label its own random stream.
pub fn stream_id(label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Deterministic generator for `(seed, label)`.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(label));
    rng
}

fn coord(rng: &mut ChaCha8Rng) -> i128 {
    rng.gen_range(-BOX..=BOX) as i128
}

fn pair(rng: &mut ChaCha8Rng) -> (i128, i128) {
    loop {
        let p = (coord(rng), coord(rng));
        if p != (0, 0) {
            return p;
        }
    }
}

fn point(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let p = [coord(rng), coord(rng), coord(rng), coord(rng)];
        if p != [0; 4] {
            return normalize(p);
        }
    }
}

/// `count` projectively distinct pairs.
fn distinct_pairs(rng: &mut ChaCha8Rng, count: usize) -> Vec<(i128, i128)> {
    let mut out: Vec<(i128, i128)> = Vec::with_capacity(count);
    while out.len() < count {
        let p = pair(rng);
        if out.iter().all(|&q| !proportional2(p, q)) {
            out.push(p);
        }
    }
    out
}

/// Sample a configuration of the given kind. `count` is the number of main
/// components (`m + 1`), `aux` the number of auxiliary lines `d`.
pub fn sample_config(
    kind: ConfigKind,
    count: u64,
    aux: u64,
    seed: u64,
    label: &str,
) -> Result<LineConfiguration, OracleError> {
    sample_config_with_retries(kind, count, aux, seed, label, RETRIES)
}

/// [`sample_config`] with an explicit resampling budget.
pub fn sample_config_with_retries(
    kind: ConfigKind,
    count: u64,
    aux: u64,
    seed: u64,
    label: &str,
    retries: usize,
) -> Result<LineConfiguration, OracleError> {
    if kind == ConfigKind::ModificationLines && !(1..=5).contains(&aux) {
        return Err(OracleError::Parameter(format!("auxiliary line count {aux} outside 1..=5")));
    }
    if kind == ConfigKind::ConicPairs && count > 5 {
        return Err(OracleError::Parameter(format!("at most 5 conics supported, got {count}")));
    }
    if count > 64 {
        return Err(OracleError::Parameter(format!("component count {count} too large")));
    }
    let mut rng = rng_for(seed, label);
    for _ in 0..retries {
        let base = LineConfiguration {
            kind,
            count,
            aux_count: if kind == ConfigKind::ModificationLines { aux } else { 0 },
            seed,
            label: label.to_string(),
            lines: vec![],
            second: vec![],
            aux: vec![],
            points: vec![],
            transform: None,
        };
        let attempt = match kind {
            ConfigKind::RulingLines => Some(ruling(&mut rng, base)),
            ConfigKind::GeneralLines => Some(general(&mut rng, base)),
            ConfigKind::ConicPairs => conic_pairs(&mut rng, base),
            ConfigKind::GeneralConics => Some(general_conics(&mut rng, base)),
            ConfigKind::ModificationLines => modification(&mut rng, base),
        };
        if let Some(cfg) = attempt {
            if cfg.check().is_ok() {
                return Ok(cfg);
            }
        }
    }
    Err(OracleError::SamplingExhausted { kind: format!("{kind:?}"), attempts: retries })
}

fn ruling(rng: &mut ChaCha8Rng, mut cfg: LineConfiguration) -> LineConfiguration {
    cfg.lines = distinct_pairs(rng, cfg.count as usize).into_iter().map(|(l, m)| ruling_line(l, m)).collect();
    cfg
}

fn general(rng: &mut ChaCha8Rng, mut cfg: LineConfiguration) -> LineConfiguration {
    cfg.lines = (0..cfg.count)
        .map(|_| loop {
            let (p, q) = (point(rng), point(rng));
            if !proportional(&p, &q) {
                break Line { p, q };
            }
        })
        .collect();
    cfg
}

fn general_conics(rng: &mut ChaCha8Rng, mut cfg: LineConfiguration) -> LineConfiguration {
    for _ in 0..cfg.count {
        let (p, q, r) = (point(rng), point(rng), point(rng));
        cfg.lines.push(Line { p, q });
        cfg.second.push(Line { p, q: r });
    }
    cfg
}

fn conic_pairs(rng: &mut ChaCha8Rng, mut cfg: LineConfiguration) -> Option<LineConfiguration> {
    let n = cfg.count as usize;
    let firsts = distinct_pairs(rng, n);
    let ps: Vec<Point> = firsts
        .iter()
        .map(|&(l, m)| {
            let (s, t) = pair(rng);
            on_quadric(l, m, s, t)
        })
        .collect();
    let qs: Vec<(i128, i128, Point)> = distinct_pairs(rng, n)
        .into_iter()
        .map(|(l, m)| {
            let (s, t) = pair(rng);
            (l, m, on_quadric(l, m, s, t))
        })
        .collect();
    // g·qᵢ = cᵢ·pᵢ: unknowns are the 16 entries of g and the cᵢ
    let unknowns = 16 + n;
    let mut eqs: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        for r in 0..4 {
            let mut row = vec![BigRational::zero(); unknowns];
            for c in 0..4 {
                row[4 * r + c] = BigRational::from_integer(big(qs[i].2[c]));
            }
            row[16 + i] = BigRational::from_integer(-big(ps[i][r]));
            eqs.push(row);
        }
    }
    let basis = nullspace(eqs, unknowns);
    if basis.is_empty() {
        return None;
    }
    let mut sol = vec![BigRational::zero(); unknowns];
    for b in &basis {
        let c = BigRational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)));
        for (s, v) in sol.iter_mut().zip(b) {
            *s += &c * v;
        }
    }
    let denom = sol.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = sol.iter().map(|v| (v * BigRational::from_integer(denom.clone())).to_integer()).collect();
    let g: [[BigInt; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| ints[4 * r + c].clone()));
    if ints[16..].iter().any(|c| c.is_zero()) {
        return None;
    }
    let mut gi = [[0i128; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            gi[r][c] = g[r][c].to_i128()?;
        }
    }
    if det4([&gi[0], &gi[1], &gi[2], &gi[3]]).is_zero() {
        return None;
    }
    for i in 0..n {
        let (l, m) = firsts[i];
        cfg.lines.push(ruling_line(l, m));
        let (l2, m2, _) = qs[i];
        let pre = ruling_line(l2, m2);
        let partner = Line { p: apply(&g, &pre.p)?, q: apply(&g, &pre.q)? };
        let p = ps[i];
        let d = if proportional(&partner.p, &p) { partner.q } else { partner.p };
        let qd = quadric_form(&d);
        let b = quadric_polar(&p, &d);
        let z: [BigInt; 4] = std::array::from_fn(|j| &qd * big(p[j]) - &b * big(d[j]));
        cfg.second.push(partner);
        cfg.points.push(normalize_big(z)?);
    }
    cfg.transform = Some(gi);
    Some(cfg)
}

fn modification(rng: &mut ChaCha8Rng, mut cfg: LineConfiguration) -> Option<LineConfiguration> {
    cfg = ruling(rng, cfg);
    for _ in 0..cfg.aux_count {
        let (l1, m1) = pair(rng);
        let (s1, t1) = pair(rng);
        let (l2, m2) = pair(rng);
        let (s2, t2) = pair(rng);
        if proportional2((l1, m1), (l2, m2)) || proportional2((s1, t1), (s2, t2)) {
            return None;
        }
        let x = on_quadric(l1, m1, s1, t1);
        let y = on_quadric(l2, m2, s2, t2);
        cfg.aux.push(Line { p: x, q: y });
        cfg.points.push(x);
        cfg.points.push(y);
    }
    Some(cfg)
}

/// Basis of the solution space of a homogeneous linear system over `Q`.
fn nullspace(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::from_integer(1.into());
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][f].clone();
            }
            v
        })
        .collect()
}

impl LineConfiguration {
    /// Verify the invariants of the configuration's kind.
    pub fn check(&self) -> Result<(), String> {
        let n = self.count as usize;
        let all_skew = |ls: &[Line]| -> Result<(), String> {
            for (i, a) in ls.iter().enumerate() {
                if proportional(&a.p, &a.q) {
                    return Err(format!("line {i} is degenerate"));
                }
                for (j, b) in ls.iter().enumerate().skip(i + 1) {
                    if lines_meet(a, b) {
                        return Err(format!("lines {i} and {j} meet"));
                    }
                }
            }
            Ok(())
        };
        if self.lines.len() != n {
            return Err(format!("expected {n} lines, found {}", self.lines.len()));
        }
        match self.kind {
            ConfigKind::RulingLines => {
                all_skew(&self.lines)?;
                if !self.lines.iter().all(line_on_quadric) {
                    return Err("a ruling line is not on the quadric".into());
                }
            }
            ConfigKind::GeneralLines => all_skew(&self.lines)?,
            ConfigKind::ConicPairs => {
                if self.second.len() != n || self.points.len() != n {
                    return Err("conic data incomplete".into());
                }
                all_skew(&self.lines)?;
                all_skew(&self.second)?;
                for (i, l) in self.lines.iter().enumerate() {
                    if !line_on_quadric(l) {
                        return Err(format!("line {i} is not on the quadric"));
                    }
                    for (j, l2) in self.second.iter().enumerate() {
                        if (i == j) != lines_meet(l, l2) {
                            return Err(format!("lines {i} and {j}' have the wrong incidence"));
                        }
                    }
                }
                let g = self.transform.ok_or("missing quadric transform")?;
                let adj = adjugate(&g);
                for (i, l) in self.second.iter().enumerate() {
                    if line_on_quadric(l) {
                        return Err(format!("line {i}' lies on the quadric"));
                    }
                    // partner lines lie on g(S) in the image of the first ruling
                    let back = Line { p: apply(&adj, &l.p).ok_or("overflow")?, q: apply(&adj, &l.q).ok_or("overflow")? };
                    if !line_on_quadric(&back) || !proportional2(pr1(&back.p), pr1(&back.q)) {
                        return Err(format!("line {i}' is not a ruling line of the second quadric"));
                    }
                    let z = &self.points[i];
                    if !quadric_form(z).is_zero() || !on_line(z, l) || self.lines.iter().any(|y| on_line(z, y)) {
                        return Err(format!("point {i} is misplaced"));
                    }
                }
                distinct_projections(&self.points, pr1)?;
            }
            ConfigKind::GeneralConics => {
                if self.second.len() != n {
                    return Err("conic data incomplete".into());
                }
                all_skew(&self.lines)?;
                all_skew(&self.second)?;
                for (i, l) in self.lines.iter().enumerate() {
                    if proportional(&l.q, &self.second[i].q) || on_line(&self.second[i].q, l) {
                        return Err(format!("conic {i} is a double line"));
                    }
                    for (j, l2) in self.second.iter().enumerate() {
                        if (i == j) != lines_meet(l, l2) {
                            return Err(format!("lines {i} and {j}' have the wrong incidence"));
                        }
                    }
                }
            }
            ConfigKind::ModificationLines => {
                all_skew(&self.lines)?;
                let all: Vec<Line> = self.lines.iter().chain(&self.aux).copied().collect();
                all_skew(&all)?;
                if self.aux.len() != self.aux_count as usize || self.points.len() != 2 * self.aux.len() {
                    return Err("auxiliary data incomplete".into());
                }
                for (j, l) in self.aux.iter().enumerate() {
                    if line_on_quadric(l) {
                        return Err(format!("auxiliary line {j} lies on the quadric"));
                    }
                    for x in &self.points[2 * j..2 * j + 2] {
                        if !quadric_form(x).is_zero() || !on_line(x, l) {
                            return Err(format!("marked point of auxiliary line {j} is misplaced"));
                        }
                    }
                }
                distinct_projections(&self.points, pr2)?;
            }
        }
        Ok(())
    }

    /// Resolve `""`, `first`, `second`, `points`, `aux` or `all`.
    pub fn select(&self, part: &str) -> Result<Selection, OracleError> {
        let lines = |ls: &[Line]| Selection::Curve(ls.iter().map(|&l| Component::Line(l)).collect());
        Ok(match (self.kind, part) {
            (ConfigKind::ConicPairs | ConfigKind::GeneralConics, "") => Selection::Curve(
                self.lines.iter().zip(&self.second).map(|(&a, &b)| Component::Conic(a, b)).collect(),
            ),
            (_, "") => lines(&self.lines),
            (ConfigKind::ConicPairs | ConfigKind::GeneralConics, "first") => lines(&self.lines),
            (ConfigKind::ConicPairs | ConfigKind::GeneralConics, "second") => lines(&self.second),
            (ConfigKind::ConicPairs | ConfigKind::ModificationLines, "points") => Selection::Points(self.points.clone()),
            (ConfigKind::ModificationLines, "aux") => lines(&self.aux),
            (ConfigKind::ModificationLines, "all") => {
                let all: Vec<Line> = self.lines.iter().chain(&self.aux).copied().collect();
                lines(&all)
            }
            _ => return Err(OracleError::UnknownSelector(format!("{}.{part}", self.label))),
        })
    }
}

fn on_line(x: &Point, l: &Line) -> bool {
    det4([x, &l.p, &l.q, &[1, 0, 0, 0]]).is_zero()
        && det4([x, &l.p, &l.q, &[0, 1, 0, 0]]).is_zero()
        && det4([x, &l.p, &l.q, &[0, 0, 1, 0]]).is_zero()
        && det4([x, &l.p, &l.q, &[0, 0, 0, 1]]).is_zero()
}

fn distinct_projections(points: &[Point], pr: fn(&Point) -> (i128, i128)) -> Result<(), String> {
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if proportional2(pr(a), pr(b)) {
                return Err("marked points have coinciding projections".into());
            }
        }
    }
    Ok(())
}

fn adjugate(g: &[[i128; 4]; 4]) -> [[BigInt; 4]; 4] {
    let minor = |r: usize, c: usize| -> BigInt {
        let m: Vec<Vec<BigInt>> = (0..4)
            .filter(|&i| i != r)
            .map(|i| (0..4).filter(|&j| j != c).map(|j| big(g[i][j])).collect())
            .collect();
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let v = minor(j, i);
            if (i + j) % 2 == 0 {
                v
            } else {
                -v
            }
        })
    })
}
