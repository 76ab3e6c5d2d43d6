//! Monads `O(left) → E₁ ⊕ E₂ → O(a)` and their cohomology bundles.
//!
//! Two series: `Σ₀` (`c₁ = 0`, 't Hooft instantons `E₁, E₂` over lines, `left = −a`) and
//! `Σ₁` (`c₁ = −1`, Serre bundles over general conics, `left = −a − 1`). The numbers here come
//! from Chern character arithmetic and from a generated proof script replayed by the engine
//! against the geometry oracle.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::{binomial, ChernCharacter, ChernClasses, ChernError};
use crate::engine::{run_source, DeductionGraph, DimInterval, Report, RunOptions, ScriptError};
use crate::oracle::GeometryOracle;

mod identities;
pub mod spectrum;

pub use identities::{intermediate_dims, sym2, IdentityCheck, IdentityReport};
pub use spectrum::{recover, Spectrum};

#[derive(Debug, Error)]
pub enum MonadError {
    #[error("invalid monad parameters: {0}")]
    InvalidSpec(String),
    #[error("h1(E({0})) is not pinned: {1}")]
    Unpinned(i64, DimInterval),
    #[error("inconsistent profile: {0}")]
    InconsistentProfile(String),
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error(transparent)]
    Chern(#[from] ChernError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MonadSeries {
    Sigma0,
    Sigma1,
}

impl MonadSeries {
    pub fn c1(self) -> i64 {
        match self {
            MonadSeries::Sigma0 => 0,
            MonadSeries::Sigma1 => -1,
        }
    }
}

impl fmt::Display for MonadSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonadSeries::Sigma0 => "SIGMA0",
            MonadSeries::Sigma1 => "SIGMA1",
        })
    }
}

impl std::str::FromStr for MonadSeries {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sigma0" | "s0" => Ok(MonadSeries::Sigma0),
            "sigma1" | "s1" => Ok(MonadSeries::Sigma1),
            other => Err(format!("unknown series `{other}` (sigma0 or sigma1)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// The hypotheses of the existence theorems.
    Strict,
    /// Parameters of the small-`n` tables only.
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonadSpec {
    pub series: MonadSeries,
    pub m: i64,
    pub eps: i64,
    pub a: i64,
    pub regime: Regime,
}

/// `5 ≤ a ≤ 12, m + ε ≤ a − 4` or `a ≥ 12, m + ε ≤ a + 1`, with `m ≥ 1`.
pub fn sigma0_strict(m: i64, eps: i64, a: i64) -> bool {
    m >= 1 && (eps == 0 || eps == 1) && (((5..=12).contains(&a) && m + eps <= a - 4) || (a >= 12 && m + eps <= a + 1))
}

/// `a ≥ 2(m + ε) + 3`, with `m ≥ 1`.
pub fn sigma1_strict(m: i64, eps: i64, a: i64) -> bool {
    m >= 1 && (eps == 0 || eps == 1) && a >= 2 * (m + eps) + 3
}

impl MonadSpec {
    /// Validates the parameters against the regime.
    pub fn new(series: MonadSeries, m: i64, eps: i64, a: i64, regime: Regime) -> Result<Self, MonadError> {
        let spec = MonadSpec { series, m, eps, a, regime };
        if m < 1 || !(eps == 0 || eps == 1) || a < 2 {
            return Err(MonadError::InvalidSpec(format!("{spec}: need m ≥ 1, eps ∈ {{0, 1}}, a ≥ 2")));
        }
        let ok = match regime {
            Regime::Strict => match series {
                MonadSeries::Sigma0 => sigma0_strict(m, eps, a),
                MonadSeries::Sigma1 => sigma1_strict(m, eps, a),
            },
            Regime::Extended => {
                crate::atlas::SECTION5.iter().any(|r| (r.series, r.m, r.eps, r.a) == (series, m, eps, a))
            }
        };
        if !ok {
            return Err(MonadError::InvalidSpec(format!("{spec} is outside the {regime:?} regime")));
        }
        Ok(spec)
    }

    /// Strict when the theorem hypotheses hold, extended when the tables list it.
    pub fn any(series: MonadSeries, m: i64, eps: i64, a: i64) -> Result<Self, MonadError> {
        Self::new(series, m, eps, a, Regime::Strict).or_else(|_| Self::new(series, m, eps, a, Regime::Extended))
    }

    pub fn c1(&self) -> i64 {
        self.series.c1()
    }

    /// `c₂ = 2m + ε + a²` or `4m + 2ε + a(a + 1)`.
    pub fn n(&self) -> i64 {
        match self.series {
            MonadSeries::Sigma0 => 2 * self.m + self.eps + self.a * self.a,
            MonadSeries::Sigma1 => 4 * self.m + 2 * self.eps + self.a * (self.a + 1),
        }
    }

    /// Twists of the outer line bundles `(left, right)`.
    pub fn outer(&self) -> (i64, i64) {
        match self.series {
            MonadSeries::Sigma0 => (-self.a, self.a),
            MonadSeries::Sigma1 => (-self.a - 1, self.a),
        }
    }

    /// Chern classes of the summands `E₁`, `E₂`.
    pub fn summands(&self) -> [ChernClasses; 2] {
        let (m1, m2) = (self.m, self.m + self.eps);
        match self.series {
            MonadSeries::Sigma0 => [ChernClasses::new(2, 0, m1, 0), ChernClasses::new(2, 0, m2, 0)],
            MonadSeries::Sigma1 => [ChernClasses::new(2, -1, 2 * m1, 0), ChernClasses::new(2, -1, 2 * m2, 0)],
        }
    }

    /// `ch(E₁) + ch(E₂)`.
    pub fn middle_character(&self) -> ChernCharacter {
        self.summands().into_iter().map(ChernCharacter::from_classes).sum()
    }
}

impl fmt::Display for MonadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (m, eps, a) = ({}, {}, {})", self.series, self.m, self.eps, self.a)
    }
}

/// `ch(E) = ch(E₁ ⊕ E₂) − ch(O(left)) − ch(O(right))`, as classes.
pub fn cohomology_chern(spec: &MonadSpec) -> Result<ChernClasses, MonadError> {
    let (l, r) = spec.outer();
    let ch = spec.middle_character() - ChernCharacter::line_bundle(l) - ChernCharacter::line_bundle(r);
    Ok(ch.to_classes()?)
}

/// Dimension of the component containing the cohomology bundles.
pub fn component_dimension(spec: &MonadSpec) -> i64 {
    let (m, eps, a) = (spec.m, spec.eps, spec.a);
    match spec.series {
        MonadSeries::Sigma0 => 4 * binomial(a + 3, 3) + (2 * m + eps) * (10 - a) - 11,
        MonadSeries::Sigma1 => 4 * binomial(a + 3, 3) + 2 * binomial(a + 3, 2) - (2 * m + eps) * (2 * a - 19) - 17,
    }
}

/// `8n − 3 + 2e`.
pub fn expected_dimension(e: i64, n: i64) -> i64 {
    8 * n - 3 + 2 * e
}

/// The proof script tying `E` to the oracle: Serre triples for `E₁, E₂`, the two monad
/// triples, instantiated at every twist in `twists`.
pub fn monad_script(spec: &MonadSpec, twists: &[i64]) -> String {
    let (kind, left_serre, c2_factor, top) = match spec.series {
        MonadSeries::Sigma0 => ("general-lines", -1, 1, spec.a),
        MonadSeries::Sigma1 => ("general-conics", -2, 2, spec.a + 1),
    };
    let c1 = spec.c1();
    let (left, right) = spec.outer();
    let mut s = String::new();
    let mut push = |line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    push(format!("# monad {spec}"));
    push("param m eps a".into());
    push("let n2 = m+eps".into());
    push(format!("config Y1 {kind} m+1"));
    push(format!("config Y2 {kind} n2+1"));
    push("node O p3".into());
    for i in 1..=2 {
        let mi = if i == 1 { "m" } else { "n2" };
        push(format!("node IY{i} ideal Y{i}"));
        push(format!("node OY{i} structure Y{i}"));
        push(format!("node E{i} bundle serre Y{i} 1"));
        push(format!("chern E{i} 2 {c1} {c2_factor}*{mi} 0"));
        push(format!("triple C{i} O {left_serre} E{i} 0 IY{i} 1"));
        push(format!("triple IO{i} IY{i} 0 O 0 OY{i} 0"));
        push(format!("fact STABILITY h0 E{i} 0 = 0"));
        push(format!("fact ORACLE h0 IY{i} 0"));
        push(format!("fact ORACLE h1 IY{i} {}", top + 1));
        if spec.series == MonadSeries::Sigma1 {
            push(format!("fact ORACLE h1 IY{i} {}", spec.a - 2));
        }
    }
    push("sum BE E1 0 E2 0".into());
    push("node K sheaf".into());
    push("node E bundle".into());
    push(format!("chern E 2 {c1} {} 0", spec.n()));
    push(format!("triple MK1 K 0 BE 0 O {right}"));
    push(format!("triple MK2 O {left} K 0 E 0"));
    for &t in twists {
        for i in 1..=2 {
            push(format!("twist C{i} {t}"));
            push(format!("twist IO{i} {}", t + 1));
        }
        push(format!("twist MK1 {t}"));
        push(format!("twist MK2 {t}"));
    }
    s
}

/// Profile twists `−1, …, −(a + 4)` and the twists of the middle-term vanishings.
fn default_twists(spec: &MonadSpec) -> Vec<i64> {
    let mut ts: Vec<i64> = (1..=spec.a + 4).map(|j| -j).collect();
    match spec.series {
        MonadSeries::Sigma0 => ts.push(spec.a),
        MonadSeries::Sigma1 => ts.extend([spec.a + 1, spec.a - 3]),
    }
    ts
}

/// Replays [`monad_script`] over the default twists with a fresh oracle.
pub fn monad_graph(spec: &MonadSpec, seed: u64) -> Result<(Report, DeductionGraph), MonadError> {
    let src = monad_script(spec, &default_twists(spec));
    let mut opts = RunOptions::with_params(&[("m", spec.m), ("eps", spec.eps), ("a", spec.a)]);
    opts.seed = seed;
    let mut oracle = GeometryOracle::new(seed);
    Ok(run_source("monad", &src, &opts, &mut oracle)?)
}

/// `t ↦ h¹(E(t))` for `t ∈ [lo, hi]`, each value pinned by the engine.
pub fn h1_profile(spec: &MonadSpec, lo: i64, hi: i64, seed: u64) -> Result<BTreeMap<i64, u64>, MonadError> {
    let mut twists = default_twists(spec);
    twists.extend(lo..=hi);
    twists.sort_unstable();
    twists.dedup();
    let src = monad_script(spec, &twists);
    let mut opts = RunOptions::with_params(&[("m", spec.m), ("eps", spec.eps), ("a", spec.a)]);
    opts.seed = seed;
    let mut oracle = GeometryOracle::new(seed);
    let (_, graph) = run_source("monad", &src, &opts, &mut oracle)?;
    (lo..=hi)
        .map(|t| {
            let iv = graph.lookup("E", t, 1).unwrap_or_default();
            iv.pinned().map(|v| (t, v)).ok_or(MonadError::Unpinned(t, iv))
        })
        .collect()
}

/// Profile over `[−(a + 4), −1]` followed by [`recover`].
pub fn spectrum(spec: &MonadSpec, seed: u64) -> Result<Spectrum, MonadError> {
    let profile = h1_profile(spec, -spec.a - 4, -1, seed)?;
    recover(&profile, spec.c1(), spec.n() as u64)
}

/// One vanishing or value read off the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleCheck {
    pub label: String,
    pub cell: String,
    pub expected: u64,
    pub interval: DimInterval,
    pub holds: bool,
    pub chain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleTermReport {
    pub spec: MonadSpec,
    pub seed: u64,
    pub checks: Vec<MiddleCheck>,
    /// `Σ₀` only: the four instanton vanishings as printed.
    pub instanton_as_printed: Option<bool>,
    /// `Σ₀` only: the same without the `h¹(E(−2))` clause.
    pub instanton_without_h1: Option<bool>,
}

impl MiddleTermReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("middle term of {} (seed {})\n", self.spec, self.seed);
        for c in &self.checks {
            let mark = if c.holds { "ok  " } else { "FAIL" };
            out.push_str(&format!("{mark} {:<28} {} = {} (engine {})\n", c.label, c.cell, c.expected, c.interval));
        }
        if let (Some(p), Some(r)) = (self.instanton_as_printed, self.instanton_without_h1) {
            out.push_str(&format!("symplectic instanton, four vanishings: {p}\n"));
            out.push_str(&format!("symplectic instanton, without the h1 clause: {r}\n"));
        }
        out
    }
}

/// Vanishings of `𝔼 = E₁ ⊕ E₂` needed by the monad and the dimension count.
pub fn middle_term_checks(spec: &MonadSpec, seed: u64) -> Result<MiddleTermReport, MonadError> {
    let (_, graph) = monad_graph(spec, seed)?;
    let (m, eps, a) = (spec.m, spec.eps, spec.a);
    let wanted: Vec<(&str, u8, i64, i64)> = match spec.series {
        MonadSeries::Sigma0 => vec![
            ("h0(E(-1)) = 0", 0, -1, 0),
            ("h1(E(-2)) = 0", 1, -2, 0),
            ("h2(E(-2)) = 0", 2, -2, 0),
            ("h3(E(-3)) = 0", 3, -3, 0),
            ("h1(E(-a)) = 0", 1, -a, 0),
            ("h1(E(a)) = 0", 1, a, 0),
            ("h2(E(a)) = 0", 2, a, 0),
            ("h3(E(a)) = 0", 3, a, 0),
            ("h0(E(a)) = chi", 0, a, 4 * binomial(a + 3, 3) - (2 * m + eps) * (a + 2)),
        ],
        MonadSeries::Sigma1 => vec![
            ("h1(E(-a)) = 0", 1, -a, 0),
            ("h2(E(-a)) = 0", 2, -a, 0),
            ("h1(E(a+1)) = 0", 1, a + 1, 0),
            ("h2(E(a+1)) = 0", 2, a + 1, 0),
            ("h3(E(a+1)) = 0", 3, a + 1, 0),
            (
                "h0(E(a+1)) = chi",
                0,
                a + 1,
                4 * binomial(a + 3, 3) + 2 * binomial(a + 3, 2) - (2 * m + eps) * (2 * a + 5),
            ),
        ],
    };
    let fam = graph.family_id("BE").map_err(|e| ScriptError::Engine { line: 0, source: e })?;
    let checks: Vec<MiddleCheck> = wanted
        .into_iter()
        .map(|(label, deg, t, expected)| {
            let id = graph.instance_id(fam, t);
            let interval = id.map(|i| graph.interval((i, deg))).unwrap_or_default();
            let expected = expected.max(0) as u64;
            MiddleCheck {
                label: label.to_string(),
                cell: id.map(|i| graph.cell_name((i, deg))).unwrap_or_else(|| format!("h{deg} BE({t})")),
                expected,
                interval,
                holds: interval.pinned() == Some(expected),
                chain: id.map(|i| graph.explain((i, deg), 32)).unwrap_or_default(),
            }
        })
        .collect();
    let (printed, reduced) = match spec.series {
        MonadSeries::Sigma0 => {
            let p = checks[..4].iter().all(|c| c.holds);
            let r = checks[..4].iter().enumerate().filter(|(i, _)| *i != 1).all(|(_, c)| c.holds);
            (Some(p), Some(r))
        }
        MonadSeries::Sigma1 => (None, None),
    };
    Ok(MiddleTermReport { spec: *spec, seed, checks, instanton_as_printed: printed, instanton_without_h1: reduced })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chern_examples() {
        let s = MonadSpec::any(MonadSeries::Sigma0, 1, 0, 2).unwrap();
        assert_eq!(cohomology_chern(&s).unwrap(), ChernClasses::new(2, 0, 6, 0));
        let s = MonadSpec::any(MonadSeries::Sigma1, 1, 0, 4).unwrap();
        assert_eq!(cohomology_chern(&s).unwrap(), ChernClasses::new(2, -1, 24, 0));
    }

    #[test]
    fn regimes() {
        assert!(MonadSpec::new(MonadSeries::Sigma0, 1, 0, 5, Regime::Strict).is_ok());
        assert!(MonadSpec::new(MonadSeries::Sigma0, 1, 0, 4, Regime::Strict).is_err());
        assert!(MonadSpec::new(MonadSeries::Sigma0, 1, 0, 4, Regime::Extended).is_ok());
        assert!(MonadSpec::new(MonadSeries::Sigma1, 1, 0, 5, Regime::Strict).is_ok());
        assert!(MonadSpec::new(MonadSeries::Sigma1, 1, 1, 5, Regime::Strict).is_err());
        assert!(MonadSpec::new(MonadSeries::Sigma0, 0, 0, 5, Regime::Strict).is_err());
    }
}
