//! The acceptance suite: one verdict per criterion, in a deterministic report.
//!
//! Timings are kept apart from the report so that two runs can be compared byte for byte.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::{coverage_sigma0, curated_section5, density_sigma1, enumerate, Flag, SeriesLabel, SECTION5};
use crate::monad::{
    component_dimension, intermediate_dims, sigma0_strict, sigma1_strict, spectrum, MonadSeries, MonadSpec, Regime,
};
use crate::scripts::run_bundled;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!("criterion {:>2} {} {}: {}", self.id, if self.passed { "PASS" } else { "FAIL" }, self.title, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub seed: u64,
    pub criteria: Vec<Criterion>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("acceptance (seed {})\n", self.seed);
        for c in &self.criteria {
            out.push_str(&c.line());
            out.push('\n');
        }
        out
    }
}

/// Wall-clock time per criterion, in the order of the report.
pub type Timings = Vec<(u8, Duration)>;

fn criterion(id: u8, title: &str, passed: bool, detail: String) -> Criterion {
    Criterion { id, title: title.into(), passed, detail }
}

fn timed(id: u8, timings: &mut Timings, f: impl FnOnce() -> Criterion) -> Criterion {
    let t = Instant::now();
    let c = f();
    timings.push((id, t.elapsed()));
    c
}

fn join(xs: impl IntoIterator<Item = i64>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn table_dims(series: MonadSeries) -> Vec<(&'static str, i64, i64)> {
    SECTION5
        .iter()
        .filter(|r| r.series == series)
        .map(|r| {
            let spec = MonadSpec::any(r.series, r.m, r.eps, r.a).expect("tabulated");
            (r.row, component_dimension(&spec), r.printed_dimension)
        })
        .collect()
}

fn sigma0_table() -> Criterion {
    let dims = table_dims(MonadSeries::Sigma0);
    let got: Vec<i64> = dims.iter().map(|d| d.1).collect();
    let ok = got == [45, 53, 61, 69, 77, 85, 93, 141] && dims.iter().all(|d| d.1 == d.2);
    criterion(1, "Sigma0 dimension table", ok, join(got))
}

fn sigma1_table() -> Criterion {
    let recs: Vec<_> = curated_section5().into_iter().filter(|r| r.e == -1).collect();
    let got: Vec<i64> = recs.iter().map(|r| r.dimension).collect();
    let flagged: Vec<i64> = recs.iter().filter(|r| r.flags.contains(&Flag::PaperTypoSuspect)).map(|r| r.n).collect();
    let ok = got == [187, 281, 290, 299]
        && recs[2].flags.contains(&Flag::PaperTypoSuspect)
        && table_dims(MonadSeries::Sigma1).iter().filter(|d| d.1 != d.2).map(|d| d.0).eq(["sigma1:3"]);
    criterion(2, "Sigma1 dimension table", ok, format!("{}; flagged at n = {}", join(got), join(flagged)))
}

fn spectra(seed: u64) -> Criterion {
    let results: Vec<(String, bool)> = SECTION5
        .par_iter()
        .map(|r| {
            let spec = MonadSpec::any(r.series, r.m, r.eps, r.a).expect("tabulated");
            match spectrum(&spec, seed) {
                Ok(s) => {
                    let ok = s.to_string() == r.spectrum && s.is_symmetric() && s.len() as i64 == r.n;
                    (format!("{}={}", r.n, if ok { "ok" } else { "differs" }), ok)
                }
                Err(e) => (format!("{}: {e}", r.n), false),
            }
        })
        .collect();
    let ok = results.iter().all(|r| r.1);
    let bad: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    let detail = if ok { format!("{} spectra reproduced", results.len()) } else { bad.join(", ") };
    criterion(3, "spectra from h1 profiles", ok, detail)
}

fn identities() -> Criterion {
    let mut total = 0;
    let mut bad = Vec::new();
    for series in [MonadSeries::Sigma0, MonadSeries::Sigma1] {
        for m in 1..=6 {
            for eps in 0..=1 {
                for a in 5..=15 {
                    let spec = MonadSpec { series, m, eps, a, regime: Regime::Strict };
                    match intermediate_dims(&spec) {
                        Ok(r) => {
                            total += r.checks.len();
                            bad.extend(r.checks.iter().filter(|c| !c.agree).map(|c| format!("{spec} {}", c.label)));
                        }
                        Err(e) => bad.push(format!("{spec}: {e}")),
                    }
                }
            }
        }
    }
    let detail = if bad.is_empty() { format!("{total} identities agree") } else { bad.join("; ") };
    criterion(4, "Euler characteristic identities", bad.is_empty(), detail)
}

/// Script name, parameters and seed of one run.
type Job = (&'static str, Vec<(&'static str, i64)>, u64);

/// Outcome of one script run.
#[derive(Clone, Debug)]
struct Run {
    label: String,
    entailed: bool,
    mismatches: usize,
    checks: usize,
    error: Option<String>,
}

fn run_grid(jobs: Vec<Job>) -> Vec<Run> {
    jobs.into_par_iter()
        .map(|(name, params, seed)| {
            let label = format!(
                "{name} {} seed {seed}",
                params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
            );
            match run_bundled(name, &params, seed) {
                Ok(report) => Run {
                    label,
                    entailed: report.all_entailed(),
                    mismatches: report.oracle_checks.iter().filter(|c| !c.agree).count(),
                    checks: report.oracle_checks.len(),
                    error: None,
                },
                Err(e) => Run { label, entailed: false, mismatches: 0, checks: 0, error: Some(e.to_string()) },
            }
        })
        .collect()
}

fn summarize(id: u8, title: &str, runs: &[Run]) -> Criterion {
    let failed: Vec<String> = runs
        .iter()
        .filter(|r| !r.entailed)
        .map(|r| format!("{} ({})", r.label, r.error.as_deref().unwrap_or("not entailed")))
        .collect();
    let detail = if failed.is_empty() {
        format!("{} runs entailed", runs.len())
    } else {
        format!("{} of {} runs failed: {}", failed.len(), runs.len(), failed.join("; "))
    };
    criterion(id, title, failed.is_empty(), detail)
}

fn seeds(seed: u64) -> impl Iterator<Item = u64> + Clone {
    seed..seed + 5
}

fn prop1_jobs(seed: u64) -> Vec<Job> {
    let mut jobs = Vec::new();
    for a in 5..=12 {
        for m in 1..=a - 4 {
            for eps in 0..=1 {
                if m + eps <= a - 4 {
                    jobs.extend(seeds(seed).map(|s| ("prop1", vec![("m", m), ("eps", eps), ("a", a)], s)));
                }
            }
        }
    }
    for a in 12..=14 {
        for d in 1..=5 {
            for m in [1, 4, a - 4] {
                jobs.extend(seeds(seed).map(|s| ("prop1-modified", vec![("m", m), ("a", a), ("d", d)], s)));
            }
        }
    }
    jobs
}

fn prop2_jobs(seed: u64) -> Vec<Job> {
    let mut jobs = Vec::new();
    for m in 1..=3 {
        for eps in 0..=1 {
            for a in 2 * (m + eps) + 4..=2 * (m + eps) + 8 {
                jobs.extend(seeds(seed).map(|s| ("prop2", vec![("m", m), ("eps", eps), ("a", a)], s)));
            }
        }
    }
    jobs
}

fn chain_jobs(seed: u64) -> Vec<Job> {
    let mut jobs = Vec::new();
    for a in [5, 8, 12, 13] {
        for m in 1..=a + 1 {
            for eps in 0..=1 {
                if sigma0_strict(m, eps, a) && (m <= 2 || m + eps >= a - 5) {
                    jobs.push(("thmA-chain", vec![("m", m), ("eps", eps), ("a", a)], seed));
                }
            }
        }
    }
    for m in 1..=2 {
        for eps in 0..=1 {
            for a in 2 * (m + eps) + 3..=2 * (m + eps) + 5 {
                if sigma1_strict(m, eps, a) {
                    jobs.push(("thmB-chain", vec![("m", m), ("eps", eps), ("a", a)], seed));
                }
            }
        }
    }
    jobs
}

fn agreement(runs: &[&[Run]]) -> Criterion {
    let all: Vec<&Run> = runs.iter().flat_map(|r| r.iter()).collect();
    let checks: usize = all.iter().map(|r| r.checks).sum();
    let mismatches: usize = all.iter().map(|r| r.mismatches).sum();
    let errors = all.iter().filter(|r| r.error.is_some()).count();
    criterion(
        7,
        "oracle and engine agree",
        mismatches == 0 && checks > 0,
        format!("{checks} cells compared over {} runs, {mismatches} mismatches, {errors} runs stopped early", all.len()),
    )
}

fn coverage() -> Criterion {
    let missing = coverage_sigma0(146, 10_000);
    criterion(8, "Sigma0 coverage from 146", missing.is_empty(), format!("{} uncovered n in [146, 10000]", missing.len()))
}

fn density() -> Criterion {
    let rs = [1_000i64, 10_000, 100_000, 1_000_000];
    let d: Vec<BigRational> = rs.par_iter().map(|&r| density_sigma1(r)).collect();
    let one = BigRational::one();
    let gaps: Vec<BigRational> = d.iter().map(|x| &one - x).collect();
    let ok = gaps.windows(2).all(|w| w[1] <= w[0]) && d[3] > d[0];
    let detail = rs.iter().zip(&d).map(|(r, x)| format!("r={r}: {x}")).collect::<Vec<_>>().join(", ");
    criterion(9, "Sigma1 density", ok, detail)
}

fn strict_inequality() -> Criterion {
    let s0 = enumerate(SeriesLabel::Sigma0, 10_000);
    let s1 = enumerate(SeriesLabel::Sigma1, 10_000);
    let bad0 = s0.iter().filter(|r| r.dimension <= 8 * r.n - 3).count();
    let bad1 = s1.iter().filter(|r| r.dimension < 8 * r.n - 5).count();
    let equal: Vec<i64> = s1.iter().filter(|r| r.dimension == 8 * r.n - 5).map(|r| r.n).collect();
    let flagged = s1.iter().filter(|r| r.dimension == 8 * r.n - 5).all(|r| r.flags.contains(&Flag::ExpectedAttained));
    criterion(
        10,
        "dimension against expected",
        bad0 == 0 && bad1 == 0 && flagged,
        format!(
            "{} Sigma0 records strictly above 8n-3; {} Sigma1 records at least 8n-5, equality flagged at n = [{}]",
            s0.len() - bad0,
            s1.len() - bad1,
            join(equal)
        ),
    )
}

/// Criteria 1 to 10.
pub fn run_criteria(seed: u64) -> (AcceptanceReport, Timings) {
    let mut t = Timings::new();
    let mut criteria = vec![
        timed(1, &mut t, sigma0_table),
        timed(2, &mut t, sigma1_table),
        timed(3, &mut t, || spectra(seed)),
        timed(4, &mut t, identities),
    ];
    let start = Instant::now();
    let p1 = run_grid(prop1_jobs(seed));
    criteria.push(summarize(5, "prop1 replay", &p1));
    t.push((5, start.elapsed()));
    let start = Instant::now();
    let p2 = run_grid(prop2_jobs(seed));
    criteria.push(summarize(6, "prop2 replay", &p2));
    t.push((6, start.elapsed()));
    let start = Instant::now();
    let th = run_grid(chain_jobs(seed));
    criteria.push(agreement(&[&p1, &p2, &th]));
    t.push((7, start.elapsed()));
    criteria.push(timed(8, &mut t, coverage));
    criteria.push(timed(9, &mut t, density));
    criteria.push(timed(10, &mut t, strict_inequality));
    (AcceptanceReport { seed, criteria }, t)
}

/// The whole suite: criteria 1 to 10 twice, then criterion 11 comparing the two reports.
pub fn run_all(seed: u64) -> (AcceptanceReport, Timings) {
    let start = Instant::now();
    let (mut first, mut timings) = run_criteria(seed);
    let (second, _) = run_criteria(seed);
    let (a, b) = (serde_json::to_vec(&first).expect("report serializes"), serde_json::to_vec(&second).expect("report serializes"));
    first.criteria.push(criterion(
        11,
        "determinism",
        a == b,
        format!("two runs {} ({} bytes)", if a == b { "byte-identical" } else { "differ" }, a.len()),
    ));
    timings.push((11, start.elapsed()));
    (first, timings)
}
