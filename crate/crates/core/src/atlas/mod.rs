//! Enumeration of the component series and the statements made about them.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::monad::{
    component_dimension, expected_dimension, sigma0_strict, sigma1_strict, MonadSeries, MonadSpec, Regime, Spectrum,
};

mod section5;

pub use section5::{Section5Row, SECTION5};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeriesLabel {
    Sigma0,
    Sigma1,
    Instanton,
    Hartshorne,
}

impl From<MonadSeries> for SeriesLabel {
    fn from(s: MonadSeries) -> Self {
        match s {
            MonadSeries::Sigma0 => SeriesLabel::Sigma0,
            MonadSeries::Sigma1 => SeriesLabel::Sigma1,
        }
    }
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesLabel::Sigma0 => "SIGMA0",
            SeriesLabel::Sigma1 => "SIGMA1",
            SeriesLabel::Instanton => "INSTANTON",
            SeriesLabel::Hartshorne => "HARTSHORNE",
        })
    }
}

impl std::str::FromStr for SeriesLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sigma0" => Ok(SeriesLabel::Sigma0),
            "sigma1" => Ok(SeriesLabel::Sigma1),
            "instanton" => Ok(SeriesLabel::Instanton),
            "hartshorne" => Ok(SeriesLabel::Hartshorne),
            other => Err(format!("unknown series `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Flag {
    /// A printed value disagrees with the formula or with its own row.
    PaperTypoSuspect,
    ExtendedRegime,
    /// Dimension equal to the expected one.
    ExpectedAttained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Params {
    pub m: i64,
    pub eps: i64,
    pub a: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub series: SeriesLabel,
    pub e: i64,
    pub n: i64,
    pub params: Option<Params>,
    pub dimension: i64,
    pub expected: i64,
    pub spectrum: Option<Spectrum>,
    pub flags: BTreeSet<Flag>,
    /// Free-text remark, e.g. the printed value behind a flag.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ComponentRecord {
    fn monad(spec: &MonadSpec) -> Self {
        let e = spec.series.c1();
        let n = spec.n();
        let dimension = component_dimension(spec);
        let expected = expected_dimension(e, n);
        let mut flags = BTreeSet::new();
        if spec.regime == Regime::Extended {
            flags.insert(Flag::ExtendedRegime);
        }
        if dimension == expected {
            flags.insert(Flag::ExpectedAttained);
        }
        ComponentRecord {
            series: spec.series.into(),
            e,
            n,
            params: Some(Params { m: spec.m, eps: spec.eps, a: spec.a }),
            dimension,
            expected,
            spectrum: None,
            flags,
            note: None,
        }
    }

    /// `I_n`, of dimension `8n − 3`.
    pub fn instanton(n: i64) -> Self {
        let d = expected_dimension(0, n);
        ComponentRecord {
            series: SeriesLabel::Instanton,
            e: 0,
            n,
            params: None,
            dimension: d,
            expected: d,
            spectrum: None,
            flags: [Flag::ExpectedAttained].into(),
            note: None,
        }
    }

    /// `B₀(−1, 2m)`, of dimension `16m − 5`.
    pub fn hartshorne(m: i64) -> Self {
        ComponentRecord {
            series: SeriesLabel::Hartshorne,
            e: -1,
            n: 2 * m,
            params: None,
            dimension: 16 * m - 5,
            expected: expected_dimension(-1, 2 * m),
            spectrum: None,
            flags: [Flag::ExpectedAttained].into(),
            note: None,
        }
    }

    fn sort_key(&self) -> (i64, SeriesLabel, i64, i64, i64) {
        let p = self.params.unwrap_or(Params { m: 0, eps: 0, a: 0 });
        (self.n, self.series, p.a, p.m, p.eps)
    }
}

/// Strict parameter triples `(m, ε, a)` of one monad series with `n ≤ n_max`.
fn strict_params(series: MonadSeries, n_max: i64) -> Vec<(i64, MonadSpec)> {
    let n_of = |m: i64, eps: i64, a: i64| match series {
        MonadSeries::Sigma0 => 2 * m + eps + a * a,
        MonadSeries::Sigma1 => 4 * m + 2 * eps + a * (a + 1),
    };
    let strict = match series {
        MonadSeries::Sigma0 => sigma0_strict,
        MonadSeries::Sigma1 => sigma1_strict,
    };
    let a_max = (1..).take_while(|&a| n_of(1, 0, a) <= n_max).last().unwrap_or(0);
    let mut out: Vec<(i64, MonadSpec)> = (5..=a_max)
        .into_par_iter()
        .flat_map_iter(|a| {
            (1..)
                .take_while(move |&m| n_of(m, 0, a) <= n_max)
                .flat_map(move |m| [0, 1].into_iter().map(move |eps| (m, eps)))
                .filter(move |&(m, eps)| n_of(m, eps, a) <= n_max && strict(m, eps, a))
                .map(move |(m, eps)| (n_of(m, eps, a), MonadSpec { series, m, eps, a, regime: Regime::Strict }))
        })
        .collect();
    out.sort_by_key(|(n, s)| (*n, s.a, s.m, s.eps));
    out
}

/// Every record of the series with `n ≤ n_max`, ordered by `n`, `a`, `m`, `ε`.
pub fn enumerate(series: SeriesLabel, n_max: i64) -> Vec<ComponentRecord> {
    match series {
        SeriesLabel::Sigma0 => strict_params(MonadSeries::Sigma0, n_max).iter().map(|(_, s)| ComponentRecord::monad(s)).collect(),
        SeriesLabel::Sigma1 => strict_params(MonadSeries::Sigma1, n_max).iter().map(|(_, s)| ComponentRecord::monad(s)).collect(),
        SeriesLabel::Instanton => (1..=n_max).map(ComponentRecord::instanton).collect(),
        SeriesLabel::Hartshorne => (1..=n_max / 2).map(ComponentRecord::hartshorne).collect(),
    }
}

/// Smallest and largest `n` of strict `Σ₀` records with the given `a ≥ 12`; every value in between occurs.
pub fn sigma0_range(a: i64) -> (i64, i64) {
    let ns = strict_params(MonadSeries::Sigma0, (a + 2) * (a + 2)).into_iter().filter(|(_, s)| s.a == a).map(|(n, _)| n);
    let (lo, hi) = ns.fold((i64::MAX, i64::MIN), |(lo, hi), n| (lo.min(n), hi.max(n)));
    (lo, hi)
}

/// The `n ∈ [lo, hi]` carried by no strict `Σ₀` record.
pub fn coverage_sigma0(lo: i64, hi: i64) -> Vec<i64> {
    if hi < lo {
        return Vec::new();
    }
    let covered: BTreeSet<i64> = strict_params(MonadSeries::Sigma0, hi).into_iter().map(|(n, _)| n).collect();
    (lo..=hi).filter(|n| !covered.contains(n)).collect()
}

/// `|N ∩ {2, 4, …, 2r}| / r` for the set `N` of strict `Σ₁` values of `n`.
pub fn density_sigma1(r: i64) -> BigRational {
    if r < 1 {
        return BigRational::from_integer(BigInt::from(0));
    }
    let hits: BTreeSet<i64> = strict_params(MonadSeries::Sigma1, 2 * r).into_iter().map(|(n, _)| n).collect();
    BigRational::new(BigInt::from(hits.len()), BigInt::from(r))
}

/// The printed tables, with recomputed dimensions and flags for every discrepancy.
pub fn curated_section5() -> Vec<ComponentRecord> {
    SECTION5
        .iter()
        .map(|row| {
            let spec = MonadSpec::any(row.series, row.m, row.eps, row.a).expect("tabulated parameters are valid");
            let mut rec = ComponentRecord::monad(&spec);
            rec.spectrum = Some(Spectrum::parse(spec.c1(), row.spectrum).expect("tabulated spectrum parses"));
            let mut notes = Vec::new();
            if rec.n != row.n {
                notes.push(format!("n printed as {}", row.n));
            }
            if rec.dimension != row.printed_dimension {
                notes.push(format!("dimension printed as {}", row.printed_dimension));
            }
            if row.printed_subscript != row.n {
                notes.push(format!("dimension labelled M_{}", row.printed_subscript));
            }
            if row.printed_expected != (rec.dimension == rec.expected) {
                notes.push(format!(
                    "printed as {} than expected",
                    if row.printed_expected { "equal to" } else { "larger" }
                ));
            }
            if !notes.is_empty() {
                rec.flags.insert(Flag::PaperTypoSuspect);
                rec.note = Some(format!("{}: {}", row.row, notes.join("; ")));
            } else {
                rec.note = Some(row.row.to_string());
            }
            rec
        })
        .collect()
}

/// Series named in the literature without a dimension formula here.
pub fn name_stubs(e: i64, n: i64) -> Vec<&'static str> {
    let mut out = Vec::new();
    if e == 0 && n % 2 == 1 {
        out.push("Barth-Hulek");
    }
    if e == 0 || e == -1 {
        out.extend(["Vedernikov", "Rao", "Ein"]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub e: i64,
    pub n: i64,
    pub records: Vec<ComponentRecord>,
    /// Known series listed by name only.
    pub stubs: Vec<String>,
    /// Pairs `(i, j)` of record indices with `dimension[i] > dimension[j]`.
    pub separations: Vec<(usize, usize)>,
}

/// All known records at `(e, n)`.
pub fn compare(e: i64, n: i64) -> Comparison {
    let mut records: Vec<ComponentRecord> = match e {
        0 => {
            let mut v: Vec<_> = enumerate(SeriesLabel::Sigma0, n).into_iter().filter(|r| r.n == n).collect();
            v.push(ComponentRecord::instanton(n));
            v
        }
        -1 => {
            let mut v: Vec<_> = enumerate(SeriesLabel::Sigma1, n).into_iter().filter(|r| r.n == n).collect();
            if n % 2 == 0 {
                v.push(ComponentRecord::hartshorne(n / 2));
            }
            v
        }
        _ => Vec::new(),
    };
    for rec in curated_section5() {
        if rec.e == e && rec.n == n && !records.iter().any(|r| r.series == rec.series && r.params == rec.params) {
            records.push(rec);
        }
    }
    records.sort_by_key(ComponentRecord::sort_key);
    let mut separations = Vec::new();
    for (i, x) in records.iter().enumerate() {
        for (j, y) in records.iter().enumerate() {
            if x.series != y.series && x.dimension > y.dimension {
                separations.push((i, j));
            }
        }
    }
    Comparison { e, n, records, stubs: name_stubs(e, n).into_iter().map(String::from).collect(), separations }
}

pub const TSV_COLUMNS: &str = "series\te\tn\tm\teps\ta\tdimension\texpected\tspectrum\tflags";

fn flag_names(flags: &BTreeSet<Flag>) -> String {
    flags
        .iter()
        .map(|f| match f {
            Flag::PaperTypoSuspect => "PAPER_TYPO_SUSPECT",
            Flag::ExtendedRegime => "EXTENDED_REGIME",
            Flag::ExpectedAttained => "EXPECTED_ATTAINED",
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// One row per record under [`TSV_COLUMNS`]; absent fields are `-`.
pub fn to_tsv(records: &[ComponentRecord]) -> String {
    let mut out = String::from(TSV_COLUMNS);
    out.push('\n');
    for r in records {
        let (m, eps, a) = match r.params {
            Some(p) => (p.m.to_string(), p.eps.to_string(), p.a.to_string()),
            None => ("-".into(), "-".into(), "-".into()),
        };
        let spectrum = r.spectrum.as_ref().map_or("-".to_string(), |s| s.to_string());
        let flags = flag_names(&r.flags);
        let flags = if flags.is_empty() { "-".to_string() } else { flags };
        out.push_str(&format!(
            "{}\t{}\t{}\t{m}\t{eps}\t{a}\t{}\t{}\t{spectrum}\t{flags}\n",
            r.series, r.e, r.n, r.dimension, r.expected
        ));
    }
    out
}

pub fn to_json(records: &[ComponentRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_strict_sigma1_is_34() {
        let recs = enumerate(SeriesLabel::Sigma1, 40);
        assert_eq!(recs[0].n, 34);
        assert_eq!(recs[0].params, Some(Params { m: 1, eps: 0, a: 5 }));
    }

    #[test]
    fn density_of_seventeen() {
        assert_eq!(density_sigma1(17), BigRational::new(1.into(), 17.into()));
        assert_eq!(density_sigma1(1), BigRational::from_integer(0.into()));
    }
}
