use std::collections::BTreeSet;

use num_rational::BigRational;
use p3bundles::atlas::{
    compare, coverage_sigma0, curated_section5, density_sigma1, enumerate, sigma0_range, to_json, to_tsv,
    ComponentRecord, Flag, Params, SeriesLabel, TSV_COLUMNS,
};
use p3bundles::monad::{component_dimension, MonadSeries, MonadSpec};
use proptest::prelude::*;

fn params(r: &ComponentRecord) -> (i64, i64, i64) {
    let p = r.params.unwrap();
    (p.m, p.eps, p.a)
}

#[test]
fn sigma0_reaches_146_at_a_equal_12() {
    let recs = enumerate(SeriesLabel::Sigma0, 150);
    assert!(recs.iter().any(|r| r.n == 146 && params(r) == (1, 0, 12)));
    let small = enumerate(SeriesLabel::Sigma0, 30);
    let r = small.iter().find(|r| params(r) == (1, 0, 5)).unwrap();
    assert_eq!((r.n, r.dimension), (27, 223));
}

#[test]
fn sigma1_starts_at_34() {
    let recs = enumerate(SeriesLabel::Sigma1, 40);
    assert_eq!(recs.first().map(|r| (r.n, params(r))), Some((34, (1, 0, 5))));
}

#[test]
fn coverage_from_146() {
    assert!(coverage_sigma0(146, 10_000).is_empty());
    assert!(coverage_sigma0(147, 147).is_empty());
    let low = coverage_sigma0(1, 30);
    assert!(!low.contains(&27));
    assert!(low.contains(&30));
}

#[test]
fn interval_endpoints_are_attained() {
    for a in 12..40 {
        let (lo, hi) = sigma0_range(a);
        assert_eq!((lo, hi), (a * a + 2, (a + 1) * (a + 1) + 1));
        let ns: BTreeSet<i64> =
            enumerate(SeriesLabel::Sigma0, hi).into_iter().filter(|r| r.params.unwrap().a == a).map(|r| r.n).collect();
        assert_eq!(ns, (lo..=hi).collect());
    }
}

#[test]
fn density_examples() {
    assert_eq!(density_sigma1(17), BigRational::new(1.into(), 17.into()));
    assert_eq!(density_sigma1(1), BigRational::from_integer(0.into()));
    let d: Vec<BigRational> = [1_000, 10_000, 100_000].into_iter().map(density_sigma1).collect();
    assert!(d.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn curated_rows() {
    let rows = curated_section5();
    assert_eq!(rows.len(), 12);
    let n8 = rows.iter().find(|r| r.n == 8).unwrap();
    assert_eq!(n8.dimension, 61);
    assert_eq!(n8.spectrum.as_ref().unwrap().to_string(), "(-1,0^6,1)");
    let n34 = rows.iter().find(|r| r.n == 34).unwrap();
    assert_eq!((n34.dimension, n34.expected), (281, 267));
    let n36 = rows.iter().find(|r| r.n == 36).unwrap();
    assert_eq!(n36.dimension, 290);
    assert!(n36.flags.contains(&Flag::PaperTypoSuspect));
    let n38 = rows.iter().find(|r| r.n == 38).unwrap();
    assert_eq!((n38.dimension, n38.expected), (299, 299));
    for r in &rows {
        let s = r.spectrum.as_ref().unwrap();
        assert_eq!(s.len() as i64, r.n);
        assert!(s.is_symmetric());
        let p = r.params.unwrap();
        let series = if r.e == 0 { MonadSeries::Sigma0 } else { MonadSeries::Sigma1 };
        let spec = MonadSpec::any(series, p.m, p.eps, p.a).unwrap();
        assert_eq!(r.dimension, component_dimension(&spec));
    }
}

#[test]
fn comparisons() {
    let c = compare(0, 146);
    let inst = c.records.iter().find(|r| r.series == SeriesLabel::Instanton).unwrap();
    assert_eq!(inst.dimension, 1165);
    assert!(c.records.iter().filter(|r| r.series == SeriesLabel::Sigma0).all(|r| r.dimension > 1165));
    assert!(!c.separations.is_empty());

    let c = compare(-1, 24);
    let dims: Vec<(SeriesLabel, i64)> = c.records.iter().map(|r| (r.series, r.dimension)).collect();
    assert!(dims.contains(&(SeriesLabel::Sigma1, 187)));
    assert!(dims.contains(&(SeriesLabel::Hartshorne, 187)));
    assert!(c.separations.is_empty());

    let c = compare(0, 5);
    assert_eq!(c.records.len(), 1);
    assert_eq!(c.records[0].series, SeriesLabel::Instanton);
    assert!(c.stubs.iter().any(|s| s == "Ein"));
}

#[test]
fn table_output() {
    let recs = enumerate(SeriesLabel::Sigma0, 30);
    let tsv = to_tsv(&recs);
    assert_eq!(tsv.lines().next(), Some(TSV_COLUMNS));
    assert_eq!(tsv.lines().count(), recs.len() + 1);
    let back: Vec<ComponentRecord> = serde_json::from_str(&to_json(&recs)).unwrap();
    assert_eq!(back, recs);
}

#[test]
fn records_meet_their_bounds() {
    for series in [SeriesLabel::Sigma0, SeriesLabel::Sigma1, SeriesLabel::Instanton, SeriesLabel::Hartshorne] {
        for r in enumerate(series, 2_000) {
            assert!(r.dimension >= r.expected, "{r:?}");
        }
    }
    assert!(enumerate(SeriesLabel::Hartshorne, 30).iter().all(|r| r.dimension == 8 * r.n - 5));
}

fn brute_force(series: MonadSeries, n_max: i64) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for a in 0..=n_max {
        for m in 0..=n_max {
            for eps in 0..2 {
                let Ok(s) = MonadSpec::new(series, m, eps, a, p3bundles::monad::Regime::Strict) else { continue };
                if s.n() <= n_max {
                    out.push((s.n(), a, m, eps));
                }
            }
        }
    }
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn enumeration_matches_brute_force(n_max in 1i64..220, sigma1 in any::<bool>()) {
        let (label, series) = if sigma1 { (SeriesLabel::Sigma1, MonadSeries::Sigma1) } else { (SeriesLabel::Sigma0, MonadSeries::Sigma0) };
        let got: Vec<(i64, i64, i64, i64)> = enumerate(label, n_max)
            .iter()
            .map(|r| { let Params { m, eps, a } = r.params.unwrap(); (r.n, a, m, eps) })
            .collect();
        prop_assert_eq!(got, brute_force(series, n_max));
    }

    #[test]
    fn coverage_agrees_with_enumeration(lo in 1i64..300, len in 0i64..200) {
        let hi = lo + len;
        let ns: BTreeSet<i64> = enumerate(SeriesLabel::Sigma0, hi).into_iter().map(|r| r.n).collect();
        let missing: Vec<i64> = (lo..=hi).filter(|n| !ns.contains(n)).collect();
        prop_assert_eq!(coverage_sigma0(lo, hi), missing);
    }
}
