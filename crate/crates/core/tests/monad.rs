use p3bundles::chern::{ChernCharacter, ChernClasses};
use p3bundles::monad::{
    cohomology_chern, component_dimension, expected_dimension, h1_profile, intermediate_dims, middle_term_checks,
    monad_graph, recover, sigma0_strict, spectrum, MonadError, MonadSeries, MonadSpec, Regime, Spectrum,
};
use proptest::prelude::*;

use MonadSeries::{Sigma0, Sigma1};

fn spec(series: MonadSeries, m: i64, eps: i64, a: i64) -> MonadSpec {
    MonadSpec::any(series, m, eps, a).unwrap()
}

#[test]
fn dimensions_of_small_examples() {
    assert_eq!(component_dimension(&spec(Sigma0, 1, 0, 2)), 45);
    assert_eq!(component_dimension(&spec(Sigma1, 1, 0, 4)), 187);
    assert_eq!(component_dimension(&spec(Sigma1, 1, 1, 5)), 290);
    assert_eq!(expected_dimension(-1, 24), 187);
}

#[test]
fn profile_values() {
    let p = h1_profile(&spec(Sigma0, 1, 0, 2), -1, -1, 0).unwrap();
    assert_eq!(p[&-1], 6);
    let p = h1_profile(&spec(Sigma0, 1, 0, 4), -1, -1, 0).unwrap();
    assert_eq!(p[&-1], 22);
}

#[test]
fn positive_twists_stay_unpinned() {
    match h1_profile(&spec(Sigma0, 1, 0, 2), 1, 1, 0) {
        Err(MonadError::Unpinned(1, _)) => {}
        other => panic!("expected Unpinned(1), got {other:?}"),
    }
}

#[test]
fn spectra_of_small_examples() {
    let cases = [
        (Sigma0, (1, 0, 2), "(-1,0^4,1)"),
        (Sigma0, (1, 0, 4), "(-3,-2^2,-1^3,0^6,1^3,2^2,3)"),
        (Sigma1, (1, 0, 4), "(-4,-3^2,-2^3,-1^6,0^6,1^3,2^2,3)"),
    ];
    for (series, (m, eps, a), want) in cases {
        let s = spectrum(&spec(series, m, eps, a), 0).unwrap();
        assert_eq!(s.to_string(), want);
        assert!(s.is_symmetric());
    }
}

#[test]
fn strict_spectra_have_the_right_shape() {
    for (series, m, eps, a) in [(Sigma0, 1, 0, 5), (Sigma0, 2, 1, 7), (Sigma1, 1, 0, 5), (Sigma1, 1, 1, 7)] {
        let sp = spec(series, m, eps, a);
        let s = spectrum(&sp, 3).unwrap();
        assert_eq!(s.len() as i64, sp.n());
        assert!(s.is_symmetric());
        assert_eq!(s.c1, sp.c1());
    }
}

#[test]
fn inconsistent_profiles_are_rejected() {
    let profile = [(-3, 0), (-2, 5), (-1, 6)].into_iter().collect();
    assert!(matches!(recover(&profile, 0, 6), Err(MonadError::InconsistentProfile(_))));
    let never_zero = [(-2, 1), (-1, 6)].into_iter().collect();
    assert!(matches!(recover(&never_zero, 0, 6), Err(MonadError::InconsistentProfile(_))));
}

#[test]
fn euler_characteristic_of_pinned_tables() {
    for sp in [spec(Sigma0, 1, 0, 5), spec(Sigma1, 1, 0, 5), spec(Sigma0, 2, 0, 2)] {
        let (_, graph) = monad_graph(&sp, 0).unwrap();
        let ch = ChernCharacter::from_classes(cohomology_chern(&sp).unwrap());
        let mut checked = 0;
        for t in -sp.a - 6..=sp.a + 2 {
            let row: Option<Vec<u64>> = (0..4).map(|d| graph.lookup("E", t, d).and_then(|iv| iv.pinned())).collect();
            if let Some(h) = row {
                let alt = h[0] as i64 - h[1] as i64 + h[2] as i64 - h[3] as i64;
                assert_eq!(alt, ch.twist(t).euler_characteristic().unwrap(), "{sp} at {t}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn middle_term_of_sigma0() {
    let r = middle_term_checks(&spec(Sigma0, 1, 0, 5), 0).unwrap();
    assert!(r.all_hold(), "{}", r.to_text());
    assert_eq!(r.instanton_as_printed, Some(true));
    assert_eq!(r.instanton_without_h1, Some(true));
    let h0 = r.checks.iter().find(|c| c.label.starts_with("h0(E(a))")).unwrap();
    assert_eq!(h0.expected, 210);
}

#[test]
fn middle_term_of_sigma1() {
    let r = middle_term_checks(&spec(Sigma1, 1, 0, 5), 0).unwrap();
    assert!(r.all_hold(), "{}", r.to_text());
    assert_eq!(r.instanton_as_printed, None);
}

#[test]
fn three_conics_cannot_give_h2_vanishing_at_a_equal_five() {
    // h²(E₂(−5)) = h¹(I_Y(3)) ≥ h⁰(O_Y(3)) − h⁰(O(3)) = 21 − 20
    let r = middle_term_checks(&spec(Sigma1, 1, 1, 5), 0).unwrap();
    let c = r.checks.iter().find(|c| c.label == "h2(E(-a)) = 0").unwrap();
    assert!(!c.holds);
    assert!(c.interval.lo >= 1);
}

#[test]
fn intermediate_examples() {
    let r = intermediate_dims(&spec(Sigma0, 1, 0, 5)).unwrap();
    let get = |r: &p3bundles::monad::IdentityReport, l: &str| r.checks.iter().find(|c| c.label == l).unwrap().derived;
    assert_eq!(get(&r, "h1 E1 E2"), 4);
    assert_eq!(get(&r, "h1 End E"), 18);
    let r = intermediate_dims(&spec(Sigma1, 1, 0, 5)).unwrap();
    assert_eq!(get(&r, "h1 S2 E(1)"), 32);
}

#[test]
fn chern_classes_of_tabulated_specs() {
    assert_eq!(cohomology_chern(&spec(Sigma0, 1, 0, 2)).unwrap(), ChernClasses::new(2, 0, 6, 0));
    assert_eq!(cohomology_chern(&spec(Sigma1, 1, 0, 4)).unwrap(), ChernClasses::new(2, -1, 24, 0));
}

proptest! {
    #[test]
    fn sigma0_chern_data(m in 1i64..8, eps in 0i64..2, a in 2i64..30) {
        let s = MonadSpec { series: Sigma0, m, eps, a, regime: Regime::Strict };
        let c = cohomology_chern(&s).unwrap();
        prop_assert_eq!((c.rank, c.c1, c.c3), (2, 0, 0));
        prop_assert_eq!(c.c2 - a * a, 2 * m + eps);
    }

    #[test]
    fn sigma1_chern_data(m in 1i64..8, eps in 0i64..2, a in 2i64..30) {
        let s = MonadSpec { series: Sigma1, m, eps, a, regime: Regime::Strict };
        let c = cohomology_chern(&s).unwrap();
        prop_assert_eq!((c.rank, c.c1, c.c3), (2, -1, 0));
        prop_assert_eq!(c.c2, 4 * m + 2 * eps + a * (a + 1));
    }

    #[test]
    fn strict_sigma0_exceeds_expected(m in 1i64..30, eps in 0i64..2, a in 5i64..=20) {
        prop_assume!(sigma0_strict(m, eps, a));
        let s = MonadSpec::new(Sigma0, m, eps, a, Regime::Strict).unwrap();
        prop_assert!(component_dimension(&s) > expected_dimension(0, s.n()));
    }

    #[test]
    fn identities_hold(m in 1i64..=6, eps in 0i64..2, a in 5i64..=15, sigma1 in any::<bool>()) {
        let series = if sigma1 { Sigma1 } else { Sigma0 };
        let s = MonadSpec { series, m, eps, a, regime: Regime::Strict };
        let r = intermediate_dims(&s).unwrap();
        prop_assert!(r.all_agree(), "{}", r.to_text());
    }

    #[test]
    fn spectra_regenerate_their_profiles(c1 in -1i64..=0, half in proptest::collection::vec(0i64..5, 1..8)) {
        let mut entries = Vec::new();
        for &k in &half {
            entries.push(k);
            if c1 == -1 { entries.push(-1 - k) } else if k > 0 { entries.push(-k) }
        }
        let s = Spectrum::new(c1, entries);
        let lo = -(s.entries.iter().map(|k| k.abs()).max().unwrap_or(0)) - 3;
        let profile = (lo..=-1).map(|l| (l, s.h1(l))).collect();
        let back = recover(&profile, c1, s.len() as u64).unwrap();
        prop_assert_eq!(back, s);
    }
}
