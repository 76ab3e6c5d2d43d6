use p3bundles::engine::ConfigKind;
use p3bundles::oracle::config::{lines_meet, line_on_quadric, pr2};
use p3bundles::oracle::{
    h0_ideal, h1_ideal, restriction_surjective, sample_config, serre_bundle_h1, Component, Line, LineConfiguration,
    Selection, Series, Source,
};
use proptest::prelude::*;

fn cfg(kind: ConfigKind, count: u64, aux: u64, seed: u64) -> LineConfiguration {
    sample_config(kind, count, aux, seed, "Y").unwrap()
}

#[test]
fn ruling_lines_are_disjoint_on_the_quadric() {
    let c = cfg(ConfigKind::RulingLines, 2, 0, 0);
    assert_eq!(c.lines.len(), 2);
    assert!(c.lines.iter().all(line_on_quadric));
    assert!(!lines_meet(&c.lines[0], &c.lines[1]));
}

#[test]
fn conic_pairs_meet_within_and_not_across() {
    let c = cfg(ConfigKind::ConicPairs, 2, 0, 0);
    c.check().unwrap();
    assert!(lines_meet(&c.lines[0], &c.second[0]));
    assert!(!lines_meet(&c.lines[0], &c.second[1]));
    assert_eq!(c.points.len(), 2);
}

#[test]
fn modification_points_have_distinct_second_projections() {
    let c = cfg(ConfigKind::ModificationLines, 2, 2, 0);
    assert_eq!(c.points.len(), 4);
    for (i, a) in c.points.iter().enumerate() {
        for b in &c.points[i + 1..] {
            let (x, y) = (pr2(a), pr2(b));
            assert_ne!(x.0 * y.1, x.1 * y.0);
        }
    }
}

#[test]
fn single_line_lies_on_two_planes() {
    let l = Line { p: [1, 0, 0, 0], q: [0, 1, 0, 0] };
    let c = LineConfiguration {
        kind: ConfigKind::GeneralLines,
        count: 1,
        aux_count: 0,
        seed: 0,
        label: "L".into(),
        lines: vec![l],
        second: vec![],
        aux: vec![],
        points: vec![],
        transform: None,
    };
    assert_eq!(h0_ideal(&c, "", 1).unwrap(), 2);
    assert_eq!(h1_ideal(&c, "", 1).unwrap(), 0);
}

#[test]
fn two_ruling_lines_in_degree_three() {
    let c = cfg(ConfigKind::RulingLines, 2, 0, 0);
    assert_eq!(h0_ideal(&c, "", 3).unwrap(), 12);
    assert_eq!(h1_ideal(&c, "", 3).unwrap(), 0);
}

#[test]
fn two_conics_impose_independent_conditions_in_degree_four() {
    let c = cfg(ConfigKind::ConicPairs, 2, 0, 0);
    assert_eq!(h1_ideal(&c, "", 4).unwrap(), 0);
}

#[test]
fn ruling_lines_have_the_kunneth_h1() {
    // lines of one ruling: h¹(I_Y(k)) = h¹(O_S(k − count, k))
    for count in 1..=5u64 {
        let c = cfg(ConfigKind::RulingLines, count, 0, 1);
        for k in 0..6i64 {
            let p = k - count as i64;
            let expected = if p <= -2 { (-p - 1) * (k + 1) } else { 0 };
            assert_eq!(h1_ideal(&c, "", k).unwrap(), expected as u64, "count {count}, k {k}");
        }
    }
}

#[test]
fn two_disjoint_conics_lie_on_a_quadric() {
    let c = cfg(ConfigKind::GeneralConics, 2, 0, 5);
    c.check().unwrap();
    assert_eq!(h0_ideal(&c, "", 2).unwrap(), 1);
    assert_eq!(h1_ideal(&c, "", 2).unwrap(), 1);
    assert_eq!(h1_ideal(&c, "", 3).unwrap(), 0);
    assert_eq!(serre_bundle_h1(&c, Series::ConicSerre, -1).unwrap(), 1);
}

#[test]
fn restriction_examples() {
    let c = cfg(ConfigKind::ModificationLines, 2, 5, 0);
    assert!(restriction_surjective(&c, Source::P3(7), "aux").unwrap());
    let two = cfg(ConfigKind::ConicPairs, 2, 0, 0);
    assert!(!restriction_surjective(&two, Source::P3(0), "points").unwrap());
    // a = 2m + 4 with m = 1: forms of bidegree (a − m − 3, a − 2) = (2, 4)
    assert!(restriction_surjective(&two, Source::Quadric(2, 4), "points").unwrap());
    assert!(!restriction_surjective(&two, Source::Quadric(-1, 4), "points").unwrap());
}

#[test]
fn serre_bundle_examples() {
    let y = cfg(ConfigKind::RulingLines, 2, 0, 0);
    assert_eq!(serre_bundle_h1(&y, Series::Thooft, 2).unwrap(), 0);
    assert_eq!(serre_bundle_h1(&y, Series::Thooft, -2).unwrap(), 0);
    assert_eq!(serre_bundle_h1(&y, Series::Thooft, -1).unwrap(), 1);
    let c = cfg(ConfigKind::ConicPairs, 2, 0, 0);
    assert_eq!(serre_bundle_h1(&c, Series::ConicSerre, -6).unwrap(), 0);
    assert!(serre_bundle_h1(&c, Series::Thooft, 0).is_err());
}

#[test]
fn sampling_is_deterministic_and_serializes() {
    let a = cfg(ConfigKind::ConicPairs, 3, 0, 42);
    let b = cfg(ConfigKind::ConicPairs, 3, 0, 42);
    assert_eq!(a, b);
    let json = serde_json::to_string(&a).unwrap();
    let back: LineConfiguration = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    back.check().unwrap();
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(sample_config(ConfigKind::ModificationLines, 2, 0, 0, "Z").is_err());
    assert!(sample_config(ConfigKind::ModificationLines, 2, 6, 0, "Z").is_err());
    let c = cfg(ConfigKind::RulingLines, 2, 0, 0);
    assert!(c.select("aux").is_err());
    match c.select("").unwrap() {
        Selection::Curve(comps) => assert!(comps.iter().all(|x| matches!(x, Component::Line(_)))),
        Selection::Points(_) => panic!("expected a curve"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn h0_drops_when_lines_are_added(seed in 0u64..1000, k in 0i64..5) {
        let c = cfg(ConfigKind::ModificationLines, 2, 2, seed);
        let fewer = h0_ideal(&c, "", k).unwrap();
        let more = h0_ideal(&c, "all", k).unwrap();
        prop_assert!(more <= fewer);
    }

    #[test]
    fn h1_stays_zero_once_zero(seed in 0u64..1000, count in 1u64..5) {
        let c = cfg(ConfigKind::GeneralLines, count, 0, seed);
        let vals: Vec<u64> = (0..7).map(|k| h1_ideal(&c, "", k).unwrap()).collect();
        if let Some(first) = vals.iter().position(|&v| v == 0) {
            prop_assert!(vals[first..].iter().all(|&v| v == 0), "{vals:?}");
        }
    }

    #[test]
    fn every_seed_satisfies_its_invariants(seed in 0u64..10_000, count in 1u64..5, d in 1u64..6) {
        for (kind, aux) in [
            (ConfigKind::RulingLines, 0),
            (ConfigKind::GeneralLines, 0),
            (ConfigKind::ConicPairs, 0),
            (ConfigKind::GeneralConics, 0),
            (ConfigKind::ModificationLines, d),
        ] {
            let c = sample_config(kind, count, aux, seed, "X").unwrap();
            prop_assert!(c.check().is_ok());
        }
    }
}
