use p3bundles::engine::{
    parse_script, run_source, DeductionGraph, DimInterval, EngineError, FactTag, NoOracle, Relation, Report, RunOptions,
    Schedule, ScriptError, SheafKind,
};

fn run(src: &str, params: &[(&str, i64)]) -> Result<(Report, DeductionGraph), ScriptError> {
    run_source("test", src, &RunOptions::with_params(params), &mut NoOracle)
}

const KUNNETH: &str = "
param a m
node O p3
node IY sheaf
node Q quadric -m-1 0
triple T O -2 IY 0 Q 0
chern IY 1 0 0 0
twist T a+1
assert h1 IY a+1 = 0
";

#[test]
fn kunneth_triple_pins_vanishing() {
    // the ideal of m+1 ruling lines: ch(I_Y) = ch(O(-2)) + ch(O_S(-m-1, 0)); drop the explicit chern line
    let src = KUNNETH.replace("chern IY 1 0 0 0\n", "");
    let (report, graph) = run(&src, &[("a", 2), ("m", 1)]).unwrap();
    assert!(report.all_entailed());
    assert_eq!(graph.lookup("IY", 3, 1), Some(DimInterval::ZERO));
    // χ(I_Y(3)) = 20 - 2·4 = 12, all in h⁰
    assert_eq!(graph.lookup("IY", 3, 0), Some(DimInterval::exact(12)));
}

#[test]
fn wrong_character_is_rejected() {
    let err = run(KUNNETH, &[("a", 2), ("m", 1)]).unwrap_err();
    assert!(matches!(err, ScriptError::Engine { source: EngineError::ChernMismatch { .. }, .. }), "{err}");
}

#[test]
fn direct_sum_vanishing() {
    let src = "
node E1 bundle
node E2 bundle
sum E E1 0 E2 0
fact ORACLE h1 E1 2 = 0
fact STABILITY h1 E2 2 = 0
instance E 2
assert h1 E 2 = 0
";
    // ORACLE facts need a provider; use an ASSUMED stand-in for this unit check
    let src = src.replace("ORACLE", "ASSUMED");
    let (report, _) = run(&src, &[]).unwrap();
    assert!(report.all_entailed());
    assert!(report.assertions[0].chain.iter().any(|s| s.contains("R6")));
}

#[test]
fn false_fact_is_a_contradiction() {
    let err = run("node O p3\nfact ASSUMED h1 O -1 = 1\n", &[]).unwrap_err();
    assert!(matches!(err, ScriptError::Engine { source: EngineError::Contradiction { degree: 1, .. }, .. }), "{err}");
}

#[test]
fn empty_script() {
    let (report, _) = run("# nothing\n\n", &[]).unwrap();
    assert!(report.assertions.is_empty());
    assert!(report.all_entailed());
}

#[test]
fn unentailed_assertion_fails_with_trace() {
    let err = run("node F sheaf\ninstance F 0\nassert h1 F 0 = 0\n", &[]).unwrap_err();
    match err {
        ScriptError::AssertionNotEntailed { line, report, .. } => {
            assert_eq!(line, 3);
            assert!(!report.all_entailed());
        }
        other => panic!("{other}"),
    }
}

#[test]
fn oracle_facts_need_a_provider() {
    let src = "config Y ruling-lines 2\nnode IY ideal Y\nfact ORACLE h1 IY 3\n";
    assert!(matches!(run(src, &[]).unwrap_err(), ScriptError::Oracle { line: 3, .. }));
}

#[test]
fn serre_duality_on_rank_two() {
    // instanton-like: c1 = 0, so h²(E(-a)) = h¹(E(a-4))
    let src = "
node E bundle
chern E 2 0 3 0
fact ASSUMED h1 E 1 = 0
instance E -5
assert h2 E -5 = 0
";
    let (report, _) = run(src, &[]).unwrap();
    assert!(report.all_entailed());
}

#[test]
fn twisted_duality_shift_follows_c1() {
    let src = "
node E bundle
chern E 2 -1 2 0
fact ASSUMED h1 E 2 = 0
instance E -5
assert h2 E -5 = 0
";
    // c1 = -1: E^∨ = E(1), so h²(E(-5)) = h¹(E(5 - 4 + 1))
    let (report, _) = run(src, &[]).unwrap();
    assert!(report.all_entailed());
}

fn sample_graph() -> DeductionGraph {
    let src = "
param a m
node O p3
node IY sheaf
node Q quadric -m-1 0
node E bundle
triple T O -2 IY 0 Q 0
triple C O -1 E 0 IY 1
twist T a+1
twist T a-3
twist C a
twist C a-4
twist C -a
twist T -a+1
";
    let stmts = parse_script(src).unwrap();
    assert!(!stmts.is_empty());
    let (_, g) = run(src, &[("a", 6), ("m", 1)]).unwrap();
    g
}

#[test]
fn fixpoint_is_schedule_independent_and_idempotent() {
    let src = "
param a m
node O p3
node IY sheaf
node Q quadric -m-1 0
node E bundle
triple T O -2 IY 0 Q 0
triple C O -1 E 0 IY 1
twist T a+1
twist T a-3
twist C a
twist C a-4
twist C -a
twist T -a+1
twist C -a-4
";
    for a in 5..9 {
        for m in 1..=a - 4 {
            let params = [("a", a), ("m", m)];
            let mut fwd = RunOptions::with_params(&params);
            fwd.schedule = Schedule::Forward;
            let mut rev = fwd.clone();
            rev.schedule = Schedule::Reverse;
            let (_, g1) = run_source("t", src, &fwd, &mut NoOracle).unwrap();
            let (_, g2) = run_source("t", src, &rev, &mut NoOracle).unwrap();
            assert_eq!(g1.snapshot(), g2.snapshot());
            assert_eq!(g1.cuts_snapshot(), g2.cuts_snapshot());
            let mut again = g1.clone();
            again.propagate().unwrap();
            assert_eq!(again.snapshot(), g1.snapshot());
            // the vanishing chain of the 't Hooft bundle
            assert_eq!(g1.lookup("E", a - 4, 1), Some(DimInterval::ZERO));
            assert_eq!(g1.lookup("E", -a, 2), Some(DimInterval::ZERO));
        }
    }
    let g = sample_graph();
    assert!(g.snapshot().len() > 5);
}

#[test]
fn graph_api_without_scripts() {
    let mut g = DeductionGraph::new();
    let o = g.add_family("O", SheafKind::LineBundle).unwrap();
    assert!(g.add_family("O", SheafKind::LineBundle).is_err());
    let f = g.add_family("F", SheafKind::Unknown { locally_free: false }).unwrap();
    let t = g.add_triple("T", [(o, 0), (f, 0), (o, 1)]).unwrap();
    g.twist_triple(t, 0).unwrap();
    let mut bad = g.clone();
    g.propagate().unwrap();
    // every other term vanishes, so h⁰(F) = h⁰(O) + h⁰(O(1))
    assert_eq!(g.lookup("F", 0, 0), Some(DimInterval::exact(5)));
    assert_eq!(g.lookup("F", 0, 3), Some(DimInterval::ZERO));
    bad.add_fact(f, 0, 0, Relation::Le, 3, FactTag::Assumed, "too small").unwrap();
    assert!(matches!(bad.propagate(), Err(EngineError::Contradiction { .. })));
}
