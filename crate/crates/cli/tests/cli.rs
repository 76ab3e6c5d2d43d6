use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p3bundles")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_prop1_passes() {
    let o = run(&["verify", "prop1", "--m", "1", "--eps", "0", "--a", "5", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("# seed 0"));
    assert!(out.contains("0 mismatches"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_outside_the_range_fails_with_a_trace() {
    let o = run(&["verify", "prop1", "--m", "9", "--eps", "0", "--a", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL line"));
    assert!(out.contains(" by "));
}

#[test]
fn enumerate_contains_146() {
    let o = run(&["series", "enumerate", "--series", "sigma0", "--n-max", "150", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("SIGMA0\t0\t146\t")));
}

#[test]
fn spectrum_example() {
    for args in [&["monad", "spectrum"][..], &["spectrum"][..]] {
        let mut a = args.to_vec();
        a.extend(["--series", "sigma0", "--m", "1", "--eps", "0", "--a", "2"]);
        let o = run(&a);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).lines().any(|l| l == "(-1,0^4,1)"));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["monad", "chern", "--series", "sigma7", "--m", "1", "--eps", "0", "--a", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "prop3"]).status.code(), Some(2));
    assert_eq!(run(&["monad", "dims", "--series", "sigma0", "--m", "0", "--eps", "0", "--a", "5"]).status.code(), Some(2));
    assert_eq!(run(&["series", "coverage", "--lo", "10", "--hi", "5"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn failing_middle_term_check_exits_1() {
    let o = run(&["monad", "dims", "--series", "sigma1", "--m", "1", "--eps", "1", "--a", "5", "--middle"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["monad", "dims", "--series", "sigma1", "--m", "1", "--eps", "0", "--a", "5", "--middle"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let cmds: [&[&str]; 4] = [
        &["verify", "prop2", "--m", "1", "--eps", "0", "--a", "6", "--seed", "3", "--format", "json"],
        &["oracle", "ideal", "--kind", "conic-pairs", "--count", "2", "--k", "4", "--seed", "7", "--format", "json"],
        &["monad", "profile", "--series", "sigma1", "--m", "1", "--eps", "0", "--a", "5", "--format", "tsv"],
        &["series", "section5", "--format", "json"],
    ];
    for args in cmds {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn reports_embed_seed_and_config_hash() {
    let a = stdout(&run(&["oracle", "serre", "--kind", "ruling-lines", "--count", "2", "--series", "thooft", "--l", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 0);
    assert_eq!(v["result"]["h1"], 0);
    let hash = v["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    let b = stdout(&run(&["oracle", "serre", "--kind", "ruling-lines", "--count", "2", "--series", "thooft", "--l", "2", "--format", "json", "--seed", "1"]));
    let w: serde_json::Value = serde_json::from_str(&b).unwrap();
    assert_ne!(w["config_hash"], v["config_hash"]);
}

#[test]
fn oracle_examples() {
    let out = stdout(&run(&["oracle", "ideal", "--kind", "ruling-lines", "--count", "2", "--k", "3"]));
    assert!(out.contains("h0(I(3)) = 12") && out.contains("h1(I(3)) = 0"));
    let out = stdout(&run(&["oracle", "restrict", "--kind", "modification-lines", "--count", "2", "--aux", "2", "--source", "p3:0", "--target", "points"]));
    assert!(out.contains("surjective = false"));
    let out = stdout(&run(&["oracle", "serre", "--kind", "conic-pairs", "--count", "2", "--series", "conic-serre", "--l", "-6"]));
    assert!(out.contains("h1(E(-6)) = 0"));
}

#[test]
fn compare_and_density() {
    let out = stdout(&run(&["series", "compare", "--e", "0", "--n", "146"]));
    assert!(out.contains("INSTANTON e=0 n=146: dimension 1165"));
    let out = stdout(&run(&["series", "density", "--r", "1000", "--format", "tsv"]));
    assert!(out.contains("1000\t77/100"));
}

#[test]
fn output_file_under_out_dir() {
    let dir = std::env::temp_dir().join(format!("p3bundles-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_p3bundles"))
        .args(["series", "coverage", "--output", "cov.txt"])
        .env("P3BUNDLES_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(dir.join("cov.txt")).unwrap();
    assert!(body.contains("0 values of n in [146, 10000]"));
    std::fs::remove_dir_all(dir).unwrap();
}
