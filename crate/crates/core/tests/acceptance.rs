use std::io::Write;

use p3bundles::acceptance::run_all;

#[test]
fn acceptance() {
    let (report, timings) = run_all(0);
    // Written to the handle directly so the lines survive output capture.
    let mut out = std::io::stdout().lock();
    for (c, (_, t)) in report.criteria.iter().zip(&timings) {
        writeln!(out, "{} [{:.2?}]", c.line(), t).unwrap();
    }
    drop(out);
    assert_eq!(report.criteria.len(), 11);
    let failed: Vec<u8> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
