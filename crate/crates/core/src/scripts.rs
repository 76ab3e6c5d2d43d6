//! Proof scripts shipped with the crate.

use crate::engine::{run_source, Report, RunOptions, ScriptError};
use crate::oracle::GeometryOracle;

/// `(name, source)` of every bundled script.
pub const BUNDLED: &[(&str, &str)] = &[
    ("prop1", include_str!("../scripts/prop1.les")),
    ("prop1-modified", include_str!("../scripts/prop1-modified.les")),
    ("prop2", include_str!("../scripts/prop2.les")),
    ("thmA-chain", include_str!("../scripts/thmA-chain.les")),
    ("thmB-chain", include_str!("../scripts/thmB-chain.les")),
];

/// Source of a bundled script, by name with or without the `.les` suffix.
pub fn bundled(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".les").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Runs a bundled script against a fresh [`GeometryOracle`] seeded with `seed`,
/// comparing every oracle-computable cell with the engine.
pub fn run_bundled(name: &str, params: &[(&str, i64)], seed: u64) -> Result<Report, ScriptError> {
    let src = bundled(name).ok_or_else(|| ScriptError::Semantic { line: 0, message: format!("no bundled script `{name}`") })?;
    run_checked(&format!("{}.les", name.strip_suffix(".les").unwrap_or(name)), src, params, seed, None)
}

/// Runs script source with oracle checks on; `retries` overrides the sampling budget.
pub fn run_checked(
    label: &str,
    src: &str,
    params: &[(&str, i64)],
    seed: u64,
    retries: Option<usize>,
) -> Result<Report, ScriptError> {
    let mut opts = RunOptions::with_params(params);
    opts.seed = seed;
    opts.oracle_checks = true;
    let mut oracle = GeometryOracle::new(seed);
    oracle.retries = retries;
    run_source(label, src, &opts, &mut oracle).map(|(r, _)| r)
}
