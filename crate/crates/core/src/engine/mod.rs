//! Interval propagation over long exact sequences of sheaf cohomology.

mod graph;
mod interval;
mod propagate;
mod report;
mod runner;
mod script;

pub use graph::{
    Composition, CurveShape, DeductionGraph, Dep, Diagram, Fact, FactTag, Family, FamilyId, Instance, InstanceId,
    Justification, Recipe, Relation, Rule, SheafKind, Triple, TripleId, TripleInstance, TripleKey,
};
pub use interval::DimInterval;
pub use propagate::Schedule;
pub use report::{AssertionRecord, AssertionStatus, FactRecord, OracleCheck, Report, REPORT_SCHEMA};
pub use runner::{
    run_script, run_source, ConfigDecl, ConfigKind, MapEnd, NoOracle, OracleProvider, RunOptions, SelectorShape, SerreLink,
};
pub use script::{parse_script, ChernSpec, Cmp, Expr, NodeSpec, Stmt, StmtKind};

use crate::chern::ChernError;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("contradiction at h{degree} {node}: {detail}")]
    Contradiction { node: String, degree: u8, detail: String },
    #[error("inconsistent character for {node}: {detail}")]
    ChernMismatch { node: String, detail: String },
    #[error("character of {0}: {1}")]
    Chern(String, ChernError),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown triple `{0}`")]
    UnknownTriple(String),
    #[error("`{0}` declared twice")]
    Duplicate(String),
    #[error("cohomological degree {0} out of range")]
    BadDegree(u8),
}

/// Failure while running a proof script.
#[derive(Debug, thiserror::Error)]
pub enum ScriptError {
    #[error("line {line}: parse error: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Engine { line: usize, source: EngineError },
    #[error("line {line}: assertion not entailed: `{text}` (have {interval})")]
    AssertionNotEntailed { line: usize, text: String, interval: DimInterval, report: Box<Report> },
    #[error("line {line}: oracle: {message}")]
    Oracle { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("cannot read script: {0}")]
    Io(#[from] std::io::Error),
}
