use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::graph::{CurveShape, DeductionGraph, FactTag, FamilyId, Recipe, Relation, SheafKind, TripleKey};
use super::propagate::Schedule;
use super::report::{AssertionRecord, AssertionStatus, FactRecord, OracleCheck, Report};
use super::script::{parse_script, ChernSpec, Expr, NodeSpec, Part, Stmt, StmtKind};
use super::ScriptError;
use crate::chern::{ChernCharacter, ChernClasses};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConfigKind {
    /// Lines of one ruling of the quadric `x₀x₃ = x₁x₂`.
    RulingLines,
    /// Pairwise disjoint lines in general position.
    GeneralLines,
    /// Disjoint conics, each a pair of meeting lines, one line of each on the quadric.
    ConicPairs,
    /// Disjoint conics in general position, each a pair of meeting lines.
    GeneralConics,
    /// Ruling lines plus auxiliary lines meeting the quadric in marked points.
    ModificationLines,
}

impl std::str::FromStr for ConfigKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "ruling-lines" => ConfigKind::RulingLines,
            "general-lines" => ConfigKind::GeneralLines,
            "conic-pairs" => ConfigKind::ConicPairs,
            "general-conics" => ConfigKind::GeneralConics,
            "modification-lines" => ConfigKind::ModificationLines,
            other => return Err(format!("unknown configuration kind `{other}`")),
        })
    }
}

/// A configuration requested by a script: `count` main components, `aux` auxiliary lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfigDecl {
    pub name: String,
    pub kind: ConfigKind,
    pub count: u64,
    pub aux: u64,
}

/// What a selector (`cfg`, `cfg.first`, ...) refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectorShape {
    Curve(CurveShape),
    Points(u64),
}

impl ConfigDecl {
    pub fn selector_shape(&self, part: &str) -> Option<SelectorShape> {
        let lines = |k| Some(SelectorShape::Curve(CurveShape { lines: k, conics: 0 }));
        match (self.kind, part) {
            (ConfigKind::RulingLines | ConfigKind::GeneralLines, "") => lines(self.count),
            (ConfigKind::ConicPairs | ConfigKind::GeneralConics, "") => {
                Some(SelectorShape::Curve(CurveShape { lines: 0, conics: self.count }))
            }
            (ConfigKind::ConicPairs | ConfigKind::GeneralConics, "first" | "second") => lines(self.count),
            (ConfigKind::ConicPairs, "points") => Some(SelectorShape::Points(self.count)),
            (ConfigKind::ModificationLines, "") => lines(self.count),
            (ConfigKind::ModificationLines, "aux") => lines(self.aux),
            (ConfigKind::ModificationLines, "all") => lines(self.count + self.aux),
            (ConfigKind::ModificationLines, "points") => Some(SelectorShape::Points(2 * self.aux)),
            _ => None,
        }
    }
}

/// One end of a restriction map whose surjectivity on global sections is queried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapEnd {
    P3(i64),
    /// Forms of bidegree `(p, q)` on the quadric of the configuration.
    Quadric { p: i64, q: i64 },
    Ideal { selector: String, k: i64 },
    Structure { selector: String, k: i64 },
    Points { selector: String },
}

/// Independent source of cohomology values for explicit configurations.
pub trait OracleProvider {
    fn declare(&mut self, decl: &ConfigDecl) -> Result<(), String>;
    /// `hⁱ(I(k))` for `i ∈ {0, 1}` of the subscheme named by `selector`.
    fn ideal_h(&mut self, selector: &str, k: i64, degree: u8) -> Result<u64, String>;
    /// Whether `H⁰(source) → H⁰(target)` is onto.
    fn surjective(&mut self, source: &MapEnd, target: &MapEnd) -> Result<bool, String>;
}

/// Provider for scripts that need no oracle.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoOracle;

impl OracleProvider for NoOracle {
    fn declare(&mut self, _: &ConfigDecl) -> Result<(), String> {
        Ok(())
    }
    fn ideal_h(&mut self, selector: &str, _: i64, _: u8) -> Result<u64, String> {
        Err(format!("no oracle available for {selector}"))
    }
    fn surjective(&mut self, _: &MapEnd, _: &MapEnd) -> Result<bool, String> {
        Err("no oracle available".into())
    }
}

/// `0 → L → F → I_Y(shift) → 0`: `h¹(F(l)) = h¹(I_Y(l + shift))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerreLink {
    pub selector: String,
    pub shift: i64,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub params: BTreeMap<String, i64>,
    pub seed: u64,
    /// Compare every oracle-computable cell with the engine after the run.
    pub oracle_checks: bool,
    pub schedule: Schedule,
    pub explain_limit: usize,
}

impl RunOptions {
    pub fn with_params(params: &[(&str, i64)]) -> Self {
        Self {
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            explain_limit: 64,
            ..Default::default()
        }
    }
}

struct Runner<'a> {
    graph: DeductionGraph,
    env: BTreeMap<String, i64>,
    configs: BTreeMap<String, ConfigDecl>,
    serre: BTreeMap<FamilyId, SerreLink>,
    oracle: &'a mut dyn OracleProvider,
    report: Report,
    opts: &'a RunOptions,
}

pub fn run_script(path: &Path, opts: &RunOptions, oracle: &mut dyn OracleProvider) -> Result<Report, ScriptError> {
    let src = std::fs::read_to_string(path)?;
    let label = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    run_source(&label, &src, opts, oracle).map(|(r, _)| r)
}

/// Runs a script given as text; also returns the final graph.
pub fn run_source(
    label: &str,
    src: &str,
    opts: &RunOptions,
    oracle: &mut dyn OracleProvider,
) -> Result<(Report, DeductionGraph), ScriptError> {
    let stmts = parse_script(src)?;
    let mut r = Runner {
        graph: DeductionGraph::new(),
        env: opts.params.clone(),
        configs: BTreeMap::new(),
        serre: BTreeMap::new(),
        oracle,
        report: Report::new(label, opts.params.clone(), opts.seed),
        opts,
    };
    for stmt in &stmts {
        r.exec(stmt, &stmt.kind)?;
    }
    let last = stmts.last().map_or(0, |s| s.line);
    r.graph
        .propagate_with(opts.schedule)
        .map_err(|source| ScriptError::Engine { line: last, source })?;
    if opts.oracle_checks {
        r.oracle_checks(last)?;
    }
    Ok((r.report, r.graph))
}

impl Runner<'_> {
    fn eval(&self, e: &Expr, line: usize) -> Result<i64, ScriptError> {
        e.eval(&self.env).map_err(|message| ScriptError::Semantic { line, message })
    }

    fn count(&self, e: &Expr, line: usize) -> Result<u64, ScriptError> {
        let v = self.eval(e, line)?;
        u64::try_from(v).map_err(|_| ScriptError::Semantic { line, message: format!("negative count {v}") })
    }

    fn family(&self, id: &str, line: usize) -> Result<FamilyId, ScriptError> {
        self.graph.family_id(id).map_err(|source| ScriptError::Engine { line, source })
    }

    fn key(&self, (name, t): &Part, line: usize) -> Result<TripleKey, ScriptError> {
        let id = self.graph.triple_id(name).map_err(|source| ScriptError::Engine { line, source })?;
        Ok((id, self.eval(t, line)?))
    }

    fn selector(&self, sel: &str, line: usize) -> Result<SelectorShape, ScriptError> {
        let (cfg, part) = sel.split_once('.').unwrap_or((sel, ""));
        let decl = self
            .configs
            .get(cfg)
            .ok_or_else(|| ScriptError::Semantic { line, message: format!("unknown configuration `{cfg}`") })?;
        decl.selector_shape(part)
            .ok_or_else(|| ScriptError::Semantic { line, message: format!("`{sel}` does not name part of a {:?} configuration", decl.kind) })
    }

    fn curve(&self, sel: &str, line: usize) -> Result<CurveShape, ScriptError> {
        match self.selector(sel, line)? {
            SelectorShape::Curve(c) => Ok(c),
            SelectorShape::Points(_) => Err(ScriptError::Semantic { line, message: format!("`{sel}` names points, not a curve") }),
        }
    }

    fn exec(&mut self, stmt: &Stmt, kind: &StmtKind) -> Result<(), ScriptError> {
        let line = stmt.line;
        let engine = |source| ScriptError::Engine { line, source };
        match kind {
            StmtKind::Param(names) => {
                for n in names {
                    if !self.env.contains_key(n) {
                        return Err(ScriptError::Semantic { line, message: format!("parameter `{n}` not supplied") });
                    }
                }
            }
            StmtKind::Let(n, e) => {
                let v = self.eval(e, line)?;
                self.env.insert(n.clone(), v);
            }
            StmtKind::Config { name, kind, args } => {
                let kind: ConfigKind = kind.parse().map_err(|message| ScriptError::Semantic { line, message })?;
                let vals: Vec<u64> = args.iter().map(|a| self.count(a, line)).collect::<Result<_, _>>()?;
                let (count, aux) = match (kind, vals.as_slice()) {
                    (ConfigKind::ModificationLines, [k, d]) => (*k, *d),
                    (ConfigKind::ModificationLines, _) => {
                        return Err(ScriptError::Semantic { line, message: "modification-lines takes <lines> <aux>".into() })
                    }
                    (_, [k]) => (*k, 0),
                    _ => return Err(ScriptError::Semantic { line, message: "configuration takes one count".into() }),
                };
                let decl = ConfigDecl { name: name.clone(), kind, count, aux };
                self.oracle.declare(&decl).map_err(|message| ScriptError::Oracle { line, message })?;
                self.configs.insert(name.clone(), decl);
            }
            StmtKind::Node { id, spec } => {
                let kind = match spec {
                    NodeSpec::P3 => SheafKind::LineBundle,
                    NodeSpec::Quadric(p, q) => SheafKind::Quadric { p: self.eval(p, line)?, q: self.eval(q, line)? },
                    NodeSpec::Lines(k) => SheafKind::Lines(self.count(k, line)?),
                    NodeSpec::Conics(k) => SheafKind::Conics(self.count(k, line)?),
                    NodeSpec::Points(k) => SheafKind::Points(self.count(k, line)?),
                    NodeSpec::Ideal(sel) => SheafKind::Ideal { selector: sel.clone(), shape: self.curve(sel, line)? },
                    NodeSpec::Structure(sel) => SheafKind::Structure { selector: sel.clone(), shape: self.curve(sel, line)? },
                    NodeSpec::PointSet(sel) => match self.selector(sel, line)? {
                        SelectorShape::Points(count) => SheafKind::PointSet { selector: sel.clone(), count },
                        SelectorShape::Curve(_) => {
                            return Err(ScriptError::Semantic { line, message: format!("`{sel}` is not a point set") })
                        }
                    },
                    NodeSpec::Sheaf => SheafKind::Unknown { locally_free: false },
                    NodeSpec::Bundle { .. } => SheafKind::Unknown { locally_free: true },
                };
                let fam = self.graph.add_family(id, kind).map_err(engine)?;
                if let NodeSpec::Bundle { serre: Some((sel, shift)) } = spec {
                    self.curve(sel, line)?;
                    self.serre.insert(fam, SerreLink { selector: sel.clone(), shift: self.eval(shift, line)? });
                }
            }
            StmtKind::Chern { id, spec } => {
                let fam = self.family(id, line)?;
                match spec {
                    ChernSpec::Classes([r, c1, c2, c3]) => {
                        let cls = ChernClasses::new(
                            self.eval(r, line)?,
                            self.eval(c1, line)?,
                            self.eval(c2, line)?,
                            self.eval(c3, line)?,
                        );
                        self.graph.set_chern(fam, ChernCharacter::from_classes(cls)).map_err(engine)?;
                    }
                    ChernSpec::Tensor((x, tx), (y, ty)) => {
                        let recipe = Recipe::Tensor(
                            (self.family(x, line)?, self.eval(tx, line)?),
                            (self.family(y, line)?, self.eval(ty, line)?),
                        );
                        self.graph.add_recipe(fam, recipe);
                    }
                    ChernSpec::Sym2(x, t) => {
                        let recipe = Recipe::Sym2(self.family(x, line)?, self.eval(t, line)?);
                        self.graph.add_recipe(fam, recipe);
                    }
                    ChernSpec::Wedge2(x, t) => {
                        let recipe = Recipe::Wedge2(self.family(x, line)?, self.eval(t, line)?);
                        self.graph.add_recipe(fam, recipe);
                    }
                }
            }
            StmtKind::Dual { id, shift } => {
                let fam = self.family(id, line)?;
                let shift = self.eval(shift, line)?;
                self.graph.set_dual_shift(fam, shift);
            }
            StmtKind::Sum { id, parts } => {
                let parts = parts
                    .iter()
                    .map(|(p, off)| Ok((self.family(p, line)?, self.eval(off, line)?)))
                    .collect::<Result<Vec<_>, ScriptError>>()?;
                self.graph.add_family(id, SheafKind::Sum(parts)).map_err(engine)?;
            }
            StmtKind::Triple { name, parts } => {
                let mut resolved = [(0, 0); 3];
                for (slot, (p, t)) in resolved.iter_mut().zip(parts) {
                    *slot = (self.family(p, line)?, self.eval(t, line)?);
                }
                self.graph.add_triple(name, resolved).map_err(engine)?;
            }
            StmtKind::Twist { name, t } => {
                let key = self.key(&(name.clone(), t.clone()), line)?;
                self.graph.twist_triple(key.0, key.1).map_err(engine)?;
            }
            StmtKind::Annotate { tag, triple, connecting } => {
                let key = self.key(triple, line)?;
                if *tag == FactTag::Oracle {
                    if *connecting != 0 {
                        return Err(ScriptError::Semantic { line, message: "the oracle only decides h0-surjectivity".into() });
                    }
                    self.oracle_surjective(key, line)?;
                }
                self.graph.annotate(key, *connecting, *tag, &stmt.text).map_err(engine)?;
            }
            StmtKind::Diagram { name, bottom, left, middle, right } => {
                let keys = [self.key(bottom, line)?, self.key(left, line)?, self.key(middle, line)?, self.key(right, line)?];
                self.graph.add_diagram(name, keys[0], keys[1], keys[2], keys[3]).map_err(engine)?;
            }
            StmtKind::Compose { whole, first, second } => {
                let keys = [self.key(whole, line)?, self.key(first, line)?, self.key(second, line)?];
                self.graph.add_composition(keys[0], keys[1], keys[2]).map_err(engine)?;
            }
            StmtKind::Fact { tag, degree, id, t, value } => {
                let fam = self.family(id, line)?;
                let t = self.eval(t, line)?;
                let (relation, v) = match (tag, value) {
                    (FactTag::Oracle, given) => {
                        let v = self.oracle_value(fam, t, *degree, line)?;
                        if let Some((rel, e)) = given {
                            let claimed = self.count(e, line)?;
                            let ok = match rel {
                                Relation::Eq => v == claimed,
                                Relation::Le => v <= claimed,
                            };
                            if !ok {
                                return Err(ScriptError::Oracle { line, message: format!("oracle gives {v}, script claims {claimed}") });
                            }
                        }
                        (Relation::Eq, v)
                    }
                    (_, Some((rel, e))) => (*rel, self.count(e, line)?),
                    (_, None) => return Err(ScriptError::Semantic { line, message: "fact needs a value".into() }),
                };
                self.graph.add_fact(fam, t, *degree, relation, v, *tag, &stmt.text).map_err(engine)?;
                let id = self.graph.instance_id(fam, t).expect("fact instantiates its cell");
                self.report.facts.push(FactRecord {
                    line,
                    tag: *tag,
                    cell: self.graph.cell_name((id, *degree)),
                    relation,
                    value: v,
                });
            }
            StmtKind::Instance { id, t } => {
                let fam = self.family(id, line)?;
                let t = self.eval(t, line)?;
                self.graph.ensure_instance(fam, t).map_err(engine)?;
            }
            StmtKind::Assert { degree, id, t, relation, value } => {
                let fam = self.family(id, line)?;
                let t = self.eval(t, line)?;
                let expected = self.count(value, line)?;
                let inst = self.graph.ensure_instance(fam, t).map_err(engine)?;
                self.graph.propagate_with(self.opts.schedule).map_err(engine)?;
                let cell = (inst, *degree);
                let interval = self.graph.interval(cell);
                let entailed = match relation {
                    Relation::Eq => interval.pinned() == Some(expected),
                    Relation::Le => interval.hi.is_some_and(|h| h <= expected),
                };
                let record = AssertionRecord {
                    line,
                    text: stmt.text.clone(),
                    cell: self.graph.cell_name(cell),
                    relation: *relation,
                    expected,
                    interval,
                    status: if entailed { AssertionStatus::Entailed } else { AssertionStatus::NotEntailed },
                    chain: self.graph.explain(cell, self.opts.explain_limit.max(1)),
                };
                self.report.assertions.push(record);
                if !entailed {
                    return Err(ScriptError::AssertionNotEntailed {
                        line,
                        text: stmt.text.clone(),
                        interval,
                        report: Box::new(self.report.clone()),
                    });
                }
            }
            StmtKind::When { lhs, cmp, rhs, body } => {
                if cmp.holds(self.eval(lhs, line)?, self.eval(rhs, line)?) {
                    self.exec(stmt, body)?;
                }
            }
        }
        Ok(())
    }

    fn oracle_value(&mut self, fam: FamilyId, t: i64, degree: u8, line: usize) -> Result<u64, ScriptError> {
        let oracle_err = |message| ScriptError::Oracle { line, message };
        match &self.graph.family(fam).kind {
            SheafKind::Ideal { selector, .. } if degree <= 1 => {
                let sel = selector.clone();
                self.oracle.ideal_h(&sel, t, degree).map_err(oracle_err)
            }
            _ => match self.serre.get(&fam) {
                Some(link) if degree == 1 => {
                    let link = link.clone();
                    self.oracle.ideal_h(&link.selector, t + link.shift, 1).map_err(oracle_err)
                }
                _ => Err(ScriptError::Semantic {
                    line,
                    message: format!("the oracle cannot compute h{degree} of {}", self.graph.family(fam).name),
                }),
            },
        }
    }

    fn map_end(&self, fam: FamilyId, t: i64, line: usize) -> Result<MapEnd, ScriptError> {
        Ok(match &self.graph.family(fam).kind {
            SheafKind::LineBundle => MapEnd::P3(t),
            SheafKind::Quadric { p, q } => MapEnd::Quadric { p: p + t, q: q + t },
            SheafKind::Ideal { selector, .. } => MapEnd::Ideal { selector: selector.clone(), k: t },
            SheafKind::Structure { selector, .. } => MapEnd::Structure { selector: selector.clone(), k: t },
            SheafKind::PointSet { selector, .. } => MapEnd::Points { selector: selector.clone() },
            _ => {
                return Err(ScriptError::Semantic {
                    line,
                    message: format!("the oracle cannot evaluate sections of {}", self.graph.family(fam).name),
                })
            }
        })
    }

    fn oracle_surjective(&mut self, (triple, offset): TripleKey, line: usize) -> Result<(), ScriptError> {
        let parts = self.graph.triples[triple].parts;
        let source = self.map_end(parts[1].0, parts[1].1 + offset, line)?;
        let target = self.map_end(parts[2].0, parts[2].1 + offset, line)?;
        match self.oracle.surjective(&source, &target) {
            Ok(true) => Ok(()),
            Ok(false) => Err(ScriptError::Oracle { line, message: format!("{source:?} -> {target:?} is not surjective on H0") }),
            Err(message) => Err(ScriptError::Oracle { line, message }),
        }
    }

    fn oracle_checks(&mut self, line: usize) -> Result<(), ScriptError> {
        let mut cells = Vec::new();
        for id in 0..self.graph.instances().len() {
            let inst = self.graph.instance(id);
            let fam = inst.family;
            match &self.graph.family(fam).kind {
                SheafKind::Ideal { .. } => cells.extend([(id, 0u8), (id, 1u8)]),
                _ if self.serre.contains_key(&fam) => cells.push((id, 1u8)),
                _ => {}
            }
        }
        for (id, degree) in cells {
            let inst = self.graph.instance(id);
            let (fam, t) = (inst.family, inst.twist);
            let oracle = self.oracle_value(fam, t, degree, line)?;
            let engine = self.graph.interval((id, degree));
            self.report.oracle_checks.push(OracleCheck {
                cell: self.graph.cell_name((id, degree)),
                oracle,
                engine,
                agree: engine.contains(oracle),
            });
        }
        Ok(())
    }
}
