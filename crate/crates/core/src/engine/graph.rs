use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::interval::DimInterval;
use super::EngineError;
use crate::chern::ChernCharacter;
use crate::tables::{self, CohomologyVector};

pub type FamilyId = usize;
pub type InstanceId = usize;
pub type TripleId = usize;

/// Shape of a union of disjoint lines and disjoint conics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveShape {
    pub lines: u64,
    pub conics: u64,
}

impl CurveShape {
    pub fn character(&self) -> ChernCharacter {
        &ChernCharacter::lines(self.lines as i64) + &ChernCharacter::conics(self.conics as i64)
    }
}

/// What a node family is; `F(t)` denotes the instance twisted by `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SheafKind {
    /// `O_{P³}(t)`.
    LineBundle,
    /// `O_S(p + t, q + t)` on the quadric `S`.
    Quadric { p: i64, q: i64 },
    Lines(u64),
    Conics(u64),
    Points(u64),
    /// Ideal sheaf of an explicit configuration; computable by the geometry oracle.
    Ideal { selector: String, shape: CurveShape },
    /// Structure sheaf of an explicit configuration.
    Structure { selector: String, shape: CurveShape },
    /// Reduced marked points of an explicit configuration.
    PointSet { selector: String, count: u64 },
    Unknown { locally_free: bool },
    /// Direct sum of `family(t + offset)` terms.
    Sum(Vec<(FamilyId, i64)>),
}

impl SheafKind {
    pub fn base_table(&self, t: i64) -> Option<CohomologyVector> {
        Some(match self {
            SheafKind::LineBundle => tables::h_p3_line(t),
            SheafKind::Quadric { p, q } => tables::h_quadric(p + t, q + t),
            SheafKind::Lines(k) => tables::h_curve_union(*k, 0, t),
            SheafKind::Conics(k) => tables::h_curve_union(0, *k, t),
            SheafKind::Points(k) => tables::h_points(*k),
            SheafKind::Structure { shape, .. } => tables::h_curve_union(shape.lines, shape.conics, t),
            SheafKind::PointSet { count, .. } => tables::h_points(*count),
            SheafKind::Ideal { .. } | SheafKind::Unknown { .. } | SheafKind::Sum(_) => return None,
        })
    }

    pub fn base_character(&self) -> Option<ChernCharacter> {
        Some(match self {
            SheafKind::LineBundle => ChernCharacter::trivial(),
            SheafKind::Quadric { p, q } => ChernCharacter::quadric(*p, *q),
            SheafKind::Lines(k) => ChernCharacter::lines(*k as i64),
            SheafKind::Conics(k) => ChernCharacter::conics(*k as i64),
            SheafKind::Points(k) => ChernCharacter::points(*k as i64),
            SheafKind::Structure { shape, .. } => shape.character(),
            SheafKind::PointSet { count, .. } => ChernCharacter::points(*count as i64),
            SheafKind::Ideal { shape, .. } => ChernCharacter::ideal_of(&shape.character()),
            SheafKind::Unknown { .. } | SheafKind::Sum(_) => return None,
        })
    }

    pub fn is_locally_free(&self) -> bool {
        matches!(self, SheafKind::LineBundle | SheafKind::Unknown { locally_free: true })
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub name: String,
    pub kind: SheafKind,
    /// Character of the untwisted member.
    pub chern: Option<ChernCharacter>,
    /// `F^∨ ≅ F(shift)`, enabling Serre duality between twists.
    pub dual_shift: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub family: FamilyId,
    pub twist: i64,
    pub table: [DimInterval; 4],
    pub(crate) just_lo: [Option<usize>; 4],
    pub(crate) just_hi: [Option<usize>; 4],
}

/// A short exact sequence `0 → A(tA) → B(tB) → C(tC) → 0` of families.
#[derive(Clone, Debug)]
pub struct Triple {
    pub name: String,
    pub parts: [(FamilyId, i64); 3],
}

/// A triple twisted by `offset`, with the connecting maps known to vanish.
#[derive(Clone, Debug)]
pub struct TripleInstance {
    pub triple: TripleId,
    pub offset: i64,
    pub nodes: [InstanceId; 3],
    /// `cuts[i]`: the connecting map `Hⁱ(C) → Hⁱ⁺¹(A)` is zero. `cuts[0]` is `H⁰(B) ↠ H⁰(C)`.
    pub cuts: [Option<usize>; 3],
}

pub type TripleKey = (TripleId, i64);

/// Character of a family defined from others, resolved once the inputs are known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Tensor((FamilyId, i64), (FamilyId, i64)),
    Sym2(FamilyId, i64),
    Wedge2(FamilyId, i64),
}

/// Commutative 3×3 diagram whose vertical columns are restriction triples.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub name: String,
    pub bottom: TripleKey,
    pub left: TripleKey,
    pub middle: TripleKey,
    pub right: TripleKey,
}

/// The quotient map of `whole` is the quotient map of `first` followed by that of `second`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub whole: TripleKey,
    pub first: TripleKey,
    pub second: TripleKey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactTag {
    #[serde(rename = "ORACLE")]
    Oracle,
    #[serde(rename = "STABILITY")]
    Stability,
    #[serde(rename = "ASSUMED")]
    Assumed,
}

impl fmt::Display for FactTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactTag::Oracle => "ORACLE",
            FactTag::Stability => "STABILITY",
            FactTag::Assumed => "ASSUMED",
        })
    }
}

impl std::str::FromStr for FactTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ORACLE" => Ok(FactTag::Oracle),
            "STABILITY" => Ok(FactTag::Stability),
            "ASSUMED" => Ok(FactTag::Assumed),
            other => Err(format!("unknown fact tag `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Le,
}

#[derive(Clone, Debug)]
pub struct Fact {
    pub cell: (InstanceId, u8),
    pub relation: Relation,
    pub value: u64,
    pub tag: FactTag,
    pub source: String,
}

/// Rule that produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Table,
    Fact(FactTag),
    /// R1: Riemann–Roch on a node, χ read from its character.
    Chi,
    /// R2: both neighbours in the long exact sequence vanish.
    Sandwich,
    /// R3: a term is bounded by its two neighbours.
    Subadditivity,
    /// R4: alternating sum over an exact segment.
    SegmentSum,
    /// R5.
    SerreDuality,
    /// R6.
    DirectSum,
    /// R7: vanishing connecting map derived from dimensions.
    Surjectivity,
    /// R8: diagram chase or composition of surjections.
    Diagram,
    /// Connecting map declared zero.
    Annotation(FactTag),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Table => f.write_str("table"),
            Rule::Fact(tag) => write!(f, "fact {tag}"),
            Rule::Chi => f.write_str("R1 chi"),
            Rule::Sandwich => f.write_str("R2 sandwich"),
            Rule::Subadditivity => f.write_str("R3 subadditivity"),
            Rule::SegmentSum => f.write_str("R4 segment sum"),
            Rule::SerreDuality => f.write_str("R5 Serre duality"),
            Rule::DirectSum => f.write_str("R6 direct sum"),
            Rule::Surjectivity => f.write_str("R7 surjectivity"),
            Rule::Diagram => f.write_str("R8 diagram"),
            Rule::Annotation(tag) => write!(f, "annotation {tag}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dep {
    Cell(InstanceId, u8),
    Cut(usize, u8),
}

#[derive(Clone, Debug)]
pub struct Justification {
    pub rule: Rule,
    pub detail: String,
    pub deps: Vec<Dep>,
}

/// Sheaf nodes, exact triples, diagrams and asserted facts, with the current
/// interval for every `hⁱ` of every instantiated twist.
#[derive(Clone, Debug, Default)]
pub struct DeductionGraph {
    pub(crate) families: Vec<Family>,
    family_index: BTreeMap<String, FamilyId>,
    pub(crate) instances: Vec<Instance>,
    instance_index: BTreeMap<(FamilyId, i64), InstanceId>,
    pub(crate) triples: Vec<Triple>,
    triple_index: BTreeMap<String, TripleId>,
    pub(crate) triple_instances: Vec<TripleInstance>,
    ti_index: BTreeMap<TripleKey, usize>,
    pub(crate) diagrams: Vec<Diagram>,
    pub(crate) compositions: Vec<Composition>,
    pub(crate) facts: Vec<Fact>,
    pub(crate) recipes: Vec<(FamilyId, Recipe)>,
    pub(crate) justifications: Vec<Justification>,
}

impl DeductionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_family(&mut self, name: &str, kind: SheafKind) -> Result<FamilyId, EngineError> {
        if self.family_index.contains_key(name) {
            return Err(EngineError::Duplicate(name.to_string()));
        }
        if let SheafKind::Sum(parts) = &kind {
            if parts.iter().any(|&(p, _)| p >= self.families.len()) {
                return Err(EngineError::UnknownNode(name.to_string()));
            }
        }
        let id = self.families.len();
        let chern = kind.base_character();
        let dual_shift = matches!(kind, SheafKind::LineBundle).then_some(0);
        self.families.push(Family { name: name.to_string(), kind, chern, dual_shift });
        self.family_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn family_id(&self, name: &str) -> Result<FamilyId, EngineError> {
        self.family_index
            .get(name)
            .copied()
            .ok_or_else(|| EngineError::UnknownNode(name.to_string()))
    }

    pub fn family(&self, id: FamilyId) -> &Family {
        &self.families[id]
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn set_chern(&mut self, family: FamilyId, chern: ChernCharacter) -> Result<(), EngineError> {
        match &self.families[family].chern {
            Some(existing) if *existing != chern => Err(EngineError::ChernMismatch {
                node: self.families[family].name.clone(),
                detail: format!("declared {chern}, known {existing}"),
            }),
            _ => {
                self.families[family].chern = Some(chern);
                self.refresh_dual_shift(family);
                Ok(())
            }
        }
    }

    pub fn add_recipe(&mut self, family: FamilyId, recipe: Recipe) {
        self.recipes.push((family, recipe));
    }

    pub fn set_dual_shift(&mut self, family: FamilyId, shift: i64) {
        self.families[family].dual_shift = Some(shift);
    }

    pub(crate) fn refresh_dual_shift(&mut self, family: FamilyId) {
        let fam = &mut self.families[family];
        if fam.dual_shift.is_some() {
            return;
        }
        if let (SheafKind::Unknown { locally_free: true }, Some(ch)) = (&fam.kind, &fam.chern) {
            if ch.rank == 2 {
                // rank 2: F^∨ ≅ F ⊗ det(F)^{-1}
                fam.dual_shift = Some(-ch.ch1);
            }
        }
    }

    pub fn instance_id(&self, family: FamilyId, t: i64) -> Option<InstanceId> {
        self.instance_index.get(&(family, t)).copied()
    }

    pub fn instance(&self, id: InstanceId) -> &Instance {
        &self.instances[id]
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    /// Creates `family(t)` (and the summands, for sums), loading any closed-form table.
    pub fn ensure_instance(&mut self, family: FamilyId, t: i64) -> Result<InstanceId, EngineError> {
        if let Some(id) = self.instance_id(family, t) {
            return Ok(id);
        }
        if let SheafKind::Sum(parts) = self.families[family].kind.clone() {
            for (p, off) in parts {
                self.ensure_instance(p, t + off)?;
            }
        }
        let id = self.instances.len();
        self.instances.push(Instance {
            family,
            twist: t,
            table: [DimInterval::UNKNOWN; 4],
            just_lo: [None; 4],
            just_hi: [None; 4],
        });
        self.instance_index.insert((family, t), id);
        if let Some(table) = self.families[family].kind.base_table(t) {
            let j = self.justify(Rule::Table, format!("closed form for {}", self.instance_name(id)), vec![]);
            for deg in 0..4u8 {
                self.narrow((id, deg), DimInterval::exact(table.h(deg as usize)), j)?;
            }
        }
        Ok(id)
    }

    pub fn instance_name(&self, id: InstanceId) -> String {
        let inst = &self.instances[id];
        format!("{}({})", self.families[inst.family].name, inst.twist)
    }

    pub fn cell_name(&self, (id, deg): (InstanceId, u8)) -> String {
        format!("h{} {}", deg, self.instance_name(id))
    }

    pub fn instance_chern(&self, id: InstanceId) -> Option<ChernCharacter> {
        let inst = &self.instances[id];
        self.families[inst.family].chern.as_ref().map(|c| c.twist(inst.twist))
    }

    pub fn interval(&self, (id, deg): (InstanceId, u8)) -> DimInterval {
        self.instances[id].table[deg as usize]
    }

    /// Interval of `hⁱ(family(t))`, if that twist was instantiated.
    pub fn lookup(&self, family: &str, t: i64, degree: u8) -> Option<DimInterval> {
        let fam = self.family_index.get(family)?;
        let id = self.instance_id(*fam, t)?;
        Some(self.interval((id, degree)))
    }

    pub fn table(&self, id: InstanceId) -> [DimInterval; 4] {
        self.instances[id].table
    }

    pub fn add_triple(&mut self, name: &str, parts: [(FamilyId, i64); 3]) -> Result<TripleId, EngineError> {
        if self.triple_index.contains_key(name) {
            return Err(EngineError::Duplicate(name.to_string()));
        }
        let id = self.triples.len();
        self.triples.push(Triple { name: name.to_string(), parts });
        self.triple_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn triple_id(&self, name: &str) -> Result<TripleId, EngineError> {
        self.triple_index
            .get(name)
            .copied()
            .ok_or_else(|| EngineError::UnknownTriple(name.to_string()))
    }

    pub fn triple_instance_index(&self, key: TripleKey) -> Option<usize> {
        self.ti_index.get(&key).copied()
    }

    /// Instantiates a triple twisted by `offset`, creating fresh node instances as needed.
    pub fn twist_triple(&mut self, triple: TripleId, offset: i64) -> Result<usize, EngineError> {
        if let Some(i) = self.ti_index.get(&(triple, offset)) {
            return Ok(*i);
        }
        let parts = self.triples[triple].parts;
        let mut nodes = [0; 3];
        for (slot, (fam, t)) in nodes.iter_mut().zip(parts) {
            *slot = self.ensure_instance(fam, t + offset)?;
        }
        let idx = self.triple_instances.len();
        self.triple_instances.push(TripleInstance { triple, offset, nodes, cuts: [None; 3] });
        self.ti_index.insert((triple, offset), idx);
        Ok(idx)
    }

    pub fn triple_instance_name(&self, ti: usize) -> String {
        let t = &self.triple_instances[ti];
        format!("{}@{}", self.triples[t.triple].name, t.offset)
    }

    pub fn add_fact(
        &mut self,
        family: FamilyId,
        t: i64,
        degree: u8,
        relation: Relation,
        value: u64,
        tag: FactTag,
        source: &str,
    ) -> Result<(), EngineError> {
        if degree > 3 {
            return Err(EngineError::BadDegree(degree));
        }
        let id = self.ensure_instance(family, t)?;
        self.facts.push(Fact { cell: (id, degree), relation, value, tag, source: source.to_string() });
        let interval = match relation {
            Relation::Eq => DimInterval::exact(value),
            Relation::Le => DimInterval::at_most(value),
        };
        let j = self.justify(Rule::Fact(tag), source.to_string(), vec![]);
        self.narrow((id, degree), interval, j)?;
        Ok(())
    }

    /// Declares the connecting map `Hⁱ(C) → Hⁱ⁺¹(A)` of a triple instance to be zero.
    pub fn annotate(&mut self, key: TripleKey, connecting: u8, tag: FactTag, source: &str) -> Result<(), EngineError> {
        if connecting > 2 {
            return Err(EngineError::BadDegree(connecting));
        }
        let ti = self.twist_triple(key.0, key.1)?;
        if self.triple_instances[ti].cuts[connecting as usize].is_none() {
            let j = self.justify(Rule::Annotation(tag), source.to_string(), vec![]);
            self.triple_instances[ti].cuts[connecting as usize] = Some(j);
        }
        Ok(())
    }

    pub fn add_diagram(
        &mut self,
        name: &str,
        bottom: TripleKey,
        left: TripleKey,
        middle: TripleKey,
        right: TripleKey,
    ) -> Result<(), EngineError> {
        for key in [bottom, left, middle, right] {
            self.twist_triple(key.0, key.1)?;
        }
        self.diagrams.push(Diagram { name: name.to_string(), bottom, left, middle, right });
        Ok(())
    }

    pub fn add_composition(&mut self, whole: TripleKey, first: TripleKey, second: TripleKey) -> Result<(), EngineError> {
        for key in [whole, first, second] {
            self.twist_triple(key.0, key.1)?;
        }
        self.compositions.push(Composition { whole, first, second });
        Ok(())
    }

    pub(crate) fn justify(&mut self, rule: Rule, detail: String, deps: Vec<Dep>) -> usize {
        self.justifications.push(Justification { rule, detail, deps });
        self.justifications.len() - 1
    }

    /// Intersects a cell with `bound`; returns whether anything changed.
    pub(crate) fn narrow(&mut self, cell: (InstanceId, u8), bound: DimInterval, just: usize) -> Result<bool, EngineError> {
        let (id, deg) = cell;
        let current = self.instances[id].table[deg as usize];
        let next = current.meet(&bound);
        if next.is_empty() {
            return Err(EngineError::Contradiction {
                node: self.instance_name(id),
                degree: deg,
                detail: format!(
                    "{} meets {} from {}: {}",
                    current,
                    bound,
                    self.justifications[just].rule,
                    self.justifications[just].detail
                ),
            });
        }
        if next == current {
            return Ok(false);
        }
        let inst = &mut self.instances[id];
        if next.lo != current.lo {
            inst.just_lo[deg as usize] = Some(just);
        }
        if next.hi != current.hi {
            inst.just_hi[deg as usize] = Some(just);
        }
        inst.table[deg as usize] = next;
        Ok(true)
    }

    pub fn justification(&self, j: usize) -> &Justification {
        &self.justifications[j]
    }

    /// Derivation chain of a cell's current bounds, dependencies first.
    pub fn explain(&self, cell: (InstanceId, u8), limit: usize) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.explain_rec(Dep::Cell(cell.0, cell.1), &mut seen, &mut out, limit);
        out
    }

    fn explain_rec(&self, dep: Dep, seen: &mut BTreeSet<Dep>, out: &mut Vec<String>, limit: usize) {
        if out.len() >= limit || !seen.insert(dep) {
            return;
        }
        match dep {
            Dep::Cell(id, deg) => {
                let inst = &self.instances[id];
                let lo = inst.just_lo[deg as usize];
                let hi = inst.just_hi[deg as usize];
                let mut js: Vec<usize> = lo.into_iter().chain(hi).collect();
                js.dedup();
                for &j in &js {
                    for d in &self.justifications[j].deps {
                        self.explain_rec(*d, seen, out, limit);
                    }
                }
                if out.len() >= limit {
                    return;
                }
                let reasons: Vec<String> = js
                    .iter()
                    .map(|&j| {
                        let jj = &self.justifications[j];
                        format!("{} [{}]", jj.rule, jj.detail)
                    })
                    .collect();
                if !reasons.is_empty() {
                    out.push(format!(
                        "{} = {} by {}",
                        self.cell_name((id, deg)),
                        inst.table[deg as usize],
                        reasons.join("; ")
                    ));
                }
            }
            Dep::Cut(ti, i) => {
                if let Some(j) = self.triple_instances[ti].cuts[i as usize] {
                    for d in &self.justifications[j].deps {
                        self.explain_rec(*d, seen, out, limit);
                    }
                    if out.len() >= limit {
                        return;
                    }
                    let jj = &self.justifications[j];
                    out.push(format!(
                        "connecting map {} of {} is zero by {} [{}]",
                        i,
                        self.triple_instance_name(ti),
                        jj.rule,
                        jj.detail
                    ));
                }
            }
        }
    }

    /// Snapshot of all tables keyed by instance name, for comparisons.
    pub fn snapshot(&self) -> BTreeMap<String, [DimInterval; 4]> {
        (0..self.instances.len()).map(|id| (self.instance_name(id), self.instances[id].table)).collect()
    }

    pub fn cuts_snapshot(&self) -> BTreeMap<String, [bool; 3]> {
        (0..self.triple_instances.len())
            .map(|ti| (self.triple_instance_name(ti), self.triple_instances[ti].cuts.map(|c| c.is_some())))
            .collect()
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }
}
