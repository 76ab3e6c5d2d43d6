use super::graph::{DeductionGraph, Dep, InstanceId, Recipe, Rule, SheafKind};
use super::interval::DimInterval;
use super::EngineError;
use crate::chern::ChernCharacter;

type Cell = (InstanceId, u8);

/// Order in which rules visit instances and triples. The fixpoint does not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    #[default]
    Forward,
    Reverse,
}

fn order(n: usize, schedule: Schedule) -> Vec<usize> {
    match schedule {
        Schedule::Forward => (0..n).collect(),
        Schedule::Reverse => (0..n).rev().collect(),
    }
}

/// `Σ cᵢ·xᵢ`'s lower and upper bounds over the current intervals; `None` is infinite.
fn term_range(c: i64, iv: DimInterval) -> (Option<i128>, Option<i128>) {
    let lo = iv.lo as i128;
    let hi = iv.hi.map(|h| h as i128);
    let c = c as i128;
    if c >= 0 {
        (Some(c * lo), hi.map(|h| c * h))
    } else {
        (hi.map(|h| c * h), Some(c * lo))
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

impl DeductionGraph {
    /// Runs all rules to a fixpoint.
    pub fn propagate(&mut self) -> Result<(), EngineError> {
        self.propagate_with(Schedule::Forward)
    }

    pub fn propagate_with(&mut self, schedule: Schedule) -> Result<(), EngineError> {
        loop {
            let mut changed = self.infer_characters(schedule)?;
            let passes: [fn(&mut Self, Schedule) -> Result<bool, EngineError>; 6] = [
                Self::rule_chi,
                Self::rule_segments,
                Self::rule_duality,
                Self::rule_sums,
                Self::rule_surjectivity,
                Self::rule_diagrams,
            ];
            let idx = order(passes.len(), schedule);
            for i in idx {
                changed |= passes[i](self, schedule)?;
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Fills in missing characters from triples with two known terms and from sums.
    fn infer_characters(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        for r in order(self.recipes.len(), schedule) {
            let (target, recipe) = self.recipes[r].clone();
            let ch = |g: &Self, (f, t): (usize, i64)| g.families[f].chern.as_ref().map(|c| c.twist(t));
            let value = match recipe {
                Recipe::Tensor(x, y) => match (ch(self, x), ch(self, y)) {
                    (Some(a), Some(b)) => Some(&a * &b),
                    _ => None,
                },
                Recipe::Sym2(f, t) => ch(self, (f, t))
                    .map(|c| c.sym2_rank2())
                    .transpose()
                    .map_err(|e| EngineError::Chern(self.families[target].name.clone(), e))?,
                Recipe::Wedge2(f, t) => ch(self, (f, t))
                    .map(|c| c.wedge2_rank2())
                    .transpose()
                    .map_err(|e| EngineError::Chern(self.families[target].name.clone(), e))?,
            };
            if let Some(v) = value {
                if self.families[target].chern.as_ref() != Some(&v) {
                    self.set_chern(target, v)?;
                    changed = true;
                }
            }
        }
        for f in order(self.families.len(), schedule) {
            if let SheafKind::Sum(parts) = &self.families[f].kind {
                let chs: Option<Vec<ChernCharacter>> = parts
                    .iter()
                    .map(|&(p, off)| self.families[p].chern.as_ref().map(|c| c.twist(off)))
                    .collect();
                if let Some(chs) = chs {
                    let total: ChernCharacter = chs.into_iter().sum();
                    if self.families[f].chern.as_ref() != Some(&total) {
                        self.set_chern(f, total)?;
                        changed = true;
                    }
                }
            }
        }
        for t in order(self.triples.len(), schedule) {
            let parts = self.triples[t].parts;
            let known: Vec<Option<ChernCharacter>> = parts
                .iter()
                .map(|&(f, tw)| self.families[f].chern.as_ref().map(|c| c.twist(tw)))
                .collect();
            let missing: Vec<usize> = (0..3).filter(|&i| known[i].is_none()).collect();
            match missing.as_slice() {
                [] => {
                    let (a, b, c) = (known[0].as_ref().unwrap(), known[1].as_ref().unwrap(), known[2].as_ref().unwrap());
                    if &(a + c) != b {
                        return Err(EngineError::ChernMismatch {
                            node: self.triples[t].name.clone(),
                            detail: format!("ch(B) = {b} but ch(A) + ch(C) = {}", a + c),
                        });
                    }
                }
                [i] => {
                    let (f, tw) = parts[*i];
                    if parts.iter().filter(|p| p.0 == f).count() > 1 {
                        continue;
                    }
                    let others: Vec<&ChernCharacter> = (0..3).filter(|j| j != i).map(|j| known[j].as_ref().unwrap()).collect();
                    let derived = match i {
                        1 => others[0] + others[1],
                        0 => others[0] - others[1],
                        _ => others[1] - others[0],
                    };
                    self.set_chern(f, derived.twist(-tw))?;
                    changed = true;
                }
                _ => {}
            }
        }
        Ok(changed)
    }

    /// Applies `Σ c·x ≤ k` to every variable; with `eq` also `Σ c·x ≥ k`.
    fn linear(
        &mut self,
        terms: &[(Cell, i64)],
        k: i64,
        eq: bool,
        rule: Rule,
        detail: &dyn Fn() -> String,
        extra: &[Dep],
    ) -> Result<bool, EngineError> {
        let mut changed = self.linear_le(terms, k, rule, detail, extra)?;
        if eq {
            let neg: Vec<(Cell, i64)> = terms.iter().map(|&(c, x)| (c, -x)).collect();
            changed |= self.linear_le(&neg, -k, rule, detail, extra)?;
        }
        Ok(changed)
    }

    fn linear_le(
        &mut self,
        terms: &[(Cell, i64)],
        k: i64,
        rule: Rule,
        detail: &dyn Fn() -> String,
        extra: &[Dep],
    ) -> Result<bool, EngineError> {
        let mut changed = false;
        for j in 0..terms.len() {
            let (cell, cj) = terms[j];
            if cj == 0 {
                continue;
            }
            // c_j x_j ≤ k − Σ_{i≠j} min(c_i x_i)
            let mut rest_min: Option<i128> = Some(0);
            for (i, &(ci_cell, ci)) in terms.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (lo, _) = term_range(ci, self.interval(ci_cell));
                rest_min = match (rest_min, lo) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            }
            let Some(rest_min) = rest_min else { continue };
            let r = k as i128 - rest_min;
            let cj = cj as i128;
            let (lo, hi) = if cj > 0 { (None, Some(div_floor(r, cj))) } else { (Some(div_ceil(-r, -cj)), None) };
            let deps = || {
                let mut d: Vec<Dep> = terms
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &(c, _))| Dep::Cell(c.0, c.1))
                    .collect();
                d.extend_from_slice(extra);
                d
            };
            changed |= self.tighten(cell, lo, hi, rule, detail, &deps)?;
        }
        Ok(changed)
    }

    fn tighten(
        &mut self,
        cell: Cell,
        lo: Option<i128>,
        hi: Option<i128>,
        rule: Rule,
        detail: &dyn Fn() -> String,
        deps: &dyn Fn() -> Vec<Dep>,
    ) -> Result<bool, EngineError> {
        let current = self.interval(cell);
        if let Some(h) = hi {
            if h < 0 {
                return Err(EngineError::Contradiction {
                    node: self.instance_name(cell.0),
                    degree: cell.1,
                    detail: format!("{rule} forces a negative dimension ({h}): {}", detail()),
                });
            }
        }
        let bound = DimInterval::new(
            lo.map_or(0, |l| l.max(0) as u64),
            hi.map(|h| h as u64),
        );
        if !current.narrowed_by(&bound) {
            return Ok(false);
        }
        let j = self.justify(rule, detail(), deps());
        self.narrow(cell, bound, j)
    }

    /// R1.
    fn rule_chi(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        for id in order(self.instances.len(), schedule) {
            let Some(ch) = self.instance_chern(id) else { continue };
            let chi = ch.euler_characteristic().map_err(|e| EngineError::Chern(self.instance_name(id), e))?;
            let terms = [((id, 0), 1), ((id, 1), -1), ((id, 2), 1), ((id, 3), -1)];
            let name = self.instance_name(id);
            changed |= self.linear(&terms, chi, true, Rule::Chi, &|| format!("chi {name} = {chi}"), &[])?;
        }
        Ok(changed)
    }

    /// The 12 cells of a triple instance in long-exact-sequence order.
    fn les_cells(&self, ti: usize) -> [Cell; 12] {
        let nodes = self.triple_instances[ti].nodes;
        std::array::from_fn(|k| (nodes[k % 3], (k / 3) as u8))
    }

    /// R2, R3, R4 on every exact segment of every triple instance.
    fn rule_segments(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        for ti in order(self.triple_instances.len(), schedule) {
            let cells = self.les_cells(ti);
            let cuts = self.triple_instances[ti].cuts;
            let name = self.triple_instance_name(ti);
            let mut cur: Vec<Cell> = Vec::new();
            let mut left: Vec<Dep> = Vec::new();
            for (k, &cell) in cells.iter().enumerate() {
                if self.interval(cell).is_zero() {
                    let dep = Dep::Cell(cell.0, cell.1);
                    changed |= self.close_segment(&mut cur, &mut left, Some(dep), &name)?;
                    continue;
                }
                cur.push(cell);
                if k % 3 == 2 && k < 11 && cuts[k / 3].is_some() {
                    let dep = Dep::Cut(ti, (k / 3) as u8);
                    changed |= self.close_segment(&mut cur, &mut left, Some(dep), &name)?;
                }
            }
            changed |= self.close_segment(&mut cur, &mut left, None, &name)?;
        }
        Ok(changed)
    }

    fn close_segment(&mut self, cur: &mut Vec<Cell>, left: &mut Vec<Dep>, right: Option<Dep>, name: &str) -> Result<bool, EngineError> {
        let mut flank = std::mem::take(left);
        flank.extend(right);
        let changed = if cur.is_empty() { false } else { self.segment(cur, &flank, name)? };
        cur.clear();
        left.extend(right);
        Ok(changed)
    }

    fn segment(&mut self, seg: &[Cell], flank: &[Dep], name: &str) -> Result<bool, EngineError> {
        let mut changed = false;
        if seg.len() == 1 {
            let deps = || flank.to_vec();
            return self.tighten(seg[0], None, Some(0), Rule::Sandwich, &|| format!("in {name}"), &deps);
        }
        let terms: Vec<(Cell, i64)> = seg.iter().enumerate().map(|(i, &c)| (c, if i % 2 == 0 { 1 } else { -1 })).collect();
        changed |= self.linear(&terms, 0, true, Rule::SegmentSum, &|| format!("exact segment of {name}"), flank)?;
        for j in 0..seg.len() {
            let mut terms = vec![(seg[j], 1)];
            if j > 0 {
                terms.push((seg[j - 1], -1));
            }
            if j + 1 < seg.len() {
                terms.push((seg[j + 1], -1));
            }
            // only the bound on the middle term is meaningful
            let (cell, _) = terms[0];
            let mut rest: Option<u64> = Some(0);
            for &(c, _) in &terms[1..] {
                rest = match (rest, self.interval(c).hi) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            }
            if let Some(r) = rest {
                let deps = || {
                    let mut d: Vec<Dep> = terms[1..].iter().map(|&(c, _)| Dep::Cell(c.0, c.1)).collect();
                    d.extend_from_slice(flank);
                    d
                };
                changed |= self.tighten(cell, None, Some(r as i128), Rule::Subadditivity, &|| format!("in {name}"), &deps)?;
            }
        }
        Ok(changed)
    }

    /// R5.
    fn rule_duality(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        for id in order(self.instances.len(), schedule) {
            let inst = &self.instances[id];
            let fam = inst.family;
            let Some(shift) = self.families[fam].dual_shift else { continue };
            if !self.families[fam].kind.is_locally_free() && !matches!(self.families[fam].kind, SheafKind::Sum(_)) {
                continue;
            }
            let partner_twist = -inst.twist - 4 + shift;
            let Some(partner) = self.instance_id(fam, partner_twist) else { continue };
            let name = self.instance_name(id);
            let pname = self.instance_name(partner);
            for i in 0..4u8 {
                let terms = [((id, i), 1), ((partner, 3 - i), -1)];
                changed |= self.linear(&terms, 0, true, Rule::SerreDuality, &|| format!("{name} vs {pname}"), &[])?;
            }
        }
        Ok(changed)
    }

    /// R6.
    fn rule_sums(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        for id in order(self.instances.len(), schedule) {
            let inst = &self.instances[id];
            let SheafKind::Sum(parts) = &self.families[inst.family].kind else { continue };
            let t = inst.twist;
            let summands: Vec<InstanceId> = parts
                .iter()
                .map(|&(p, off)| self.instance_id(p, t + off).expect("summands are instantiated with the sum"))
                .collect();
            let name = self.instance_name(id);
            for i in 0..4u8 {
                let mut terms = vec![((id, i), 1)];
                terms.extend(summands.iter().map(|&s| ((s, i), -1)));
                changed |= self.linear(&terms, 0, true, Rule::DirectSum, &|| format!("{name} as a direct sum"), &[])?;
            }
        }
        Ok(changed)
    }

    fn set_cut(&mut self, ti: usize, i: usize, rule: Rule, detail: String, deps: Vec<Dep>) -> bool {
        if self.triple_instances[ti].cuts[i].is_some() {
            return false;
        }
        let j = self.justify(rule, detail, deps);
        self.triple_instances[ti].cuts[i] = Some(j);
        true
    }

    /// R7.
    fn rule_surjectivity(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        for ti in order(self.triple_instances.len(), schedule) {
            let [a, b, c] = self.triple_instances[ti].nodes;
            for i in 0..3usize {
                if self.triple_instances[ti].cuts[i].is_some() {
                    continue;
                }
                let next_a = (a, (i + 1) as u8);
                let here_c = (c, i as u8);
                if self.interval(next_a).is_zero() {
                    let name = self.cell_name(next_a);
                    changed |= self.set_cut(ti, i, Rule::Surjectivity, format!("{name} = 0"), vec![Dep::Cell(next_a.0, next_a.1)]);
                    continue;
                }
                if self.interval(here_c).is_zero() {
                    let name = self.cell_name(here_c);
                    changed |= self.set_cut(ti, i, Rule::Surjectivity, format!("{name} = 0"), vec![Dep::Cell(here_c.0, here_c.1)]);
                    continue;
                }
                // Hⁱ(A) ↪ Hⁱ(B) and h(B) − h(A) = h(C) force Hⁱ(B) ↠ Hⁱ(C).
                let mut inj_deps = Vec::new();
                let injective = if i == 0 {
                    true
                } else if self.triple_instances[ti].cuts[i - 1].is_some() {
                    inj_deps.push(Dep::Cut(ti, (i - 1) as u8));
                    true
                } else if self.interval((c, (i - 1) as u8)).is_zero() {
                    inj_deps.push(Dep::Cell(c, (i - 1) as u8));
                    true
                } else if self.interval((a, i as u8)).is_zero() {
                    inj_deps.push(Dep::Cell(a, i as u8));
                    true
                } else {
                    false
                };
                if !injective {
                    continue;
                }
                let (pa, pb, pc) = (
                    self.interval((a, i as u8)).pinned(),
                    self.interval((b, i as u8)).pinned(),
                    self.interval((c, i as u8)).pinned(),
                );
                if let (Some(x), Some(y), Some(z)) = (pa, pb, pc) {
                    if y >= x && y - x == z {
                        inj_deps.extend([Dep::Cell(a, i as u8), Dep::Cell(b, i as u8), Dep::Cell(c, i as u8)]);
                        let detail = format!("rank count h{i}: {y} - {x} = {z}");
                        changed |= self.set_cut(ti, i, Rule::Surjectivity, detail, inj_deps);
                    }
                }
            }
        }
        Ok(changed)
    }

    /// R8.
    fn rule_diagrams(&mut self, schedule: Schedule) -> Result<bool, EngineError> {
        let mut changed = false;
        let surj = |g: &Self, key| -> Option<usize> {
            let ti = g.triple_instance_index(key)?;
            g.triple_instances[ti].cuts[0].map(|_| ti)
        };
        for d in order(self.diagrams.len(), schedule) {
            let diag = self.diagrams[d].clone();
            let (Some(l), Some(r), Some(b)) = (surj(self, diag.left), surj(self, diag.right), surj(self, diag.bottom)) else {
                continue;
            };
            let mid = self.triple_instance_index(diag.middle).expect("diagram rows are instantiated");
            let deps = vec![Dep::Cut(l, 0), Dep::Cut(r, 0), Dep::Cut(b, 0)];
            changed |= self.set_cut(mid, 0, Rule::Diagram, format!("diagram {}", diag.name), deps);
        }
        for c in order(self.compositions.len(), schedule) {
            let comp = self.compositions[c].clone();
            let (Some(f), Some(s)) = (surj(self, comp.first), surj(self, comp.second)) else { continue };
            let whole = self.triple_instance_index(comp.whole).expect("composition rows are instantiated");
            let detail = format!("composite of {} and {}", self.triple_instance_name(f), self.triple_instance_name(s));
            changed |= self.set_cut(whole, 0, Rule::Diagram, detail, vec![Dep::Cut(f, 0), Dep::Cut(s, 0)]);
        }
        Ok(changed)
    }
}
