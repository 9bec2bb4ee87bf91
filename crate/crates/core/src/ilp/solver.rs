//! Depth-first branch-and-propagate over binary variables, with interval
//! narrowing for bounded integer variables.
//!
//! Every constraint is normalized into `Σ a·x ≤ b` rows. Each row keeps its
//! minimum activity under the current bounds; a row whose minimum activity
//! exceeds `b` is a conflict, and a term whose span exceeds the row's slack
//! has its bound tightened. Bound changes are recorded on a trail so that
//! chronological backtracking restores them exactly.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use super::model::{IlpModel, Sense, VarKind};
use super::IlpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    TimedOut,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Value per variable, indexed by `VarId`; present iff `Feasible`.
    pub assignment: Option<Vec<i64>>,
    pub stats: SolveStats,
}

/// Solves `model` within a wall-clock budget.
pub fn solve(model: &IlpModel, budget: Duration) -> Result<SolveOutcome, IlpError> {
    solve_until(model, Instant::now().checked_add(budget))
}

/// Solves `model`, giving up at `deadline` (never, if `None`).
pub fn solve_until(model: &IlpModel, deadline: Option<Instant>) -> Result<SolveOutcome, IlpError> {
    model.validate()?;
    let start = Instant::now();
    let mut engine = Engine::new(model);
    let (status, nodes) = engine.search(deadline);
    let assignment = if status == SolveStatus::Feasible {
        let values = engine.lb.clone();
        model.verify(&values).map_err(|why| {
            IlpError::Internal(format!("solver produced an invalid point: {why}"))
        })?;
        Some(values)
    } else {
        None
    };
    Ok(SolveOutcome {
        status,
        assignment,
        stats: SolveStats {
            nodes,
            elapsed: start.elapsed(),
        },
    })
}

struct Row {
    terms: Vec<(i64, usize)>,
    rhs: i64,
    /// largest |a|·(ub − lb) over the initial bounds; rows with at least this
    /// much slack cannot tighten anything
    max_span: i64,
}

struct Decision {
    mark: usize,
    var: usize,
    value: i64,
    binary: bool,
    pos: usize,
}

struct Conflict;

struct Engine {
    rows: Vec<Row>,
    occurs: Vec<Vec<(usize, i64)>>,
    lb: Vec<i64>,
    ub: Vec<i64>,
    min_act: Vec<i64>,
    trail: Vec<(usize, i64, i64)>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    /// binaries in declaration order, then integers
    branch_order: Vec<usize>,
    is_binary: Vec<bool>,
}

impl Engine {
    fn new(model: &IlpModel) -> Self {
        let nv = model.vars().len();
        let mut lb = Vec::with_capacity(nv);
        let mut ub = Vec::with_capacity(nv);
        let mut is_binary = Vec::with_capacity(nv);
        for var in model.vars() {
            let (lo, hi) = var.kind.bounds();
            lb.push(lo);
            ub.push(hi);
            is_binary.push(var.kind == VarKind::Binary);
        }

        let mut rows = Vec::new();
        for c in model.constraints() {
            let plain: Vec<(i64, usize)> = c
                .terms
                .iter()
                .filter(|(a, _)| *a != 0)
                .map(|&(a, v)| (a, v.0))
                .collect();
            let negated = || plain.iter().map(|&(a, v)| (-a, v)).collect::<Vec<_>>();
            match c.sense {
                Sense::Le => rows.push((plain.clone(), c.rhs)),
                Sense::Ge => rows.push((negated(), -c.rhs)),
                Sense::Eq => {
                    rows.push((plain.clone(), c.rhs));
                    rows.push((negated(), -c.rhs));
                }
            }
        }
        let rows: Vec<Row> = rows
            .into_iter()
            .map(|(terms, rhs)| {
                let max_span = terms
                    .iter()
                    .map(|&(a, v)| a.abs() * (ub[v] - lb[v]))
                    .max()
                    .unwrap_or(0);
                Row {
                    terms,
                    rhs,
                    max_span,
                }
            })
            .collect();

        let mut occurs = vec![Vec::new(); nv];
        let mut min_act = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let mut act = 0;
            for &(a, v) in &row.terms {
                occurs[v].push((r, a));
                act += if a > 0 { a * lb[v] } else { a * ub[v] };
            }
            min_act.push(act);
        }

        let mut branch_order: Vec<usize> = (0..nv).filter(|&v| is_binary[v]).collect();
        branch_order.extend((0..nv).filter(|&v| !is_binary[v]));

        let nrows = rows.len();
        Engine {
            rows,
            occurs,
            lb,
            ub,
            min_act,
            trail: Vec::new(),
            queue: (0..nrows).collect(),
            queued: vec![true; nrows],
            branch_order,
            is_binary,
        }
    }

    fn search(&mut self, deadline: Option<Instant>) -> (SolveStatus, u64) {
        let mut nodes = 0u64;
        let mut decisions: Vec<Decision> = Vec::new();
        if self.propagate().is_err() {
            return (SolveStatus::Infeasible, nodes);
        }
        loop {
            let cursor = decisions.last().map_or(0, |d| d.pos);
            let Some(pos) = (cursor..self.branch_order.len())
                .find(|&p| self.lb[self.branch_order[p]] < self.ub[self.branch_order[p]])
            else {
                return (SolveStatus::Feasible, nodes);
            };
            if nodes.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d) {
                return (SolveStatus::TimedOut, nodes);
            }
            nodes += 1;

            let var = self.branch_order[pos];
            let binary = self.is_binary[var];
            let value = if binary { 1 } else { self.lb[var] };
            decisions.push(Decision {
                mark: self.trail.len(),
                var,
                value,
                binary,
                pos,
            });
            let ok = if binary {
                self.set_lb(var, 1)
            } else {
                self.set_ub(var, value)
            }
            .and_then(|_| self.propagate());
            if ok.is_err() && !self.backtrack(&mut decisions) {
                return (SolveStatus::Infeasible, nodes);
            }
        }
    }

    /// Pops decisions until one whose alternative branch propagates cleanly.
    fn backtrack(&mut self, decisions: &mut Vec<Decision>) -> bool {
        while let Some(d) = decisions.pop() {
            self.undo(d.mark);
            let alt = if d.binary {
                self.set_ub(d.var, 0)
            } else {
                self.set_lb(d.var, d.value + 1)
            };
            if alt.and_then(|_| self.propagate()).is_ok() {
                return true;
            }
        }
        false
    }

    fn set_lb(&mut self, v: usize, new: i64) -> Result<(), Conflict> {
        let old = self.lb[v];
        if new <= old {
            return Ok(());
        }
        if new > self.ub[v] {
            return Err(Conflict);
        }
        self.trail.push((v, old, self.ub[v]));
        self.lb[v] = new;
        for k in 0..self.occurs[v].len() {
            let (r, a) = self.occurs[v][k];
            if a > 0 {
                self.min_act[r] += a * (new - old);
                self.enqueue(r);
            }
        }
        Ok(())
    }

    fn set_ub(&mut self, v: usize, new: i64) -> Result<(), Conflict> {
        let old = self.ub[v];
        if new >= old {
            return Ok(());
        }
        if new < self.lb[v] {
            return Err(Conflict);
        }
        self.trail.push((v, self.lb[v], old));
        self.ub[v] = new;
        for k in 0..self.occurs[v].len() {
            let (r, a) = self.occurs[v][k];
            if a < 0 {
                self.min_act[r] += a * (new - old);
                self.enqueue(r);
            }
        }
        Ok(())
    }

    fn enqueue(&mut self, r: usize) {
        if !self.queued[r] {
            self.queued[r] = true;
            self.queue.push_back(r);
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, old_lb, old_ub) = self.trail.pop().expect("len > mark");
            let (lb, ub) = (self.lb[v], self.ub[v]);
            for &(r, a) in &self.occurs[v] {
                if a > 0 {
                    self.min_act[r] -= a * (lb - old_lb);
                } else {
                    self.min_act[r] -= a * (ub - old_ub);
                }
            }
            self.lb[v] = old_lb;
            self.ub[v] = old_ub;
        }
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        while let Some(r) = self.queue.pop_front() {
            self.queued[r] = false;
            let slack = self.rows[r].rhs - self.min_act[r];
            if slack < 0 {
                self.clear_queue();
                return Err(Conflict);
            }
            if slack >= self.rows[r].max_span {
                continue;
            }
            for k in 0..self.rows[r].terms.len() {
                let (a, v) = self.rows[r].terms[k];
                let span = self.ub[v] - self.lb[v];
                // Tightening one term never changes this row's minimum
                // activity, so `slack` stays valid across the scan.
                let res = if a > 0 {
                    if a * span > slack {
                        self.set_ub(v, self.lb[v] + slack / a)
                    } else {
                        Ok(())
                    }
                } else if -a * span > slack {
                    self.set_lb(v, self.ub[v] - slack / -a)
                } else {
                    Ok(())
                };
                if res.is_err() {
                    self.clear_queue();
                    return Err(Conflict);
                }
            }
        }
        Ok(())
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }
}
