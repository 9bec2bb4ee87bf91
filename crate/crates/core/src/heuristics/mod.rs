//! Local search over pairs of edge-disjoint 2-factors.
//!
//! The objective is the total number of connected components of Z and W;
//! it equals 2 exactly when both factors are Hamiltonian cycles. Every
//! accepted improvement emits subtour cuts for the components of the new
//! pair so the exact driver never revisits it.

mod directed;
mod undirected;

pub use directed::local_search_directed;
pub use undirected::{ls_first_neighbourhood, ls_second_neighbourhood, vnd_undirected};

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};
use crate::multigraph::{
    components, decomposition_key, EdgeId, EdgeKey, HamCycle, Side, TwoFactorPair, Vertex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeuristicParams {
    /// random repair rollouts per start edge in the first neighbourhood
    pub attempt_limit: usize,
    /// recursion bound of the search tree in the second neighbourhood
    pub depth_limit: usize,
    pub seed: u64,
    /// recursive edge fixing on undirected graphs; off gives plain moves plus repair
    pub chain_fixing: bool,
    /// keep a copy of every accepted state in the trace
    pub record_states: bool,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        HeuristicParams {
            attempt_limit: 10,
            depth_limit: 5,
            seed: 0,
            chain_fixing: true,
            record_states: false,
        }
    }
}

impl HeuristicParams {
    pub fn validate(&self) -> Result<()> {
        if self.attempt_limit == 0 {
            return input("attempt limit must be at least 1");
        }
        Ok(())
    }
}

/// A subtour found in one factor; becomes one SEC per side in the model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    /// sorted
    pub vertices: Vec<Vertex>,
    pub side: Side,
}

/// Objective values of the accepted states of one heuristic run, starting
/// with the state it was given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub objectives: Vec<usize>,
    /// per accepted state, only when `record_states` is on
    pub states: Vec<Vec<Side>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Decomposition,
    LocalMinimum,
    TimedOut,
}

/// Fixing an edge contradicted an earlier fix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub edge: EdgeId,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "edge {} is fixed on the other side", self.edge)
    }
}

/// Undo log of side and fixed-flag changes.
#[derive(Clone, Debug, Default)]
pub struct FixTrail {
    log: Vec<(EdgeId, Side, bool)>,
}

impl FixTrail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn checkpoint(&self) -> usize {
        self.log.len()
    }

    pub fn set(&mut self, pair: &mut TwoFactorPair<'_>, e: EdgeId, side: Side, fixed: bool) {
        self.log.push((e, pair.side(e), pair.is_fixed(e)));
        pair.assign(e, side, fixed);
    }

    pub fn rollback(&mut self, pair: &mut TwoFactorPair<'_>, checkpoint: usize) {
        while self.log.len() > checkpoint {
            let (e, side, fixed) = self.log.pop().expect("len > checkpoint");
            pair.assign(e, side, fixed);
        }
    }

    /// Forgets the log; the current state becomes the new base.
    pub fn commit(&mut self) {
        self.log.clear();
    }
}

/// Fixes arc `e` on `side`, then forces the sibling out-arc of its tail and
/// the sibling in-arc of its head onto the other side, recursively.
pub fn chain_fix_directed(
    pair: &mut TwoFactorPair<'_>,
    trail: &mut FixTrail,
    e: EdgeId,
    side: Side,
) -> Result<(), Conflict> {
    let g = pair.graph();
    let mut stack = vec![(e, side)];
    while let Some((e, side)) = stack.pop() {
        if pair.is_fixed(e) {
            if pair.side(e) == side {
                continue;
            }
            return Err(Conflict { edge: e });
        }
        trail.set(pair, e, side, true);
        let (i, j) = g.endpoints(e);
        let siblings = g.out_edges(i).iter().chain(g.in_edges(j));
        stack.extend(siblings.filter(|&&f| f != e).map(|&f| (f, side.opposite())));
    }
    Ok(())
}

/// Moves and fixes edge `e` on `side`. With `cascade`, a vertex that ends up
/// with two fixed edges in one factor pushes its other unfixed edges into
/// the opposite factor, recursively. Three fixed edges in one factor at a
/// vertex is a conflict.
pub fn chain_fix_undirected(
    pair: &mut TwoFactorPair<'_>,
    trail: &mut FixTrail,
    e: EdgeId,
    side: Side,
    cascade: bool,
) -> Result<(), Conflict> {
    let g = pair.graph();
    let mut stack = vec![(e, side)];
    while let Some((e, side)) = stack.pop() {
        if pair.is_fixed(e) {
            if pair.side(e) == side {
                continue;
            }
            return Err(Conflict { edge: e });
        }
        trail.set(pair, e, side, true);
        let (i, j) = g.endpoints(e);
        for v in [i, j] {
            let fixed_here = g
                .incident(v)
                .iter()
                .filter(|&&f| pair.is_fixed(f) && pair.side(f) == side)
                .count();
            if fixed_here > 2 {
                return Err(Conflict { edge: e });
            }
            if cascade && fixed_here == 2 {
                stack.extend(
                    g.incident(v)
                        .iter()
                        .filter(|&&f| !pair.is_fixed(f))
                        .map(|&f| (f, side.opposite())),
                );
            }
        }
    }
    Ok(())
}

/// Mutable state shared by the heuristics across one solver run.
#[derive(Debug)]
pub struct SearchContext {
    pub params: HeuristicParams,
    pub rng: ChaCha8Rng,
    pub deadline: Option<Instant>,
    /// cuts emitted since the caller last drained them
    pub cuts: Vec<Cut>,
    pub traces: Vec<Trace>,
    /// decomposition that must not count as a solution
    forbidden: Option<(Vec<EdgeKey>, Vec<EdgeKey>)>,
    /// leaves visited by the last search tree
    pub(crate) last_tree_leaves: Vec<usize>,
}

impl SearchContext {
    pub fn new(params: HeuristicParams, deadline: Option<Instant>) -> Self {
        SearchContext {
            params,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            deadline,
            cuts: Vec::new(),
            traces: Vec::new(),
            forbidden: None,
            last_tree_leaves: Vec::new(),
        }
    }

    /// Marks `{x, y}` as a non-solution.
    pub fn forbid(mut self, x: &HamCycle, y: &HamCycle) -> Self {
        self.forbidden = Some(decomposition_key(x.edge_multiset(), y.edge_multiset()));
        self
    }

    /// Leaves explored per start edge by the most recent second-neighbourhood pass.
    pub fn tree_leaves(&self) -> &[usize] {
        &self.last_tree_leaves
    }

    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub(crate) fn pick<T: Copy>(&mut self, items: &[T]) -> Option<T> {
        if items.is_empty() {
            None
        } else {
            Some(items[self.rng.random_range(0..items.len())])
        }
    }

    /// Objective of a repaired pair, or `None` when the pair is the forbidden
    /// decomposition.
    pub(crate) fn score(&self, pair: &TwoFactorPair<'_>) -> Result<Option<usize>> {
        let total = components(pair)?.total;
        if total == 2 {
            if let Some(key) = &self.forbidden {
                let here =
                    decomposition_key(pair.side_multiset(Side::Z), pair.side_multiset(Side::W));
                if &here == key {
                    return Ok(None);
                }
            }
        }
        Ok(Some(total))
    }

    /// Records an accepted state and emits cuts for its proper subtours.
    pub(crate) fn accept(&mut self, pair: &TwoFactorPair<'_>, objective: usize) -> Result<()> {
        let report = components(pair)?;
        let n = pair.graph().n();
        for (s, side) in report.subtours() {
            if s.len() < n {
                self.cuts.push(Cut {
                    vertices: s.to_vec(),
                    side,
                });
            }
        }
        let trace = self.traces.last_mut().expect("run started");
        trace.objectives.push(objective);
        if self.params.record_states {
            trace.states.push(pair.sides().to_vec());
        }
        Ok(())
    }

    pub(crate) fn start_run(&mut self, pair: &TwoFactorPair<'_>) -> Result<usize> {
        if !pair.broken().is_empty() {
            return Err(Error::Contract(format!(
                "local search needs a valid pair, broken vertices {:?}",
                pair.broken()
            )));
        }
        let objective = components(pair)?.total;
        let mut trace = Trace {
            objectives: vec![objective],
            states: Vec::new(),
        };
        if self.params.record_states {
            trace.states.push(pair.sides().to_vec());
        }
        self.traces.push(trace);
        Ok(objective)
    }
}

/// Fixes both copies of every parallel pair where they currently are.
pub(crate) fn fix_parallel(pair: &mut TwoFactorPair<'_>) {
    let g = pair.graph();
    for e in g.edge_ids() {
        if g.is_parallel(e) {
            pair.set_fixed(e, true);
        }
    }
}

/// Clears every fixed flag except those on parallel copies.
pub(crate) fn unfix_single(pair: &mut TwoFactorPair<'_>) {
    let g = pair.graph();
    for e in g.edge_ids() {
        if !g.is_parallel(e) {
            pair.set_fixed(e, false);
        }
    }
}

/// Unfixed Z edges in random order.
pub(crate) fn shuffled_candidates(pair: &TwoFactorPair<'_>, rng: &mut ChaCha8Rng) -> Vec<EdgeId> {
    use rand::seq::SliceRandom;
    let mut cand: Vec<EdgeId> = pair
        .edges_on(Side::Z)
        .filter(|&e| !pair.is_fixed(e))
        .collect();
    cand.shuffle(rng);
    cand
}
