//! Top-level solvers: the lazy subtour-cut loop over the DFJ model, the same
//! loop with local search between solver calls, and single-shot MTZ.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{input, Error, Result};
use crate::formulations::{
    build_dfj_base, build_mtz_directed, build_mtz_undirected, decode, sec_for_subtour, DfjMapping,
};
use crate::heuristics::{
    local_search_directed, vnd_undirected, Cut, HeuristicParams, SearchContext, SearchOutcome,
    Trace,
};
use crate::ilp::{solve_until, IlpModel, SolveStatus};
use crate::multigraph::{
    components, is_second_decomposition, HamCycle, Side, TwoFactorPair, UnionMultigraph,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dfj,
    Mtz,
    /// DFJ loop with directed local search
    DfjLs,
    /// DFJ loop with VND using plain moves
    DfjVnd,
    /// DFJ loop with VND and chain edge fixing
    DfjVndFix,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Dfj,
        Algorithm::Mtz,
        Algorithm::DfjLs,
        Algorithm::DfjVnd,
        Algorithm::DfjVndFix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Dfj => "dfj",
            Algorithm::Mtz => "mtz",
            Algorithm::DfjLs => "dfj-ls",
            Algorithm::DfjVnd => "dfj-vnd",
            Algorithm::DfjVndFix => "dfj-vnd-fix",
        }
    }

    pub fn supports(self, directed: bool) -> bool {
        match self {
            Algorithm::Dfj | Algorithm::Mtz => true,
            Algorithm::DfjLs => directed,
            Algorithm::DfjVnd | Algorithm::DfjVndFix => !directed,
        }
    }

    /// The heuristic variant that matches a graph's directedness.
    pub fn heuristic_for(directed: bool) -> Algorithm {
        if directed {
            Algorithm::DfjLs
        } else {
            Algorithm::DfjVndFix
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .map_or_else(|| input(format!("unknown algorithm {s:?}")), Ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible { z: HamCycle, w: HamCycle },
    Infeasible,
    TimedOut,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Feasible { .. } => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::TimedOut => "timeout",
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible { .. })
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub verdict: Verdict,
    /// solver calls
    pub iterations: usize,
    /// subtour constraints added to the model
    pub cuts_added: usize,
    pub elapsed: Duration,
    /// one entry per added subtour constraint, in insertion order
    pub cuts: Vec<Cut>,
    /// one per heuristic invocation
    pub traces: Vec<Trace>,
    /// the model as it stood at the last solver call
    pub model: IlpModel,
}

fn check_instance(g: &UnionMultigraph, x: &HamCycle, y: &HamCycle) -> Result<()> {
    if x.n() != g.n()
        || y.n() != g.n()
        || x.is_directed() != g.is_directed()
        || y.is_directed() != g.is_directed()
    {
        return input("cycles do not match the union multigraph");
    }
    Ok(())
}

fn witness(pair: &TwoFactorPair<'_>, x: &HamCycle, y: &HamCycle) -> Result<Verdict> {
    if !is_second_decomposition(pair, x, y) {
        return Err(Error::Internal(
            "reported decomposition is not a second one".into(),
        ));
    }
    let z = pair.factor_cycle(Side::Z);
    let w = pair.factor_cycle(Side::W);
    match (z, w) {
        (Some(z), Some(w)) => Ok(Verdict::Feasible { z, w }),
        _ => Err(Error::Internal(
            "decomposition factor is not a cycle".into(),
        )),
    }
}

/// DFJ model plus the cuts added so far, deduplicated by (set, side).
struct CutPool<'g> {
    graph: &'g UnionMultigraph,
    model: IlpModel,
    mapping: DfjMapping,
    seen: HashSet<Cut>,
    added: Vec<Cut>,
}

impl<'g> CutPool<'g> {
    fn new(graph: &'g UnionMultigraph) -> Self {
        let (model, mapping) = build_dfj_base(graph);
        CutPool {
            graph,
            model,
            mapping,
            seen: HashSet::new(),
            added: Vec::new(),
        }
    }

    /// Adds both subtour constraints for `vertices`; returns how many were new.
    fn add_subtour(&mut self, vertices: &[usize]) -> Result<usize> {
        let mut fresh = 0;
        for side in [Side::Z, Side::W] {
            let cut = Cut {
                vertices: vertices.to_vec(),
                side,
            };
            if self.seen.contains(&cut) {
                continue;
            }
            let mut c = sec_for_subtour(self.graph, &self.mapping, vertices, side)?;
            c.name = format!("sec{}_{side}", self.added.len());
            self.model.add_constraint(c)?;
            self.seen.insert(cut.clone());
            self.added.push(cut);
            fresh += 1;
        }
        Ok(fresh)
    }
}

fn dfj_loop(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    budget: Duration,
    algorithm: Algorithm,
    mut search: Option<SearchContext>,
) -> Result<RunResult> {
    check_instance(g, x, y)?;
    let start = Instant::now();
    let deadline = start + budget;
    let mut pool = CutPool::new(g);
    let mut iterations = 0;
    let verdict = loop {
        let out = solve_until(&pool.model, Some(deadline))?;
        iterations += 1;
        let assignment = match out.status {
            SolveStatus::Infeasible => break Verdict::Infeasible,
            SolveStatus::TimedOut => break Verdict::TimedOut,
            SolveStatus::Feasible => out.assignment.expect("feasible outcome carries a point"),
        };
        let mut pair = decode(&assignment, &pool.mapping, g)?;
        let report = components(&pair)?;
        if report.is_decomposition() {
            break witness(&pair, x, y)?;
        }
        let n = g.n();
        let mut fresh = 0;
        for (s, _) in report.subtours() {
            if s.len() < n {
                fresh += pool.add_subtour(s)?;
            }
        }
        if let Some(ctx) = search.as_mut() {
            let outcome = if g.is_directed() {
                local_search_directed(&mut pair, ctx)?
            } else {
                vnd_undirected(&mut pair, ctx)?
            };
            for cut in std::mem::take(&mut ctx.cuts) {
                fresh += pool.add_subtour(&cut.vertices)?;
            }
            match outcome {
                SearchOutcome::Decomposition => break witness(&pair, x, y)?,
                SearchOutcome::TimedOut => break Verdict::TimedOut,
                SearchOutcome::LocalMinimum => {}
            }
        }
        if fresh == 0 {
            return Err(Error::Internal(format!(
                "iteration {iterations} produced no new subtour constraint"
            )));
        }
        if Instant::now() >= deadline {
            break Verdict::TimedOut;
        }
    };
    Ok(RunResult {
        algorithm,
        verdict,
        iterations,
        cuts_added: pool.added.len(),
        elapsed: start.elapsed(),
        cuts: pool.added,
        traces: search.map(|s| s.traces).unwrap_or_default(),
        model: pool.model,
    })
}

/// Lazy subtour-cut loop: solve, split into components, cut every proper
/// subtour from both sides, repeat.
pub fn solve_dfj(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    budget: Duration,
) -> Result<RunResult> {
    dfj_loop(g, x, y, budget, Algorithm::Dfj, None)
}

/// The cut loop with local search after every solver call: directed local
/// search on directed graphs, VND on undirected ones. `params.chain_fixing`
/// selects between `dfj-vnd-fix` and `dfj-vnd`.
pub fn solve_dfj_heuristic(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    params: &HeuristicParams,
    budget: Duration,
) -> Result<RunResult> {
    params.validate()?;
    let algorithm = match (g.is_directed(), params.chain_fixing) {
        (true, _) => Algorithm::DfjLs,
        (false, true) => Algorithm::DfjVndFix,
        (false, false) => Algorithm::DfjVnd,
    };
    let deadline = Instant::now() + budget;
    let ctx = SearchContext::new(*params, Some(deadline)).forbid(x, y);
    dfj_loop(g, x, y, budget, algorithm, Some(ctx))
}

/// One solver call on the MTZ model of matching directedness.
pub fn solve_mtz(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    budget: Duration,
) -> Result<RunResult> {
    check_instance(g, x, y)?;
    let start = Instant::now();
    let (model, mapping) = if g.is_directed() {
        build_mtz_directed(g)?
    } else {
        build_mtz_undirected(g)?
    };
    let out = solve_until(&model, Some(start + budget))?;
    let verdict = match out.status {
        SolveStatus::Infeasible => Verdict::Infeasible,
        SolveStatus::TimedOut => Verdict::TimedOut,
        SolveStatus::Feasible => {
            let pair = decode(
                out.assignment
                    .as_deref()
                    .expect("feasible outcome carries a point"),
                &mapping,
                g,
            )?;
            witness(&pair, x, y)?
        }
    };
    Ok(RunResult {
        algorithm: Algorithm::Mtz,
        verdict,
        iterations: 1,
        cuts_added: 0,
        elapsed: start.elapsed(),
        cuts: Vec::new(),
        traces: Vec::new(),
        model,
    })
}

/// Dispatches on `algorithm`; rejects combinations the algorithm does not support.
pub fn run(
    algorithm: Algorithm,
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
    params: &HeuristicParams,
    budget: Duration,
) -> Result<RunResult> {
    if !algorithm.supports(g.is_directed()) {
        let kind = if g.is_directed() {
            "directed"
        } else {
            "undirected"
        };
        return input(format!("{algorithm} does not run on {kind} graphs"));
    }
    match algorithm {
        Algorithm::Dfj => solve_dfj(g, x, y, budget),
        Algorithm::Mtz => solve_mtz(g, x, y, budget),
        Algorithm::DfjLs | Algorithm::DfjVnd | Algorithm::DfjVndFix => {
            let params = HeuristicParams {
                chain_fixing: algorithm != Algorithm::DfjVnd,
                ..*params
            };
            solve_dfj_heuristic(g, x, y, &params, budget)
        }
    }
}
