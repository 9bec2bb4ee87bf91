use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    chain_fix_undirected, fix_parallel, shuffled_candidates, unfix_single, FixTrail, SearchContext,
    SearchOutcome,
};
use crate::error::{input, Result};
use crate::multigraph::{EdgeId, Side, TwoFactorPair, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Improved,
    Exhausted,
    TimedOut,
}

fn require_undirected(pair: &TwoFactorPair<'_>) -> Result<()> {
    if pair.graph().is_directed() {
        return input("undirected neighbourhoods need an undirected graph");
    }
    Ok(())
}

fn random_broken(pair: &TwoFactorPair<'_>, ctx: &mut SearchContext) -> Vertex {
    let k = ctx.rng.random_range(0..pair.broken().len());
    *pair.broken().iter().nth(k).expect("k < len")
}

/// Unfixed edges at `v` that would move its Z-degree towards 2, with the
/// side they have to move to.
fn repair_options(pair: &TwoFactorPair<'_>, v: Vertex) -> (Vec<EdgeId>, Side) {
    let (from, to) = if pair.z_degree(v) < 2 {
        (Side::W, Side::Z)
    } else {
        (Side::Z, Side::W)
    };
    let options = pair
        .graph()
        .incident(v)
        .iter()
        .copied()
        .filter(|&f| !pair.is_fixed(f) && pair.side(f) == from)
        .collect();
    (options, to)
}

/// One random rollout of broken-vertex repairs. False when a vertex cannot
/// be repaired or fixing conflicts.
fn repair_random(
    pair: &mut TwoFactorPair<'_>,
    trail: &mut FixTrail,
    ctx: &mut SearchContext,
) -> bool {
    let cascade = ctx.params.chain_fixing;
    while !pair.broken().is_empty() {
        let v = random_broken(pair, ctx);
        let (options, to) = repair_options(pair, v);
        let Some(f) = ctx.pick(&options) else {
            return false;
        };
        if chain_fix_undirected(pair, trail, f, to, cascade).is_err() {
            return false;
        }
    }
    true
}

fn first_step(
    pair: &mut TwoFactorPair<'_>,
    ctx: &mut SearchContext,
    current: &mut usize,
) -> Result<Step> {
    let cascade = ctx.params.chain_fixing;
    let mut trail = FixTrail::new();
    for e in shuffled_candidates(pair, &mut ctx.rng) {
        if ctx.expired() {
            return Ok(Step::TimedOut);
        }
        if chain_fix_undirected(pair, &mut trail, e, Side::W, cascade).is_err() {
            trail.rollback(pair, 0);
            continue;
        }
        let base = trail.checkpoint();
        let nothing_to_repair = pair.broken().is_empty();
        for _ in 0..ctx.params.attempt_limit {
            if repair_random(pair, &mut trail, ctx) {
                if let Some(obj) = ctx.score(pair)? {
                    if obj < *current {
                        *current = obj;
                        ctx.accept(pair, obj)?;
                        unfix_single(pair);
                        return Ok(Step::Improved);
                    }
                }
            }
            trail.rollback(pair, base);
            if nothing_to_repair {
                break;
            }
        }
        trail.rollback(pair, 0);
    }
    Ok(Step::Exhausted)
}

/// Depth-first search over every repair choice, `depth` counted in repairs.
/// Leaves the improving state in place and returns its objective.
fn search_tree(
    pair: &mut TwoFactorPair<'_>,
    trail: &mut FixTrail,
    ctx: &mut SearchContext,
    depth: usize,
    current: usize,
    leaves: &mut usize,
) -> Result<Option<usize>> {
    if pair.broken().is_empty() {
        *leaves += 1;
        return Ok(ctx.score(pair)?.filter(|&obj| obj < current));
    }
    if depth > ctx.params.depth_limit {
        *leaves += 1;
        return Ok(None);
    }
    let v = random_broken(pair, ctx);
    let (mut options, to) = repair_options(pair, v);
    if options.is_empty() {
        *leaves += 1;
        return Ok(None);
    }
    options.shuffle(&mut ctx.rng);
    for f in options {
        let cp = trail.checkpoint();
        if chain_fix_undirected(pair, trail, f, to, ctx.params.chain_fixing).is_ok() {
            if let Some(obj) = search_tree(pair, trail, ctx, depth + 1, current, leaves)? {
                return Ok(Some(obj));
            }
        } else {
            *leaves += 1;
        }
        trail.rollback(pair, cp);
    }
    Ok(None)
}

fn second_step(
    pair: &mut TwoFactorPair<'_>,
    ctx: &mut SearchContext,
    current: &mut usize,
) -> Result<Step> {
    let cascade = ctx.params.chain_fixing;
    let mut trail = FixTrail::new();
    ctx.last_tree_leaves.clear();
    for e in shuffled_candidates(pair, &mut ctx.rng) {
        if ctx.expired() {
            return Ok(Step::TimedOut);
        }
        let mut leaves = 0;
        let found = if chain_fix_undirected(pair, &mut trail, e, Side::W, cascade).is_ok() {
            search_tree(pair, &mut trail, ctx, 1, *current, &mut leaves)?
        } else {
            None
        };
        ctx.last_tree_leaves.push(leaves);
        if let Some(obj) = found {
            *current = obj;
            ctx.accept(pair, obj)?;
            unfix_single(pair);
            return Ok(Step::Improved);
        }
        trail.rollback(pair, 0);
    }
    Ok(Step::Exhausted)
}

fn finish(pair: &mut TwoFactorPair<'_>, outcome: SearchOutcome) -> Result<SearchOutcome> {
    pair.clear_fixed();
    Ok(outcome)
}

/// Descends in the first neighbourhood until no single move with random
/// repairs lowers the component count.
pub fn ls_first_neighbourhood(
    pair: &mut TwoFactorPair<'_>,
    ctx: &mut SearchContext,
) -> Result<SearchOutcome> {
    require_undirected(pair)?;
    let mut current = ctx.start_run(pair)?;
    if current == 2 {
        return Ok(SearchOutcome::Decomposition);
    }
    fix_parallel(pair);
    loop {
        match first_step(pair, ctx, &mut current)? {
            Step::Improved if current == 2 => return finish(pair, SearchOutcome::Decomposition),
            Step::Improved => {}
            Step::Exhausted => return finish(pair, SearchOutcome::LocalMinimum),
            Step::TimedOut => return finish(pair, SearchOutcome::TimedOut),
        }
    }
}

/// One pass of the bounded search tree: stops at the first start edge whose
/// tree reaches a pair with fewer components.
pub fn ls_second_neighbourhood(
    pair: &mut TwoFactorPair<'_>,
    ctx: &mut SearchContext,
) -> Result<SearchOutcome> {
    require_undirected(pair)?;
    let mut current = ctx.start_run(pair)?;
    if current == 2 {
        return Ok(SearchOutcome::Decomposition);
    }
    fix_parallel(pair);
    match second_step(pair, ctx, &mut current)? {
        Step::Improved if current == 2 => finish(pair, SearchOutcome::Decomposition),
        Step::Improved | Step::Exhausted => finish(pair, SearchOutcome::LocalMinimum),
        Step::TimedOut => finish(pair, SearchOutcome::TimedOut),
    }
}

/// Variable neighbourhood descent: first neighbourhood to a local minimum,
/// then the search tree; any tree improvement returns to the first.
pub fn vnd_undirected(
    pair: &mut TwoFactorPair<'_>,
    ctx: &mut SearchContext,
) -> Result<SearchOutcome> {
    require_undirected(pair)?;
    let mut current = ctx.start_run(pair)?;
    if current == 2 {
        return Ok(SearchOutcome::Decomposition);
    }
    fix_parallel(pair);
    loop {
        loop {
            match first_step(pair, ctx, &mut current)? {
                Step::Improved if current == 2 => {
                    return finish(pair, SearchOutcome::Decomposition)
                }
                Step::Improved => {}
                Step::Exhausted => break,
                Step::TimedOut => return finish(pair, SearchOutcome::TimedOut),
            }
        }
        match second_step(pair, ctx, &mut current)? {
            Step::Improved if current == 2 => return finish(pair, SearchOutcome::Decomposition),
            Step::Improved => {}
            Step::Exhausted => return finish(pair, SearchOutcome::LocalMinimum),
            Step::TimedOut => return finish(pair, SearchOutcome::TimedOut),
        }
    }
}
