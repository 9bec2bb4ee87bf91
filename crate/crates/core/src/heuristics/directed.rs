use super::{
    chain_fix_directed, fix_parallel, shuffled_candidates, unfix_single, FixTrail, SearchContext,
    SearchOutcome,
};
use crate::error::{input, Result};
use crate::multigraph::{Side, TwoFactorPair};

/// First-improvement local search on a directed pair: move one Z arc to W,
/// let chain fixing restore the 2-factors, keep the move if the component
/// count drops.
pub fn local_search_directed(
    pair: &mut TwoFactorPair<'_>,
    ctx: &mut SearchContext,
) -> Result<SearchOutcome> {
    if !pair.graph().is_directed() {
        return input("directed local search on an undirected graph");
    }
    let mut current = ctx.start_run(pair)?;
    if current == 2 {
        return Ok(SearchOutcome::Decomposition);
    }
    fix_parallel(pair);
    let mut trail = FixTrail::new();
    let outcome = 'search: loop {
        if ctx.expired() {
            break SearchOutcome::TimedOut;
        }
        let mut improved = false;
        for e in shuffled_candidates(pair, &mut ctx.rng) {
            if chain_fix_directed(pair, &mut trail, e, Side::W).is_ok() {
                if let Some(obj) = ctx.score(pair)? {
                    if obj < current {
                        current = obj;
                        ctx.accept(pair, obj)?;
                        trail.commit();
                        unfix_single(pair);
                        if obj == 2 {
                            break 'search SearchOutcome::Decomposition;
                        }
                        improved = true;
                        break;
                    }
                }
            }
            trail.rollback(pair, 0);
        }
        if !improved {
            break SearchOutcome::LocalMinimum;
        }
    };
    pair.clear_fixed();
    Ok(outcome)
}
