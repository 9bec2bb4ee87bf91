//! Exhaustive enumeration of Hamiltonian decompositions of small unions.
//!
//! Edges are assigned to Z or W one at a time. Each factor is kept as a set
//! of vertex-disjoint paths; an edge that would close a path into a cycle is
//! only allowed when the cycle covers all n vertices, and factor degrees are
//! capped at 2 (directed: one in, one out). Every complete assignment is a
//! Hamiltonian decomposition.

use std::collections::BTreeMap;

use crate::error::{input, Result};
use crate::multigraph::{
    decomposition_key, EdgeId, EdgeKey, HamCycle, Side, TwoFactorPair, UnionMultigraph,
};

pub const MAX_ORACLE_N: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub z: HamCycle,
    pub w: HamCycle,
    /// one edge-level assignment realising it
    pub sides: Vec<Side>,
}

/// Path bookkeeping for one factor.
struct Paths {
    /// for a path endpoint, the vertex at the other end
    other_end: Vec<usize>,
    /// vertices on the path, valid at endpoints
    size: Vec<usize>,
    out_deg: Vec<u8>,
    in_deg: Vec<u8>,
}

enum Undo {
    Merge {
        p: usize,
        q: usize,
        old_p: (usize, usize),
        old_q: (usize, usize),
    },
    Close,
}

impl Paths {
    fn new(n: usize) -> Self {
        Paths {
            other_end: (0..=n).collect(),
            size: vec![1; n + 1],
            out_deg: vec![0; n + 1],
            in_deg: vec![0; n + 1],
        }
    }

    /// Adds edge a–b (arc a→b when directed) if the factor stays a union of
    /// paths or becomes one Hamiltonian cycle.
    fn push(&mut self, a: usize, b: usize, directed: bool, n: usize) -> Option<Undo> {
        if directed {
            if self.out_deg[a] >= 1 || self.in_deg[b] >= 1 {
                return None;
            }
        } else if self.out_deg[a] >= 2 || self.out_deg[b] >= 2 {
            return None;
        }
        let undo = if self.other_end[a] == b && a != b {
            if self.size[a] != n {
                return None;
            }
            Undo::Close
        } else {
            let (p, q) = (self.other_end[a], self.other_end[b]);
            let undo = Undo::Merge {
                p,
                q,
                old_p: (self.other_end[p], self.size[p]),
                old_q: (self.other_end[q], self.size[q]),
            };
            let size = self.size[a] + self.size[b];
            self.other_end[p] = q;
            self.other_end[q] = p;
            self.size[p] = size;
            self.size[q] = size;
            undo
        };
        if directed {
            self.out_deg[a] += 1;
            self.in_deg[b] += 1;
        } else {
            self.out_deg[a] += 1;
            self.out_deg[b] += 1;
        }
        Some(undo)
    }

    fn pop(&mut self, a: usize, b: usize, directed: bool, undo: Undo) {
        if directed {
            self.out_deg[a] -= 1;
            self.in_deg[b] -= 1;
        } else {
            self.out_deg[a] -= 1;
            self.out_deg[b] -= 1;
        }
        if let Undo::Merge { p, q, old_p, old_q } = undo {
            (self.other_end[q], self.size[q]) = old_q;
            (self.other_end[p], self.size[p]) = old_p;
        }
    }
}

struct Search<'g> {
    g: &'g UnionMultigraph,
    order: Vec<EdgeId>,
    sides: Vec<Side>,
    factors: [Paths; 2],
    found: BTreeMap<(Vec<EdgeKey>, Vec<EdgeKey>), Vec<Side>>,
}

impl Search<'_> {
    fn run(&mut self, k: usize) {
        if k == self.order.len() {
            let pair = TwoFactorPair::new(self.g, self.sides.clone()).expect("length matches");
            let key = decomposition_key(pair.side_multiset(Side::Z), pair.side_multiset(Side::W));
            self.found.entry(key).or_insert_with(|| self.sides.clone());
            return;
        }
        let e = self.order[k];
        let (a, b) = self.g.endpoints(e);
        let (directed, n) = (self.g.is_directed(), self.g.n());
        for (slot, side) in [(0, Side::Z), (1, Side::W)] {
            if let Some(undo) = self.factors[slot].push(a, b, directed, n) {
                self.sides[e.0] = side;
                self.run(k + 1);
                self.factors[slot].pop(a, b, directed, undo);
            }
        }
    }
}

/// Every Hamiltonian decomposition of `g`, once per unordered factor pair.
pub fn enumerate_decompositions(g: &UnionMultigraph) -> Result<Vec<Decomposition>> {
    let n = g.n();
    if n > MAX_ORACLE_N {
        return input(format!(
            "oracle enumeration is limited to n <= {MAX_ORACLE_N}, got {n}"
        ));
    }
    let mut order: Vec<EdgeId> = g.edge_ids().collect();
    order.sort_by_key(|&e| {
        let (a, b) = g.endpoints(e);
        (a.min(b), a.max(b), e.0)
    });
    let mut search = Search {
        g,
        order,
        sides: vec![Side::Z; g.num_edges()],
        factors: [Paths::new(n), Paths::new(n)],
        found: BTreeMap::new(),
    };
    search.run(0);
    let mut out = Vec::with_capacity(search.found.len());
    for sides in search.found.into_values() {
        let pair = TwoFactorPair::new(g, sides.clone())?;
        let z = pair
            .factor_cycle(Side::Z)
            .expect("enumerated factors are Hamiltonian");
        let w = pair
            .factor_cycle(Side::W)
            .expect("enumerated factors are Hamiltonian");
        out.push(Decomposition { z, w, sides });
    }
    Ok(out)
}

/// Whether some decomposition other than `{x, y}` exists, with one witness.
pub fn has_second_decomposition(
    g: &UnionMultigraph,
    x: &HamCycle,
    y: &HamCycle,
) -> Result<(bool, Option<Decomposition>)> {
    let given = decomposition_key(x.edge_multiset(), y.edge_multiset());
    let witness = enumerate_decompositions(g)?
        .into_iter()
        .find(|d| decomposition_key(d.z.edge_multiset(), d.w.edge_multiset()) != given);
    Ok((witness.is_some(), witness))
}
