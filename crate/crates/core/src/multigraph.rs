//! Graph-side data model: Hamiltonian cycles, the union multigraph `x ∪ y`,
//! pairs of edge-disjoint 2-factors and their connected components.
//!
//! Vertices are 1-based labels `1..=n` everywhere. Per-vertex tables are
//! allocated with `n + 1` slots and slot `0` is never used.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{input, Error, Result};

/// A 1-based vertex label.
pub type Vertex = usize;

/// Endpoint pair used to compare edge multisets. Undirected edges are
/// normalized to `(min, max)`, directed edges keep `(tail, head)`.
pub type EdgeKey = (Vertex, Vertex);

/// A Hamiltonian cycle stored as a vertex order that starts at vertex 1.
/// The closing edge from the last vertex back to 1 is implied.
#[derive(Clone, Debug)]
pub struct HamCycle {
    order: Vec<Vertex>,
    /// position of each label in `order`
    pos: Vec<usize>,
    directed: bool,
}

impl HamCycle {
    /// Validates `order` as a permutation of `1..=n` (n ≥ 3) and rotates it so
    /// that it starts at vertex 1.
    pub fn new(order: Vec<Vertex>, directed: bool) -> Result<Self> {
        let n = order.len();
        if n < 3 {
            return input(format!(
                "a Hamiltonian cycle needs at least 3 vertices, got {n}"
            ));
        }
        let mut seen = vec![false; n + 1];
        for &v in &order {
            if v == 0 || v > n {
                return input(format!("vertex label {v} outside 1..={n}"));
            }
            if seen[v] {
                return input(format!("vertex {v} appears twice"));
            }
            seen[v] = true;
        }
        let start = order.iter().position(|&v| v == 1).expect("1 is present");
        let mut order = order;
        order.rotate_left(start);
        let mut pos = vec![usize::MAX; n + 1];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        Ok(HamCycle {
            order,
            pos,
            directed,
        })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Successor of `v` along the stored traversal (τ).
    pub fn successor(&self, v: Vertex) -> Vertex {
        let n = self.n();
        self.order[(self.pos[v] + 1) % n]
    }

    /// Predecessor of `v` along the stored traversal (τ⁻¹).
    pub fn predecessor(&self, v: Vertex) -> Vertex {
        let n = self.n();
        self.order[(self.pos[v] + n - 1) % n]
    }

    /// The n edges `(order[k], order[k+1])` in traversal order, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.n();
        (0..n).map(move |k| (self.order[k], self.order[(k + 1) % n]))
    }

    /// Sorted multiset of edge keys.
    pub fn edge_multiset(&self) -> Vec<EdgeKey> {
        let mut keys: Vec<EdgeKey> = self
            .edges()
            .map(|(a, b)| edge_key(a, b, self.directed))
            .collect();
        keys.sort_unstable();
        keys
    }

    /// Same cycle with the traversal direction flipped (still starting at 1).
    pub fn reversed(&self) -> HamCycle {
        let mut order = self.order.clone();
        order[1..].reverse();
        HamCycle::new(order, self.directed).expect("reversal of a valid cycle")
    }
}

/// Cycles are equal when they use the same edges; for undirected cycles the
/// two traversal orientations are identified.
impl PartialEq for HamCycle {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed && self.edge_multiset() == other.edge_multiset()
    }
}

impl Eq for HamCycle {}

impl fmt::Display for HamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.directed { "→" } else { "-" };
        for (k, v) in self.order.iter().enumerate() {
            if k > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn edge_key(a: Vertex, b: Vertex, directed: bool) -> EdgeKey {
    if directed || a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    FromX,
    FromY,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: Vertex,
    pub head: Vertex,
    /// The parallel copy of this edge, if the other cycle uses it too.
    pub multiplicity_partner: Option<EdgeId>,
}

/// The multigraph `x ∪ y` with 2n edges. Edges `0..n` come from `x` in
/// traversal order, edges `n..2n` from `y`.
#[derive(Clone, Debug)]
pub struct UnionMultigraph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    origin: Vec<Origin>,
    incident: Vec<Vec<EdgeId>>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

/// Builds the union multigraph of two Hamiltonian cycles on the same vertex set.
pub fn build_union(x: &HamCycle, y: &HamCycle) -> Result<UnionMultigraph> {
    if x.n() != y.n() {
        return input(format!(
            "cycles have different sizes ({} vs {})",
            x.n(),
            y.n()
        ));
    }
    if x.is_directed() != y.is_directed() {
        return input("cycles disagree on directedness");
    }
    let n = x.n();
    let directed = x.is_directed();
    let mut edges = Vec::with_capacity(2 * n);
    let mut origin = Vec::with_capacity(2 * n);
    for (cycle, tag) in [(x, Origin::FromX), (y, Origin::FromY)] {
        for (tail, head) in cycle.edges() {
            let id = EdgeId(edges.len());
            edges.push(Edge {
                id,
                tail,
                head,
                multiplicity_partner: None,
            });
            origin.push(tag);
        }
    }

    // Link every y-edge with the x-edge of the same key. A single cycle never
    // repeats a key for n ≥ 3, so the matching is unique.
    let mut x_by_key = std::collections::HashMap::with_capacity(n);
    for e in &edges[..n] {
        x_by_key.insert(edge_key(e.tail, e.head, directed), e.id);
    }
    for k in n..2 * n {
        let key = edge_key(edges[k].tail, edges[k].head, directed);
        if let Some(&xe) = x_by_key.get(&key) {
            edges[k].multiplicity_partner = Some(xe);
            edges[xe.0].multiplicity_partner = Some(EdgeId(k));
        }
    }

    let mut incident = vec![Vec::with_capacity(4); n + 1];
    let mut out_edges = vec![Vec::with_capacity(2); n + 1];
    let mut in_edges = vec![Vec::with_capacity(2); n + 1];
    for e in &edges {
        incident[e.tail].push(e.id);
        incident[e.head].push(e.id);
        out_edges[e.tail].push(e.id);
        in_edges[e.head].push(e.id);
    }
    let g = UnionMultigraph {
        n,
        directed,
        edges,
        origin,
        incident,
        out_edges,
        in_edges,
    };
    debug_assert!(g.check_degrees().is_ok());
    Ok(g)
}

impl UnionMultigraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn origin(&self, e: EdgeId) -> Origin {
        self.origin[e.0]
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        let edge = &self.edges[e.0];
        (edge.tail, edge.head)
    }

    pub fn other_endpoint(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.endpoints(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn key(&self, e: EdgeId) -> EdgeKey {
        let (a, b) = self.endpoints(e);
        edge_key(a, b, self.directed)
    }

    pub fn partner(&self, e: EdgeId) -> Option<EdgeId> {
        self.edges[e.0].multiplicity_partner
    }

    pub fn is_parallel(&self, e: EdgeId) -> bool {
        self.partner(e).is_some()
    }

    /// All edges touching `v` (4 of them), each listed once.
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incident[v]
    }

    /// Edges stored with `v` as tail. Meaningful as arcs only when directed.
    pub fn out_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: Vertex) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Parallel pairs as `(x-copy, y-copy)`.
    pub fn parallel_pairs(&self) -> Vec<(EdgeId, EdgeId)> {
        self.edges[..self.n]
            .iter()
            .filter_map(|e| e.multiplicity_partner.map(|p| (e.id, p)))
            .collect()
    }

    /// Number of edge copies that have a parallel partner; this is `|x ∩ y|`
    /// counted over the multigraph, i.e. twice the number of parallel pairs.
    pub fn multi_edge_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.multiplicity_partner.is_some())
            .count()
    }

    /// Edges of the cycle `x` that have no copy in `y` (`E(x) \ E(y)`).
    pub fn unique_edges(&self, origin: Origin) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|&e| self.origin(e) == origin && !self.is_parallel(e))
            .collect()
    }

    /// Edges with both endpoints in `members` (indexed by label), including
    /// both copies of a parallel pair.
    pub fn induced_edges(&self, members: &[bool]) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| members[e.tail] && members[e.head])
            .map(|e| e.id)
            .collect()
    }

    pub fn check_degrees(&self) -> Result<()> {
        if self.edges.len() != 2 * self.n {
            return Err(Error::Internal(format!(
                "expected {} edges, found {}",
                2 * self.n,
                self.edges.len()
            )));
        }
        for v in 1..=self.n {
            let ok = if self.directed {
                self.out_edges[v].len() == 2 && self.in_edges[v].len() == 2
            } else {
                self.incident[v].len() == 4
            };
            if !ok {
                return Err(Error::Internal(format!(
                    "degree contract broken at vertex {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Z,
    W,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Z => Side::W,
            Side::W => Side::Z,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Z => "z",
            Side::W => "w",
        })
    }
}

/// An assignment of every edge to factor Z or W, with per-edge fixed flags
/// and the set of vertices whose Z-degree breaks the 2-factor contract.
#[derive(Clone, Debug)]
pub struct TwoFactorPair<'g> {
    graph: &'g UnionMultigraph,
    side: Vec<Side>,
    fixed: Vec<bool>,
    /// Z-degree (undirected) or Z-out-degree (directed)
    z_deg: Vec<u8>,
    /// Z-in-degree, directed only
    z_in: Vec<u8>,
    broken: BTreeSet<Vertex>,
}

/// Pairs compare equal when they refer to the same graph and agree on every
/// side and fixed flag.
impl PartialEq for TwoFactorPair<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph)
            && self.side == other.side
            && self.fixed == other.fixed
            && self.z_deg == other.z_deg
            && self.z_in == other.z_in
            && self.broken == other.broken
    }
}

impl Eq for TwoFactorPair<'_> {}

impl<'g> TwoFactorPair<'g> {
    pub fn new(graph: &'g UnionMultigraph, side: Vec<Side>) -> Result<Self> {
        if side.len() != graph.num_edges() {
            return input(format!(
                "side vector has {} entries for {} edges",
                side.len(),
                graph.num_edges()
            ));
        }
        let n = graph.n();
        let mut pair = TwoFactorPair {
            graph,
            fixed: vec![false; side.len()],
            side,
            z_deg: vec![0; n + 1],
            z_in: vec![0; n + 1],
            broken: BTreeSet::new(),
        };
        for e in graph.edge_ids() {
            if pair.side[e.0] == Side::Z {
                pair.bump(e, 1);
            }
        }
        for v in 1..=n {
            pair.refresh_broken(v);
        }
        Ok(pair)
    }

    /// The given decomposition: x in Z, y in W.
    pub fn from_origin(graph: &'g UnionMultigraph) -> Self {
        let side = graph
            .edge_ids()
            .map(|e| match graph.origin(e) {
                Origin::FromX => Side::Z,
                Origin::FromY => Side::W,
            })
            .collect();
        Self::new(graph, side).expect("length matches")
    }

    /// Puts the listed edges in Z and everything else in W.
    pub fn from_z_edges(graph: &'g UnionMultigraph, z_edges: &[EdgeId]) -> Result<Self> {
        let mut side = vec![Side::W; graph.num_edges()];
        for &e in z_edges {
            if e.0 >= side.len() {
                return input(format!("edge id {e} out of range"));
            }
            side[e.0] = Side::Z;
        }
        Self::new(graph, side)
    }

    pub fn graph(&self) -> &'g UnionMultigraph {
        self.graph
    }

    pub fn side(&self, e: EdgeId) -> Side {
        self.side[e.0]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    pub fn is_fixed(&self, e: EdgeId) -> bool {
        self.fixed[e.0]
    }

    pub fn broken(&self) -> &BTreeSet<Vertex> {
        &self.broken
    }

    /// Degree of `v` in Z (undirected). For directed pairs this is the Z-out-degree.
    pub fn z_degree(&self, v: Vertex) -> usize {
        self.z_deg[v] as usize
    }

    pub fn z_in_degree(&self, v: Vertex) -> usize {
        self.z_in[v] as usize
    }

    pub fn edges_on(&self, side: Side) -> impl Iterator<Item = EdgeId> + '_ {
        self.graph
            .edge_ids()
            .filter(move |&e| self.side[e.0] == side)
    }

    /// Sorted multiset of edge keys in one factor.
    pub fn side_multiset(&self, side: Side) -> Vec<EdgeKey> {
        let mut keys: Vec<EdgeKey> = self.edges_on(side).map(|e| self.graph.key(e)).collect();
        keys.sort_unstable();
        keys
    }

    /// Sets side and fixed flag of one edge, keeping degrees and the broken
    /// set current. Callers that need rollback go through `FixTrail`.
    pub(crate) fn assign(&mut self, e: EdgeId, side: Side, fixed: bool) {
        let prev = self.side[e.0];
        self.fixed[e.0] = fixed;
        if prev == side {
            return;
        }
        self.side[e.0] = side;
        self.bump(e, if side == Side::Z { 1 } else { -1 });
        let (a, b) = self.graph.endpoints(e);
        self.refresh_broken(a);
        self.refresh_broken(b);
    }

    pub(crate) fn set_fixed(&mut self, e: EdgeId, fixed: bool) {
        self.fixed[e.0] = fixed;
    }

    pub(crate) fn clear_fixed(&mut self) {
        self.fixed.iter_mut().for_each(|f| *f = false);
    }

    fn bump(&mut self, e: EdgeId, delta: i8) {
        let (a, b) = self.graph.endpoints(e);
        let apply = |d: &mut u8| *d = (*d as i8 + delta) as u8;
        apply(&mut self.z_deg[a]);
        if self.graph.is_directed() {
            apply(&mut self.z_in[b]);
        } else {
            apply(&mut self.z_deg[b]);
        }
    }

    fn refresh_broken(&mut self, v: Vertex) {
        let ok = if self.graph.is_directed() {
            self.z_deg[v] == 1 && self.z_in[v] == 1
        } else {
            self.z_deg[v] == 2
        };
        if ok {
            self.broken.remove(&v);
        } else {
            self.broken.insert(v);
        }
    }

    /// Extracts one factor as a Hamiltonian cycle, if it is one.
    pub fn factor_cycle(&self, side: Side) -> Option<HamCycle> {
        if !self.broken.is_empty() {
            return None;
        }
        let g = self.graph;
        let n = g.n();
        let mut order = Vec::with_capacity(n);
        let mut used_edge = vec![false; g.num_edges()];
        let mut v = 1;
        loop {
            order.push(v);
            let next = if g.is_directed() {
                g.out_edges(v)
                    .iter()
                    .copied()
                    .find(|&e| self.side(e) == side)
            } else {
                g.incident(v)
                    .iter()
                    .copied()
                    .find(|&e| self.side(e) == side && !used_edge[e.0])
            }?;
            used_edge[next.0] = true;
            v = g.other_endpoint(next, v);
            if v == 1 {
                break;
            }
            if order.len() > n {
                return None;
            }
        }
        if order.len() != n {
            return None;
        }
        HamCycle::new(order, g.is_directed()).ok()
    }
}

/// Connected components of both factors of a valid pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    /// Components of Z, each sorted, listed by smallest vertex.
    pub z_subtours: Vec<Vec<Vertex>>,
    pub w_subtours: Vec<Vec<Vertex>>,
    pub total: usize,
}

impl ComponentReport {
    pub fn is_decomposition(&self) -> bool {
        self.total == 2
    }

    /// Every (component, factor) pair, Z first.
    pub fn subtours(&self) -> impl Iterator<Item = (&[Vertex], Side)> {
        self.z_subtours
            .iter()
            .map(|s| (s.as_slice(), Side::Z))
            .chain(self.w_subtours.iter().map(|s| (s.as_slice(), Side::W)))
    }
}

/// Connected components of Z and W. Requires a pair with no broken vertices.
pub fn components(pair: &TwoFactorPair<'_>) -> Result<ComponentReport> {
    if !pair.broken().is_empty() {
        return Err(Error::Contract(format!(
            "components requested on a pair with broken vertices {:?}",
            pair.broken()
        )));
    }
    let z_subtours = side_components(pair, Side::Z);
    let w_subtours = side_components(pair, Side::W);
    let total = z_subtours.len() + w_subtours.len();
    Ok(ComponentReport {
        z_subtours,
        w_subtours,
        total,
    })
}

fn side_components(pair: &TwoFactorPair<'_>, side: Side) -> Vec<Vec<Vertex>> {
    let g = pair.graph();
    let n = g.n();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &e in g.incident(v) {
                if pair.side(e) != side {
                    continue;
                }
                let u = g.other_endpoint(e, v);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Order-insensitive identity of an unordered pair of factors.
pub fn decomposition_key(a: Vec<EdgeKey>, b: Vec<EdgeKey>) -> (Vec<EdgeKey>, Vec<EdgeKey>) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True iff both factors are Hamiltonian cycles and `{Z, W}` differs from
/// `{x, y}` as edge multisets. A pair with broken vertices is never a
/// decomposition.
pub fn is_second_decomposition(pair: &TwoFactorPair<'_>, x: &HamCycle, y: &HamCycle) -> bool {
    match components(pair) {
        Ok(report) if report.total == 2 => {}
        _ => return false,
    }
    let found = decomposition_key(pair.side_multiset(Side::Z), pair.side_multiset(Side::W));
    let given = decomposition_key(x.edge_multiset(), y.edge_multiset());
    found != given
}

/// Vertices larger than both cycle neighbours: `{ i : τ⁻¹(i) < i, τ(i) < i }`.
pub fn peaks(c: &HamCycle) -> BTreeSet<Vertex> {
    c.order()
        .iter()
        .copied()
        .filter(|&i| c.predecessor(i) < i && c.successor(i) < i)
        .collect()
}
