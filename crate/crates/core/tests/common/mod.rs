//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hamdec_core::multigraph::{decomposition_key, edge_key, EdgeKey};
use hamdec_core::{
    generate_instance, EdgeId, Instance, InstanceKind, InstanceSpec, UnionMultigraph,
};

pub type DecompKey = (Vec<EdgeKey>, Vec<EdgeKey>);

/// Mixed small instances: kinds cycle, directedness alternates, n walks over `ns`.
pub fn small_instances(count: usize, ns: &[usize], seed0: u64) -> Vec<(InstanceSpec, Instance)> {
    (0..count)
        .map(|k| {
            let directed = k % 2 == 1;
            let n = ns[k % ns.len()];
            let kind = match (k / 2) % 3 {
                0 => InstanceKind::RandomPermutation,
                1 => InstanceKind::Pyramidal,
                _ if n >= 8 => InstanceKind::FourPeak,
                _ => InstanceKind::RandomPermutation,
            };
            let spec = InstanceSpec::new(kind, n, directed, seed0 + k as u64);
            (spec, generate_instance(spec).unwrap())
        })
        .collect()
}

/// Components of the edge subset `keep` by union-find.
pub fn union_find_count(g: &UnionMultigraph, keep: &[bool]) -> usize {
    let n = g.n();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    let mut count = n;
    for e in g.edge_ids() {
        if keep[e.0] {
            let (a, b) = g.endpoints(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
    }
    count
}

/// True when the edge subset is one Hamiltonian cycle of `g`.
pub fn is_hamiltonian_subset(g: &UnionMultigraph, keep: &[bool]) -> bool {
    let n = g.n();
    let mut out = vec![0; n + 1];
    let mut inn = vec![0; n + 1];
    for e in g.edge_ids().filter(|e| keep[e.0]) {
        let (a, b) = g.endpoints(e);
        out[a] += 1;
        if g.is_directed() {
            inn[b] += 1;
        } else {
            out[b] += 1;
        }
    }
    let degrees_ok = (1..=n).all(|v| {
        if g.is_directed() {
            out[v] == 1 && inn[v] == 1
        } else {
            out[v] == 2
        }
    });
    degrees_ok && union_find_count(g, keep) == 1
}

/// Every Hamiltonian cycle of `g` as a set of edge ids, found by walking
/// from vertex 1 over unused edges.
pub fn hamiltonian_edge_sets(g: &UnionMultigraph) -> BTreeSet<Vec<usize>> {
    fn walk(
        g: &UnionMultigraph,
        v: usize,
        visited: &mut Vec<bool>,
        depth: usize,
        path: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        let n = g.n();
        let next: Vec<EdgeId> = if g.is_directed() {
            g.out_edges(v).to_vec()
        } else {
            g.incident(v).to_vec()
        };
        for e in next {
            if path.contains(&e.0) {
                continue;
            }
            let u = g.other_endpoint(e, v);
            if u == 1 && depth == n {
                let mut set = path.clone();
                set.push(e.0);
                set.sort_unstable();
                out.insert(set);
            } else if u != 1 && !visited[u] {
                visited[u] = true;
                path.push(e.0);
                walk(g, u, visited, depth + 1, path, out);
                path.pop();
                visited[u] = false;
            }
        }
    }
    let mut visited = vec![false; g.n() + 1];
    visited[1] = true;
    let mut out = BTreeSet::new();
    walk(g, 1, &mut visited, 1, &mut Vec::new(), &mut out);
    out
}

/// All decompositions as multiset keys, via cycle enumeration and complement check.
pub fn decompositions_by_cycles(g: &UnionMultigraph) -> BTreeSet<DecompKey> {
    let mut out = BTreeSet::new();
    for cycle in hamiltonian_edge_sets(g) {
        let mut keep = vec![false; g.num_edges()];
        for &e in &cycle {
            keep[e] = true;
        }
        let rest: Vec<bool> = keep.iter().map(|k| !k).collect();
        if !is_hamiltonian_subset(g, &rest) {
            continue;
        }
        let keys = |mask: &[bool]| {
            let mut v: Vec<EdgeKey> = g
                .edge_ids()
                .filter(|e| mask[e.0])
                .map(|e| {
                    let (a, b) = g.endpoints(e);
                    edge_key(a, b, g.is_directed())
                })
                .collect();
            v.sort_unstable();
            v
        };
        out.insert(decomposition_key(keys(&keep), keys(&rest)));
    }
    out
}
