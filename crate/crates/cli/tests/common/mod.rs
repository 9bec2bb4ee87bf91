#![allow(dead_code)]

use std::collections::BTreeSet;

use hamdec_core::UnionMultigraph;

/// Number of unordered decompositions, by listing every Hamiltonian cycle as
/// an edge-id set and keeping those whose complement is Hamiltonian too.
/// Parallel copies are interchangeable, so sets are compared by endpoint lists.
pub fn brute_force_decompositions(g: &UnionMultigraph) -> usize {
    let n = g.n();
    let mut cycles = Vec::new();
    let mut used = vec![false; g.num_edges()];
    let mut seen = vec![false; n + 1];
    seen[1] = true;
    walk(g, 1, 1, &mut seen, &mut used, &mut cycles);
    let label = |mask: &[bool]| {
        let mut v: Vec<(usize, usize)> = g
            .edge_ids()
            .filter(|e| mask[e.index()])
            .map(|e| {
                let (a, b) = g.endpoints(e);
                if g.is_directed() {
                    (a, b)
                } else {
                    (a.min(b), a.max(b))
                }
            })
            .collect();
        v.sort_unstable();
        v
    };
    let mut found = BTreeSet::new();
    for mask in cycles {
        let rest: Vec<bool> = mask.iter().map(|m| !m).collect();
        if is_hamiltonian(g, &rest) {
            let (a, b) = (label(&mask), label(&rest));
            found.insert(if a <= b { (a, b) } else { (b, a) });
        }
    }
    found.len()
}

fn walk(
    g: &UnionMultigraph,
    v: usize,
    depth: usize,
    seen: &mut Vec<bool>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<bool>>,
) {
    let next = if g.is_directed() {
        g.out_edges(v)
    } else {
        g.incident(v)
    };
    for &e in next {
        if used[e.index()] {
            continue;
        }
        let u = g.other_endpoint(e, v);
        if u == 1 && depth == g.n() {
            used[e.index()] = true;
            out.push(used.clone());
            used[e.index()] = false;
        } else if !seen[u] {
            seen[u] = true;
            used[e.index()] = true;
            walk(g, u, depth + 1, seen, used, out);
            used[e.index()] = false;
            seen[u] = false;
        }
    }
}

fn is_hamiltonian(g: &UnionMultigraph, mask: &[bool]) -> bool {
    let n = g.n();
    let mut next = vec![Vec::new(); n + 1];
    for e in g.edge_ids().filter(|e| mask[e.index()]) {
        let (a, b) = g.endpoints(e);
        next[a].push(b);
        if !g.is_directed() {
            next[b].push(a);
        }
    }
    let want = if g.is_directed() { 1 } else { 2 };
    if (1..=n).any(|v| next[v].len() != want) {
        return false;
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    while let Some(v) = stack.pop() {
        for &u in &next[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen[1..].iter().all(|&s| s)
}

/// Mean and sample standard deviation by the sum-of-squares formula.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let s: f64 = xs.iter().sum();
    let ss: f64 = xs.iter().map(|x| x * x).sum();
    let mean = s / k;
    let var = if xs.len() > 1 {
        (ss - s * s / k) / (k - 1.0)
    } else {
        0.0
    };
    (mean, var.max(0.0).sqrt())
}
