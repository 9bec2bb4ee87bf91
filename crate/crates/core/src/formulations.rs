//! ILP models of the second Hamiltonian decomposition problem.
//!
//! DFJ uses one binary per edge (`z_e = 1` iff `e ∈ Z`) with degree
//! equalities, constraints forbidding `x` and `y`, and lazily added subtour
//! elimination constraints. MTZ replaces the subtour constraints by order
//! variables `α_i` (for Z) and `β_i` (for W), `i = 2..n`, anchored at
//! vertex 1. On undirected graphs MTZ works on oriented copies of every
//! edge: four binaries `z_ij, z_ji, w_ij, w_ji` per edge.
//!
//! In every model the two copies of a parallel edge are split between the
//! factors; a Hamiltonian cycle on n ≥ 3 vertices never uses both.

use crate::error::{input, Error, Result};
use crate::ilp::{IlpModel, LinearConstraint, Sense, VarId};
use crate::multigraph::{EdgeId, Origin, Side, TwoFactorPair, UnionMultigraph, Vertex};

/// Reads a factor assignment back out of a solver point.
pub trait FactorMapping {
    fn side_of(&self, values: &[i64], e: EdgeId) -> Result<Side>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfjMapping {
    z: Vec<VarId>,
    /// `E(x) \ E(y)`
    pub unique_x: Vec<EdgeId>,
    /// `E(y) \ E(x)`
    pub unique_y: Vec<EdgeId>,
}

impl DfjMapping {
    pub fn z_var(&self, e: EdgeId) -> VarId {
        self.z[e.0]
    }

    /// Solver point that encodes `pair` (`z_e = 1` iff `e ∈ Z`).
    pub fn encode(&self, pair: &TwoFactorPair<'_>) -> Vec<i64> {
        let mut values = vec![0; self.z.len()];
        for (e, &var) in self.z.iter().enumerate() {
            values[var.0] = i64::from(pair.side(EdgeId(e)) == Side::Z);
        }
        values
    }
}

impl FactorMapping for DfjMapping {
    fn side_of(&self, values: &[i64], e: EdgeId) -> Result<Side> {
        match values[self.z[e.0].0] {
            1 => Ok(Side::Z),
            0 => Ok(Side::W),
            v => Err(Error::Internal(format!("z_{e} = {v} is not binary"))),
        }
    }
}

fn binary_sum(vars: impl IntoIterator<Item = VarId>) -> Vec<(i64, VarId)> {
    vars.into_iter().map(|v| (1, v)).collect()
}

fn push(model: &mut IlpModel, c: LinearConstraint) {
    model
        .add_constraint(c)
        .expect("formulations only reference declared variables");
}

fn forbid_given_cycles(model: &mut IlpModel, g: &UnionMultigraph, z: &[VarId]) -> DfjMapping {
    let unique_x = g.unique_edges(Origin::FromX);
    let unique_y = g.unique_edges(Origin::FromY);
    for (name, unique) in [("forbid_x", &unique_x), ("forbid_y", &unique_y)] {
        let terms = binary_sum(unique.iter().map(|e| z[e.0]));
        push(
            model,
            LinearConstraint::new(name, terms, Sense::Le, unique.len() as i64 - 1),
        );
    }
    DfjMapping {
        z: z.to_vec(),
        unique_x,
        unique_y,
    }
}

fn dfj_base_into(model: &mut IlpModel, g: &UnionMultigraph) -> DfjMapping {
    let z: Vec<VarId> = g
        .edge_ids()
        .map(|e| model.add_binary(format!("z_{e}")))
        .collect();
    for v in 1..=g.n() {
        if g.is_directed() {
            let out = binary_sum(g.out_edges(v).iter().map(|e| z[e.0]));
            push(
                model,
                LinearConstraint::new(format!("out_{v}"), out, Sense::Eq, 1),
            );
            let inn = binary_sum(g.in_edges(v).iter().map(|e| z[e.0]));
            push(
                model,
                LinearConstraint::new(format!("in_{v}"), inn, Sense::Eq, 1),
            );
        } else {
            let deg = binary_sum(g.incident(v).iter().map(|e| z[e.0]));
            push(
                model,
                LinearConstraint::new(format!("deg_{v}"), deg, Sense::Eq, 2),
            );
        }
    }
    let mapping = forbid_given_cycles(model, g, &z);
    for (a, b) in g.parallel_pairs() {
        push(
            model,
            LinearConstraint::new(
                format!("par_{a}_{b}"),
                binary_sum([z[a.0], z[b.0]]),
                Sense::Eq,
                1,
            ),
        );
    }
    mapping
}

/// Degree, forbid-x/y and parallel-split constraints over one binary per edge.
pub fn build_dfj_base(g: &UnionMultigraph) -> (IlpModel, DfjMapping) {
    let kind = if g.is_directed() {
        "directed"
    } else {
        "undirected"
    };
    let mut model = IlpModel::new(format!("dfj_{kind}_n{}", g.n()));
    let mapping = dfj_base_into(&mut model, g);
    (model, mapping)
}

/// Subtour elimination constraint for the vertex set `subset`.
///
/// Z side: `Σ_{e ∈ E_S} z_e ≤ |S| − 1`.
/// W side: `Σ_{e ∈ E_S} z_e ≥ |E_S| − |S| + 1`.
pub fn sec_for_subtour(
    g: &UnionMultigraph,
    mapping: &DfjMapping,
    subset: &[Vertex],
    side: Side,
) -> Result<LinearConstraint> {
    let n = g.n();
    let mut members = vec![false; n + 1];
    for &v in subset {
        if v == 0 || v > n {
            return input(format!("vertex {v} outside 1..={n}"));
        }
        if members[v] {
            return input(format!("vertex {v} repeated in subtour"));
        }
        members[v] = true;
    }
    if subset.is_empty() || subset.len() == n {
        return input("subtour constraints need a non-empty proper subset");
    }
    let inside = g.induced_edges(&members);
    let terms = binary_sum(inside.iter().map(|&e| mapping.z_var(e)));
    let s = subset.len() as i64;
    let c = match side {
        Side::Z => LinearConstraint::new("sec_z", terms, Sense::Le, s - 1),
        Side::W => LinearConstraint::new("sec_w", terms, Sense::Ge, inside.len() as i64 - s + 1),
    };
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtzMapping {
    directed: bool,
    /// directed: one z var per edge
    z: Vec<VarId>,
    /// undirected: `[z_fwd, z_rev, w_fwd, w_rev]` per edge, fwd = tail → head
    quads: Vec<[VarId; 4]>,
    /// order variables by label; `None` for vertex 1
    pub alpha: Vec<Option<VarId>>,
    pub beta: Vec<Option<VarId>>,
}

impl MtzMapping {
    pub fn quad(&self, e: EdgeId) -> Option<[VarId; 4]> {
        self.quads.get(e.0).copied()
    }
}

impl FactorMapping for MtzMapping {
    fn side_of(&self, values: &[i64], e: EdgeId) -> Result<Side> {
        if self.directed {
            return match values[self.z[e.0].0] {
                1 => Ok(Side::Z),
                0 => Ok(Side::W),
                v => Err(Error::Internal(format!("z_{e} = {v} is not binary"))),
            };
        }
        let q = self.quads[e.0];
        let set: Vec<usize> = (0..4).filter(|&k| values[q[k].0] == 1).collect();
        match set.as_slice() {
            [0] | [1] => Ok(Side::Z),
            [2] | [3] => Ok(Side::W),
            _ => Err(Error::Internal(format!(
                "edge {e} has {} of its four orientation variables set",
                set.len()
            ))),
        }
    }
}

fn order_vars(model: &mut IlpModel, n: usize) -> (Vec<Option<VarId>>, Vec<Option<VarId>>) {
    let mut add = |prefix: &str| {
        let mut vars = vec![None; 2];
        vars.extend((2..=n).map(|i| {
            Some(
                model
                    .add_integer(format!("{prefix}_{i}"), 2, n as i64)
                    .expect("2 <= n"),
            )
        }));
        vars
    };
    let alpha = add("a");
    let beta = add("b");
    (alpha, beta)
}

/// Directed MTZ: the DFJ base plus `α_i − α_j + n z_e ≤ n − 1` and
/// `β_i − β_j + n(1 − z_e) ≤ n − 1` for every arc avoiding vertex 1.
pub fn build_mtz_directed(g: &UnionMultigraph) -> Result<(IlpModel, MtzMapping)> {
    if !g.is_directed() {
        return input("directed MTZ model requested for an undirected graph");
    }
    let n = g.n();
    let mut model = IlpModel::new(format!("mtz_directed_n{n}"));
    let base = dfj_base_into(&mut model, g);
    let (alpha, beta) = order_vars(&mut model, n);
    let ni = n as i64;
    for e in g.edge_ids() {
        let (i, j) = g.endpoints(e);
        if i == 1 || j == 1 {
            continue;
        }
        let (ai, aj) = (alpha[i].expect("i ≥ 2"), alpha[j].expect("j ≥ 2"));
        let (bi, bj) = (beta[i].expect("i ≥ 2"), beta[j].expect("j ≥ 2"));
        let z = base.z_var(e);
        push(
            &mut model,
            LinearConstraint::new(
                format!("ord_a_{e}"),
                vec![(1, ai), (-1, aj), (ni, z)],
                Sense::Le,
                ni - 1,
            ),
        );
        // β_i − β_j + n − n z_e ≤ n − 1
        push(
            &mut model,
            LinearConstraint::new(
                format!("ord_b_{e}"),
                vec![(1, bi), (-1, bj), (-ni, z)],
                Sense::Le,
                -1,
            ),
        );
    }
    let mapping = MtzMapping {
        directed: true,
        z: base.z,
        quads: Vec::new(),
        alpha,
        beta,
    };
    Ok((model, mapping))
}

/// Undirected MTZ over oriented edge copies.
pub fn build_mtz_undirected(g: &UnionMultigraph) -> Result<(IlpModel, MtzMapping)> {
    if g.is_directed() {
        return input("undirected MTZ model requested for a directed graph");
    }
    let n = g.n();
    let ni = n as i64;
    let mut model = IlpModel::new(format!("mtz_undirected_n{n}"));
    let quads: Vec<[VarId; 4]> = g
        .edge_ids()
        .map(|e| {
            let (i, j) = g.endpoints(e);
            [
                model.add_binary(format!("z_{e}_{i}_{j}")),
                model.add_binary(format!("z_{e}_{j}_{i}")),
                model.add_binary(format!("w_{e}_{i}_{j}")),
                model.add_binary(format!("w_{e}_{j}_{i}")),
            ]
        })
        .collect();
    let (alpha, beta) = order_vars(&mut model, n);

    for e in g.edge_ids() {
        push(
            &mut model,
            LinearConstraint::new(format!("edge_{e}"), binary_sum(quads[e.0]), Sense::Eq, 1),
        );
    }
    // factor offsets inside a quad: Z at 0, W at 2; +0 = fwd, +1 = rev
    for v in 1..=n {
        for (offset, f) in [(0usize, "z"), (2usize, "w")] {
            let mut out = Vec::with_capacity(4);
            let mut inn = Vec::with_capacity(4);
            for &e in g.incident(v) {
                let q = quads[e.0];
                let (tail, _) = g.endpoints(e);
                let (leaving, entering) = if tail == v {
                    (q[offset], q[offset + 1])
                } else {
                    (q[offset + 1], q[offset])
                };
                out.push((1, leaving));
                inn.push((1, entering));
            }
            push(
                &mut model,
                LinearConstraint::new(format!("out_{f}_{v}"), out, Sense::Eq, 1),
            );
            push(
                &mut model,
                LinearConstraint::new(format!("in_{f}_{v}"), inn, Sense::Eq, 1),
            );
        }
    }
    for e in g.edge_ids() {
        let (i, j) = g.endpoints(e);
        if i == 1 || j == 1 {
            continue;
        }
        let q = quads[e.0];
        let (ai, aj) = (alpha[i].expect("i ≥ 2"), alpha[j].expect("j ≥ 2"));
        let (bi, bj) = (beta[i].expect("i ≥ 2"), beta[j].expect("j ≥ 2"));
        for (name, from, to, var) in [
            ("ord_z", ai, aj, q[0]),
            ("ord_z", aj, ai, q[1]),
            ("ord_w", bi, bj, q[2]),
            ("ord_w", bj, bi, q[3]),
        ] {
            let label = format!("{name}_{e}_{}", model.constraints().len());
            push(
                &mut model,
                LinearConstraint::new(
                    label,
                    vec![(1, from), (-1, to), (ni, var)],
                    Sense::Le,
                    ni - 1,
                ),
            );
        }
    }
    let unique_x = g.unique_edges(Origin::FromX);
    let unique_y = g.unique_edges(Origin::FromY);
    for (cycle, unique) in [("x", &unique_x), ("y", &unique_y)] {
        for (offset, f) in [(0usize, "z"), (2usize, "w")] {
            let terms = unique
                .iter()
                .flat_map(|e| [quads[e.0][offset], quads[e.0][offset + 1]])
                .map(|v| (1, v))
                .collect();
            push(
                &mut model,
                LinearConstraint::new(
                    format!("forbid_{cycle}_{f}"),
                    terms,
                    Sense::Le,
                    unique.len() as i64 - 1,
                ),
            );
        }
    }
    for (a, b) in g.parallel_pairs() {
        let terms = [quads[a.0][0], quads[a.0][1], quads[b.0][0], quads[b.0][1]].map(|v| (1, v));
        push(
            &mut model,
            LinearConstraint::new(format!("par_{a}_{b}"), terms.to_vec(), Sense::Eq, 1),
        );
    }
    let mapping = MtzMapping {
        directed: false,
        z: Vec::new(),
        quads,
        alpha,
        beta,
    };
    Ok((model, mapping))
}

/// Turns a feasible solver point into a 2-factor pair.
pub fn decode<'g, M: FactorMapping>(
    assignment: &[i64],
    mapping: &M,
    g: &'g UnionMultigraph,
) -> Result<TwoFactorPair<'g>> {
    let sides = g
        .edge_ids()
        .map(|e| mapping.side_of(assignment, e))
        .collect::<Result<Vec<_>>>()?;
    let pair = TwoFactorPair::new(g, sides)?;
    if !pair.broken().is_empty() {
        return Err(Error::Internal(format!(
            "decoded assignment breaks the degree contract at {:?}",
            pair.broken()
        )));
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{solve, SolveStatus};
    use crate::multigraph::{build_union, components, HamCycle};
    use std::time::Duration;

    fn undirected(x: &[usize], y: &[usize]) -> UnionMultigraph {
        build_union(
            &HamCycle::new(x.to_vec(), false).unwrap(),
            &HamCycle::new(y.to_vec(), false).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn hex_dfj_base_shape() {
        let g = undirected(&[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let (model, mapping) = build_dfj_base(&g);
        assert_eq!(model.num_binaries(), 12);
        assert_eq!(mapping.unique_x.len(), 5);
        let forbid = model
            .constraints()
            .iter()
            .find(|c| c.name == "forbid_x")
            .unwrap();
        assert_eq!(forbid.terms.len(), 5);
        assert_eq!(forbid.rhs, 4);
        let out = solve(&model, Duration::from_secs(5)).unwrap();
        assert_eq!(out.status, SolveStatus::Feasible);
        let pair = decode(out.assignment.as_ref().unwrap(), &mapping, &g).unwrap();
        assert!(components(&pair).is_ok());
    }

    #[test]
    fn identical_cycles_make_forbid_degenerate() {
        let g = undirected(&[1, 2, 3, 4], &[1, 2, 3, 4]);
        let (model, _) = build_dfj_base(&g);
        let forbid = model
            .constraints()
            .iter()
            .find(|c| c.name == "forbid_x")
            .unwrap();
        assert!(forbid.terms.is_empty());
        assert_eq!(forbid.rhs, -1);
        assert_eq!(
            solve(&model, Duration::from_secs(5)).unwrap().status,
            SolveStatus::Infeasible
        );
    }

    #[test]
    fn triangle_sec() {
        let g = undirected(&[1, 2, 3, 4, 5, 6], &[1, 2, 6, 4, 5, 3]);
        let (_, mapping) = build_dfj_base(&g);
        let sec = sec_for_subtour(&g, &mapping, &[1, 2, 6], Side::Z).unwrap();
        // edges inside {1,2,6}: both copies of 1-2, plus 2-6 and 6-1
        assert_eq!(sec.terms.len(), 4);
        assert_eq!(sec.rhs, 2);
        // Z puts one copy of 1-2, 2-6 and 6-1 into Z: three edges > 2
        let z: Vec<EdgeId> = g
            .edge_ids()
            .filter(|&e| {
                let k = g.key(e);
                [(1, 6), (2, 6), (3, 4), (3, 5)].contains(&k)
            })
            .chain([EdgeId(0), EdgeId(3)])
            .collect();
        let pair = TwoFactorPair::from_z_edges(&g, &z).unwrap();
        assert!(pair.broken().is_empty());
        assert!(!sec.is_satisfied(&mapping.encode(&pair)));
    }

    #[test]
    fn singleton_sec_is_vacuous_and_bad_sets_fail() {
        let g = undirected(&[1, 2, 3, 4, 5], &[1, 3, 5, 2, 4]);
        let (_, mapping) = build_dfj_base(&g);
        let sec = sec_for_subtour(&g, &mapping, &[3], Side::Z).unwrap();
        assert!(sec.terms.is_empty());
        assert_eq!(sec.rhs, 0);
        assert!(sec_for_subtour(&g, &mapping, &[], Side::Z).is_err());
        assert!(sec_for_subtour(&g, &mapping, &[1, 2, 3, 4, 5], Side::W).is_err());
        assert!(sec_for_subtour(&g, &mapping, &[1, 1], Side::W).is_err());
    }

    #[test]
    fn hex_mtz_undirected_shape() {
        let g = undirected(&[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let (model, mapping) = build_mtz_undirected(&g).unwrap();
        assert_eq!(model.num_binaries(), 48);
        assert!(mapping.alpha[1].is_none() && mapping.beta[1].is_none());
        assert!(mapping.alpha[2..].iter().all(Option::is_some));
        assert!(build_mtz_directed(&g).is_err());
    }

    #[test]
    fn directed_triangle_has_no_second_decomposition() {
        let x = HamCycle::new(vec![1, 2, 3], true).unwrap();
        let y = HamCycle::new(vec![1, 3, 2], true).unwrap();
        let g = build_union(&x, &y).unwrap();
        let (model, _) = build_mtz_directed(&g).unwrap();
        assert_eq!(
            solve(&model, Duration::from_secs(5)).unwrap().status,
            SolveStatus::Infeasible
        );
        assert!(build_mtz_undirected(&g).is_err());
    }

    #[test]
    fn decode_rejects_inconsistent_points() {
        let g = undirected(&[1, 2, 3, 4, 5, 6], &[1, 4, 6, 2, 3, 5]);
        let (model, mapping) = build_dfj_base(&g);
        let all_ones = vec![1; model.vars().len()];
        assert!(matches!(
            decode(&all_ones, &mapping, &g),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn all_x_to_z_decodes_to_the_given_pair() {
        let g = undirected(&[1, 2, 3, 4, 5], &[1, 3, 5, 2, 4]);
        let (_, mapping) = build_dfj_base(&g);
        let given = TwoFactorPair::from_origin(&g);
        let pair = decode(&mapping.encode(&given), &mapping, &g).unwrap();
        assert_eq!(pair.sides(), given.sides());
    }
}
