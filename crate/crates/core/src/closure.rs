//! Minimum-weight closed sets of a node-weighted digraph via the
//! reduction to a minimum s-t cut.
//!
//! A set is closed when no arc enters it from outside. The reduction
//! attaches a source arc of capacity `zeta(v)` to every positive-weight
//! node and a sink arc of capacity `|zeta(u)|` to every negative-weight
//! node; original arcs become infinite. The weight of a closed set then
//! differs from the corresponding cut capacity by the constant
//! `zeta(V-)`, so a minimum cut yields a minimum-weight closed set.
//! Directed cycles cannot be split by a closed set, so strongly
//! connected components are contracted to single nodes of summed weight
//! first.

use std::collections::BTreeSet;

use crate::flow::{Capacity, FlowNetwork};
use crate::scalar::Scalar;

/// Node-weighted digraph; cycles are allowed.
#[derive(Debug, Clone)]
pub struct ClosureInstance<T> {
    pub weights: Vec<T>,
    pub arcs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult<T> {
    pub nodes: BTreeSet<usize>,
    pub weight: T,
}

impl<T: Scalar> ClosureInstance<T> {
    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn is_closed(&self, nodes: &BTreeSet<usize>) -> bool {
        self.arcs
            .iter()
            .all(|(u, v)| !(nodes.contains(v) && !nodes.contains(u)))
    }

    pub fn weight_of(&self, nodes: &BTreeSet<usize>) -> T {
        nodes
            .iter()
            .fold(T::zero(), |acc, &v| acc + self.weights[v].clone())
    }
}

/// Minimum-weight closed set. Among optima, returns the unique
/// inclusion-minimal one (hence also minimal cardinality and
/// lexicographically first), which the empty set makes always feasible.
pub fn min_weight_closure<T: Scalar>(q: &ClosureInstance<T>) -> ClosureResult<T> {
    let n = q.node_count();
    if n == 0 {
        return ClosureResult {
            nodes: BTreeSet::new(),
            weight: T::zero(),
        };
    }

    // contract strongly connected components
    let comp = condense(n, &q.arcs);
    let comp_count = comp.iter().copied().max().unwrap() + 1;
    let mut weights: Vec<T> = vec![T::zero(); comp_count];
    for (v, &c) in comp.iter().enumerate() {
        weights[c] = weights[c].clone() + q.weights[v].clone();
    }
    let mut dag_arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(u, v) in &q.arcs {
        if comp[u] != comp[v] {
            dag_arcs.insert((comp[u], comp[v]));
        }
    }

    let source = comp_count;
    let sink = comp_count + 1;
    let mut net: FlowNetwork<T> = FlowNetwork::new(comp_count + 2, source, sink);
    for (c, zeta) in weights.iter().enumerate() {
        if zeta.is_positive() {
            net.add_arc(source, c, Capacity::Finite(zeta.clone()));
        } else if zeta.is_negative() {
            net.add_arc(c, sink, Capacity::Finite(zeta.abs()));
        }
        // zero-weight nodes get no terminal arc
    }
    for &(u, v) in &dag_arcs {
        net.add_arc(u, v, Capacity::Infinite);
    }

    let res = net.max_flow_min_cut();
    // The closed set is the complement of the source side; the maximal
    // source side gives the inclusion-minimal closed set.
    let chosen: BTreeSet<usize> = (0..n)
        .filter(|&v| !res.max_source_side.contains(&comp[v]))
        .collect();
    debug_assert!(q.is_closed(&chosen));
    let weight = q.weight_of(&chosen);
    ClosureResult {
        nodes: chosen,
        weight,
    }
}

/// Strongly connected components (iterative Tarjan); returns the
/// component index of each node.
fn condense(n: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u].push(v);
    }
    let mut index = vec![usize::MAX; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut comp_count = 0usize;

    // explicit DFS frames: (node, next child position)
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child == 0 {
                index[v] = next_index;
                lowlink[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *child < adj[v].len() {
                let u = adj[v][*child];
                *child += 1;
                if index[u] == usize::MAX {
                    frames.push((u, 0));
                } else if on_stack[u] {
                    lowlink[v] = lowlink[v].min(index[u]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    loop {
                        let u = stack.pop().unwrap();
                        on_stack[u] = false;
                        comp[u] = comp_count;
                        if u == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    comp
}
