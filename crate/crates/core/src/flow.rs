//! Maximum flow / minimum cut with exact arithmetic, generic over the
//! scalar type (Dinic's algorithm).
//!
//! Infinite capacities are encoded as the sum of all finite capacities
//! plus one, which no finite cut can reach, so a returned minimum cut
//! never crosses an infinite arc when a finite cut exists.

use std::collections::{BTreeSet, VecDeque};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity<T> {
    Finite(T),
    Infinite,
}

/// Directed flow network under construction.
#[derive(Debug, Clone)]
pub struct FlowNetwork<T> {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, Capacity<T>)>,
}

#[derive(Debug, Clone)]
pub struct MaxFlowResult<T> {
    pub value: T,
    /// Inclusion-minimal source side of a minimum cut (contains the
    /// source, excludes the sink).
    pub min_source_side: BTreeSet<usize>,
    /// Inclusion-maximal source side of a minimum cut.
    pub max_source_side: BTreeSet<usize>,
}

impl<T: Scalar> FlowNetwork<T> {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        assert!(source < node_count && sink < node_count && source != sink);
        Self {
            node_count,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Capacity<T>) {
        assert!(from < self.node_count && to < self.node_count);
        if let Capacity::Finite(c) = &capacity {
            assert!(!c.is_negative(), "capacities must be nonnegative");
        }
        self.arcs.push((from, to, capacity));
    }

    /// Runs Dinic's algorithm; the max-flow value is checked against the
    /// capacity of the recovered minimum cut (strong duality).
    pub fn max_flow_min_cut(&self) -> MaxFlowResult<T> {
        // materialize infinite capacities
        let mut finite_sum = T::zero();
        for (_, _, cap) in &self.arcs {
            if let Capacity::Finite(c) = cap {
                finite_sum = finite_sum + c.clone();
            }
        }
        let infinite = finite_sum + T::one();

        let mut graph = Residual::new(self.node_count);
        for (from, to, cap) in &self.arcs {
            let c = match cap {
                Capacity::Finite(c) => c.clone(),
                Capacity::Infinite => infinite.clone(),
            };
            graph.add(*from, *to, c);
        }

        let value = graph.dinic(self.source, self.sink);

        let min_side = graph.reachable_from(self.source);
        let max_side: BTreeSet<usize> = {
            let to_sink = graph.co_reachable_to(self.sink);
            (0..self.node_count).filter(|v| !to_sink.contains(v)).collect()
        };

        // duality check: cut capacity across the minimal source side
        let mut cut_cap = T::zero();
        for (from, to, cap) in &self.arcs {
            if min_side.contains(from) && !min_side.contains(to) {
                let c = match cap {
                    Capacity::Finite(c) => c.clone(),
                    Capacity::Infinite => infinite.clone(),
                };
                cut_cap = cut_cap + c;
            }
        }
        assert_eq!(
            cut_cap, value,
            "max-flow value must equal the minimum-cut capacity"
        );

        MaxFlowResult {
            value,
            min_source_side: min_side,
            max_source_side: max_side,
        }
    }
}

struct Residual<T> {
    // forward-star representation: per node, indices into `edges`
    adj: Vec<Vec<usize>>,
    // (to, residual capacity, index of reverse edge)
    edges: Vec<(usize, T, usize)>,
}

impl<T: Scalar> Residual<T> {
    fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: T) -> usize {
        let fwd = self.edges.len();
        self.edges.push((to, cap, fwd + 1));
        self.adj[from].push(fwd);
        self.edges.push((from, T::zero(), fwd));
        self.adj[to].push(fwd + 1);
        fwd
    }

    fn dinic(&mut self, s: usize, t: usize) -> T {
        let mut total = T::zero();
        while let Some(level) = self.levels(s, t) {
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, None, &level, &mut iter);
                match pushed {
                    Some(f) => total = total + f,
                    None => break,
                }
            }
        }
        total
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<Option<usize>>> {
        let mut level = vec![None; self.adj.len()];
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &ei in &self.adj[v] {
                let (to, ref cap, _) = self.edges[ei];
                if cap.is_positive() && level[to].is_none() {
                    level[to] = Some(level[v].unwrap() + 1);
                    queue.push_back(to);
                }
            }
        }
        level[t].map(|_| level)
    }

    fn augment(
        &mut self,
        v: usize,
        t: usize,
        limit: Option<T>,
        level: &[Option<usize>],
        iter: &mut [usize],
    ) -> Option<T> {
        if v == t {
            return limit;
        }
        while iter[v] < self.adj[v].len() {
            let ei = self.adj[v][iter[v]];
            let (to, cap, rev) = {
                let e = &self.edges[ei];
                (e.0, e.1.clone(), e.2)
            };
            let admissible = cap.is_positive()
                && level[to].is_some()
                && level[v].map(|l| l + 1) == level[to];
            if admissible {
                let next_limit = match &limit {
                    None => cap.clone(),
                    Some(l) => l.clone().min(cap.clone()),
                };
                if let Some(f) = self.augment(to, t, Some(next_limit), level, iter) {
                    self.edges[ei].1 = self.edges[ei].1.clone() - f.clone();
                    self.edges[rev].1 = self.edges[rev].1.clone() + f.clone();
                    return Some(f);
                }
            }
            iter[v] += 1;
        }
        None
    }

    fn reachable_from(&self, s: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &ei in &self.adj[v] {
                let (to, ref cap, _) = self.edges[ei];
                if cap.is_positive() && seen.insert(to) {
                    stack.push(to);
                }
            }
        }
        seen
    }

    /// Nodes with a positive-residual path *to* `t`.
    fn co_reachable_to(&self, t: usize) -> BTreeSet<usize> {
        // walk reverse edges: u -> v with residual means v co-reaches
        // whatever u co-reaches; traverse by scanning each node's
        // outgoing edges' reverse direction
        let n = self.adj.len();
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, adj) in self.adj.iter().enumerate() {
            for &ei in adj {
                let (to, ref cap, _) = self.edges[ei];
                if cap.is_positive() {
                    incoming[to].push(v);
                }
            }
        }
        let mut seen = BTreeSet::from([t]);
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            for &u in &incoming[v] {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen
    }
}
