//! The generating digraph over the rotation set, the precedence order
//! decided by reachability, and the ideal/matching bijection with full
//! enumeration and counting.
//!
//! Two local rules generate the whole precedence order. Rotations
//! sharing a vertex are ordered by the succession of their matching
//! edges at that vertex. And a rotation `C` precedes `D` when `D` holds
//! a matching edge `e'` at `m'` whose immediate successor `b = m'w` in
//! `delta(m')` belongs to no rotation while `C`'s active and matching
//! edges `a`, `e` at `w` satisfy `a <_w b <_w e`: eliminating `C` makes
//! `b` inadmissible, so `D` can never fire first.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use crate::instance::{Matching, PreferenceInstance, Side, VertexId};
use crate::rotation::{eliminate, rotation_set, rotations_between, Rotation};
use crate::stability::deferred_acceptance;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcTag {
    SharedVertex,
    SuccessorRule,
}

impl ArcTag {
    pub fn label(self) -> &'static str {
        match self {
            ArcTag::SharedVertex => "shared-vertex",
            ArcTag::SuccessorRule => "successor-rule",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub tag: ArcTag,
}

/// Generating digraph `H` over the rotation set; reachability equals
/// the precedence order on rotations.
#[derive(Debug, Clone)]
pub struct RotationDigraph {
    /// Rotations in canonical order; arc endpoints index this list.
    pub rotations: Vec<Rotation>,
    pub arcs: Vec<Arc>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

/// A downward-closed rotation subset, as indices into the digraph's
/// rotation list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ideal(pub BTreeSet<usize>);

impl Ideal {
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

/// Builds the generating digraph of an instance.
pub fn build_digraph(inst: &PreferenceInstance) -> RotationDigraph {
    let rotations = rotation_set(inst);
    let n = rotations.len();
    let mut arcs: Vec<Arc> = Vec::new();
    let mut arc_set: HashSet<(usize, usize)> = HashSet::new();
    let mut push = |arcs: &mut Vec<Arc>, from: usize, to: usize, tag: ArcTag| {
        if from != to && arc_set.insert((from, to)) {
            arcs.push(Arc { from, to, tag });
        }
    };

    // Rotations containing each vertex, and rotation membership of edges.
    let mut at_vertex: HashMap<VertexId, Vec<usize>> = HashMap::new();
    let mut in_some_rotation = vec![false; inst.edge_count()];
    for (idx, rot) in rotations.iter().enumerate() {
        for v in rot.vertices(inst) {
            at_vertex.entry(v).or_default().push(idx);
        }
        for e in rot.edges() {
            in_some_rotation[e.0] = true;
        }
    }

    // Shared-vertex rule: at any vertex the rotations fire in the order
    // of their matching edges there — preference order at I-vertices,
    // reversed at J-vertices (matched edges only improve for J along a
    // trace). Consecutive pairs suffice; the rest follows by
    // reachability.
    for (&v, members) in &at_vertex {
        if members.len() < 2 {
            continue;
        }
        let mut ordered = members.clone();
        ordered.sort_by_key(|&idx| {
            let e = rotations[idx]
                .matching_edge_at(inst, v)
                .expect("every rotation vertex has a matching edge on the cycle");
            let rank = inst.rank_at(e, v) as isize;
            match inst.side(v) {
                Side::I => rank,
                Side::J => -rank,
            }
        });
        for pair in ordered.windows(2) {
            push(&mut arcs, pair[0], pair[1], ArcTag::SharedVertex);
        }
    }

    // Successor rule: see the module docs.
    for (d_idx, d) in rotations.iter().enumerate() {
        for e_prime in d.matching_edges() {
            let m_prime = inst.endpoint_i(e_prime);
            let prefs = inst.incident_edges(m_prime);
            let pos = inst.rank_i(e_prime); // 1-based, so prefs[pos] is the successor
            let Some(&b) = prefs.get(pos) else { continue };
            if in_some_rotation[b.0] {
                continue;
            }
            let w = inst.endpoint_j(b);
            let rank_b = inst.rank_j(b);
            for &c_idx in at_vertex.get(&w).map(|v| v.as_slice()).unwrap_or(&[]) {
                if c_idx == d_idx {
                    continue;
                }
                let c = &rotations[c_idx];
                let (Some(e), Some(a)) = (
                    c.matching_edge_at(inst, w),
                    c.active_edge_at(inst, w),
                ) else {
                    continue;
                };
                if inst.rank_at(a, w) < rank_b && rank_b < inst.rank_at(e, w) {
                    push(&mut arcs, c_idx, d_idx, ArcTag::SuccessorRule);
                }
            }
        }
    }

    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for arc in &arcs {
        succ[arc.from].push(arc.to);
        pred[arc.to].push(arc.from);
    }
    for list in succ.iter_mut().chain(pred.iter_mut()) {
        list.sort_unstable();
    }

    let digraph = RotationDigraph {
        rotations,
        arcs,
        succ,
        pred,
    };
    assert!(digraph.is_acyclic(), "rotation digraph must be acyclic");
    digraph
}

impl RotationDigraph {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn index_of(&self, rotation: &Rotation) -> Option<usize> {
        self.rotations.iter().position(|r| r == rotation)
    }

    fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for arc in &self.arcs {
            indeg[arc.to] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &u in &self.succ[v] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    queue.push(u);
                }
            }
        }
        seen == n
    }

    /// True iff rotation `from` strictly precedes rotation `to`
    /// (reachability by a nonempty path).
    pub fn precedes(&self, from: usize, to: usize) -> bool {
        if from == to {
            return false; // irreflexive
        }
        let mut stack = vec![from];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for &u in &self.succ[v] {
                if u == to {
                    return true;
                }
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        false
    }

    /// Checks downward closure: no arc enters the set from outside.
    pub fn is_ideal(&self, indices: &BTreeSet<usize>) -> bool {
        self.arcs
            .iter()
            .all(|arc| !(indices.contains(&arc.to) && !indices.contains(&arc.from)))
    }

    fn require_ideal(&self, inst: &PreferenceInstance, indices: &BTreeSet<usize>) -> Result<()> {
        for arc in &self.arcs {
            if indices.contains(&arc.to) && !indices.contains(&arc.from) {
                return Err(Error::NotAnIdeal {
                    missing: self.rotations[arc.from].format(inst),
                });
            }
        }
        Ok(())
    }

    /// Maximal elements of a closed set under the precedence order.
    pub fn antichain_of(&self, inst: &PreferenceInstance, ideal: &Ideal) -> Result<Vec<usize>> {
        self.require_ideal(inst, &ideal.0)?;
        Ok(ideal
            .0
            .iter()
            .copied()
            .filter(|&c| {
                !ideal
                    .0
                    .iter()
                    .any(|&d| d != c && self.precedes(c, d))
            })
            .collect())
    }

    /// DOT rendering: one node per rotation (`R<k>` with its matching
    /// edges), arcs labeled by their generating rule.
    pub fn to_dot(&self, inst: &PreferenceInstance) -> String {
        let mut out = String::from("digraph rotation_poset {\n");
        for (k, rot) in self.rotations.iter().enumerate() {
            let edges = inst.format_edges(&rot.matching_edges().collect::<BTreeSet<_>>());
            let _ = writeln!(out, "  r{k} [label=\"R{k}: [{edges}]\"];");
        }
        let mut arcs = self.arcs.clone();
        arcs.sort_by_key(|a| (a.from, a.to));
        for arc in arcs {
            let _ = writeln!(
                out,
                "  r{} -> r{} [label=\"{}\"];",
                arc.from,
                arc.to,
                arc.tag.label()
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The ideal corresponding to a stable matching: the rotations used on
/// any trace segment from `Mmin` to it.
pub fn matching_to_ideal(
    inst: &PreferenceInstance,
    digraph: &RotationDigraph,
    matching: &Matching,
) -> Result<Ideal> {
    let min = deferred_acceptance(inst, Side::I);
    let used = rotations_between(inst, &min, matching)?;
    let indices = used
        .iter()
        .map(|r| {
            digraph
                .index_of(r)
                .expect("trace rotations belong to the rotation set")
        })
        .collect();
    Ok(Ideal(indices))
}

/// The stable matching corresponding to a closed rotation set:
/// eliminate its rotations from `Mmin` in a linear extension of the
/// precedence order.
pub fn ideal_to_matching(
    inst: &PreferenceInstance,
    digraph: &RotationDigraph,
    ideal: &Ideal,
) -> Result<Matching> {
    digraph.require_ideal(inst, &ideal.0)?;
    // topological order within the ideal
    let mut indeg: HashMap<usize, usize> = ideal.0.iter().map(|&i| (i, 0)).collect();
    for arc in &digraph.arcs {
        if ideal.0.contains(&arc.from) && ideal.0.contains(&arc.to) {
            *indeg.get_mut(&arc.to).unwrap() += 1;
        }
    }
    let mut ready: BTreeSet<usize> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&i, _)| i)
        .collect();
    let mut current = deferred_acceptance(inst, Side::I);
    let mut done = 0usize;
    while let Some(&i) = ready.iter().next() {
        ready.remove(&i);
        current = eliminate(inst, &current, &digraph.rotations[i])?;
        done += 1;
        for &j in &digraph.succ[i] {
            if let Some(d) = indeg.get_mut(&j) {
                *d -= 1;
                if *d == 0 {
                    ready.insert(j);
                }
            }
        }
    }
    debug_assert_eq!(done, ideal.0.len());
    Ok(current)
}

/// All ideals of the digraph, in lexicographic order of their sorted
/// index sets. Fails with [`Error::CapExceeded`] when more than `cap`
/// ideals exist.
pub fn enumerate_ideals(digraph: &RotationDigraph, cap: usize) -> Result<Vec<Ideal>> {
    let n = digraph.len();
    let words = n.div_ceil(64).max(1);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let empty = vec![0u64; words];
    seen.insert(empty.clone());
    let mut stack = vec![empty];
    let mut ideals: Vec<Vec<u64>> = Vec::new();
    while let Some(bits) = stack.pop() {
        ideals.push(bits.clone());
        if ideals.len() > cap {
            return Err(Error::CapExceeded(cap));
        }
        for j in 0..n {
            if bits[j / 64] >> (j % 64) & 1 == 1 {
                continue;
            }
            // j is addable when all of its direct predecessors are in
            let addable = digraph.pred[j]
                .iter()
                .all(|&p| bits[p / 64] >> (p % 64) & 1 == 1);
            if addable {
                let mut next = bits.clone();
                next[j / 64] |= 1 << (j % 64);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
    }
    let mut out: Vec<Ideal> = ideals
        .into_iter()
        .map(|bits| {
            Ideal(
                (0..n)
                    .filter(|&j| bits[j / 64] >> (j % 64) & 1 == 1)
                    .collect(),
            )
        })
        .collect();
    out.sort_by_key(|ideal| ideal.indices());
    Ok(out)
}

/// All stable matchings via the ideal bijection, in lexicographic order
/// of sorted rotation index sets.
pub fn enumerate_stable_matchings(
    inst: &PreferenceInstance,
    cap: Option<usize>,
) -> Result<Vec<Matching>> {
    let digraph = build_digraph(inst);
    let ideals = enumerate_ideals(&digraph, cap.unwrap_or(usize::MAX))?;
    ideals
        .iter()
        .map(|ideal| ideal_to_matching(inst, &digraph, ideal))
        .collect()
}

/// Number of stable matchings, by ideal enumeration. Worst case is
/// exponential in the rotation count; the cap keeps misuse loud.
pub fn count_stable_matchings(inst: &PreferenceInstance, cap: Option<usize>) -> Result<usize> {
    let digraph = build_digraph(inst);
    Ok(enumerate_ideals(&digraph, cap.unwrap_or(usize::MAX))?.len())
}
