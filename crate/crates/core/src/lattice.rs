//! Symmetric-difference cycle structure of pairs of stable matchings and
//! the lattice operations (meet, join, comparison) built on it.
//!
//! For stable `M`, `L` covering the same vertex set, `M (sym diff) L`
//! decomposes into vertex-disjoint alternating cycles. Preferences along
//! each cycle point one way, so each cycle is either raising or lowering
//! relative to `M`; swapping along all raising cycles yields the join,
//! along all lowering cycles the meet.

use std::collections::{BTreeSet, HashSet};

use crate::instance::{EdgeId, Matching, PreferenceInstance, Side, VertexId};
use crate::stability::{covered_set, require_stable};
use crate::{Error, Result};

/// An alternating cycle of `M (sym diff) L`. Edges are stored in cyclic
/// order starting with an `M`-edge; edges at even positions belong to
/// `M`, odd positions to `L` (the forward direction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingCycle {
    pub edges: Vec<EdgeId>,
    /// True if the cycle is raising relative to the first matching `M`.
    pub raising: bool,
}

impl AlternatingCycle {
    pub fn m_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied().step_by(2)
    }

    pub fn l_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied().skip(1).step_by(2)
    }
}

/// Decomposes `M (sym diff) L` into its alternating cycles, each
/// classified raising or lowering relative to `M`. Fails if either
/// input is unstable (the difference could then contain paths).
pub fn diff_cycles(
    inst: &PreferenceInstance,
    m: &Matching,
    l: &Matching,
) -> Result<Vec<AlternatingCycle>> {
    require_stable(inst, m)?;
    require_stable(inst, l)?;

    let diff: BTreeSet<EdgeId> = m
        .edges()
        .symmetric_difference(l.edges())
        .copied()
        .collect();
    // At most one M-edge and one L-edge of the difference per vertex.
    let mut m_at: Vec<Option<EdgeId>> = vec![None; inst.vertex_count()];
    let mut l_at: Vec<Option<EdgeId>> = vec![None; inst.vertex_count()];
    for &e in &diff {
        let slot = if m.contains(e) { &mut m_at } else { &mut l_at };
        let (a, b) = inst.endpoints(e);
        slot[a.0] = Some(e);
        slot[b.0] = Some(e);
    }

    let mut seen: HashSet<EdgeId> = HashSet::new();
    let mut cycles = Vec::new();
    // Deterministic component order: scan difference edges by id.
    let mut starts: Vec<EdgeId> = diff.iter().copied().filter(|e| m.contains(*e)).collect();
    starts.sort_by(|a, b| inst.edge_id(*a).cmp(inst.edge_id(*b)));

    for start in starts {
        if seen.contains(&start) {
            continue;
        }
        let mut edges = Vec::new();
        let mut e = start;
        // Walk M-edge at an I-vertex, then the L-edge at its J-endpoint,
        // then the M-edge at that edge's I-endpoint, and so on.
        loop {
            debug_assert!(m.contains(e));
            seen.insert(e);
            edges.push(e);
            let w = inst.endpoint_j(e);
            let f = l_at[w.0].ok_or(Error::NotOrdered)?;
            seen.insert(f);
            edges.push(f);
            let next_m = inst.endpoint_i(f);
            e = m_at[next_m.0].ok_or(Error::NotOrdered)?;
            if e == start {
                break;
            }
        }
        debug_assert!(edges.len() >= 4 && edges.len() % 2 == 0);
        cycles.push(AlternatingCycle {
            raising: classify(inst, &edges),
            edges,
        });
    }
    Ok(cycles)
}

/// Raising relative to `M` means every I-vertex of the cycle prefers its
/// `M`-edge to its `L`-edge. The direction is uniform along the cycle;
/// checked at every I-vertex.
fn classify(inst: &PreferenceInstance, edges: &[EdgeId]) -> bool {
    let mut verdict = None;
    // The L-edge at position 2i+1 shares its I-vertex with the next
    // M-edge at position 2i+2 (cyclically).
    for i in (1..edges.len()).step_by(2) {
        let le = edges[i];
        let me = edges[(i + 1) % edges.len()];
        let m_vertex = inst.endpoint_i(me);
        debug_assert_eq!(m_vertex, inst.endpoint_i(le));
        let raising = inst.prefers(m_vertex, me, le);
        match verdict {
            None => verdict = Some(raising),
            Some(prev) => assert_eq!(
                prev, raising,
                "preference direction must be uniform along an alternating cycle"
            ),
        }
    }
    verdict.expect("cycle is nonempty")
}

/// Swaps the matched edges of `M` along each chosen cycle. The result is
/// always a matching but need not be stable. Fails if cycles overlap.
pub fn replace_along(
    inst: &PreferenceInstance,
    m: &Matching,
    cycles: &[AlternatingCycle],
) -> Result<Matching> {
    let mut edges: BTreeSet<EdgeId> = m.edges().clone();
    // Disjointness: a vertex on a cycle is incident to exactly two of
    // its edges, so any count above two means the cycles overlap.
    let mut count = vec![0usize; inst.vertex_count()];
    for cycle in cycles {
        for &e in &cycle.edges {
            let (a, b) = inst.endpoints(e);
            count[a.0] += 1;
            count[b.0] += 1;
        }
    }
    if count.iter().any(|&c| c > 2) {
        let v = count.iter().position(|&c| c > 2).unwrap();
        return Err(Error::OverlappingCycles(
            inst.vertex_id(VertexId(v)).to_string(),
        ));
    }
    for cycle in cycles {
        for &e in cycle.edges.iter() {
            if m.contains(e) {
                edges.remove(&e);
            } else {
                edges.insert(e);
            }
        }
    }
    Matching::new(inst, edges)
}

/// Greatest lower bound of `M` and `L` in the lattice of stable
/// matchings: swap along all lowering cycles.
pub fn meet(inst: &PreferenceInstance, m: &Matching, l: &Matching) -> Result<Matching> {
    let cycles = diff_cycles(inst, m, l)?;
    let lowering: Vec<AlternatingCycle> =
        cycles.into_iter().filter(|c| !c.raising).collect();
    replace_along(inst, m, &lowering)
}

/// Least upper bound: swap along all raising cycles.
pub fn join(inst: &PreferenceInstance, m: &Matching, l: &Matching) -> Result<Matching> {
    let cycles = diff_cycles(inst, m, l)?;
    let raising: Vec<AlternatingCycle> =
        cycles.into_iter().filter(|c| c.raising).collect();
    replace_along(inst, m, &raising)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOrder {
    Equal,
    /// The first argument precedes the second.
    Less,
    /// The second argument precedes the first.
    Greater,
    Incomparable,
}

/// Compares stable matchings edge-wise at every covered I-vertex.
pub fn compare(
    inst: &PreferenceInstance,
    m: &Matching,
    l: &Matching,
) -> Result<LatticeOrder> {
    require_stable(inst, m)?;
    require_stable(inst, l)?;
    let assign_m = m.assignment(inst);
    let assign_l = l.assignment(inst);
    let mut le = true;
    let mut ge = true;
    for v in covered_set(inst) {
        if inst.side(v) != Side::I {
            continue;
        }
        let em = assign_m[v.0].expect("stable matchings cover the covered set");
        let el = assign_l[v.0].expect("stable matchings cover the covered set");
        let rm = inst.rank_at(em, v);
        let rl = inst.rank_at(el, v);
        le &= rm <= rl;
        ge &= rm >= rl;
    }
    Ok(match (le, ge) {
        (true, true) => LatticeOrder::Equal,
        (true, false) => LatticeOrder::Less,
        (false, true) => LatticeOrder::Greater,
        (false, false) => LatticeOrder::Incomparable,
    })
}

/// `M` weakly precedes `L`.
pub fn precedes_or_equal(
    inst: &PreferenceInstance,
    m: &Matching,
    l: &Matching,
) -> Result<bool> {
    Ok(matches!(
        compare(inst, m, l)?,
        LatticeOrder::Equal | LatticeOrder::Less
    ))
}
