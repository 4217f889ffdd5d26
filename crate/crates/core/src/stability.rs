//! Blocking-edge detection, deferred acceptance and the invariant
//! covered vertex set.

use std::collections::{BTreeSet, VecDeque};

use crate::instance::{EdgeId, Matching, PreferenceInstance, Side, VertexId};
use crate::{Error, Result};

/// Outcome of a stability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Blocking edges in canonical id order.
    pub blocking: Vec<EdgeId>,
}

/// An edge `e = mw` outside `M` blocks iff at each endpoint the vertex
/// is uncovered or strictly prefers `e` to its matched edge.
pub fn blocking_edges(inst: &PreferenceInstance, matching: &Matching) -> StabilityReport {
    let assign = matching.assignment(inst);
    let mut blocking: Vec<EdgeId> = inst
        .edges()
        .filter(|&e| !matching.contains(e) && blocks(inst, &assign, e))
        .collect();
    blocking.sort_by(|a, b| inst.edge_id(*a).cmp(inst.edge_id(*b)));
    StabilityReport {
        stable: blocking.is_empty(),
        blocking,
    }
}

fn blocks(inst: &PreferenceInstance, assign: &[Option<EdgeId>], e: EdgeId) -> bool {
    let (m, w) = inst.endpoints(e);
    let improves = |v: VertexId| match assign[v.0] {
        None => true,
        Some(matched) => inst.prefers(v, e, matched),
    };
    improves(m) && improves(w)
}

pub fn is_stable(inst: &PreferenceInstance, matching: &Matching) -> bool {
    blocking_edges(inst, matching).stable
}

pub(crate) fn require_stable(inst: &PreferenceInstance, matching: &Matching) -> Result<()> {
    let report = blocking_edges(inst, matching);
    match report.blocking.first() {
        None => Ok(()),
        Some(&e) => Err(Error::Unstable(inst.edge_id(e).to_string())),
    }
}

/// Deferred acceptance with the given side proposing. With side `I` the
/// result is the I-optimal (J-pessimal) stable matching `Mmin`; with
/// side `J` it is `Mmax`. The result does not depend on the proposal
/// order; the queue is seeded in canonical id order so intermediate
/// states are reproducible.
pub fn deferred_acceptance(inst: &PreferenceInstance, proposing: Side) -> Matching {
    let order: Vec<VertexId> = inst.side_canonical(proposing);
    deferred_acceptance_with_order(inst, &order)
}

/// Deferred acceptance with an explicit initial proposer order, used by
/// the order-independence tests.
pub fn deferred_acceptance_with_order(
    inst: &PreferenceInstance,
    order: &[VertexId],
) -> Matching {
    // next preference index to try, per proposer
    let mut next = vec![0usize; inst.vertex_count()];
    // current matched edge per acceptor
    let mut held: Vec<Option<EdgeId>> = vec![None; inst.vertex_count()];
    let mut queue: VecDeque<VertexId> = order.iter().copied().collect();

    while let Some(p) = queue.pop_front() {
        let prefs = inst.incident_edges(p);
        while next[p.0] < prefs.len() {
            let e = prefs[next[p.0]];
            next[p.0] += 1;
            let acceptor = inst.other_endpoint(e, p);
            match held[acceptor.0] {
                None => {
                    held[acceptor.0] = Some(e);
                    break;
                }
                Some(current) if inst.prefers(acceptor, e, current) => {
                    held[acceptor.0] = Some(e);
                    // the rejected proposer goes back to the queue
                    queue.push_back(inst.other_endpoint(current, acceptor));
                    break;
                }
                Some(_) => {} // rejected outright, try the next edge
            }
        }
        // a proposer that exhausts its list stays unmatched
    }

    let edges: BTreeSet<EdgeId> = held.into_iter().flatten().collect();
    Matching::new(inst, edges).expect("deferred acceptance yields a matching")
}

/// The vertex set covered by every stable matching.
pub fn covered_set(inst: &PreferenceInstance) -> BTreeSet<VertexId> {
    deferred_acceptance(inst, Side::I).covered(inst)
}
