//! Exponential-time reference implementations used as ground truth in
//! tests: exhaustive enumeration of stable matchings, exhaustive
//! weight minimization, and precedence checks read off the full
//! lattice. Guarded by a hard size limit so nothing production-sized
//! slips through.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::instance::{sort_matchings, EdgeId, Matching, PreferenceInstance, Side, VertexId};
use crate::rotation::{rotations_between, Rotation};
use crate::scalar::Scalar;
use crate::stability::{deferred_acceptance, is_stable};
use crate::weight::WeightFunction;
use crate::Result;

const EDGE_LIMIT: usize = 24;

fn guard(inst: &PreferenceInstance) -> Result<()> {
    if inst.edge_count() > EDGE_LIMIT {
        return Err(Error::OracleGuard {
            edges: inst.edge_count(),
            limit: EDGE_LIMIT,
        });
    }
    Ok(())
}

/// Every stable matching, found by backtracking over all matchings and
/// filtering with the blocking-edge definition. Sorted canonically.
pub fn all_stable_matchings(inst: &PreferenceInstance) -> Result<Vec<Matching>> {
    guard(inst)?;
    let edges: Vec<EdgeId> = inst.edges().collect();
    let mut found = Vec::new();
    let mut chosen: Vec<EdgeId> = Vec::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    enumerate(inst, &edges, 0, &mut chosen, &mut used, &mut found);
    let mut stable: Vec<Matching> = found
        .into_iter()
        .filter(|m| is_stable(inst, m))
        .collect();
    sort_matchings(inst, &mut stable);
    Ok(stable)
}

fn enumerate(
    inst: &PreferenceInstance,
    edges: &[EdgeId],
    from: usize,
    chosen: &mut Vec<EdgeId>,
    used: &mut BTreeSet<VertexId>,
    out: &mut Vec<Matching>,
) {
    out.push(Matching::new(inst, chosen.iter().copied().collect()).expect("disjoint by construction"));
    for i in from..edges.len() {
        let e = edges[i];
        let (m, w) = inst.endpoints(e);
        if used.contains(&m) || used.contains(&w) {
            continue;
        }
        chosen.push(e);
        used.insert(m);
        used.insert(w);
        enumerate(inst, edges, i + 1, chosen, used, out);
        chosen.pop();
        used.remove(&m);
        used.remove(&w);
    }
}

/// Exhaustive minimum of the weight function over all stable
/// matchings; ties break toward the canonically smallest matching.
pub fn oracle_min_weight<T: Scalar>(
    inst: &PreferenceInstance,
    c: &WeightFunction<T>,
) -> Result<(Matching, T)> {
    let all = all_stable_matchings(inst)?;
    all.into_iter()
        .map(|m| {
            let cost = c.matching_cost(&m);
            (m, cost)
        })
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .ok_or(Error::EmptyFamily)
}

/// Reference precedence: C must come before D, i.e. every stable
/// matching whose rotation set contains D also contains C.
pub fn oracle_precedes(
    inst: &PreferenceInstance,
    c: &Rotation,
    d: &Rotation,
) -> Result<bool> {
    if c == d {
        return Ok(false);
    }
    let min = deferred_acceptance(inst, Side::I);
    for m in all_stable_matchings(inst)? {
        let used = rotations_between(inst, &min, &m)?;
        if used.contains(d) && !used.contains(c) {
            return Ok(false);
        }
    }
    Ok(true)
}
