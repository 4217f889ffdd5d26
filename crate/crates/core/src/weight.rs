//! Edge weights and minimum-weight stable matchings.
//!
//! Every stable matching decomposes as `Mmin` plus a closed set of
//! rotations, and its cost splits accordingly: c(M) = c(Mmin) + sum of
//! the rotation weights over that closed set. Minimizing c over stable
//! matchings therefore reduces to a minimum-weight closed set of the
//! rotation digraph.

use std::collections::BTreeSet;

use crate::closure::{min_weight_closure, ClosureInstance};
use crate::error::Error;
use crate::instance::{EdgeId, Matching, PreferenceInstance, Side};
use crate::poset::{build_digraph, ideal_to_matching, Ideal};
use crate::rotation::Rotation;
use crate::scalar::{parse_decimal, Scalar, Weight};
use crate::stability::deferred_acceptance;
use crate::Result;

/// Total weight function on the instance's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> WeightFunction<T> {
    /// Constant-zero weights.
    pub fn zero(inst: &PreferenceInstance) -> Self {
        Self {
            values: vec![T::zero(); inst.edge_count()],
        }
    }

    pub fn from_values(inst: &PreferenceInstance, values: Vec<T>) -> Self {
        assert_eq!(values.len(), inst.edge_count());
        Self { values }
    }

    pub fn get(&self, e: EdgeId) -> &T {
        &self.values[e.0]
    }

    pub fn set(&mut self, e: EdgeId, value: T) {
        self.values[e.0] = value;
    }

    pub fn matching_cost(&self, matching: &Matching) -> T {
        matching
            .edges()
            .iter()
            .fold(T::zero(), |acc, &e| acc + self.get(e).clone())
    }
}

/// Parses lines of the form `w <edge-id> <decimal>`. Edges without a
/// line default to weight 0; one warning per such edge is returned
/// alongside the function.
pub fn parse_weight_file(
    inst: &PreferenceInstance,
    text: &str,
) -> Result<(WeightFunction<Weight>, Vec<String>)> {
    let mut fun = WeightFunction::zero(inst);
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    for (line, id, value) in crate::instance::parse_edge_value_lines(text, "w")? {
        let e = inst.edge(id).map_err(|_| Error::Parse {
            line,
            msg: format!("unknown edge `{id}`"),
        })?;
        let w = parse_decimal(value).ok_or_else(|| Error::Parse {
            line,
            msg: format!("invalid decimal `{value}`"),
        })?;
        if !seen.insert(e) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate weight for edge `{id}`"),
            });
        }
        fun.set(e, w);
    }
    let warnings = inst
        .edges()
        .filter(|e| !seen.contains(e))
        .map(|e| format!("edge `{}` has no weight line; using 0", inst.edge_id(e)))
        .collect();
    Ok((fun, warnings))
}

/// c(e) = rank of e at its I-endpoint + rank at its J-endpoint,
/// both 1-based.
pub fn egalitarian_weights<T: Scalar + num_traits::FromPrimitive>(
    inst: &PreferenceInstance,
) -> WeightFunction<T> {
    let values = inst
        .edges()
        .map(|e| T::from_usize(inst.rank_i(e) + inst.rank_j(e)).unwrap())
        .collect();
    WeightFunction::from_values(inst, values)
}

/// Net cost of eliminating the rotation: active edges enter the
/// matching, matching edges leave it.
pub fn rotation_weight<T: Scalar>(rotation: &Rotation, c: &WeightFunction<T>) -> T {
    rotation.pairs().iter().fold(T::zero(), |acc, &(e, a)| {
        acc + c.get(a).clone() - c.get(e).clone()
    })
}

/// A stable matching of minimum total weight, with its cost. Ties are
/// broken toward the smallest closed rotation set, so an all-zero
/// weight function yields the I-optimal matching.
pub fn min_weight_stable_matching<T: Scalar>(
    inst: &PreferenceInstance,
    c: &WeightFunction<T>,
) -> Result<(Matching, T)> {
    let digraph = build_digraph(inst);
    let closure = ClosureInstance {
        weights: digraph
            .rotations
            .iter()
            .map(|r| rotation_weight(r, c))
            .collect(),
        arcs: digraph
            .arcs
            .iter()
            .map(|arc| (arc.from, arc.to))
            .collect(),
    };
    let res = min_weight_closure(&closure);
    let matching = ideal_to_matching(inst, &digraph, &Ideal(res.nodes))?;
    let cost = c.matching_cost(&matching);
    debug_assert_eq!(
        cost,
        c.matching_cost(&deferred_acceptance(inst, Side::I)) + res.weight,
        "matching cost must split into the base cost plus rotation weights"
    );
    Ok((matching, cost))
}
