//! The fractional stable-matching polytope and generalized medians.
//!
//! The polytope is cut out by nonnegativity, the degree bounds
//! x(δ(v)) ≤ 1, and the comparability inequalities x(γ(e)) ≥ 1, where
//! γ(e) collects e together with every edge one of its endpoints likes
//! at least as much.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::instance::{EdgeId, Matching, PreferenceInstance, Side, VertexId};
use crate::scalar::{parse_decimal, Scalar, Weight};
use crate::stability::require_stable;
use crate::Result;

/// Sparse edge → value map; unmapped edges are 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FractionalVector<T> {
    values: BTreeMap<EdgeId, T>,
}

impl<T: Scalar> FractionalVector<T> {
    pub fn new(values: BTreeMap<EdgeId, T>) -> Self {
        Self { values }
    }

    pub fn characteristic(matching: &Matching) -> Self {
        Self {
            values: matching.edges().iter().map(|&e| (e, T::one())).collect(),
        }
    }

    /// Σ coeff_i · x_i; callers wanting a convex combination must pass
    /// nonnegative coefficients summing to one.
    pub fn combination(parts: &[(T, &FractionalVector<T>)]) -> Self {
        let mut values: BTreeMap<EdgeId, T> = BTreeMap::new();
        for (coeff, vec) in parts {
            for (&e, v) in &vec.values {
                let term = coeff.clone() * v.clone();
                values
                    .entry(e)
                    .and_modify(|acc| *acc = acc.clone() + term.clone())
                    .or_insert(term);
            }
        }
        Self { values }
    }

    pub fn get(&self, e: EdgeId) -> T {
        self.values.get(&e).cloned().unwrap_or_else(T::zero)
    }

    pub fn sum<I: IntoIterator<Item = EdgeId>>(&self, edges: I) -> T {
        edges
            .into_iter()
            .fold(T::zero(), |acc, e| acc + self.get(e))
    }

    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.values
            .iter()
            .filter(|(_, v)| v.is_positive())
            .map(|(&e, _)| e)
    }
}

/// Parses lines of the form `x <edge-id> <decimal>`; absent edges are 0.
pub fn parse_vector_file(
    inst: &PreferenceInstance,
    text: &str,
) -> Result<FractionalVector<Weight>> {
    let mut values: BTreeMap<EdgeId, Weight> = BTreeMap::new();
    for (line, id, value) in crate::instance::parse_edge_value_lines(text, "x")? {
        let e = inst.edge(id).map_err(|_| Error::Parse {
            line,
            msg: format!("unknown edge `{id}`"),
        })?;
        let v = parse_decimal(value).ok_or_else(|| Error::Parse {
            line,
            msg: format!("invalid decimal `{value}`"),
        })?;
        if values.insert(e, v).is_some() {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate entry for edge `{id}`"),
            });
        }
    }
    Ok(FractionalVector::new(values))
}

/// Outcome for one family of inequalities (or equalities).
#[derive(Debug, Clone)]
pub struct FamilyReport<T> {
    pub pass: bool,
    /// Largest violation magnitude over the family; zero when it passes.
    pub worst_violation: T,
    /// Vertex or edge id at which the worst violation occurs.
    pub witness: Option<String>,
}

impl<T: Scalar> FamilyReport<T> {
    fn clean() -> Self {
        Self {
            pass: true,
            worst_violation: T::zero(),
            witness: None,
        }
    }

    fn record(&mut self, violation: T, witness: String, eps: &T) {
        if violation > *eps && violation > self.worst_violation {
            self.pass = false;
            self.worst_violation = violation;
            self.witness = Some(witness);
        }
    }
}

#[derive(Debug, Clone)]
pub struct MembershipReport<T> {
    /// x(e) ≥ 0 for every edge.
    pub nonnegativity: FamilyReport<T>,
    /// x(δ(v)) ≤ 1 for every vertex.
    pub degree: FamilyReport<T>,
    /// x(γ(e)) ≥ 1 for every edge.
    pub comparability: FamilyReport<T>,
}

impl<T: Scalar> MembershipReport<T> {
    pub fn passes(&self) -> bool {
        self.nonnegativity.pass && self.degree.pass && self.comparability.pass
    }
}

/// Checks the three inequality families defining the polytope, within
/// an absolute tolerance `eps` per inequality (pass zero for exact
/// rational data).
pub fn check_polytope_membership<T: Scalar>(
    inst: &PreferenceInstance,
    x: &FractionalVector<T>,
    eps: &T,
) -> MembershipReport<T> {
    let mut nonnegativity = FamilyReport::clean();
    for e in inst.edges() {
        let value = x.get(e);
        if value.is_negative() {
            nonnegativity.record(value.abs(), inst.edge_id(e).to_string(), eps);
        }
    }

    let mut degree = FamilyReport::clean();
    for v in inst.vertices() {
        let total = x.sum(inst.incident_edges(v).iter().copied());
        if total > T::one() {
            degree.record(total - T::one(), inst.vertex_id(v).to_string(), eps);
        }
    }

    let mut comparability = FamilyReport::clean();
    for e in inst.edges() {
        let total = x.sum(inst.gamma_set(e));
        if total < T::one() {
            comparability.record(T::one() - total, inst.edge_id(e).to_string(), eps);
        }
    }

    MembershipReport {
        nonnegativity,
        degree,
        comparability,
    }
}

/// For every support edge e = mw of a polytope point, both degree
/// constraints and the comparability constraint of e are tight:
/// x(δ(m)) = x(δ(w)) = x(γ(e)) = 1. Reports the worst deviation.
pub fn check_support_equalities<T: Scalar>(
    inst: &PreferenceInstance,
    x: &FractionalVector<T>,
    eps: &T,
) -> FamilyReport<T> {
    let mut report = FamilyReport::clean();
    for e in x.support().collect::<Vec<_>>() {
        let (m, w) = inst.endpoints(e);
        for v in [m, w] {
            let total = x.sum(inst.incident_edges(v).iter().copied());
            let dev = (total - T::one()).abs();
            report.record(dev, inst.vertex_id(v).to_string(), eps);
        }
        let total = x.sum(inst.gamma_set(e));
        let dev = (total - T::one()).abs();
        report.record(dev, inst.edge_id(e).to_string(), eps);
    }
    report
}

/// The k-th choice construction over a family of stable matchings: at
/// every covered I-vertex, take the k-th best of its assigned edges
/// (counted with repetition). Building the same thing from the J-side
/// with index ℓ−k+1 yields the identical edge set, which is asserted.
pub fn generalized_median(
    inst: &PreferenceInstance,
    matchings: &[Matching],
    k: usize,
) -> Result<Matching> {
    let len = matchings.len();
    if len == 0 {
        return Err(Error::EmptyFamily);
    }
    if k == 0 || k > len {
        return Err(Error::KOutOfRange { k, len });
    }
    for m in matchings {
        require_stable(inst, m)?;
    }

    let from_i = kth_choice(inst, matchings, Side::I, k);
    let from_j = kth_choice(inst, matchings, Side::J, len - k + 1);
    assert_eq!(
        from_i, from_j,
        "the I-side and J-side selections must agree"
    );
    let result = Matching::new(inst, from_i)?;
    debug_assert!(crate::stability::is_stable(inst, &result));
    Ok(result)
}

fn kth_choice(
    inst: &PreferenceInstance,
    matchings: &[Matching],
    side: Side,
    k: usize,
) -> BTreeSet<EdgeId> {
    let vertices: Vec<VertexId> = inst
        .vertices()
        .filter(|&v| inst.side(v) == side)
        .collect();
    let mut picked = BTreeSet::new();
    for v in vertices {
        let mut assigned: Vec<EdgeId> = matchings
            .iter()
            .filter_map(|m| {
                m.edges()
                    .iter()
                    .copied()
                    .find(|&e| inst.endpoints(e).0 == v || inst.endpoints(e).1 == v)
            })
            .collect();
        if assigned.is_empty() {
            continue;
        }
        // all stable matchings cover the same vertices
        debug_assert_eq!(assigned.len(), matchings.len());
        assigned.sort_by_key(|&e| inst.rank_at(e, v));
        picked.insert(assigned[k - 1]);
    }
    picked
}

/// Median of an odd-sized family: the generalized median at the middle
/// index k = (ℓ+1)/2.
pub fn median(inst: &PreferenceInstance, matchings: &[Matching]) -> Result<Matching> {
    if matchings.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if matchings.len().is_multiple_of(2) {
        return Err(Error::EvenMedian(matchings.len()));
    }
    generalized_median(inst, matchings, matchings.len().div_ceil(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_traits::Zero;

    fn half() -> Weight {
        Weight::new(1.into(), 2.into())
    }

    fn third() -> Weight {
        Weight::new(1.into(), 3.into())
    }

    fn g_right_matchings(inst: &PreferenceInstance) -> [Matching; 3] {
        [
            Matching::from_ids(inst, &["b", "d", "a'", "c'"]).unwrap(),
            Matching::from_ids(inst, &["b", "d", "b'", "d'"]).unwrap(),
            Matching::from_ids(inst, &["a", "c", "b'", "d'"]).unwrap(),
        ]
    }

    #[test]
    fn stable_characteristic_vectors_belong() {
        let inst = fixtures::g_right();
        for m in g_right_matchings(&inst) {
            let x = FractionalVector::characteristic(&m);
            assert!(check_polytope_membership(&inst, &x, &Weight::zero()).passes());
        }
    }

    #[test]
    fn midpoint_belongs() {
        let inst = fixtures::g_right();
        let [m1, _, m3] = g_right_matchings(&inst);
        let x1 = FractionalVector::characteristic(&m1);
        let x3 = FractionalVector::characteristic(&m3);
        let mid = FractionalVector::combination(&[(half(), &x1), (half(), &x3)]);
        assert!(check_polytope_membership(&inst, &mid, &Weight::zero()).passes());
    }

    #[test]
    fn unstable_matching_violates_a_comparability_inequality() {
        let inst = fixtures::g_right();
        let bad = Matching::from_ids(&inst, &["a", "c", "a'", "c'"]).unwrap();
        let x = FractionalVector::characteristic(&bad);
        let report = check_polytope_membership(&inst, &x, &Weight::zero());
        assert!(report.nonnegativity.pass);
        assert!(report.degree.pass);
        assert!(!report.comparability.pass);
        assert_eq!(report.comparability.witness.as_deref(), Some("e"));
        assert_eq!(report.comparability.worst_violation, Weight::from_integer(1.into()));
    }

    #[test]
    fn support_equalities_on_a_barycenter() {
        let inst = fixtures::g_right();
        let [m1, m2, m3] = g_right_matchings(&inst);
        let x = FractionalVector::combination(&[
            (third(), &FractionalVector::characteristic(&m1)),
            (third(), &FractionalVector::characteristic(&m2)),
            (third(), &FractionalVector::characteristic(&m3)),
        ]);
        assert!(check_polytope_membership(&inst, &x, &Weight::zero()).passes());
        assert!(check_support_equalities(&inst, &x, &Weight::zero()).pass);
    }

    #[test]
    fn support_equalities_skip_uncovered_vertices() {
        let inst = fixtures::g_left();
        let m = Matching::from_ids(&inst, &["b", "d"]).unwrap();
        let x = FractionalVector::characteristic(&m);
        assert!(check_support_equalities(&inst, &x, &Weight::zero()).pass);
    }

    #[test]
    fn support_equalities_single_edge() {
        let inst = PreferenceInstance::parse(
            "side I m\nside J w\nedge e m w\npref m e\npref w e\n",
        )
        .unwrap();
        let m = Matching::from_ids(&inst, &["e"]).unwrap();
        let x = FractionalVector::characteristic(&m);
        assert!(check_support_equalities(&inst, &x, &Weight::zero()).pass);
    }

    #[test]
    fn generalized_median_walks_the_family() {
        let inst = fixtures::g_right();
        let [m1, m2, m3] = g_right_matchings(&inst);
        let family = [m1.clone(), m2.clone(), m3.clone()];
        assert_eq!(generalized_median(&inst, &family, 2).unwrap(), m2);
        let pair = [m1.clone(), m3.clone()];
        assert_eq!(generalized_median(&inst, &pair, 1).unwrap(), m1);
        assert_eq!(generalized_median(&inst, &pair, 2).unwrap(), m3);
        let constant = [m2.clone(), m2.clone(), m2.clone()];
        for k in 1..=3 {
            assert_eq!(generalized_median(&inst, &constant, k).unwrap(), m2);
        }
    }

    #[test]
    fn median_picks_the_middle() {
        let inst = fixtures::g_right();
        let [m1, m2, m3] = g_right_matchings(&inst);
        assert_eq!(median(&inst, &[m1.clone(), m2.clone(), m3]).unwrap(), m2);
        assert_eq!(median(&inst, std::slice::from_ref(&m1)).unwrap(), m1);
        assert!(matches!(
            median(&inst, &[m1.clone(), m2]),
            Err(Error::EvenMedian(2))
        ));
        assert!(matches!(median(&inst, &[]), Err(Error::EmptyFamily)));
    }

    #[test]
    fn median_rejects_unstable_input() {
        let inst = fixtures::g_right();
        let bad = Matching::from_ids(&inst, &["a", "c", "a'", "c'"]).unwrap();
        assert!(matches!(
            median(&inst, &[bad]),
            Err(Error::Unstable(_))
        ));
    }

    #[test]
    fn k_out_of_range() {
        let inst = fixtures::g_right();
        let [m1, ..] = g_right_matchings(&inst);
        assert!(matches!(
            generalized_median(&inst, &[m1], 2),
            Err(Error::KOutOfRange { k: 2, len: 1 })
        ));
    }

    #[test]
    fn vector_file_round_trip() {
        let inst = fixtures::g_right();
        let x = parse_vector_file(&inst, "x b 0.5\nx a' 0.25\n").unwrap();
        assert_eq!(x.get(inst.edge("b").unwrap()), half());
        assert_eq!(x.get(inst.edge("a").unwrap()), Weight::zero());
        assert!(parse_vector_file(&inst, "x nosuch 1\n").is_err());
        assert!(parse_vector_file(&inst, "x b 1\nx b 1\n").is_err());
    }
}
