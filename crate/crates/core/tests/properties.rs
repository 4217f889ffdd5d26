//! Randomized structural properties cross-checked against the
//! brute-force oracle on small instances.

mod common;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use stabmat::lattice::{compare, diff_cycles, LatticeOrder};
use stabmat::oracle::all_stable_matchings;
use stabmat::polytope::generalized_median;
use stabmat::poset::{build_digraph, enumerate_stable_matchings, matching_to_ideal};
use stabmat::rotation::{
    active_graph, eliminate, rotation_set, rotations_of, trace, trace_with_choice,
};
use stabmat::{Matching, PreferenceInstance};

fn instances(seed: u64, count: usize) -> impl Iterator<Item = PreferenceInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| common::random_instance(&mut rng, 5))
}

/// Every matching edge in a tree component of the active graph of a
/// stable matching M either belongs to any other stable matching L, or
/// lies on a lowering cycle of the difference decomposition of (M, L).
#[test]
fn tree_component_edges_persist_or_lie_on_lowering_cycles() {
    for inst in instances(11, 60) {
        let stable = all_stable_matchings(&inst).unwrap();
        for m in &stable {
            let graph = active_graph(&inst, m).unwrap();
            let tree_edges: Vec<_> = graph
                .components
                .iter()
                .filter(|c| c.cycle.is_none())
                .flat_map(|c| c.edges.iter().copied())
                .filter(|&e| m.contains(e))
                .collect();
            for l in &stable {
                let cycles = diff_cycles(&inst, m, l).unwrap();
                for &e in &tree_edges {
                    let ok = l.contains(e)
                        || cycles
                            .iter()
                            .any(|c| !c.raising && c.edges.contains(&e));
                    assert!(ok, "tree edge `{}` vanished upward", inst.edge_id(e));
                }
            }
        }
    }
}

/// Every arc (C, D) of the rotation digraph has a witness matching that
/// admits C but not D and admits D immediately after eliminating C.
#[test]
fn digraph_arcs_have_witness_matchings() {
    for inst in instances(23, 60) {
        let digraph = build_digraph(&inst);
        let stable = all_stable_matchings(&inst).unwrap();
        for arc in &digraph.arcs {
            let c = &digraph.rotations[arc.from];
            let d = &digraph.rotations[arc.to];
            let witnessed = stable.iter().any(|m| {
                let admitted = rotations_of(&inst, m).unwrap();
                if !admitted.contains(c) || admitted.contains(d) {
                    return false;
                }
                let next = eliminate(&inst, m, c).unwrap();
                rotations_of(&inst, &next).unwrap().contains(d)
            });
            assert!(witnessed, "arc {} -> {} has no witness", arc.from, arc.to);
        }
    }
}

/// The rotation set does not depend on the elimination order chosen
/// along the trace, and every trace has the same length.
#[test]
fn traces_are_order_independent() {
    for inst in instances(37, 80) {
        let first = trace(&inst);
        let last = trace_with_choice(&inst, true);
        assert_eq!(first.rotations.len(), last.rotations.len());
        let mut a = first.rotations.clone();
        let mut b = last.rotations.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b, "rotation set depends on the trace");
        assert_eq!(rotation_set(&inst).len(), a.len());
    }
}

/// Generalized medians form a monotone chain in the lattice order.
#[test]
fn generalized_medians_form_a_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for inst in instances(53, 60) {
        let stable = all_stable_matchings(&inst).unwrap();
        let len = rng.gen_range(1..=5);
        let family: Vec<Matching> = (0..len)
            .map(|_| stable[rng.gen_range(0..stable.len())].clone())
            .collect();
        let chain: Vec<Matching> = (1..=len)
            .map(|k| generalized_median(&inst, &family, k).unwrap())
            .collect();
        for pair in chain.windows(2) {
            assert!(matches!(
                compare(&inst, &pair[0], &pair[1]).unwrap(),
                LatticeOrder::Equal | LatticeOrder::Less
            ));
        }
    }
}

/// The ideal map is a lattice homomorphism: meets intersect ideals,
/// joins unite them.
#[test]
fn ideal_map_is_a_lattice_homomorphism() {
    for inst in instances(71, 60) {
        let digraph = build_digraph(&inst);
        let stable = all_stable_matchings(&inst).unwrap();
        let ideals: Vec<_> = stable
            .iter()
            .map(|m| matching_to_ideal(&inst, &digraph, m).unwrap())
            .collect();
        for (m, im) in stable.iter().zip(&ideals) {
            for (l, il) in stable.iter().zip(&ideals) {
                let mt = stabmat::lattice::meet(&inst, m, l).unwrap();
                let jn = stabmat::lattice::join(&inst, m, l).unwrap();
                let i_meet = matching_to_ideal(&inst, &digraph, &mt).unwrap();
                let i_join = matching_to_ideal(&inst, &digraph, &jn).unwrap();
                let expect_meet: std::collections::BTreeSet<usize> =
                    im.0.intersection(&il.0).copied().collect();
                let expect_join: std::collections::BTreeSet<usize> =
                    im.0.union(&il.0).copied().collect();
                assert_eq!(i_meet.0, expect_meet);
                assert_eq!(i_join.0, expect_join);
            }
        }
    }
}

/// Enumeration output contains stable matchings only, each once.
#[test]
fn enumeration_is_canonical() {
    for inst in instances(89, 60) {
        let out = enumerate_stable_matchings(&inst, None).unwrap();
        for m in &out {
            assert!(stabmat::stability::is_stable(&inst, m));
        }
        let keys: Vec<String> = out.iter().map(|m| m.format(&inst)).collect();
        let mut deduped = keys.clone();
        deduped.sort();
        deduped.dedup();
        assert_eq!(keys.len(), deduped.len(), "duplicate matchings emitted");
    }
}
