//! End-to-end acceptance suite. Each test prints one `criterion N:
//! pass/fail` line; run with `--nocapture` to see them all.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use stabmat::instance::sort_matchings;
use stabmat::lattice::{compare, diff_cycles, join, meet, replace_along, LatticeOrder};
use stabmat::oracle::{all_stable_matchings, oracle_min_weight, oracle_precedes};
use stabmat::polytope::{
    check_polytope_membership, check_support_equalities, generalized_median, FractionalVector,
};
use stabmat::poset::{build_digraph, count_stable_matchings, enumerate_stable_matchings, Ideal};
use stabmat::rotation::{rotation_set, rotations_between};
use stabmat::stability::{blocking_edges, deferred_acceptance};
use stabmat::weight::{
    egalitarian_weights, min_weight_stable_matching, rotation_weight, WeightFunction,
};
use stabmat::{fixtures, Matching, Side, Weight};

fn criterion(n: usize, f: impl FnOnce() + UnwindSafe) {
    match catch_unwind(f) {
        Ok(()) => println!("criterion {n}: pass"),
        Err(cause) => {
            println!("criterion {n}: fail");
            resume_unwind(cause);
        }
    }
}

#[test]
fn criterion_1_fixture_enumeration_and_extremes() {
    criterion(1, || {
        let inst = fixtures::g_right();
        let all = enumerate_stable_matchings(&inst, None).unwrap();
        let mut formatted: Vec<String> = all.iter().map(|m| m.format(&inst)).collect();
        formatted.sort();
        assert_eq!(formatted, ["a b' c d'", "a' b c' d", "b b' d d'"]);
        assert_eq!(count_stable_matchings(&inst, None).unwrap(), 3);
        assert_eq!(
            deferred_acceptance(&inst, Side::I).format(&inst),
            "a' b c' d"
        );
        assert_eq!(
            deferred_acceptance(&inst, Side::J).format(&inst),
            "a b' c d'"
        );
    });
}

#[test]
fn criterion_2_fixture_rotation_structure() {
    criterion(2, || {
        let inst = fixtures::g_right();
        let rotations = rotation_set(&inst);
        let formatted: Vec<String> = rotations.iter().map(|r| r.format(&inst)).collect();
        assert_eq!(formatted, ["a b c d", "a' b' c' d'"]);
        let (d_idx, c_idx) = (0, 1);

        let digraph = build_digraph(&inst);
        assert_eq!(digraph.arcs.len(), 1);
        assert_eq!((digraph.arcs[0].from, digraph.arcs[0].to), (c_idx, d_idx));

        let expected = [
            (BTreeSet::new(), "a' b c' d"),
            (BTreeSet::from([c_idx]), "b b' d d'"),
            (BTreeSet::from([c_idx, d_idx]), "a b' c d'"),
        ];
        for (indices, matching) in expected {
            assert!(digraph.is_ideal(&indices));
            let m = stabmat::poset::ideal_to_matching(&inst, &digraph, &Ideal(indices)).unwrap();
            assert_eq!(m.format(&inst), matching);
        }
        assert!(!digraph.is_ideal(&BTreeSet::from([d_idx])));
    });
}

#[test]
fn criterion_3_deletion_experiment() {
    criterion(3, || {
        let inst = fixtures::g_left();
        let all = enumerate_stable_matchings(&inst, None).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].format(&inst), "b d");

        let without_v = inst.remove_vertices_by_id(&["v"]).unwrap();
        let all = enumerate_stable_matchings(&without_v, None).unwrap();
        let mut formatted: Vec<String> =
            all.iter().map(|m| m.format(&without_v)).collect();
        formatted.sort();
        assert_eq!(formatted, ["a c", "b d"]);
    });
}

#[test]
fn criterion_4_instability_witness() {
    criterion(4, || {
        let inst = fixtures::g_right();
        let m1 = Matching::from_ids(&inst, &["b", "d", "a'", "c'"]).unwrap();
        let m3 = Matching::from_ids(&inst, &["a", "c", "b'", "d'"]).unwrap();
        let cycles = diff_cycles(&inst, &m1, &m3).unwrap();
        let abcd: Vec<_> = cycles
            .into_iter()
            .filter(|c| c.edges.iter().any(|&e| inst.edge_id(e) == "a"))
            .collect();
        assert_eq!(abcd.len(), 1);
        let swapped = replace_along(&inst, &m1, &abcd).unwrap();
        assert_eq!(swapped.format(&inst), "a a' c c'");
        let report = blocking_edges(&inst, &swapped);
        assert!(!report.stable);
        let blocking: Vec<&str> =
            report.blocking.iter().map(|&e| inst.edge_id(e)).collect();
        assert_eq!(blocking, ["e"]);
    });
}

#[test]
fn criterion_5_egalitarian_optimum() {
    criterion(5, || {
        let inst = fixtures::g_right();
        let c: WeightFunction<Weight> = egalitarian_weights(&inst);
        let (best, cost) = min_weight_stable_matching(&inst, &c).unwrap();
        assert_eq!(best.format(&inst), "b b' d d'");
        assert_eq!(cost, Weight::from_integer(12.into()));

        let digraph = build_digraph(&inst);
        let weights: Vec<Weight> = digraph
            .rotations
            .iter()
            .map(|r| rotation_weight(r, &c))
            .collect();
        // canonical order: index 0 = rotation {a,b,c,d}, 1 = {a',b',c',d'}
        assert_eq!(weights[0], Weight::from_integer(1.into()));
        assert_eq!(weights[1], Weight::from_integer((-1).into()));

        let closure = stabmat::closure::ClosureInstance {
            weights,
            arcs: digraph.arcs.iter().map(|a| (a.from, a.to)).collect(),
        };
        let res = stabmat::closure::min_weight_closure(&closure);
        assert_eq!(res.nodes, BTreeSet::from([1]));
        assert_eq!(res.weight, Weight::from_integer((-1).into()));
    });
}

#[test]
fn criterion_6_randomized_oracle_equivalence() {
    criterion(6, || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE97);
        for _ in 0..200 {
            let inst = common::random_instance(&mut rng, 5);
            let oracle = all_stable_matchings(&inst).unwrap();

            // (a) enumeration agrees with the oracle
            let mut enumerated = enumerate_stable_matchings(&inst, None).unwrap();
            sort_matchings(&inst, &mut enumerated);
            assert_eq!(enumerated, oracle);

            // (b) all stable matchings cover the same vertices
            let covered = oracle[0].covered(&inst);
            for m in &oracle {
                assert_eq!(m.covered(&inst), covered);
            }

            // (c) meet/join stay in the set; lattice laws
            lattice_laws(&inst, &oracle);

            // (d) digraph reachability equals the reference precedence
            let digraph = build_digraph(&inst);
            for i in 0..digraph.len() {
                for j in 0..digraph.len() {
                    assert_eq!(
                        digraph.precedes(i, j),
                        oracle_precedes(&inst, &digraph.rotations[i], &digraph.rotations[j])
                            .unwrap(),
                        "precedence mismatch at pair ({i}, {j})"
                    );
                }
            }

            // (e) optimizer agrees with exhaustive search
            let weights: Vec<i64> = inst.edges().map(|_| rng.gen_range(-10..=10)).collect();
            let c = WeightFunction::from_values(&inst, weights);
            let (_, cost) = min_weight_stable_matching(&inst, &c).unwrap();
            let (_, oracle_cost) = oracle_min_weight(&inst, &c).unwrap();
            assert_eq!(cost, oracle_cost);

            // (f) rotation count and disjointness
            let rotations = rotation_set(&inst);
            assert!(rotations.len() <= inst.edge_count());
            let mut seen = BTreeSet::new();
            for r in &rotations {
                for e in r.matching_edges() {
                    assert!(seen.insert(e), "matching edges of rotations overlap");
                }
            }

            // (g) generalized medians of random stable families
            for _ in 0..3 {
                let len = rng.gen_range(1..=5);
                let family: Vec<Matching> = (0..len)
                    .map(|_| oracle[rng.gen_range(0..oracle.len())].clone())
                    .collect();
                for k in 1..=len {
                    // the J-side agreement is asserted inside
                    let a_k = generalized_median(&inst, &family, k).unwrap();
                    assert!(stabmat::stability::is_stable(&inst, &a_k));
                }
            }

            // (h) cost of any stable matching splits through its rotations
            let min = deferred_acceptance(&inst, Side::I);
            let base = c.matching_cost(&min);
            for m in &oracle {
                let used = rotations_between(&inst, &min, m).unwrap();
                let total: i64 = used.iter().map(|r| rotation_weight(r, &c)).sum();
                assert_eq!(c.matching_cost(m), base + total);
            }
        }
        assert!(
            start.elapsed().as_secs() < 60,
            "oracle equivalence suite took {:?}",
            start.elapsed()
        );
    });
}

fn lattice_laws(inst: &stabmat::PreferenceInstance, all: &[Matching]) {
    let sample: Vec<&Matching> = all.iter().take(8).collect();
    for &m in &sample {
        assert_eq!(&meet(inst, m, m).unwrap(), m);
        assert_eq!(&join(inst, m, m).unwrap(), m);
    }
    for &m in &sample {
        for &l in &sample {
            let mt = meet(inst, m, l).unwrap();
            let jn = join(inst, m, l).unwrap();
            assert!(all.contains(&mt), "meet left the stable set");
            assert!(all.contains(&jn), "join left the stable set");
            assert_eq!(mt, meet(inst, l, m).unwrap());
            assert_eq!(jn, join(inst, l, m).unwrap());
            // absorption
            assert_eq!(&meet(inst, m, &jn).unwrap(), m);
            assert_eq!(&join(inst, m, &mt).unwrap(), m);
            // the meet precedes both, the join follows both
            for x in [m, l] {
                assert!(matches!(
                    compare(inst, &mt, x).unwrap(),
                    LatticeOrder::Equal | LatticeOrder::Less
                ));
                assert!(matches!(
                    compare(inst, &jn, x).unwrap(),
                    LatticeOrder::Equal | LatticeOrder::Greater
                ));
            }
        }
    }
    for &m in sample.iter().take(5) {
        for &l in sample.iter().take(5) {
            for &n in sample.iter().take(5) {
                let lhs = meet(inst, m, &join(inst, l, n).unwrap()).unwrap();
                let rhs = join(
                    inst,
                    &meet(inst, m, l).unwrap(),
                    &meet(inst, m, n).unwrap(),
                )
                .unwrap();
                assert_eq!(lhs, rhs, "distributivity failed");
                let assoc_l = meet(inst, &meet(inst, m, l).unwrap(), n).unwrap();
                let assoc_r = meet(inst, m, &meet(inst, l, n).unwrap()).unwrap();
                assert_eq!(assoc_l, assoc_r, "associativity failed");
            }
        }
    }
}

#[test]
fn criterion_7_polytope_properties() {
    criterion(7, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x907F);
        let zero = Weight::from_integer(0.into());
        let mut combinations = 0;
        let mut violators = 0;
        while combinations < 100 {
            let inst = common::random_instance(&mut rng, 5);
            let stable = all_stable_matchings(&inst).unwrap();

            // random convex combination with rational coefficients
            let len = rng.gen_range(1..=stable.len().min(4));
            let picks: Vec<&Matching> = (0..len)
                .map(|_| &stable[rng.gen_range(0..stable.len())])
                .collect();
            let raw: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=9)).collect();
            let total: i64 = raw.iter().sum();
            let vectors: Vec<FractionalVector<Weight>> = picks
                .iter()
                .map(|m| FractionalVector::characteristic(m))
                .collect();
            let parts: Vec<(Weight, &FractionalVector<Weight>)> = raw
                .iter()
                .zip(&vectors)
                .map(|(&n, v)| (Weight::new(n.into(), total.into()), v))
                .collect();
            let x = FractionalVector::combination(&parts);
            assert!(check_polytope_membership(&inst, &x, &zero).passes());
            assert!(check_support_equalities(&inst, &x, &zero).pass);
            combinations += 1;

            // a random non-stable matching must break a comparability
            // inequality
            if let Some(bad) = random_unstable_matching(&mut rng, &inst) {
                let x = FractionalVector::characteristic(&bad);
                let report = check_polytope_membership(&inst, &x, &zero);
                assert!(!report.comparability.pass);
                violators += 1;
            }
        }
        assert!(violators >= 20, "too few unstable witnesses: {violators}");
    });
}

fn random_unstable_matching(
    rng: &mut ChaCha8Rng,
    inst: &stabmat::PreferenceInstance,
) -> Option<Matching> {
    for _ in 0..20 {
        let mut edges: Vec<_> = inst.edges().collect();
        edges.shuffle(rng);
        let mut used = BTreeSet::new();
        let mut chosen = BTreeSet::new();
        for e in edges {
            let (m, w) = inst.endpoints(e);
            if used.insert(m) && used.insert(w) {
                chosen.insert(e);
            }
        }
        let matching = Matching::new(inst, chosen).unwrap();
        if !stabmat::stability::is_stable(inst, &matching) {
            return Some(matching);
        }
    }
    None
}

#[test]
fn criterion_8_counting_composition() {
    criterion(8, || {
        let start = Instant::now();
        for k in 1..=10usize {
            let inst = fixtures::k22_copies(k);
            assert_eq!(count_stable_matchings(&inst, None).unwrap(), 1 << k);
            if k <= 3 {
                assert_eq!(all_stable_matchings(&inst).unwrap().len(), 1 << k);
            }
        }
        assert!(
            start.elapsed().as_secs() < 5,
            "counting took {:?}",
            start.elapsed()
        );
    });
}

#[test]
fn criterion_9_performance_smoke() {
    criterion(9, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9E4F);
        let inst = common::dense_instance(&mut rng, 200);

        let start = Instant::now();
        let min = deferred_acceptance(&inst, Side::I);
        let da_time = start.elapsed();
        assert_eq!(min.len(), 200);
        assert!(da_time.as_millis() < 1000, "deferred acceptance took {da_time:?}");

        let start = Instant::now();
        let rotations = rotation_set(&inst);
        let digraph = build_digraph(&inst);
        let structure_time = start.elapsed();
        assert_eq!(digraph.len(), rotations.len());
        assert!(
            structure_time.as_secs() < 10,
            "rotation structure took {structure_time:?}"
        );
    });
}
