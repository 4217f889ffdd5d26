//! Active graphs, rotation discovery and elimination, traces from the
//! bottom to the top of the lattice, and the trace-independent rotation
//! set of an instance.
//!
//! For a stable matching `M`, a non-matching edge `a = mw` is admissible
//! when `m` holds an `M`-edge it prefers to `a` while `w` is uncovered
//! or holds an `M`-edge it likes less than `a`. The best admissible edge
//! at each I-vertex is active. The graph of `M` plus the active edges
//! has components that are trees or contain exactly one cycle; each such
//! cycle is a rotation, and swapping along it climbs one lattice step.

use std::collections::{BTreeSet, HashSet};

use crate::instance::{EdgeId, Matching, PreferenceInstance, Side, VertexId};
use crate::lattice::precedes_or_equal;
use crate::stability::{deferred_acceptance, require_stable};
use crate::{Error, Result};

/// A rotation: alternating matching/active edges in cyclic order.
/// `pairs[i] = (e_i, a_i)` share an I-vertex; `a_i` and `e_{i+1}` share
/// a J-vertex. Canonical form starts at the lexicographically smallest
/// matching-edge id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rotation {
    pairs: Vec<(EdgeId, EdgeId)>,
}

impl Rotation {
    fn canonical(inst: &PreferenceInstance, mut pairs: Vec<(EdgeId, EdgeId)>) -> Self {
        let best = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, (e, _))| inst.edge_id(*e))
            .map(|(i, _)| i)
            .expect("rotation is nonempty");
        pairs.rotate_left(best);
        Self { pairs }
    }

    /// `(matching edge, active edge)` pairs in canonical cyclic order.
    pub fn pairs(&self) -> &[(EdgeId, EdgeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn matching_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.pairs.iter().map(|(e, _)| *e)
    }

    pub fn active_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.pairs.iter().map(|(_, a)| *a)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.pairs.iter().flat_map(|(e, a)| [*e, *a])
    }

    /// Vertices on the rotation cycle.
    pub fn vertices(&self, inst: &PreferenceInstance) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for e in self.edges() {
            let (m, w) = inst.endpoints(e);
            out.insert(m);
            out.insert(w);
        }
        out
    }

    /// The matching edge of the rotation at vertex `v`, if `v` lies on
    /// the cycle.
    pub fn matching_edge_at(&self, inst: &PreferenceInstance, v: VertexId) -> Option<EdgeId> {
        self.matching_edges()
            .find(|&e| inst.endpoint_i(e) == v || inst.endpoint_j(e) == v)
    }

    /// The active edge of the rotation at vertex `v`, if any.
    pub fn active_edge_at(&self, inst: &PreferenceInstance, v: VertexId) -> Option<EdgeId> {
        self.active_edges()
            .find(|&e| inst.endpoint_i(e) == v || inst.endpoint_j(e) == v)
    }

    /// Sort/display key: the rotation's edge ids in ascending order.
    /// Distinct rotations have disjoint matching-edge sets, so the key
    /// is unique.
    pub fn key<'a>(&self, inst: &'a PreferenceInstance) -> Vec<&'a str> {
        let mut ids: Vec<&str> = self.edges().map(|e| inst.edge_id(e)).collect();
        ids.sort_unstable();
        ids
    }

    pub fn format(&self, inst: &PreferenceInstance) -> String {
        self.key(inst).join(" ")
    }
}

/// One connected component of the active graph.
#[derive(Debug, Clone)]
pub struct Component {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
    /// The unique cycle, absent for tree components.
    pub cycle: Option<Rotation>,
}

/// The active graph of a stable matching: the matching plus the active
/// edges, with component structure.
#[derive(Debug, Clone)]
pub struct ActiveGraph {
    pub matching: Matching,
    pub admissible: BTreeSet<EdgeId>,
    pub active: BTreeSet<EdgeId>,
    pub components: Vec<Component>,
}

impl ActiveGraph {
    pub fn is_forest(&self) -> bool {
        self.components.iter().all(|c| c.cycle.is_none())
    }

    /// Rotations admitted by the base matching, canonical order.
    pub fn rotations(&self, inst: &PreferenceInstance) -> Vec<Rotation> {
        let mut out: Vec<Rotation> = self
            .components
            .iter()
            .filter_map(|c| c.cycle.clone())
            .collect();
        out.sort_by_key(|r| {
            r.key(inst)
                .into_iter()
                .map(str::to_string)
                .collect::<Vec<_>>()
        });
        out
    }
}

/// Builds the active graph of a stable matching.
pub fn active_graph(inst: &PreferenceInstance, matching: &Matching) -> Result<ActiveGraph> {
    require_stable(inst, matching)?;
    let assign = matching.assignment(inst);

    let mut admissible = BTreeSet::new();
    let mut active_at: Vec<Option<EdgeId>> = vec![None; inst.vertex_count()];
    for &m in inst.side_i() {
        let matched = assign[m.0];
        for &e in inst.incident_edges(m) {
            if Some(e) == matched || matching.contains(e) {
                continue;
            }
            let holds_better = match matched {
                Some(em) => inst.prefers(m, em, e),
                None => false,
            };
            if !holds_better {
                continue;
            }
            let w = inst.endpoint_j(e);
            let w_gains = match assign[w.0] {
                None => true,
                Some(ew) => inst.prefers(w, e, ew),
            };
            if w_gains {
                admissible.insert(e);
                // prefs are scanned best-first, so the first admissible
                // edge found at m is the active one
                if active_at[m.0].is_none() {
                    active_at[m.0] = Some(e);
                }
            }
        }
    }
    let active: BTreeSet<EdgeId> = active_at.iter().flatten().copied().collect();

    // Component structure of the graph induced by M union A.
    let mut graph_edges: Vec<EdgeId> = matching.edges().iter().copied().collect();
    graph_edges.extend(active.iter().copied());
    let mut comp_of: Vec<Option<usize>> = vec![None; inst.vertex_count()];
    let mut adjacency: Vec<Vec<EdgeId>> = vec![Vec::new(); inst.vertex_count()];
    for &e in &graph_edges {
        let (a, b) = inst.endpoints(e);
        adjacency[a.0].push(e);
        adjacency[b.0].push(e);
    }
    let mut components: Vec<Component> = Vec::new();
    for &e in &graph_edges {
        let (start, _) = inst.endpoints(e);
        if comp_of[start.0].is_some() {
            continue;
        }
        let idx = components.len();
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut stack = vec![start];
        comp_of[start.0] = Some(idx);
        while let Some(v) = stack.pop() {
            vertices.insert(v);
            for &f in &adjacency[v.0] {
                edges.insert(f);
                let u = inst.other_endpoint(f, v);
                if comp_of[u.0].is_none() {
                    comp_of[u.0] = Some(idx);
                    stack.push(u);
                }
            }
        }
        components.push(Component {
            vertices,
            edges,
            cycle: None,
        });
    }

    // Cycle detection: from an I-vertex with both a matching edge and an
    // active edge, the next cycle candidate is the I-endpoint of the
    // matching edge at the active edge's J-endpoint. This successor map
    // is functional, so a standard visited-marking walk finds every
    // cycle once.
    let successor = |m: VertexId| -> Option<VertexId> {
        let a = active_at[m.0]?;
        assign[m.0]?;
        let w = inst.endpoint_j(a);
        let ew = assign[w.0]?;
        if matching.contains(ew) {
            Some(inst.endpoint_i(ew))
        } else {
            None
        }
    };
    // 0 = unseen, otherwise walk token + 1
    let mut mark = vec![0usize; inst.vertex_count()];
    let mut token = 0usize;
    for &start in inst.side_i() {
        if mark[start.0] != 0 {
            continue;
        }
        token += 1;
        let mut path = Vec::new();
        let mut v = start;
        loop {
            if mark[v.0] == token {
                // found a new cycle: the tail of `path` from `v`
                let pos = path.iter().position(|&u| u == v).expect("v is on path");
                let cycle: Vec<VertexId> = path[pos..].to_vec();
                let pairs: Vec<(EdgeId, EdgeId)> = cycle
                    .iter()
                    .map(|&m| {
                        (
                            assign[m.0].expect("cycle vertex is matched"),
                            active_at[m.0].expect("cycle vertex has an active edge"),
                        )
                    })
                    .collect();
                let rotation = Rotation::canonical(inst, pairs);
                let comp = comp_of[v.0].expect("cycle vertex is in a component");
                debug_assert!(components[comp].cycle.is_none());
                components[comp].cycle = Some(rotation);
                break;
            }
            if mark[v.0] != 0 {
                break; // ran into an earlier walk
            }
            mark[v.0] = token;
            path.push(v);
            match successor(v) {
                Some(next) => v = next,
                None => break,
            }
        }
    }

    Ok(ActiveGraph {
        matching: matching.clone(),
        admissible,
        active,
        components,
    })
}

/// Rotations admitted by `matching`, canonical form and order.
pub fn rotations_of(inst: &PreferenceInstance, matching: &Matching) -> Result<Vec<Rotation>> {
    Ok(active_graph(inst, matching)?.rotations(inst))
}

/// Swaps the matched edges along a rotation admitted by `matching`,
/// yielding the strictly greater stable matching.
pub fn eliminate(
    inst: &PreferenceInstance,
    matching: &Matching,
    rotation: &Rotation,
) -> Result<Matching> {
    let admitted = rotations_of(inst, matching)?;
    if !admitted.contains(rotation) {
        return Err(Error::NotARotation);
    }
    let mut edges = matching.edges().clone();
    for (e, a) in rotation.pairs() {
        edges.remove(e);
        edges.insert(*a);
    }
    Matching::new(inst, edges)
}

/// A maximal chain of rotation eliminations from `Mmin` to `Mmax`.
#[derive(Debug, Clone)]
pub struct Trace {
    /// `matchings[0] = Mmin`; `matchings[i]` arises from
    /// `matchings[i-1]` by eliminating `rotations[i-1]`.
    pub matchings: Vec<Matching>,
    pub rotations: Vec<Rotation>,
}

/// Deterministic trace: always eliminate the canonically smallest
/// admitted rotation.
pub fn trace(inst: &PreferenceInstance) -> Trace {
    trace_with_choice(inst, false)
}

/// Trace taking the canonically last admitted rotation at every step;
/// by trace independence its rotation set equals [`trace`]'s.
pub fn trace_with_choice(inst: &PreferenceInstance, pick_last: bool) -> Trace {
    let mut current = deferred_acceptance(inst, Side::I);
    let mut matchings = vec![current.clone()];
    let mut rotations = Vec::new();
    loop {
        let graph = active_graph(inst, &current).expect("trace matchings are stable");
        let admitted = graph.rotations(inst);
        let Some(chosen) = (if pick_last {
            admitted.last()
        } else {
            admitted.first()
        }) else {
            break;
        };
        let mut edges = current.edges().clone();
        for (e, a) in chosen.pairs() {
            edges.remove(e);
            edges.insert(*a);
        }
        current = Matching::new(inst, edges).expect("rotation elimination yields a matching");
        matchings.push(current.clone());
        rotations.push(chosen.clone());
    }
    Trace {
        matchings,
        rotations,
    }
}

/// The trace-independent rotation set `R_G`, canonical order.
pub fn rotation_set(inst: &PreferenceInstance) -> Vec<Rotation> {
    let mut rots = trace(inst).rotations;
    rots.sort_by_key(|r| {
        r.key(inst)
            .into_iter()
            .map(str::to_string)
            .collect::<Vec<_>>()
    });
    rots
}

/// Edges contained in every stable matching: `Mmin` minus the matching
/// edges of all rotations.
pub fn fixed_edges(inst: &PreferenceInstance) -> BTreeSet<EdgeId> {
    let min = deferred_acceptance(inst, Side::I);
    let rotated: HashSet<EdgeId> = rotation_set(inst)
        .iter()
        .flat_map(|r| r.matching_edges())
        .collect();
    min.edges()
        .iter()
        .copied()
        .filter(|e| !rotated.contains(e))
        .collect()
}

/// Union of all stable matchings' edges: `Mmin` plus all rotation edges.
pub fn union_graph(inst: &PreferenceInstance) -> BTreeSet<EdgeId> {
    let mut out: BTreeSet<EdgeId> = deferred_acceptance(inst, Side::I)
        .edges()
        .clone();
    for r in rotation_set(inst) {
        out.extend(r.edges());
    }
    out
}

/// Rank of a matching: the sum over covered I-vertices of the 1-based
/// position of the matched edge in the vertex's preference list.
pub fn matching_rank(inst: &PreferenceInstance, matching: &Matching) -> usize {
    matching
        .edges()
        .iter()
        .map(|&e| inst.rank_i(e))
        .sum()
}

/// True iff the instance has exactly one stable matching, i.e. the
/// active graph of `Mmin` is a forest.
pub fn is_unique(inst: &PreferenceInstance) -> bool {
    let min = deferred_acceptance(inst, Side::I);
    active_graph(inst, &min)
        .expect("deferred acceptance output is stable")
        .is_forest()
}

/// The unique rotation set whose sequential elimination maps `from` to
/// `to`, for stable `from` preceding `to`. Built greedily: at each step
/// eliminate the canonically first admitted rotation that stays below
/// `to`.
pub fn rotations_between(
    inst: &PreferenceInstance,
    from: &Matching,
    to: &Matching,
) -> Result<Vec<Rotation>> {
    if !precedes_or_equal(inst, from, to)? {
        return Err(Error::NotOrdered);
    }
    let mut current = from.clone();
    let mut used = Vec::new();
    while &current != to {
        let admitted = rotations_of(inst, &current)?;
        let mut advanced = false;
        for rot in admitted {
            let next = eliminate(inst, &current, &rot)?;
            if precedes_or_equal(inst, &next, to)? {
                used.push(rot);
                current = next;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(Error::NotOrdered);
        }
    }
    used.sort_by_key(|r| {
        r.key(inst)
            .into_iter()
            .map(str::to_string)
            .collect::<Vec<_>>()
    });
    Ok(used)
}
