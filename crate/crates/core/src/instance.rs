//! Bipartite preference instances: parsing, validation and elementary
//! accessors (incident edges in preference order, the set `gamma(e)` of
//! weakly preferred neighbors, induced sub-instances).
//!
//! Ids are opaque non-empty strings without whitespace. Wherever a
//! deterministic order is needed, ids are compared in lexicographic
//! byte order.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use crate::{Error, Result};

/// Index of a vertex inside one [`PreferenceInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Index of an edge inside one [`PreferenceInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    I,
    J,
}

#[derive(Debug, Clone)]
struct VertexInfo {
    id: String,
    side: Side,
    /// Incident edges, best first (the order `<_v`).
    prefs: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
struct EdgeInfo {
    id: String,
    m: VertexId,
    w: VertexId,
    /// 1-based position in the preference list of the I-endpoint.
    rank_i: usize,
    /// 1-based position in the preference list of the J-endpoint.
    rank_j: usize,
}

/// Immutable, validated bipartite preference instance.
#[derive(Debug, Clone)]
pub struct PreferenceInstance {
    vertices: Vec<VertexInfo>,
    edges: Vec<EdgeInfo>,
    side_i: Vec<VertexId>,
    side_j: Vec<VertexId>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

impl PreferenceInstance {
    /// Builds and validates an instance from raw id-level data.
    ///
    /// `edges` are `(edge id, I-endpoint, J-endpoint)`; `prefs` maps a
    /// vertex id to its incident edge ids, best first, and is required
    /// for every vertex of positive degree.
    pub fn new(
        side_i: &[String],
        side_j: &[String],
        edges: &[(String, String, String)],
        prefs: &[(String, Vec<String>)],
    ) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut vertex_index = HashMap::new();
        for (ids, side) in [(side_i, Side::I), (side_j, Side::J)] {
            for id in ids {
                check_id(id)?;
                if vertex_index
                    .insert(id.clone(), VertexId(vertices.len()))
                    .is_some()
                {
                    return Err(Error::InvalidInstance(format!(
                        "duplicate vertex id `{id}`"
                    )));
                }
                vertices.push(VertexInfo {
                    id: id.clone(),
                    side,
                    prefs: Vec::new(),
                });
            }
        }

        let mut edge_index = HashMap::new();
        let mut edge_list = Vec::new();
        let mut pairs = HashSet::new();
        for (id, a, b) in edges {
            check_id(id)?;
            let va = *vertex_index
                .get(a)
                .ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let vb = *vertex_index
                .get(b)
                .ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if vertices[va.0].side != Side::I || vertices[vb.0].side != Side::J {
                return Err(Error::InvalidInstance(format!(
                    "edge `{id}` must join an I-vertex to a J-vertex"
                )));
            }
            if edge_index
                .insert(id.clone(), EdgeId(edge_list.len()))
                .is_some()
            {
                return Err(Error::InvalidInstance(format!("duplicate edge id `{id}`")));
            }
            if !pairs.insert((va, vb)) {
                return Err(Error::InvalidInstance(format!(
                    "parallel edge `{id}` between `{a}` and `{b}`"
                )));
            }
            edge_list.push(EdgeInfo {
                id: id.clone(),
                m: va,
                w: vb,
                rank_i: 0,
                rank_j: 0,
            });
        }

        // Degree per vertex, to check that pref lists are permutations of
        // delta(v).
        let mut degree = vec![0usize; vertices.len()];
        for e in &edge_list {
            degree[e.m.0] += 1;
            degree[e.w.0] += 1;
        }

        let mut seen_pref = vec![false; vertices.len()];
        for (vid_str, list) in prefs {
            let v = *vertex_index
                .get(vid_str)
                .ok_or_else(|| Error::UnknownVertex(vid_str.clone()))?;
            if seen_pref[v.0] {
                return Err(Error::InvalidInstance(format!(
                    "duplicate pref list for vertex `{vid_str}`"
                )));
            }
            seen_pref[v.0] = true;
            let mut used = HashSet::new();
            for eid_str in list {
                let e = *edge_index
                    .get(eid_str)
                    .ok_or_else(|| Error::UnknownEdge(eid_str.clone()))?;
                let incident = edge_list[e.0].m == v || edge_list[e.0].w == v;
                if !incident {
                    return Err(Error::InvalidInstance(format!(
                        "edge `{eid_str}` in pref list of `{vid_str}` is not incident to it"
                    )));
                }
                if !used.insert(e) {
                    return Err(Error::InvalidInstance(format!(
                        "edge `{eid_str}` repeated in pref list of `{vid_str}`"
                    )));
                }
                vertices[v.0].prefs.push(e);
            }
            if vertices[v.0].prefs.len() != degree[v.0] {
                return Err(Error::InvalidInstance(format!(
                    "pref list of `{vid_str}` is not a permutation of its incident edges"
                )));
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            if degree[i] > 0 && !seen_pref[i] {
                return Err(Error::InvalidInstance(format!(
                    "missing pref list for vertex `{}`",
                    v.id
                )));
            }
        }

        for v in &vertices {
            for (pos, &e) in v.prefs.iter().enumerate() {
                match v.side {
                    Side::I => edge_list[e.0].rank_i = pos + 1,
                    Side::J => edge_list[e.0].rank_j = pos + 1,
                }
            }
        }

        let side_i = side_i
            .iter()
            .map(|id| vertex_index[id])
            .collect::<Vec<_>>();
        let side_j = side_j
            .iter()
            .map(|id| vertex_index[id])
            .collect::<Vec<_>>();
        Ok(Self {
            vertices,
            edges: edge_list,
            side_i,
            side_j,
            vertex_index,
            edge_index,
        })
    }

    /// Parses the line-based instance format:
    /// `side I <id>...`, `side J <id>...`, `edge <id> <I-vertex>
    /// <J-vertex>`, `pref <vertex> <edge>...`. `#` starts a comment,
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut side_i: Option<Vec<String>> = None;
        let mut side_j: Option<Vec<String>> = None;
        let mut edges = Vec::new();
        let mut prefs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let err = |msg: String| Error::Parse { line, msg };
            match tokens[0] {
                "side" => {
                    if tokens.len() < 2 {
                        return Err(err("expected `side I|J <id>...`".into()));
                    }
                    let ids: Vec<String> = tokens[2..].iter().map(|s| s.to_string()).collect();
                    let slot = match tokens[1] {
                        "I" => &mut side_i,
                        "J" => &mut side_j,
                        other => return Err(err(format!("unknown side `{other}`"))),
                    };
                    if slot.is_some() {
                        return Err(err(format!("side {} declared twice", tokens[1])));
                    }
                    *slot = Some(ids);
                }
                "edge" => {
                    if tokens.len() != 4 {
                        return Err(err("expected `edge <id> <I-vertex> <J-vertex>`".into()));
                    }
                    edges.push((
                        tokens[1].to_string(),
                        tokens[2].to_string(),
                        tokens[3].to_string(),
                    ));
                }
                "pref" => {
                    if tokens.len() < 2 {
                        return Err(err("expected `pref <vertex> <edge>...`".into()));
                    }
                    prefs.push((
                        tokens[1].to_string(),
                        tokens[2..].iter().map(|s| s.to_string()).collect(),
                    ));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let side_i = side_i.ok_or(Error::Parse {
            line: 0,
            msg: "missing `side I` declaration".into(),
        })?;
        let side_j = side_j.ok_or(Error::Parse {
            line: 0,
            msg: "missing `side J` declaration".into(),
        })?;
        Self::new(&side_i, &side_j, &edges, &prefs)
    }

    /// Emits the instance in the file format accepted by [`Self::parse`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let fmt_side = |ids: &[VertexId]| {
            ids.iter()
                .map(|v| self.vertices[v.0].id.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "side I {}", fmt_side(&self.side_i));
        let _ = writeln!(out, "side J {}", fmt_side(&self.side_j));
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                e.id, self.vertices[e.m.0].id, self.vertices[e.w.0].id
            );
        }
        for v in &self.vertices {
            if !v.prefs.is_empty() {
                let list = v
                    .prefs
                    .iter()
                    .map(|e| self.edges[e.0].id.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(out, "pref {} {}", v.id, list);
            }
        }
        out
    }

    pub fn vertex(&self, id: &str) -> Result<VertexId> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<EdgeId> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: VertexId) -> &str {
        &self.vertices[v.0].id
    }

    pub fn edge_id(&self, e: EdgeId) -> &str {
        &self.edges[e.0].id
    }

    pub fn side(&self, v: VertexId) -> Side {
        self.vertices[v.0].side
    }

    /// I-endpoint of an edge.
    pub fn endpoint_i(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].m
    }

    /// J-endpoint of an edge.
    pub fn endpoint_j(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].w
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.edges[e.0].m, self.edges[e.0].w)
    }

    /// The endpoint of `e` on the other side from `v`.
    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let info = &self.edges[e.0];
        if info.m == v {
            info.w
        } else {
            info.m
        }
    }

    /// 1-based rank of `e` at its I-endpoint (`r_I`).
    pub fn rank_i(&self, e: EdgeId) -> usize {
        self.edges[e.0].rank_i
    }

    /// 1-based rank of `e` at its J-endpoint (`r_J`).
    pub fn rank_j(&self, e: EdgeId) -> usize {
        self.edges[e.0].rank_j
    }

    /// 1-based rank of `e` at an endpoint `v`.
    pub fn rank_at(&self, e: EdgeId, v: VertexId) -> usize {
        let info = &self.edges[e.0];
        if info.m == v {
            info.rank_i
        } else {
            debug_assert_eq!(info.w, v);
            info.rank_j
        }
    }

    /// True iff `v` strictly prefers `a` to `b`.
    pub fn prefers(&self, v: VertexId, a: EdgeId, b: EdgeId) -> bool {
        self.rank_at(a, v) < self.rank_at(b, v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    /// Vertices of side I in declaration order.
    pub fn side_i(&self) -> &[VertexId] {
        &self.side_i
    }

    /// Vertices of side J in declaration order.
    pub fn side_j(&self) -> &[VertexId] {
        &self.side_j
    }

    /// Vertices of a side in canonical (lexicographic id) order.
    pub fn side_canonical(&self, side: Side) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = match side {
            Side::I => self.side_i.clone(),
            Side::J => self.side_j.clone(),
        };
        vs.sort_by(|a, b| self.vertices[a.0].id.cmp(&self.vertices[b.0].id));
        vs
    }

    /// `delta(v)`: edges incident to `v` in preference order, best first.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.vertices[v.0].prefs
    }

    /// `delta(v)` looked up by id.
    pub fn incident_edges_by_id(&self, id: &str) -> Result<&[EdgeId]> {
        Ok(self.incident_edges(self.vertex(id)?))
    }

    /// `gamma(e)`: edges weakly preferred to `e` at one of its endpoints,
    /// including `e` itself.
    pub fn gamma_set(&self, e: EdgeId) -> BTreeSet<EdgeId> {
        let info = &self.edges[e.0];
        let mut out = BTreeSet::new();
        for (v, rank) in [(info.m, info.rank_i), (info.w, info.rank_j)] {
            for &f in &self.vertices[v.0].prefs[..rank] {
                out.insert(f);
            }
        }
        out
    }

    /// Induced instance on the surviving vertices, with relative
    /// preference order preserved.
    pub fn remove_vertices(&self, drop: &BTreeSet<VertexId>) -> Result<Self> {
        let keep = |v: &VertexId| !drop.contains(v);
        let side_i: Vec<String> = self
            .side_i
            .iter()
            .filter(|v| keep(v))
            .map(|v| self.vertices[v.0].id.clone())
            .collect();
        let side_j: Vec<String> = self
            .side_j
            .iter()
            .filter(|v| keep(v))
            .map(|v| self.vertices[v.0].id.clone())
            .collect();
        let survives =
            |e: &EdgeInfo| !drop.contains(&e.m) && !drop.contains(&e.w);
        let edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .filter(|e| survives(e))
            .map(|e| {
                (
                    e.id.clone(),
                    self.vertices[e.m.0].id.clone(),
                    self.vertices[e.w.0].id.clone(),
                )
            })
            .collect();
        let mut prefs = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if drop.contains(&VertexId(i)) {
                continue;
            }
            let list: Vec<String> = v
                .prefs
                .iter()
                .filter(|e| survives(&self.edges[e.0]))
                .map(|e| self.edges[e.0].id.clone())
                .collect();
            if !list.is_empty() {
                prefs.push((v.id.clone(), list));
            }
        }
        Self::new(&side_i, &side_j, &edges, &prefs)
    }

    /// Same as [`Self::remove_vertices`], by vertex ids.
    pub fn remove_vertices_by_id(&self, drop: &[&str]) -> Result<Self> {
        let set = drop
            .iter()
            .map(|id| self.vertex(id))
            .collect::<Result<BTreeSet<_>>>()?;
        self.remove_vertices(&set)
    }

    /// Edge ids of a set in canonical order.
    pub fn format_edges<'a, It: IntoIterator<Item = &'a EdgeId>>(&self, edges: It) -> String {
        let mut ids: Vec<&str> = edges.into_iter().map(|e| self.edge_id(*e)).collect();
        ids.sort_unstable();
        ids.join(" ")
    }
}

fn check_id(id: &str) -> Result<()> {
    if id.is_empty() || id.chars().any(|c| c.is_whitespace()) || id == "#" {
        return Err(Error::InvalidInstance(format!(
            "id `{id}` must be non-empty and whitespace-free"
        )));
    }
    Ok(())
}

/// A matching: a set of edges, no two sharing a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    edges: BTreeSet<EdgeId>,
}

impl Matching {
    pub fn new(inst: &PreferenceInstance, edges: BTreeSet<EdgeId>) -> Result<Self> {
        let mut covered = HashSet::new();
        for &e in &edges {
            if e.0 >= inst.edge_count() {
                return Err(Error::NotAMatching("edge index out of range".into()));
            }
            let (m, w) = inst.endpoints(e);
            for v in [m, w] {
                if !covered.insert(v) {
                    return Err(Error::NotAMatching(format!(
                        "two edges share vertex `{}`",
                        inst.vertex_id(v)
                    )));
                }
            }
        }
        Ok(Self { edges })
    }

    pub fn from_ids(inst: &PreferenceInstance, ids: &[&str]) -> Result<Self> {
        let edges = ids
            .iter()
            .map(|id| inst.edge(id))
            .collect::<Result<BTreeSet<_>>>()?;
        Self::new(inst, edges)
    }

    pub fn empty() -> Self {
        Self {
            edges: BTreeSet::new(),
        }
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Per-vertex assignment: the matched edge at each vertex, if any.
    pub fn assignment(&self, inst: &PreferenceInstance) -> Vec<Option<EdgeId>> {
        let mut assign = vec![None; inst.vertex_count()];
        for &e in &self.edges {
            let (m, w) = inst.endpoints(e);
            assign[m.0] = Some(e);
            assign[w.0] = Some(e);
        }
        assign
    }

    /// Vertices covered by the matching.
    pub fn covered(&self, inst: &PreferenceInstance) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &e in &self.edges {
            let (m, w) = inst.endpoints(e);
            out.insert(m);
            out.insert(w);
        }
        out
    }

    /// Canonical text form: edge ids, lexicographic, space-separated.
    pub fn format(&self, inst: &PreferenceInstance) -> String {
        inst.format_edges(&self.edges)
    }
}

/// Sorts matchings by their canonical id lists, for deterministic output.
pub fn sort_matchings(inst: &PreferenceInstance, matchings: &mut [Matching]) {
    matchings.sort_by_key(|m| {
        let mut ids: Vec<String> = m.edges().iter().map(|e| inst.edge_id(*e).to_string()).collect();
        ids.sort();
        ids
    });
}

/// Parses a matching-list file: one matching per line, space-separated
/// edge ids; `#` comments and blank lines ignored.
pub fn parse_matching_list(inst: &PreferenceInstance, text: &str) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for raw in text.lines() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let ids: Vec<&str> = content.split_whitespace().collect();
        out.push(Matching::from_ids(inst, &ids)?);
    }
    Ok(out)
}

/// Deduplicating map from edge id to an arbitrary value, used by the
/// weight and fractional-vector file parsers.
pub(crate) fn parse_edge_value_lines<'a>(
    text: &'a str,
    tag: &str,
) -> Result<Vec<(usize, &'a str, &'a str)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != tag {
            return Err(Error::Parse {
                line,
                msg: format!("expected `{tag} <edge-id> <decimal>`"),
            });
        }
        out.push((line, tokens[1], tokens[2]));
    }
    Ok(out)
}
