//! The `(n+1)`-coloured level graph and its incidence geometry.
//!
//! Vertices carry a level in `0..=n` and edges join adjacent levels only.
//! Incidence between vertices of levels `i < j` means a monotone chain of
//! edges through every intermediate level; flags are pairwise-incident
//! tuples and a chamber is a flag with one vertex per level.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub type VertexId = usize;
pub type Level = usize;

/// An `(n+1)`-coloured graph with edges only between adjacent levels.
///
/// Vertex ids are dense integers assigned in insertion order, so that
/// construction recipes replay byte-identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGraph {
    dim: usize,
    levels: Vec<Level>,
    adj: Vec<Vec<VertexId>>, // sorted neighbour lists
}

/// Result of a meet (`x ∧ y`) or join (`x ∨ y`) query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeetJoin {
    /// The common incidence set at the extreme level is empty.
    Empty,
    /// All vertices whose extreme-level incidence set equals the common one.
    Witnesses(Vec<VertexId>),
    /// The common set is nonempty but no vertex captures it. This certifies
    /// a violation of class condition 2 (resp. 3), it is not a usage error.
    NoWitness,
}

/// Classification of a vertex tuple as a flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagKind {
    NotFlag,
    Flag,
    DenseFlag,
}

/// A vertex path together with its tightest level band.
///
/// `band = (j, m)` means every vertex lies in `V_j ∪ ... ∪ V_{j+m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCert {
    pub vertices: Vec<VertexId>,
    pub band: (Level, usize),
    pub simple_cycle: bool,
}

impl LevelGraph {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionZero);
        }
        Ok(LevelGraph {
            dim,
            levels: Vec::new(),
            adj: Vec::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.levels.len()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.levels.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn level(&self, v: VertexId) -> Level {
        self.levels[v]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    /// Neighbours of `v` lying on the given level.
    pub fn neighbors_at(&self, v: VertexId, level: Level) -> Vec<VertexId> {
        self.adj[v]
            .iter()
            .copied()
            .filter(|&u| self.levels[u] == level)
            .collect()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.levels.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as sorted `(min, max)` pairs, lexicographically.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertices_at(&self, level: Level) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.levels[v] == level).collect()
    }

    pub fn add_vertex(&mut self, level: Level) -> Result<VertexId> {
        if level > self.dim {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.dim,
            });
        }
        self.levels.push(level);
        self.adj.push(Vec::new());
        Ok(self.levels.len() - 1)
    }

    /// Adds an undirected edge. Idempotent; the endpoints must sit on
    /// adjacent levels.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let (lu, lv) = (self.levels[u], self.levels[v]);
        if lu.abs_diff(lv) != 1 {
            return Err(Error::EdgeLevelMismatch(u, v));
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
        }
        if let Err(pos) = self.adj[v].binary_search(&u) {
            self.adj[v].insert(pos, u);
        }
        Ok(())
    }

    /// Removes the most recently added vertex and its edges. Supports
    /// rolling back a speculative extension; only the last vertex can go.
    pub fn pop_vertex(&mut self) {
        let v = self.levels.len() - 1;
        let nbrs = self.adj.pop().expect("nonempty");
        self.levels.pop();
        for u in nbrs {
            if let Ok(pos) = self.adj[u].binary_search(&v) {
                self.adj[u].remove(pos);
            }
        }
    }

    /// Incidence: `x = y`, or a monotone chain of edges from the lower to
    /// the higher vertex through every intermediate level.
    pub fn incident(&self, x: VertexId, y: VertexId) -> Result<bool> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Ok(true);
        }
        let (lo, hi) = if self.levels[x] <= self.levels[y] {
            (x, y)
        } else {
            (y, x)
        };
        if self.levels[lo] == self.levels[hi] {
            return Ok(false);
        }
        // Frontier climbs one level per step.
        let mut frontier: BTreeSet<VertexId> = BTreeSet::new();
        frontier.insert(lo);
        for level in self.levels[lo]..self.levels[hi] {
            let mut next = BTreeSet::new();
            for &u in &frontier {
                for &w in &self.adj[u] {
                    if self.levels[w] == level + 1 {
                        next.insert(w);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                return Ok(false);
            }
        }
        Ok(frontier.contains(&hi))
    }

    /// All vertices incident with `x`, other than `x` itself.
    pub fn residue(&self, x: VertexId) -> Result<Vec<VertexId>> {
        self.check_vertex(x)?;
        let mut out = Vec::new();
        // Upward and downward reachability by monotone chains.
        for dir in [1i64, -1] {
            let mut frontier = vec![x];
            let mut level = self.levels[x] as i64;
            loop {
                level += dir;
                if level < 0 || level > self.dim as i64 {
                    break;
                }
                let mut next = BTreeSet::new();
                for &u in &frontier {
                    for &w in &self.adj[u] {
                        if self.levels[w] as i64 == level {
                            next.insert(w);
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                out.extend(next.iter().copied());
                frontier = next.into_iter().collect();
            }
        }
        let mut out: Vec<_> = out.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        out.retain(|&v| v != x);
        Ok(out)
    }

    /// Level-0 vertices incident with `x`.
    pub fn shadow_bottom(&self, x: VertexId) -> BTreeSet<VertexId> {
        self.shadow(x, 0)
    }

    /// Level-n vertices incident with `x`.
    pub fn shadow_top(&self, x: VertexId) -> BTreeSet<VertexId> {
        self.shadow(x, self.dim)
    }

    fn shadow(&self, x: VertexId, target: Level) -> BTreeSet<VertexId> {
        let lx = self.levels[x];
        if lx == target {
            return BTreeSet::from([x]);
        }
        let dir: i64 = if target > lx { 1 } else { -1 };
        let mut frontier = BTreeSet::from([x]);
        let mut level = lx as i64;
        while level != target as i64 {
            level += dir;
            let mut next = BTreeSet::new();
            for &u in &frontier {
                for &w in &self.adj[u] {
                    if self.levels[w] as i64 == level {
                        next.insert(w);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        frontier
    }

    /// The meet `x ∧ y`: vertices capturing exactly the common level-0
    /// incidences of the pair, or `Empty` when there are none.
    pub fn meet(&self, x: VertexId, y: VertexId) -> Result<MeetJoin> {
        self.meet_join(x, y, 0)
    }

    /// The join `x ∨ y`, the level-n dual of [`LevelGraph::meet`].
    pub fn join(&self, x: VertexId, y: VertexId) -> Result<MeetJoin> {
        self.meet_join(x, y, self.dim)
    }

    fn meet_join(&self, x: VertexId, y: VertexId, target: Level) -> Result<MeetJoin> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::NotDistinct(x, y));
        }
        let sx = self.shadow(x, target);
        let sy = self.shadow(y, target);
        let common: BTreeSet<VertexId> = sx.intersection(&sy).copied().collect();
        if common.is_empty() {
            return Ok(MeetJoin::Empty);
        }
        let witnesses: Vec<VertexId> = self
            .vertices()
            .filter(|&z| self.shadow(z, target) == common)
            .collect();
        if witnesses.is_empty() {
            Ok(MeetJoin::NoWitness)
        } else {
            Ok(MeetJoin::Witnesses(witnesses))
        }
    }

    /// Classifies a vertex sequence as a flag. Exact duplicates are dropped
    /// first; the sequence is then sorted by level.
    pub fn classify_flag(&self, vs: &[VertexId]) -> Result<FlagKind> {
        for &v in vs {
            self.check_vertex(v)?;
        }
        let mut sorted: Vec<VertexId> = vs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.sort_by_key(|&v| self.levels[v]);
        for i in 0..sorted.len() {
            for j in i + 1..sorted.len() {
                if !self.incident(sorted[i], sorted[j])? {
                    return Ok(FlagKind::NotFlag);
                }
            }
        }
        if sorted.len() >= 2 {
            let dense = sorted.windows(2).all(|w| {
                self.levels[w[1]] == self.levels[w[0]] + 1 && self.has_edge(w[0], w[1])
            });
            if dense {
                return Ok(FlagKind::DenseFlag);
            }
        }
        Ok(FlagKind::Flag)
    }

    /// Tightest level band `(j, m)` containing all of `vs`.
    pub fn band_of(&self, vs: &[VertexId]) -> (Level, usize) {
        let lo = vs.iter().map(|&v| self.levels[v]).min().unwrap_or(0);
        let hi = vs.iter().map(|&v| self.levels[v]).max().unwrap_or(0);
        (lo, hi - lo)
    }

    /// Checks that consecutive vertices are joined by edges.
    pub fn validate_path(&self, path: &[VertexId]) -> Result<()> {
        if path.is_empty() {
            return Err(Error::InvalidPath("empty".into()));
        }
        for &v in path {
            self.check_vertex(v)?;
        }
        for w in path.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(Error::InvalidPath(format!("no edge {}..{}", w[0], w[1])));
            }
        }
        Ok(())
    }

    pub fn path_cert(&self, path: &[VertexId]) -> Result<PathCert> {
        self.validate_path(path)?;
        let simple_cycle = path.len() >= 4 && path.first() == path.last() && {
            let inner = &path[..path.len() - 1];
            let set: BTreeSet<_> = inner.iter().collect();
            set.len() == inner.len()
        };
        Ok(PathCert {
            vertices: path.to_vec(),
            band: self.band_of(path),
            simple_cycle,
        })
    }

    /// All simple cycles of length at most `max_len`, one representative per
    /// rotation/reversal class: least vertex id first, lexicographically
    /// smaller direction. Each certificate repeats the root at the end.
    pub fn simple_cycles(&self, max_len: usize) -> Vec<PathCert> {
        let mut out = Vec::new();
        let n = self.vertex_count();
        for root in 0..n {
            // DFS over vertices > root; a cycle is recorded when it closes
            // back at root with second < last, which fixes the direction.
            let mut path = vec![root];
            let mut on_path = vec![false; n];
            on_path[root] = true;
            self.cycle_dfs(root, max_len, &mut path, &mut on_path, &mut out);
        }
        out
    }

    fn cycle_dfs(
        &self,
        root: VertexId,
        max_len: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<PathCert>,
    ) {
        let cur = *path.last().unwrap();
        for &next in &self.adj[cur] {
            if next == root && path.len() >= 3 && path[1] < cur {
                let mut cycle = path.clone();
                cycle.push(root);
                out.push(PathCert {
                    band: self.band_of(&cycle),
                    vertices: cycle,
                    simple_cycle: true,
                });
                continue;
            }
            if next <= root || on_path[next] || path.len() >= max_len {
                continue;
            }
            path.push(next);
            on_path[next] = true;
            self.cycle_dfs(root, max_len, path, on_path, out);
            path.pop();
            on_path[next] = false;
        }
    }

    /// Does any cycle lie inside the band `V_{lo} ∪ ... ∪ V_{hi}`? Returns a
    /// witness cycle (closed vertex list) if so.
    pub fn band_has_cycle(&self, lo: Level, hi: Level) -> Option<Vec<VertexId>> {
        let inside = |v: VertexId| self.levels[v] >= lo && self.levels[v] <= hi;
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut parent = vec![usize::MAX; n];
        for start in self.vertices().filter(|&v| inside(v)) {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if !inside(u) || u == parent[v] {
                        continue;
                    }
                    if seen[u] {
                        // Back edge: walk both tails up to their meeting point.
                        let mut pa = vec![v];
                        while *pa.last().unwrap() != start {
                            pa.push(parent[*pa.last().unwrap()]);
                        }
                        let mut pb = vec![u];
                        while *pb.last().unwrap() != start {
                            pb.push(parent[*pb.last().unwrap()]);
                        }
                        // Trim the common suffix down to the meeting vertex.
                        while pa.len() >= 2 && pb.len() >= 2 && pa[pa.len() - 1] == pb[pb.len() - 1]
                            && pa[pa.len() - 2] == pb[pb.len() - 2]
                        {
                            pa.pop();
                            pb.pop();
                        }
                        pb.pop();
                        pb.reverse();
                        pa.extend(pb);
                        pa.push(v);
                        return Some(pa);
                    }
                    seen[u] = true;
                    parent[u] = v;
                    stack.push(u);
                }
            }
        }
        None
    }

    /// The dual graph: level `i` becomes `n - i`, edges unchanged.
    pub fn dualize(&self) -> LevelGraph {
        LevelGraph {
            dim: self.dim,
            levels: self.levels.iter().map(|&l| self.dim - l).collect(),
            adj: self.adj.clone(),
        }
    }

    /// The function `f^i_k`: the k-th vertex on a unique shortest `E_i`-path
    /// of length at least `k` from `x` to `y`, and `x` otherwise. Total by
    /// definition.
    pub fn path_fn(&self, i: usize, k: usize, x: VertexId, y: VertexId) -> VertexId {
        if i < 1 || i > self.dim || k < 1 || x >= self.vertex_count() || y >= self.vertex_count() {
            return x;
        }
        let (lo, hi) = (i - 1, i);
        let in_band = |v: VertexId| self.levels[v] >= lo && self.levels[v] <= hi;
        if !in_band(x) || !in_band(y) || x == y {
            return x;
        }
        // BFS with shortest-path counting inside the band.
        let n = self.vertex_count();
        let mut dist = vec![usize::MAX; n];
        let mut count = vec![0usize; n];
        let mut pred = vec![usize::MAX; n];
        dist[x] = 0;
        count[x] = 1;
        let mut queue = std::collections::VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !in_band(u) {
                    continue;
                }
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    count[u] = count[v];
                    pred[u] = v;
                    queue.push_back(u);
                } else if dist[u] == dist[v] + 1 {
                    count[u] = count[u].saturating_add(count[v]);
                }
            }
        }
        if dist[y] == usize::MAX || count[y] != 1 || dist[y] < k {
            return x;
        }
        // Unique shortest path: walk predecessors back from y.
        let mut path = vec![y];
        let mut v = y;
        while v != x {
            v = pred[v];
            path.push(v);
        }
        path.reverse();
        path[k]
    }

    /// Is the band `V_{i-1} ∪ V_i` connected? Empty and singleton bands count
    /// as connected.
    pub fn band_connected(&self, i: usize) -> bool {
        let verts: Vec<VertexId> = self
            .vertices()
            .filter(|&v| self.levels[v] + 1 == i || self.levels[v] == i)
            .collect();
        if verts.len() <= 1 {
            return true;
        }
        let inside: BTreeSet<_> = verts.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![verts[0]];
        seen.insert(verts[0]);
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if inside.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == verts.len()
    }

    /// Connected components of the whole graph, as component ids per vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Induced subgraph on `keep`, with levels shifted down by `level_offset`.
    /// Returns the subgraph and the map from new ids to old ids.
    pub fn induced(&self, keep: &[VertexId], level_offset: Level) -> (LevelGraph, Vec<VertexId>) {
        let mut keep: Vec<VertexId> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let max_level = keep
            .iter()
            .map(|&v| self.levels[v] - level_offset)
            .max()
            .unwrap_or(1);
        let mut sub = LevelGraph::new(max_level.max(1)).expect("dim >= 1");
        for &old in &keep {
            sub.levels.push(self.levels[old] - level_offset);
            sub.adj.push(Vec::new());
        }
        for &old in &keep {
            for &w in &self.adj[old] {
                if index[w] != usize::MAX && old < w {
                    sub.add_edge(index[old], index[w]).expect("edge discipline");
                }
            }
        }
        (sub, keep)
    }
}

/// The canonical chamber chain: vertices `0..=n` with consecutive edges.
pub fn chamber_chain(n: usize) -> Result<LevelGraph> {
    let mut g = LevelGraph::new(n)?;
    for level in 0..=n {
        g.add_vertex(level)?;
    }
    for v in 0..n {
        g.add_edge(v, v + 1)?;
    }
    Ok(g)
}
