//! Algebraic closure relative to a finite ambient graph.
//!
//! The central relation is reducedness of a path. A path inside a single
//! band is reduced iff it repeats no vertex. A wider path is examined turn
//! by turn: a turn whose two neighbours are joined by the band tree-path
//! avoiding the turn vertex, or by a path in the turn vertex's residue one
//! band over, is a removable detour and the rewrite is binding; a turn
//! admitting neither bypass is a genuine waypoint and survives. A path is
//! reduced when every rewrite chain it forces ends in a repetition-free
//! single-band path or runs out of turns.
//!
//! Turns of reduced paths generate the algebraic closure; the independent
//! oracle intersects all nice subsets instead, and the two agree on
//! saturated instances.
//!
//! All operations are pure queries over an immutable graph.

use crate::graph::{Level, LevelGraph, VertexId};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// One rewrite step of a reducedness derivation, recorded in checking
/// order: the turn removed and the segment that replaced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationStep {
    /// The turn's neighbours are joined inside their band avoiding the turn.
    BandBypass { turn: VertexId, via: Vec<VertexId> },
    /// The turn's neighbours are joined in the turn's residue one band over.
    ResiduePeel { turn: VertexId, via: Vec<VertexId> },
}

/// Certificate that a path is reduced: the rewrite chain from the path to
/// its terminal form, together with the turns of the original path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCert {
    pub path: Vec<VertexId>,
    pub derivation: Vec<DerivationStep>,
    /// Fixpoint of the rewriting: repetition-free in a single band, or a
    /// wider path all of whose turns are forced.
    pub terminal: Vec<VertexId>,
    pub turns: Vec<VertexId>,
}

/// Interior vertices where the path changes direction: both neighbours on
/// the same adjacent level.
pub fn turns(g: &LevelGraph, path: &[VertexId]) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for t in 1..path.len().saturating_sub(1) {
        if g.level(path[t - 1]) == g.level(path[t + 1]) && seen.insert(path[t]) {
            out.push(path[t]);
        }
    }
    out
}

fn width(g: &LevelGraph, path: &[VertexId]) -> usize {
    let (_, m) = g.band_of(path);
    m
}

fn repetition_free(path: &[VertexId]) -> bool {
    let set: BTreeSet<_> = path.iter().collect();
    set.len() == path.len()
}

struct ReduceCtx<'g> {
    g: &'g LevelGraph,
    memo: HashMap<Vec<VertexId>, bool>,
    max_len: usize,
    max_orbit: usize,
}

impl<'g> ReduceCtx<'g> {
    fn new(g: &'g LevelGraph) -> Self {
        ReduceCtx {
            g,
            memo: HashMap::new(),
            max_len: (g.vertex_count().max(1)) * (g.dimension() + 1),
            max_orbit: 20_000,
        }
    }

    /// All single-turn rewrites of the path at position `t`: the detour
    /// through the turn is replaced by a path joining its neighbours inside
    /// their band avoiding the turn, or inside the turn's residue one band
    /// over.
    fn rewrites(&self, path: &[VertexId], t: usize) -> Vec<DerivationStep> {
        let g = self.g;
        let (u, c, w) = (path[t - 1], path[t], path[t + 1]);
        let lc = g.level(c);
        let ln = g.level(u); // == level(w)
        let mut out = Vec::new();
        let (blo, bhi) = (lc.min(ln), lc.max(ln));
        let in_band = |v: VertexId| v != c && g.level(v) >= blo && g.level(v) <= bhi;
        for via in simple_paths_in(g, u, w, &in_band) {
            out.push(DerivationStep::BandBypass { turn: c, via });
        }
        let band: Vec<Level> = if lc > ln {
            // peak: detour below the neighbours
            if ln == 0 {
                vec![0]
            } else {
                vec![ln - 1, ln]
            }
        } else {
            // valley: detour above
            if ln == g.dimension() {
                vec![ln]
            } else {
                vec![ln, ln + 1]
            }
        };
        let residue: BTreeSet<VertexId> =
            g.residue(c).expect("registered").into_iter().collect();
        let in_res = |v: VertexId| band.contains(&g.level(v)) && residue.contains(&v);
        for via in simple_paths_in(g, u, w, &in_res) {
            if via.len() >= 2 {
                out.push(DerivationStep::ResiduePeel { turn: c, via });
            }
        }
        out
    }

    /// A collapse is the witness of non-reducedness: an immediate backtrack,
    /// or a repetition in a single-band path.
    fn collapsed(&self, path: &[VertexId]) -> bool {
        if (1..path.len().saturating_sub(1)).any(|t| path[t - 1] == path[t + 1]) {
            return true;
        }
        width(self.g, path) <= 1 && !repetition_free(path)
    }

    /// Is the path reduced?
    ///
    /// A path dies on an immediate backtrack, on a repetition inside a
    /// single band, or when some chain of turn rewrites produces a detour
    /// ground that re-enters the path at a vertex whose original occurrence
    /// is still present — the splice would repeat it, revealing a shortcut
    /// of the original path. Grounds meeting only rewrite-introduced
    /// vertices are overlaps between detours and prove nothing, and turns
    /// with no ground at all are genuine waypoints. Rewrite results inside
    /// a single band are reduced leaves and end their branch.
    fn check(&mut self, path: &[VertexId]) -> bool {
        if path.len() <= 2 {
            return true;
        }
        if let Some(&known) = self.memo.get(path) {
            return known;
        }
        let verdict = self.explore(path);
        self.memo.insert(path.to_vec(), verdict);
        verdict
    }

    fn explore(&self, orig: &[VertexId]) -> bool {
        if self.collapsed(orig) {
            return false;
        }
        if width(self.g, orig) <= 1 {
            return true; // repetition-free in a single band
        }
        // Occurrence provenance: true marks positions of the original path.
        type State = (Vec<VertexId>, Vec<bool>);
        let start: State = (orig.to_vec(), vec![true; orig.len()]);
        let mut seen: BTreeSet<State> = BTreeSet::new();
        seen.insert(start.clone());
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some((path, prov)) = queue.pop_front() {
            for t in 1..path.len() - 1 {
                if self.g.level(path[t - 1]) != self.g.level(path[t + 1]) {
                    continue;
                }
                for step in self.rewrites(&path, t) {
                    let via = match &step {
                        DerivationStep::BandBypass { via, .. } => via,
                        DerivationStep::ResiduePeel { via, .. } => via,
                    };
                    let interior = &via[1..via.len() - 1];
                    let hits_original = interior.iter().any(|&v| {
                        path.iter()
                            .zip(prov.iter())
                            .any(|(&p, &original)| p == v && original)
                    });
                    if hits_original {
                        return false;
                    }
                    if interior.iter().any(|v| path.contains(v)) {
                        continue; // detour grounds overlap; proves nothing
                    }
                    let mut next: Vec<VertexId> = path[..t].to_vec();
                    let mut next_prov: Vec<bool> = prov[..t].to_vec();
                    next.extend_from_slice(interior);
                    next_prov.extend(std::iter::repeat(false).take(interior.len()));
                    next.extend_from_slice(&path[t + 1..]);
                    next_prov.extend_from_slice(&prov[t + 1..]);
                    if width(self.g, &next) <= 1 || next.len() > self.max_len {
                        continue; // single-band leaf, or out of budget
                    }
                    if seen.len() > self.max_orbit {
                        continue;
                    }
                    let state = (next, next_prov);
                    if seen.insert(state.clone()) {
                        queue.push_back(state);
                    }
                }
            }
        }
        true
    }
}

/// All simple paths between `a` and `b` in the subgraph induced on
/// `allowed`, canonical DFS order.
fn simple_paths_in(
    g: &LevelGraph,
    a: VertexId,
    b: VertexId,
    allowed: &dyn Fn(VertexId) -> bool,
) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    if !allowed(a) || !allowed(b) || a == b {
        return out;
    }
    let mut stack = vec![vec![a]];
    while let Some(path) = stack.pop() {
        let cur = *path.last().unwrap();
        for &u in g.neighbors(cur) {
            if !allowed(u) || path.contains(&u) {
                continue;
            }
            let mut next = path.clone();
            next.push(u);
            if u == b {
                out.push(next);
            } else {
                stack.push(next);
            }
        }
    }
    out
}

/// Is the path reduced? Returns a certificate, or `None`.
///
/// The derivation recorded is a greedy rewrite chain from the path toward
/// a band-minimal form (the generative reading runs the chain backwards,
/// from the base to the path).
pub fn is_reduced(g: &LevelGraph, path: &[VertexId]) -> Result<Option<ReducedCert>> {
    is_reduced_capped(g, path, (g.vertex_count().max(1)) * (g.dimension() + 1))
}

/// [`is_reduced`] with an explicit cap on the length of rewritten paths.
pub fn is_reduced_capped(
    g: &LevelGraph,
    path: &[VertexId],
    max_len: usize,
) -> Result<Option<ReducedCert>> {
    g.validate_path(path)?;
    let mut ctx = ReduceCtx::new(g);
    ctx.max_len = max_len;
    if !ctx.check(path) {
        return Ok(None);
    }
    let mut steps = Vec::new();
    let mut terminal = path.to_vec();
    let rank = |g: &LevelGraph, p: &[VertexId]| (width(g, p), p.len());
    loop {
        let mut improved = false;
        't: for t in 1..terminal.len().saturating_sub(1) {
            if g.level(terminal[t - 1]) != g.level(terminal[t + 1]) {
                continue;
            }
            for step in ctx.rewrites(&terminal, t) {
                let via = match &step {
                    DerivationStep::BandBypass { via, .. } => via,
                    DerivationStep::ResiduePeel { via, .. } => via,
                };
                let mut next: Vec<VertexId> = terminal[..t - 1].to_vec();
                next.extend(via.iter().copied());
                next.extend_from_slice(&terminal[t + 2..]);
                if rank(g, &next) < rank(g, &terminal) {
                    steps.push(step);
                    terminal = next;
                    improved = true;
                    break 't;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(Some(ReducedCert {
        path: path.to_vec(),
        derivation: steps,
        terminal,
        turns: turns(g, path),
    }))
}

/// Enumerates simple paths from `a` to `b` in canonical DFS order, passing
/// each to the visitor; the visitor returns `false` to stop early.
fn for_each_simple_path(
    g: &LevelGraph,
    a: VertexId,
    b: VertexId,
    visit: &mut dyn FnMut(&[VertexId]) -> bool,
) {
    let mut path = vec![a];
    let mut on_path = vec![false; g.vertex_count()];
    on_path[a] = true;
    path_dfs(g, b, &mut path, &mut on_path, visit);
}

fn path_dfs(
    g: &LevelGraph,
    b: VertexId,
    path: &mut Vec<VertexId>,
    on_path: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[VertexId]) -> bool,
) -> bool {
    let cur = *path.last().unwrap();
    if cur == b {
        return visit(path);
    }
    for &u in g.neighbors(cur) {
        if on_path[u] {
            continue;
        }
        path.push(u);
        on_path[u] = true;
        let keep_going = path_dfs(g, b, path, on_path, visit);
        path.pop();
        on_path[u] = false;
        if !keep_going {
            return false;
        }
    }
    true
}

/// `acl` of a pair: the endpoints plus every vertex at which some reduced
/// path between them changes direction.
pub fn acl_pair(g: &LevelGraph, a: VertexId, b: VertexId) -> Result<BTreeSet<VertexId>> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let mut out = BTreeSet::from([a, b]);
    if a == b {
        return Ok(out);
    }
    let mut ctx = ReduceCtx::new(g);
    for_each_simple_path(g, a, b, &mut |path| {
        let candidate_turns = turns(g, path);
        if candidate_turns.iter().any(|t| !out.contains(t)) && ctx.check(path) {
            out.extend(candidate_turns);
        }
        true
    });
    Ok(out)
}

/// `acl` of a finite set: the union of the pairwise closures. Never
/// computed transitively.
pub fn acl(g: &LevelGraph, set: &[VertexId]) -> Result<BTreeSet<VertexId>> {
    let mut sorted: Vec<VertexId> = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: BTreeSet<VertexId> = sorted.iter().copied().collect();
    for (i, &a) in sorted.iter().enumerate() {
        g.check_vertex(a)?;
        for &b in &sorted[i + 1..] {
            out.extend(acl_pair(g, a, b)?);
        }
    }
    Ok(out)
}

/// Union of the vertex sets of all simple paths between `a` and `b` lying
/// inside the band `V_{i-1} ∪ V_i`.
fn band_path_union(g: &LevelGraph, a: VertexId, b: VertexId, i: usize) -> BTreeSet<VertexId> {
    let mut union = BTreeSet::new();
    let in_band = |v: VertexId| g.level(v) + 1 == i || g.level(v) == i;
    if !in_band(a) || !in_band(b) || a == b {
        return union;
    }
    let mut path = vec![a];
    let mut on_path = vec![false; g.vertex_count()];
    on_path[a] = true;
    fn dfs(
        g: &LevelGraph,
        b: VertexId,
        in_band: &dyn Fn(VertexId) -> bool,
        path: &mut Vec<VertexId>,
        on_path: &mut Vec<bool>,
        union: &mut BTreeSet<VertexId>,
    ) {
        let cur = *path.last().unwrap();
        if cur == b {
            union.extend(path.iter().copied());
            return;
        }
        for &u in g.neighbors(cur) {
            if on_path[u] || !in_band(u) {
                continue;
            }
            path.push(u);
            on_path[u] = true;
            dfs(g, b, in_band, path, on_path, union);
            path.pop();
            on_path[u] = false;
        }
    }
    dfs(g, b, &in_band, &mut path, &mut on_path, &mut union);
    union
}

/// Is `set` nice: every `E_i`-path of `g` between members stays inside,
/// and members connected in `g` are connected within the induced subgraph.
pub fn nice_check(g: &LevelGraph, set: &[VertexId]) -> Result<bool> {
    let members: Vec<VertexId> = {
        let mut m = set.to_vec();
        m.sort_unstable();
        m.dedup();
        m
    };
    for &v in &members {
        g.check_vertex(v)?;
    }
    let inside: BTreeSet<VertexId> = members.iter().copied().collect();
    // (1) band paths stay inside
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            for band in 1..=g.dimension() {
                if !band_path_union(g, a, b, band).is_subset(&inside) {
                    return Ok(false);
                }
            }
        }
    }
    // (2) ambient connectivity is realized inside
    let comp = g.components();
    let sub_comp = induced_components(g, &inside);
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if comp[a] == comp[b] && sub_comp[&a] != sub_comp[&b] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn induced_components(g: &LevelGraph, inside: &BTreeSet<VertexId>) -> BTreeMap<VertexId, usize> {
    let mut comp = BTreeMap::new();
    let mut next = 0;
    for &s in inside {
        if comp.contains_key(&s) {
            continue;
        }
        comp.insert(s, next);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if inside.contains(&u) && !comp.contains_key(&u) {
                    comp.insert(u, next);
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    comp
}

/// A finite nice superset of `set`: close under band paths between members
/// and adjoin shortest connecting paths until stable. Not claimed minimal.
pub fn nice_hull(g: &LevelGraph, set: &[VertexId]) -> Result<BTreeSet<VertexId>> {
    for &v in set {
        g.check_vertex(v)?;
    }
    let mut cur: BTreeSet<VertexId> = set.iter().copied().collect();
    let comp = g.components();
    loop {
        let members: Vec<VertexId> = cur.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                for band in 1..=g.dimension() {
                    for v in band_path_union(g, a, b, band) {
                        grew |= cur.insert(v);
                    }
                }
            }
        }
        let sub_comp = induced_components(g, &cur);
        'connect: for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if comp[a] == comp[b] && sub_comp[&a] != sub_comp[&b] {
                    for v in shortest_path(g, a, b).expect("same component") {
                        grew |= cur.insert(v);
                    }
                    break 'connect;
                }
            }
        }
        if !grew {
            return Ok(cur);
        }
    }
}

fn shortest_path(g: &LevelGraph, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
    let mut pred = vec![usize::MAX; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[a] = true;
    let mut queue = std::collections::VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut path = vec![b];
            let mut w = b;
            while w != a {
                w = pred[w];
                path.push(w);
            }
            path.reverse();
            return Some(path);
        }
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                pred[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Default vertex-count guard for [`acl_oracle`].
pub const ORACLE_GUARD: usize = 18;

/// Independent oracle for `acl`: the intersection of all nice subsets of
/// `g` containing `set`, by subset enumeration. Guarded because the sweep
/// is exponential. For many queries on one graph use [`AclOracle`].
pub fn acl_oracle(g: &LevelGraph, set: &[VertexId]) -> Result<BTreeSet<VertexId>> {
    acl_oracle_guarded(g, set, ORACLE_GUARD)
}

pub fn acl_oracle_guarded(
    g: &LevelGraph,
    set: &[VertexId],
    guard: usize,
) -> Result<BTreeSet<VertexId>> {
    AclOracle::new(g, guard)?.closure(set)
}

/// The subset-enumeration oracle with its nice-mask sweep done once.
pub struct AclOracle {
    vertex_count: usize,
    masks: Vec<u32>,
}

impl AclOracle {
    pub fn new(g: &LevelGraph, guard: usize) -> Result<Self> {
        let n = g.vertex_count();
        if n > guard || n > 30 {
            return Err(Error::OracleGuard(n, guard.min(30)));
        }
        Ok(AclOracle {
            vertex_count: n,
            masks: nice_subset_masks(g),
        })
    }

    pub fn closure(&self, set: &[VertexId]) -> Result<BTreeSet<VertexId>> {
        let n = self.vertex_count;
        let mut base: u32 = 0;
        for &v in set {
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            base |= 1 << v;
        }
        let mut inter: u32 = ((1u64 << n) - 1) as u32;
        for &mask in &self.masks {
            if mask & base == base {
                inter &= mask;
                if inter == base {
                    break;
                }
            }
        }
        Ok((0..n).filter(|&v| inter & (1 << v) != 0).collect())
    }
}

/// Pairwise-closure cache for running many `acl` queries on one graph.
pub struct AclCache<'g> {
    g: &'g LevelGraph,
    pairs: std::cell::RefCell<HashMap<(VertexId, VertexId), BTreeSet<VertexId>>>,
}

impl<'g> AclCache<'g> {
    pub fn new(g: &'g LevelGraph) -> Self {
        AclCache {
            g,
            pairs: std::cell::RefCell::new(HashMap::new()),
        }
    }

    pub fn pair(&self, a: VertexId, b: VertexId) -> Result<BTreeSet<VertexId>> {
        let key = (a.min(b), a.max(b));
        if let Some(hit) = self.pairs.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let computed = acl_pair(self.g, key.0, key.1)?;
        self.pairs.borrow_mut().insert(key, computed.clone());
        Ok(computed)
    }

    pub fn acl(&self, set: &[VertexId]) -> Result<BTreeSet<VertexId>> {
        let mut sorted: Vec<VertexId> = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut out: BTreeSet<VertexId> = sorted.iter().copied().collect();
        for (i, &a) in sorted.iter().enumerate() {
            for &b in &sorted[i + 1..] {
                out.extend(self.pair(a, b)?);
            }
        }
        Ok(out)
    }
}

/// All nice subsets of `g` as bitmasks, with the pair constraints
/// precomputed once.
fn nice_subset_masks(g: &LevelGraph) -> Vec<u32> {
    let n = g.vertex_count();
    // pair_union[a][b]: vertices that must join any nice set containing
    // both a and b (band path unions).
    let mut pair_union = vec![vec![0u32; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let mut mask = 0u32;
            for band in 1..=g.dimension() {
                for v in band_path_union(g, a, b, band) {
                    mask |= 1 << v;
                }
            }
            pair_union[a][b] = mask;
        }
    }
    let comp = g.components();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1u32 << n) {
        let members: Vec<VertexId> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if pair_union[a][b] & !mask != 0 {
                    continue 'mask;
                }
            }
        }
        // connectivity inside the subset
        let inside: BTreeSet<VertexId> = members.iter().copied().collect();
        let sub_comp = induced_components(g, &inside);
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if comp[a] == comp[b] && sub_comp[&a] != sub_comp[&b] {
                    continue 'mask;
                }
            }
        }
        out.push(mask);
    }
    out
}

/// The projection of `a` on `A`: the gateway flag of first-entry points of
/// reduced paths from `a` into `acl(A)`, keeping per reachable component
/// of `acl(A)` the entries of minimal path length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionFlag {
    pub source: VertexId,
    pub target_set: BTreeSet<VertexId>,
    pub flag: Vec<VertexId>,
}

pub fn project(g: &LevelGraph, a: VertexId, set: &[VertexId]) -> Result<ProjectionFlag> {
    g.check_vertex(a)?;
    let cl = acl(g, set)?;
    if cl.contains(&a) {
        return Ok(ProjectionFlag {
            source: a,
            target_set: cl,
            flag: vec![a],
        });
    }
    // DFS from a over vertices outside cl; stepping onto a cl vertex ends
    // the walk and records an entry candidate.
    let mut entries: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut ctx = ReduceCtx::new(g);
    let mut path = vec![a];
    let mut on_path = vec![false; g.vertex_count()];
    on_path[a] = true;
    entry_dfs(g, &cl, &mut path, &mut on_path, &mut ctx, &mut entries);
    if entries.is_empty() {
        return Ok(ProjectionFlag {
            source: a,
            target_set: cl,
            flag: Vec::new(),
        });
    }
    // Keep per component of acl(A) the minimal-length entries.
    let comp = g.components();
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for (&v, &len) in &entries {
        let c = comp[v];
        let cur = best.entry(c).or_insert(len);
        *cur = (*cur).min(len);
    }
    let flag: Vec<VertexId> = entries
        .iter()
        .filter(|(&v, &len)| best[&comp[v]] == len)
        .map(|(&v, _)| v)
        .collect();
    Ok(ProjectionFlag {
        source: a,
        target_set: cl,
        flag,
    })
}

fn entry_dfs(
    g: &LevelGraph,
    cl: &BTreeSet<VertexId>,
    path: &mut Vec<VertexId>,
    on_path: &mut Vec<bool>,
    ctx: &mut ReduceCtx,
    entries: &mut BTreeMap<VertexId, usize>,
) {
    let cur = *path.last().unwrap();
    for &u in g.neighbors(cur) {
        if on_path[u] {
            continue;
        }
        path.push(u);
        if cl.contains(&u) {
            let len = path.len() - 1;
            let better = entries.get(&u).map_or(true, |&old| len < old);
            if better && ctx.check(path) {
                entries.insert(u, len);
            }
            path.pop();
            continue;
        }
        on_path[u] = true;
        entry_dfs(g, cl, path, on_path, ctx, entries);
        path.pop();
        on_path[u] = false;
    }
}

/// Forking independence of the vertex `a` from `B` over `C`: the
/// projection on `B ∪ C` lands inside `acl(C)`.
pub fn independent(g: &LevelGraph, a: VertexId, b: &[VertexId], c: &[VertexId]) -> Result<bool> {
    let mut bc: Vec<VertexId> = b.to_vec();
    bc.extend_from_slice(c);
    let proj = project(g, a, &bc)?;
    let cl_c = acl(g, c)?;
    Ok(proj.flag.iter().all(|v| cl_c.contains(v)))
}

/// Tuple independence: every vertex of `acl(A)` projects into `acl(C)`.
pub fn independent_tuple(
    g: &LevelGraph,
    a: &[VertexId],
    b: &[VertexId],
    c: &[VertexId],
) -> Result<bool> {
    let cl_a = acl(g, a)?;
    for &x in &cl_a {
        if !independent(g, x, b, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Regular-type classes over a set, resolved in priority order; IV is a
/// special case of III and wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TypeClass {
    Algebraic,
    I,
    II,
    III,
    IV,
    Unclassified,
}

pub fn classify_type(g: &LevelGraph, a: VertexId, set: &[VertexId]) -> Result<TypeClass> {
    g.check_vertex(a)?;
    let cl = acl(g, set)?;
    if cl.contains(&a) {
        return Ok(TypeClass::Algebraic);
    }
    let la = g.level(a);
    // IV: two closure neighbours forming a dense flag around a.
    for &x in &cl {
        for &y in &cl {
            if g.level(x) + 1 == la
                && la + 1 == g.level(y)
                && g.has_edge(x, a)
                && g.has_edge(a, y)
            {
                return Ok(TypeClass::IV);
            }
        }
    }
    // III: incident closure vertices strictly below and above.
    for &x in &cl {
        for &y in &cl {
            if g.level(x) < la
                && la < g.level(y)
                && g.incident(x, a)?
                && g.incident(a, y)?
            {
                return Ok(TypeClass::III);
            }
        }
    }
    // II: incident to some closure vertex, but in its residue not connected
    // to any closure vertex.
    for &b in &cl {
        if b == a || !g.incident(a, b)? {
            continue;
        }
        let residue: Vec<VertexId> = g.residue(b)?;
        let inside: BTreeSet<VertexId> = residue.iter().copied().collect();
        let sub_comp = induced_components(g, &inside);
        let targets: Vec<VertexId> = residue
            .iter()
            .copied()
            .filter(|v| cl.contains(v))
            .collect();
        let connected = targets
            .iter()
            .any(|t| sub_comp.get(&a) == sub_comp.get(t));
        if !connected {
            return Ok(TypeClass::II);
        }
    }
    // I: not connected to the closure at all.
    let comp = g.components();
    if !cl.iter().any(|&v| comp[v] == comp[a]) {
        return Ok(TypeClass::I);
    }
    Ok(TypeClass::Unclassified)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{generate, Variant};
    use crate::graph::chamber_chain;

    #[test]
    fn turn_examples() {
        let g = chamber_chain(3).unwrap();
        assert!(turns(&g, &[0, 1, 2, 3]).is_empty());
        let mut h = LevelGraph::new(2).unwrap();
        let a = h.add_vertex(0).unwrap();
        let x = h.add_vertex(1).unwrap();
        let b = h.add_vertex(0).unwrap();
        h.add_edge(a, x).unwrap();
        h.add_edge(x, b).unwrap();
        assert_eq!(turns(&h, &[a, x, b]), vec![x]);
        // an E_1 path of length 4 turns at every interior vertex
        let mut p = LevelGraph::new(1).unwrap();
        let vs: Vec<_> = (0..5).map(|i| p.add_vertex(i % 2).unwrap()).collect();
        for w in vs.windows(2) {
            p.add_edge(w[0], w[1]).unwrap();
        }
        assert_eq!(turns(&p, &vs), vs[1..4].to_vec());
    }

    #[test]
    fn single_band_reducedness() {
        let mut p = LevelGraph::new(1).unwrap();
        let vs: Vec<_> = (0..4).map(|i| p.add_vertex(i % 2).unwrap()).collect();
        for w in vs.windows(2) {
            p.add_edge(w[0], w[1]).unwrap();
        }
        assert!(is_reduced(&p, &vs).unwrap().is_some());
        assert!(is_reduced(&p, &[vs[0], vs[1], vs[0]]).unwrap().is_none());
        assert!(is_reduced(&p, &[vs[0], vs[1]]).unwrap().is_some());
    }

    #[test]
    fn dense_chain_is_reduced() {
        let g = chamber_chain(3).unwrap();
        let cert = is_reduced(&g, &[0, 1, 2, 3]).unwrap().unwrap();
        assert!(cert.turns.is_empty());
    }

    #[test]
    fn forced_tent_is_reduced_and_shortcut_tent_is_not() {
        // Tent x0-x1-x2-y1-y0 with nothing joining x1, y1 in R(x2).
        let mut g = LevelGraph::new(2).unwrap();
        let x0 = g.add_vertex(0).unwrap();
        let x1 = g.add_vertex(1).unwrap();
        let x2 = g.add_vertex(2).unwrap();
        let y1 = g.add_vertex(1).unwrap();
        let y0 = g.add_vertex(0).unwrap();
        for &(u, v) in &[(x0, x1), (x1, x2), (x2, y1), (y1, y0)] {
            g.add_edge(u, v).unwrap();
        }
        let tent = [x0, x1, x2, y1, y0];
        let cert = is_reduced(&g, &tent).unwrap().expect("forced tent");
        assert_eq!(cert.turns, vec![x2]);
        // Adding the shortcut edge x0-y1 makes the tent a detour.
        g.add_edge(x0, y1).unwrap();
        assert!(is_reduced(&g, &tent).unwrap().is_none());
    }

    #[test]
    fn acl_pair_examples() {
        // flag pair: closure is the pair itself
        let g = chamber_chain(2).unwrap();
        assert_eq!(
            acl_pair(&g, 0, 2).unwrap(),
            BTreeSet::from([0, 2])
        );
        // disconnected pair
        let mut h = chamber_chain(1).unwrap();
        let iso = h.add_vertex(0).unwrap();
        assert_eq!(acl_pair(&h, 0, iso).unwrap(), BTreeSet::from([0, iso]));
        // unique two-turn path pulls in both turns
        let mut p = LevelGraph::new(1).unwrap();
        let vs: Vec<_> = (0..4).map(|i| p.add_vertex(i % 2).unwrap()).collect();
        for w in vs.windows(2) {
            p.add_edge(w[0], w[1]).unwrap();
        }
        assert_eq!(
            acl_pair(&p, vs[0], vs[3]).unwrap(),
            vs.iter().copied().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn acl_is_pairwise_union_and_idempotent() {
        let (g, _) = generate(2, 14, 21, Variant::Saturated).unwrap();
        let set = [0, 2, g.vertex_count() - 1];
        let cl = acl(&g, &set).unwrap();
        let mut union: BTreeSet<VertexId> = set.iter().copied().collect();
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                union.extend(acl_pair(&g, a, b).unwrap());
            }
        }
        assert_eq!(cl, union);
        let cl_vec: Vec<VertexId> = cl.iter().copied().collect();
        assert_eq!(acl(&g, &cl_vec).unwrap(), cl);
        assert!(acl(&g, &[]).unwrap().is_empty());
        assert_eq!(acl(&g, &[3]).unwrap(), BTreeSet::from([3]));
    }

    #[test]
    fn nice_checks() {
        let g = chamber_chain(2).unwrap();
        let all: Vec<_> = g.vertices().collect();
        assert!(nice_check(&g, &all).unwrap());
        // endpoints of a chain without the middle: ambient connectivity
        // not realized inside
        assert!(!nice_check(&g, &[0, 2]).unwrap());
        // two adjacent vertices of a longer band path
        let mut p = LevelGraph::new(1).unwrap();
        let vs: Vec<_> = (0..4).map(|i| p.add_vertex(i % 2).unwrap()).collect();
        for w in vs.windows(2) {
            p.add_edge(w[0], w[1]).unwrap();
        }
        assert!(nice_check(&p, &[vs[0], vs[1]]).unwrap());
        assert!(!nice_check(&p, &[vs[0], vs[2]]).unwrap());
        // hull fixes both
        let hull = nice_hull(&g, &[0, 2]).unwrap();
        let hull_vec: Vec<_> = hull.iter().copied().collect();
        assert!(nice_check(&g, &hull_vec).unwrap());
        let fix = nice_hull(&p, &[vs[0], vs[0]]).unwrap();
        assert_eq!(fix, BTreeSet::from([vs[0]]));
    }

    #[test]
    fn oracle_guard_and_trivial_cases() {
        let g = chamber_chain(2).unwrap();
        let all: Vec<_> = g.vertices().collect();
        assert_eq!(
            acl_oracle(&g, &all).unwrap(),
            all.iter().copied().collect()
        );
        let err = acl_oracle_guarded(&g, &[0], 2);
        assert!(matches!(err, Err(Error::OracleGuard(3, 2))));
    }

    #[test]
    fn projection_examples() {
        let g = chamber_chain(2).unwrap();
        // a in acl(A)
        let p = project(&g, 1, &[0, 1]).unwrap();
        assert_eq!(p.flag, vec![1]);
        // disconnected source
        let mut h = chamber_chain(1).unwrap();
        let iso = h.add_vertex(1).unwrap();
        assert!(project(&h, iso, &[0]).unwrap().flag.is_empty());
        // one edge from a unique closure vertex
        let p = project(&g, 2, &[1]).unwrap();
        assert_eq!(p.flag, vec![1]);
        // gateway excludes deeper entries in the same component
        let p = project(&g, 2, &[0, 1]).unwrap();
        assert_eq!(p.flag, vec![1]);
    }

    #[test]
    fn independence_examples() {
        let g = chamber_chain(2).unwrap();
        // C containing B
        assert!(independent(&g, 2, &[0], &[0, 1]).unwrap());
        // disconnected from acl(B) over empty C
        let mut h = chamber_chain(1).unwrap();
        let iso = h.add_vertex(1).unwrap();
        assert!(independent(&h, iso, &[0], &[]).unwrap());
        // adjacent to acl(B) \ acl(C), no other connection
        assert!(!independent(&g, 2, &[1], &[]).unwrap());
    }

    #[test]
    fn type_classification() {
        let (g, _) = generate(2, 16, 2, Variant::Saturated).unwrap();
        // isolated vertex: class I
        let mut h = g.clone();
        let iso = h.add_vertex(1).unwrap();
        assert_eq!(classify_type(&h, iso, &[0]).unwrap(), TypeClass::I);
        // algebraic: a member of the set
        assert_eq!(classify_type(&g, 0, &[0, 1]).unwrap(), TypeClass::Algebraic);
        // a parallel middle vertex between closure anchors: class IV
        let mut h = g.clone();
        let v = crate::amalgam::apply_extension(
            &mut h,
            &crate::amalgam::ExtensionStep {
                kind: crate::amalgam::StepKind::SplitFlag,
                level: 1,
                anchors: vec![0, 2],
            },
            Variant::Saturated,
        )
        .unwrap();
        assert_eq!(classify_type(&h, v, &[0, 2]).unwrap(), TypeClass::IV);
        // a fresh leaf on a closure vertex: class II
        let mut h = g.clone();
        let leaf = crate::amalgam::apply_extension(
            &mut h,
            &crate::amalgam::ExtensionStep {
                kind: crate::amalgam::StepKind::AttachLeaf,
                level: 1,
                anchors: vec![0],
            },
            Variant::Saturated,
        )
        .unwrap();
        assert_eq!(classify_type(&h, leaf, &[0]).unwrap(), TypeClass::II);
    }
}
