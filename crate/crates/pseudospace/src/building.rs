//! The chamber system of a level graph.
//!
//! Chambers are maximal flags with one vertex per level; two chambers are
//! `s`-adjacent when they differ exactly in the level-`s` vertex. Galleries
//! are chamber walks, their type words live in the right-angled Coxeter
//! group, and the Weyl distance of two chambers is the normal form of any
//! reduced gallery type between them. On a graph satisfying the prime-model
//! conditions this is well defined because no closed gallery has a reduced
//! type; the verifier hunts for counterexamples instead of assuming it.

use crate::coxeter::CoxWord;
use crate::graph::{Level, LevelGraph, VertexId};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type Chamber = Vec<VertexId>;

/// A gallery: the chamber trace and the word of levels changed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gallery {
    pub chambers: Vec<Chamber>,
    pub type_word: CoxWord,
}

/// Verification outcome for the building axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingReport {
    pub verdict: bool,
    pub violations: Vec<String>,
    /// Finite approximations are allowed panels of size one; the paper's
    /// residues are infinite.
    pub warnings: Vec<String>,
}

/// All chambers in canonical (lexicographic) order.
pub fn chambers(g: &LevelGraph) -> Vec<Chamber> {
    let mut out = Vec::new();
    let mut stack: Vec<Chamber> = g
        .vertices_at(0)
        .into_iter()
        .rev()
        .map(|v| vec![v])
        .collect();
    while let Some(partial) = stack.pop() {
        if partial.len() == g.dimension() + 1 {
            out.push(partial);
            continue;
        }
        let last = *partial.last().unwrap();
        let next_level = partial.len();
        for &u in g.neighbors(last).iter().rev() {
            if g.level(u) == next_level {
                let mut ext = partial.clone();
                ext.push(u);
                stack.push(ext);
            }
        }
    }
    out
}

/// The level at which two chambers differ, when they differ in exactly one.
pub fn panel_adjacent(c1: &Chamber, c2: &Chamber) -> Option<Level> {
    if c1.len() != c2.len() {
        return None;
    }
    let mut diff = None;
    for (level, (a, b)) in c1.iter().zip(c2.iter()).enumerate() {
        if a != b {
            if diff.is_some() {
                return None;
            }
            diff = Some(level);
        }
    }
    diff
}

/// Precomputed chamber adjacency for gallery walks.
pub struct ChamberComplex {
    pub chambers: Vec<Chamber>,
    index: BTreeMap<Chamber, usize>,
    /// panels[level] maps the chamber with that level's vertex removed to
    /// the chambers sharing the panel.
    panels: Vec<BTreeMap<Vec<VertexId>, Vec<usize>>>,
    dim: usize,
}

impl ChamberComplex {
    pub fn new(g: &LevelGraph) -> Self {
        let chambers = chambers(g);
        let mut index = BTreeMap::new();
        for (i, c) in chambers.iter().enumerate() {
            index.insert(c.clone(), i);
        }
        let dim = g.dimension();
        let mut panels = vec![BTreeMap::<Vec<VertexId>, Vec<usize>>::new(); dim + 1];
        for (i, c) in chambers.iter().enumerate() {
            for level in 0..=dim {
                let mut key = c.clone();
                key.remove(level);
                panels[level].entry(key).or_default().push(i);
            }
        }
        ChamberComplex {
            chambers,
            index,
            panels,
            dim,
        }
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn chamber_index(&self, c: &Chamber) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Chambers adjacent to `i` across the level-`s` panel.
    pub fn panel_mates(&self, i: usize, s: Level) -> Vec<usize> {
        let mut key = self.chambers[i].clone();
        key.remove(s);
        self.panels[s][&key]
            .iter()
            .copied()
            .filter(|&j| j != i)
            .collect()
    }

    /// All chambers containing the vertex.
    pub fn chambers_containing(&self, v: VertexId) -> Vec<usize> {
        self.chambers
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Weyl distance by BFS over the chamber graph, normalized.
    pub fn weyl_distance(&self, from: usize, to: usize) -> Option<CoxWord> {
        if from == to {
            return Some(CoxWord::identity(self.dim));
        }
        let mut prev: Vec<Option<(usize, Level)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if i == to {
                let mut letters = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, s) = prev[cur].expect("bfs parent");
                    letters.push(s);
                    cur = p;
                }
                letters.reverse();
                let word = CoxWord::new(self.dim, letters).expect("levels in range");
                return Some(word.normal_form());
            }
            for s in 0..=self.dim {
                for j in self.panel_mates(i, s) {
                    if !seen[j] {
                        seen[j] = true;
                        prev[j] = Some((i, s));
                        queue.push_back(j);
                    }
                }
            }
        }
        None
    }

    /// All normal forms of reduced-type galleries between two chambers, up
    /// to the length bound. A singleton set certifies well-definedness at
    /// this scale.
    pub fn reduced_gallery_words(&self, from: usize, to: usize, max_len: usize) -> BTreeSet<CoxWord> {
        let mut out = BTreeSet::new();
        let mut word = CoxWord::identity(self.dim);
        self.gallery_dfs(from, to, max_len, &mut word, &mut out);
        out
    }

    fn gallery_dfs(
        &self,
        cur: usize,
        to: usize,
        budget: usize,
        word: &mut CoxWord,
        out: &mut BTreeSet<CoxWord>,
    ) {
        if cur == to {
            out.insert(word.normal_form());
        }
        if budget == 0 {
            return;
        }
        for s in 0..=self.dim {
            let mut longer = word.clone();
            longer.push(s).expect("level in range");
            // prefixes of reduced words are reduced, so pruning is complete
            if !longer.is_reduced() {
                continue;
            }
            for j in self.panel_mates(cur, s) {
                let mut w = longer.clone();
                std::mem::swap(word, &mut w);
                self.gallery_dfs(j, to, budget - 1, word, out);
                std::mem::swap(word, &mut w);
            }
        }
    }

    /// Does a gallery of exactly this type exist from `from` to `to`?
    pub fn gallery_of_type_exists(&self, from: usize, to: usize, letters: &[Level]) -> bool {
        let mut frontier = BTreeSet::from([from]);
        for &s in letters {
            let mut next = BTreeSet::new();
            for &i in &frontier {
                next.extend(self.panel_mates(i, s));
            }
            frontier = next;
            if frontier.is_empty() {
                return false;
            }
        }
        frontier.contains(&to)
    }
}

/// Weyl distance between chambers given as vertex tuples.
pub fn weyl_distance(g: &LevelGraph, c1: &Chamber, c2: &Chamber) -> Result<Option<CoxWord>> {
    let cx = ChamberComplex::new(g);
    let i = cx
        .chamber_index(c1)
        .ok_or_else(|| Error::InvalidPath(format!("{c1:?} is not a chamber")))?;
    let j = cx
        .chamber_index(c2)
        .ok_or_else(|| Error::InvalidPath(format!("{c2:?} is not a chamber")))?;
    Ok(cx.weyl_distance(i, j))
}

/// Weyl distance between vertices: the minimal double-coset representative
/// of the chamber distance, parabolic generators excluding each vertex's
/// level. `None` means the chambers are disconnected.
pub fn vertex_weyl_distance(g: &LevelGraph, x: VertexId, y: VertexId) -> Result<Option<CoxWord>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    let cx = ChamberComplex::new(g);
    let cs_x = cx.chambers_containing(x);
    let cs_y = cx.chambers_containing(y);
    let &i = cs_x.first().ok_or(Error::NoChamber(x))?;
    let &j = cs_y.first().ok_or(Error::NoChamber(y))?;
    match cx.weyl_distance(i, j) {
        None => Ok(None),
        Some(w) => Ok(Some(w.min_double_coset_rep(g.level(x), g.level(y))?)),
    }
}

/// Searches for a closed gallery with reduced type word, which a building
/// must not have. Returns the first found up to `max_len`.
pub fn find_reduced_closed_gallery(g: &LevelGraph, max_len: usize) -> Option<Gallery> {
    let cx = ChamberComplex::new(g);
    for start in 0..cx.len() {
        let mut trace = vec![start];
        let mut word = CoxWord::identity(g.dimension());
        if let Some(gallery) = closed_dfs(&cx, start, max_len, &mut trace, &mut word) {
            return Some(gallery);
        }
    }
    None
}

fn closed_dfs(
    cx: &ChamberComplex,
    start: usize,
    budget: usize,
    trace: &mut Vec<usize>,
    word: &mut CoxWord,
) -> Option<Gallery> {
    let cur = *trace.last().unwrap();
    if cur == start && trace.len() > 1 {
        return Some(Gallery {
            chambers: trace.iter().map(|&i| cx.chambers[i].clone()).collect(),
            type_word: word.clone(),
        });
    }
    if trace.len() > budget {
        return None;
    }
    for s in 0..word.dim() + 1 {
        let mut longer = word.clone();
        longer.push(s).expect("level in range");
        if !longer.is_reduced() {
            continue;
        }
        for j in cx.panel_mates(cur, s) {
            trace.push(j);
            let saved = word.clone();
            *word = longer.clone();
            if let Some(found) = closed_dfs(cx, start, budget, trace, word) {
                return Some(found);
            }
            *word = saved;
            trace.pop();
        }
    }
    None
}

/// Checks the two building axioms at desk scale.
///
/// Axiom 1: panel relations are equivalences (true by construction) and
/// every class should have at least two chambers; undersized classes are
/// warnings. Axiom 2: over sampled chamber pairs and all reduced words up
/// to `word_bound`, a gallery of a reduced type exists iff the Weyl
/// distance equals that word.
pub fn verify_building(g: &LevelGraph, word_bound: usize) -> BuildingReport {
    let cx = ChamberComplex::new(g);
    let mut report = BuildingReport {
        verdict: true,
        violations: Vec::new(),
        warnings: Vec::new(),
    };
    if cx.is_empty() {
        report.warnings.push("graph has no chambers".into());
        return report;
    }
    for s in 0..=g.dimension() {
        for (key, members) in &cx.panels[s] {
            if members.len() < 2 {
                report.warnings.push(format!(
                    "panel {key:?} at level {s} has a single chamber"
                ));
            }
        }
    }
    // sample pairs deterministically: stride over the pair space
    let n = cx.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let stride = (n * n / 50).max(1);
    let mut k = 0;
    while pairs.len() < 50 && k < n * n {
        pairs.push((k / n, k % n));
        k += stride;
    }
    let words = all_reduced_words(g.dimension(), word_bound);
    for &(i, j) in &pairs {
        let delta = cx.weyl_distance(i, j);
        for w in &words {
            let exists = cx.gallery_of_type_exists(i, j, w.letters());
            let matches = match &delta {
                Some(d) => w.normal_form().letters() == d.letters(),
                None => false,
            };
            if exists != matches {
                report.verdict = false;
                report.violations.push(format!(
                    "axiom 2 fails for chambers {i},{j} and word {:?}: gallery {}, distance {}",
                    w.letters(),
                    exists,
                    matches
                ));
            }
        }
    }
    report
}

/// All reduced words up to the length bound, one per letter sequence.
fn all_reduced_words(dim: usize, max_len: usize) -> Vec<CoxWord> {
    let mut out = vec![CoxWord::identity(dim)];
    let mut frontier = vec![CoxWord::identity(dim)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..=dim {
                let mut longer = w.clone();
                longer.push(s).expect("in range");
                if longer.is_reduced() {
                    next.push(longer.clone());
                    out.push(longer);
                }
            }
        }
        frontier = next;
    }
    out
}

/// A model is a building iff every band is connected and every vertex lies
/// in a chamber.
pub fn is_building_model(g: &LevelGraph) -> bool {
    let bands_ok = (1..=g.dimension()).all(|i| g.band_connected(i));
    if !bands_ok {
        return false;
    }
    let cx = ChamberComplex::new(g);
    let mut covered = vec![false; g.vertex_count()];
    for c in &cx.chambers {
        for &v in c {
            covered[v] = true;
        }
    }
    covered.iter().all(|&b| b)
}
