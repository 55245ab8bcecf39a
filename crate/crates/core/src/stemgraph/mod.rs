//! Stems as graph vertices and co-existence as edges.

mod enumerate;
mod pattern;

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::exec::Execution;
use crate::score::{ratio, Score};
use crate::Pair;

pub use enumerate::{enumerate_gapped_stems, enumerate_partial_stems, enumerate_stems, enumerate_stems_with};
pub use pattern::{GapPattern, MIN_PAIR_SPAN};

/// One candidate stem: the outermost pair `(i, j)`, the layout of its
/// pairs and the score used to filter it.
///
/// For plain and gapped stems `sl` is the stem-loop score `d / l`. Domain
/// composites built by the 5S profile store their generalized score there
/// instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stem {
    i: u32,
    j: u32,
    pattern: GapPattern,
    pairs: Vec<Pair>,
    sl: Score,
    label: Option<String>,
}

impl Stem {
    /// `len` consecutive pairs closing at `(i, j)`.
    pub fn contiguous(i: u32, j: u32, len: u32) -> Option<Stem> {
        Stem::from_pattern(i, j, GapPattern::contiguous(len))
    }

    pub fn from_pattern(i: u32, j: u32, pattern: GapPattern) -> Option<Stem> {
        let pairs = pattern.place(i, j)?;
        let sl = ratio(j - i, pairs.len() as u32);
        Some(Stem {
            i,
            j,
            pattern,
            pairs,
            sl,
            label: None,
        })
    }

    /// Rebuilds a stem from an explicit, nested pair list (outermost first).
    pub fn from_pairs(pairs: Vec<Pair>) -> Option<Stem> {
        let pattern = GapPattern::from_pairs(&pairs)?;
        let (i, j) = *pairs.first()?;
        Stem::from_pattern(i, j, pattern)
    }

    /// `outer` enclosing `inner`, merged into one vertex with span `d_outer`
    /// and length `l_outer + l_inner`. The caller supplies the score.
    pub fn merge_nested(outer: &Stem, inner: &Stem, score: Score) -> Option<Stem> {
        let &(po, qo) = outer.pairs.last()?;
        let &(pi, qi) = inner.pairs.first()?;
        if pi <= po || qi >= qo {
            return None;
        }
        let gap = (pi - po - 1, qo - qi - 1);
        let pattern = outer.pattern.join(gap, &inner.pattern);
        let mut s = Stem::from_pattern(outer.i, outer.j, pattern)?;
        s.sl = score;
        Some(s)
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// Number of base pairs.
    pub fn l(&self) -> u32 {
        self.pairs.len() as u32
    }

    /// Span `j - i`.
    pub fn d(&self) -> u32 {
        self.j - self.i
    }

    pub fn sl(&self) -> Score {
        self.sl
    }

    pub fn pattern(&self) -> &GapPattern {
        &self.pattern
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_score(mut self, score: Score) -> Self {
        self.sl = score;
        self
    }

    pub fn is_contiguous(&self) -> bool {
        self.pattern.is_contiguous()
    }

    /// The same stem without its innermost pair; the span is unchanged.
    pub fn trim_inner(&self) -> Option<Stem> {
        let mut s = Stem::from_pattern(self.i, self.j, self.pattern.trim_inner()?)?;
        s.label = self.label.clone();
        Some(s)
    }

    /// Ordering used for vertex numbering: `(i, j, l)` then pair list.
    pub fn canonical_cmp(&self, other: &Stem) -> Ordering {
        (self.i, self.j, self.l(), &self.pairs).cmp(&(other.i, other.j, other.l(), &other.pairs))
    }
}

impl fmt::Display for Stem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.i, self.j, self.l(), self.d())
    }
}

/// Stem-loop score `d / l`.
pub fn stem_loop_score(s: &Stem) -> Score {
    ratio(s.d(), s.l())
}

/// Sorts into canonical vertex order and drops stems whose pair set
/// duplicates an earlier one.
pub fn canonicalize(stems: &mut Vec<Stem>) {
    stems.sort_by(|a, b| a.canonical_cmp(b));
    stems.dedup_by(|b, a| a.pairs == b.pairs);
}

/// Whether two stems can be part of the same structure.
///
/// Plain stems use the interval tests directly: with `m` the stem starting
/// first, `n` lies wholly after `m`, wholly before it, inside its loop, or
/// crosses it as a pseudoknot with its 5' strand inside the loop and its
/// 3' strand beyond `j_m`. For gapped stems and composites the
/// corresponding test is that no base is used by both.
pub fn can_coexist(a: &Stem, b: &Stem) -> bool {
    if a.is_contiguous() && b.is_contiguous() {
        let (m, n) = if a.i <= b.i { (a, b) } else { (b, a) };
        let (im, jm, lm) = (m.i as i64, m.j as i64, m.l() as i64);
        let (in_, jn, ln) = (n.i as i64, n.j as i64, n.l() as i64);
        jm < in_
            || jn < im
            || (im + lm - 1 < in_ && jn < jm - lm + 1)
            || (im + lm - 1 < in_ && in_ + ln - 1 < jm - lm + 1 && jm < jn - ln + 1)
    } else {
        disjoint_bases(a, b)
    }
}

fn disjoint_bases(a: &Stem, b: &Stem) -> bool {
    let mut xs: Vec<u32> = a.pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
    xs.sort_unstable();
    b.pairs
        .iter()
        .all(|&(p, q)| xs.binary_search(&p).is_err() && xs.binary_search(&q).is_err())
}

/// Stems plus their symmetric co-existence relation.
#[derive(Debug, Clone)]
pub struct StemGraph {
    vertices: Vec<Stem>,
    adjacency: Vec<FixedBitSet>,
}

impl StemGraph {
    /// Builds a graph from explicit adjacency, ignoring self loops.
    /// Intended for tests and for graphs read back from a dump.
    pub fn from_edges(vertices: Vec<Stem>, edges: &[(usize, usize)]) -> StemGraph {
        let n = vertices.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in edges {
            if u != v && u < n && v < n {
                adjacency[u].insert(v);
                adjacency[v].insert(u);
            }
        }
        StemGraph { vertices, adjacency }
    }

    pub fn vertices(&self) -> &[Stem] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &FixedBitSet {
        &self.adjacency[u]
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }
}

/// Connects every co-existable pair of `vertices`, keeping their order.
pub fn build_stem_graph(vertices: Vec<Stem>) -> StemGraph {
    build_stem_graph_with(vertices, Execution::default())
}

pub fn build_stem_graph_with(vertices: Vec<Stem>, exec: Execution) -> StemGraph {
    let n = vertices.len();
    let adjacency = exec.map_range(n, |u| {
        let mut row = FixedBitSet::with_capacity(n);
        for v in 0..n {
            if u != v && can_coexist(&vertices[u], &vertices[v]) {
                row.insert(v);
            }
        }
        row
    });
    StemGraph { vertices, adjacency }
}
