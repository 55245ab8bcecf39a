//! Maximal cliques of a stem graph and their ranking as candidate
//! structures.

use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stemgraph::StemGraph;
use crate::Pair;

/// Optional limits on clique enumeration. Both default to unlimited.
#[derive(Debug, Clone, Copy, Default)]
pub struct CliqueBudget {
    pub max_cliques: Option<usize>,
    pub time_limit: Option<Duration>,
}

impl CliqueBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }
}

struct Search<'a> {
    g: &'a StemGraph,
    budget: CliqueBudget,
    start: Instant,
    out: Vec<Vec<usize>>,
    stack: Vec<usize>,
}

impl Search<'_> {
    fn check_budget(&self) -> Result<()> {
        if let Some(max) = self.budget.max_cliques {
            if self.out.len() > max {
                return Err(Error::BudgetExceeded { found: self.out.len() });
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.start.elapsed() > limit {
                return Err(Error::BudgetExceeded { found: self.out.len() });
            }
        }
        Ok(())
    }

    // Tomita pivoting: expand only the candidates not adjacent to the pivot,
    // where the pivot maximises |P ∩ N(u)| over P ∪ X (lowest index on ties).
    fn expand(&mut self, p: FixedBitSet, mut x: FixedBitSet) -> Result<()> {
        if p.is_clear() {
            if x.is_clear() {
                let mut c = self.stack.clone();
                c.sort_unstable();
                self.out.push(c);
                self.check_budget()?;
            }
            return Ok(());
        }
        let mut pivot = usize::MAX;
        let mut best = 0usize;
        for u in p.ones().chain(x.ones()) {
            let k = p.intersection(self.g.neighbors(u)).count();
            if pivot == usize::MAX || k > best || (k == best && u < pivot) {
                pivot = u;
                best = k;
            }
        }
        let mut p = p;
        let candidates: Vec<usize> = p.difference(self.g.neighbors(pivot)).collect();
        for v in candidates {
            let nv = self.g.neighbors(v);
            let mut p2 = p.clone();
            p2.intersect_with(nv);
            let mut x2 = x.clone();
            x2.intersect_with(nv);
            self.stack.push(v);
            self.expand(p2, x2)?;
            self.stack.pop();
            p.set(v, false);
            x.insert(v);
        }
        Ok(())
    }
}

/// All maximal cliques of `g`, each as an ascending vertex list, sorted
/// lexicographically. Isolated vertices come out as singletons.
pub fn maximal_cliques(g: &StemGraph, budget: CliqueBudget) -> Result<Vec<Vec<usize>>> {
    let n = g.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut s = Search {
        g,
        budget,
        start: Instant::now(),
        out: Vec::new(),
        stack: Vec::new(),
    };
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    s.expand(p, FixedBitSet::with_capacity(n))?;
    let mut out = s.out;
    out.sort();
    Ok(out)
}

/// One maximal clique read as a folding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPrediction {
    /// 0-based vertex indices, ascending.
    pub vertices: Vec<usize>,
    /// Total matched base pairs.
    pub energy: usize,
    pub pairs: Vec<Pair>,
    /// Standard competition rank ("1224").
    #[serde(rename = "rank_scr")]
    pub scr: usize,
    /// Dense rank ("1223").
    #[serde(rename = "rank_dr")]
    pub dr: usize,
    /// Number of predictions sharing this energy.
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot_bracket: Option<String>,
}

/// Ranks for an energy list already sorted in descending order:
/// `(scr, dr, multiplicity)` per entry.
pub fn assign_ranks(sorted_energies: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(sorted_energies.len());
    let mut k = 0;
    let mut dense = 0;
    while k < sorted_energies.len() {
        let e = sorted_energies[k];
        let end = k + sorted_energies[k..].iter().take_while(|&&x| x == e).count();
        dense += 1;
        for _ in k..end {
            out.push((k + 1, dense, end - k));
        }
        k = end;
    }
    out
}

/// Union of the member stems' pairs, sorted by 5' index.
pub fn prediction_pairs(vertices: &[usize], g: &StemGraph) -> Vec<Pair> {
    let mut pairs: Vec<Pair> = vertices
        .iter()
        .flat_map(|&v| g.vertices()[v].pairs().iter().copied())
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Scores each clique by its pair count and orders by energy descending,
/// then by vertex list.
pub fn rank_predictions(g: &StemGraph, cliques: &[Vec<usize>]) -> Vec<FoldPrediction> {
    let mut scored: Vec<(usize, &Vec<usize>)> = cliques
        .iter()
        .map(|c| (c.iter().map(|&v| g.vertices()[v].l() as usize).sum(), c))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let energies: Vec<usize> = scored.iter().map(|s| s.0).collect();
    scored
        .into_iter()
        .zip(assign_ranks(&energies))
        .map(|((energy, c), (scr, dr, m))| FoldPrediction {
            vertices: c.clone(),
            energy,
            pairs: prediction_pairs(c, g),
            scr,
            dr,
            multiplicity: m,
            dot_bracket: None,
        })
        .collect()
}
