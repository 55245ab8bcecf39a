//! Sequence in, ranked predictions out.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clique::{maximal_cliques, rank_predictions, CliqueBudget, FoldPrediction};
use crate::error::Result;
use crate::exec::Execution;
use crate::io::dotbracket::write_dot_bracket;
use crate::profiles::{build_profile_graph_with, ProfileConfig};
use crate::seq::Sequence;
use crate::stemgraph::StemGraph;

#[derive(Debug, Clone, Copy)]
pub struct PredictOptions {
    pub budget: CliqueBudget,
    pub exec: Execution,
    /// Record wall time in the report. Off gives byte-identical output
    /// across runs.
    pub timing: bool,
}

impl Default for PredictOptions {
    fn default() -> Self {
        PredictOptions {
            budget: CliqueBudget::unlimited(),
            exec: Execution::default(),
            timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

/// Every maximal clique of one sequence's graph, best first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub id: String,
    pub profile: String,
    pub length: u32,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub clique_count: usize,
    pub predictions: Vec<FoldPrediction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl PredictionReport {
    /// Predictions sharing the top energy.
    pub fn top_ties(&self) -> &[FoldPrediction] {
        let n = self.predictions.iter().take_while(|p| p.scr == 1).count();
        &self.predictions[..n]
    }

    pub fn without_timing(&self) -> Self {
        PredictionReport {
            timing: None,
            ..self.clone()
        }
    }
}

pub struct PredictOutcome {
    pub graph: StemGraph,
    pub report: PredictionReport,
}

pub fn predict(seq: &Sequence, cfg: &ProfileConfig, opts: &PredictOptions) -> Result<PredictOutcome> {
    let start = Instant::now();
    let graph = build_profile_graph_with(seq, cfg, opts.exec)?;
    let cliques = maximal_cliques(&graph, opts.budget)?;
    let mut predictions = rank_predictions(&graph, &cliques);
    let dots = opts
        .exec
        .map(&predictions, |p| write_dot_bracket(seq.len(), &p.pairs).ok());
    for (p, d) in predictions.iter_mut().zip(dots) {
        p.dot_bracket = d;
    }
    let report = PredictionReport {
        id: seq.id().to_string(),
        profile: cfg.name.clone(),
        length: seq.len(),
        vertex_count: graph.len(),
        edge_count: graph.edge_count(),
        clique_count: cliques.len(),
        predictions,
        timing: opts.timing.then(|| Timing {
            seconds: start.elapsed().as_secs_f64(),
        }),
    };
    Ok(PredictOutcome { graph, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::builtin;

    #[test]
    fn qux_end_to_end() {
        let seq = Sequence::parse("GGCAC AGAAG AUAUG GCUUC GUGCC", "2QUX").unwrap();
        let cfg = builtin("protein").unwrap();
        let out = predict(&seq, &cfg, &PredictOptions::default()).unwrap();
        let r = &out.report;
        assert_eq!(r.clique_count, 7);
        assert_eq!(r.edge_count, 6);
        let top = &r.predictions[0];
        assert_eq!(top.energy, 9);
        assert_eq!(top.dot_bracket.as_deref(), Some("(((((.((((......)))))))))"));
        assert_eq!(r.top_ties().len(), 1);
    }

    #[test]
    fn no_stems_no_predictions() {
        let seq = Sequence::parse("AAAAAAAAAA", "a").unwrap();
        let out = predict(&seq, &builtin("protein").unwrap(), &PredictOptions::default()).unwrap();
        assert!(out.report.predictions.is_empty());
        assert_eq!(out.report.clique_count, 0);
    }

    #[test]
    fn timing_is_isolated() {
        let seq = Sequence::parse("GGCAC AGAAG AUAUG GCUUC GUGCC", "2QUX").unwrap();
        let cfg = builtin("protein").unwrap();
        let opts = PredictOptions {
            timing: false,
            ..Default::default()
        };
        let a = predict(&seq, &cfg, &opts).unwrap().report;
        let b = predict(&seq, &cfg, &PredictOptions::default()).unwrap().report;
        assert!(a.timing.is_none());
        assert_eq!(a, b.without_timing());
    }
}
