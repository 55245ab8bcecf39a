//! Many sequences, each predicted and scored independently; rows come back
//! in input order regardless of execution mode.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{summarize_report, MetricKind, Metrics, ReferenceStructure};
use crate::exec::Execution;
use crate::io::{ct, fasta, Format};
use crate::pipeline::{predict, PredictOptions};
use crate::profiles::ProfileConfig;
use crate::score::{to_f64, Score};
use crate::seq::Sequence;

#[derive(Debug, Clone)]
pub struct BatchItem {
    pub sequence: Sequence,
    pub reference: Option<ReferenceStructure>,
}

/// Which inputs count: a minimum length and a minimum number of reference
/// pairs. Inputs without a reference fail the pair requirement when it is
/// above zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub min_len: u32,
    pub min_ref_pairs: usize,
}

impl Default for Validity {
    fn default() -> Self {
        Validity {
            min_len: 50,
            min_ref_pairs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BatchOptions {
    pub predict: PredictOptions,
    pub metric: MetricKind,
    pub validity: Validity,
    pub ignore_noncanonical: bool,
    /// Fan-out across sequences. Each sequence's own pipeline runs
    /// sequentially.
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Skipped { reason: String },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub id: String,
    pub length: u32,
    #[serde(flatten)]
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clique_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<Metrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best: Option<Metrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scr_of_best: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dr_of_best: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl BatchRow {
    fn bare(id: &str, length: u32, status: RowStatus) -> Self {
        BatchRow {
            id: id.to_string(),
            length,
            status,
            vertex_count: None,
            clique_count: None,
            top: None,
            best: None,
            scr_of_best: None,
            dr_of_best: None,
            multiplicity: None,
            seconds: None,
        }
    }
}

/// Counts per bucket, in the bucket order of the labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub top: f64,
    pub best: f64,
    pub best_sens: f64,
    pub best_ppv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub metric: MetricKind,
    pub rows: Vec<BatchRow>,
    pub scored: usize,
    pub skipped: usize,
    pub failed: usize,
    /// SCR of each scored row's best prediction.
    pub scr_histogram: Histogram,
    /// Best metric of each scored row.
    pub metric_histogram: Histogram,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averages: Option<Averages>,
}

const SCR_EDGES: [usize; 4] = [1, 5, 10, 15];
const METRIC_EDGES: [(i64, i64); 4] = [(95, 100), (90, 100), (85, 100), (80, 100)];

pub fn scr_bucket(scr: usize) -> usize {
    SCR_EDGES.iter().position(|&e| scr <= e).unwrap_or(SCR_EDGES.len())
}

pub fn metric_bucket(m: &Metrics, kind: MetricKind) -> usize {
    METRIC_EDGES
        .iter()
        .position(|&(n, d)| m.at_least(kind, Score::new(n, d)))
        .unwrap_or(METRIC_EDGES.len())
}

fn histograms(rows: &[BatchRow], kind: MetricKind) -> (Histogram, Histogram) {
    let mut scr = vec![0; SCR_EDGES.len() + 1];
    let mut met = vec![0; METRIC_EDGES.len() + 1];
    for r in rows {
        if let (Some(s), Some(b)) = (r.scr_of_best, &r.best) {
            scr[scr_bucket(s)] += 1;
            met[metric_bucket(b, kind)] += 1;
        }
    }
    let scr_labels = ["<=1", "<=5", "<=10", "<=15", ">15"];
    let met_labels = [">=0.95", ">=0.90", ">=0.85", ">=0.80", "<0.80"];
    (
        Histogram {
            labels: scr_labels.map(String::from).to_vec(),
            counts: scr,
        },
        Histogram {
            labels: met_labels.map(String::from).to_vec(),
            counts: met,
        },
    )
}

fn run_one(item: &BatchItem, cfg: &ProfileConfig, opts: &BatchOptions) -> BatchRow {
    let seq = &item.sequence;
    let v = opts.validity;
    let ref_pairs = item.reference.as_ref().map_or(0, |r| r.pairs.len());
    if seq.len() < v.min_len {
        return BatchRow::bare(
            seq.id(),
            seq.len(),
            RowStatus::Skipped {
                reason: format!("length below {}", v.min_len),
            },
        );
    }
    if ref_pairs < v.min_ref_pairs {
        let reason = format!("fewer than {} reference pairs", v.min_ref_pairs);
        return BatchRow::bare(seq.id(), seq.len(), RowStatus::Skipped { reason });
    }
    let fail = |e: Error| BatchRow::bare(seq.id(), seq.len(), RowStatus::Failed { error: e.to_string() });
    let start = Instant::now();
    let inner = PredictOptions {
        exec: Execution::Sequential,
        ..opts.predict
    };
    let outcome = match predict(seq, cfg, &inner) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let report = outcome.report;
    let mut row = BatchRow::bare(seq.id(), seq.len(), RowStatus::Ok);
    row.vertex_count = Some(report.vertex_count);
    row.clique_count = Some(report.clique_count);
    if let Some(reference) = &item.reference {
        if reference.length != seq.len() {
            return fail(Error::LengthMismatch {
                sequence: seq.len(),
                reference: reference.length,
            });
        }
        let reference = if opts.ignore_noncanonical {
            match reference.canonical_only(seq, cfg.pairing) {
                Ok(r) => r,
                Err(e) => return fail(e),
            }
        } else {
            reference.clone()
        };
        match summarize_report(&report.predictions, &reference, opts.metric) {
            Ok(Some(s)) => {
                row.top = Some(s.top);
                row.best = Some(s.best);
                row.scr_of_best = Some(s.scr_of_best);
                row.dr_of_best = Some(s.dr_of_best);
                row.multiplicity = Some(s.multiplicity);
            }
            Ok(None) => {}
            Err(e) => return fail(e),
        }
    }
    if opts.predict.timing {
        row.seconds = Some(start.elapsed().as_secs_f64());
    }
    row
}

pub fn run_batch(
    items: &[Result<BatchItem, (String, Error)>],
    cfg: &ProfileConfig,
    opts: &BatchOptions,
) -> Result<BatchResult> {
    cfg.validate()?;
    let rows = opts.exec.map(items, |it| match it {
        Ok(item) => run_one(item, cfg, opts),
        Err((id, e)) => BatchRow::bare(id, 0, RowStatus::Failed { error: e.to_string() }),
    });
    let count = |f: fn(&RowStatus) -> bool| rows.iter().filter(|r| f(&r.status)).count();
    let (scr_histogram, metric_histogram) = histograms(&rows, opts.metric);
    let scored: Vec<&BatchRow> = rows.iter().filter(|r| r.best.is_some()).collect();
    let averages = (!scored.is_empty()).then(|| {
        let n = scored.len() as f64;
        let mean = |f: &dyn Fn(&BatchRow) -> f64| scored.iter().map(|r| f(r)).sum::<f64>() / n;
        Averages {
            top: mean(&|r| r.top.as_ref().expect("scored").value(opts.metric)),
            best: mean(&|r| r.best.as_ref().expect("scored").value(opts.metric)),
            best_sens: mean(&|r| to_f64(&r.best.as_ref().expect("scored").sens)),
            best_ppv: mean(&|r| to_f64(&r.best.as_ref().expect("scored").ppv)),
        }
    });
    Ok(BatchResult {
        metric: opts.metric,
        scored: scored.len(),
        skipped: count(|s| matches!(s, RowStatus::Skipped { .. })),
        failed: count(|s| matches!(s, RowStatus::Failed { .. })),
        rows,
        scr_histogram,
        metric_histogram,
        averages,
    })
}

/// Gathers inputs from a directory: files sharing a stem are grouped, the
/// sequence comes from a FASTA file when present and otherwise from the CT
/// file, the reference from the CT file. Entries are in file-stem order.
pub fn load_dir(dir: &Path) -> Result<Vec<Result<BatchItem, (String, Error)>>> {
    let mut groups: BTreeMap<String, (Option<PathBuf>, Option<PathBuf>)> = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else {
            continue;
        };
        match Format::from_path(&path) {
            Some(Format::Fasta) => groups.entry(stem).or_default().0 = Some(path),
            Some(Format::Ct) => groups.entry(stem).or_default().1 = Some(path),
            _ => {}
        }
    }
    Ok(groups
        .into_iter()
        .map(|(stem, (fa, ctp))| load_item(&stem, fa.as_deref(), ctp.as_deref()).map_err(|e| (stem, e)))
        .collect())
}

fn load_item(stem: &str, fa: Option<&Path>, ctp: Option<&Path>) -> Result<BatchItem> {
    let record = ctp.map(ct::read_ct).transpose()?;
    let sequence = match fa {
        Some(p) => fasta::read_fasta(p)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::parse(1, format!("{} has no records", p.display())))?,
        None => record
            .as_ref()
            .expect("grouped files include one of the two")
            .sequence()?,
    };
    let sequence = Sequence::from_bases(stem, sequence.residues().to_vec())?;
    let reference = record.map(|r| ReferenceStructure {
        id: stem.to_string(),
        ..r.reference
    });
    Ok(BatchItem { sequence, reference })
}

/// Plain-text table: one line per row, then both histograms.
pub fn render_table(res: &BatchResult) -> String {
    let name = match res.metric {
        MetricKind::Mcc => "mcc",
        MetricKind::F1 => "f1",
    };
    let mut out = format!(
        "{:<16} {:>6} {:>8} {:>8} {:>8} {:>6} {:>4} {:>5} {:>4} {:>4} {:>9}\n",
        "id",
        "length",
        "status",
        format!("top_{name}"),
        format!("best_{name}"),
        "scr/dr",
        "m",
        "tp",
        "fn",
        "fp",
        "seconds"
    );
    for r in &res.rows {
        let status = match &r.status {
            RowStatus::Ok => "ok",
            RowStatus::Skipped { .. } => "skipped",
            RowStatus::Failed { .. } => "failed",
        };
        let f = |m: &Option<Metrics>| {
            m.as_ref()
                .map_or("-".to_string(), |m| format!("{:.3}", m.value(res.metric)))
        };
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let b = r.best.as_ref();
        out.push_str(&format!(
            "{:<16} {:>6} {:>8} {:>8} {:>8} {:>6} {:>4} {:>5} {:>4} {:>4} {:>9}\n",
            r.id,
            r.length,
            status,
            f(&r.top),
            f(&r.best),
            match (r.scr_of_best, r.dr_of_best) {
                (Some(s), Some(d)) => format!("{s}/{d}"),
                _ => "-".into(),
            },
            opt(r.multiplicity),
            opt(b.map(|m| m.tp as usize)),
            opt(b.map(|m| m.fn_ as usize)),
            opt(b.map(|m| m.fp as usize)),
            r.seconds.map_or("-".to_string(), |s| format!("{s:.3}")),
        ));
    }
    let pct = |c: usize| {
        if res.scored == 0 {
            0.0
        } else {
            100.0 * c as f64 / res.scored as f64
        }
    };
    for (title, h) in [("SCR of best", &res.scr_histogram), (name, &res.metric_histogram)] {
        out.push_str(&format!("\n{title}:"));
        for (l, &c) in h.labels.iter().zip(&h.counts) {
            out.push_str(&format!("  {l} {c} ({:.1}%)", pct(c)));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "\nscored {} skipped {} failed {}\n",
        res.scored, res.skipped, res.failed
    ));
    if let Some(a) = &res.averages {
        out.push_str(&format!(
            "mean top {:.3} best {:.3} best-sens {:.3} best-ppv {:.3}\n",
            a.top, a.best, a.best_sens, a.best_ppv
        ));
    }
    out
}
