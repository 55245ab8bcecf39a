//! Agreement between a predicted pair set and a reference structure.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clique::FoldPrediction;
use crate::error::{Error, Result};
use crate::score::{format_score, to_f64, Score};
use crate::seq::{PairingRule, Sequence};
use crate::Pair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Ct,
    Dotbracket,
    Pairs,
}

/// A known structure: sorted pairs `p < q`, each index used at most once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceStructure {
    pub id: String,
    pub length: u32,
    pub pairs: Vec<Pair>,
    pub source: SourceFormat,
}

/// Checks that `pairs` is a structure on `1..=len` and returns it sorted.
pub fn validate_pairs(pairs: &[Pair], len: u32) -> Result<Vec<Pair>> {
    let mut seen = BTreeSet::new();
    for &(p, q) in pairs {
        if p == 0 || q == 0 || p > len || q > len || p >= q {
            return Err(Error::IndexOutOfRange { p, q, len });
        }
        for x in [p, q] {
            if !seen.insert(x) {
                return Err(Error::DuplicateIndex(x));
            }
        }
    }
    let mut out = pairs.to_vec();
    out.sort_unstable();
    Ok(out)
}

impl ReferenceStructure {
    pub fn new(id: impl Into<String>, length: u32, pairs: &[Pair], source: SourceFormat) -> Result<Self> {
        Ok(ReferenceStructure {
            id: id.into(),
            length,
            pairs: validate_pairs(pairs, length)?,
            source,
        })
    }

    /// Drops the pairs `rule` would not form on `seq`.
    pub fn canonical_only(&self, seq: &Sequence, rule: PairingRule) -> Result<Self> {
        if seq.len() != self.length {
            return Err(Error::LengthMismatch {
                sequence: seq.len(),
                reference: self.length,
            });
        }
        let mut out = self.clone();
        out.pairs.retain(|&(p, q)| seq.pairs(p, q, rule));
        Ok(out)
    }
}

/// Pair counts and the derived scores, all exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: u32,
    pub fp: u32,
    #[serde(rename = "fn")]
    pub fn_: u32,
    #[serde(with = "score_str")]
    pub sens: Score,
    #[serde(with = "score_str")]
    pub ppv: Score,
    /// `mcc²`; the square root is only taken by [`Metrics::mcc`].
    #[serde(with = "score_str")]
    pub mcc_sq: Score,
    #[serde(with = "score_str")]
    pub f1: Score,
}

mod score_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::score::{format_score, parse_decimal, Score};

    pub fn serialize<S: Serializer>(s: &Score, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_score(s))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Score, D::Error> {
        let s = String::deserialize(de)?;
        parse_decimal(&s).map_err(serde::de::Error::custom)
    }
}

impl Metrics {
    pub fn from_counts(tp: u32, fp: u32, fn_: u32) -> Metrics {
        let frac = |n: u32, d: u32| {
            if d == 0 {
                Score::zero()
            } else {
                Score::new(n as i64, d as i64)
            }
        };
        if tp + fp + fn_ == 0 {
            let one = Score::one();
            return Metrics {
                tp,
                fp,
                fn_,
                sens: one,
                ppv: one,
                mcc_sq: one,
                f1: one,
            };
        }
        let sens = frac(tp, tp + fn_);
        let ppv = frac(tp, tp + fp);
        Metrics {
            tp,
            fp,
            fn_,
            sens,
            ppv,
            mcc_sq: sens * ppv,
            f1: frac(2 * tp, 2 * tp + fp + fn_),
        }
    }

    pub fn mcc(&self) -> f64 {
        to_f64(&self.mcc_sq).sqrt()
    }

    pub fn value(&self, kind: MetricKind) -> f64 {
        match kind {
            MetricKind::Mcc => self.mcc(),
            MetricKind::F1 => to_f64(&self.f1),
        }
    }

    /// Exact ordering key for `kind`: `mcc²` is monotone in `mcc`.
    pub fn key(&self, kind: MetricKind) -> Score {
        match kind {
            MetricKind::Mcc => self.mcc_sq,
            MetricKind::F1 => self.f1,
        }
    }

    /// `value(kind) >= threshold`, decided without rounding.
    pub fn at_least(&self, kind: MetricKind, threshold: Score) -> bool {
        match kind {
            MetricKind::Mcc => self.mcc_sq >= threshold * threshold,
            MetricKind::F1 => self.f1 >= threshold,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "tp={} fp={} fn={} sens={} ppv={} mcc={:.4} f1={}",
            self.tp,
            self.fp,
            self.fn_,
            format_score(&self.sens),
            format_score(&self.ppv),
            self.mcc(),
            format_score(&self.f1)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    #[default]
    Mcc,
    F1,
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mcc" => Ok(MetricKind::Mcc),
            "f1" => Ok(MetricKind::F1),
            _ => Err(Error::parse(0, format!("unknown metric {s:?}"))),
        }
    }
}

/// Exact-index comparison of `predicted` with `reference`.
pub fn score_prediction(predicted: &[Pair], reference: &ReferenceStructure) -> Result<Metrics> {
    let len = reference.length;
    if let Some(&(p, q)) = predicted.iter().find(|&&(p, q)| p == 0 || q == 0 || p > len || q > len) {
        return Err(Error::IndexOutOfRange { p, q, len });
    }
    let pred: BTreeSet<Pair> = predicted.iter().map(|&(p, q)| (p.min(q), p.max(q))).collect();
    let truth: BTreeSet<Pair> = reference.pairs.iter().copied().collect();
    let tp = pred.intersection(&truth).count() as u32;
    Ok(Metrics::from_counts(
        tp,
        pred.len() as u32 - tp,
        truth.len() as u32 - tp,
    ))
}

/// Top and best of a ranked prediction list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub metric: MetricKind,
    pub top: Metrics,
    /// Index into the prediction list of the top-ranked prediction used.
    pub top_index: usize,
    pub best: Metrics,
    pub best_index: usize,
    pub scr_of_best: usize,
    pub dr_of_best: usize,
    pub multiplicity: usize,
}

/// `top`: highest metric among rank-1 predictions. `best`: highest metric
/// overall. Ties keep the earlier prediction. `None` for an empty list.
pub fn summarize_report(
    predictions: &[FoldPrediction],
    reference: &ReferenceStructure,
    metric: MetricKind,
) -> Result<Option<Summary>> {
    let scored: Vec<Metrics> = predictions
        .iter()
        .map(|p| score_prediction(&p.pairs, reference))
        .collect::<Result<_>>()?;
    let argmax = |filter: &dyn Fn(usize) -> bool| {
        let mut best: Option<usize> = None;
        for k in (0..scored.len()).filter(|&k| filter(k)) {
            if best.is_none_or(|b| scored[k].key(metric) > scored[b].key(metric)) {
                best = Some(k);
            }
        }
        best
    };
    let (Some(top), Some(best)) = (argmax(&|k| predictions[k].scr == 1), argmax(&|_| true)) else {
        return Ok(None);
    };
    Ok(Some(Summary {
        metric,
        top: scored[top].clone(),
        top_index: top,
        best: scored[best].clone(),
        best_index: best,
        scr_of_best: predictions[best].scr,
        dr_of_best: predictions[best].dr,
        multiplicity: predictions[best].multiplicity,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(pairs: &[Pair]) -> ReferenceStructure {
        ReferenceStructure::new("r", 100, pairs, SourceFormat::Pairs).unwrap()
    }

    #[test]
    fn identity_scores_one() {
        let r = reference(&[(1, 20), (2, 19), (5, 10)]);
        let m = score_prediction(&r.pairs, &r).unwrap();
        assert_eq!((m.tp, m.fp, m.fn_), (3, 0, 0));
        assert!(m.sens.is_one() && m.ppv.is_one() && m.mcc_sq.is_one() && m.f1.is_one());
    }

    #[test]
    fn thirty_five_of_thirty_seven() {
        let m = Metrics::from_counts(35, 0, 2);
        assert_eq!(m.sens, Score::new(35, 37));
        assert!(m.ppv.is_one());
        assert!((m.mcc() - 0.9726).abs() < 1e-4);
        assert!((to_f64(&m.f1) * 100.0 - 97.2).abs() < 0.1);
    }

    #[test]
    fn empty_conventions() {
        let empty = reference(&[]);
        let both = score_prediction(&[], &empty).unwrap();
        assert!(both.mcc_sq.is_one() && both.f1.is_one());
        let extra = score_prediction(&[(1, 9)], &empty).unwrap();
        assert!(extra.sens.is_zero() && extra.ppv.is_zero() && extra.f1.is_zero());
        let none = score_prediction(&[], &reference(&[(1, 9)])).unwrap();
        assert!(none.sens.is_zero() && none.ppv.is_zero() && none.f1.is_zero());
    }

    #[test]
    fn out_of_range_is_error() {
        let r = reference(&[(1, 9)]);
        assert!(matches!(
            score_prediction(&[(3, 101)], &r),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn reference_validation() {
        assert!(matches!(
            ReferenceStructure::new("x", 10, &[(1, 5), (5, 9)], SourceFormat::Pairs),
            Err(Error::DuplicateIndex(5))
        ));
        assert!(ReferenceStructure::new("x", 10, &[(5, 5)], SourceFormat::Pairs).is_err());
    }

    #[test]
    fn noncanonical_pairs_dropped() {
        let seq = Sequence::parse("GAAAAC", "s").unwrap();
        let r = ReferenceStructure::new("s", 6, &[(1, 6), (2, 5)], SourceFormat::Pairs).unwrap();
        assert_eq!(
            r.canonical_only(&seq, PairingRule::CANONICAL).unwrap().pairs,
            vec![(1, 6)]
        );
    }

    fn fold(pairs: Vec<Pair>, scr: usize, dr: usize, m: usize) -> FoldPrediction {
        FoldPrediction {
            vertices: vec![],
            energy: pairs.len(),
            pairs,
            scr,
            dr,
            multiplicity: m,
            dot_bracket: None,
        }
    }

    #[test]
    fn top_and_best() {
        let r = reference(&[(1, 20), (2, 19), (30, 40)]);
        let preds = vec![
            fold(vec![(1, 20), (2, 19), (50, 60)], 1, 1, 2),
            fold(vec![(3, 18), (4, 17), (50, 60)], 1, 1, 2),
            fold(vec![(1, 20), (30, 40)], 3, 2, 1),
        ];
        let s = summarize_report(&preds, &r, MetricKind::F1).unwrap().unwrap();
        assert_eq!(s.top_index, 0);
        assert_eq!(s.best_index, 2);
        assert_eq!((s.scr_of_best, s.dr_of_best, s.multiplicity), (3, 2, 1));
        let single = summarize_report(&preds[..1], &r, MetricKind::Mcc).unwrap().unwrap();
        assert_eq!(single.top, single.best);
        assert!(summarize_report(&[], &r, MetricKind::Mcc).unwrap().is_none());
    }
}
