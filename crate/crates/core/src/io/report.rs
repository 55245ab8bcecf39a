//! JSON prediction reports: one object per sequence, or an array of them.

use std::path::Path;

use crate::error::Result;
use crate::pipeline::PredictionReport;

pub fn reports_to_json(reports: &[PredictionReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)? + "\n")
}

/// Accepts either a single report object or an array of reports.
pub fn reports_from_json(text: &str) -> Result<Vec<PredictionReport>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.is_array() {
        Ok(serde_json::from_value(value)?)
    } else {
        Ok(vec![serde_json::from_value(value)?])
    }
}

pub fn read_reports(path: &Path) -> Result<Vec<PredictionReport>> {
    reports_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{predict, PredictOptions};
    use crate::profiles::builtin;
    use crate::seq::Sequence;

    #[test]
    fn round_trip() {
        let seq = Sequence::parse("GGCAC AGAAG AUAUG GCUUC GUGCC", "2QUX").unwrap();
        let r = predict(&seq, &builtin("protein").unwrap(), &PredictOptions::default())
            .unwrap()
            .report;
        let text = reports_to_json(std::slice::from_ref(&r)).unwrap();
        assert!(text.contains("\"rank_scr\": 1"));
        assert_eq!(reports_from_json(&text).unwrap(), vec![r.clone()]);
        let single = serde_json::to_string(&r).unwrap();
        assert_eq!(reports_from_json(&single).unwrap(), vec![r]);
    }
}
