//! File formats: FASTA in, CT and dot-bracket both ways, JSON reports and
//! graph dumps. Profiles are read by [`crate::profiles::ProfileConfig`].

pub mod ct;
pub mod dotbracket;
pub mod fasta;
pub mod graphdump;
pub mod report;

use std::path::Path;

/// File kinds recognised by extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Fasta,
    Ct,
    DotBracket,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "fa" | "fasta" | "fna" | "seq" => Some(Format::Fasta),
            "ct" => Some(Format::Ct),
            "dbn" | "db" | "dot" => Some(Format::DotBracket),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}
