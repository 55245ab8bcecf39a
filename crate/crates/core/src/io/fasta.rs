use std::path::Path;

use crate::error::{Error, Result};
use crate::seq::{Base, Sequence};

/// Parses every record of a FASTA document, in file order.
///
/// The id is the header up to the first whitespace. Blank lines and `;`
/// comments are skipped. Digits and whitespace inside sequence lines are
/// ignored, as in [`Sequence::parse`].
pub fn parse_fasta(text: &str) -> Result<Vec<Sequence>> {
    let mut out = Vec::new();
    let mut current: Option<(String, usize, Vec<Base>)> = None;
    let finish = |rec: Option<(String, usize, Vec<Base>)>, out: &mut Vec<Sequence>| -> Result<()> {
        if let Some((id, line, bases)) = rec {
            if bases.is_empty() {
                return Err(Error::parse(line, format!("record {id:?} has no residues")));
            }
            out.push(Sequence::from_bases(id, bases)?);
        }
        Ok(())
    };
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            finish(current.take(), &mut out)?;
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            current = Some((id, line_no, Vec::new()));
            continue;
        }
        let Some((id, _, bases)) = current.as_mut() else {
            return Err(Error::parse(line_no, "sequence data before the first '>' header"));
        };
        for ch in line.chars().filter(|c| !c.is_whitespace() && !c.is_ascii_digit()) {
            match Base::from_char(ch) {
                Some(b) => bases.push(b),
                None => {
                    return Err(Error::InvalidRecord {
                        record: id.clone(),
                        line: line_no,
                        ch,
                    });
                }
            }
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

pub fn read_fasta(path: &Path) -> Result<Vec<Sequence>> {
    parse_fasta(&std::fs::read_to_string(path)?)
}

/// One record, wrapped at 60 columns.
pub fn write_fasta(seq: &Sequence) -> String {
    let body = seq.to_string();
    let mut out = format!(">{}\n", seq.id());
    for chunk in body.as_bytes().chunks(60) {
        out.push_str(std::str::from_utf8(chunk).expect("ascii"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_record() {
        let v = parse_fasta(">2QUX chain A\nGGCACAGAAG\nAUAUGGCUUC GUGCC\n").unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].id(), "2QUX");
        assert_eq!(v[0].len(), 25);
    }

    #[test]
    fn empty_and_multi() {
        assert!(parse_fasta("").unwrap().is_empty());
        let v = parse_fasta(">b\nACGU\n\n>a desc\nggcc\n").unwrap();
        let ids: Vec<_> = v.iter().map(|s| s.id()).collect();
        assert_eq!(ids, ["b", "a"]);
        assert_eq!(v[1].to_string(), "GGCC");
    }

    #[test]
    fn bad_character_reports_record_and_line() {
        match parse_fasta(">x\nACGU\nAC-U\n") {
            Err(Error::InvalidRecord { record, line, ch }) => {
                assert_eq!((record.as_str(), line, ch), ("x", 3, '-'));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_fasta("ACGU\n").is_err());
        assert!(parse_fasta(">x\n>y\nAC\n").is_err());
    }

    #[test]
    fn write_then_read() {
        let s = Sequence::parse(&"ACGU".repeat(40), "long").unwrap();
        assert_eq!(parse_fasta(&write_fasta(&s)).unwrap(), vec![s]);
    }
}
