//! Connectivity tables: a header line `N title...` followed by `N` lines of
//! `index base prev next partner orig`, partner `0` when unpaired.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::{ReferenceStructure, SourceFormat};
use crate::seq::Sequence;
use crate::Pair;

/// The first structure of a CT file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtRecord {
    pub title: String,
    /// Residue letters as written; may include symbols outside ACGU.
    pub bases: String,
    pub reference: ReferenceStructure,
}

impl CtRecord {
    /// The residues as a [`Sequence`] named after the reference.
    pub fn sequence(&self) -> Result<Sequence> {
        Sequence::parse(&self.bases, self.reference.id.clone())
    }
}

/// Parses a CT document. `id` names the reference when the title is empty.
pub fn parse_ct(text: &str, id: &str) -> Result<CtRecord> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (h, header) = lines.next().ok_or_else(|| Error::parse(1, "empty CT file"))?;
    let mut fields = header.split_whitespace();
    let n: u32 = fields
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(h + 1, "header must start with the sequence length"))?;
    let title = fields.collect::<Vec<_>>().join(" ");
    let mut bases = String::with_capacity(n as usize);
    let mut partner = vec![0u32; n as usize + 1];
    for k in 1..=n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(h + 1, format!("header declares {n} residues, body has {}", k - 1)))?;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 5 {
            return Err(Error::parse(ln + 1, "expected at least 5 columns"));
        }
        let idx: u32 = cols[0].parse().map_err(|_| Error::parse(ln + 1, "bad index"))?;
        if idx != k {
            return Err(Error::parse(ln + 1, format!("expected index {k}, found {idx}")));
        }
        let mut chars = cols[1].chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => bases.push(c),
            _ => return Err(Error::parse(ln + 1, "base must be a single character")),
        }
        let j: u32 = cols[4].parse().map_err(|_| Error::parse(ln + 1, "bad partner index"))?;
        if j > n || j == k {
            return Err(Error::IndexOutOfRange {
                p: k.min(j),
                q: k.max(j),
                len: n,
            });
        }
        partner[k as usize] = j;
    }
    let mut pairs: Vec<Pair> = Vec::new();
    for k in 1..=n {
        let j = partner[k as usize];
        if j == 0 {
            continue;
        }
        if partner[j as usize] != k {
            return Err(Error::AsymmetricPair(k, j));
        }
        if k < j {
            pairs.push((k, j));
        }
    }
    let name = title.split_whitespace().next().unwrap_or(id);
    let name = if name.is_empty() { id } else { name };
    Ok(CtRecord {
        reference: ReferenceStructure::new(name, n, &pairs, SourceFormat::Ct)?,
        title,
        bases,
    })
}

pub fn read_ct(path: &Path) -> Result<CtRecord> {
    let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    parse_ct(&std::fs::read_to_string(path)?, id)
}

/// Renders `pairs` on `bases` as a CT document.
pub fn write_ct(title: &str, bases: &str, pairs: &[Pair]) -> Result<String> {
    let chars: Vec<char> = bases.chars().collect();
    let n = chars.len() as u32;
    let pairs = crate::eval::validate_pairs(pairs, n)?;
    let mut partner = vec![0u32; n as usize + 1];
    for (p, q) in pairs {
        partner[p as usize] = q;
        partner[q as usize] = p;
    }
    let mut out = format!("{n}\t{title}\n");
    for k in 1..=n {
        let next = if k == n { 0 } else { k + 1 };
        writeln!(
            out,
            "{k}\t{}\t{}\t{next}\t{}\t{k}",
            chars[k as usize - 1],
            k - 1,
            partner[k as usize]
        )
        .expect("write to string");
    }
    Ok(out)
}
