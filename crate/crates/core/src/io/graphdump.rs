//! Stem-graph dumps.
//!
//! Text form, vertices numbered from 1:
//!
//! ```text
//! v1 1 25 5 24 4.8 5
//! v2 2 24 4 22 5.5 4
//! e 1 4
//! ```
//!
//! Each vertex line is `v<k> i j l d sl pattern [label]`; each edge line is
//! `e <u> <v>` with `u < v`. The JSON form carries the same fields with
//! 0-based edge endpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::score::{format_score, parse_decimal};
use crate::stemgraph::{GapPattern, Stem, StemGraph};

pub fn dump_text(g: &StemGraph) -> String {
    let mut out = String::new();
    for (k, s) in g.vertices().iter().enumerate() {
        out.push_str(&format!(
            "v{} {} {} {} {} {} {}",
            k + 1,
            s.i(),
            s.j(),
            s.l(),
            s.d(),
            format_score(&s.sl()),
            s.pattern()
        ));
        if let Some(label) = s.label() {
            out.push(' ');
            out.push_str(label);
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn parse_text(text: &str) -> Result<StemGraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        let cols: Vec<&str> = line.split_whitespace().collect();
        let Some(&head) = cols.first() else { continue };
        let num = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| Error::parse(ln, format!("bad number {t:?}")))
        };
        if head == "e" {
            if cols.len() != 3 {
                return Err(Error::parse(ln, "edge line needs two endpoints"));
            }
            let (u, v) = (num(cols[1])? as usize, num(cols[2])? as usize);
            if u == 0 || v == 0 {
                return Err(Error::parse(ln, "vertices are numbered from 1"));
            }
            edges.push((u - 1, v - 1));
        } else if let Some(idx) = head.strip_prefix('v') {
            if num(idx)? as usize != vertices.len() + 1 {
                return Err(Error::parse(ln, "vertex numbers must be consecutive from 1"));
            }
            if !(7..=8).contains(&cols.len()) {
                return Err(Error::parse(ln, "vertex line needs i j l d sl pattern [label]"));
            }
            let rec = StemRecord {
                i: num(cols[1])?,
                j: num(cols[2])?,
                l: num(cols[3])?,
                d: num(cols[4])?,
                sl: cols[5].to_string(),
                pattern: cols[6].parse()?,
                label: cols.get(7).map(|s| s.to_string()),
            };
            vertices.push(rec.to_stem().map_err(|e| Error::parse(ln, e.to_string()))?);
        } else {
            return Err(Error::parse(ln, format!("unexpected line {line:?}")));
        }
    }
    check_edges(&edges, vertices.len())?;
    Ok(StemGraph::from_edges(vertices, &edges))
}

fn check_edges(edges: &[(usize, usize)], n: usize) -> Result<()> {
    match edges.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
        Some(&(u, v)) => Err(Error::parse(
            0,
            format!("edge ({u}, {v}) does not join two distinct vertices"),
        )),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StemRecord {
    pub i: u32,
    pub j: u32,
    pub l: u32,
    pub d: u32,
    pub sl: String,
    pub pattern: GapPattern,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StemRecord {
    pub fn from_stem(s: &Stem) -> Self {
        StemRecord {
            i: s.i(),
            j: s.j(),
            l: s.l(),
            d: s.d(),
            sl: format_score(&s.sl()),
            pattern: s.pattern().clone(),
            label: s.label().map(str::to_string),
        }
    }

    pub fn to_stem(&self) -> Result<Stem> {
        let s = Stem::from_pattern(self.i, self.j, self.pattern.clone()).ok_or_else(|| {
            Error::InvalidPattern(format!("{} does not fit at ({}, {})", self.pattern, self.i, self.j))
        })?;
        if s.l() != self.l || s.d() != self.d {
            return Err(Error::InvalidPattern(format!(
                "l/d disagree with {} at ({}, {})",
                self.pattern, self.i, self.j
            )));
        }
        let s = s.with_score(parse_decimal(&self.sl)?);
        Ok(match &self.label {
            Some(l) => s.with_label(l.clone()),
            None => s,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<StemRecord>,
    pub edges: Vec<(usize, usize)>,
}

impl GraphDoc {
    pub fn from_graph(g: &StemGraph) -> Self {
        GraphDoc {
            vertices: g.vertices().iter().map(StemRecord::from_stem).collect(),
            edges: g.edges().collect(),
        }
    }

    pub fn to_graph(&self) -> Result<StemGraph> {
        let vertices = self
            .vertices
            .iter()
            .map(StemRecord::to_stem)
            .collect::<Result<Vec<_>>>()?;
        check_edges(&self.edges, vertices.len())?;
        Ok(StemGraph::from_edges(vertices, &self.edges))
    }
}

pub fn dump_json(g: &StemGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&GraphDoc::from_graph(g))? + "\n")
}

pub fn parse_json(text: &str) -> Result<StemGraph> {
    serde_json::from_str::<GraphDoc>(text)?.to_graph()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{build_profile_graph, builtin};
    use crate::seq::Sequence;
    use crate::stemgraph::{build_stem_graph, enumerate_stems};

    fn same(a: &StemGraph, b: &StemGraph) {
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }

    #[test]
    fn qux_text_dump() {
        let seq = Sequence::parse("GGCAC AGAAG AUAUG GCUUC GUGCC", "2QUX").unwrap();
        let g = build_stem_graph(enumerate_stems(&seq, crate::seq::PairingRule::CANONICAL, 3, None));
        let text = dump_text(&g);
        assert!(text.starts_with("v1 1 25 5 24 4.8 5\n"));
        assert!(text.contains("e 1 4\n"));
        same(&g, &parse_text(&text).unwrap());
        same(&g, &parse_json(&dump_json(&g).unwrap()).unwrap());
    }

    #[test]
    fn composite_vertices_round_trip() {
        let outer = Stem::contiguous(10, 70, 8).unwrap();
        let inner = Stem::contiguous(25, 55, 7).unwrap();
        let c = Stem::merge_nested(&outer, &inner, crate::score::ratio(60, 15))
            .unwrap()
            .with_label("beta");
        let g = StemGraph::from_edges(vec![c, Stem::contiguous(80, 100, 3).unwrap()], &[(0, 1)]);
        same(&g, &parse_text(&dump_text(&g)).unwrap());
        same(&g, &parse_json(&dump_json(&g).unwrap()).unwrap());
    }

    #[test]
    fn trna_profile_graph_round_trip() {
        let seq = Sequence::parse(
            "GCGGAUUUAGCUCAGUUGGGAGAGCGCCAGACUGAAGAUCUGGAGGUCCUGUGUUCGAUCCACAGAAUUCGCACCA",
            "t",
        )
        .unwrap();
        let g = build_profile_graph(&seq, &builtin("trna").unwrap()).unwrap();
        same(&g, &parse_text(&dump_text(&g)).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_text("v2 1 25 5 24 4.8 5\n").is_err());
        assert!(parse_text("v1 1 25 5 24 4.8 5\ne 1 2\n").is_err());
        assert!(parse_text("v1 1 25 4 24 4.8 5\n").is_err());
        assert!(parse_text("x\n").is_err());
    }
}
