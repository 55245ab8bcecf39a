//! Family-specific vertex generation.
//!
//! A [`ProfileConfig`] decides which stems become vertices:
//!
//! - `protein` / `custom`: plain stems of length `>= L`, optionally bounded
//!   by stem-loop score and span.
//! - `trna`: plain and partial stems; long-range stems are kept as acceptor
//!   candidates by their acceptor score, the rest are trimmed from the loop
//!   side until their stem-loop score clears the lower bound.
//! - `rrna5s`: per-helix candidates from explicit stem layouts, with nested
//!   helix pairs merged into domain vertices by their generalized score.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::score::{ratio, Interval, Score};
use crate::seq::{PairingRule, Sequence};
use crate::stemgraph::{
    build_stem_graph_with, can_coexist, canonicalize, enumerate_gapped_stems, enumerate_partial_stems,
    enumerate_stems_with, GapPattern, Stem, StemGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Protein,
    Trna,
    Rrna5s,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptorSpec {
    /// Admissible acceptor stem-loop scores; stems qualify only when their
    /// span exceeds half the sequence length.
    pub asl: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelixSpec {
    pub name: String,
    pub patterns: Vec<GapPattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl_bounds: Option<Interval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub name: String,
    pub outer: String,
    pub inner: String,
    pub gsl_bounds: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub name: String,
    pub family: Family,
    #[serde(default)]
    pub pairing: PairingRule,
    pub min_stem_len: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl_bounds: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_bounds: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptor: Option<AcceptorSpec>,
    #[serde(default)]
    pub partial_stems: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub helices: Vec<HelixSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domains: Vec<DomainSpec>,
    #[serde(default = "default_true")]
    pub use_gsl: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

fn default_true() -> bool {
    true
}

impl ProfileConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidProfile(format!("{}: {m}", self.name)));
        if self.min_stem_len == 0 {
            return bad("min_stem_len must be at least 1".into());
        }
        let mut intervals: Vec<&Interval> = [&self.sl_bounds, &self.d_bounds].into_iter().flatten().collect();
        intervals.extend(self.acceptor.iter().map(|a| &a.asl));
        intervals.extend(self.helices.iter().filter_map(|h| h.sl_bounds.as_ref()));
        intervals.extend(self.domains.iter().map(|d| &d.gsl_bounds));
        if intervals.iter().any(|iv| !iv.is_well_ordered()) {
            return bad("bounds must be well-ordered".into());
        }
        if self.family != Family::Rrna5s && (!self.helices.is_empty() || !self.domains.is_empty()) {
            return bad("helix and domain specs belong to rrna5s profiles".into());
        }
        match self.family {
            Family::Trna if self.acceptor.is_none() => return bad("trna profile needs an acceptor spec".into()),
            Family::Rrna5s if self.helices.is_empty() => return bad("rrna5s profile needs helix specs".into()),
            _ => {}
        }
        for h in &self.helices {
            if h.patterns.is_empty() {
                return bad(format!("helix {} has no patterns", h.name));
            }
        }
        for d in &self.domains {
            if d.outer == d.inner {
                return bad(format!("domain {} encloses itself", d.name));
            }
            for name in [&d.outer, &d.inner] {
                if !self.helices.iter().any(|h| &h.name == name) {
                    return bad(format!("domain {} refers to unknown helix {name}", d.name));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ProfileConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

const BUILTIN: &[(&str, &str)] = &[
    ("protein", include_str!("../../../profiles/protein.json")),
    ("protein-sl", include_str!("../../../profiles/protein-sl.json")),
    ("trna", include_str!("../../../profiles/trna.json")),
    ("trna-sl4.7", include_str!("../../../profiles/trna-sl4.7.json")),
    (
        "rrna5s-archaeal",
        include_str!("../../../profiles/rrna5s-archaeal.json"),
    ),
    (
        "rrna5s-archaeal-general",
        include_str!("../../../profiles/rrna5s-archaeal-general.json"),
    ),
    (
        "rrna5s-bacterial",
        include_str!("../../../profiles/rrna5s-bacterial.json"),
    ),
    (
        "rrna5s-eukaryotic",
        include_str!("../../../profiles/rrna5s-eukaryotic.json"),
    ),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

/// A shipped profile by name.
pub fn builtin(name: &str) -> Result<ProfileConfig> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownProfile(name.to_string()))?;
    ProfileConfig::from_json(text)
}

/// Resolves a selector: an existing file path, then `<dir>/<name>.json` in
/// `profile_dir` (the CLI passes `STEMP_PROFILE_DIR`), then the built-ins.
pub fn resolve(selector: &str, profile_dir: Option<&Path>) -> Result<ProfileConfig> {
    let direct = PathBuf::from(selector);
    if selector.ends_with(".json") && direct.is_file() {
        return ProfileConfig::load(&direct);
    }
    if let Some(dir) = profile_dir {
        let p = dir.join(format!("{selector}.json"));
        if p.is_file() {
            return ProfileConfig::load(&p);
        }
    }
    builtin(selector)
}

/// `(l̂ - d + 2l - 2) / l`, defined for stems spanning more than half the
/// sequence.
pub fn acceptor_sl(s: &Stem, seq_len: u32) -> Result<Score> {
    if 2 * s.d() <= seq_len {
        return Err(Error::NotAcceptorCandidate { d: s.d(), len: seq_len });
    }
    Ok(ratio(seq_len - s.d() + 2 * s.l() - 2, s.l()))
}

fn lower_ok(bounds: Option<&Interval>, x: &Score) -> bool {
    match bounds.and_then(|b| b.lower()) {
        None => true,
        Some(e) if e.inclusive => *x >= e.value,
        Some(e) => *x > e.value,
    }
}

/// Candidate vertices for a tRNA.
pub fn trna_vertices(seq: &Sequence, cfg: &ProfileConfig) -> Vec<Stem> {
    trna_vertices_with(seq, cfg, Execution::default())
}

fn trna_vertices_with(seq: &Sequence, cfg: &ProfileConfig, exec: Execution) -> Vec<Stem> {
    let n = seq.len();
    let l_min = cfg.min_stem_len;
    let mut stems = enumerate_stems_with(seq, cfg.pairing, l_min, None, exec);
    if cfg.partial_stems {
        stems = enumerate_partial_stems(&stems, l_min);
    }
    let sl = cfg.sl_bounds.as_ref();
    let mut out = Vec::new();
    for s in stems {
        if 2 * s.d() > n {
            if let (Some(acc), Ok(asl)) = (&cfg.acceptor, acceptor_sl(&s, n)) {
                if acc.asl.contains(&asl) {
                    out.push(s);
                }
            }
            continue;
        }
        let mut cur = s;
        // l strictly decreases, so this stops at the latest when l < L.
        while cur.l() >= l_min && !lower_ok(sl, &cur.sl()) {
            match cur.trim_inner() {
                Some(t) => cur = t,
                None => break,
            }
        }
        let ok = cur.l() >= l_min
            && sl.is_none_or(|b| b.contains(&cur.sl()))
            && cfg.d_bounds.as_ref().is_none_or(|b| b.contains_int(cur.d()));
        if ok {
            out.push(cur);
        }
    }
    canonicalize(&mut out);
    out
}

/// Every placement of the helix's layouts inside its stem-loop bounds,
/// tagged with the helix name.
pub fn rrna5s_helix_candidates(seq: &Sequence, spec: &HelixSpec, rule: PairingRule) -> Vec<Stem> {
    let mut out: Vec<Stem> = spec
        .patterns
        .iter()
        .flat_map(|p| enumerate_gapped_stems(seq, rule, p, spec.sl_bounds.as_ref()))
        .map(|s| s.with_label(spec.name.clone()))
        .collect();
    canonicalize(&mut out);
    out
}

/// An outer helix enclosing an inner one, merged into a single vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainCandidate {
    pub outer: Stem,
    pub inner: Stem,
    pub gsl: Score,
    /// Merged vertex: span of the outer stem, both stems' pairs, `sl` set to
    /// the generalized score.
    pub merged: Stem,
}

/// `d_outer / (l_outer + l_inner)`.
pub fn generalized_sl(outer: &Stem, inner: &Stem) -> Score {
    ratio(outer.d(), outer.l() + inner.l())
}

pub fn assemble_domains(outer: &[Stem], inner: &[Stem], spec: &DomainSpec) -> Vec<DomainCandidate> {
    let mut out = Vec::new();
    for m in outer {
        for n in inner {
            if !(m.i() < n.i() && m.j() > n.j()) || !can_coexist(m, n) {
                continue;
            }
            let gsl = generalized_sl(m, n);
            if !spec.gsl_bounds.contains(&gsl) {
                continue;
            }
            if let Some(merged) = Stem::merge_nested(m, n, gsl) {
                out.push(DomainCandidate {
                    outer: m.clone(),
                    inner: n.clone(),
                    gsl,
                    merged: merged.with_label(spec.name.clone()),
                });
            }
        }
    }
    out
}

fn rrna5s_vertices(seq: &Sequence, cfg: &ProfileConfig, exec: Execution) -> Vec<Stem> {
    let per_helix = exec.map(&cfg.helices, |h| rrna5s_helix_candidates(seq, h, cfg.pairing));
    let candidates = |name: &str| {
        cfg.helices
            .iter()
            .position(|h| h.name == name)
            .map(|k| per_helix[k].as_slice())
            .unwrap_or(&[])
    };
    let mut out = Vec::new();
    if cfg.use_gsl && !cfg.domains.is_empty() {
        for (h, cands) in cfg.helices.iter().zip(&per_helix) {
            let in_domain = cfg.domains.iter().any(|d| d.outer == h.name || d.inner == h.name);
            if !in_domain {
                out.extend(cands.iter().cloned());
            }
        }
        for d in &cfg.domains {
            out.extend(
                assemble_domains(candidates(&d.outer), candidates(&d.inner), d)
                    .into_iter()
                    .map(|c| c.merged),
            );
        }
    } else {
        out.extend(per_helix.into_iter().flatten());
    }
    canonicalize(&mut out);
    out
}

fn plain_vertices(seq: &Sequence, cfg: &ProfileConfig, exec: Execution) -> Vec<Stem> {
    let mut stems = enumerate_stems_with(seq, cfg.pairing, cfg.min_stem_len, None, exec);
    if cfg.partial_stems {
        stems = enumerate_partial_stems(&stems, cfg.min_stem_len);
    }
    stems.retain(|s| {
        cfg.sl_bounds.as_ref().is_none_or(|b| b.contains(&s.sl()))
            && cfg.d_bounds.as_ref().is_none_or(|b| b.contains_int(s.d()))
    });
    canonicalize(&mut stems);
    stems
}

/// Vertex set for `seq` under `cfg`, in canonical order.
pub fn profile_vertices(seq: &Sequence, cfg: &ProfileConfig, exec: Execution) -> Vec<Stem> {
    match cfg.family {
        Family::Protein | Family::Custom => plain_vertices(seq, cfg, exec),
        Family::Trna => trna_vertices_with(seq, cfg, exec),
        Family::Rrna5s => rrna5s_vertices(seq, cfg, exec),
    }
}

pub fn build_profile_graph(seq: &Sequence, cfg: &ProfileConfig) -> Result<StemGraph> {
    build_profile_graph_with(seq, cfg, Execution::default())
}

pub fn build_profile_graph_with(seq: &Sequence, cfg: &ProfileConfig, exec: Execution) -> Result<StemGraph> {
    cfg.validate()?;
    Ok(build_stem_graph_with(profile_vertices(seq, cfg, exec), exec))
}
