use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Pair;

/// Smallest allowed `q - p` for any pair: at least one unpaired base must
/// sit between the two strands of a hairpin.
pub const MIN_PAIR_SPAN: u32 = 2;

/// Segment layout of a stem: runs of consecutive pairs separated by
/// unpaired bases on the 5' and 3' sides.
///
/// `2[0/1]6` is two pairs, no skipped base on the 5' strand and one on the
/// 3' strand, then six pairs. A plain `7` is seven consecutive pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapPattern {
    segments: Vec<u32>,
    gaps: Vec<(u32, u32)>,
}

impl GapPattern {
    pub fn contiguous(len: u32) -> Self {
        GapPattern {
            segments: vec![len],
            gaps: Vec::new(),
        }
    }

    /// `segments.len()` must be `gaps.len() + 1` and every segment non-empty.
    pub fn new(segments: Vec<u32>, gaps: Vec<(u32, u32)>) -> Result<Self> {
        let p = GapPattern { segments, gaps };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.segments.is_empty() || self.segments.len() != self.gaps.len() + 1 || self.segments.contains(&0) {
            return Err(Error::InvalidPattern(self.to_string()));
        }
        Ok(())
    }

    pub fn segments(&self) -> &[u32] {
        &self.segments
    }

    pub fn gaps(&self) -> &[(u32, u32)] {
        &self.gaps
    }

    /// Number of base pairs the pattern places.
    pub fn total_len(&self) -> u32 {
        self.segments.iter().sum()
    }

    /// A single run with no gaps. `2[0/0]1` style zero gaps still count as
    /// gapped in notation but produce contiguous pairs.
    pub fn is_contiguous(&self) -> bool {
        self.gaps.iter().all(|&(a, b)| a == 0 && b == 0)
    }

    /// Pair positions when the pattern's outermost pair is `(i, j)`, or
    /// `None` when the strands would meet before every pair is placed.
    pub fn place(&self, i: u32, j: u32) -> Option<Vec<Pair>> {
        let mut pairs = Vec::with_capacity(self.total_len() as usize);
        let (mut p, mut q) = (i as i64, j as i64);
        for (k, &seg) in self.segments.iter().enumerate() {
            if k > 0 {
                let (n1, n2) = self.gaps[k - 1];
                p += n1 as i64;
                q -= n2 as i64;
            }
            for _ in 0..seg {
                if p < 1 || q - p < MIN_PAIR_SPAN as i64 {
                    return None;
                }
                pairs.push((p as u32, q as u32));
                p += 1;
                q -= 1;
            }
        }
        Some(pairs)
    }

    /// Drops the innermost pair. `None` if nothing would remain.
    pub fn trim_inner(&self) -> Option<GapPattern> {
        let mut p = self.clone();
        let last = p.segments.last_mut()?;
        *last -= 1;
        if *last == 0 {
            p.segments.pop();
            p.gaps.pop();
        }
        if p.segments.is_empty() {
            None
        } else {
            Some(p)
        }
    }

    /// `self` followed by `inner` after a gap of `n1`/`n2` unpaired bases.
    pub fn join(&self, gap: (u32, u32), inner: &GapPattern) -> GapPattern {
        let mut segments = self.segments.clone();
        let mut gaps = self.gaps.clone();
        gaps.push(gap);
        segments.extend_from_slice(&inner.segments);
        gaps.extend_from_slice(&inner.gaps);
        GapPattern { segments, gaps }
    }

    /// Reconstructs the pattern from an explicit, nested pair list ordered
    /// outermost first.
    pub fn from_pairs(pairs: &[Pair]) -> Option<GapPattern> {
        let mut segments = vec![];
        let mut gaps = vec![];
        let mut run = 0u32;
        for w in 0..pairs.len() {
            run += 1;
            if let Some(&(np, nq)) = pairs.get(w + 1) {
                let (p, q) = pairs[w];
                if np <= p || nq >= q || np >= nq {
                    return None;
                }
                let gap = (np - p - 1, q - nq - 1);
                if gap != (0, 0) {
                    segments.push(run);
                    gaps.push(gap);
                    run = 0;
                }
            }
        }
        if run > 0 {
            segments.push(run);
        }
        GapPattern::new(segments, gaps).ok()
    }
}

impl fmt::Display for GapPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, seg) in self.segments.iter().enumerate() {
            if k > 0 {
                let (a, b) = self.gaps[k - 1];
                write!(f, "[{a}/{b}]")?;
            }
            write!(f, "{seg}")?;
        }
        Ok(())
    }
}

impl FromStr for GapPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPattern(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut segments = vec![];
        let mut gaps = vec![];
        let mut rest = text.as_str();
        loop {
            let end = rest.find('[').unwrap_or(rest.len());
            let seg: u32 = rest[..end].parse().map_err(|_| bad())?;
            segments.push(seg);
            rest = &rest[end..];
            if rest.is_empty() {
                break;
            }
            let close = rest.find(']').ok_or_else(bad)?;
            let (a, b) = rest[1..close].split_once('/').ok_or_else(bad)?;
            gaps.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
            rest = &rest[close + 1..];
        }
        GapPattern::new(segments, gaps).map_err(|_| bad())
    }
}

impl Serialize for GapPattern {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GapPattern {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn notation_round_trips() {
        let p: GapPattern = "2[0/1]6".parse().unwrap();
        assert_eq!(p.segments(), &[2, 6]);
        assert_eq!(p.gaps(), &[(0, 1)]);
        assert_eq!(p.total_len(), 8);
        assert_eq!(p.to_string(), "2[0/1]6");

        let q: GapPattern = "1[1/1]6[1/0]2".parse().unwrap();
        assert_eq!(q.total_len(), 9);
        assert_eq!(q.to_string(), "1[1/1]6[1/0]2");
        assert_eq!("7".parse::<GapPattern>().unwrap(), GapPattern::contiguous(7));
        assert_eq!("2 [1/2] 5".parse::<GapPattern>().unwrap().to_string(), "2[1/2]5");
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "0", "2[0/1]", "2[01]6", "2[0/1]0", "a", "2[0/1]6]", "-1"] {
            assert!(s.parse::<GapPattern>().is_err(), "{s}");
        }
    }

    #[test]
    fn placement_skips_gap_bases() {
        let p: GapPattern = "2[1/2]6".parse().unwrap();
        let pairs = p.place(1, 40).unwrap();
        assert_eq!(pairs.len(), 8);
        assert_eq!(&pairs[..2], &[(1, 40), (2, 39)]);
        assert_eq!(pairs[2], (4, 36));
        assert_eq!(pairs[7], (9, 31));
    }

    #[test]
    fn placement_overrun_is_none() {
        let p: GapPattern = "3[2/2]3".parse().unwrap();
        assert!(p.place(1, 12).is_none());
        assert!(GapPattern::contiguous(2).place(1, 4).is_none());
        assert!(GapPattern::contiguous(2).place(1, 5).is_some());
    }

    #[test]
    fn trim_and_rebuild() {
        let p: GapPattern = "2[0/1]1".parse().unwrap();
        let t = p.trim_inner().unwrap();
        assert_eq!(t.to_string(), "2");
        assert!(GapPattern::contiguous(1).trim_inner().is_none());

        let pairs = "3[1/2]4".parse::<GapPattern>().unwrap().place(10, 60).unwrap();
        assert_eq!(GapPattern::from_pairs(&pairs).unwrap().to_string(), "3[1/2]4");
    }
}
