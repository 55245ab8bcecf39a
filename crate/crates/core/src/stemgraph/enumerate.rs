use super::{canonicalize, GapPattern, Stem, MIN_PAIR_SPAN};
use crate::exec::Execution;
use crate::score::{ratio, Interval};
use crate::seq::{PairingRule, Sequence};

/// Every stem whose outermost pair is `(i, j)`, `j >= i + 3`, extended
/// inward for as long as the bases pair and the strands stay apart.
///
/// A stem nested one pair inside another (`(i+1, j-1)`) is reported as its
/// own vertex. Output is in `(i, j)` order.
pub fn enumerate_stems(seq: &Sequence, rule: PairingRule, min_len: u32, sl_bounds: Option<&Interval>) -> Vec<Stem> {
    enumerate_stems_with(seq, rule, min_len, sl_bounds, Execution::default())
}

pub fn enumerate_stems_with(
    seq: &Sequence,
    rule: PairingRule,
    min_len: u32,
    sl_bounds: Option<&Interval>,
    exec: Execution,
) -> Vec<Stem> {
    let n = seq.len();
    let rows = exec.map_range(n as usize, |k| {
        let i = k as u32 + 1;
        let mut out = Vec::new();
        for j in (i + 3)..=n {
            if !seq.pairs(i, j, rule) {
                continue;
            }
            let mut l = 1;
            while (j - l) - (i + l) >= MIN_PAIR_SPAN && seq.pairs(i + l, j - l, rule) {
                l += 1;
            }
            if l < min_len {
                continue;
            }
            if let Some(b) = sl_bounds {
                if !b.contains(&ratio(j - i, l)) {
                    continue;
                }
            }
            out.extend(Stem::contiguous(i, j, l));
        }
        out
    });
    rows.into_iter().flatten().collect()
}

/// Every placement of `pattern` whose pairs all match. Placements whose
/// gaps would push the strands past each other are skipped.
///
/// A single-segment pattern of length `k` yields each run of exactly `k`
/// pairs, whether or not the run could be extended further inward.
pub fn enumerate_gapped_stems(
    seq: &Sequence,
    rule: PairingRule,
    pattern: &GapPattern,
    sl_bounds: Option<&Interval>,
) -> Vec<Stem> {
    let n = seq.len();
    let l = pattern.total_len();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if let Some(b) = sl_bounds {
                if !b.contains(&ratio(j - i, l)) {
                    continue;
                }
            }
            if !seq.pairs(i, j, rule) {
                continue;
            }
            let Some(pairs) = pattern.place(i, j) else {
                continue;
            };
            if pairs.iter().all(|&(p, q)| seq.pairs(p, q, rule)) {
                out.extend(Stem::from_pattern(i, j, pattern.clone()));
            }
        }
    }
    out
}

/// Closure of `stems` under partial-stem variants: every run of at least
/// `min_len` consecutive pairs taken from a plain stem, and every copy of a
/// plain stem of length `min_len + 1` or more with exactly one interior pair
/// left open. Duplicate pair sets are dropped and the result is in
/// canonical order.
pub fn enumerate_partial_stems(stems: &[Stem], min_len: u32) -> Vec<Stem> {
    let mut out: Vec<Stem> = stems.to_vec();
    for s in stems.iter().filter(|s| s.is_contiguous()) {
        let l = s.l();
        for a in 0..l {
            for b in (a + min_len.max(1))..=l {
                if (a, b) != (0, l) {
                    out.extend(Stem::contiguous(s.i() + a, s.j() - a, b - a));
                }
            }
        }
        if l > min_len {
            for t in 1..=(l.saturating_sub(2)) {
                let p = GapPattern::new(vec![t, l - 1 - t], vec![(1, 1)]).expect("segments are non-empty");
                out.extend(Stem::from_pattern(s.i(), s.j(), p));
            }
        }
    }
    canonicalize(&mut out);
    out
}
