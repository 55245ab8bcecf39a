//! Dot-bracket strings with up to four bracket tiers for crossing pairs.

use crate::error::{Error, Result};
use crate::eval::validate_pairs;
use crate::Pair;

pub const TIERS: [(char, char); 4] = [('(', ')'), ('[', ']'), ('{', '}'), ('<', '>')];

fn crosses(a: Pair, b: Pair) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// Splits `pairs` into non-crossing tiers: each pair, in order of its 5'
/// index, goes to the lowest tier none of whose pairs it crosses.
pub fn assign_tiers(pairs: &[Pair]) -> Result<Vec<Vec<Pair>>> {
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    let mut tiers: Vec<Vec<Pair>> = Vec::new();
    for p in sorted {
        match tiers.iter().position(|t| t.iter().all(|&q| !crosses(p, q))) {
            Some(t) => tiers[t].push(p),
            None if tiers.len() < TIERS.len() => tiers.push(vec![p]),
            None => return Err(Error::TooManyLayers),
        }
    }
    Ok(tiers)
}

/// Dot-bracket string of `pairs` over a sequence of length `len`.
pub fn write_dot_bracket(len: u32, pairs: &[Pair]) -> Result<String> {
    let pairs = validate_pairs(pairs, len)?;
    let mut out = vec!['.'; len as usize];
    for (t, tier) in assign_tiers(&pairs)?.into_iter().enumerate() {
        let (open, close) = TIERS[t];
        for (p, q) in tier {
            out[p as usize - 1] = open;
            out[q as usize - 1] = close;
        }
    }
    Ok(out.into_iter().collect())
}

/// Pairs of a dot-bracket string. Any character other than the bracket
/// tiers counts as unpaired.
pub fn parse_dot_bracket(text: &str) -> Result<Vec<Pair>> {
    let mut stacks: [Vec<u32>; 4] = Default::default();
    let mut pairs = Vec::new();
    for (k, ch) in text.trim().chars().enumerate() {
        let pos = k as u32 + 1;
        if let Some(t) = TIERS.iter().position(|&(o, _)| o == ch) {
            stacks[t].push(pos);
        } else if let Some(t) = TIERS.iter().position(|&(_, c)| c == ch) {
            let p = stacks[t]
                .pop()
                .ok_or_else(|| Error::parse(1, format!("unmatched {ch:?} at position {pos}")))?;
            pairs.push((p, pos));
        }
    }
    if let Some(open) = stacks.iter().find_map(|s| s.last()) {
        return Err(Error::parse(1, format!("unclosed bracket at position {open}")));
    }
    pairs.sort_unstable();
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hairpin() {
        assert_eq!(write_dot_bracket(8, &[(1, 8), (2, 7), (3, 6)]).unwrap(), "(((..)))");
    }

    #[test]
    fn single_crossing() {
        let s = write_dot_bracket(8, &[(1, 5), (3, 7)]).unwrap();
        assert_eq!(s, "(.[.).].");
        assert_eq!(parse_dot_bracket(&s).unwrap(), vec![(1, 5), (3, 7)]);
        assert_eq!(write_dot_bracket(8, &[(1, 5), (3, 8)]).unwrap(), "(.[.)..]");
    }

    #[test]
    fn too_many_tiers() {
        let five: Vec<Pair> = (0..5).map(|k| (1 + k, 6 + k)).collect();
        assert!(matches!(write_dot_bracket(12, &five), Err(Error::TooManyLayers)));
        let four: Vec<Pair> = (0..4).map(|k| (1 + k, 5 + k)).collect();
        assert_eq!(write_dot_bracket(8, &four).unwrap(), "([{<)]}>");
    }

    #[test]
    fn malformed_input() {
        assert!(parse_dot_bracket("(()").is_err());
        assert!(parse_dot_bracket("())").is_err());
        assert!(parse_dot_bracket("(.[.).]").is_ok());
        assert!(write_dot_bracket(5, &[(1, 6)]).is_err());
    }
}
