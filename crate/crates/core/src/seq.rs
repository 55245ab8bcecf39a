//! Nucleotide sequences and base-pairing predicates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A,
    C,
    G,
    U,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::U];

    /// Maps a raw character onto a base. `T` reads as `U`, case is ignored.
    pub fn from_char(c: char) -> Option<Base> {
        match c.to_ascii_uppercase() {
            'A' => Some(Base::A),
            'C' => Some(Base::C),
            'G' => Some(Base::G),
            'U' | 'T' => Some(Base::U),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::U => 'U',
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An RNA sequence. Positions are 1-based everywhere in the public API.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    id: String,
    residues: Vec<Base>,
}

impl Sequence {
    /// Parses raw residue text. Whitespace and digits (as found in GenBank
    /// style listings) are dropped; anything else that is not a nucleotide,
    /// gap characters included, is rejected.
    pub fn parse(text: &str, id: impl Into<String>) -> Result<Self> {
        let mut residues = Vec::with_capacity(text.len());
        for c in text.chars() {
            if c.is_whitespace() || c.is_ascii_digit() {
                continue;
            }
            match Base::from_char(c) {
                Some(b) => residues.push(b),
                None => {
                    return Err(Error::InvalidCharacter {
                        position: residues.len() + 1,
                        ch: c,
                    })
                }
            }
        }
        if residues.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence {
            id: id.into(),
            residues,
        })
    }

    pub fn from_bases(id: impl Into<String>, residues: Vec<Base>) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence {
            id: id.into(),
            residues,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> u32 {
        self.residues.len() as u32
    }

    /// Always false; construction rejects empty input.
    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn residues(&self) -> &[Base] {
        &self.residues
    }

    /// Base at 1-based position `pos`.
    ///
    /// Panics when `pos` is 0 or beyond the end.
    pub fn base(&self, pos: u32) -> Base {
        self.residues[pos as usize - 1]
    }

    /// Whether positions `p` and `q` (1-based) can pair under `rule`.
    pub fn pairs(&self, p: u32, q: u32, rule: PairingRule) -> bool {
        is_base_pair(self.base(p), self.base(q), rule)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.residues {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Which base combinations count as pairs. Watson-Crick pairs are always
/// allowed; G-U wobble and U-U are opt-in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PairingRule {
    #[serde(default)]
    pub wobble: bool,
    #[serde(default)]
    pub uu: bool,
}

impl PairingRule {
    pub const CANONICAL: PairingRule = PairingRule {
        wobble: false,
        uu: false,
    };
    pub const WOBBLE: PairingRule = PairingRule {
        wobble: true,
        uu: false,
    };
}

pub fn is_base_pair(a: Base, b: Base, rule: PairingRule) -> bool {
    use Base::*;
    match (a, b) {
        (A, U) | (U, A) | (G, C) | (C, G) => true,
        (G, U) | (U, G) => rule.wobble,
        (U, U) => rule.uu,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RULES: [PairingRule; 4] = [
        PairingRule {
            wobble: false,
            uu: false,
        },
        PairingRule {
            wobble: true,
            uu: false,
        },
        PairingRule {
            wobble: false,
            uu: true,
        },
        PairingRule { wobble: true, uu: true },
    ];

    #[test]
    fn parses_spaced_sequence() {
        let s = Sequence::parse("GGCAC AGAAG AUAUG GCUUC GUGCC", "2QUX").unwrap();
        assert_eq!(s.len(), 25);
        assert_eq!(s.base(1), Base::G);
        assert_eq!(s.base(25), Base::C);
        assert_eq!(s.id(), "2QUX");
    }

    #[test]
    fn normalizes_case_and_thymine() {
        let s = Sequence::parse("acgu", "x").unwrap();
        assert_eq!(s.residues(), &[Base::A, Base::C, Base::G, Base::U]);
        let t = Sequence::parse("ACGT", "x").unwrap();
        assert_eq!(t.to_string(), "ACGU");
    }

    #[test]
    fn rejects_unknown_residue() {
        match Sequence::parse("ACGX", "x") {
            Err(Error::InvalidCharacter { position, ch }) => {
                assert_eq!((position, ch), (4, 'X'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_gaps_and_empty() {
        assert!(matches!(
            Sequence::parse("AC-GU", "x"),
            Err(Error::InvalidCharacter { position: 3, ch: '-' })
        ));
        assert!(matches!(
            Sequence::parse("AC.GU", "x"),
            Err(Error::InvalidCharacter { .. })
        ));
        assert!(matches!(Sequence::parse(" 12 \n", "x"), Err(Error::EmptySequence)));
    }

    #[test]
    fn pairing_rules() {
        use Base::*;
        assert!(is_base_pair(G, C, PairingRule::CANONICAL));
        assert!(!is_base_pair(G, U, PairingRule::CANONICAL));
        assert!(is_base_pair(G, U, PairingRule::WOBBLE));
        assert!(is_base_pair(
            U,
            U,
            PairingRule {
                wobble: false,
                uu: true
            }
        ));
        assert!(!is_base_pair(U, U, PairingRule::WOBBLE));
        assert!(!is_base_pair(A, G, RULES[3]));
    }

    #[test]
    fn pairing_is_symmetric() {
        for rule in RULES {
            for a in Base::ALL {
                for b in Base::ALL {
                    assert_eq!(is_base_pair(a, b, rule), is_base_pair(b, a, rule));
                }
            }
        }
    }

    #[test]
    fn reparse_is_identity() {
        let s = Sequence::parse("gg cat\nTTa 123 c", "r").unwrap();
        let again = Sequence::parse(&s.to_string(), "r").unwrap();
        assert_eq!(s, again);
    }
}
