//! Exact rational scores and the intervals used to filter them.
//!
//! Profile bounds such as `3 < SL <= 4.7` are compared exactly: scores are
//! ratios of integers and bounds are parsed from their decimal text, so no
//! comparison can flip on float rounding.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Score = Ratio<i64>;

/// Parses a plain decimal (`17.82`, `-3`, `0.5`) or a fraction (`24/5`).
pub fn parse_decimal(text: &str) -> Result<Score> {
    let t = text.trim();
    let bad = || Error::InvalidInterval(text.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac_part.len() > 12 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i64.pow(frac_part.len() as u32);
    let r = Ratio::new(numer, denom);
    Ok(if neg { -r } else { r })
}

/// Shortest faithful text for a score: an integer, a terminating decimal,
/// or `n/d` when the decimal expansion does not terminate.
pub fn format_score(s: &Score) -> String {
    if s.is_integer() {
        return s.to_integer().to_string();
    }
    let mut d = *s.denom();
    let mut scale = 0u32;
    while d % 2 == 0 {
        d /= 2;
        scale += 1;
    }
    let mut twos = scale;
    let mut fives = 0u32;
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 || twos.max(fives) > 12 {
        return format!("{}/{}", s.numer(), s.denom());
    }
    twos = twos.max(fives);
    let scaled = s * Ratio::from_integer(10i64.pow(twos));
    let n = scaled.to_integer();
    let sign = if n < 0 { "-" } else { "" };
    let n = n.unsigned_abs();
    let p = 10u64.pow(twos);
    let frac = format!("{:0width$}", n % p, width = twos as usize);
    format!("{sign}{}.{}", n / p, frac.trim_end_matches('0'))
}

pub fn to_f64(s: &Score) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub value: Score,
    pub inclusive: bool,
}

/// A possibly half-open interval over scores, written as `[2, 20]`,
/// `(3, 5.4]` or `(-inf, 3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Interval {
    pub lo: Option<Endpoint>,
    pub hi: Option<Endpoint>,
}

impl Interval {
    pub fn closed(lo: Score, hi: Score) -> Self {
        Interval {
            lo: Some(Endpoint {
                value: lo,
                inclusive: true,
            }),
            hi: Some(Endpoint {
                value: hi,
                inclusive: true,
            }),
        }
    }

    pub fn at_most(hi: Score) -> Self {
        Interval {
            lo: None,
            hi: Some(Endpoint {
                value: hi,
                inclusive: true,
            }),
        }
    }

    pub fn unbounded() -> Self {
        Interval::default()
    }

    pub fn contains(&self, x: &Score) -> bool {
        let lo_ok = match &self.lo {
            None => true,
            Some(e) if e.inclusive => *x >= e.value,
            Some(e) => *x > e.value,
        };
        let hi_ok = match &self.hi {
            None => true,
            Some(e) if e.inclusive => *x <= e.value,
            Some(e) => *x < e.value,
        };
        lo_ok && hi_ok
    }

    pub fn contains_int(&self, x: u32) -> bool {
        self.contains(&Score::from_integer(x as i64))
    }

    /// True when some value can satisfy both ends.
    pub fn is_well_ordered(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => lo.value < hi.value || (lo.value == hi.value && lo.inclusive && hi.inclusive),
            _ => true,
        }
    }

    /// Whether every value admitted by `self` is also admitted by `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = match (&self.lo, &other.lo) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.value > b.value || (a.value == b.value && (b.inclusive || !a.inclusive)),
        };
        let hi_ok = match (&self.hi, &other.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.value < b.value || (a.value == b.value && (b.inclusive || !a.inclusive)),
        };
        lo_ok && hi_ok
    }

    pub fn lower(&self) -> Option<&Endpoint> {
        self.lo.as_ref()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            None => write!(f, "(-inf, ")?,
            Some(e) => write!(f, "{}{}, ", if e.inclusive { '[' } else { '(' }, format_score(&e.value))?,
        }
        match &self.hi {
            None => write!(f, "inf)"),
            Some(e) => write!(f, "{}{}", format_score(&e.value), if e.inclusive { ']' } else { ')' }),
        }
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInterval(s.to_string());
        let t = s.trim();
        let lo_inc = match t.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_inc = match t.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let (a, b) = (a.trim(), b.trim());
        let lo = if a == "-inf" {
            if lo_inc {
                return Err(bad());
            }
            None
        } else {
            Some(Endpoint {
                value: parse_decimal(a)?,
                inclusive: lo_inc,
            })
        };
        let hi = if b == "inf" || b == "+inf" {
            if hi_inc {
                return Err(bad());
            }
            None
        } else {
            Some(Endpoint {
                value: parse_decimal(b)?,
                inclusive: hi_inc,
            })
        };
        let iv = Interval { lo, hi };
        if !iv.is_well_ordered() {
            return Err(bad());
        }
        Ok(iv)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n / d` as an exact score. `d` must be non-zero.
pub fn ratio(n: u32, d: u32) -> Score {
    debug_assert!(!d.is_zero());
    Ratio::new(n as i64, d as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Score {
        Ratio::new(n, d)
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("17.82").unwrap(), r(1782, 100));
        assert_eq!(parse_decimal("4.7").unwrap(), r(47, 10));
        assert_eq!(parse_decimal("3").unwrap(), r(3, 1));
        assert_eq!(parse_decimal("-0.5").unwrap(), r(-1, 2));
        assert_eq!(parse_decimal("24/5").unwrap(), r(24, 5));
        assert!(parse_decimal("1e3").is_err());
        assert!(parse_decimal(".").is_err());
        assert!(parse_decimal("1/0").is_err());
    }

    #[test]
    fn formatting() {
        assert_eq!(format_score(&r(24, 5)), "4.8");
        assert_eq!(format_score(&r(17, 7)), "17/7");
        assert_eq!(format_score(&r(2, 1)), "2");
        assert_eq!(format_score(&r(1782, 100)), "17.82");
        assert_eq!(format_score(&r(-1, 4)), "-0.25");
    }

    #[test]
    fn interval_round_trip_and_membership() {
        let iv: Interval = "(3, 4.7]".parse().unwrap();
        assert!(!iv.contains(&r(3, 1)));
        assert!(iv.contains(&r(47, 10)));
        assert!(!iv.contains(&r(471, 100)));
        assert_eq!(iv.to_string(), "(3, 4.7]");
        let open: Interval = "(-inf, 3]".parse().unwrap();
        assert!(open.contains(&r(-100, 1)));
        assert_eq!(open.to_string(), "(-inf, 3]");
        assert!("[5, 3]".parse::<Interval>().is_err());
        assert!("(3, 3]".parse::<Interval>().is_err());
        assert!("[3, 3]".parse::<Interval>().is_ok());
        assert!("[-inf, 3]".parse::<Interval>().is_err());
    }

    #[test]
    fn subset() {
        let wide: Interval = "[2, 20]".parse().unwrap();
        let narrow: Interval = "(2, 10]".parse().unwrap();
        assert!(narrow.is_subset_of(&wide));
        assert!(!wide.is_subset_of(&narrow));
        assert!(wide.is_subset_of(&Interval::unbounded()));
    }
}
