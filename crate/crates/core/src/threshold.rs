//! Exact non-negative rational average-degree thresholds.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Average-degree bound `t`, stored as an exact reduced fraction.
///
/// Feasibility tests compare `2 * e * den <= num * k` in integers, so no
/// floating-point rounding ever decides whether a set is sparse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Threshold(Ratio<u64>);

impl Threshold {
    pub const ZERO: Threshold = Threshold(Ratio::new_raw(0, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::Invalid("threshold denominator is zero".into()));
        }
        Ok(Threshold(Ratio::new(numer, denom)))
    }

    pub fn integer(t: u64) -> Self {
        Threshold(Ratio::from_integer(t))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn is_integer(&self) -> bool {
        self.denom() == 1
    }

    /// Largest admissible induced edge count for a `k`-set: `floor(k t / 2)`.
    pub fn edge_quota(&self, k: u64) -> u64 {
        let num = self.numer() as u128 * k as u128;
        let den = 2 * self.denom() as u128;
        (num / den) as u64
    }

    /// `e` induced edges on `k` vertices has average degree at most `t`.
    pub fn admits(&self, k: u64, e: u64) -> bool {
        2 * e as u128 * self.denom() as u128 <= self.numer() as u128 * k as u128
    }
}

impl FromStr for Threshold {
    type Err = Error;

    /// Accepts plain decimals (`"3"`, `"0.25"`) and fractions (`"7/3"`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse {
            line: 1,
            msg: format!("cannot parse threshold {s:?} as a non-negative rational"),
        };
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Threshold::new(a, b).map_err(|_| bad());
        }
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 18 {
            return Err(bad());
        }
        let scale = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_v: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let numer = int
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_v))
            .ok_or_else(bad)?;
        Threshold::new(numer, scale)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Threshold {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("0".parse::<Threshold>().unwrap(), Threshold::ZERO);
        assert_eq!("2".parse::<Threshold>().unwrap(), Threshold::integer(2));
        assert_eq!(
            "0.25".parse::<Threshold>().unwrap(),
            Threshold::new(1, 4).unwrap()
        );
        assert_eq!(
            "1.50".parse::<Threshold>().unwrap(),
            Threshold::new(3, 2).unwrap()
        );
        assert_eq!(
            "7/3".parse::<Threshold>().unwrap(),
            Threshold::new(7, 3).unwrap()
        );
        assert_eq!(
            ".5".parse::<Threshold>().unwrap(),
            Threshold::new(1, 2).unwrap()
        );
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "-1", "1e3", "a", "1/0", "1.2.3", "."] {
            assert!(s.parse::<Threshold>().is_err(), "{s}");
        }
    }

    #[test]
    fn quota_is_floor_of_half_kt() {
        let t = Threshold::new(3, 2).unwrap();
        assert_eq!(t.edge_quota(5), 3);
        assert_eq!(Threshold::integer(1).edge_quota(7), 3);
        assert_eq!(Threshold::ZERO.edge_quota(100), 0);
        assert!(t.admits(5, 3));
        assert!(!t.admits(5, 4));
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3", "1/4", "7/3"] {
            let t: Threshold = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
    }
}
