//! Exact rational arithmetic for relative-frequency thresholds.
//!
//! Thresholds are carried as integer fractions end-to-end so that the
//! boundary case `X_gp == threshold` is decided exactly instead of through
//! float rounding.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative rational number in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Config("ratio denominator must be nonzero".into()));
        }
        let g = gcd(num.max(1), den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// True when the ratio lies in (0, 1], the valid range for a
    /// relative-frequency threshold.
    pub fn in_unit_interval(&self) -> bool {
        self.num >= 1 && self.num <= self.den
    }

    /// Compact file-name-safe form, e.g. `1-10` for 1/10.
    pub fn slug(&self) -> String {
        format!("{}-{}", self.num, self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `a/b` fractions, decimals (`0.05`, `.5`) and integers (`1`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse '{s}' as a fraction"));
        if let Some((n, d)) = s.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| bad())?;
            let den: u64 = d.trim().parse().map_err(|_| bad())?;
            return Ratio::new(num, den);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let whole: u64 = if whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            if frac.len() > 18 {
                return Err(Error::Config(format!("'{s}' has too many decimal digits")));
            }
            let den = 10u64.pow(frac.len() as u32);
            let frac_num: u64 = frac.parse().map_err(|_| bad())?;
            let num = whole
                .checked_mul(den)
                .and_then(|w| w.checked_add(frac_num))
                .ok_or_else(bad)?;
            return Ratio::new(num, den);
        }
        let num: u64 = s.parse().map_err(|_| bad())?;
        Ratio::new(num, 1)
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Exact test for `count / total < threshold` via integer cross
/// multiplication. `total` must be nonzero.
pub fn frequency_below(count: u64, total: u64, threshold: Ratio) -> bool {
    debug_assert!(total > 0);
    (count as u128) * (threshold.den as u128) < (threshold.num as u128) * (total as u128)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
