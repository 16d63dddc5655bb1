use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration caps. Every exhaustive search checks its cap before it starts
/// and fails with [`Error::Budget`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest group order any constructor will build.
    pub order_cap: u64,
    /// Largest configuration space `|G|^n` the oracle enumerates.
    pub config_cap: u64,
    /// Largest number of search nodes visited while enumerating homomorphisms.
    pub hom_cap: u64,
    /// Largest number of word evaluations or operator applications.
    pub op_cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { order_cap: 10080, config_cap: 20_000_000, hom_cap: 100_000_000, op_cap: 10_000_000 }
    }
}

impl Budget {
    /// Parses an override string. A bare integer sets the three enumeration
    /// caps at once; otherwise `key=value` pairs separated by commas, with keys
    /// `order`, `config`, `hom` and `op`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if let Ok(v) = spec.parse::<u64>() {
            if v == 0 {
                return Err(Error::InvalidParams("budget caps must be positive".into()));
            }
            self.config_cap = v;
            self.hom_cap = v;
            self.op_cap = v;
            return Ok(self);
        }
        for part in spec.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidParams(format!("budget entry {part:?} is not key=value")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParams(format!("budget value {value:?} is not an integer")))?;
            if value == 0 {
                return Err(Error::InvalidParams("budget caps must be positive".into()));
            }
            match key.trim() {
                "order" => self.order_cap = value,
                "config" => self.config_cap = value,
                "hom" => self.hom_cap = value,
                "op" => self.op_cap = value,
                other => return Err(Error::InvalidParams(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }

    pub(crate) fn check(what: &'static str, needed: u128, cap: u64) -> Result<()> {
        if needed > cap as u128 {
            Err(Error::Budget { what, needed, cap })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn pow_sat(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let b = Budget::default().with_overrides("123").unwrap();
        assert_eq!((b.config_cap, b.hom_cap, b.op_cap), (123, 123, 123));
        let b = Budget::default().with_overrides("order=60, op=5").unwrap();
        assert_eq!(b.order_cap, 60);
        assert_eq!(b.op_cap, 5);
        assert!(Budget::default().with_overrides("bogus=1").is_err());
        assert!(Budget::default().with_overrides("0").is_err());
    }
}
