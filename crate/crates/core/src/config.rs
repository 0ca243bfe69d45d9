use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric limits shared by every decision procedure.
///
/// Any operation that would exceed a limit fails with
/// [`Error::ResourceCap`] or answers `Unknown` instead of approximating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Maximum number of residues or tree nodes a single operation may visit.
    pub residue_cap: u64,
    /// Largest bit length accepted by the deterministic primality test.
    pub primality_bits: u32,
    /// Primes up to this bound are scanned by tail analyses.
    pub prime_scan_bound: u64,
    /// Maximum polynomial degree accepted anywhere.
    pub degree_bound: usize,
    /// Primes up to this bound are tried for a mod-p irreducibility witness.
    pub irreducibility_prime_bound: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            residue_cap: 1 << 20,
            primality_bits: 64,
            prime_scan_bound: 10_000,
            degree_bound: 64,
            irreducibility_prime_bound: 200,
        }
    }
}

impl Config {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Invalid(format!("bad value {value:?} for config key {key}"));
        match key.trim() {
            "residue_cap" => self.residue_cap = value.trim().parse().map_err(|_| bad())?,
            "primality_bits" => {
                let bits: u32 = value.trim().parse().map_err(|_| bad())?;
                if bits == 0 || bits > 64 {
                    return Err(Error::Invalid(
                        "primality_bits must lie in 1..=64 (deterministic test)".into(),
                    ));
                }
                self.primality_bits = bits;
            }
            "prime_scan_bound" => self.prime_scan_bound = value.trim().parse().map_err(|_| bad())?,
            "degree_bound" => self.degree_bound = value.trim().parse().map_err(|_| bad())?,
            "irreducibility_prime_bound" => {
                self.irreducibility_prime_bound = value.trim().parse().map_err(|_| bad())?
            }
            other => return Err(Error::Invalid(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parses a `key=value` file body. Blank lines and `#` comments are skipped.
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("config line without '=': {line:?}")))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}
