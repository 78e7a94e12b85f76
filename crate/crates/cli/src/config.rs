//! KEY=VALUE defaults file and flag resolution.
//!
//! A config file supplies defaults for numeric options; explicit flags
//! always win. Lines are `key = value` (spaces optional), `#` starts a
//! comment.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Parsed defaults from a config file (empty when no file was given).
#[derive(Debug, Default)]
pub struct Defaults {
    values: HashMap<String, String>,
}

impl Defaults {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "config {}:{}: expected KEY=VALUE, got {raw:?}",
                    path.display(),
                    lineno + 1
                );
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Parsed value for `key`, if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse::<T>() {
                Ok(v) => Ok(Some(v)),
                Err(e) => bail!("config key {key}={raw:?}: {e}"),
            },
        }
    }

    /// Flag value if given, else the config default, else `fallback`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, fallback: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(fallback),
        })
    }

    /// Flag value if given, else the config default, else an error naming
    /// the missing option.
    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => match self.get(key)? {
                Some(v) => Ok(v),
                None => bail!("missing --{key} (no flag and no config default)"),
            },
        }
    }
}

/// Parse an inclusive `lo:hi:step` grid of variances.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be lo:hi:step, got {text:?}");
    }
    let lo: f64 = parts[0].parse().context("grid lo")?;
    let hi: f64 = parts[1].parse().context("grid hi")?;
    let step: f64 = parts[2].parse().context("grid step")?;
    if !(lo > 0.0) || !(step > 0.0) || hi < lo {
        bail!("grid needs 0 < lo <= hi and step > 0, got {text:?}");
    }
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let v = lo + step * k as f64;
        if v > hi * (1.0 + 1e-12) + step * 1e-9 {
            break;
        }
        out.push(v);
        k += 1;
    }
    Ok(out)
}

/// Parse a comma-separated coordinate list.
pub fn parse_coords(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coordinate {p:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        let g = parse_grid("0.05:1.0:0.05").unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[0] - 0.05).abs() < 1e-15);
        assert!((g[19] - 1.0).abs() < 1e-12);
        assert_eq!(parse_grid("0.25:0.25:0.1").unwrap(), vec![0.25]);
        assert!(parse_grid("0:1:0.1").is_err());
        assert!(parse_grid("1:0.5:0.1").is_err());
        assert!(parse_grid("0.1:1".to_string().as_str()).is_err());
    }

    #[test]
    fn coords_parse() {
        assert_eq!(parse_coords("1, -2.5,3e-1").unwrap(), vec![1.0, -2.5, 0.3]);
        assert!(parse_coords("1,two").is_err());
    }
}
