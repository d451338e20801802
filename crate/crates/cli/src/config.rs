use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Values from an optional `key = value` configuration file. Flags given on the
/// command line take precedence; keys use the long flag names (`r-min`, `seed`, ...).
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", n + 1))
            })?;
            values.insert(key.trim().replace('_', "-"), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| CliError::Usage(format!("config key {key}: invalid value {v:?}")))
            })
            .transpose()
    }

    /// `flag` if given, else the config value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    /// Like [`resolve`](Self::resolve) for values without a default.
    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => self
                .get(key)?
                .ok_or_else(|| CliError::Usage(format!("missing required value --{key}"))),
        }
    }
}

/// Inclusive range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let range = Range {
            start: num(start)?,
            stop: num(stop)?,
            step: num(step)?,
        };
        if !(range.step > 0.0) || !(range.stop >= range.start) || !range.start.is_finite() || !range.stop.is_finite() {
            return Err(format!("range {s:?} is empty or has a non-positive step"));
        }
        Ok(range)
    }
}

impl std::fmt::Display for Range {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive() {
        let r: Range = "0:2:0.05".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 41);
        assert!((p[40] - 2.0).abs() < 1e-12);
        assert!("1:0:0.1".parse::<Range>().is_err());
        assert!("0:1:0".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
    }

    #[test]
    fn config_lines() {
        let c = ConfigFile::parse("# comment\nr_min = 0.5\nseed=7\n\n").unwrap();
        assert_eq!(c.get::<f64>("r-min").unwrap(), Some(0.5));
        assert_eq!(c.resolve(Some(3u64), "seed", 0).unwrap(), 3);
        assert_eq!(c.resolve(None, "seed", 0u64).unwrap(), 7);
        assert!(c.get::<u64>("r-min").is_err());
        assert!(ConfigFile::parse("no equals sign").is_err());
    }
}
