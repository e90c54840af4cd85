//! Plain-text `key = value` configuration, layered under command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// Environment variables that supply defaults below the config file.
pub const ENV_TOL: &str = "CMLAX_TOL";
pub const ENV_SAMPLES: &str = "CMLAX_SAMPLES";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value, got '{raw}'", no + 1))?;
            let key = k.trim().replace('_', "-").to_ascii_lowercase();
            if key.is_empty() {
                return Err(format!("line {}: empty key", no + 1));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        ConfigFile::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

/// A value that can be read from a config line. `Option<T>` reads as `Some`.
pub trait FromConfig: Sized {
    fn from_config(s: &str) -> Result<Self, String>;
}

macro_rules! from_config {
    ($($t:ty),*) => {$(
        impl FromConfig for $t {
            fn from_config(s: &str) -> Result<Self, String> {
                s.parse().map_err(|e: <$t as std::str::FromStr>::Err| e.to_string())
            }
        }
        impl FromConfig for Option<$t> {
            fn from_config(s: &str) -> Result<Self, String> {
                <$t>::from_config(s).map(Some)
            }
        }
    )*};
}

from_config!(u64, usize, f64);

/// flag, then config file, then environment, then `default`.
pub fn layered<T: FromConfig>(
    flag: Option<T>,
    file: &ConfigFile,
    key: &str,
    env: Option<&str>,
    default: T,
) -> Result<T, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    let parse =
        |src: &str, s: &str| T::from_config(s).map_err(|e| format!("{src} {key} = '{s}': {e}"));
    if let Some(s) = file.get(key) {
        return parse("config", s);
    }
    if let Some(var) = env {
        if let Ok(s) = std::env::var(var) {
            return parse(var, &s);
        }
    }
    Ok(default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let c = ConfigFile::parse("# run\nseed = 7\nt_end=2.5 # short\n\n").unwrap();
        assert_eq!(c.get("seed"), Some("7"));
        assert_eq!(c.get("t-end"), Some("2.5"));
        assert!(ConfigFile::parse("seed 7").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let c = ConfigFile::parse("seed = 7").unwrap();
        assert_eq!(layered(Some(3u64), &c, "seed", None, 0).unwrap(), 3);
        assert_eq!(layered(None, &c, "seed", None, 0u64).unwrap(), 7);
        assert_eq!(layered(None, &c, "samples", None, 50usize).unwrap(), 50);
        assert!(layered::<u64>(
            None,
            &ConfigFile::parse("seed = x").unwrap(),
            "seed",
            None,
            0
        )
        .is_err());
    }
}
