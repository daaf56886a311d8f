//! Flat `key = value` configuration files.
//!
//! Lines are `key = value`; `#` starts a comment. Integer lists accept
//! comma-separated items and inclusive ranges (`2..20`, `2..20:2`). Lists of
//! structured items (distributions) are separated by `;`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, (usize, String)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::malformed(i + 1, format!("expected `key = value`, got `{line}`")));
            };
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::malformed(i + 1, "empty key"));
            }
            if entries.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(Error::malformed(i + 1, format!("duplicate key `{key}`")));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Display) {
        self.entries.insert(key.to_string(), (0, value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Typed access to a [`Config`] that remembers every key read and its
/// effective value, so unknown keys can be rejected and the resolved
/// settings recorded.
pub struct Reader<'a> {
    cfg: &'a Config,
    resolved: RefCell<Vec<(String, String)>>,
}

impl<'a> Reader<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Reader {
            cfg,
            resolved: RefCell::new(Vec::new()),
        }
    }

    fn raw(&self, key: &str) -> Option<(usize, &'a str)> {
        self.cfg.entries.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn record(&self, key: &str, value: String) {
        self.resolved.borrow_mut().push((key.to_string(), value));
    }

    fn bad(line: usize, key: &str, msg: impl Display) -> Error {
        Error::malformed(line, format!("`{key}`: {msg}"))
    }

    pub fn scalar<T: FromStr + Display>(&self, key: &str, default: T) -> Result<T> {
        let value = match self.raw(key) {
            None => default,
            Some((line, s)) => s
                .parse::<T>()
                .map_err(|_| Self::bad(line, key, format!("cannot parse `{s}`")))?,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn bool(&self, key: &str, default: bool) -> Result<bool> {
        let value = match self.raw(key) {
            None => default,
            Some((line, s)) => match s.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "on" => true,
                "false" | "no" | "0" | "off" => false,
                _ => return Err(Self::bad(line, key, format!("`{s}` is not a boolean"))),
            },
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn usize_list(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        let value = match self.raw(key) {
            None => default.to_vec(),
            Some((line, s)) => parse_usize_list(s).map_err(|e| Self::bad(line, key, e))?,
        };
        if value.is_empty() {
            return Err(Error::domain(format!("`{key}` must not be empty")));
        }
        self.record(key, join(&value, ","));
        Ok(value)
    }

    pub fn f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let value = match self.raw(key) {
            None => default.to_vec(),
            Some((line, s)) => s
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{}` is not a number", t.trim())))
                .collect::<std::result::Result<Vec<f64>, String>>()
                .map_err(|e| Self::bad(line, key, e))?,
        };
        if value.is_empty() {
            return Err(Error::domain(format!("`{key}` must not be empty")));
        }
        self.record(key, join(&value, ","));
        Ok(value)
    }

    /// `;`-separated items parsed with `FromStr`.
    pub fn item_list<T: FromStr<Err = Error> + Display + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>> {
        let value = match self.raw(key) {
            None => default.to_vec(),
            Some((line, s)) => s
                .split(';')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<T>().map_err(|e| Self::bad(line, key, e)))
                .collect::<Result<Vec<T>>>()?,
        };
        if value.is_empty() {
            return Err(Error::domain(format!("`{key}` must not be empty")));
        }
        self.record(key, join(&value, ";"));
        Ok(value)
    }

    /// Rejects keys that were never read and returns the resolved settings
    /// in key order.
    pub fn finish(self) -> Result<Vec<(String, String)>> {
        let mut resolved = self.resolved.into_inner();
        for (key, (line, _)) in &self.cfg.entries {
            if !resolved.iter().any(|(k, _)| k == key) {
                return Err(Error::malformed(*line, format!("unknown key `{key}`")));
            }
        }
        resolved.sort();
        Ok(resolved)
    }
}

fn join<T: Display>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Parses `"2,3,5..9,10..20:5"` into an ordered list.
pub fn parse_usize_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((h, st)) => (h, st),
                None => (rest, "1"),
            };
            let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range `{part}`"));
            let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
            if step == 0 || lo > hi {
                return Err(format!("bad range `{part}`"));
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse::<usize>().map_err(|_| format!("`{part}` is not a count"))?);
        }
    }
    Ok(out)
}
