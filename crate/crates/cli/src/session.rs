//! Flat `key = value` session files.
//!
//! ```text
//! # comments run to the end of the line
//! field     = Q
//! scheme    = tensor(1)
//! slots     = (0,0)
//! order     = paper_lex
//! gen       = x[1,1]^2
//! gen       = @3 x[1,1]*x[1,3]
//! ```
//!
//! `gen` may repeat; every other key appears at most once. A generator may
//! be prefixed with `@n` to fix its width.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use oigb_core::Slot;

use crate::error::{CliError, Result};

pub const KEYS: [&str; 19] = [
    "field",
    "scheme",
    "slots",
    "order",
    "flavor",
    "max_width",
    "lookahead",
    "widths",
    "max_p",
    "target",
    "a",
    "width",
    "max_degree",
    "table",
    "p",
    "min_consecutive",
    "q",
    "strict",
    "groebner",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenLine {
    pub width: Option<usize>,
    pub text: String,
}

impl FromStr for GenLine {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(rest) = s.strip_prefix('@') else {
            return Ok(GenLine {
                width: None,
                text: s.to_string(),
            });
        };
        let split = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let width = rest[..split]
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid width prefix in `{s}`")))?;
        Ok(GenLine {
            width: Some(width),
            text: rest[split..].trim().to_string(),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Session {
    values: BTreeMap<String, String>,
    pub gens: Vec<GenLine>,
}

impl Session {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Session::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Session::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CliError::Session { line: k + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "gen" {
                s.gens.push(value.parse().map_err(|e: CliError| bad(e.to_string()))?);
                continue;
            }
            if !KEYS.contains(&key) {
                return Err(bad(format!("unknown key `{key}`")));
            }
            if s.values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(bad(format!("duplicate key `{key}`")));
            }
        }
        Ok(s)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else the session value, else `default`.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => raw
                .parse()
                .map_err(|e| CliError::Usage(format!("invalid `{key}` in session: {e}"))),
            None => Ok(default),
        }
    }

    pub fn resolve_opt<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.get(key)
            .map(|raw| {
                raw.parse()
                    .map_err(|e| CliError::Usage(format!("invalid `{key}` in session: {e}")))
            })
            .transpose()
    }
}

/// An inclusive range of non-negative integers: `3`, `1..5`, `1..=5` or
/// `2,3,5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

impl FromStr for IntList {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Usage(format!("invalid range `{s}` (expected `a..b`, `a..=b` or `a,b,c`)"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let t = s.trim();
        if let Some((lo, hi)) = t.split_once("..") {
            let (lo, hi) = (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?);
            if lo > hi {
                return Err(bad());
            }
            return Ok(IntList((lo..=hi).collect()));
        }
        let mut out: Vec<usize> = t.split(',').map(num).collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(IntList(out))
    }
}

/// Summands of a free module: `(d,shift),(d,shift),…`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotList(pub Vec<Slot>);

impl FromStr for SlotList {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Usage(format!("invalid slots `{s}` (expected `(d,shift),…`)"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let slots = inner
            .split("),(")
            .map(|pair| {
                let (d, shift) = pair.split_once(',').ok_or_else(bad)?;
                Ok(Slot {
                    d: d.parse().map_err(|_| bad())?,
                    shift: shift.parse().map_err(|_| bad())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SlotList(slots))
    }
}

impl std::fmt::Display for SlotList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| format!("({},{})", s.d, s.shift)).collect();
        f.write_str(&parts.join(","))
    }
}
