//! Run configuration as flat `key = value` text.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::catalog::ParamOverrides;
use crate::error::{Error, Result};

pub const DEFAULT_N: usize = 16;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bands {
    All,
    List(Vec<usize>),
}

impl Bands {
    /// Concrete band indices for a symbol with `m` bands.
    pub fn resolve(&self, m: usize) -> Result<Vec<usize>> {
        match self {
            Bands::All => Ok((0..m).collect()),
            Bands::List(v) => {
                if let Some(b) = v.iter().find(|&&b| b >= m) {
                    return Err(Error::Config(format!("band {b} out of range (m = {m})")));
                }
                Ok(v.clone())
            }
        }
    }

    pub fn parse(s: &str) -> Result<Bands> {
        let s = s.trim();
        if s == "all" {
            return Ok(Bands::All);
        }
        let list = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("bad band '{t}' (expected an index, a list, or 'all')")))
            })
            .collect::<Result<Vec<_>>>()?;
        if list.is_empty() {
            return Err(Error::Config("empty band list".into()));
        }
        Ok(Bands::List(list))
    }
}

impl std::fmt::Display for Bands {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bands::All => f.write_str("all"),
            Bands::List(v) => {
                let s: Vec<String> = v.iter().map(|b| b.to_string()).collect();
                f.write_str(&s.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<String>,
    pub symbol: Option<String>,
    pub overrides: ParamOverrides,
    pub bands: Bands,
    pub n: usize,
    pub seed: u64,
    pub out: Option<String>,
    /// Record wall times in reports. Off by default so that reports are
    /// reproducible byte for byte.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            symbol: None,
            overrides: ParamOverrides::default(),
            bands: Bands::All,
            n: DEFAULT_N,
            seed: DEFAULT_SEED,
            out: None,
            timing: false,
        }
    }
}

/// Resolutions are power-of-two multiples of 8.
pub fn check_resolution(n: usize) -> Result<()> {
    if n >= 8 && n.is_multiple_of(8) && (n / 8).is_power_of_two() {
        Ok(())
    } else {
        Err(Error::Config(format!("resolution {n} is not a power-of-two multiple of 8")))
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Config(format!("'{key}' expects a number, got '{v}'")))
}

fn check_text(key: &str, v: &str) -> Result<()> {
    if v.is_empty() || v.contains(['\n', '\r']) || v.trim() != v {
        return Err(Error::Config(format!("'{key}' needs a non-empty single-line value")));
    }
    Ok(())
}

impl RunConfig {
    /// Parses `key = value` lines. Blank lines and lines starting with `#`
    /// are ignored; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        let mut seen = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if seen.insert(k.to_string(), ()).is_some() {
                return Err(Error::Config(format!("line {}: repeated key '{k}'", lineno + 1)));
            }
            c.set(k, v)?;
        }
        c.check()?;
        Ok(c)
    }

    /// Applies one key.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let o = &mut self.overrides;
        match key {
            "command" => {
                check_text(key, v)?;
                self.command = Some(v.to_string());
            }
            "symbol" => {
                check_text(key, v)?;
                self.symbol = Some(v.to_string());
            }
            "out" => {
                check_text(key, v)?;
                self.out = Some(v.to_string());
            }
            "band" => self.bands = Bands::parse(v)?,
            "n" => {
                self.n = v
                    .parse()
                    .map_err(|_| Error::Config(format!("'n' expects an integer, got '{v}'")))?
            }
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| Error::Config(format!("'seed' expects an integer, got '{v}'")))?
            }
            "timing" => {
                self.timing = v
                    .parse()
                    .map_err(|_| Error::Config(format!("'timing' expects true or false, got '{v}'")))?
            }
            "lambda" => o.lambda = Some(parse_f64(key, v)?),
            "mu" => o.mu = Some(parse_f64(key, v)?),
            "c_plus" => o.c_plus = Some(parse_f64(key, v)?),
            "c_minus" => o.c_minus = Some(parse_f64(key, v)?),
            "s" => o.s = Some(parse_f64(key, v)?),
            "conformal" => o.conformal = Some(parse_f64(key, v)?),
            "radius" => o.radius = Some(parse_f64(key, v)?),
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn check(&self) -> Result<()> {
        check_resolution(self.n)
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let o = &self.overrides;
        let mut out = vec![("band", self.bands.to_string())];
        let floats = [
            ("c_minus", o.c_minus),
            ("c_plus", o.c_plus),
            ("conformal", o.conformal),
            ("lambda", o.lambda),
            ("mu", o.mu),
            ("radius", o.radius),
            ("s", o.s),
        ];
        for (k, v) in floats {
            if let Some(x) = v {
                out.push((k, x.to_string()));
            }
        }
        if let Some(c) = &self.command {
            out.push(("command", c.clone()));
        }
        out.push(("n", self.n.to_string()));
        if let Some(p) = &self.out {
            out.push(("out", p.clone()));
        }
        out.push(("seed", self.seed.to_string()));
        if let Some(s) = &self.symbol {
            out.push(("symbol", s.clone()));
        }
        out.push(("timing", self.timing.to_string()));
        out.sort_by_key(|(k, _)| *k);
        out
    }

    /// One `key = value` line per set key, sorted by key.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// Config echo for reports. The output path is left out so that the
    /// same run written to two places gives identical files.
    pub fn to_json(&self) -> Value {
        let o = &self.overrides;
        let mut m = serde_json::Map::new();
        m.insert("band".into(), json!(self.bands.to_string()));
        m.insert("n".into(), json!(self.n));
        m.insert("seed".into(), json!(self.seed));
        m.insert("timing".into(), json!(self.timing));
        for (k, v) in [("command", &self.command), ("symbol", &self.symbol)] {
            if let Some(v) = v {
                m.insert(k.into(), json!(v));
            }
        }
        let floats = [
            ("c_minus", o.c_minus),
            ("c_plus", o.c_plus),
            ("conformal", o.conformal),
            ("lambda", o.lambda),
            ("mu", o.mu),
            ("radius", o.radius),
            ("s", o.s),
        ];
        for (k, v) in floats {
            if let Some(x) = v {
                m.insert(k.into(), json!(x));
            }
        }
        Value::Object(m)
    }
}
