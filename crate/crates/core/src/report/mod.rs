//! Run configuration, report documents, the catalog suite and CSV exports.

pub mod config;
pub mod export;
pub mod json;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::invariants::{
    band_label, base_point, global_obstruction, local_obstruction, InvariantReport, InvariantValue, Verdict,
};
use crate::probes::validation_samples;
use crate::symcore::validate::{validate_assumptions, ValidationReport, DEFAULT_TOL};

pub use config::{check_resolution, Bands, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Random samples added to the probe vertices for validation.
pub const VALIDATION_EXTRA: usize = 200;

/// Smallest resolution the suite accepts.
pub const SUITE_MIN_N: usize = 16;

/// Validation and verdicts for one symbol.
#[derive(Debug, Clone)]
pub struct EntryRun {
    pub symbol_id: String,
    pub m: usize,
    pub validation: ValidationReport,
    /// Local and global verdict per band, in band order. Empty when
    /// validation failed.
    pub verdicts: Vec<(Verdict, Verdict)>,
    pub expected: Option<(Vec<bool>, Vec<bool>)>,
    /// Seconds.
    pub wall_time: f64,
}

/// Validates `entry` on probe vertices plus random samples, then computes
/// both verdicts for each band in `bands`. Verdicts are skipped when
/// validation fails.
pub fn run_entry(entry: &CatalogEntry, bands: &[usize], n: usize, seed: u64) -> Result<EntryRun> {
    let start = Instant::now();
    let f = &entry.symbol;
    let samples = validation_samples(f.geometry(), n, VALIDATION_EXTRA, seed)?;
    let validation = validate_assumptions(f, &samples, DEFAULT_TOL);
    let mut verdicts = Vec::new();
    if validation.passed {
        let x0 = base_point(f.geometry());
        for &b in bands {
            verdicts.push((local_obstruction(f, &x0, b, n)?, global_obstruction(f, b, n)?));
        }
    }
    Ok(EntryRun {
        symbol_id: entry.id().to_string(),
        m: f.m(),
        validation,
        verdicts,
        expected: Some((entry.expected_local.clone(), entry.expected_global.clone())),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn value_json(v: &InvariantValue) -> Value {
    match *v {
        InvariantValue::Chern(c) => json!(c),
        InvariantValue::Berry(b) => json!(b),
        InvariantValue::Torsion(t) => json!(t),
    }
}

fn evidence_json(r: &InvariantReport, timing: bool) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(r.kind.name()));
    m.insert("probe".into(), json!(r.probe_label));
    m.insert("value".into(), value_json(&r.value));
    m.insert("residual".into(), json!(r.residual));
    m.insert("max_plaquette_phase".into(), json!(r.max_plaquette_phase));
    m.insert("resolution".into(), json!(r.resolution));
    m.insert("admissible".into(), json!(r.admissible));
    m.insert("trusted".into(), json!(r.trusted()));
    let details: Map<String, Value> = r.details.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    m.insert("details".into(), Value::Object(details));
    if timing {
        m.insert("wall_time".into(), json!(r.wall_time));
    }
    Value::Object(m)
}

fn verdict_json(symbol: &str, m: usize, v: &Verdict, expected: Option<bool>, timing: bool) -> Value {
    let mut o = Map::new();
    o.insert("symbol".into(), json!(symbol));
    o.insert("question".into(), json!(v.question.name()));
    o.insert("band".into(), json!(v.band));
    o.insert("band_label".into(), json!(band_label(m, v.band)));
    o.insert("obstructed".into(), json!(v.obstructed));
    o.insert("branch".into(), json!(v.theorem_branch));
    if let Some(e) = expected {
        o.insert("expected".into(), json!(e));
    }
    o.insert(
        "evidence".into(),
        Value::Array(v.evidence.iter().map(|r| evidence_json(r, timing)).collect()),
    );
    Value::Object(o)
}

pub fn validation_json(r: &ValidationReport) -> Value {
    json!({
        "symbol": r.symbol_id,
        "samples": r.samples,
        "max_hermitian_defect": r.max_hermitian_defect,
        "max_homogeneity_defect": r.max_homogeneity_defect,
        "min_rel_gap": r.min_rel_gap,
        "tol": r.tol,
        "gap_tol": r.gap_tol,
        "passed": r.passed,
        "failures": r.failures,
    })
}

/// Everything one command produced.
#[derive(Debug, Clone)]
pub struct ReportDocument {
    pub version: String,
    pub config: RunConfig,
    pub runs: Vec<EntryRun>,
    /// Seconds.
    pub total_time: f64,
}

impl ReportDocument {
    pub fn to_json(&self) -> Value {
        let timing = self.config.timing;
        let validation: Map<String, Value> = self
            .runs
            .iter()
            .map(|r| (r.symbol_id.clone(), validation_json(&r.validation)))
            .collect();
        let mut verdicts = Vec::new();
        for r in &self.runs {
            for (l, g) in &r.verdicts {
                let local = r.expected.as_ref().and_then(|e| e.0.get(l.band).copied());
                let global = r.expected.as_ref().and_then(|e| e.1.get(g.band).copied());
                verdicts.push(verdict_json(&r.symbol_id, r.m, l, local, timing));
                verdicts.push(verdict_json(&r.symbol_id, r.m, g, global, timing));
            }
        }
        let timing_json = if timing {
            let per: Map<String, Value> = self.runs.iter().map(|r| (r.symbol_id.clone(), json!(r.wall_time))).collect();
            json!({ "total": self.total_time, "entries": per })
        } else {
            json!({})
        };
        json!({
            "version": self.version,
            "config": self.config.to_json(),
            "validation": validation,
            "verdicts": verdicts,
            "timing": timing_json,
        })
    }

    pub fn to_json_string(&self) -> String {
        json::to_string(&self.to_json())
    }
}

/// Verdicts for a single catalog entry as selected by `cfg`.
pub fn run_verdict(entry: &CatalogEntry, cfg: &RunConfig) -> Result<ReportDocument> {
    cfg.check()?;
    let start = Instant::now();
    let bands = cfg.bands.resolve(entry.symbol.m())?;
    let run = run_entry(entry, &bands, cfg.n, cfg.seed)?;
    Ok(ReportDocument {
        version: VERSION.to_string(),
        config: cfg.clone(),
        runs: vec![run],
        total_time: start.elapsed().as_secs_f64(),
    })
}

/// One table row of the suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteRow {
    pub symbol_id: String,
    pub band: usize,
    pub band_label: String,
    /// `None` when validation failed.
    pub local: Option<bool>,
    pub global: Option<bool>,
    pub expected_local: bool,
    pub expected_global: bool,
}

impl SuiteRow {
    pub fn matches(&self) -> bool {
        self.local == Some(self.expected_local) && self.global == Some(self.expected_global)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub document: ReportDocument,
    pub rows: Vec<SuiteRow>,
}

fn word(o: Option<bool>) -> &'static str {
    match o {
        Some(true) => "obstructed",
        Some(false) => "unobstructed",
        None => "invalid",
    }
}

impl SuiteOutcome {
    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.matches()).count()
    }

    /// 0 when every row matches its expectation, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.mismatches() == 0 {
            0
        } else {
            1
        }
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} {:>4}  {:<12} {:<12} {:<25} status",
            "entry", "band", "local", "global", "expected (local/global)"
        );
        for r in &self.rows {
            let expected = format!("{}/{}", word(Some(r.expected_local)), word(Some(r.expected_global)));
            let _ = writeln!(
                s,
                "{:<14} {:>4}  {:<12} {:<12} {:<25} {}",
                r.symbol_id,
                r.band_label,
                word(r.local),
                word(r.global),
                expected,
                if r.matches() { "ok" } else { "MISMATCH" }
            );
        }
        s
    }
}

/// Runs every band of every entry at `cfg.n` and compares with the
/// expected verdicts.
pub fn run_suite(entries: &[CatalogEntry], cfg: &RunConfig) -> Result<SuiteOutcome> {
    cfg.check()?;
    if cfg.n < SUITE_MIN_N {
        return Err(Error::Config(format!("suite needs n >= {SUITE_MIN_N}, got {}", cfg.n)));
    }
    let start = Instant::now();
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for e in entries {
        let m = e.symbol.m();
        let bands: Vec<usize> = (0..m).collect();
        let run = run_entry(e, &bands, cfg.n, cfg.seed)?;
        let by_band: BTreeMap<usize, &(Verdict, Verdict)> = run.verdicts.iter().map(|v| (v.0.band, v)).collect();
        for b in bands {
            let v = by_band.get(&b);
            rows.push(SuiteRow {
                symbol_id: e.id().to_string(),
                band: b,
                band_label: band_label(m, b),
                local: v.map(|v| v.0.obstructed),
                global: v.map(|v| v.1.obstructed),
                expected_local: e.expected_local[b],
                expected_global: e.expected_global[b],
            });
        }
        runs.push(run);
    }
    let document = ReportDocument {
        version: VERSION.to_string(),
        config: cfg.clone(),
        runs,
        total_time: start.elapsed().as_secs_f64(),
    };
    Ok(SuiteOutcome { document, rows })
}
