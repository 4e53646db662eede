//! `obstrukt`: obstruction verdicts for the built-in symbol catalog.
//!
//! Exit codes: 0 on a completed run, 1 when a suite row mismatches its
//! expectation, validation fails in `validate`, or a gauge export is
//! refused, 2 on invalid configuration, 3 on numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use obstrukt_core::catalog::{self, parameter_names, CatalogEntry, IDS};
use obstrukt_core::invariants::{band_label, InvariantValue};
use obstrukt_core::report::export::{curvature_csv, gauge_csv, mesh_csv, CsvFile, ExportKind, GaugeExport};
use obstrukt_core::report::{self, json, validation_json, Bands, ReportDocument, RunConfig, VERSION};
use obstrukt_core::Error;

#[derive(Parser)]
#[command(name = "obstrukt", version, about = "Topological obstructions to smooth eigenvector fields of matrix symbols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries.
    List,
    /// Check hermiticity, homogeneity and the spectral gap of an entry.
    Validate(RunArgs),
    /// Local and global verdicts for an entry.
    Verdict(RunArgs),
    /// Every band of every entry against the expected verdicts.
    Suite(RunArgs),
    /// Write CSV files for an entry.
    Export {
        #[command(flatten)]
        run: RunArgs,
        /// mesh, curvature or gauge.
        #[arg(long)]
        kind: String,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// Catalog id.
    id: Option<String>,
    /// Band index, comma-separated list, or `all`.
    #[arg(long)]
    band: Option<String>,
    /// Resolution (a power-of-two multiple of 8).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long = "c-plus", allow_hyphen_values = true)]
    c_plus: Option<f64>,
    #[arg(long = "c-minus", allow_hyphen_values = true)]
    c_minus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Conformal amplitude of the elasticity metric.
    #[arg(long, allow_hyphen_values = true)]
    conformal: Option<f64>,
    /// Sphere radius for np-sphere.
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (JSON) or, for `export`, output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` file; flags win over its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall times in the report.
    #[arg(long)]
    timing: bool,
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_numerical() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl RunArgs {
    fn to_config(&self, command: &str) -> Result<RunConfig, Failure> {
        let mut c = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| config_error(format!("cannot read {}: {e}", p.display())))?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        c.command = Some(command.to_string());
        if let Some(id) = &self.id {
            c.symbol = Some(id.clone());
        }
        if let Some(b) = &self.band {
            c.bands = Bands::parse(b)?;
        }
        if let Some(n) = self.n {
            c.n = n;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(p) = &self.out {
            c.out = Some(p.display().to_string());
        }
        if self.timing {
            c.timing = true;
        }
        let o = &mut c.overrides;
        let flags = [
            (&mut o.lambda, self.lambda),
            (&mut o.mu, self.mu),
            (&mut o.c_plus, self.c_plus),
            (&mut o.c_minus, self.c_minus),
            (&mut o.s, self.s),
            (&mut o.conformal, self.conformal),
            (&mut o.radius, self.radius),
        ];
        for (slot, v) in flags {
            if v.is_some() {
                *slot = v;
            }
        }
        c.check()?;
        Ok(c)
    }
}

fn entry(cfg: &RunConfig) -> Result<CatalogEntry, Failure> {
    let id = cfg
        .symbol
        .as_deref()
        .ok_or_else(|| config_error(format!("missing catalog id (one of {})", IDS.join(", "))))?;
    Ok(catalog::build(id, &cfg.overrides)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| config_error(format!("cannot write {}: {e}", path.display())))
}

/// Writes the report to `--out`, or to stdout without it.
fn emit(doc: &ReportDocument) -> Result<(), Failure> {
    let text = doc.to_json_string();
    match &doc.config.out {
        Some(p) => write_file(Path::new(p), &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn list() -> Outcome {
    println!("{:<14} {:>2} {:>2} {:>2}  {:<3} params", "id", "m", "d", "s", "geo");
    for e in catalog::all() {
        let f = &e.symbol;
        let params: Vec<String> = parameter_names(e.id())
            .iter()
            .map(|k| match f.params().get(*k) {
                Some(v) => format!("{k}={v}"),
                None => k.to_string(),
            })
            .collect();
        println!(
            "{:<14} {:>2} {:>2} {:>2}  {:<3} {}",
            e.id(),
            f.m(),
            f.d(),
            f.s(),
            f.geometry().name(),
            if params.is_empty() { "-".to_string() } else { params.join(" ") }
        );
    }
    Ok(0)
}

fn validate(args: &RunArgs) -> Outcome {
    let cfg = args.to_config("validate")?;
    let e = entry(&cfg)?;
    let start = Instant::now();
    let run = report::run_entry(&e, &[], cfg.n, cfg.seed)?;
    let v = &run.validation;
    eprintln!(
        "{}: {} on {} samples (hermitian defect {:.3e}, homogeneity defect {:.3e}, min relative gap {:.3e})",
        v.symbol_id,
        if v.passed { "passed" } else { "FAILED" },
        v.samples,
        v.max_hermitian_defect,
        v.max_homogeneity_defect,
        v.min_rel_gap
    );
    for f in &v.failures {
        eprintln!("  {f}");
    }
    let passed = v.passed;
    let doc = ReportDocument {
        version: VERSION.to_string(),
        config: cfg,
        runs: vec![run],
        total_time: start.elapsed().as_secs_f64(),
    };
    match &doc.config.out {
        Some(_) => emit(&doc)?,
        None => print!("{}", json::to_string(&validation_json(&doc.runs[0].validation))),
    }
    Ok(if passed { 0 } else { 1 })
}

fn value_text(v: &InvariantValue) -> String {
    match v {
        InvariantValue::Chern(c) => format!("C={c}"),
        InvariantValue::Berry(b) => format!("phase={b:.6}"),
        InvariantValue::Torsion(t) => format!("nu={t}"),
    }
}

fn verdict(args: &RunArgs) -> Outcome {
    let cfg = args.to_config("verdict")?;
    let e = entry(&cfg)?;
    let doc = report::run_verdict(&e, &cfg)?;
    let run = &doc.runs[0];
    if !run.validation.passed {
        emit(&doc)?;
        return Err(config_error(format!(
            "'{}' violates the standing assumptions: {}",
            run.symbol_id,
            run.validation.failures.join("; ")
        )));
    }
    for (l, g) in &run.verdicts {
        for v in [l, g] {
            let ev: Vec<String> = v
                .evidence
                .iter()
                .map(|r| format!("{} {}", r.probe_label, value_text(&r.value)))
                .collect();
            eprintln!(
                "{} band {} {:<6} {:<12} [{}] {}",
                run.symbol_id,
                band_label(run.m, v.band),
                v.question.name(),
                if v.obstructed { "obstructed" } else { "unobstructed" },
                v.theorem_branch,
                ev.join(", ")
            );
        }
    }
    emit(&doc)?;
    Ok(0)
}

fn suite(args: &RunArgs) -> Outcome {
    if args.id.is_some() {
        return Err(config_error("suite takes no catalog id"));
    }
    let cfg = args.to_config("suite")?;
    let out = report::run_suite(&catalog::all(), &cfg)?;
    print!("{}", out.render_table());
    if let Some(p) = &cfg.out {
        write_file(Path::new(p), &out.document.to_json_string())?;
    }
    println!("{} rows, {} mismatches", out.rows.len(), out.mismatches());
    Ok(out.exit_code() as u8)
}

fn export(args: &RunArgs, kind: &str) -> Outcome {
    let kind = ExportKind::parse(kind)?;
    let cfg = args.to_config("export")?;
    let e = entry(&cfg)?;
    let dir = PathBuf::from(cfg.out.clone().unwrap_or_else(|| ".".into()));
    fs::create_dir_all(&dir).map_err(|err| config_error(format!("cannot create {}: {err}", dir.display())))?;
    let id = e.id().to_string();
    let save = |f: &CsvFile, tag: &str| -> Result<(), Failure> {
        let path = dir.join(format!("{id}{tag}_{}", f.name));
        write_file(&path, &f.text)?;
        eprintln!("wrote {}", path.display());
        Ok(())
    };
    let mut code = 0;
    match kind {
        ExportKind::Mesh => {
            for f in mesh_csv(e.symbol.geometry(), cfg.n)? {
                save(&f, "")?;
            }
        }
        ExportKind::Curvature | ExportKind::Gauge => {
            for b in cfg.bands.resolve(e.symbol.m())? {
                let tag = format!("_band{b}");
                if kind == ExportKind::Curvature {
                    save(&curvature_csv(&e.symbol, b, cfg.n)?, &tag)?;
                    continue;
                }
                match gauge_csv(&e.symbol, b, cfg.n)? {
                    GaugeExport::Written(f) => save(&f, &tag)?,
                    GaugeExport::Refused(msg) => {
                        eprintln!("refused: {msg}");
                        code = 1;
                    }
                }
            }
        }
    }
    Ok(code)
}

/// Sizes the global rayon pool from `OBSTRUKT_THREADS` when set.
fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("OBSTRUKT_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| config_error(format!("OBSTRUKT_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| config_error(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match &cli.command {
        Command::List => list(),
        Command::Validate(a) => validate(a),
        Command::Verdict(a) => verdict(a),
        Command::Suite(a) => suite(a),
        Command::Export { run, kind } => export(run, kind),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
