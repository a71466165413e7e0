//! Batch front-end: scan a region, export curves/zeros/strips, and run the
//! verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 compute error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zeta_atlas::eval::eval_zeta;
use zeta_atlas::export::{
    curves_json, report_json, report_text, strips_json, zeros_csv, CheckResult, RunManifest,
};
use zeta_atlas::pipeline::{
    mirrored_curves, mirrored_zeros, parse_complex, run_scan, verify_suite, PipelineError,
    ScanOptions,
};

#[derive(Parser)]
#[command(name = "zeta-atlas", version, about = "Atlas of the pre-image curves and zeros of the Riemann zeta function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default, Clone)]
struct CommonArgs {
    /// Lower ordinate of the scan box (must be > 0)
    #[arg(long)]
    t_min: Option<f64>,
    /// Upper ordinate of the scan box (≤ 400)
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    sigma_min: Option<f64>,
    #[arg(long)]
    sigma_max: Option<f64>,
    /// Maximum continuation step of the curve tracer
    #[arg(long)]
    step: Option<f64>,
    /// Target absolute tolerance of the evaluator
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory (default "out")
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also emit the conjugate (t < 0) data by reflection
    #[arg(long)]
    mirror: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate ζ at one point and print the value with its error estimate
    Eval {
        /// The point, e.g. "2+0i", "0.5+14.13i"
        #[arg(long)]
        s: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Trace the pre-image curves of the region and export curves.json
    Trace {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Locate the zeros of the region and export zeros.csv
    Zeros {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Assemble strips and export strips.json with the m-type census
    Strips {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the verification suite; nonzero status on any failing check
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Full run: all exports plus the verification report
    Report {
        #[command(flatten)]
        common: CommonArgs,
    },
}

struct Resolved {
    opts: ScanOptions,
    out_dir: PathBuf,
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, PipelineError> {
    let text = fs::read_to_string(path)
        .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            PipelineError::Config(format!("{}:{}: expected key = value", path.display(), lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn resolve(common: &CommonArgs, default_sigma_max: f64) -> Result<Resolved, PipelineError> {
    let file = match &common.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let num = |key: &str| -> Result<Option<f64>, PipelineError> {
        match file.get(key) {
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| PipelineError::Config(format!("bad value for {key}: {v}"))),
            None => Ok(None),
        }
    };

    let mut opts = ScanOptions::default();
    opts.region.sigma_range.1 = default_sigma_max;
    if let Some(v) = num("t-min")? {
        opts.region.t_range.0 = v;
    }
    if let Some(v) = num("t-max")? {
        opts.region.t_range.1 = v;
    }
    if let Some(v) = num("sigma-min")? {
        opts.region.sigma_range.0 = v;
    }
    if let Some(v) = num("sigma-max")? {
        opts.region.sigma_range.1 = v;
    }
    if let Some(v) = num("step")? {
        opts.max_step = v;
    }
    if let Some(v) = num("tol")? {
        opts.target_tol = v;
    }
    if file.get("mirror").map(|v| v == "true").unwrap_or(false) {
        opts.region.mirror = true;
    }
    let mut out_dir = file
        .get("out")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"));

    // flags win over the file
    if let Some(v) = common.t_min {
        opts.region.t_range.0 = v;
    }
    if let Some(v) = common.t_max {
        opts.region.t_range.1 = v;
    }
    if let Some(v) = common.sigma_min {
        opts.region.sigma_range.0 = v;
    }
    if let Some(v) = common.sigma_max {
        opts.region.sigma_range.1 = v;
    }
    if let Some(v) = common.step {
        opts.max_step = v;
    }
    if let Some(v) = common.tol {
        opts.target_tol = v;
    }
    if common.mirror {
        opts.region.mirror = true;
    }
    if let Some(dir) = &common.out {
        out_dir = dir.clone();
    }
    opts.region.validate()?;
    if !(opts.max_step > 0.0) || !(opts.target_tol > 0.0) {
        return Err(PipelineError::Config("step and tol must be positive".into()));
    }
    Ok(Resolved { opts, out_dir })
}

fn config_snapshot(resolved: &Resolved) -> BTreeMap<String, String> {
    let r = &resolved.opts.region;
    let mut map = BTreeMap::new();
    map.insert("t-min".into(), format!("{}", r.t_range.0));
    map.insert("t-max".into(), format!("{}", r.t_range.1));
    map.insert("sigma-min".into(), format!("{}", r.sigma_range.0));
    map.insert("sigma-max".into(), format!("{}", r.sigma_range.1));
    map.insert("step".into(), format!("{}", resolved.opts.max_step));
    map.insert("tol".into(), format!("{}", resolved.opts.target_tol));
    map.insert("mirror".into(), format!("{}", r.mirror));
    map.insert("out".into(), resolved.out_dir.display().to_string());
    map
}

fn write_file(
    dir: &Path,
    name: &str,
    contents: &str,
    manifest: &mut RunManifest,
) -> Result<(), PipelineError> {
    fs::create_dir_all(dir)
        .map_err(|e| PipelineError::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| PipelineError::Config(format!("cannot write {}: {e}", path.display())))?;
    manifest.record_file(name, contents.as_bytes());
    Ok(())
}

/// Probe abscissas for the asymptotic-angle check, kept inside the box.
fn lemma2_probes(sigma_max: f64) -> Vec<f64> {
    [5.0, 10.0, 15.0]
        .into_iter()
        .filter(|&p| p < sigma_max - 0.5)
        .collect()
}

enum Outcome {
    Clean,
    VerificationFailed,
}

fn execute(cli: Cli) -> Result<Outcome, PipelineError> {
    match cli.command {
        Command::Eval { s, common } => {
            let resolved = resolve(&common, 10.0)?;
            let point = parse_complex(&s)?;
            let mut cfg = zeta_atlas::eval::EvalConfig::default();
            cfg = cfg.with_tol(resolved.opts.target_tol);
            let result = eval_zeta(point, &cfg)?;
            println!("zeta({}) = {:+.15e} {:+.15e}i", s.trim(), result.value.re, result.value.im);
            println!("abs_error_estimate = {:.3e}", result.abs_error_estimate);
            println!("method = {:?}", result.method);
            Ok(Outcome::Clean)
        }
        Command::Trace { common } => {
            let resolved = resolve(&common, 10.0)?;
            let mut manifest = RunManifest::new(config_snapshot(&resolved));
            let out = run_scan(&resolved.opts)?;
            let mut curves = out.atlas.curves.clone();
            if resolved.opts.region.mirror {
                curves.extend(mirrored_curves(&out.atlas));
            }
            write_file(&resolved.out_dir, "curves.json", &curves_json(&curves), &mut manifest)?;
            finish_manifest(&resolved.out_dir, manifest)?;
            println!("{} curves -> {}", curves.len(), resolved.out_dir.join("curves.json").display());
            Ok(Outcome::Clean)
        }
        Command::Zeros { common } => {
            let resolved = resolve(&common, 10.0)?;
            let mut manifest = RunManifest::new(config_snapshot(&resolved));
            let out = run_scan(&resolved.opts)?;
            let mut zeros = out.zeros.clone();
            if resolved.opts.region.mirror {
                let mut all = mirrored_zeros(&out.zeros);
                all.extend(zeros);
                zeros = all;
            }
            write_file(&resolved.out_dir, "zeros.csv", &zeros_csv(&zeros), &mut manifest)?;
            finish_manifest(&resolved.out_dir, manifest)?;
            println!("{} zeros -> {}", zeros.len(), resolved.out_dir.join("zeros.csv").display());
            Ok(Outcome::Clean)
        }
        Command::Strips { common } => {
            let resolved = resolve(&common, 10.0)?;
            let mut manifest = RunManifest::new(config_snapshot(&resolved));
            let out = run_scan(&resolved.opts)?;
            write_file(
                &resolved.out_dir,
                "strips.json",
                &strips_json(&out.strips, out.zeros.len()),
                &mut manifest,
            )?;
            finish_manifest(&resolved.out_dir, manifest)?;
            println!(
                "{} strips -> {}",
                out.strips.len(),
                resolved.out_dir.join("strips.json").display()
            );
            Ok(Outcome::Clean)
        }
        Command::Verify { common } => {
            // Lemma 2 probes reach σ = 15, so the verify box is wider
            let resolved = resolve(&common, 16.0)?;
            let mut manifest = RunManifest::new(config_snapshot(&resolved));
            let out = run_scan(&resolved.opts)?;
            let probes = lemma2_probes(resolved.opts.region.sigma_range.1);
            let checks = verify_suite(&out, &probes)?;
            emit_report(&resolved, &checks, &mut manifest, &out.warnings)?;
            Ok(verdict(&checks))
        }
        Command::Report { common } => {
            let resolved = resolve(&common, 16.0)?;
            let mut manifest = RunManifest::new(config_snapshot(&resolved));
            let out = run_scan(&resolved.opts)?;
            let mut curves = out.atlas.curves.clone();
            let mut zeros = out.zeros.clone();
            if resolved.opts.region.mirror {
                curves.extend(mirrored_curves(&out.atlas));
                let mut all = mirrored_zeros(&out.zeros);
                all.extend(zeros);
                zeros = all;
            }
            write_file(&resolved.out_dir, "curves.json", &curves_json(&curves), &mut manifest)?;
            write_file(&resolved.out_dir, "zeros.csv", &zeros_csv(&zeros), &mut manifest)?;
            write_file(
                &resolved.out_dir,
                "strips.json",
                &strips_json(&out.strips, out.zeros.len()),
                &mut manifest,
            )?;
            let probes = lemma2_probes(resolved.opts.region.sigma_range.1);
            let checks = verify_suite(&out, &probes)?;
            emit_report(&resolved, &checks, &mut manifest, &out.warnings)?;
            Ok(verdict(&checks))
        }
    }
}

fn emit_report(
    resolved: &Resolved,
    checks: &[CheckResult],
    manifest: &mut RunManifest,
    warnings: &[String],
) -> Result<(), PipelineError> {
    manifest.verdicts = checks.to_vec();
    let text = report_text(checks);
    write_file(&resolved.out_dir, "report.txt", &text, manifest)?;
    write_file(&resolved.out_dir, "report.json", &report_json(checks), manifest)?;
    let manifest_doc = manifest.finish();
    let path = resolved.out_dir.join("manifest.json");
    fs::write(&path, manifest_doc)
        .map_err(|e| PipelineError::Config(format!("cannot write {}: {e}", path.display())))?;
    print!("{text}");
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn finish_manifest(dir: &Path, mut manifest: RunManifest) -> Result<(), PipelineError> {
    let doc = manifest.finish();
    let path = dir.join("manifest.json");
    fs::write(&path, doc)
        .map_err(|e| PipelineError::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn verdict(checks: &[CheckResult]) -> Outcome {
    if checks.iter().all(|ck| ck.pass) {
        Outcome::Clean
    } else {
        Outcome::VerificationFailed
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                PipelineError::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}
