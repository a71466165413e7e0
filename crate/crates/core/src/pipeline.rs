//! Scan orchestration: one deterministic pass from a region to curves,
//! zeros, strips, and the verification suite.

use num_complex::Complex64;
use thiserror::Error;

use crate::eval::{EvalConfig, EvalError};
use crate::export::CheckResult;
use crate::strips::{
    assemble_strips, locate_one_points, verify_lemma1, verify_lemma2, StripError, StripRecord,
};
use crate::trace::{build_atlas, Atlas, DomainBox, TraceConfig, TraceError};
use crate::zeros::{
    check_critical_line, check_distinct_ordinates, check_no_branch_on_gamma_prime, find_zeros,
    RectRegion, ZeroError, ZeroRecord,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error(transparent)]
    Strip(#[from] StripError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRegion {
    pub sigma_range: (f64, f64),
    pub t_range: (f64, f64),
    /// Also emit the conjugate (t < 0) data by reflection.
    pub mirror: bool,
}

impl Default for ScanRegion {
    fn default() -> Self {
        Self { sigma_range: (-1.0, 10.0), t_range: (2.0, 60.0), mirror: false }
    }
}

impl ScanRegion {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.sigma_range.0 >= self.sigma_range.1 {
            return Err(PipelineError::Config("sigma-min must be < sigma-max".into()));
        }
        if self.t_range.0 >= self.t_range.1 {
            return Err(PipelineError::Config("t-min must be < t-max".into()));
        }
        if self.t_range.0 <= 0.0 {
            return Err(PipelineError::Config(
                "t-min must be > 0 (the conjugate region is produced by --mirror)".into(),
            ));
        }
        if self.t_range.1 > 400.0 {
            return Err(PipelineError::Config("t-max must be ≤ 400".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub region: ScanRegion,
    pub max_step: f64,
    pub target_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { region: ScanRegion::default(), max_step: 0.05, target_tol: 1e-8 }
    }
}

pub struct ScanOutput {
    pub atlas: Atlas,
    pub zeros: Vec<ZeroRecord>,
    pub strips: Vec<StripRecord>,
    pub eval_cfg: EvalConfig,
    /// Non-fatal anomalies (flagged strips etc.), in deterministic order.
    pub warnings: Vec<String>,
}

pub fn trace_config(opts: &ScanOptions) -> TraceConfig {
    let r = &opts.region;
    let mut cfg = TraceConfig::new(DomainBox::new(
        r.sigma_range.0,
        r.sigma_range.1,
        r.t_range.0,
        r.t_range.1,
    ));
    cfg.max_step = opts.max_step;
    cfg.eval = cfg.eval.with_tol(opts.target_tol);
    cfg
}

/// The full deterministic pass: atlas → zeros → strips → one-points.
pub fn run_scan(opts: &ScanOptions) -> Result<ScanOutput, PipelineError> {
    opts.region.validate()?;
    let tcfg = trace_config(opts);
    let eval_cfg = tcfg.eval.clone();
    let mut atlas = build_atlas(&tcfg)?;
    let mut warnings: Vec<String> = atlas
        .rejected
        .iter()
        .map(|(s, e)| format!("seed at {s} rejected: {e}"))
        .collect();

    let sig_lo = opts.region.sigma_range.0.max(0.0);
    let sig_hi = opts.region.sigma_range.1.min(1.0);
    let zeros = if sig_lo < sig_hi {
        let region = RectRegion::new((sig_lo, sig_hi), opts.region.t_range);
        find_zeros(&region, &atlas.curves, &eval_cfg)?
    } else {
        Vec::new()
    };

    let mut strips = assemble_strips(&atlas, &zeros)?;
    for strip in &mut strips {
        match locate_one_points(strip, &atlas, &eval_cfg) {
            Ok(pts) => strip.one_points = pts,
            Err(StripError::NotFound { j }) => {
                warnings.push(format!("strip {j}: one-point search failed; strip flagged"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    // tag curves with their strip for export
    for strip in &strips {
        for &id in &strip.gamma_components {
            if let Some(cv) = atlas.curves.iter_mut().find(|cv| cv.id == id) {
                cv.strip_index = Some(strip.j);
            }
        }
    }

    Ok(ScanOutput { atlas, zeros, strips, eval_cfg, warnings })
}

/// Conjugate copies of the curves, ids continuing after the originals.
pub fn mirrored_curves(atlas: &Atlas) -> Vec<crate::trace::TracedCurve> {
    let max_id = atlas.curves.iter().map(|cv| cv.id).max().unwrap_or(0);
    atlas
        .curves
        .iter()
        .map(|cv| {
            let mut m = cv.clone();
            m.id += max_id;
            for sm in &mut m.samples {
                sm.s = sm.s.conj();
                sm.z = sm.z.conj();
            }
            m
        })
        .collect()
}

/// Conjugate zero records (t ↦ −t), sorted ascending.
pub fn mirrored_zeros(zeros: &[ZeroRecord]) -> Vec<ZeroRecord> {
    let mut out: Vec<ZeroRecord> = zeros
        .iter()
        .map(|z| {
            let mut m = z.clone();
            m.t = -m.t;
            m.owning_curve = None;
            m
        })
        .collect();
    out.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    out
}

fn gap_tolerance(t_max: f64) -> f64 {
    if t_max <= 110.0 {
        0.5
    } else {
        // mean zero spacing shrinks like 1/log t
        0.5 * 110f64.ln() / t_max.ln()
    }
}

/// The verification suite: one CheckResult per verdict line.
pub fn verify_suite(out: &ScanOutput, probe_sigmas: &[f64]) -> Result<Vec<CheckResult>, PipelineError> {
    let mut checks = Vec::new();

    let line = check_critical_line(&out.zeros, 1e-8, &out.eval_cfg)?;
    checks.push(CheckResult::new(
        "critical-line",
        line.pass,
        format!(
            "{} zeros, max |sigma - 1/2| = {:.2e}, max reflection residual = {:.2e}",
            out.zeros.len(),
            line.max_deviation,
            line.max_pair_residual
        ),
    ));

    let gap_tol = gap_tolerance(out.zeros.last().map(|z| z.t).unwrap_or(0.0));
    let ord = check_distinct_ordinates(&out.zeros, gap_tol);
    checks.push(CheckResult::new(
        "distinct-ordinates",
        ord.pass,
        format!("gap tolerance {gap_tol:.3}, {} offending pairs", ord.offending.len()),
    ));

    let orders_ok = out.zeros.iter().all(|z| z.local_order == 1 && !z.anomalous);
    checks.push(CheckResult::new(
        "local-orders",
        orders_ok,
        "every accepted zero is simple",
    ));

    let mut min_zp = f64::MAX;
    let mut branch_ok = true;
    for cv in out.atlas.gamma_primes() {
        let rep = check_no_branch_on_gamma_prime(cv, &out.eval_cfg)?;
        min_zp = min_zp.min(rep.min_abs_zeta_prime);
        branch_ok &= rep.pass;
    }
    checks.push(CheckResult::new(
        "no-branch-on-gamma-prime",
        branch_ok,
        format!("min |zeta'| over gamma-prime samples = {min_zp:.3e}"),
    ));

    let complete: Vec<&StripRecord> = out.strips.iter().filter(|st| !st.partial).collect();
    let lemma1_ok = complete.iter().all(|st| verify_lemma1(st, &out.atlas).pass);
    checks.push(CheckResult::new(
        "lemma1-principal-uniqueness",
        lemma1_ok,
        format!("{} complete strips, one tail-bounded principal each", complete.len()),
    ));

    let mut lemma2_ok = true;
    let mut final_angle = 0.0f64;
    for st in &complete {
        let rep = verify_lemma2(st, &out.atlas, probe_sigmas)?;
        lemma2_ok &= rep.pass;
        if let Some(&a) = rep.angles.last() {
            final_angle = final_angle.max(a);
        }
    }
    checks.push(CheckResult::new(
        "lemma2-asymptotic-angles",
        lemma2_ok,
        format!("probes {probe_sigmas:?}, max final angle {final_angle:.3e} rad"),
    ));

    let census_total: usize = out.strips.iter().map(|st| st.zeros.len()).sum();
    checks.push(CheckResult::new(
        "census-consistency",
        census_total == out.zeros.len(),
        format!("{census_total} zeros across strips vs {} found", out.zeros.len()),
    ));

    let one_points_ok = complete
        .iter()
        .all(|st| st.one_points.len() + 1 == st.m_type.max(1));
    checks.push(CheckResult::new(
        "one-points-per-strip",
        one_points_ok,
        "each complete m-type strip carries m - 1 one-points",
    ));

    Ok(checks)
}

/// Parse "a+bi" / "a-bi" / "a" / "bi" into a complex number.
pub fn parse_complex(text: &str) -> Result<Complex64, PipelineError> {
    let s = text.trim().replace(' ', "");
    let bad = || PipelineError::Config(format!("cannot parse complex number: {text}"));
    if let Some(body) = s.strip_suffix('i') {
        // split into real and imaginary at the last +/- that is not an
        // exponent sign or leading sign
        let chars: Vec<char> = body.chars().collect();
        let mut split = None;
        for k in (1..chars.len()).rev() {
            if (chars[k] == '+' || chars[k] == '-')
                && chars[k - 1] != 'e'
                && chars[k - 1] != 'E'
            {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| bad())?;
                let im_str = &body[k..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() { 1.0 } else { body.parse().map_err(|_| bad())? };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0))
    }
}
