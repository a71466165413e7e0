//! Zero location and verification.
//!
//! Zeros are found where a Γ curve's real image crosses 0, refined by damped
//! Newton, and cross-checked against an argument-principle count over the
//! region. Local orders come from the winding of ζ(s) − ζ(a) on small probe
//! circles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{eval_zeta, eval_zeta_prime, eval_zeta_with_prime, EvalConfig, EvalError};
use crate::trace::{CurveKind, TraceError, TracedCurve};

#[derive(Debug, Error)]
pub enum ZeroError {
    #[error("curve-based zero count {found} disagrees with argument-principle count {counted}")]
    CountMismatch { found: usize, counted: i64 },
    #[error("region boundary passes too close to a zero or the pole near s = {at}")]
    BoundaryUnsafe { at: Complex64 },
    #[error("argument unwinding failed near s = {at}: step below minimum with Δarg ≥ π/2")]
    UnwindFailure { at: Complex64 },
    #[error("local order probes disagree: k = {0} at full radius, k = {1} at half radius")]
    Inconclusive(i64, i64),
    #[error("Newton iteration failed to converge from s = {from}")]
    NewtonDiverged { from: Complex64 },
    #[error("degenerate region")]
    BadRegion,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroMethod {
    /// Bisection of the real image along an owning Γ curve, Newton-refined.
    CurveBisection,
    /// Newton from a rectangle-subdivision seed (no owning curve).
    BoxRefinement,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub sigma: f64,
    pub t: f64,
    /// |ζ| at the located point.
    pub residual: f64,
    pub local_order: u32,
    pub owning_curve: Option<u32>,
    pub method: ZeroMethod,
    /// Set when local_order ≠ 1; such records are reported, not dropped.
    pub anomalous: bool,
}

impl ZeroRecord {
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RectRegion {
    pub sigma_range: (f64, f64),
    pub t_range: (f64, f64),
}

impl RectRegion {
    pub fn new(sigma_range: (f64, f64), t_range: (f64, f64)) -> Self {
        Self { sigma_range, t_range }
    }

    pub fn validate(&self) -> Result<(), ZeroError> {
        if self.sigma_range.0 >= self.sigma_range.1 || self.t_range.0 >= self.t_range.1 {
            return Err(ZeroError::BadRegion);
        }
        Ok(())
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_range.0
            && s.re <= self.sigma_range.1
            && s.im >= self.t_range.0
            && s.im <= self.t_range.1
    }

    fn corners(&self) -> [Complex64; 4] {
        let (a, b) = self.sigma_range;
        let (lo, hi) = self.t_range;
        [
            Complex64::new(a, lo),
            Complex64::new(b, lo),
            Complex64::new(b, hi),
            Complex64::new(a, hi),
        ]
    }

    fn conjugate(&self) -> Self {
        Self {
            sigma_range: self.sigma_range,
            t_range: (-self.t_range.1, -self.t_range.0),
        }
    }
}

/// Damped Newton toward ζ(s) = target. Damping halves the step whenever the
/// residual grows; converges when the residual < 1e−12 or the step < 1e−14.
pub fn refine_root(
    s0: Complex64,
    target: Complex64,
    cfg: &EvalConfig,
) -> Result<Complex64, ZeroError> {
    let mut s = s0;
    let (v, p) = eval_zeta_with_prime(s, cfg)?;
    let mut res = (v.value - target).norm();
    let mut zp = p.value;
    let mut z = v.value;
    for _ in 0..50 {
        if res < 1e-12 {
            return Ok(s);
        }
        if zp.norm() == 0.0 {
            break;
        }
        let mut step = (z - target) / zp;
        // damping: retreat while the residual grows
        for _ in 0..8 {
            let cand = s - step;
            let (v2, p2) = eval_zeta_with_prime(cand, cfg)?;
            let res2 = (v2.value - target).norm();
            if res2 <= res || step.norm() < 1e-14 {
                s = cand;
                z = v2.value;
                zp = p2.value;
                res = res2;
                break;
            }
            step /= 2.0;
        }
        if step.norm() < 1e-14 {
            return if res < 1e-9 {
                Ok(s)
            } else {
                Err(ZeroError::NewtonDiverged { from: s0 })
            };
        }
    }
    if res < 1e-12 {
        Ok(s)
    } else {
        Err(ZeroError::NewtonDiverged { from: s0 })
    }
}

/// Total change of arg f along [a, b] (parameter space), with adaptive
/// subdivision keeping every accepted step's Δarg below π/2.
fn arg_change_on<F>(
    f: &mut F,
    a: f64,
    b: f64,
    initial: usize,
    at: impl Fn(f64) -> Complex64,
) -> Result<f64, ZeroError>
where
    F: FnMut(f64) -> Result<Complex64, ZeroError>,
{
    const MAX_DEPTH: u32 = 30;
    let initial = initial.max(8);
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, Complex64, Complex64, u32)> = Vec::new();
    let mut prev_t = a;
    let mut prev_z = f(a)?;
    for i in 1..=initial {
        let t = a + (b - a) * i as f64 / initial as f64;
        let z = f(t)?;
        stack.push((prev_t, t, prev_z, z, 0));
        prev_t = t;
        prev_z = z;
    }
    while let Some((ta, tb, za, zb, depth)) = stack.pop() {
        let d = (zb / za).arg();
        if d.abs() < std::f64::consts::FRAC_PI_2 {
            total += d;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(ZeroError::UnwindFailure { at: at((ta + tb) / 2.0) });
        }
        let tm = (ta + tb) / 2.0;
        let zm = f(tm)?;
        stack.push((ta, tm, za, zm, depth + 1));
        stack.push((tm, tb, zm, zb, depth + 1));
    }
    Ok(total)
}

/// Zeros-minus-poles count inside the region by the argument principle.
pub fn argument_principle_count(region: &RectRegion, cfg: &EvalConfig) -> Result<i64, ZeroError> {
    region.validate()?;
    let corners = region.corners();

    // boundary pre-scan: |ζ| > 1e−6 and distance to the pole > 1e−3
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let len = (b - a).norm();
        let n = ((len / 0.01).ceil() as usize).max(4);
        for k in 0..=n {
            let s = a + (b - a) * (k as f64 / n as f64);
            if (s - Complex64::new(1.0, 0.0)).norm() <= 1e-3 {
                return Err(ZeroError::BoundaryUnsafe { at: s });
            }
            if eval_zeta(s, cfg)?.value.norm() <= 1e-6 {
                return Err(ZeroError::BoundaryUnsafe { at: s });
            }
        }
    }

    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let mut f = |u: f64| -> Result<Complex64, ZeroError> {
            Ok(eval_zeta(a + (b - a) * u, cfg)?.value)
        };
        // Initial spacing ≤ 0.1 in s: long edges otherwise alias full turns.
        let initial = 32usize.max(((b - a).norm() / 0.1).ceil() as usize);
        total += arg_change_on(&mut f, 0.0, 1.0, initial, |u| a + (b - a) * u)?;
    }
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.25 {
        return Err(ZeroError::UnwindFailure { at: corners[0] });
    }
    Ok(rounded as i64)
}

/// Order k of the local expansion ζ(s) = ζ(a) + (s − a)^k g(s), from the
/// winding of ζ − ζ(a) on probe circles of radius r and r/2.
pub fn local_order(
    a: Complex64,
    probe_radius: f64,
    cfg: &EvalConfig,
) -> Result<(u32, f64), ZeroError> {
    let za = eval_zeta(a, cfg)?.value;
    let winding = |r: f64| -> Result<i64, ZeroError> {
        let mut f = |theta: f64| -> Result<Complex64, ZeroError> {
            let s = a + r * Complex64::new(theta.cos(), theta.sin());
            Ok(eval_zeta(s, cfg)?.value - za)
        };
        let total = arg_change_on(&mut f, 0.0, std::f64::consts::TAU, 64, |theta| {
            a + r * Complex64::new(theta.cos(), theta.sin())
        })?;
        Ok((total / std::f64::consts::TAU).round() as i64)
    };
    let k_full = winding(probe_radius)?;
    let k_half = winding(probe_radius / 2.0)?;
    if k_full != k_half || k_full < 1 {
        return Err(ZeroError::Inconclusive(k_full, k_half));
    }
    let k = k_full as u32;
    let lead = (eval_zeta(a + probe_radius, cfg)?.value - za).norm() / probe_radius.powi(k as i32);
    Ok((k, lead))
}

/// Sign changes of the real image along a Γ curve, Newton-refined to zeros.
fn zeros_on_gamma(
    curve: &TracedCurve,
    region: &RectRegion,
    cfg: &EvalConfig,
) -> Result<Vec<ZeroRecord>, ZeroError> {
    let mut out: Vec<ZeroRecord> = Vec::new();
    for w in curve.samples.windows(2) {
        let (ga, gb) = (w[0].z.re, w[1].z.re);
        if !(ga == 0.0 || ga * gb < 0.0) {
            continue;
        }
        let alpha = if ga == 0.0 { 0.0 } else { ga / (ga - gb) };
        let guess = w[0].s + (w[1].s - w[0].s) * alpha;
        let s = refine_root(guess, Complex64::new(0.0, 0.0), cfg)?;
        if !region.contains(s) || s.re <= 0.0 || s.re >= 1.0 {
            continue;
        }
        if out.iter().any(|r| (r.s() - s).norm() < 1e-6) {
            continue;
        }
        let (k, _) = local_order(s, 1e-3, cfg)?;
        out.push(ZeroRecord {
            sigma: s.re,
            t: s.im,
            residual: eval_zeta(s, cfg)?.value.norm(),
            local_order: k,
            owning_curve: Some(curve.id),
            method: ZeroMethod::CurveBisection,
            anomalous: k != 1,
        });
    }
    Ok(out)
}

/// Count with the t-boundary nudged outward until it clears zeros and stays
/// unwindable; a pole inside the region is compensated for.
fn robust_count(region: &RectRegion, cfg: &EvalConfig) -> Result<i64, ZeroError> {
    let mut last = ZeroError::BadRegion;
    for off in [0.0, 1e-3, -1e-3, 2e-3, 3e-3] {
        let nudged = RectRegion::new(
            region.sigma_range,
            (region.t_range.0 - off, region.t_range.1 + off),
        );
        match argument_principle_count(&nudged, cfg) {
            Ok(c) => {
                let pole_inside = nudged.contains(Complex64::new(1.0, 0.0))
                    && (1.0 - nudged.sigma_range.0).abs() > 1e-9
                    && (1.0 - nudged.sigma_range.1).abs() > 1e-9;
                return Ok(if pole_inside { c + 1 } else { c });
            }
            Err(e @ ZeroError::BoundaryUnsafe { .. }) | Err(e @ ZeroError::UnwindFailure { .. }) => {
                last = e;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Locate the non-trivial zeros of the region from its Γ curves, sorted by t,
/// and cross-check the count by the argument principle.
pub fn find_zeros(
    region: &RectRegion,
    atlas: &[TracedCurve],
    cfg: &EvalConfig,
) -> Result<Vec<ZeroRecord>, ZeroError> {
    region.validate()?;
    if region.t_range.1 <= 0.0 {
        // conjugate region: zeros mirror those of the reflected region
        let mirrored = find_zeros(&region.conjugate(), atlas, cfg)?;
        let mut out: Vec<ZeroRecord> = mirrored
            .into_iter()
            .map(|mut r| {
                r.t = -r.t;
                r
            })
            .collect();
        out.sort_by(|x, y| x.t.partial_cmp(&y.t).unwrap());
        return Ok(out);
    }

    let mut records: Vec<ZeroRecord> = Vec::new();
    for curve in atlas.iter().filter(|cv| cv.kind == CurveKind::PreimageBelowOne) {
        if !curve.samples.iter().any(|sm| region.contains(sm.s)) {
            continue;
        }
        for rec in zeros_on_gamma(curve, region, cfg)? {
            if !records.iter().any(|r| (r.s() - rec.s()).norm() < 1e-6) {
                records.push(rec);
            }
        }
    }
    records.sort_by(|x, y| x.t.partial_cmp(&y.t).unwrap());

    let counted = robust_count(region, cfg)?;
    if counted != records.len() as i64 {
        return Err(ZeroError::CountMismatch {
            found: records.len(),
            counted,
        });
    }
    Ok(records)
}

#[derive(Debug, Clone)]
pub struct OrdinateReport {
    pub pass: bool,
    pub offending: Vec<(ZeroRecord, ZeroRecord)>,
}

/// No two zeros may share an ordinate: consecutive t-gaps must exceed gap_tol.
pub fn check_distinct_ordinates(zeros: &[ZeroRecord], gap_tol: f64) -> OrdinateReport {
    let mut sorted: Vec<&ZeroRecord> = zeros.iter().collect();
    sorted.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    let mut offending = Vec::new();
    for w in sorted.windows(2) {
        if w[1].t - w[0].t <= gap_tol {
            offending.push((w[0].clone(), w[1].clone()));
        }
    }
    OrdinateReport { pass: offending.is_empty(), offending }
}

#[derive(Debug, Clone)]
pub struct LineReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub max_pair_residual: f64,
}

/// All zeros on the critical line within line_tol, and each reflection
/// partner 1 − conj(s) is itself a zero.
pub fn check_critical_line(
    zeros: &[ZeroRecord],
    line_tol: f64,
    cfg: &EvalConfig,
) -> Result<LineReport, ZeroError> {
    let mut max_dev = 0.0f64;
    let mut max_pair = 0.0f64;
    for rec in zeros {
        max_dev = max_dev.max((rec.sigma - 0.5).abs());
        let paired = Complex64::new(1.0, 0.0) - rec.s().conj();
        max_pair = max_pair.max(eval_zeta(paired, cfg)?.value.norm());
    }
    Ok(LineReport {
        pass: max_dev < line_tol && max_pair < 1e-6,
        max_deviation: max_dev,
        max_pair_residual: max_pair,
    })
}

#[derive(Debug, Clone)]
pub struct BranchReport {
    pub min_abs_zeta_prime: f64,
    pub monotone_image: bool,
    pub pass: bool,
}

/// ζ′ never vanishes on a Γ′ curve and its real image is strictly monotone,
/// as bijectivity onto (1, +∞) requires.
pub fn check_no_branch_on_gamma_prime(
    curve: &TracedCurve,
    cfg: &EvalConfig,
) -> Result<BranchReport, ZeroError> {
    assert!(curve.kind.is_gamma_prime(), "branch check applies to Γ′ curves");
    let mut min_zp = f64::MAX;
    for sm in &curve.samples {
        min_zp = min_zp.min(eval_zeta_prime(sm.s, cfg)?.value.norm());
    }
    let mut monotone = true;
    for w in curve.samples.windows(2) {
        if w[1].z.re <= w[0].z.re {
            monotone = false;
            break;
        }
    }
    Ok(BranchReport {
        min_abs_zeta_prime: min_zp,
        monotone_image: monotone,
        pass: min_zp > 1e-6 && monotone,
    })
}
