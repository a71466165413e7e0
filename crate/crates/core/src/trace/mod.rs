//! Predictor–corrector continuation of the pre-images by ζ of the real axis
//! (the Γ and Γ′ curves) and of circles |z| = r.
//!
//! The tangent at s follows from the differential relation dz = ζ′(s) ds: a
//! target-curve tangent τ in the z-plane pulls back to τ/ζ′(s). The corrector
//! projects each predicted point back onto the level set by Newton steps
//! toward the nearest z-plane target.

mod atlas;
mod geometry;
mod seed;
mod touch;

use num_complex::Complex64;
use thiserror::Error;

use crate::eval::{eval_zeta_with_prime, EvalConfig, EvalError};

pub use atlas::{build_atlas, Atlas};
pub use geometry::{
    curve_min_distance, hausdorff_distance, point_to_curve_distance, tangent_angle_between,
    upward_crossings, GeometryError,
};
pub use seed::{refine_im_zero_on_vertical, seed_circle_preimages, seed_real_axis_preimages, Seed};
pub use touch::{find_touch_radius, TouchError, TouchOutcome};

/// |ζ′| threshold below which a point is treated as a branch point.
pub const BRANCH_POINT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("branch point encountered near s = {at}")]
    BranchPointEncountered { at: Complex64 },
    #[error("seed does not satisfy the level condition (residual {residual:e})")]
    SeedInvalid { residual: f64 },
    #[error("corrector stalled near s = {at}")]
    CorrectorStalled { at: Complex64 },
    #[error("invalid trace config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum CurveKind {
    /// Pre-image of (−∞, 1): the Γ curves, each owning one zero.
    PreimageBelowOne,
    /// Pre-image of (1, +∞): the Γ′ curves.
    PreimageAboveOne,
    /// Pre-image of the circle |z| = radius.
    CirclePreimage { radius: f64 },
}

impl CurveKind {
    pub fn is_gamma(&self) -> bool {
        matches!(self, CurveKind::PreimageBelowOne)
    }

    pub fn is_gamma_prime(&self) -> bool {
        matches!(self, CurveKind::PreimageAboveOne)
    }

    fn sort_rank(&self) -> u8 {
        match self {
            CurveKind::PreimageBelowOne => 0,
            CurveKind::PreimageAboveOne => 1,
            CurveKind::CirclePreimage { .. } => 2,
        }
    }
}

/// How an end of a traced curve terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CurveEnd {
    /// Left the box through σ = σ_max (tail toward ζ → 1).
    EscapesRight,
    /// Left the box through any other edge.
    EscapesDomain,
    ClosedLoop,
    /// Terminated where ζ = 1: real-axis pre-image components of the two
    /// sign classes meet only at such points, so tracing stops there.
    ReachesUnitValue,
    /// Sample budget exhausted.
    Truncated,
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct CurveSample {
    pub s: Complex64,
    pub z: Complex64,
}

#[derive(Debug, Clone)]
pub struct TracedCurve {
    pub id: u32,
    pub kind: CurveKind,
    pub samples: Vec<CurveSample>,
    pub strip_index: Option<usize>,
    pub component_index: Option<usize>,
    pub start_end: CurveEnd,
    pub finish_end: CurveEnd,
}

impl TracedCurve {
    pub fn first_sample(&self) -> &CurveSample {
        &self.samples[0]
    }

    pub fn last_sample(&self) -> &CurveSample {
        self.samples.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.start_end == CurveEnd::ClosedLoop
    }

    /// Sample index with s.re closest to sigma.
    pub fn nearest_sigma_index(&self, sigma: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::MAX;
        for (i, sm) in self.samples.iter().enumerate() {
            let d = (sm.s.re - sigma).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Interpolated t at the first crossing of the vertical line σ = sigma.
    pub fn t_at_sigma(&self, sigma: f64) -> Option<f64> {
        for w in self.samples.windows(2) {
            let (a, b) = (w[0].s, w[1].s);
            if (a.re - sigma) * (b.re - sigma) <= 0.0 && a.re != b.re {
                let alpha = (sigma - a.re) / (b.re - a.re);
                return Some(a.im + alpha * (b.im - a.im));
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct DomainBox {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl DomainBox {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Self {
        Self { sigma_min, sigma_max, t_min, t_max }
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im >= self.t_min && s.im <= self.t_max
    }

    pub fn conjugate(&self) -> Self {
        Self {
            sigma_min: self.sigma_min,
            sigma_max: self.sigma_max,
            t_min: -self.t_max,
            t_max: -self.t_min,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceConfig {
    pub max_step: f64,
    pub min_step: f64,
    pub corrector_tol: f64,
    pub domain: DomainBox,
    pub max_samples: usize,
    /// Sampling interval for the seed scan lines.
    pub seed_scan_step: f64,
    pub eval: EvalConfig,
}

impl TraceConfig {
    pub fn new(domain: DomainBox) -> Self {
        Self {
            max_step: 0.05,
            min_step: 1e-4,
            corrector_tol: 1e-10,
            domain,
            max_samples: 20_000,
            seed_scan_step: 0.01,
            eval: EvalConfig::default().with_tol(1e-8),
        }
    }

    pub fn validate(&self) -> Result<(), TraceError> {
        if !(self.min_step < self.max_step) {
            return Err(TraceError::BadConfig("min_step must be < max_step".into()));
        }
        if !(self.corrector_tol < self.min_step) {
            return Err(TraceError::BadConfig("corrector_tol must be < min_step".into()));
        }
        Ok(())
    }
}

/// The z-plane target curve of a trace.
#[derive(Debug, Clone, Copy)]
pub(crate) enum LevelSet {
    RealAxis,
    Circle { radius: f64 },
}

impl LevelSet {
    pub fn residual(&self, z: Complex64) -> f64 {
        match self {
            LevelSet::RealAxis => z.im,
            LevelSet::Circle { radius } => z.norm() - radius,
        }
    }

    /// Nearest point of the target curve in the z-plane.
    fn project_z(&self, z: Complex64) -> Complex64 {
        match self {
            LevelSet::RealAxis => Complex64::new(z.re, 0.0),
            LevelSet::Circle { radius } => {
                let n = z.norm();
                if n == 0.0 {
                    Complex64::new(*radius, 0.0)
                } else {
                    z * (*radius / n)
                }
            }
        }
    }

    /// Unit tangent of the target curve at z.
    fn tangent_z(&self, z: Complex64) -> Complex64 {
        match self {
            LevelSet::RealAxis => Complex64::new(1.0, 0.0),
            LevelSet::Circle { .. } => {
                let n = z.norm();
                if n == 0.0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, 1.0) * z / n
                }
            }
        }
    }
}

pub(crate) struct Stepper<'a> {
    pub level: LevelSet,
    pub cfg: &'a TraceConfig,
}

pub(crate) struct Corrected {
    pub s: Complex64,
    pub z: Complex64,
    pub zp: Complex64,
    pub iterations: usize,
}

impl<'a> Stepper<'a> {
    pub fn new(level: LevelSet, cfg: &'a TraceConfig) -> Self {
        Self { level, cfg }
    }

    /// Newton projection of s onto the level set.
    pub fn project(&self, mut s: Complex64) -> Result<Corrected, TraceError> {
        let mut moved = 0.0;
        for it in 0..10 {
            let (v, p) = eval_zeta_with_prime(s, &self.cfg.eval)?;
            let (z, zp) = (v.value, p.value);
            if self.level.residual(z).abs() < self.cfg.corrector_tol {
                return Ok(Corrected { s, z, zp, iterations: it });
            }
            if zp.norm() < BRANCH_POINT_TOL {
                return Err(TraceError::BranchPointEncountered { at: s });
            }
            let d = (self.level.project_z(z) - z) / zp;
            s += d;
            moved += d.norm();
            if moved > 4.0 * self.cfg.max_step {
                return Err(TraceError::CorrectorStalled { at: s });
            }
        }
        Err(TraceError::CorrectorStalled { at: s })
    }

    /// Pull-back of the z-plane tangent; unit length, aligned with `prev`.
    fn tangent(&self, z: Complex64, zp: Complex64, prev: Option<Complex64>) -> Complex64 {
        let d = self.level.tangent_z(z) / zp;
        let mut u = d / d.norm();
        if let Some(p) = prev {
            if (u * p.conj()).re < 0.0 {
                u = -u;
            }
        }
        u
    }
}

struct DirectionTrace {
    samples: Vec<CurveSample>,
    end: CurveEnd,
}

/// Trace from a corrected point in one direction until a stop condition.
fn trace_direction(
    stepper: &Stepper,
    start: &Corrected,
    initial_dir: Complex64,
    sign_class: Option<f64>, // sign of (Re z − 1) for real-axis traces
    budget: usize,
) -> Result<DirectionTrace, TraceError> {
    let cfg = stepper.cfg;
    let mut samples = vec![CurveSample { s: start.s, z: start.z }];
    let mut cur_s = start.s;
    let mut cur_z = start.z;
    let mut cur_zp = start.zp;
    let mut dir = initial_dir;
    let mut h = cfg.max_step / 4.0;
    let mut arclength = 0.0f64;

    loop {
        if samples.len() >= budget {
            return Ok(DirectionTrace { samples, end: CurveEnd::Truncated });
        }
        if cur_zp.norm() < BRANCH_POINT_TOL {
            return Err(TraceError::BranchPointEncountered { at: cur_s });
        }
        dir = stepper.tangent(cur_z, cur_zp, Some(dir));

        // adaptive predictor step with halving on corrector failure
        let mut accepted: Option<Corrected> = None;
        while h >= cfg.min_step {
            let predicted = cur_s + h * dir;
            match stepper.project(predicted) {
                Ok(c) => {
                    let correction = (c.s - predicted).norm();
                    let advance = (c.s - cur_s).norm();
                    if correction <= 0.5 * h && advance >= 0.2 * h && advance <= 2.0 * h {
                        accepted = Some(c);
                        break;
                    }
                }
                Err(TraceError::Eval(e)) => return Err(TraceError::Eval(e)),
                Err(_) => {}
            }
            h *= 0.5;
        }
        let c = match accepted {
            Some(c) => c,
            None => {
                // step halving exhausted
                return if cur_zp.norm() < 1e-4 {
                    Err(TraceError::BranchPointEncountered { at: cur_s })
                } else {
                    Err(TraceError::CorrectorStalled { at: cur_s })
                };
            }
        };

        // sign-class boundary: the curve may only leave its class through a
        // ζ = 1 point; land exactly there and stop.
        if let Some(class) = sign_class {
            if (c.z.re - 1.0) * class < 0.0 {
                let crossing = bisect_unit_crossing(stepper, cur_s, c.s)?;
                samples.push(CurveSample { s: crossing.s, z: crossing.z });
                return Ok(DirectionTrace { samples, end: CurveEnd::ReachesUnitValue });
            }
        }

        let step_len = (c.s - cur_s).norm();
        arclength += step_len;
        samples.push(CurveSample { s: c.s, z: c.z });

        if !cfg.domain.contains(c.s) {
            let end = if c.s.re >= cfg.domain.sigma_max {
                CurveEnd::EscapesRight
            } else {
                CurveEnd::EscapesDomain
            };
            return Ok(DirectionTrace { samples, end });
        }
        if arclength > 6.0 * cfg.max_step && (c.s - samples[0].s).norm() < 1.2 * h {
            return Ok(DirectionTrace { samples, end: CurveEnd::ClosedLoop });
        }

        if c.iterations <= 2 && h < cfg.max_step {
            h = (h * 1.4).min(cfg.max_step);
        }
        dir = (c.s - cur_s) / step_len;
        cur_s = c.s;
        cur_z = c.z;
        cur_zp = c.zp;
    }
}

/// Bisect along the chord between two on-curve points for the ζ = 1 crossing.
fn bisect_unit_crossing(
    stepper: &Stepper,
    a: Complex64,
    b: Complex64,
) -> Result<Corrected, TraceError> {
    let mut lo = a;
    let mut hi = b;
    for _ in 0..60 {
        if (hi - lo).norm() < 1e-12 {
            break;
        }
        let mid = stepper.project((lo + hi) / 2.0)?;
        let g_lo = stepper.project(lo)?.z.re - 1.0;
        if (mid.z.re - 1.0) * g_lo > 0.0 {
            lo = mid.s;
        } else {
            hi = mid.s;
        }
    }
    stepper.project((lo + hi) / 2.0)
}

fn stitch(back: DirectionTrace, forward: DirectionTrace) -> (Vec<CurveSample>, CurveEnd, CurveEnd) {
    let mut samples: Vec<CurveSample> = back.samples.into_iter().skip(1).rev().collect();
    samples.extend(forward.samples);
    (samples, back.end, forward.end)
}

/// Trace the real-axis pre-image component through `seed`.
pub fn trace_level_curve(
    seed: Complex64,
    kind: CurveKind,
    cfg: &TraceConfig,
) -> Result<TracedCurve, TraceError> {
    cfg.validate()?;
    if let CurveKind::CirclePreimage { radius } = kind {
        return trace_circle_preimage(radius, seed, cfg);
    }
    let stepper = Stepper::new(LevelSet::RealAxis, cfg);
    let (v, _) = eval_zeta_with_prime(seed, &cfg.eval)?;
    if v.value.im.abs() > cfg.corrector_tol * 1e3 {
        return Err(TraceError::SeedInvalid { residual: v.value.im.abs() });
    }
    let start = stepper.project(seed)?;
    let expected_class = if kind.is_gamma_prime() { 1.0 } else { -1.0 };
    if (start.z.re - 1.0) * expected_class < 0.0 {
        return Err(TraceError::SeedInvalid { residual: (start.z.re - 1.0).abs() });
    }
    if start.zp.norm() < BRANCH_POINT_TOL {
        return Err(TraceError::BranchPointEncountered { at: start.s });
    }

    let dir = stepper.tangent(start.z, start.zp, None);
    let forward = trace_direction(&stepper, &start, dir, Some(expected_class), cfg.max_samples / 2)?;
    let (samples, start_end, finish_end) = if forward.end == CurveEnd::ClosedLoop {
        (forward.samples, CurveEnd::ClosedLoop, CurveEnd::ClosedLoop)
    } else {
        let back = trace_direction(&stepper, &start, -dir, Some(expected_class), cfg.max_samples / 2)?;
        stitch(back, forward)
    };

    let mut curve = TracedCurve {
        id: 0,
        kind,
        samples,
        strip_index: None,
        component_index: None,
        start_end,
        finish_end,
    };
    orient(&mut curve);
    Ok(curve)
}

/// Trace the component of {s : |ζ(s)| = r} through `seed`.
pub fn trace_circle_preimage(
    r: f64,
    seed: Complex64,
    cfg: &TraceConfig,
) -> Result<TracedCurve, TraceError> {
    cfg.validate()?;
    if r <= 0.0 {
        return Err(TraceError::BadConfig("circle radius must be positive".into()));
    }
    let stepper = Stepper::new(LevelSet::Circle { radius: r }, cfg);
    let (v, _) = eval_zeta_with_prime(seed, &cfg.eval)?;
    if (v.value.norm() - r).abs() > cfg.corrector_tol * 1e3 {
        return Err(TraceError::SeedInvalid { residual: (v.value.norm() - r).abs() });
    }
    let start = stepper.project(seed)?;
    if start.zp.norm() < BRANCH_POINT_TOL {
        return Err(TraceError::BranchPointEncountered { at: start.s });
    }
    let dir = stepper.tangent(start.z, start.zp, None);
    let forward = trace_direction(&stepper, &start, dir, None, cfg.max_samples / 2)?;
    let (samples, start_end, finish_end) = if forward.end == CurveEnd::ClosedLoop {
        (forward.samples, CurveEnd::ClosedLoop, CurveEnd::ClosedLoop)
    } else {
        let back = trace_direction(&stepper, &start, -dir, None, cfg.max_samples / 2)?;
        stitch(back, forward)
    };
    let mut curve = TracedCurve {
        id: 0,
        kind: CurveKind::CirclePreimage { radius: r },
        samples,
        strip_index: None,
        component_index: None,
        start_end,
        finish_end,
    };
    orient(&mut curve);
    Ok(curve)
}

/// Canonical orientation: Γ′ with Re ζ increasing, Γ with Re ζ decreasing
/// toward the −∞ end; closed loops start at the lexicographically smallest
/// (t, σ) sample with positive initial t-direction.
fn orient(curve: &mut TracedCurve) {
    if curve.samples.len() < 2 {
        return;
    }
    match curve.kind {
        CurveKind::PreimageAboveOne => {
            if curve.first_sample().z.re > curve.last_sample().z.re {
                reverse(curve);
            }
        }
        CurveKind::PreimageBelowOne => {
            if curve.first_sample().z.re < curve.last_sample().z.re {
                reverse(curve);
            }
        }
        CurveKind::CirclePreimage { .. } => {
            if curve.is_closed() {
                let min_idx = curve
                    .samples
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        (a.s.im, a.s.re).partial_cmp(&(b.s.im, b.s.re)).unwrap()
                    })
                    .map(|(i, _)| i)
                    .unwrap();
                curve.samples.rotate_left(min_idx);
                if curve.samples[1].s.re < curve.samples[curve.samples.len() - 1].s.re {
                    curve.samples.reverse();
                    curve.samples.rotate_right(1);
                }
            } else if (curve.first_sample().s.im, curve.first_sample().s.re)
                > (curve.last_sample().s.im, curve.last_sample().s.re)
            {
                reverse(curve);
            }
        }
    }
}

fn reverse(curve: &mut TracedCurve) {
    curve.samples.reverse();
    std::mem::swap(&mut curve.start_end, &mut curve.finish_end);
}
