//! Atlas assembly: discover seeds over a box, trace every real-axis
//! pre-image component once, and return them in a canonical order.

use num_complex::Complex64;

use super::geometry::point_to_curve_distance;
use super::seed::seed_real_axis_preimages;
use super::{trace_level_curve, DomainBox, TraceConfig, TraceError, TracedCurve};

#[derive(Debug)]
pub struct Atlas {
    pub domain: DomainBox,
    pub curves: Vec<TracedCurve>,
    /// Seeds that could not be traced, with the reason. Branch points and
    /// corrector stalls land here rather than aborting the whole build.
    pub rejected: Vec<(Complex64, TraceError)>,
}

impl Atlas {
    pub fn curve(&self, id: u32) -> Option<&TracedCurve> {
        self.curves.iter().find(|cv| cv.id == id)
    }

    pub fn gammas(&self) -> impl Iterator<Item = &TracedCurve> {
        self.curves.iter().filter(|cv| cv.kind.is_gamma())
    }

    pub fn gamma_primes(&self) -> impl Iterator<Item = &TracedCurve> {
        self.curves.iter().filter(|cv| cv.kind.is_gamma_prime())
    }
}

/// One-sided containment: every sample of `a` lies within `tol` of `b`.
fn contained_in(a: &TracedCurve, b: &TracedCurve, tol: f64) -> bool {
    a.samples
        .iter()
        .all(|sm| point_to_curve_distance(sm.s, b) < tol)
}

fn sort_key(curve: &TracedCurve) -> (u8, f64, f64) {
    let first = curve.first_sample().s;
    (curve.kind.sort_rank(), first.im, first.re)
}

/// Trace every real-axis pre-image component crossing the scan lines of
/// `cfg.domain`. Components are deduplicated and sorted by kind, then by the
/// (t, σ) of their first sample; ids are assigned in that order from 1.
pub fn build_atlas(cfg: &TraceConfig) -> Result<Atlas, TraceError> {
    cfg.validate()?;
    let seeds = seed_real_axis_preimages(cfg)?;

    let mut curves: Vec<TracedCurve> = Vec::new();
    let mut rejected = Vec::new();
    for seed in seeds {
        // cheap skip: the seed already lies on a traced component of its kind
        if curves
            .iter()
            .filter(|cv| cv.kind == seed.kind)
            .any(|cv| point_to_curve_distance(seed.s, cv) < 0.3 * cfg.max_step)
        {
            continue;
        }
        let traced = match trace_level_curve(seed.s, seed.kind, cfg) {
            Ok(cv) => cv,
            Err(e @ TraceError::Eval(_)) | Err(e @ TraceError::BadConfig(_)) => return Err(e),
            Err(e) => {
                rejected.push((seed.s, e));
                continue;
            }
        };
        // a retrace of a known component (possibly shorter): keep the longer
        let dup_tol = 2.0 * cfg.max_step;
        if let Some(existing) = curves.iter_mut().find(|cv| {
            cv.kind == traced.kind
                && (contained_in(&traced, cv, dup_tol) || contained_in(cv, &traced, dup_tol))
        }) {
            if traced.samples.len() > existing.samples.len() {
                *existing = traced;
            }
            continue;
        }
        curves.push(traced);
    }

    curves.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    for (i, cv) in curves.iter_mut().enumerate() {
        cv.id = (i + 1) as u32;
    }
    Ok(Atlas { domain: cfg.domain, curves, rejected })
}
