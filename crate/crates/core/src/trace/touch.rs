//! Touch-radius search for the circle pre-images around two zeros.
//!
//! As r grows from 0 the loops {|ζ| = r} around each zero expand; either they
//! meet at a saddle of |ζ| (a zero of ζ′) at some r0 < 1, or they stay
//! disjoint for every r ≤ 1.

use num_complex::Complex64;
use thiserror::Error;

use crate::eval::{eval_zeta, eval_zeta_prime};

use super::geometry::point_to_curve_distance;
use super::seed::scan_segment;
use super::{trace_circle_preimage, TraceConfig, TraceError, TracedCurve};

#[derive(Debug, Error)]
pub enum TouchError {
    #[error("zeros are separated by a barrier curve on which |ζ| > 1")]
    NotSameStrip,
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy)]
pub enum TouchOutcome {
    Touch {
        r0: f64,
        /// Saddle where the loops meet; None when the ζ′ polish did not
        /// converge, in which case r0 alone is the bisection estimate.
        touch_point: Option<Complex64>,
    },
    NoTouch,
}

/// Walk right from `center` (assumed strictly inside {|ζ| < r}) until the
/// level |ζ| = r is crossed, then bisect onto it.
pub(crate) fn seed_on_circle(
    center: Complex64,
    r: f64,
    cfg: &TraceConfig,
) -> Result<Complex64, TraceError> {
    let step = cfg.seed_scan_step.min(cfg.max_step);
    let g = |s: Complex64| -> Result<f64, TraceError> {
        Ok(eval_zeta(s, &cfg.eval).map(|v| v.value.norm() - r)?)
    };
    let mut a = center;
    let mut ga = g(a)?;
    if ga >= 0.0 {
        return Err(TraceError::SeedInvalid { residual: ga });
    }
    let sigma_limit = cfg.domain.sigma_max + 2.0;
    while a.re < sigma_limit {
        let b = a + step;
        let gb = g(b)?;
        if gb >= 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..100 {
                let mid = (lo + hi) / 2.0;
                let gm = g(mid)?;
                if gm.abs() < cfg.corrector_tol {
                    return Ok(mid);
                }
                if gm < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok((lo + hi) / 2.0);
        }
        a = b;
        ga = gb;
    }
    Err(TraceError::SeedInvalid { residual: ga })
}

/// Newton iteration on ζ′ with ζ″ by central difference.
pub(crate) fn newton_zeta_prime_root(
    mut s: Complex64,
    cfg: &TraceConfig,
) -> Result<Complex64, TraceError> {
    let h = 1e-5;
    for _ in 0..40 {
        let zp = eval_zeta_prime(s, &cfg.eval)?.value;
        let zpp = (eval_zeta_prime(s + h, &cfg.eval)?.value
            - eval_zeta_prime(s - h, &cfg.eval)?.value)
            / (2.0 * h);
        if zpp.norm() == 0.0 {
            break;
        }
        let d = zp / zpp;
        s -= d;
        if d.norm() < 1e-11 {
            return Ok(s);
        }
    }
    Ok(s)
}

enum Probe {
    Disjoint { gap_mid: Complex64 },
    Touching { hint: Complex64 },
}

fn closest_pair_midpoint(a: &TracedCurve, b: &TracedCurve) -> (f64, Complex64) {
    let mut best = f64::MAX;
    let mut mid = a.samples[0].s;
    for sa in &a.samples {
        for sb in &b.samples {
            let d = (sa.s - sb.s).norm();
            if d < best {
                best = d;
                mid = (sa.s + sb.s) / 2.0;
            }
        }
    }
    (best, mid)
}

fn trace_or_touch(
    r: f64,
    seed: Complex64,
    cfg: &TraceConfig,
) -> Result<Result<TracedCurve, Complex64>, TouchError> {
    match trace_circle_preimage(r, seed, cfg) {
        Ok(curve) => Ok(Ok(curve)),
        // a saddle on the level set stops the tracer: the loops are touching
        Err(TraceError::BranchPointEncountered { at })
        | Err(TraceError::CorrectorStalled { at }) => Ok(Err(at)),
        Err(e) => Err(e.into()),
    }
}

fn probe(
    r: f64,
    zero_a: Complex64,
    zero_b: Complex64,
    cfg: &TraceConfig,
) -> Result<Probe, TouchError> {
    // when the rightward ray never leaves {|ζ| < r} inside the domain, the
    // sublevel region around the zero is no longer a small loop — it has
    // opened into the strip interior, so the components have merged
    let seed_or_merged = |zero: Complex64| -> Result<Option<Complex64>, TouchError> {
        match seed_on_circle(zero, r, cfg) {
            Ok(s) => Ok(Some(s)),
            Err(TraceError::SeedInvalid { residual }) if residual < 0.0 => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    let seed_a = match seed_or_merged(zero_a)? {
        Some(s) => s,
        None => return Ok(Probe::Touching { hint: (zero_a + zero_b) / 2.0 }),
    };
    let curve_a = match trace_or_touch(r, seed_a, cfg)? {
        Ok(c) => c,
        Err(at) => return Ok(Probe::Touching { hint: at }),
    };
    let seed_b = match seed_or_merged(zero_b)? {
        Some(s) => s,
        None => return Ok(Probe::Touching { hint: (zero_a + zero_b) / 2.0 }),
    };
    // merged: the component around zero_a already carries zero_b's seed
    if point_to_curve_distance(seed_b, &curve_a) < 0.5 * cfg.max_step {
        return Ok(Probe::Touching {
            hint: (zero_a + zero_b) / 2.0,
        });
    }
    let curve_b = match trace_or_touch(r, seed_b, cfg)? {
        Ok(c) => c,
        Err(at) => return Ok(Probe::Touching { hint: at }),
    };
    let (dist, gap_mid) = closest_pair_midpoint(&curve_a, &curve_b);
    if dist < cfg.min_step {
        Ok(Probe::Touching { hint: gap_mid })
    } else {
        Ok(Probe::Disjoint { gap_mid })
    }
}

/// Scan a vertical line between the two ordinates for a curve with ζ real
/// and > 1. The scan runs at σ = 3, where only the right-escaping Γ′
/// boundaries produce such crossings — the short Γ′ arcs attached to the
/// one-points also cross the critical line with ζ > 1, but they never reach
/// this far right and do not separate strips.
fn barrier_between(
    zero_a: Complex64,
    zero_b: Complex64,
    cfg: &TraceConfig,
) -> Result<bool, TouchError> {
    let (t_lo, t_hi) = if zero_a.im <= zero_b.im {
        (zero_a.im, zero_b.im)
    } else {
        (zero_b.im, zero_a.im)
    };
    let sigma = 3.0;
    let crossings = scan_segment(
        Complex64::new(sigma, t_lo),
        Complex64::new(sigma, t_hi),
        cfg.seed_scan_step,
        cfg.corrector_tol,
        |s| Ok(eval_zeta(s, &cfg.eval).map(|v| v.value.im)?),
    )
    .map_err(TouchError::Trace)?;
    for s in crossings {
        let z = eval_zeta(s, &cfg.eval).map_err(TraceError::from)?.value;
        if z.re > 1.0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Smallest r ∈ (0, 1] at which the circle pre-image components around the
/// two zeros meet, by bisection; NoTouch when they stay disjoint up to r = 1.
pub fn find_touch_radius(
    zero_a: Complex64,
    zero_b: Complex64,
    cfg: &TraceConfig,
) -> Result<TouchOutcome, TouchError> {
    cfg.validate().map_err(TouchError::Trace)?;
    if barrier_between(zero_a, zero_b, cfg)? {
        return Err(TouchError::NotSameStrip);
    }

    let mut hi = 1.0 - 1e-6;
    let mut hint = match probe(hi, zero_a, zero_b, cfg)? {
        Probe::Disjoint { .. } => return Ok(TouchOutcome::NoTouch),
        Probe::Touching { hint } => hint,
    };

    // establish a disjoint lower bracket
    let mut lo = 0.2 * (zero_a - zero_b).norm().min(1.0);
    loop {
        match probe(lo, zero_a, zero_b, cfg)? {
            Probe::Disjoint { .. } => break,
            Probe::Touching { hint: h } => hint = h,
        }
        lo *= 0.5;
        if lo < 1e-4 {
            // loops of radius-0 limit cannot touch; treat as immediately
            // touching with the bisection interval collapsed
            break;
        }
    }

    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        match probe(mid, zero_a, zero_b, cfg)? {
            Probe::Disjoint { gap_mid } => {
                lo = mid;
                hint = gap_mid;
            }
            Probe::Touching { hint: h } => {
                hi = mid;
                hint = h;
            }
        }
    }

    // polish: the touch point is a saddle of |ζ|, i.e. a zero of ζ′
    let polished = newton_zeta_prime_root(hint, cfg).map_err(TouchError::Trace)?;
    let zp = eval_zeta_prime(polished, &cfg.eval)
        .map_err(TraceError::from)?
        .value;
    if zp.norm() < 1e-6 {
        let r0 = eval_zeta(polished, &cfg.eval)
            .map_err(TraceError::from)?
            .value
            .norm();
        Ok(TouchOutcome::Touch {
            r0,
            touch_point: Some(polished),
        })
    } else {
        Ok(TouchOutcome::Touch {
            r0: 0.5 * (lo + hi),
            touch_point: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::DomainBox;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn seed_on_circle_lands_on_level() {
        let cfg = TraceConfig::new(DomainBox::new(-1.0, 10.0, 13.0, 15.0));
        let zero = c(0.5, 14.134725141734695);
        for r in [0.05, 0.3, 0.8] {
            let s = seed_on_circle(zero, r, &cfg).unwrap();
            let z = eval_zeta(s, &cfg.eval).unwrap().value;
            assert!((z.norm() - r).abs() < 1e-8, "r = {r}");
            assert!(s.re > zero.re);
        }
    }

    #[test]
    fn seed_rejects_center_outside_disc() {
        let cfg = TraceConfig::new(DomainBox::new(-1.0, 10.0, 13.0, 15.0));
        // ζ(3) ≈ 1.202, so |ζ| > 0.05 already at the center
        assert!(matches!(
            seed_on_circle(c(3.0, 0.5), 0.05, &cfg),
            Err(TraceError::SeedInvalid { .. })
        ));
    }

    #[test]
    fn newton_finds_real_zeta_prime_root() {
        // ζ′ has a real root between the trivial zeros −2 and −4
        let cfg = TraceConfig::new(DomainBox::new(-6.0, 2.0, -1.0, 1.0));
        let root = newton_zeta_prime_root(c(-2.5, 0.0), &cfg).unwrap();
        assert!(root.re < -2.0 && root.re > -4.0);
        assert!(root.im.abs() < 1e-9);
        let zp = eval_zeta_prime(root, &cfg.eval).unwrap().value;
        assert!(zp.norm() < 1e-9, "|ζ′| = {:e}", zp.norm());
    }

    #[test]
    fn different_strips_give_barrier_error() {
        // the first two zeros lie in different strips
        let cfg = TraceConfig::new(DomainBox::new(-1.0, 10.0, 12.0, 23.0));
        let z1 = c(0.5, 14.134725141734695);
        let z2 = c(0.5, 21.022039638771554);
        assert!(matches!(
            find_touch_radius(z1, z2, &cfg),
            Err(TouchError::NotSameStrip)
        ));
    }
}
