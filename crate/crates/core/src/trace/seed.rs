//! Seed discovery for the curve tracer.
//!
//! Every real-axis pre-image curve in a box either crosses the box boundary
//! or crosses the critical line (each Γ passes through its zero), so scan
//! lines at σ_min, σ_max, σ = 1/2 and the two horizontal edges see them all.

use num_complex::Complex64;

use crate::eval::eval_zeta;

use super::{CurveKind, TraceConfig, TraceError};

#[derive(Debug, Clone, Copy)]
pub struct Seed {
    pub s: Complex64,
    pub kind: CurveKind,
}

/// Sign changes of g along the straight segment [a, b], refined by bisection
/// until |g| < tol. Returns the refined points.
pub(crate) fn scan_segment(
    a: Complex64,
    b: Complex64,
    step: f64,
    tol: f64,
    mut g: impl FnMut(Complex64) -> Result<f64, TraceError>,
) -> Result<Vec<Complex64>, TraceError> {
    let len = (b - a).norm();
    if len == 0.0 {
        return Ok(Vec::new());
    }
    let n = ((len / step).ceil() as usize).max(2);
    let dir = (b - a) / len;
    let mut out = Vec::new();
    let mut prev_s = a;
    let mut prev_g = g(a)?;
    for i in 1..=n {
        let s = a + dir * (len * i as f64 / n as f64);
        let cur_g = g(s)?;
        if prev_g == 0.0 {
            out.push(prev_s);
        } else if prev_g * cur_g < 0.0 {
            // bisect
            let (mut lo, mut hi, mut glo) = (prev_s, s, prev_g);
            for _ in 0..200 {
                let mid = (lo + hi) / 2.0;
                let gm = g(mid)?;
                if gm.abs() < tol {
                    lo = mid;
                    break;
                }
                if glo * gm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            out.push((lo + hi) / 2.0);
        }
        prev_s = s;
        prev_g = cur_g;
    }
    Ok(out)
}

/// Zeros of Im ζ along the scan lines of the box, classified Γ vs Γ′ by
/// Re ζ vs 1. Empty when nothing crosses.
pub fn seed_real_axis_preimages(cfg: &TraceConfig) -> Result<Vec<Seed>, TraceError> {
    cfg.validate()?;
    let b = &cfg.domain;
    let mut lines: Vec<(Complex64, Complex64)> = vec![
        // vertical scan lines
        (
            Complex64::new(b.sigma_max, b.t_min),
            Complex64::new(b.sigma_max, b.t_max),
        ),
        (
            Complex64::new(b.sigma_min, b.t_min),
            Complex64::new(b.sigma_min, b.t_max),
        ),
        // horizontal box edges
        (
            Complex64::new(b.sigma_min, b.t_min),
            Complex64::new(b.sigma_max, b.t_min),
        ),
        (
            Complex64::new(b.sigma_min, b.t_max),
            Complex64::new(b.sigma_max, b.t_max),
        ),
    ];
    if b.sigma_min < 0.5 && b.sigma_max > 0.5 {
        // interior line through the zeros; catches components that dodge the
        // box boundary
        lines.push((
            Complex64::new(0.5, b.t_min),
            Complex64::new(0.5, b.t_max),
        ));
    }

    let mut seeds = Vec::new();
    for (a, bb) in lines {
        let pts = scan_segment(a, bb, cfg.seed_scan_step, cfg.corrector_tol, |s| {
            Ok(eval_zeta(s, &cfg.eval).map(|r| r.value.im)?)
        })?;
        for s in pts {
            let z = eval_zeta(s, &cfg.eval)?.value;
            let kind = if z.re > 1.0 {
                CurveKind::PreimageAboveOne
            } else {
                CurveKind::PreimageBelowOne
            };
            seeds.push(Seed { s, kind });
        }
    }
    Ok(seeds)
}

/// Crossings of |ζ| = r along vertical lines at the given sigmas, clipped to
/// [t_lo, t_hi]. Used to seed circle pre-image components inside a strip.
pub fn seed_circle_preimages(
    r: f64,
    sigmas: &[f64],
    t_lo: f64,
    t_hi: f64,
    cfg: &TraceConfig,
) -> Result<Vec<Complex64>, TraceError> {
    let mut out = Vec::new();
    for &sigma in sigmas {
        let a = Complex64::new(sigma, t_lo);
        let b = Complex64::new(sigma, t_hi);
        let pts = scan_segment(a, b, cfg.seed_scan_step, cfg.corrector_tol, |s| {
            Ok(eval_zeta(s, &cfg.eval).map(|v| v.value.norm() - r)?)
        })?;
        out.extend(pts);
    }
    Ok(out)
}

/// Bisection refinement of a single Im ζ = 0 crossing on a vertical line.
pub fn refine_im_zero_on_vertical(
    sigma: f64,
    t_lo: f64,
    t_hi: f64,
    cfg: &TraceConfig,
) -> Result<Complex64, TraceError> {
    let pts = scan_segment(
        Complex64::new(sigma, t_lo),
        Complex64::new(sigma, t_hi),
        (t_hi - t_lo) / 64.0,
        cfg.corrector_tol,
        |s| Ok(eval_zeta(s, &cfg.eval).map(|r| r.value.im)?),
    )?;
    pts.into_iter()
        .next()
        .ok_or(TraceError::SeedInvalid { residual: f64::MAX })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::DomainBox;

    #[test]
    fn far_right_seeds_are_near_one() {
        // ζ(10 + it) → 1 with Dirichlet tail bound 2·2^{-σ}
        let cfg = TraceConfig::new(DomainBox::new(2.0, 10.0, 0.1, 50.0));
        let seeds = seed_real_axis_preimages(&cfg).unwrap();
        let right: Vec<_> = seeds
            .iter()
            .filter(|sd| (sd.s.re - 10.0).abs() < 1e-9)
            .collect();
        assert!(!right.is_empty());
        for sd in right {
            let z = eval_zeta(sd.s, &cfg.eval).unwrap().value;
            assert!((z - 1.0).norm() < 2.0 * 2.0f64.powf(-10.0));
        }
    }

    #[test]
    fn real_axis_detected_as_gamma_prime_seed() {
        // box straddling the real segment [2, 10]
        let cfg = TraceConfig::new(DomainBox::new(2.0, 10.0, -0.4, 0.4));
        let seeds = seed_real_axis_preimages(&cfg).unwrap();
        assert!(seeds
            .iter()
            .any(|sd| sd.s.im.abs() < 1e-9 && sd.kind.is_gamma_prime()));
    }

    #[test]
    fn seed_count_matches_dense_oracle() {
        // crossing count on the σ_max scan line cross-checked at step 1e-3
        let cfg = TraceConfig::new(DomainBox::new(-1.0, 6.0, 10.0, 30.0));
        let seeds = seed_real_axis_preimages(&cfg).unwrap();
        let on_line = |sigma: f64| {
            seeds
                .iter()
                .filter(|sd| (sd.s.re - sigma).abs() < 1e-9)
                .count()
        };
        let dense_count = |sigma: f64| {
            let mut count = 0;
            let mut prev = eval_zeta(Complex64::new(sigma, 10.0), &cfg.eval)
                .unwrap()
                .value
                .im;
            let mut t = 10.0;
            while t < 30.0 {
                t += 1e-3;
                let cur = eval_zeta(Complex64::new(sigma, t), &cfg.eval).unwrap().value.im;
                if prev * cur < 0.0 {
                    count += 1;
                }
                prev = cur;
            }
            count
        };
        assert_eq!(on_line(6.0), dense_count(6.0));
        assert_eq!(on_line(-1.0), dense_count(-1.0));
    }
}
