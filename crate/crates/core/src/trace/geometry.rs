//! Polyline geometry: distances, Hausdorff comparison, tangent angles, and
//! the ray-crossing test used for strip membership.

use num_complex::Complex64;
use thiserror::Error;

use super::{CurveKind, TracedCurve};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("z parameter {0} not attained on both curves")]
    ParamNotAttained(f64),
    #[error("tangent angles are defined for Γ′ curves only")]
    WrongKind,
    #[error("curve has no samples")]
    EmptyCurve,
}

fn seg_point_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let denom = ab.norm_sqr();
    if denom == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / denom;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

fn seg_seg_distance(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> f64 {
    // polyline segments are short; endpoint-to-segment distances suffice
    // unless the segments intersect
    let d = seg_point_distance(a1, a2, b1)
        .min(seg_point_distance(a1, a2, b2))
        .min(seg_point_distance(b1, b2, a1))
        .min(seg_point_distance(b1, b2, a2));
    if d > 0.0 && segments_intersect(a1, a2, b1, b2) {
        return 0.0;
    }
    d
}

fn orient2d(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_intersect(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> bool {
    let d1 = orient2d(a1, a2, b1);
    let d2 = orient2d(a1, a2, b2);
    let d3 = orient2d(b1, b2, a1);
    let d4 = orient2d(b1, b2, a2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Minimum Euclidean distance between two sample polylines.
pub fn curve_min_distance(a: &TracedCurve, b: &TracedCurve) -> f64 {
    if std::ptr::eq(a, b) || (a.id == b.id && a.id != 0) {
        return 0.0;
    }
    let mut best = f64::MAX;
    if a.samples.len() == 1 || b.samples.len() == 1 {
        for sa in &a.samples {
            for sb in &b.samples {
                best = best.min((sa.s - sb.s).norm());
            }
        }
        return best;
    }
    for wa in a.samples.windows(2) {
        for wb in b.samples.windows(2) {
            // cheap reject on endpoint distance
            let lower = (wa[0].s - wb[0].s).norm()
                - (wa[1].s - wa[0].s).norm()
                - (wb[1].s - wb[0].s).norm();
            if lower > best {
                continue;
            }
            best = best.min(seg_seg_distance(wa[0].s, wa[1].s, wb[0].s, wb[1].s));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

/// Distance from a point to the sample polyline.
pub fn point_to_curve_distance(p: Complex64, curve: &TracedCurve) -> f64 {
    if curve.samples.len() == 1 {
        return (p - curve.samples[0].s).norm();
    }
    curve
        .samples
        .windows(2)
        .map(|w| seg_point_distance(w[0].s, w[1].s, p))
        .fold(f64::MAX, f64::min)
}

/// Symmetric Hausdorff distance between the two sample sets, measured
/// against the opposite polyline.
pub fn hausdorff_distance(a: &TracedCurve, b: &TracedCurve) -> f64 {
    let one_sided = |x: &TracedCurve, y: &TracedCurve| {
        x.samples
            .iter()
            .map(|sm| point_to_curve_distance(sm.s, y))
            .fold(0.0f64, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Find s on the curve where Re ζ = z_param (curves of Γ′ kind attain each
/// value of (1, ∞) once); returns the interpolated point and unit tangent.
fn locate_on_image(curve: &TracedCurve, z_param: f64) -> Option<(Complex64, Complex64)> {
    for (i, w) in curve.samples.windows(2).enumerate() {
        let (ga, gb) = (w[0].z.re - z_param, w[1].z.re - z_param);
        if ga == 0.0 || ga * gb < 0.0 {
            let alpha = if ga == 0.0 { 0.0 } else { ga / (ga - gb) };
            let s = w[0].s + (w[1].s - w[0].s) * alpha;
            // central-difference tangent from the bracketing samples
            let lo = i.saturating_sub(1);
            let hi = (i + 2).min(curve.samples.len() - 1);
            let tan = curve.samples[hi].s - curve.samples[lo].s;
            let n = tan.norm();
            if n == 0.0 {
                return None;
            }
            return Some((s, tan / n));
        }
    }
    None
}

/// Unsigned angle between the tangents of two Γ′ curves at the points whose
/// images equal z_param.
pub fn tangent_angle_between(
    a: &TracedCurve,
    b: &TracedCurve,
    z_param: f64,
) -> Result<f64, GeometryError> {
    if a.kind != CurveKind::PreimageAboveOne || b.kind != CurveKind::PreimageAboveOne {
        return Err(GeometryError::WrongKind);
    }
    if a.samples.is_empty() || b.samples.is_empty() {
        return Err(GeometryError::EmptyCurve);
    }
    let (_, ta) = locate_on_image(a, z_param).ok_or(GeometryError::ParamNotAttained(z_param))?;
    let (_, tb) = locate_on_image(b, z_param).ok_or(GeometryError::ParamNotAttained(z_param))?;
    let cosang = (ta * tb.conj()).re.clamp(-1.0, 1.0);
    Ok(cosang.acos())
}

/// Number of crossings of the upward vertical ray from p with the polyline,
/// with the polyline extended horizontally to ±∞ from its left-most and
/// right-most samples. Odd count means p lies below the curve.
pub fn upward_crossings(p: Complex64, curve: &TracedCurve) -> usize {
    let mut count = 0;
    for w in curve.samples.windows(2) {
        let (a, b) = (w[0].s, w[1].s);
        // half-open rule on σ to avoid double counting at shared vertices
        if (a.re <= p.re) != (b.re <= p.re) {
            let alpha = (p.re - a.re) / (b.re - a.re);
            let t_cross = a.im + alpha * (b.im - a.im);
            if t_cross > p.im {
                count += 1;
            }
        }
    }
    // horizontal extensions past both ends: curves from neighbouring runs
    // end at slightly different σ, so a ray near the domain edge must not
    // slip past a boundary it conceptually crosses
    if let Some(right) = curve
        .samples
        .iter()
        .max_by(|x, y| x.s.re.partial_cmp(&y.s.re).unwrap())
    {
        if p.re > right.s.re && right.s.im > p.im {
            count += 1;
        }
    }
    if let Some(left) = curve
        .samples
        .iter()
        .min_by(|x, y| x.s.re.partial_cmp(&y.s.re).unwrap())
    {
        // strict: a point exactly at the left vertex is handled by the
        // half-open segment rule above
        if p.re < left.s.re && left.s.im > p.im {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{CurveEnd, CurveSample};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(kind: CurveKind, pts: &[(f64, f64)]) -> TracedCurve {
        TracedCurve {
            id: 0,
            kind,
            samples: pts
                .iter()
                .map(|&(re, im)| CurveSample {
                    s: c(re, im),
                    z: c(re, im), // image is irrelevant for pure geometry tests
                })
                .collect(),
            strip_index: None,
            component_index: None,
            start_end: CurveEnd::EscapesDomain,
            finish_end: CurveEnd::EscapesRight,
        }
    }

    #[test]
    fn self_distance_is_zero() {
        let a = poly(CurveKind::PreimageBelowOne, &[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(curve_min_distance(&a, &a), 0.0);
    }

    #[test]
    fn parallel_lines_distance() {
        let a = poly(CurveKind::PreimageBelowOne, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let b = poly(CurveKind::PreimageBelowOne, &[(0.0, 0.5), (1.0, 0.5), (2.0, 0.5)]);
        assert!((curve_min_distance(&a, &b) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn crossing_segments_distance_zero() {
        let a = poly(CurveKind::PreimageBelowOne, &[(0.0, -1.0), (0.0, 1.0)]);
        let b = poly(CurveKind::PreimageBelowOne, &[(-1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(curve_min_distance(&a, &b), 0.0);
    }

    #[test]
    fn identical_curves_have_zero_angle() {
        let mk = || {
            let mut p = poly(CurveKind::PreimageAboveOne, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
            // images decreasing toward +∞: fake a monotone Re ζ over (1,∞)
            p.samples[0].z = c(4.0, 0.0);
            p.samples[1].z = c(2.5, 0.0);
            p.samples[2].z = c(1.5, 0.0);
            p
        };
        let a = mk();
        let b = mk();
        assert!(tangent_angle_between(&a, &b, 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn unattained_param_is_error() {
        let mut a = poly(CurveKind::PreimageAboveOne, &[(0.0, 0.0), (1.0, 0.0)]);
        a.samples[0].z = c(4.0, 0.0);
        a.samples[1].z = c(3.0, 0.0);
        let b = a.clone();
        assert!(matches!(
            tangent_angle_between(&a, &b, 2.0),
            Err(GeometryError::ParamNotAttained(_))
        ));
    }

    #[test]
    fn upward_crossing_counts() {
        let curve = poly(CurveKind::PreimageAboveOne, &[(0.0, 1.0), (4.0, 1.0)]);
        assert_eq!(upward_crossings(c(2.0, 0.0), &curve), 1); // below
        assert_eq!(upward_crossings(c(2.0, 2.0), &curve), 0); // above
        assert_eq!(upward_crossings(c(9.0, 0.0), &curve), 1); // below extension
        assert_eq!(upward_crossings(c(9.0, 2.0), &curve), 0);
    }

    #[test]
    fn hausdorff_symmetric_pairs() {
        let a = poly(CurveKind::PreimageBelowOne, &[(0.0, 0.0), (2.0, 0.0)]);
        let b = poly(CurveKind::PreimageBelowOne, &[(0.0, 0.1), (2.0, 0.1)]);
        let d = hausdorff_distance(&a, &b);
        assert!((d - 0.1).abs() < 1e-12);
    }
}
