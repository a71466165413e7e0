//! Strip assembly and classification.
//!
//! The Γ′ components that escape right cut the upper half-plane into strips.
//! Each strip inventories its Γ components and zeros, gets an m-type, and is
//! checked against the tail-bound and asymptotic-angle properties of its
//! boundaries.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{eval_zeta, EvalConfig, EvalError};
use crate::trace::{
    tangent_angle_between, upward_crossings, Atlas, CurveEnd, GeometryError, TracedCurve,
};
use crate::zeros::{refine_root, ZeroError, ZeroRecord};

#[derive(Debug, Error)]
pub enum StripError {
    #[error("Γ component {curve_id} fits no strip of the box")]
    OrphanComponent { curve_id: u32 },
    #[error("strip {j} has {candidates} principal candidates instead of one")]
    AmbiguousPrincipal { j: usize, candidates: usize },
    #[error("strip {j}: component count and zero count disagree")]
    InconsistentStrip { j: usize },
    #[error("strip {j}: no ζ = 1 point found for a non-principal component")]
    NotFound { j: usize },
    #[error("strip {j} is missing a bounding curve for this check")]
    MissingBoundary { j: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Zero(#[from] ZeroError),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OnePoint {
    /// s_{j,k}: the ζ = 1 endpoint of a non-principal component.
    pub s: Complex64,
    /// Where the same component crosses ζ = −1, when inside the box.
    pub minus_one: Option<Complex64>,
    pub component: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StripRecord {
    /// 1-based for complete strips; 0 is the partial region below the first
    /// right-escaping Γ′ of the box.
    pub j: usize,
    pub lower_gamma_prime: Option<u32>,
    pub upper_gamma_prime: Option<u32>,
    /// Missing one bounding Γ′ (box truncation); excluded from lemma verdicts.
    pub partial: bool,
    pub gamma_components: Vec<u32>,
    pub principal: Option<u32>,
    pub m_type: usize,
    /// Indices into the zero list passed to assemble_strips.
    pub zeros: Vec<usize>,
    pub one_points: Vec<OnePoint>,
    /// t of the bounding curves where they cross σ = 1/2.
    pub t_extent: (Option<f64>, Option<f64>),
}

fn escapes_right(curve: &TracedCurve) -> bool {
    curve.start_end == CurveEnd::EscapesRight || curve.finish_end == CurveEnd::EscapesRight
}

fn rightmost_t(curve: &TracedCurve) -> f64 {
    curve
        .samples
        .iter()
        .max_by(|a, b| a.s.re.partial_cmp(&b.s.re).unwrap())
        .map(|sm| sm.s.im)
        .unwrap()
}

fn in_strip(p: Complex64, lower: Option<&TracedCurve>, upper: Option<&TracedCurve>) -> bool {
    let below_upper = match upper {
        Some(u) => upward_crossings(p, u) % 2 == 1,
        None => true,
    };
    let above_lower = match lower {
        Some(l) => upward_crossings(p, l) % 2 == 0,
        None => true,
    };
    below_upper && above_lower
}

/// Dirichlet tail bound for the principal component: |ζ − 1| ≤ 2·2^(−σ) on
/// every sample with σ ≥ 3.
fn satisfies_tail_bound(curve: &TracedCurve) -> bool {
    let mut probed = false;
    for sm in &curve.samples {
        if sm.s.re >= 3.0 {
            probed = true;
            if (sm.z - 1.0).norm() > 2.0 * 2.0f64.powf(-sm.s.re) {
                return false;
            }
        }
    }
    probed
}

/// Representative interior point of a component: the sample of smallest |ζ|
/// (adjacent to the zero for zero-carrying components, harmless otherwise).
fn representative(curve: &TracedCurve) -> Complex64 {
    curve
        .samples
        .iter()
        .min_by(|a, b| a.z.norm().partial_cmp(&b.z.norm()).unwrap())
        .map(|sm| sm.s)
        .unwrap()
}

/// Partition the atlas into strips between consecutive right-escaping Γ′
/// curves and inventory each strip's Γ components and zeros.
pub fn assemble_strips(atlas: &Atlas, zeros: &[ZeroRecord]) -> Result<Vec<StripRecord>, StripError> {
    let mut boundaries: Vec<&TracedCurve> = atlas
        .gamma_primes()
        .filter(|cv| escapes_right(cv))
        .collect();
    boundaries.sort_by(|a, b| rightmost_t(a).partial_cmp(&rightmost_t(b)).unwrap());

    // region k is below boundaries[k]; the last region is above them all
    let n = boundaries.len();
    let mut strips: Vec<StripRecord> = (0..=n)
        .map(|k| {
            let lower = if k == 0 { None } else { Some(boundaries[k - 1]) };
            let upper = boundaries.get(k).copied();
            StripRecord {
                j: k,
                lower_gamma_prime: lower.map(|cv| cv.id),
                upper_gamma_prime: upper.map(|cv| cv.id),
                partial: lower.is_none() || upper.is_none(),
                gamma_components: Vec::new(),
                principal: None,
                m_type: 0,
                zeros: Vec::new(),
                one_points: Vec::new(),
                t_extent: (
                    lower.and_then(|cv| cv.t_at_sigma(0.5)),
                    upper.and_then(|cv| cv.t_at_sigma(0.5)),
                ),
            }
        })
        .collect();

    let locate = |p: Complex64| -> Option<usize> {
        (0..=n).find(|&k| {
            let lower = if k == 0 { None } else { Some(boundaries[k - 1]) };
            in_strip(p, lower, boundaries.get(k).copied())
        })
    };

    for curve in atlas.gammas() {
        let p = representative(curve);
        match locate(p) {
            Some(k) => strips[k].gamma_components.push(curve.id),
            None => return Err(StripError::OrphanComponent { curve_id: curve.id }),
        }
    }
    for (i, zr) in zeros.iter().enumerate() {
        if let Some(k) = locate(zr.s()) {
            strips[k].zeros.push(i);
        }
    }

    for strip in &mut strips {
        strip.m_type = strip.gamma_components.len();
        let candidates: Vec<u32> = strip
            .gamma_components
            .iter()
            .copied()
            .filter(|&id| {
                let cv = atlas.curve(id).unwrap();
                escapes_right(cv) && satisfies_tail_bound(cv)
            })
            .collect();
        match candidates.len() {
            1 => strip.principal = Some(candidates[0]),
            _ if strip.partial => strip.principal = candidates.first().copied(),
            c => return Err(StripError::AmbiguousPrincipal { j: strip.j, candidates: c }),
        }
    }
    Ok(strips)
}

/// m = number of Γ components, cross-checked against the zero inventory.
pub fn classify_m_type(strip: &StripRecord) -> Result<usize, StripError> {
    if strip.zeros.len() != strip.gamma_components.len() {
        return Err(StripError::InconsistentStrip { j: strip.j });
    }
    Ok(strip.m_type)
}

/// For every non-principal component, refine its ζ = 1 endpoint (s_{j,k})
/// and its ζ = −1 crossing.
pub fn locate_one_points(
    strip: &StripRecord,
    atlas: &Atlas,
    cfg: &EvalConfig,
) -> Result<Vec<OnePoint>, StripError> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for &id in &strip.gamma_components {
        if Some(id) == strip.principal {
            continue;
        }
        let curve = atlas.curve(id).unwrap();
        // the non-principal arc terminates where ζ = 1; Newton-polish the
        // endpoint(s)
        let mut s_point: Option<Complex64> = None;
        for (end, sample) in [
            (curve.start_end, curve.first_sample()),
            (curve.finish_end, curve.last_sample()),
        ] {
            if end != CurveEnd::ReachesUnitValue {
                continue;
            }
            if let Ok(s) = refine_root(sample.s, one, cfg) {
                if (eval_zeta(s, cfg)?.value - one).norm() < 1e-10 {
                    s_point = Some(s);
                    break;
                }
            }
        }
        let s_point = s_point.ok_or(StripError::NotFound { j: strip.j })?;

        // ζ = −1 crossing: the image is real along the component
        let mut minus_one = None;
        for w in curve.samples.windows(2) {
            let (ga, gb) = (w[0].z.re + 1.0, w[1].z.re + 1.0);
            if ga == 0.0 || ga * gb < 0.0 {
                let alpha = if ga == 0.0 { 0.0 } else { ga / (ga - gb) };
                let guess = w[0].s + (w[1].s - w[0].s) * alpha;
                if let Ok(s) = refine_root(guess, -one, cfg) {
                    minus_one = Some(s);
                    break;
                }
            }
        }
        out.push(OnePoint { s: s_point, minus_one, component: id });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Lemma1Report {
    /// False for partial strips, which are excluded from the verdict.
    pub applicable: bool,
    pub pass: bool,
    pub principal: Option<u32>,
    pub right_escaping: usize,
}

/// Exactly one component escapes right with the Dirichlet tail bound; every
/// other component stays in the box or turns back.
pub fn verify_lemma1(strip: &StripRecord, atlas: &Atlas) -> Lemma1Report {
    if strip.partial {
        return Lemma1Report {
            applicable: false,
            pass: true,
            principal: strip.principal,
            right_escaping: 0,
        };
    }
    let mut right = 0usize;
    let mut bounded = 0usize;
    for &id in &strip.gamma_components {
        let cv = atlas.curve(id).unwrap();
        if escapes_right(cv) {
            right += 1;
            if satisfies_tail_bound(cv) {
                bounded += 1;
            }
        }
    }
    Lemma1Report {
        applicable: true,
        pass: right == 1 && bounded == 1 && strip.principal.is_some(),
        principal: strip.principal,
        right_escaping: right,
    }
}

#[derive(Debug, Clone)]
pub struct Lemma2Report {
    pub applicable: bool,
    pub angles: Vec<f64>,
    pub pass: bool,
}

fn re_z_at_sigma(curve: &TracedCurve, sigma: f64) -> Option<f64> {
    for w in curve.samples.windows(2) {
        if (w[0].s.re - sigma) * (w[1].s.re - sigma) <= 0.0 && w[0].s.re != w[1].s.re {
            let alpha = (sigma - w[0].s.re) / (w[1].s.re - w[0].s.re);
            return Some(w[0].z.re + alpha * (w[1].z.re - w[0].z.re));
        }
    }
    None
}

/// Tangent angles between the bounding Γ′ curves at matched image points;
/// the probe sequence must be strictly decreasing and end below 0.05 rad.
pub fn verify_lemma2(
    strip: &StripRecord,
    atlas: &Atlas,
    probe_sigmas: &[f64],
) -> Result<Lemma2Report, StripError> {
    if strip.partial {
        return Ok(Lemma2Report { applicable: false, angles: Vec::new(), pass: true });
    }
    let lower = atlas
        .curve(strip.lower_gamma_prime.unwrap())
        .ok_or(StripError::MissingBoundary { j: strip.j })?;
    let upper = atlas
        .curve(strip.upper_gamma_prime.unwrap())
        .ok_or(StripError::MissingBoundary { j: strip.j })?;
    let mut angles = Vec::new();
    for &sigma in probe_sigmas {
        let z_param = re_z_at_sigma(lower, sigma)
            .ok_or(GeometryError::ParamNotAttained(sigma))?;
        angles.push(tangent_angle_between(lower, upper, z_param)?);
    }
    let decreasing = angles.windows(2).all(|w| w[1] < w[0]);
    let small = angles.last().map(|&a| a < 0.05).unwrap_or(false);
    Ok(Lemma2Report { applicable: true, pass: decreasing && small, angles })
}

/// m-type → number of strips of that type (complete strips only).
pub fn m_type_histogram(strips: &[StripRecord]) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for strip in strips.iter().filter(|st| !st.partial) {
        *hist.entry(strip.m_type).or_insert(0) += 1;
    }
    hist
}
