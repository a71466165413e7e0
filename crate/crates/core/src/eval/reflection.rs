//! Functional-equation reflection:
//!   ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
//!
//! The prefactor F(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) and its derivative are
//! assembled from log Γ so the product stays in range for |t| ≤ 400.

use num_complex::Complex64;

use super::gamma::{digamma, log_gamma};
use super::{EvalError, EvalMethod, EvalResult};

const PI: f64 = std::f64::consts::PI;

pub struct ReflectionFactors {
    pub f: Complex64,
    pub f_prime: Complex64,
}

/// F(s) and F′(s). Valid away from the poles of Γ(1−s) (s = 1, 2, 3, …);
/// at even integers ≤ 0 both the sine factor and F vanish cleanly.
pub fn reflection_factors(s: Complex64) -> ReflectionFactors {
    let one_minus = Complex64::new(1.0, 0.0) - s;
    // base = 2^s π^{s-1} Γ(1-s)
    let log_base = s * 2.0f64.ln() + (s - 1.0) * PI.ln() + log_gamma(one_minus);
    let base = log_base.exp();
    let half = PI * s / 2.0;
    let sin_h = half.sin();
    let cos_h = half.cos();
    let f = base * sin_h;
    // F' = base·[ (ln 2π − ψ(1−s)) sin(πs/2) + (π/2) cos(πs/2) ]
    let f_prime = base * ((2.0 * PI).ln() * sin_h - digamma(one_minus) * sin_h + PI / 2.0 * cos_h);
    ReflectionFactors { f, f_prime }
}

fn near_integer_ge_two(s: Complex64, tol: f64) -> Option<i64> {
    if s.im.abs() < tol {
        let n = s.re.round();
        if n >= 2.0 && (s.re - n).abs() < tol {
            return Some(n as i64);
        }
    }
    None
}

/// RHS of the functional equation, given ζ(1−s) computed by the caller.
/// Rejects s at {2, 3, …} where Γ(1−s) is at a pole.
pub fn reflection_rhs_from(
    s: Complex64,
    zeta_one_minus: &EvalResult,
) -> Result<EvalResult, EvalError> {
    if let Some(n) = near_integer_ge_two(s, 1e-9) {
        return Err(EvalError::ReflectionSingular { at: n });
    }
    let fac = reflection_factors(s);
    let value = fac.f * zeta_one_minus.value;
    let err = fac.f.norm() * zeta_one_minus.abs_error_estimate
        + 8.0 * f64::EPSILON * (1.0 + s.norm()) * value.norm();
    Ok(EvalResult {
        value,
        abs_error_estimate: err,
        method: EvalMethod::Reflection,
    })
}

/// Limit form near even integers ≥ 2, with sin(πs/2)Γ(1−s) rewritten through
/// the gamma reflection formula:
///   F(s) = 2^{s−1} π^s / (cos(πs/2) Γ(s))
pub fn reflection_rhs_limit_from(
    s: Complex64,
    zeta_one_minus: &EvalResult,
) -> Result<EvalResult, EvalError> {
    let cos_h = (PI * s / 2.0).cos();
    if cos_h.norm() < 1e-8 {
        // odd integers: the rewritten form is singular, the direct one is not
        return reflection_rhs_from(s, zeta_one_minus);
    }
    let log_f = (s - 1.0) * 2.0f64.ln() + s * PI.ln() - log_gamma(s);
    let f = log_f.exp() / cos_h;
    let value = f * zeta_one_minus.value;
    Ok(EvalResult {
        value,
        abs_error_estimate: f.norm() * zeta_one_minus.abs_error_estimate
            + 8.0 * f64::EPSILON * (1.0 + s.norm()) * value.norm(),
        method: EvalMethod::Reflection,
    })
}
