//! Multi-method evaluation of ζ, ζ′ and Γ with per-call error estimates.
//!
//! Method dispatch: Laurent expansion for |s−1| < 0.5, functional-equation
//! reflection for Re s < −0.5, Euler–Maclaurin elsewhere. The overlap zones
//! are cross-validated in tests. Inputs with Im s < 0 are evaluated at the
//! conjugate and conjugated back, so ζ(s̄) = conj ζ(s) holds exactly.

pub mod bernoulli;
mod em;
mod gamma;
mod laurent;
mod reflection;
mod stieltjes;

use num_complex::Complex64;
use thiserror::Error;

pub use em::{effective_terms, zeta_em, EmOutput};
pub use gamma::{digamma, eval_gamma, log_gamma};
pub use laurent::eval_zeta_laurent;
pub use reflection::{reflection_factors, ReflectionFactors};
pub use stieltjes::{builtin_table, eval_stieltjes, stieltjes_table, StieltjesTable};

pub type ComplexValue = Complex64;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("argument within the pole exclusion radius of s = 1")]
    PoleProximity,
    #[error("error budget not met: estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    AccuracyNotReached { estimate: f64, tolerance: f64 },
    #[error("evaluation at a pole (index {index})")]
    AtPole { index: i64 },
    #[error("Laurent table too short: requested {requested}, available {available}")]
    InsufficientTable { requested: usize, available: usize },
    #[error("Laurent expansion outside its disk of control (|s-1| = {radius})")]
    DomainWarning { radius: f64 },
    #[error("reflection RHS singular at s = {at}")]
    ReflectionSingular { at: i64 },
    #[error("Stieltjes extrapolants diverge")]
    NonConvergent,
    #[error("result overflows double precision")]
    Overflow,
    #[error("invalid evaluation config: {0}")]
    BadConfig(String),
    #[error("non-finite input")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EvalMethod {
    EulerMaclaurin,
    Laurent,
    Reflection,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: EvalMethod,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    /// Baseline direct-sum length N; the effective length is
    /// max(em_terms, ⌈2|t|⌉).
    pub em_terms: usize,
    /// Number of Bernoulli correction terms q.
    pub bernoulli_order: usize,
    /// Truncation of the Laurent expansion in the dispatch region.
    pub laurent_terms: usize,
    pub target_abs_tol: f64,
    pub pole_exclusion_radius: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            em_terms: 20,
            bernoulli_order: 12,
            laurent_terms: 14,
            target_abs_tol: 1e-9,
            pole_exclusion_radius: 1e-6,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.em_terms < 1 || self.bernoulli_order < 1 {
            return Err(EvalError::BadConfig("em_terms and bernoulli_order must be >= 1".into()));
        }
        if self.em_terms < self.bernoulli_order {
            return Err(EvalError::BadConfig("em_terms must be >= bernoulli_order".into()));
        }
        if !(self.target_abs_tol > 0.0 && self.target_abs_tol < 1.0) {
            return Err(EvalError::BadConfig("target_abs_tol must lie in (0, 1)".into()));
        }
        if self.pole_exclusion_radius <= 0.0 {
            return Err(EvalError::BadConfig("pole_exclusion_radius must be positive".into()));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_abs_tol = tol;
        self
    }
}

fn check_finite(s: Complex64) -> Result<(), EvalError> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(EvalError::NonFinite)
    }
}

fn gate(result: EvalResult, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    if result.abs_error_estimate <= cfg.target_abs_tol {
        Ok(result)
    } else {
        Err(EvalError::AccuracyNotReached {
            estimate: result.abs_error_estimate,
            tolerance: cfg.target_abs_tol,
        })
    }
}

/// ζ(s) and ζ′(s) in one pass; the workhorse for curve tracing.
pub fn eval_zeta_with_prime(
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<(EvalResult, EvalResult), EvalError> {
    check_finite(s)?;
    cfg.validate()?;
    if (s - 1.0).norm() <= cfg.pole_exclusion_radius {
        return Err(EvalError::PoleProximity);
    }
    if s.im < 0.0 {
        let (v, p) = eval_zeta_with_prime(s.conj(), cfg)?;
        return Ok((
            EvalResult { value: v.value.conj(), ..v },
            EvalResult { value: p.value.conj(), ..p },
        ));
    }

    let (value, prime) = if (s - 1.0).norm() < 0.5 {
        let table = builtin_table();
        let terms = cfg.laurent_terms.min(table.len());
        let out = laurent::zeta_laurent(s, table, terms)?;
        (
            EvalResult {
                value: out.value,
                abs_error_estimate: out.value_err,
                method: EvalMethod::Laurent,
            },
            EvalResult {
                value: out.prime,
                abs_error_estimate: out.value_err * (2.0 + 2.0 / (s - 1.0).norm()),
                method: EvalMethod::Laurent,
            },
        )
    } else if s.re < -0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - s;
        let em = zeta_em(
            one_minus,
            effective_terms(cfg.em_terms, one_minus),
            cfg.bernoulli_order,
        );
        let fac = reflection_factors(s);
        let value = fac.f * em.value;
        let prime = fac.f_prime * em.value - fac.f * em.prime;
        let base_err = fac.f.norm() * em.value_err
            + 8.0 * f64::EPSILON * (1.0 + s.norm()) * value.norm();
        (
            EvalResult {
                value,
                abs_error_estimate: base_err,
                method: EvalMethod::Reflection,
            },
            EvalResult {
                value: prime,
                abs_error_estimate: fac.f_prime.norm() * em.value_err
                    + fac.f.norm() * em.prime_err
                    + 16.0 * f64::EPSILON * (1.0 + s.norm()) * prime.norm(),
                method: EvalMethod::Reflection,
            },
        )
    } else {
        let em = zeta_em(s, effective_terms(cfg.em_terms, s), cfg.bernoulli_order);
        (
            EvalResult {
                value: em.value,
                abs_error_estimate: em.value_err,
                method: EvalMethod::EulerMaclaurin,
            },
            EvalResult {
                value: em.prime,
                abs_error_estimate: em.prime_err,
                method: EvalMethod::EulerMaclaurin,
            },
        )
    };
    Ok((gate(value, cfg)?, gate(prime, cfg)?))
}

/// ζ(s) with method dispatch and the error-budget gate.
pub fn eval_zeta(s: Complex64, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    eval_zeta_with_prime(s, cfg).map(|(v, _)| v)
}

/// ζ′(s), same dispatch as `eval_zeta`.
pub fn eval_zeta_prime(s: Complex64, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    eval_zeta_with_prime(s, cfg).map(|(_, p)| p)
}

/// Euler–Maclaurin route exposed directly for cross-validation against the
/// Laurent route on their overlap annulus.
pub fn eval_zeta_euler_maclaurin(s: Complex64, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    check_finite(s)?;
    cfg.validate()?;
    if (s - 1.0).norm() <= cfg.pole_exclusion_radius {
        return Err(EvalError::PoleProximity);
    }
    if s.im < 0.0 {
        let r = eval_zeta_euler_maclaurin(s.conj(), cfg)?;
        return Ok(EvalResult { value: r.value.conj(), ..r });
    }
    let em = zeta_em(s, effective_terms(cfg.em_terms, s), cfg.bernoulli_order);
    gate(
        EvalResult {
            value: em.value,
            abs_error_estimate: em.value_err,
            method: EvalMethod::EulerMaclaurin,
        },
        cfg,
    )
}

/// RHS of the functional equation, both sides on independent code paths.
/// Points s ∈ {2, 3, …} are rejected; use `reflection_rhs_limit` there.
pub fn reflection_rhs(s: Complex64, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    check_finite(s)?;
    let z1 = eval_zeta(Complex64::new(1.0, 0.0) - s, cfg)?;
    reflection::reflection_rhs_from(s, &z1)
}

/// Opt-in limit handling at the reflection singularities: the product
/// sin(πs/2)Γ(1−s) is rewritten via the gamma reflection formula.
pub fn reflection_rhs_limit(s: Complex64, cfg: &EvalConfig) -> Result<EvalResult, EvalError> {
    check_finite(s)?;
    let z1 = eval_zeta(Complex64::new(1.0, 0.0) - s, cfg)?;
    reflection::reflection_rhs_limit_from(s, &z1)
}
