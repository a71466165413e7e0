//! Euler–Maclaurin evaluation of ζ and ζ′.
//!
//! ζ(s) = Σ_{n=1}^{N−1} n^{−s} + N^{1−s}/(s−1) + N^{−s}/2
//!        + Σ_{k=1}^{q} B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
//!
//! The derivative is accumulated term-wise alongside the value so that a
//! combined ζ/ζ′ call costs one pass over the direct sum.

use num_complex::Complex64;

use super::bernoulli::{bernoulli_over_factorial, MAX_BERNOULLI_ORDER};

const EPS: f64 = f64::EPSILON;

pub struct EmOutput {
    pub value: Complex64,
    pub prime: Complex64,
    pub value_err: f64,
    pub prime_err: f64,
}

/// Raw Euler–Maclaurin sum with N = `n_terms` and q = `bernoulli_order`.
/// Caller is responsible for staying away from s = 1.
pub fn zeta_em(s: Complex64, n_terms: usize, bernoulli_order: usize) -> EmOutput {
    let n = n_terms.max(2);
    let q = bernoulli_order.clamp(1, MAX_BERNOULLI_ORDER);

    let mut sum = Complex64::new(1.0, 0.0); // n = 1 term
    let mut dsum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 1.0f64;
    for k in 2..n {
        let ln_k = (k as f64).ln();
        let term = (-s * ln_k).exp();
        sum += term;
        dsum -= ln_k * term;
        sum_sq += term.norm_sqr();
    }

    let ln_n = (n as f64).ln();
    let nps = (-s * ln_n).exp(); // N^{-s}

    // Pole term N^{1-s}/(s-1)
    let sm1 = s - 1.0;
    let pole = (n as f64) * nps / sm1;
    let dpole = -ln_n * pole - (n as f64) * nps / (sm1 * sm1);

    // Half term
    let half = 0.5 * nps;
    let dhalf = -ln_n * half;

    let mut value = sum + pole + half;
    let mut prime = dsum + dpole + dhalf;

    // Bernoulli corrections. poch = s(s+1)...(s+2k-2), updated incrementally.
    let mut poch = s;
    let mut dpoch = Complex64::new(1.0, 0.0);
    let mut scale = 1.0 / (n as f64); // N^{1-2k}
    for k in 1..=q {
        let coeff = bernoulli_over_factorial(k);
        let t_k = coeff * poch * nps * scale;
        let dt_k = coeff * (dpoch * nps - ln_n * poch * nps) * scale;
        value += t_k;
        prime += dt_k;
        if k < q {
            let a = s + (2 * k - 1) as f64;
            let b = s + (2 * k) as f64;
            dpoch = dpoch * a * b + poch * (a + b);
            poch = poch * a * b;
            scale /= (n * n) as f64;
        }
    }

    // Truncation estimate: first omitted correction term, with the standard
    // |s + 2q + 1| / (σ + 2q + 1) growth factor.
    let a = s + (2 * q - 1) as f64;
    let b = s + (2 * q) as f64;
    let poch_next = poch * a * b;
    let scale_next = scale / (n * n) as f64;
    let omitted = bernoulli_over_factorial(q + 1).abs() * poch_next.norm() * nps.norm() * scale_next;
    let denom = (s.re + 2.0 * q as f64 + 1.0).max(1.0);
    let factor = ((s + (2 * q + 1) as f64).norm() / denom).max(1.0);
    let trunc = omitted * factor;

    // Rounding estimate for the direct sum (RMS model).
    let noise = EPS * (2.0 + s.norm() * ln_n) * sum_sq.sqrt();

    EmOutput {
        value,
        prime,
        value_err: trunc + noise,
        prime_err: trunc * (ln_n + 1.0) + noise * (ln_n + 1.0),
    }
}

/// Effective direct-sum length: max(cfg baseline, ⌈2|t|⌉).
pub fn effective_terms(baseline: usize, s: Complex64) -> usize {
    baseline.max((2.0 * s.im.abs()).ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Oracle: direct summation of n^{-2} to 1e6 terms plus integral tail bound.
    fn zeta2_direct() -> f64 {
        let m = 1_000_000u64;
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for n in (1..=m).rev() {
            let term = 1.0 / (n as f64 * n as f64);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        // tail: ∫_m^∞ x^{-2} dx = 1/m, midpoint-corrected: 1/(m + 1/2) is
        // accurate to O(m^{-3})
        sum + 1.0 / (m as f64 + 0.5)
    }

    #[test]
    fn zeta_two_matches_direct_sum() {
        let oracle = zeta2_direct();
        let out = zeta_em(c(2.0, 0.0), 20, 12);
        assert!((out.value.re - oracle).abs() < 1e-10);
        assert!(out.value.im.abs() < 1e-14);
        // π²/6 cross-check
        let pi26 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((out.value.re - pi26).abs() < 1e-12);
    }

    #[test]
    fn zeta_zero_is_minus_half() {
        let out = zeta_em(c(0.0, 0.0), 20, 12);
        assert!((out.value.re + 0.5).abs() < 1e-13);
        assert!(out.value.im.abs() < 1e-14);
    }

    #[test]
    fn zeta_prime_two_is_real_negative() {
        let out = zeta_em(c(2.0, 0.0), 20, 12);
        assert!(out.prime.re < 0.0);
        assert!(out.prime.im.abs() < 1e-14);
        // known: ζ'(2) ≈ -0.9375482543
        assert!((out.prime.re + 0.9375482543158438).abs() < 1e-10);
    }

    #[test]
    fn prime_agrees_with_central_difference() {
        let h = 1e-5;
        for &(re, im) in &[(0.5, 10.0), (2.0, 3.0), (-0.3, 25.0), (1.5, 0.0)] {
            let s = c(re, im);
            let f = |x: Complex64| zeta_em(x, 80, 12).value;
            let fd = (f(s + h) - f(s - h)) / (2.0 * h);
            let out = zeta_em(s, 80, 12);
            assert!(
                (out.prime - fd).norm() < 1e-6 * (1.0 + out.prime.norm()),
                "s = {s}"
            );
        }
    }

    #[test]
    fn error_estimate_is_honest_near_two() {
        // With few terms the estimate must still bound the real error.
        let pi26 = std::f64::consts::PI.powi(2) / 6.0;
        for n in [4usize, 8, 16, 32] {
            let out = zeta_em(c(2.0, 0.0), n, 6);
            let actual = (out.value.re - pi26).abs();
            assert!(actual <= out.value_err * 10.0 + 1e-15, "n = {n}");
        }
    }

    #[test]
    fn stable_near_pole() {
        // EM handles the pole analytically: (s-1)ζ(s) → 1
        for d in [1e-2, 1e-4, 1e-6] {
            let s = c(1.0 + d, 0.0);
            let out = zeta_em(s, 20, 12);
            assert!(((s.re - 1.0) * out.value.re - 1.0).abs() < 2.0 * d, "d = {d}");
        }
    }
}
