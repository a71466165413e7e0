//! Stieltjes constants from the limit formula
//!
//!   γ_n = lim_{m→∞} [ Σ_{k=1}^{m} (log k)^n / k − (log m)^{n+1} / (n+1) ]
//!
//! Partial sums at cutoffs m/4, m/2, m are tail-corrected (trapezoidal and
//! Bernoulli terms for f(x) = (log x)^n / x) and then Richardson-extrapolated
//! across the cutoffs; the extrapolation spread is the error estimate.

use std::sync::OnceLock;

use super::bernoulli::bernoulli_over_factorial;
use super::EvalError;

const EPS: f64 = f64::EPSILON;

/// Table of (n, γ_n, abs_error), indices contiguous from 0.
#[derive(Debug, Clone)]
pub struct StieltjesTable {
    entries: Vec<(usize, f64, f64)>,
}

impl StieltjesTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn gamma(&self, n: usize) -> Option<f64> {
        self.entries.get(n).map(|e| e.1)
    }

    pub fn abs_error(&self, n: usize) -> Option<f64> {
        self.entries.get(n).map(|e| e.2)
    }

    pub fn entries(&self) -> &[(usize, f64, f64)] {
        &self.entries
    }
}

/// Kahan-summed partial sums Σ (log k)^n / k for all n ≤ max_n, recorded at
/// each cutoff. Returns one row per cutoff.
fn partial_sums(max_n: usize, cutoffs: &[u64]) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(cutoffs.len());
    let mut sums = vec![0.0f64; max_n + 1];
    let mut comps = vec![0.0f64; max_n + 1];
    let mut next = 0usize;
    let top = *cutoffs.last().unwrap();
    for k in 1..=top {
        let lk = (k as f64).ln();
        let inv = 1.0 / k as f64;
        let mut p = inv;
        for n in 0..=max_n {
            // Kahan update of sums[n] += p
            let y = p - comps[n];
            let t = sums[n] + y;
            comps[n] = (t - sums[n]) - y;
            sums[n] = t;
            p *= lk;
        }
        while next < cutoffs.len() && k == cutoffs[next] {
            rows.push(sums.clone());
            next += 1;
        }
    }
    rows
}

/// Euler–Maclaurin tail correction for the cutoff estimate:
///   γ_n ≈ S_n(m) − f(m)/2 − Σ_j B_{2j}/(2j)! f^{(2j−1)}(m)
/// with f(x) = (log x)^n / x. Returns (corrected value, remainder estimate).
fn tail_corrected(n: usize, m: u64, raw_sum: f64) -> (f64, f64) {
    let lm = (m as f64).ln();
    let s_n = raw_sum - lm.powi(n as i32 + 1) / (n as f64 + 1.0);

    // f^{(k)}(x) = P_k(log x) / x^{k+1}; P_{k+1} = P_k' − (k+1) P_k
    let mut poly = vec![0.0f64; n + 1];
    poly[n] = 1.0; // P_0 = L^n
    let eval = |p: &[f64]| -> f64 {
        let mut v = 0.0;
        for &c in p.iter().rev() {
            v = v * lm + c;
        }
        v
    };
    let deriv_step = |p: &[f64], k: usize| -> Vec<f64> {
        let mut q = vec![0.0f64; p.len()];
        for (i, &c) in p.iter().enumerate() {
            if i >= 1 {
                q[i - 1] += c * i as f64;
            }
            q[i] -= c * (k as f64 + 1.0);
        }
        q
    };

    let mf = m as f64;
    let mut value = s_n - 0.5 * eval(&poly) / mf;
    let mut xpow = mf; // x^{k+1} at k = 0
    let mut k = 0usize;
    let mut last_term = 0.0f64;
    for j in 1..=4usize {
        // advance to f^{(2j-1)}
        while k < 2 * j - 1 {
            poly = deriv_step(&poly, k);
            k += 1;
            xpow *= mf;
        }
        let term = bernoulli_over_factorial(j) * eval(&poly) / xpow;
        value -= term;
        last_term = term.abs();
    }
    (value, last_term.max(EPS * s_n.abs()))
}

/// Richardson/Neville extrapolation in h = 1/m over tail-corrected cutoff
/// estimates. Returns (value, abs_error).
fn extrapolate(
    cutoffs: &[u64],
    corrected: &[(f64, f64)],
    noise_floor: f64,
) -> Result<(f64, f64), EvalError> {
    let gaps: Vec<f64> = corrected.windows(2).map(|w| (w[1].0 - w[0].0).abs()).collect();
    if gaps.len() >= 2 && gaps[gaps.len() - 1] > 4.0 * gaps[gaps.len() - 2] + 100.0 * noise_floor {
        return Err(EvalError::NonConvergent);
    }

    let h: Vec<f64> = cutoffs.iter().map(|&m| 1.0 / m as f64).collect();
    let mut row: Vec<f64> = corrected.iter().map(|e| e.0).collect();
    let all_start = row.clone();
    let mut level = 1;
    while row.len() > 1 {
        let mut next = Vec::with_capacity(row.len() - 1);
        for i in 0..row.len() - 1 {
            let hi = h[i];
            let hj = h[i + level];
            next.push((row[i + 1] * hi - row[i] * hj) / (hi - hj));
        }
        row = next;
        level += 1;
    }
    let best = row[0];
    let remainder: f64 = corrected.iter().map(|e| e.1).fold(0.0, f64::max);
    let err = (best - all_start[all_start.len() - 1])
        .abs()
        .max(remainder)
        .max(noise_floor)
        .max(EPS * (1.0 + best.abs()));
    Ok((best, err))
}

/// Cancellation floor: the partial sum has magnitude (log m)^{n+1}/(n+1).
fn noise_floor(n: usize, m: u64) -> f64 {
    4.0 * EPS * (m as f64).ln().powi(n as i32 + 1) / (n as f64 + 1.0)
}

/// γ_n from cutoffs m/4, m/2, m.
pub fn eval_stieltjes(n: usize, m: u64) -> Result<(f64, f64), EvalError> {
    if m < 10 {
        return Err(EvalError::NonConvergent);
    }
    let cutoffs = [m / 4, m / 2, m];
    let rows = partial_sums(n, &cutoffs);
    let corrected: Vec<(f64, f64)> = cutoffs
        .iter()
        .zip(rows.iter())
        .map(|(&c, row)| tail_corrected(n, c, row[n]))
        .collect();
    extrapolate(&cutoffs, &corrected, noise_floor(n, m))
}

/// Build a table for n = 0..=max_n in one summation pass.
pub fn stieltjes_table(max_n: usize, m: u64) -> Result<StieltjesTable, EvalError> {
    if m < 10 {
        return Err(EvalError::NonConvergent);
    }
    let cutoffs = [m / 4, m / 2, m];
    let rows = partial_sums(max_n, &cutoffs);
    let mut entries = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let corrected: Vec<(f64, f64)> = cutoffs
            .iter()
            .zip(rows.iter())
            .map(|(&c, row)| tail_corrected(n, c, row[n]))
            .collect();
        let (v, e) = extrapolate(&cutoffs, &corrected, noise_floor(n, m))?;
        entries.push((n, v, e));
    }
    Ok(StieltjesTable { entries })
}

/// Shared table (n ≤ 16, m = 4·10⁶) backing the Laurent evaluator.
pub fn builtin_table() -> &'static StieltjesTable {
    static TABLE: OnceLock<StieltjesTable> = OnceLock::new();
    TABLE.get_or_init(|| stieltjes_table(16, 4_000_000).expect("builtin Stieltjes table"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma0_is_euler_mascheroni() {
        let (g0, err) = eval_stieltjes(0, 1_000_000).unwrap();
        assert!((g0 - 0.5772156649015329).abs() < 1e-6);
        assert!(err > 0.0);
    }

    #[test]
    fn gamma1_matches_reference() {
        let (g1, _) = eval_stieltjes(1, 1_000_000).unwrap();
        assert!((g1 + 0.0728158454836767).abs() < 1e-5);
    }

    #[test]
    fn builtin_table_first_constants() {
        let t = builtin_table();
        assert!((t.gamma(0).unwrap() - 0.5772156649015329).abs() < 1e-10);
        assert!((t.gamma(1).unwrap() + 0.0728158454836767).abs() < 1e-9);
        assert!((t.gamma(2).unwrap() + 0.0096903631928723).abs() < 1e-9);
        for n in 0..t.len() {
            assert!(t.abs_error(n).unwrap() > 0.0);
            assert_eq!(t.entries()[n].0, n);
        }
    }

    #[test]
    fn rejects_tiny_cutoff() {
        assert!(matches!(eval_stieltjes(0, 5), Err(EvalError::NonConvergent)));
    }
}
