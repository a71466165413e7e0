//! Laurent expansion about s = 1:
//!   ζ(s) = 1/(s−1) + Σ_{n≥0} [(−1)^n / n!] γ_n (s−1)^n

use num_complex::Complex64;

use super::stieltjes::StieltjesTable;
use super::{EvalError, EvalMethod, EvalResult};

pub struct LaurentOutput {
    pub value: Complex64,
    pub prime: Complex64,
    pub value_err: f64,
}

pub fn zeta_laurent(
    s: Complex64,
    table: &StieltjesTable,
    laurent_terms: usize,
) -> Result<LaurentOutput, EvalError> {
    let w = s - 1.0;
    let r = w.norm();
    if r == 0.0 {
        return Err(EvalError::AtPole { index: 0 });
    }
    if laurent_terms > table.len() {
        return Err(EvalError::InsufficientTable {
            requested: laurent_terms,
            available: table.len(),
        });
    }
    if r >= 1.0 {
        return Err(EvalError::DomainWarning { radius: r });
    }

    let mut value = 1.0 / w;
    let mut prime = -1.0 / (w * w);
    let mut err = 0.0f64;
    let mut sign = 1.0f64;
    let mut fact = 1.0f64;
    let mut wpow = Complex64::new(1.0, 0.0); // w^n
    let mut last_mag = 0.0f64;
    for n in 0..laurent_terms {
        if n > 0 {
            fact *= n as f64;
        }
        let gamma_n = table.gamma(n).unwrap();
        let coeff = sign * gamma_n / fact;
        value += coeff * wpow;
        if n >= 1 {
            prime += coeff * (n as f64) * wpow / w;
        }
        err += table.abs_error(n).unwrap() * r.powi(n as i32) / fact;
        last_mag = gamma_n.abs() * r.powi(n as i32) / fact;
        sign = -sign;
        wpow *= w;
    }

    // Truncation: first omitted term if tabulated, else geometric guess from
    // the last included one.
    let n = laurent_terms;
    let fact_next = fact * if n > 0 { n as f64 } else { 1.0 };
    let omitted = match table.gamma(n) {
        Some(g) => g.abs() * r.powi(n as i32) / fact_next,
        None => 3.0 * last_mag * r,
    };
    err += omitted + f64::EPSILON * value.norm() * 4.0;

    Ok(LaurentOutput {
        value,
        prime,
        value_err: err,
    })
}

/// Public operation form, matching the rest of the evaluator surface.
pub fn eval_zeta_laurent(
    s: Complex64,
    table: &StieltjesTable,
    laurent_terms: usize,
) -> Result<EvalResult, EvalError> {
    let out = zeta_laurent(s, table, laurent_terms)?;
    Ok(EvalResult {
        value: out.value,
        abs_error_estimate: out.value_err,
        method: EvalMethod::Laurent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::stieltjes::builtin_table;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pole_only_truncation_at_one_point_one() {
        let out = eval_zeta_laurent(c(1.1, 0.0), builtin_table(), 0).unwrap();
        assert!((out.value - c(10.0, 0.0)).norm() < 1e-13);
        // |ζ(1.1) − 10| < 0.7: bound |γ0| + tail
        let full = eval_zeta_laurent(c(1.1, 0.0), builtin_table(), 12).unwrap();
        assert!((full.value - out.value).norm() < 0.7);
    }

    #[test]
    fn residue_limit_along_reals() {
        for d in [1e-2, 1e-4, 1e-6] {
            let s = c(1.0 + d, 0.0);
            let out = eval_zeta_laurent(s, builtin_table(), 10).unwrap();
            assert!(((s - 1.0) * out.value - 1.0).norm() < 2.0 * d, "d = {d}");
        }
    }

    #[test]
    fn at_pole_is_error() {
        assert!(matches!(
            eval_zeta_laurent(c(1.0, 0.0), builtin_table(), 4),
            Err(EvalError::AtPole { .. })
        ));
    }

    #[test]
    fn outside_disk_warns() {
        assert!(matches!(
            eval_zeta_laurent(c(2.5, 0.0), builtin_table(), 4),
            Err(EvalError::DomainWarning { .. })
        ));
    }

    #[test]
    fn table_too_short_is_error() {
        let short = crate::eval::stieltjes::stieltjes_table(2, 10_000).unwrap();
        assert!(matches!(
            eval_zeta_laurent(c(1.2, 0.0), &short, 9),
            Err(EvalError::InsufficientTable { .. })
        ));
    }
}
