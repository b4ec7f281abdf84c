//! Small least-squares helpers for rate measurements: straight-line fits
//! with `R^2` and a 95% confidence half-width on the slope, plus the log-log
//! wrapper used to read off power-law exponents from dyadic sweeps.

use crate::error::{Error, Result};

/// One-variable least-squares line `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// 95% confidence half-width of the slope (Student-t on n-2 dof).
    pub slope_ci95: f64,
    pub n: usize,
}

impl LineFit {
    /// Whether `value` lies in the 95% interval of the fitted slope.
    pub fn slope_covers(&self, value: f64) -> bool {
        (self.slope - value).abs() <= self.slope_ci95
    }
}

/// Two-sided 97.5% Student-t quantile for small degrees of freedom.
fn t_crit(dof: usize) -> f64 {
    const TABLE: [f64; 12] = [
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179,
    ];
    match dof {
        0 => f64::INFINITY,
        d if d <= TABLE.len() => TABLE[d - 1],
        d if d <= 20 => 2.12,
        d if d <= 40 => 2.03,
        _ => 1.97,
    }
}

/// Least-squares line through `(xs, ys)`; needs two distinct abscissae.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n != ys.len() || n < 2 {
        return Err(Error::Invalid(format!(
            "line fit needs matching samples, n >= 2 (got {} and {})",
            xs.len(),
            ys.len()
        )));
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Invalid("line fit needs distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    let slope_ci95 = if n > 2 {
        t_crit(n - 2) * (ss_res / (n - 2) as f64 / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(LineFit { slope, intercept, r2, slope_ci95, n })
}

/// Log-log fit: for positive data `y ~ C x^p`, returns the fit of
/// `ln y` against `ln x`, so `slope` is the exponent `p`.
pub fn fit_power(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Invalid(
            "power-law fit needs strictly positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope - 2.5).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert!(fit.slope_ci95 < 1e-10);
        assert!(fit.slope_covers(2.5));
    }

    #[test]
    fn power_law_exponent_recovered_with_noise() {
        let xs: Vec<f64> = (0..6).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        // y = 3 x^2 with +-2% multiplicative jitter.
        let jitter = [1.02, 0.99, 1.01, 0.98, 1.015, 0.995];
        let ys: Vec<f64> = xs
            .iter()
            .zip(jitter)
            .map(|(&x, j)| 3.0 * x * x * j)
            .collect();
        let fit = fit_power(&xs, &ys).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.05, "exponent {}", fit.slope);
        assert!(fit.slope_covers(2.0), "CI half-width {}", fit.slope_ci95);
        assert!(fit.r2 > 0.999);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(fit_line(&[1.0], &[2.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(fit_power(&[0.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(fit_power(&[1.0, 2.0], &[-1.0, 1.0]).is_err());
    }
}
