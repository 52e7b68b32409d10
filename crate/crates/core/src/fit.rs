//! Power-law exponent extraction from modulus samples, and the predicted
//! critical exponent with its validity window.
//!
//! When the train's smoothness modulus follows `omega(h) ~ C h^s`, a least
//! squares line through `(ln h, ln omega(h))` recovers `s` as its slope.
//! The prediction
//!
//! ```text
//! s_rho = sigma + (1 - 1/theta) / rho
//! ```
//!
//! holds for `0 < sigma < 1/theta < 1` and
//! `0 <= 1/rho < min( theta (1 + sigma), (1 - sigma) / (1 - 1/theta) )`:
//! the first bound keeps the block sum in the modulus dominated by the
//! resolved ramps, the second keeps the expression below the slope of the
//! divergence boundary of `w'`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::ModulusSample;

/// Least-squares line through `(ln h, ln value)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub max_residual: f64,
    pub samples: usize,
    pub h_min: f64,
    pub h_max: f64,
    #[serde(with = "crate::render::ext_real")]
    pub rho: f64,
}

/// Fit a power law to modulus samples. Requires at least 6 usable samples
/// (positive finite values) sharing one `rho`.
pub fn fit_exponent(samples: &[ModulusSample]) -> Result<ExponentFit> {
    let usable: Vec<&ModulusSample> = samples
        .iter()
        .filter(|s| s.value.is_finite() && s.value > 0.0 && s.h > 0.0)
        .collect();
    if usable.len() < 6 {
        return Err(Error::InsufficientSamples {
            min: 6,
            got: usable.len(),
        });
    }
    let rho = usable[0].rho;
    if usable.iter().any(|s| s.rho != rho) {
        return Err(Error::BadConfig(
            "samples mix different rho values".to_string(),
        ));
    }
    let n = usable.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for s in &usable {
        let x = s.h.ln();
        let y = s.value.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::BadConfig(
            "degenerate fit: all samples share one h".to_string(),
        ));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let max_residual = usable
        .iter()
        .map(|s| (s.value.ln() - slope * s.h.ln() - intercept).abs())
        .fold(0.0, f64::max);
    let h_min = usable.iter().map(|s| s.h).fold(f64::INFINITY, f64::min);
    let h_max = usable.iter().map(|s| s.h).fold(0.0, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        max_residual,
        samples: usable.len(),
        h_min,
        h_max,
        rho,
    })
}

/// The predicted modulus exponent `sigma + (1 - 1/theta)/rho`, guarded by
/// its validity window; `rho = inf` reads as `1/rho = 0`.
pub fn predicted_exponent(sigma: f64, theta: f64, rho: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::SigmaOutOfRange { sigma });
    }
    if !(theta > 1.0) || !theta.is_finite() {
        return Err(Error::ThetaOutOfRange { theta });
    }
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::BadRho { rho });
    }
    let inv_theta = 1.0 / theta;
    if sigma >= inv_theta {
        return Err(Error::OutOfValidity {
            reason: format!("needs sigma < 1/theta, got sigma = {sigma}, 1/theta = {inv_theta}"),
        });
    }
    let inv_rho = if rho.is_infinite() { 0.0 } else { 1.0 / rho };
    let cap = (theta * (1.0 + sigma)).min((1.0 - sigma) / (1.0 - inv_theta));
    if inv_rho >= cap {
        return Err(Error::OutOfValidity {
            reason: format!("needs 1/rho < {cap}, got 1/rho = {inv_rho}"),
        });
    }
    Ok(sigma + (1.0 - inv_theta) * inv_rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulus::Method;
    use approx::assert_abs_diff_eq;

    fn synth(rho: f64, slope: f64, noise: &[f64]) -> Vec<ModulusSample> {
        (0..noise.len())
            .map(|j| {
                let h = (2.0f64).powi(-(6 + j as i32));
                ModulusSample {
                    h,
                    rho,
                    value: 3.0 * h.powf(slope) * (1.0 + noise[j]),
                    method: Method::ClosedForm,
                }
            })
            .collect()
    }

    #[test]
    fn recovers_exact_power_laws() {
        let fit = fit_exponent(&synth(2.0, 0.675, &[0.0; 8])).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.675, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.intercept, 3.0f64.ln(), epsilon = 1e-10);
        assert!(fit.max_residual < 1e-12);
        assert_eq!(fit.samples, 8);
        assert_eq!(fit.rho, 2.0);
    }

    #[test]
    fn tolerates_small_multiplicative_noise() {
        let noise = [0.01, -0.02, 0.015, -0.01, 0.005, -0.015, 0.02, 0.0];
        let fit = fit_exponent(&synth(1.0, 0.5, &noise)).unwrap();
        assert!((fit.slope - 0.5).abs() < 0.02);
        assert!(fit.max_residual < 0.03);
    }

    #[test]
    fn demands_enough_clean_samples() {
        let few = synth(2.0, 0.5, &[0.0; 5]);
        assert!(matches!(
            fit_exponent(&few),
            Err(Error::InsufficientSamples { min: 6, got: 5 })
        ));
        // Non-positive values are discarded before counting.
        let mut tainted = synth(2.0, 0.5, &[0.0; 7]);
        tainted[0].value = 0.0;
        tainted[1].value = f64::NAN;
        assert!(matches!(
            fit_exponent(&tainted),
            Err(Error::InsufficientSamples { min: 6, got: 5 })
        ));
        let mut mixed = synth(2.0, 0.5, &[0.0; 8]);
        mixed[3].rho = 1.0;
        assert!(fit_exponent(&mixed).is_err());
    }

    #[test]
    fn prediction_inside_validity_window() {
        // sigma = 0.5, theta = 1.5: s_rho = 0.5 + (1/3)/rho.
        assert_abs_diff_eq!(
            predicted_exponent(0.5, 1.5, 1.0).unwrap(),
            0.5 + 1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            predicted_exponent(0.5, 1.5, 2.0).unwrap(),
            0.5 + 1.0 / 6.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            predicted_exponent(0.5, 1.5, f64::INFINITY).unwrap(),
            0.5,
            epsilon = 0.0
        );
    }

    #[test]
    fn prediction_rejects_out_of_window_inputs() {
        // sigma >= 1/theta.
        assert!(matches!(
            predicted_exponent(0.5, 2.0, 2.0),
            Err(Error::OutOfValidity { .. })
        ));
        // 1/rho at or past (1 - sigma)/(1 - 1/theta): sigma = 0.5,
        // theta = 1.5 gives cap 1.5, so rho = 2/3 sits exactly on it.
        assert!(matches!(
            predicted_exponent(0.5, 1.5, 2.0 / 3.0),
            Err(Error::OutOfValidity { .. })
        ));
        assert!(predicted_exponent(0.5, 1.5, 0.72).is_ok());
        assert!(matches!(
            predicted_exponent(0.5, 1.5, 0.5),
            Err(Error::OutOfValidity { .. })
        ));
        // Bad raw parameters.
        assert!(matches!(
            predicted_exponent(-1.0, 1.5, 2.0),
            Err(Error::SigmaOutOfRange { .. })
        ));
        assert!(matches!(
            predicted_exponent(0.5, 0.8, 2.0),
            Err(Error::ThetaOutOfRange { .. })
        ));
        assert!(matches!(
            predicted_exponent(0.5, 1.5, -2.0),
            Err(Error::BadRho { .. })
        ));
    }
}
