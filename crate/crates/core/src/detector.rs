//! Per-antenna LoS detection as a binary hypothesis test.
//!
//! Each estimated channel element is modelled as `h_hat = b * phi + omega`
//! where `phi` is the known direct path and `omega ~ CN(0, sigma_omega^2)`
//! collects the diffuse component and the estimation error. The likelihood
//! ratio test reduces to comparing
//!
//! ```text
//! |h_hat|^2 - |h_hat - phi|^2   against   sigma_omega^2 * ln(P(H0) / P(H1))
//! ```
//!
//! which is zero under equal priors and then needs no noise knowledge at all.

use num_complex::Complex64;

use crate::channel::{los_phase, ChannelParams, ChannelRealization};
use crate::error::{Error, Result};

/// Which threshold the detector compares the statistic against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdRule {
    /// Minimum-error threshold from the prior.
    #[default]
    Optimal,
    /// Always zero, independent of noise and prior.
    Zero,
}

/// Orientation of the prior ratio inside the optimal threshold.
///
/// `LikelihoodRatio` is what the likelihood-ratio test rearranges to,
/// `ln(P(H0)/P(H1))`. `Reciprocal` uses `ln(P(H1)/P(H0))` instead. Both are
/// zero for equal priors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PriorConvention {
    #[default]
    LikelihoodRatio,
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub prior_h1: f64,
    pub rule: ThresholdRule,
    pub convention: PriorConvention,
    /// Multiplier on the noise variance the detector assumes; 1 means the
    /// detector knows it exactly.
    pub sigma_omega_scale: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            prior_h1: 0.5,
            rule: ThresholdRule::Optimal,
            convention: PriorConvention::LikelihoodRatio,
            sigma_omega_scale: 1.0,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.prior_h1 > 0.0 && self.prior_h1 < 1.0) {
            return Err(Error::invalid(format!(
                "prior_h1 must lie strictly between 0 and 1, got {}",
                self.prior_h1
            )));
        }
        if !(self.sigma_omega_scale > 0.0 && self.sigma_omega_scale.is_finite()) {
            return Err(Error::invalid(format!(
                "sigma_omega_scale must be positive, got {}",
                self.sigma_omega_scale
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub statistic: Vec<f64>,
    pub threshold: Vec<f64>,
    pub b_hat: Vec<bool>,
    pub phi: Vec<Complex64>,
    pub sigma_omega_sq: Vec<f64>,
}

/// Direct LoS path `sqrt(K p / (K + 1)) exp(-j 2 pi d / lambda)`.
pub fn phi(p_m: f64, k: f64, d_m: f64, wavelength: f64) -> Complex64 {
    los_phase(d_m, wavelength) * los_amplitude(p_m, k)
}

fn los_amplitude(p_m: f64, k: f64) -> f64 {
    // K / (K + 1) written as 1 / (1 + 1/K) so huge K stays exact
    if k == 0.0 {
        0.0
    } else {
        (p_m / (1.0 + 1.0 / k)).sqrt()
    }
}

/// Variance of the diffuse component plus estimation error.
pub fn sigma_omega_sq(p_m: f64, k: f64, sigma_v_sq: f64) -> f64 {
    p_m / (k + 1.0) + sigma_v_sq
}

/// `|h_hat|^2 - |h_hat - phi|^2`.
pub fn statistic(h_hat_m: Complex64, phi_m: Complex64) -> f64 {
    h_hat_m.norm_sqr() - (h_hat_m - phi_m).norm_sqr()
}

/// `2 Re(h_hat conj(phi)) - |phi|^2`, the cancellation-free form of
/// [`statistic`].
pub fn statistic_linear(h_hat_m: Complex64, phi_m: Complex64) -> f64 {
    2.0 * (h_hat_m * phi_m.conj()).re - phi_m.norm_sqr()
}

fn validate_prior(prior_h1: f64) -> Result<()> {
    if prior_h1 > 0.0 && prior_h1 < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "prior must lie strictly between 0 and 1, got {prior_h1}"
        )))
    }
}

/// Minimum-error threshold `sigma_omega^2 ln(P(H0) / P(H1))`.
pub fn optimal_threshold(sigma_omega_sq: f64, prior_h1: f64) -> Result<f64> {
    validate_prior(prior_h1)?;
    Ok(sigma_omega_sq * ((1.0 - prior_h1) / prior_h1).ln())
}

/// Threshold under the chosen prior-ratio orientation.
pub fn threshold_with_convention(
    sigma_omega_sq: f64,
    prior_h1: f64,
    convention: PriorConvention,
) -> Result<f64> {
    let t = optimal_threshold(sigma_omega_sq, prior_h1)?;
    Ok(match convention {
        PriorConvention::LikelihoodRatio => t,
        PriorConvention::Reciprocal => -t,
    })
}

/// Decides LoS where the statistic strictly exceeds the threshold; ties go
/// to NLoS.
pub fn detect(h_hat: &[Complex64], phi: &[Complex64], thresholds: &[f64]) -> Result<Vec<bool>> {
    if h_hat.len() != phi.len() || h_hat.len() != thresholds.len() {
        return Err(Error::invalid(format!(
            "length mismatch: h_hat {}, phi {}, thresholds {}",
            h_hat.len(),
            phi.len(),
            thresholds.len()
        )));
    }
    Ok(h_hat
        .iter()
        .zip(phi)
        .zip(thresholds)
        .map(|((&h, &f), &t)| statistic(h, f) > t)
        .collect())
}

/// Explicit likelihood-ratio test: evaluates both conditional densities and
/// compares their ratio with `P(H0) / P(H1)`.
///
/// Only meant as an independent check of [`detect`].
pub fn lrt_oracle(h_hat_m: Complex64, phi_m: Complex64, sigma_omega_sq: f64, prior_h1: f64) -> bool {
    let norm = 1.0 / (std::f64::consts::PI * sigma_omega_sq);
    let density_h0 = norm * (-h_hat_m.norm_sqr() / sigma_omega_sq).exp();
    let density_h1 = norm * (-(h_hat_m - phi_m).norm_sqr() / sigma_omega_sq).exp();
    density_h1 / density_h0 > (1.0 - prior_h1) / prior_h1
}

/// Gaussian tail probability `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Error probability of one link under the zero-threshold rule,
/// `Q(sqrt(|phi|^2 / (2 sigma_omega^2)))`; equal for misses and false alarms.
pub fn link_error_probability(p_m: f64, k: f64, sigma_v_sq: f64) -> f64 {
    let phi_sq = los_amplitude(p_m, k).powi(2);
    let s = sigma_omega_sq(p_m, k, sigma_v_sq);
    if phi_sq == 0.0 {
        return 0.5;
    }
    q_function((phi_sq / (2.0 * s)).sqrt())
}

/// Average LoS error probability over the array for one terminal position,
/// `(1/M) sum_m Q(sqrt(K p_m / (2 p_m + 2 (K + 1) sigma_v^2)))`.
pub fn theoretical_error(p: &[f64], k: f64, sigma_v_sq: f64) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::invalid("need at least one path gain"));
    }
    if let Some(bad) = p.iter().find(|&&pm| !(pm > 0.0)) {
        return Err(Error::invalid(format!("path gains must be positive, got {bad}")));
    }
    let total: f64 = p
        .iter()
        .map(|&pm| {
            let arg = k * pm / (2.0 * pm + 2.0 * (k + 1.0) * sigma_v_sq);
            if arg.is_finite() {
                q_function(arg.sqrt())
            } else {
                // K -> inf with sigma_v = 0
                0.0
            }
        })
        .sum();
    Ok(total / p.len() as f64)
}

/// Fraction of mismatched entries.
pub fn empirical_error_rate(b_hat: &[bool], b: &[bool]) -> Result<f64> {
    if b_hat.len() != b.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} estimated bits vs {} true bits",
            b_hat.len(),
            b.len()
        )));
    }
    if b.is_empty() {
        return Ok(0.0);
    }
    let wrong = b_hat.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(wrong as f64 / b.len() as f64)
}

/// Runs the full detector on an estimated channel realization.
pub fn detect_realization(
    realization: &ChannelRealization,
    params: &ChannelParams,
    config: &DetectorConfig,
) -> Result<DetectionResult> {
    config.validate()?;
    let h_hat = realization
        .h_hat
        .as_ref()
        .ok_or_else(|| Error::invalid("channel has not been estimated yet"))?;
    let sigma_v_sq = realization.sigma_v_sq.unwrap_or(0.0);
    let wavelength = params.wavelength();

    let phi: Vec<Complex64> = realization
        .p
        .iter()
        .zip(&realization.d)
        .map(|(&p, &d)| phi(p, params.k, d, wavelength))
        .collect();
    let sigma: Vec<f64> = realization
        .p
        .iter()
        .map(|&p| config.sigma_omega_scale * sigma_omega_sq(p, params.k, sigma_v_sq))
        .collect();
    let threshold = match config.rule {
        ThresholdRule::Zero => vec![0.0; sigma.len()],
        ThresholdRule::Optimal => sigma
            .iter()
            .map(|&s| threshold_with_convention(s, config.prior_h1, config.convention))
            .collect::<Result<_>>()?,
    };
    let statistic: Vec<f64> = h_hat.iter().zip(&phi).map(|(&h, &f)| statistic(h, f)).collect();
    let b_hat = detect(h_hat, &phi, &threshold)?;
    Ok(DetectionResult {
        statistic,
        threshold,
        b_hat,
        phi,
        sigma_omega_sq: sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent Q(x): composite Simpson on the Gaussian density over
    /// [x, x + 40] for x >= 0, reflected for x < 0.
    fn q_by_quadrature(x: f64) -> f64 {
        if x < 0.0 {
            return 1.0 - q_by_quadrature(-x);
        }
        let n = 200_000;
        let h = 40.0 / n as f64;
        let f = |t: f64| (-(t * t) / 2.0).exp();
        let mut sum = f(x) + f(x + 40.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(x + i as f64 * h);
        }
        sum * h / 3.0 / (2.0 * std::f64::consts::PI).sqrt()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(2.0, 0.0, 1.0, 0.01), c(0.0, 0.0));
        assert!((phi(3.0, 1e30, 1.7, 0.01).norm() - 3f64.sqrt()).abs() < 1e-12);
        let lambda = 0.0107;
        assert!((phi(2.0, 1.0, lambda, lambda) - c(1.0, 0.0)).norm() < 1e-12);
        let (p, k) = (0.37, 4.2);
        assert!((phi(p, k, 2.2, lambda).norm_sqr() - k * p / (k + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn sigma_omega_examples() {
        assert_eq!(sigma_omega_sq(3.0, 0.0, 0.0), 3.0);
        assert_eq!(sigma_omega_sq(2.0, 1.0, 1.0), 2.0);
        assert!((sigma_omega_sq(2.0, 1e30, 0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn statistic_examples() {
        let f = c(0.3, -0.4);
        assert!((statistic(f, f) - f.norm_sqr()).abs() < 1e-15);
        assert!((statistic(c(0.0, 0.0), f) + f.norm_sqr()).abs() < 1e-15);
        assert_eq!(statistic(f / 2.0, f), 0.0);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(optimal_threshold(3.0, 0.5).unwrap(), 0.0);
        // P(H0)/P(H1) = e
        let p1 = 1.0 / (1.0 + std::f64::consts::E);
        assert!((optimal_threshold(2.0, p1).unwrap() - 2.0).abs() < 1e-12);
        assert!(
            (threshold_with_convention(2.0, p1, PriorConvention::Reciprocal).unwrap() + 2.0).abs()
                < 1e-12
        );
        assert!(optimal_threshold(1.0, 0.0).is_err());
        assert!(optimal_threshold(1.0, 1.0).is_err());
    }

    #[test]
    fn detect_examples() {
        let phi = vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.5)];
        let zeros = vec![0.0; 3];
        assert_eq!(detect(&phi, &phi, &zeros).unwrap(), vec![true; 3]);
        assert_eq!(detect(&[c(0.0, 0.0); 3], &phi, &zeros).unwrap(), vec![false; 3]);
        let halves: Vec<_> = phi.iter().map(|f| f / 2.0).collect();
        assert_eq!(detect(&halves, &phi, &zeros).unwrap(), vec![false; 3]);
        assert!(detect(&phi, &phi[..2], &zeros).is_err());
    }

    #[test]
    fn oracle_examples() {
        let f = c(0.6, 0.8);
        assert!(lrt_oracle(f, f, 1.0, 0.5));
        assert!(!lrt_oracle(c(0.0, 0.0), f, 1.0, 0.5));
    }

    #[test]
    fn q_reference_values() {
        // 30-digit erfc evaluations
        let table = [
            (0.0, 0.5),
            (0.5, 0.308_537_538_725_986_9),
            (1.0, 0.158_655_253_931_457_05),
            (2.0, 0.022_750_131_948_179_21),
            (3.0, 0.001_349_898_031_630_094_5),
            (5.0, 2.866_515_718_791_939e-7),
            (8.0, 6.220_960_574_271_784e-16),
            (-1.0, 0.841_344_746_068_542_9),
        ];
        for (x, q) in table {
            assert!((q_function(x) - q).abs() < 1e-15, "Q({x})");
        }
    }

    #[test]
    fn q_matches_quadrature_on_grid() {
        let mut x = -8.0;
        while x <= 8.0 {
            let diff = (q_function(x) - q_by_quadrature(x)).abs();
            assert!(diff < 1e-12, "Q({x}) off by {diff}");
            x += 0.25;
        }
    }

    #[test]
    fn theory_examples() {
        let p = [1e-6, 3e-7, 2e-8];
        let k = 7.0;
        let noiseless = theoretical_error(&p, k, 0.0).unwrap();
        assert!((noiseless - q_function((k / 2.0).sqrt())).abs() < 1e-15);
        assert_eq!(theoretical_error(&p, 0.0, 1e-7).unwrap(), 0.5);
        let q1 = theoretical_error(&p, 2.0, 0.0).unwrap();
        assert!((q1 - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!(theoretical_error(&[1.0, 0.0], 1.0, 0.0).is_err());
    }

    #[test]
    fn theory_monotone_on_grid() {
        let p = [1e-6, 4e-7, 3e-8, 1e-9];
        let ks: Vec<f64> = (0..40).map(|i| 10f64.powf(-1.0 + i as f64 * 0.1)).collect();
        let sigmas: Vec<f64> = (0..40).map(|i| 1e-10 * 10f64.powf(i as f64 * 0.1)).collect();
        for &s in &sigmas {
            for w in ks.windows(2) {
                assert!(theoretical_error(&p, w[1], s).unwrap() <= theoretical_error(&p, w[0], s).unwrap());
            }
        }
        for &k in &ks {
            for w in sigmas.windows(2) {
                assert!(theoretical_error(&p, k, w[1]).unwrap() >= theoretical_error(&p, k, w[0]).unwrap());
            }
        }
    }

    #[test]
    fn error_rate_examples() {
        let b = [true, false, true, true];
        assert_eq!(empirical_error_rate(&b, &b).unwrap(), 0.0);
        let flipped: Vec<bool> = b.iter().map(|x| !x).collect();
        assert_eq!(empirical_error_rate(&flipped, &b).unwrap(), 1.0);
        assert_eq!(empirical_error_rate(&[true, false, true, false], &b).unwrap(), 0.25);
        assert!(empirical_error_rate(&b[..3], &b).is_err());
    }

    proptest! {
        #[test]
        fn statistic_forms_agree(hr in -1e3f64..1e3, hi in -1e3f64..1e3, fr in -1e3f64..1e3, fi in -1e3f64..1e3) {
            let (h, f) = (c(hr, hi), c(fr, fi));
            let a = statistic(h, f);
            let b = statistic_linear(h, f);
            let scale = h.norm_sqr() + f.norm_sqr() + 1e-300;
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }

        #[test]
        fn statistic_forms_agree_at_tiny_scale(hr in -1f64..1., hi in -1f64..1., fr in -1f64..1., fi in -1f64..1., e in -40i32..0) {
            let s = 10f64.powi(e);
            let (h, f) = (c(hr * s, hi * s), c(fr * s, fi * s));
            let scale = h.norm_sqr() + f.norm_sqr() + 1e-300;
            prop_assert!((statistic(h, f) - statistic_linear(h, f)).abs() <= 1e-10 * scale);
        }
    }
}
