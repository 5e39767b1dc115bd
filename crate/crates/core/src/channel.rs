//! Mixed LoS/NLoS Rician channel across the array, indoor path loss and the
//! noisy channel estimate seen by the receiver.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{distance, los_vector, AntennaArray, Point2D, RoomLayout};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Indoor path loss in dB for distance `d` in meters and carrier `fc` in GHz.
pub fn path_loss_db(d: f64, fc_ghz: f64) -> Result<f64> {
    if !(d > 0.0 && fc_ghz > 0.0) {
        return Err(Error::invalid(format!(
            "path loss needs positive distance and frequency, got d={d}, fc={fc_ghz}"
        )));
    }
    Ok(32.4 + 17.3 * d.log10() + 20.0 * fc_ghz.log10())
}

/// Linear power gain for a loss in dB.
pub fn path_gain_linear(pl_db: f64) -> f64 {
    10f64.powf(-pl_db / 10.0)
}

/// `exp(-j 2 pi d / lambda)`.
pub fn los_phase(d: f64, wavelength: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * d / wavelength)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Circularly-symmetric complex Gaussian with total variance `variance`
/// (half on each real component).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// How the estimation-noise variance is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimationNoise {
    /// Channel-estimate SNR in dB; the variance is calibrated per realization.
    GammaDb(f64),
    /// Fixed noise variance.
    Variance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub fc_ghz: f64,
    /// Rician K-factor, linear.
    pub k: f64,
    pub noise: EstimationNoise,
}

impl ChannelParams {
    pub fn new(fc_ghz: f64, k: f64, noise: EstimationNoise) -> Result<Self> {
        if !(fc_ghz > 0.0 && fc_ghz.is_finite()) {
            return Err(Error::invalid(format!("carrier frequency must be positive, got {fc_ghz}")));
        }
        if !(k >= 0.0) {
            return Err(Error::invalid(format!("K-factor must be nonnegative, got {k}")));
        }
        if let EstimationNoise::Variance(v) = noise {
            if !(v >= 0.0) {
                return Err(Error::invalid(format!("noise variance must be nonnegative, got {v}")));
            }
        }
        Ok(Self { fc_ghz, k, noise })
    }

    pub fn from_db(fc_ghz: f64, k_db: f64, noise: EstimationNoise) -> Result<Self> {
        Self::new(fc_ghz, db_to_linear(k_db), noise)
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / (self.fc_ghz * 1e9)
    }

    pub fn k_db(&self) -> f64 {
        10.0 * self.k.log10()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub d: Vec<f64>,
    pub p: Vec<f64>,
    pub b: Vec<bool>,
    pub h_los_phase: Vec<Complex64>,
    pub h: Vec<Complex64>,
    pub h_hat: Option<Vec<Complex64>>,
    pub sigma_v_sq: Option<f64>,
}

impl ChannelRealization {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// `E|h_m|^2` given the ground-truth LoS bit.
    pub fn expected_power(&self, k: f64) -> impl Iterator<Item = f64> + '_ {
        self.p
            .iter()
            .zip(&self.b)
            .map(move |(&p, &b)| p * expected_power_factor(b, k))
    }
}

/// `(b K + 1) / (K + 1)`, written to stay finite for very large K.
fn expected_power_factor(los: bool, k: f64) -> f64 {
    if los {
        1.0
    } else {
        1.0 / (k + 1.0)
    }
}

/// Draws the true channel from the terminal at `mt` to every antenna.
pub fn draw_channel<R: Rng + ?Sized>(
    layout: &RoomLayout,
    array: &AntennaArray,
    mt: Point2D,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let b = los_vector(mt, array, layout)?;
    let wavelength = params.wavelength();
    let m = array.len();
    let los_amp = (params.k / (params.k + 1.0)).sqrt();
    let nlos_amp = (1.0 / (params.k + 1.0)).sqrt();

    let mut d = Vec::with_capacity(m);
    let mut p = Vec::with_capacity(m);
    let mut phases = Vec::with_capacity(m);
    let mut h = Vec::with_capacity(m);
    for (&a, &los) in array.positions.iter().zip(&b) {
        let dist = distance(mt, a);
        let gain = path_gain_linear(path_loss_db(dist, params.fc_ghz)?);
        let phase = los_phase(dist, wavelength);
        let nlos = complex_gaussian(rng, 1.0);
        let mut inner = nlos * nlos_amp;
        if los {
            inner += phase * los_amp;
        }
        h.push(inner * gain.sqrt());
        d.push(dist);
        p.push(gain);
        phases.push(phase);
    }
    Ok(ChannelRealization {
        d,
        p,
        b,
        h_los_phase: phases,
        h,
        h_hat: None,
        sigma_v_sq: None,
    })
}

/// Noise variance `E||h||^2 / (M gamma)` for a channel-estimate SNR in dB.
///
/// The expectation is evaluated in closed form from the path gains and the
/// ground-truth LoS bits of this realization.
pub fn sigma_v_from_gamma(realization: &ChannelRealization, k: f64, gamma_v_db: f64) -> f64 {
    let m = realization.len() as f64;
    let energy: f64 = realization.expected_power(k).sum();
    energy / (m * db_to_linear(gamma_v_db))
}

/// Resolves the configured noise specification to a variance.
pub fn noise_variance(realization: &ChannelRealization, params: &ChannelParams) -> f64 {
    match params.noise {
        EstimationNoise::GammaDb(g) => sigma_v_from_gamma(realization, params.k, g),
        EstimationNoise::Variance(v) => v,
    }
}

/// Adds i.i.d. estimation error of variance `sigma_v_sq` to the true channel.
///
/// Noise is always drawn, so the random stream advances identically for any
/// variance (including zero).
pub fn estimate_channel<R: Rng + ?Sized>(
    mut realization: ChannelRealization,
    sigma_v_sq: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if !(sigma_v_sq >= 0.0) {
        return Err(Error::invalid(format!(
            "estimation noise variance must be nonnegative, got {sigma_v_sq}"
        )));
    }
    let h_hat = realization
        .h
        .iter()
        .map(|&h| {
            let v = complex_gaussian(rng, 1.0);
            if sigma_v_sq == 0.0 {
                h
            } else {
                h + v * sigma_v_sq.sqrt()
            }
        })
        .collect();
    realization.h_hat = Some(h_hat);
    realization.sigma_v_sq = Some(sigma_v_sq);
    Ok(realization)
}
