//! Experiment configuration.
//!
//! Configs are TOML. Every key is optional and unknown keys are rejected.
//! See `configs/default.toml` at the repository root for the full schema
//! with its defaults.

use std::path::Path;

use serde::Deserialize;

use crate::channel::{ChannelParams, EstimationNoise};
use crate::detector::{DetectorConfig, PriorConvention, ThresholdRule};
use crate::error::{Error, Result};
use crate::geometry::{Point2D, RectObstacle, RoomLayout};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_ANTENNAS: usize = 256;
pub const DEFAULT_CARRIER_GHZ: f64 = 28.0;
pub const DEFAULT_K_DB: f64 = 25.0;
pub const DEFAULT_GAMMA_V_DB: f64 = 30.0;
pub const DEFAULT_LOCATIONS: usize = 18;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_CELL_SIZE: f64 = 0.1;
pub const DEFAULT_ERROR_REALIZATIONS: usize = 10_000;

/// Where the mapper's LoS bits come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkQuality {
    /// Ground-truth LoS bits; no channel is simulated.
    Perfect,
    /// Detect from a channel estimate at this SNR (dB).
    Estimated { gamma_v_db: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub antennas: Vec<usize>,
    pub k_db: Vec<f64>,
    pub gamma_v_db: Vec<f64>,
    pub locations: Vec<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            antennas: vec![32, 64, 128, 256],
            k_db: vec![5.0, 15.0, 25.0],
            gamma_v_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            locations: vec![8, 18],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub layout: RoomLayout,
    pub num_antennas: usize,
    pub carrier_ghz: f64,
    pub k_db: f64,
    pub link: LinkQuality,
    pub num_locations: usize,
    pub num_trials: usize,
    pub cell_size: f64,
    pub seed: u64,
    pub detector: DetectorConfig,
    /// Terminal positions per point of the LoS error sweep; each gives one
    /// link per antenna.
    pub error_realizations: usize,
    pub sweeps: SweepConfig,
    pub render_locations: Vec<Point2D>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            layout: RoomLayout::office(),
            num_antennas: DEFAULT_ANTENNAS,
            carrier_ghz: DEFAULT_CARRIER_GHZ,
            k_db: DEFAULT_K_DB,
            link: LinkQuality::Estimated {
                gamma_v_db: DEFAULT_GAMMA_V_DB,
            },
            num_locations: DEFAULT_LOCATIONS,
            num_trials: DEFAULT_TRIALS,
            cell_size: DEFAULT_CELL_SIZE,
            seed: DEFAULT_SEED,
            detector: DetectorConfig::default(),
            error_realizations: DEFAULT_ERROR_REALIZATIONS,
            sweeps: SweepConfig::default(),
            render_locations: default_render_locations(),
        }
    }
}

/// Seven hand-picked positions that walk around the default office.
pub fn default_render_locations() -> Vec<Point2D> {
    [
        (7.5, 2.0),
        (13.5, 12.5),
        (1.5, 12.0),
        (7.5, 22.5),
        (9.0, 9.5),
        (7.5, 17.5),
        (13.0, 23.5),
    ]
    .into_iter()
    .map(|(x, y)| Point2D::new(x, y))
    .collect()
}

impl ExperimentConfig {
    pub fn channel_params(&self, gamma_v_db: f64) -> Result<ChannelParams> {
        ChannelParams::from_db(self.carrier_ghz, self.k_db, EstimationNoise::GammaDb(gamma_v_db))
    }

    /// Parses TOML text, applying defaults for absent keys.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let key = e
                .message()
                .split('`')
                .nth(1)
                .unwrap_or("<document>")
                .to_string();
            Error::config(key, e.message().trim().to_string())
        })?;
        raw.resolve()
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_antennas < 4 {
            return Err(Error::config("num_antennas", "must be at least 4"));
        }
        for (key, v) in [
            ("num_locations", self.num_locations),
            ("num_trials", self.num_trials),
            ("error_realizations", self.error_realizations),
        ] {
            if v == 0 {
                return Err(Error::config(key, "must be positive"));
            }
        }
        if !(self.cell_size > 0.0 && self.cell_size.is_finite()) {
            return Err(Error::config("cell_size", "must be positive"));
        }
        if !(self.carrier_ghz > 0.0 && self.carrier_ghz.is_finite()) {
            return Err(Error::config("carrier_ghz", "must be positive"));
        }
        if !self.k_db.is_finite() {
            return Err(Error::config("k_db", "must be finite"));
        }
        if let LinkQuality::Estimated { gamma_v_db } = self.link {
            if !gamma_v_db.is_finite() {
                return Err(Error::config("gamma_v_db", "must be finite or \"perfect\""));
            }
        }
        if !(self.detector.prior_h1 > 0.0 && self.detector.prior_h1 < 1.0) {
            return Err(Error::config("detector.prior_h1", "must lie strictly between 0 and 1"));
        }
        if !(self.detector.sigma_omega_scale > 0.0 && self.detector.sigma_omega_scale.is_finite()) {
            return Err(Error::config("detector.sigma_omega_scale", "must be positive"));
        }
        if self.sweeps.antennas.iter().any(|&m| m < 4) {
            return Err(Error::config("sweeps.antennas", "every entry must be at least 4"));
        }
        if self.sweeps.locations.contains(&0) {
            return Err(Error::config("sweeps.locations", "every entry must be positive"));
        }
        for (i, p) in self.render_locations.iter().enumerate() {
            if !self.layout.is_free(*p) {
                return Err(Error::config(
                    format!("render.locations[{i}]"),
                    "must be strictly inside the room and outside every obstacle",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    num_antennas: Option<i64>,
    num_locations: Option<i64>,
    num_trials: Option<i64>,
    cell_size: Option<f64>,
    carrier_ghz: Option<f64>,
    k_db: Option<f64>,
    gamma_v_db: Option<RawGamma>,
    error_realizations: Option<i64>,
    room: Option<RawRoom>,
    detector: Option<RawDetector>,
    sweeps: Option<RawSweeps>,
    render: Option<RawRender>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawGamma {
    Db(f64),
    Keyword(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRoom {
    width: Option<f64>,
    length: Option<f64>,
    obstacles: Option<Vec<RawObstacle>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObstacle {
    min: [f64; 2],
    max: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetector {
    prior_h1: Option<f64>,
    rule: Option<String>,
    prior_convention: Option<String>,
    sigma_omega_scale: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweeps {
    antennas: Option<Vec<i64>>,
    k_db: Option<Vec<f64>>,
    gamma_v_db: Option<Vec<f64>>,
    locations: Option<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRender {
    locations: Option<Vec<[f64; 2]>>,
}

fn count(key: &str, v: Option<i64>, default: usize) -> Result<usize> {
    match v {
        None => Ok(default),
        Some(n) if n > 0 => Ok(n as usize),
        Some(n) => Err(Error::config(key, format!("must be a positive integer, got {n}"))),
    }
}

fn counts(key: &str, v: Option<Vec<i64>>, default: Vec<usize>) -> Result<Vec<usize>> {
    match v {
        None => Ok(default),
        Some(list) => list
            .into_iter()
            .enumerate()
            .map(|(i, n)| count(&format!("{key}[{i}]"), Some(n), 0))
            .collect(),
    }
}

impl RawConfig {
    fn resolve(self) -> Result<ExperimentConfig> {
        let d = ExperimentConfig::default();

        let layout = match self.room {
            None => d.layout,
            Some(room) => {
                let width = room.width.unwrap_or(d.layout.width);
                let length = room.length.unwrap_or(d.layout.length);
                let obstacles = match room.obstacles {
                    None if room.width.is_none() && room.length.is_none() => d.layout.obstacles,
                    None => Vec::new(),
                    Some(list) => list
                        .into_iter()
                        .enumerate()
                        .map(|(i, o)| {
                            RectObstacle::new(o.min.into(), o.max.into())
                                .map_err(|e| Error::config(format!("room.obstacles[{i}]"), e.to_string()))
                        })
                        .collect::<Result<_>>()?,
                };
                RoomLayout::new(width, length, obstacles).map_err(|e| Error::config("room", e.to_string()))?
            }
        };

        let link = match self.gamma_v_db {
            None => d.link,
            Some(RawGamma::Db(g)) => LinkQuality::Estimated { gamma_v_db: g },
            Some(RawGamma::Keyword(k)) if k == "perfect" => LinkQuality::Perfect,
            Some(RawGamma::Keyword(k)) => {
                return Err(Error::config(
                    "gamma_v_db",
                    format!("expected a number or \"perfect\", got \"{k}\""),
                ))
            }
        };

        let mut detector = d.detector;
        if let Some(raw) = self.detector {
            if let Some(p) = raw.prior_h1 {
                detector.prior_h1 = p;
            }
            if let Some(s) = raw.sigma_omega_scale {
                detector.sigma_omega_scale = s;
            }
            detector.rule = match raw.rule.as_deref() {
                None => detector.rule,
                Some("optimal") => ThresholdRule::Optimal,
                Some("zero") => ThresholdRule::Zero,
                Some(other) => {
                    return Err(Error::config(
                        "detector.rule",
                        format!("expected \"optimal\" or \"zero\", got \"{other}\""),
                    ))
                }
            };
            detector.convention = match raw.prior_convention.as_deref() {
                None => detector.convention,
                Some("likelihood-ratio") => PriorConvention::LikelihoodRatio,
                Some("reciprocal") => PriorConvention::Reciprocal,
                Some(other) => {
                    return Err(Error::config(
                        "detector.prior_convention",
                        format!("expected \"likelihood-ratio\" or \"reciprocal\", got \"{other}\""),
                    ))
                }
            };
        }

        let sweeps = match self.sweeps {
            None => d.sweeps,
            Some(s) => SweepConfig {
                antennas: counts("sweeps.antennas", s.antennas, d.sweeps.antennas)?,
                k_db: s.k_db.unwrap_or(d.sweeps.k_db),
                gamma_v_db: s.gamma_v_db.unwrap_or(d.sweeps.gamma_v_db),
                locations: counts("sweeps.locations", s.locations, d.sweeps.locations)?,
            },
        };

        let render_locations = match self.render.and_then(|r| r.locations) {
            None => d.render_locations,
            Some(list) => list.into_iter().map(Point2D::from).collect(),
        };

        let cfg = ExperimentConfig {
            layout,
            num_antennas: count("num_antennas", self.num_antennas, d.num_antennas)?,
            carrier_ghz: self.carrier_ghz.unwrap_or(d.carrier_ghz),
            k_db: self.k_db.unwrap_or(d.k_db),
            link,
            num_locations: count("num_locations", self.num_locations, d.num_locations)?,
            num_trials: count("num_trials", self.num_trials, d.num_trials)?,
            cell_size: self.cell_size.unwrap_or(d.cell_size),
            seed: self.seed.unwrap_or(d.seed),
            detector,
            error_realizations: count(
                "error_realizations",
                self.error_realizations,
                d.error_realizations,
            )?,
            sweeps,
            render_locations,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
