use crate::channel::{draw_channel, estimate_channel, noise_variance, ChannelParams, EstimationNoise};
use crate::detector::{detect_realization, empirical_error_rate, DetectorConfig};
use crate::error::Result;
use crate::geometry::{los_vector, place_antennas, sample_mt_location, AntennaArray, Point2D, RoomLayout};
use crate::harness::config::{ExperimentConfig, LinkQuality};
use crate::harness::seed::{self, CHANNEL, TERMINAL};
use crate::mapping::{compute_iou, init_grid, update_with_location, OccupancyGrid};

/// How LoS decisions are produced at each location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkModel {
    Perfect,
    Detected {
        params: ChannelParams,
        detector: DetectorConfig,
    },
}

/// Everything a mapping trial needs, built once and shared across trials.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub layout: RoomLayout,
    pub array: AntennaArray,
    pub cell_size: f64,
    pub link: LinkModel,
}

impl Scenario {
    pub fn new(layout: RoomLayout, num_antennas: usize, cell_size: f64, link: LinkModel) -> Result<Self> {
        let array = place_antennas(&layout, num_antennas)?;
        Ok(Self {
            layout,
            array,
            cell_size,
            link,
        })
    }

    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        let link = match config.link {
            LinkQuality::Perfect => LinkModel::Perfect,
            LinkQuality::Estimated { gamma_v_db } => LinkModel::Detected {
                params: config.channel_params(gamma_v_db)?,
                detector: config.detector,
            },
        };
        Self::new(config.layout.clone(), config.num_antennas, config.cell_size, link)
    }

    /// Same scene, different LoS source.
    pub fn with_link(&self, link: LinkModel) -> Self {
        Self {
            link,
            ..self.clone()
        }
    }

    /// Estimated LoS bits for a terminal at `mt` together with the true ones.
    pub fn decide(&self, mt: Point2D, rng: &mut seed::SimRng) -> Result<(Vec<bool>, Vec<bool>)> {
        match &self.link {
            LinkModel::Perfect => {
                let b = los_vector(mt, &self.array, &self.layout)?;
                Ok((b.clone(), b))
            }
            LinkModel::Detected { params, detector } => {
                let truth = draw_channel(&self.layout, &self.array, mt, params, rng)?;
                let sigma_v_sq = noise_variance(&truth, params);
                let est = estimate_channel(truth, sigma_v_sq, rng)?;
                let result = detect_realization(&est, params, detector)?;
                Ok((result.b_hat, est.b))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub locations: Vec<Point2D>,
    /// IoU in percent after each location.
    pub iou_trace: Vec<f64>,
    pub unexplored_trace: Vec<f64>,
    pub final_unexplored_area: f64,
    pub error_rates: Vec<f64>,
}

/// State after one location has been processed.
pub struct LocationStep<'a> {
    pub index: usize,
    pub mt: Point2D,
    pub b_hat: &'a [bool],
    pub b: &'a [bool],
    pub grid: &'a OccupancyGrid,
}

/// Terminal positions for a trial.
#[derive(Debug, Clone, Copy)]
pub enum Locations<'a> {
    /// This many positions drawn uniformly over the free area.
    Random(usize),
    Fixed(&'a [Point2D]),
}

impl Locations<'_> {
    fn len(&self) -> usize {
        match self {
            Locations::Random(n) => *n,
            Locations::Fixed(list) => list.len(),
        }
    }
}

/// Runs one mapping trial, calling `observe` after every location.
pub fn run_trial_with<F>(
    scenario: &Scenario,
    locations: Locations<'_>,
    trial_seed: u64,
    mut observe: F,
) -> Result<TrialResult>
where
    F: FnMut(&LocationStep<'_>),
{
    let n = locations.len();
    let mut grid = init_grid(&scenario.layout, scenario.cell_size)?;
    let mut result = TrialResult {
        locations: Vec::with_capacity(n),
        iou_trace: Vec::with_capacity(n),
        unexplored_trace: Vec::with_capacity(n),
        final_unexplored_area: grid.unexplored_area(),
        error_rates: Vec::with_capacity(n),
    };
    for index in 0..n {
        let mt = match locations {
            Locations::Random(_) => {
                let mut rng = seed::stream(trial_seed, index, TERMINAL);
                sample_mt_location(&scenario.layout, &mut rng)?
            }
            Locations::Fixed(list) => list[index],
        };
        let mut rng = seed::stream(trial_seed, index, CHANNEL);
        let (b_hat, b) = scenario.decide(mt, &mut rng)?;
        update_with_location(&mut grid, mt, &scenario.array, &scenario.layout, &b_hat)?;
        let metrics = compute_iou(&grid, &scenario.layout);
        result.locations.push(mt);
        result.iou_trace.push(metrics.iou);
        result.unexplored_trace.push(metrics.unexplored_area);
        result.error_rates.push(empirical_error_rate(&b_hat, &b)?);
        result.final_unexplored_area = metrics.unexplored_area;
        observe(&LocationStep {
            index,
            mt,
            b_hat: &b_hat,
            b: &b,
            grid: &grid,
        });
    }
    Ok(result)
}

pub fn run_trial(scenario: &Scenario, num_locations: usize, trial_seed: u64) -> Result<TrialResult> {
    run_trial_with(scenario, Locations::Random(num_locations), trial_seed, |_| {})
}

/// One trial as described by `config`; deterministic in `(config, trial_seed)`.
pub fn run_mapping_trial(config: &ExperimentConfig, trial_seed: u64) -> Result<TrialResult> {
    let scenario = Scenario::from_config(config)?;
    run_trial(&scenario, config.num_locations, trial_seed)
}

/// Channel parameters for a sweep point.
pub fn sweep_params(config: &ExperimentConfig, k_db: f64, gamma_v_db: f64) -> Result<ChannelParams> {
    ChannelParams::from_db(config.carrier_ghz, k_db, EstimationNoise::GammaDb(gamma_v_db))
}
