//! Experiment drivers: configuration, seeding, trials, sweeps and the files
//! the command line tool writes.

pub mod config;
pub mod output;
pub mod seed;
pub mod studies;
pub mod trial;

use crate::error::Result;
use crate::mapping::init_grid;
use crate::render::{render_grid, render_svg};

pub use config::{ExperimentConfig, LinkQuality, SweepConfig};
pub use output::{fmt_sig, write_all, OutputFile};
pub use studies::{case_study_1, case_study_2, case_study_3, mean_stderr, ErrorSweep, IouSweep, NoiseSweep};
pub use seed::trial_seed;
pub use trial::{run_mapping_trial, run_trial, run_trial_with, sweep_params, LinkModel, Locations, Scenario, TrialResult};

fn map_images(
    scenario: &Scenario,
    locations: Locations<'_>,
    trial_seed: u64,
    prefix: &str,
) -> Result<(TrialResult, Vec<OutputFile>)> {
    let layout = &scenario.layout;
    let antennas = &scenario.array.positions;
    let init = init_grid(layout, scenario.cell_size)?;
    let mut files = vec![
        OutputFile::new(format!("{prefix}_00.pgm"), render_grid(&init, layout, antennas).to_pgm()),
        OutputFile::new(
            format!("{prefix}_00.svg"),
            render_svg(&init, layout, antennas, None, None),
        ),
    ];
    let result = trial::run_trial_with(scenario, locations, trial_seed, |step| {
        let k = step.index + 1;
        files.push(OutputFile::new(
            format!("{prefix}_{k:02}.pgm"),
            render_grid(step.grid, layout, antennas).to_pgm(),
        ));
        files.push(OutputFile::new(
            format!("{prefix}_{k:02}.svg"),
            render_svg(step.grid, layout, antennas, Some(step.b_hat), Some(step.mt)),
        ));
    })?;
    Ok((result, files))
}

fn trace_csv(result: &TrialResult) -> String {
    let mut csv = output::Csv::new(&["location", "x", "y", "iou", "unexplored_area", "los_error_rate"]);
    for (i, mt) in result.locations.iter().enumerate() {
        csv.row(&[
            (i + 1).to_string(),
            fmt_sig(mt.x),
            fmt_sig(mt.y),
            fmt_sig(result.iou_trace[i]),
            fmt_sig(result.unexplored_trace[i]),
            fmt_sig(result.error_rates[i]),
        ]);
    }
    csv.finish()
}

/// One trial over `num_locations` random positions: a per-location trace and
/// a map image after every location.
pub fn map_outputs(config: &ExperimentConfig) -> Result<Vec<OutputFile>> {
    let scenario = Scenario::from_config(config)?;
    let (result, mut files) = map_images(
        &scenario,
        Locations::Random(config.num_locations),
        seed::trial_seed(config.seed, 0),
        "map",
    )?;
    files.insert(0, OutputFile::new("map_trace.csv", trace_csv(&result)));
    Ok(files)
}

/// Map images over the configured fixed positions: the empty map plus one
/// image per position.
pub fn render_outputs(config: &ExperimentConfig) -> Result<Vec<OutputFile>> {
    let scenario = Scenario::from_config(config)?;
    let (result, mut files) = map_images(
        &scenario,
        Locations::Fixed(&config.render_locations),
        seed::trial_seed(config.seed, 0),
        "render",
    )?;
    files.insert(0, OutputFile::new("render_trace.csv", trace_csv(&result)));
    Ok(files)
}

pub fn sweep_iou_outputs(config: &ExperimentConfig, jobs: usize) -> Result<Vec<OutputFile>> {
    let sweep = case_study_1(config, jobs)?;
    Ok(vec![OutputFile::new("sweep_iou.csv", sweep.csv())])
}

pub fn los_error_outputs(config: &ExperimentConfig, jobs: usize) -> Result<Vec<OutputFile>> {
    let sweep = case_study_2(config, &config.sweeps.k_db, &config.sweeps.gamma_v_db, jobs)?;
    Ok(vec![OutputFile::new("los_error.csv", sweep.csv())])
}

pub fn iou_vs_noise_outputs(config: &ExperimentConfig, jobs: usize) -> Result<Vec<OutputFile>> {
    let sweep = case_study_3(
        config,
        &config.sweeps.k_db,
        &config.sweeps.gamma_v_db,
        &config.sweeps.locations,
        jobs,
    )?;
    Ok(vec![OutputFile::new("iou_vs_noise.csv", sweep.csv())])
}
