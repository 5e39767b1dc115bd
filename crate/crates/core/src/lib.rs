//! Line-of-sight sensing with an extremely large antenna array.
//!
//! A terminal moving through a room sends pilots to antennas spread along
//! the walls. From each channel estimate the receiver decides, antenna by
//! antenna, whether the direct path is clear ([`detector`]). Clear links
//! carve free space out of an occupancy map ([`mapping`]); after enough
//! terminal positions, what remains unexplored outlines the furniture.
//!
//! ```
//! use losmap::geometry::{place_antennas, sample_mt_location, RoomLayout};
//! use losmap::channel::{draw_channel, estimate_channel, noise_variance, ChannelParams, EstimationNoise};
//! use losmap::detector::{detect_realization, DetectorConfig};
//! use losmap::mapping::{compute_iou, init_grid, update_with_location};
//! use rand::SeedableRng;
//!
//! let room = RoomLayout::office();
//! let array = place_antennas(&room, 256)?;
//! let params = ChannelParams::from_db(28.0, 25.0, EstimationNoise::GammaDb(30.0))?;
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let mut grid = init_grid(&room, 0.1)?;
//!
//! for _ in 0..5 {
//!     let mt = sample_mt_location(&room, &mut rng)?;
//!     let truth = draw_channel(&room, &array, mt, &params, &mut rng)?;
//!     let sigma_v_sq = noise_variance(&truth, &params);
//!     let estimate = estimate_channel(truth, sigma_v_sq, &mut rng)?;
//!     let decision = detect_realization(&estimate, &params, &DetectorConfig::default())?;
//!     update_with_location(&mut grid, mt, &array, &room, &decision.b_hat)?;
//! }
//! let metrics = compute_iou(&grid, &room);
//! assert!(metrics.iou > 10.7);
//! # Ok::<(), losmap::Error>(())
//! ```

pub mod channel;
pub mod detector;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod mapping;
pub mod render;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/detection.md")]
    mod detection {}
    #[doc = include_str!("../../../book/src/mapping.md")]
    mod mapping {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
