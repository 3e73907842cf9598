//! Texture periodicity estimation, representative texel extraction, tiling
//! synthesis and statistical block defect detection for 8-bit grayscale
//! images.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`periodicity`] estimates row and column periods from distance
//!    matching function (DMF) curves.
//! 2. [`blocks`] lays a period-sized grid over the image and compares the
//!    first-order statistics ([`stats`]) of every block against the whole
//!    image.
//! 3. The most typical conforming block becomes the representative texel.
//! 4. [`synthesis`] tiles that texel into an output of any size, or outlines
//!    the non-conforming blocks.
//!
//! [`testgen`] builds seeded synthetic textures with known ground truth.
//!
//! Hot loops run on rayon when the `parallel` feature is enabled (the
//! default). Every parallel path produces bit-identical results to the
//! sequential one; see [`Execution`].

pub mod blocks;
mod error;
mod exec;
pub mod image;
pub mod periodicity;
pub mod pgm;
pub mod pipeline;
pub mod stats;
pub mod synthesis;
pub mod testgen;

pub use blocks::{
    classify_blocks, deviation, partition, AnalysisResult, BlockGrid, BlockIndex, BlockReport,
};
pub use error::{Error, PgmError, Result};
pub use exec::Execution;
pub use image::{crop, draw_rect_outline, GrayImage, Rect};
pub use periodicity::{
    column_dmf, estimate_period, estimate_periods, find_minima, forward_difference, row_dmf, Axis,
    DmfCurve, PeriodEstimate,
};
pub use pgm::{load_pgm, save_pgm, PgmFormat};
pub use pipeline::{analyze, AnalysisConfig, PipelineReport};
pub use stats::{features, features_of_region, histogram, FeatureVector, Histogram};
pub use synthesis::{extract_texel, highlight_anomalies, synthesize};
pub use testgen::{fixture, generate, random_texel, sub_period, GroundTruth, TexelStyle};
