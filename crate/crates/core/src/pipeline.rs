//! End-to-end analysis: periods, grid, classification.

use serde::{Deserialize, Serialize};

use crate::blocks::{classify_blocks_with, partition, AnalysisResult, DEFAULT_EPSILON};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::image::GrayImage;
use crate::periodicity::{estimate_periods_with, MinimaSpacingMode, PeriodEstimate};
use crate::synthesis::{extract_texel, synthesize_with};

/// Conformance threshold for natural textures (10% deviation).
pub const NATURAL_THRESHOLD: f64 = 0.10;
/// Conformance threshold for clean synthetic textures (2% deviation).
pub const SYNTHETIC_THRESHOLD: f64 = 0.02;
pub const DEFAULT_DMAX_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub threshold: f64,
    pub epsilon: f64,
    pub d_max_fraction: f64,
    /// `(row_period, col_period)`; skips DMF estimation when set.
    pub manual_periods: Option<(usize, usize)>,
    pub execution: Execution,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            threshold: NATURAL_THRESHOLD,
            epsilon: DEFAULT_EPSILON,
            d_max_fraction: DEFAULT_DMAX_FRACTION,
            manual_periods: None,
            execution: Execution::default(),
        }
    }
}

impl AnalysisConfig {
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_periods(mut self, row_period: usize, col_period: usize) -> Self {
        self.manual_periods = Some((row_period, col_period));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub periods: PeriodEstimate,
    pub analysis: AnalysisResult,
}

impl PipelineReport {
    /// The representative block cut out of `img`, if any block conforms.
    pub fn texel(&self, img: &GrayImage) -> Result<Option<GrayImage>> {
        self.analysis
            .representative
            .map(|ix| extract_texel(img, &self.analysis.grid, ix))
            .transpose()
    }

    /// Tiles the representative texel to `out_w` x `out_h`.
    pub fn synthesize(
        &self,
        img: &GrayImage,
        out_w: usize,
        out_h: usize,
    ) -> Result<Option<GrayImage>> {
        self.texel(img)?
            .map(|t| synthesize_with(&t, out_w, out_h, Execution::default()))
            .transpose()
    }
}

pub fn analyze(img: &GrayImage, config: &AnalysisConfig) -> Result<PipelineReport> {
    let periods = match config.manual_periods {
        Some((r, c)) => {
            if r == 0 || c == 0 {
                return Err(Error::param("manual periods must be positive"));
            }
            PeriodEstimate::manual(r, c)
        }
        None => estimate_periods_with(
            img,
            config.d_max_fraction,
            &MinimaSpacingMode::default(),
            config.execution,
        )?,
    };
    let grid = partition(img, periods.row_period, periods.col_period)?;
    let analysis = classify_blocks_with(
        img,
        &grid,
        config.threshold,
        config.epsilon,
        config.execution,
    )?;
    Ok(PipelineReport { periods, analysis })
}
