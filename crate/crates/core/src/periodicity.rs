//! Row and column period estimation with distance matching functions.
//!
//! The column DMF at displacement `d` is the mean squared gray-level
//! difference over every horizontal pixel pair `d` apart, pooled across all
//! rows:
//!
//! ```text
//! DMF_col(d) = Σ_y Σ_{x < W-d} (I(x, y) - I(x + d, y))^2 / (H (W - d))
//! ```
//!
//! The row DMF is the same with the axes exchanged. Sums are accumulated in
//! `u64` so that a displacement equal to an exact period yields exactly zero.
//!
//! Periods are read off the local minima of the curve, located by sign
//! changes of its forward difference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Pixel pairs `d` rows apart; yields the row (vertical) period.
    Rows,
    /// Pixel pairs `d` columns apart; yields the column (horizontal) period.
    Columns,
}

/// A DMF sampled at displacements `1..=d_max`.
///
/// Slices are indexed from zero, so `values()[i]` belongs to displacement
/// `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmfCurve {
    axis: Axis,
    sums: Vec<u64>,
    pairs: Vec<u64>,
    values: Vec<f64>,
}

impl DmfCurve {
    /// Builds a curve directly from values, e.g. to run minima detection on
    /// an externally computed signal. Values must be finite and non-negative.
    pub fn from_values(axis: Axis, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("a DMF curve needs at least one value"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::param(format!(
                "DMF values must be finite and non-negative, got {v}"
            )));
        }
        Ok(DmfCurve {
            axis,
            sums: Vec::new(),
            pairs: Vec::new(),
            values,
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn d_max(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at displacement `d` (1-based).
    pub fn value(&self, d: usize) -> f64 {
        self.values[d - 1]
    }

    /// Integer sums of squared differences per displacement. Empty for curves
    /// built with [`DmfCurve::from_values`].
    pub fn sums(&self) -> &[u64] {
        &self.sums
    }

    /// Number of pixel pairs behind each value.
    pub fn pairs(&self) -> &[u64] {
        &self.pairs
    }
}

fn check_d_max(d_max: usize, extent: usize, what: &str) -> Result<()> {
    if d_max == 0 || d_max >= extent {
        return Err(Error::param(format!(
            "d_max {d_max} out of range: need 1 <= d_max <= {what} - 1 = {}",
            extent as i64 - 1
        )));
    }
    Ok(())
}

fn squared_diff_sum(a: &[u8], b: &[u8]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&p, &q)| {
            let d = i32::from(p) - i32::from(q);
            (d * d) as u64
        })
        .sum()
}

fn finish(axis: Axis, sums: Vec<u64>, pairs: Vec<u64>) -> DmfCurve {
    let values = sums
        .iter()
        .zip(&pairs)
        .map(|(&s, &n)| s as f64 / n as f64)
        .collect();
    DmfCurve {
        axis,
        sums,
        pairs,
        values,
    }
}

pub fn column_dmf(img: &GrayImage, d_max: usize) -> Result<DmfCurve> {
    column_dmf_with(img, d_max, Execution::default())
}

pub fn column_dmf_with(img: &GrayImage, d_max: usize, exec: Execution) -> Result<DmfCurve> {
    let (w, h) = (img.width(), img.height());
    check_d_max(d_max, w, "width")?;
    let sums = exec.map(d_max, |i| {
        let d = i + 1;
        (0..h)
            .map(|y| {
                let row = img.row(y);
                squared_diff_sum(&row[..w - d], &row[d..])
            })
            .sum()
    });
    let pairs = (1..=d_max).map(|d| (h * (w - d)) as u64).collect();
    Ok(finish(Axis::Columns, sums, pairs))
}

pub fn row_dmf(img: &GrayImage, d_max: usize) -> Result<DmfCurve> {
    row_dmf_with(img, d_max, Execution::default())
}

pub fn row_dmf_with(img: &GrayImage, d_max: usize, exec: Execution) -> Result<DmfCurve> {
    let (w, h) = (img.width(), img.height());
    check_d_max(d_max, h, "height")?;
    let sums = exec.map(d_max, |i| {
        let d = i + 1;
        (0..h - d)
            .map(|y| squared_diff_sum(img.row(y), img.row(y + d)))
            .sum()
    });
    let pairs = (1..=d_max).map(|d| (w * (h - d)) as u64).collect();
    Ok(finish(Axis::Rows, sums, pairs))
}

/// `result[i] = value(i + 2) - value(i + 1)`, i.e. the forward difference at
/// displacements `1..d_max`.
pub fn forward_difference(curve: &DmfCurve) -> Result<Vec<f64>> {
    if curve.values.len() < 2 {
        return Err(Error::param(
            "forward difference needs at least 2 curve values",
        ));
    }
    Ok(curve.values.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Displacements of the local minima of `curve`, ascending.
///
/// A minimum is where the forward difference turns from negative to
/// positive. A flat trough is reported at its first displacement. A curve
/// that is still descending (or flat after descending) at `d_max` reports a
/// minimum there too, so that the last multiple of a period inside the probe
/// range is not lost. Displacement 1 is never a minimum.
pub fn find_minima(curve: &DmfCurve) -> Result<Vec<usize>> {
    if curve.values.len() < 3 {
        return Err(Error::param(
            "minima detection needs at least 3 curve values",
        ));
    }
    let diffs = forward_difference(curve)?;
    let mut minima = Vec::new();
    // displacement where the current trough started, if we are in one
    let mut trough: Option<usize> = None;
    let mut descending = false;
    for (i, &delta) in diffs.iter().enumerate() {
        // delta leaves displacement d = i + 1
        let d = i + 1;
        if delta < 0.0 {
            descending = true;
            trough = None;
        } else if delta == 0.0 {
            if descending && trough.is_none() {
                trough = Some(d);
            }
        } else {
            if descending {
                minima.push(trough.unwrap_or(d));
            }
            descending = false;
            trough = None;
        }
    }
    if descending {
        minima.push(trough.unwrap_or(curve.values.len()));
    }
    Ok(minima)
}

/// The outcome of period selection on one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodChoice {
    pub period: usize,
    /// Significant local minima considered for selection.
    pub candidates: Vec<usize>,
    /// Set when no candidate existed and the global-minimum fallback was used.
    pub degenerate: bool,
}

/// Strategy for turning a DMF curve into a period.
pub trait PeriodEstimator {
    /// Chooses a period in `1..=max_period` from `curve`.
    fn estimate(&self, curve: &DmfCurve, max_period: usize) -> Result<PeriodChoice>;
}

/// Mode of the spacings between significant DMF minima.
///
/// 1. Find the local minima of the curve at displacements `<= max_period`.
/// 2. Keep those whose value is at most `significance` times the curve mean.
///    Shallow dips between two multiples of the true period repeat with that
///    period and would otherwise dominate the spacing statistics.
/// 3. Collect the first kept minimum plus every spacing between consecutive
///    kept minima, and take the most frequent value (smallest on ties).
/// 4. If the mode is not itself a kept minimum, take the smallest kept
///    minimum that is a multiple of it, else the first kept minimum.
/// 5. With no kept minima, fall back to the displacement of the global
///    minimum (first one on ties) and flag the choice as degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaSpacingMode {
    pub significance: f64,
}

impl MinimaSpacingMode {
    pub const DEFAULT_SIGNIFICANCE: f64 = 0.5;
}

impl Default for MinimaSpacingMode {
    fn default() -> Self {
        MinimaSpacingMode {
            significance: Self::DEFAULT_SIGNIFICANCE,
        }
    }
}

impl PeriodEstimator for MinimaSpacingMode {
    fn estimate(&self, curve: &DmfCurve, max_period: usize) -> Result<PeriodChoice> {
        if self.significance.is_nan() || self.significance <= 0.0 {
            return Err(Error::param("significance must be positive"));
        }
        let max_period = max_period.clamp(1, curve.d_max());
        let values = curve.values();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let cutoff = self.significance * mean;
        let candidates: Vec<usize> = find_minima(curve)?
            .into_iter()
            .filter(|&d| d <= max_period && curve.value(d) <= cutoff)
            .collect();

        if candidates.is_empty() {
            let period = values[..max_period]
                .iter()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |best, (i, &v)| if v < best.1 { (i, v) } else { best },
                )
                .0
                + 1;
            return Ok(PeriodChoice {
                period,
                candidates,
                degenerate: true,
            });
        }

        let mut spacings = vec![candidates[0]];
        spacings.extend(candidates.windows(2).map(|w| w[1] - w[0]));
        spacings.sort_unstable();
        let mut mode = (spacings[0], 0usize);
        let mut i = 0;
        while i < spacings.len() {
            let run = spacings[i..]
                .iter()
                .take_while(|&&s| s == spacings[i])
                .count();
            if run > mode.1 {
                mode = (spacings[i], run);
            }
            i += run;
        }
        let mode = mode.0;
        let period = if candidates.contains(&mode) {
            mode
        } else {
            candidates
                .iter()
                .copied()
                .find(|d| d % mode == 0)
                .unwrap_or(candidates[0])
        };
        Ok(PeriodChoice {
            period,
            candidates,
            degenerate: false,
        })
    }
}

/// Period of `curve` under the default [`MinimaSpacingMode`] estimator,
/// searching the full probe range.
pub fn estimate_period(curve: &DmfCurve) -> Result<usize> {
    Ok(MinimaSpacingMode::default()
        .estimate(curve, curve.d_max())?
        .period)
}

/// Row and column periods of an image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub row_period: usize,
    pub col_period: usize,
    pub row_candidates: Vec<usize>,
    pub col_candidates: Vec<usize>,
    pub row_degenerate: bool,
    pub col_degenerate: bool,
}

impl PeriodEstimate {
    /// A user-supplied estimate with no candidate lists.
    pub fn manual(row_period: usize, col_period: usize) -> Self {
        PeriodEstimate {
            row_period,
            col_period,
            row_candidates: Vec::new(),
            col_candidates: Vec::new(),
            row_degenerate: false,
            col_degenerate: false,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.row_degenerate || self.col_degenerate
    }
}

/// Probe depth for an axis of `extent` pixels: `floor(fraction * extent)`,
/// capped at `extent - 1`.
pub fn probe_depth(extent: usize, d_max_fraction: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&d_max_fraction) || d_max_fraction == 0.0 {
        return Err(Error::param(format!(
            "d_max fraction {d_max_fraction} not in (0, 1]"
        )));
    }
    let d_max = ((d_max_fraction * extent as f64).floor() as usize).min(extent.saturating_sub(1));
    if d_max < 3 {
        return Err(Error::param(format!(
            "axis of {extent} pixels too small: probe depth {d_max} < 3"
        )));
    }
    Ok(d_max)
}

pub fn estimate_periods(img: &GrayImage, d_max_fraction: f64) -> Result<PeriodEstimate> {
    estimate_periods_with(
        img,
        d_max_fraction,
        &MinimaSpacingMode::default(),
        Execution::default(),
    )
}

/// Estimates both periods with an explicit estimator. Periods longer than
/// half the image extent are never selected, since they cannot repeat twice.
pub fn estimate_periods_with(
    img: &GrayImage,
    d_max_fraction: f64,
    estimator: &dyn PeriodEstimator,
    exec: Execution,
) -> Result<PeriodEstimate> {
    let (w, h) = (img.width(), img.height());
    let rows = row_dmf_with(img, probe_depth(h, d_max_fraction)?, exec)?;
    let cols = column_dmf_with(img, probe_depth(w, d_max_fraction)?, exec)?;
    let r = estimator.estimate(&rows, (h / 2).max(1))?;
    let c = estimator.estimate(&cols, (w / 2).max(1))?;
    Ok(PeriodEstimate {
        row_period: r.period,
        col_period: c.period,
        row_candidates: r.candidates,
        col_candidates: c.candidates,
        row_degenerate: r.degenerate,
        col_degenerate: c.degenerate,
    })
}
