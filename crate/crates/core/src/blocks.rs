//! Grid partitioning and local-versus-global statistical conformance.
//!
//! The image is divided into whole blocks of one periodic pattern each,
//! anchored at the top-left corner. Every block's [`FeatureVector`] is
//! compared against the features of the whole image; a block conforms when
//! all six relative deviations are within the threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::image::{GrayImage, Rect};
use crate::stats::{features_of_region, FeatureVector};

/// `(row, column)` of a block in the grid. Serializes as `[i, j]`.
pub type BlockIndex = (usize, usize);

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockGrid {
    pub block_h: usize,
    pub block_w: usize,
    pub n_rows: usize,
    pub n_cols: usize,
}

impl BlockGrid {
    pub fn len(&self) -> usize {
        self.n_rows * self.n_cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, (i, j): BlockIndex) -> bool {
        i < self.n_rows && j < self.n_cols
    }

    /// Pixel rect of block `(i, j)`.
    pub fn rect(&self, index: BlockIndex) -> Result<Rect> {
        if !self.contains(index) {
            return Err(Error::BlockOutOfGrid(index.0, index.1));
        }
        let (i, j) = index;
        Ok(Rect::new(
            j * self.block_w,
            i * self.block_h,
            self.block_w,
            self.block_h,
        ))
    }

    /// Block indices in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = BlockIndex> + '_ {
        (0..self.n_rows).flat_map(move |i| (0..self.n_cols).map(move |j| (i, j)))
    }

    fn check_image(&self, img: &GrayImage) -> Result<()> {
        if self.block_h == 0
            || self.block_w == 0
            || self.is_empty()
            || self.n_rows * self.block_h > img.height()
            || self.n_cols * self.block_w > img.width()
        {
            return Err(Error::param(format!(
                "grid {self:?} does not fit a {}x{} image",
                img.width(),
                img.height()
            )));
        }
        Ok(())
    }
}

/// Lays a grid of `block_h` x `block_w` blocks over `img`. Partial blocks
/// along the right and bottom edges are left out.
pub fn partition(img: &GrayImage, block_h: usize, block_w: usize) -> Result<BlockGrid> {
    if block_h == 0 || block_w == 0 || block_h > img.height() || block_w > img.width() {
        return Err(Error::param(format!(
            "block {block_w}x{block_h} does not fit a {}x{} image",
            img.width(),
            img.height()
        )));
    }
    Ok(BlockGrid {
        block_h,
        block_w,
        n_rows: img.height() / block_h,
        n_cols: img.width() / block_w,
    })
}

/// Per-feature relative deviation `|local - global| / max(|global|, epsilon)`,
/// in the order of [`FeatureVector::NAMES`].
pub fn deviation(local: &FeatureVector, global: &FeatureVector, epsilon: f64) -> [f64; 6] {
    let l = local.to_array();
    let g = global.to_array();
    std::array::from_fn(|k| (l[k] - g[k]).abs() / g[k].abs().max(epsilon))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    pub index: BlockIndex,
    pub features: FeatureVector,
    pub deviations: [f64; 6],
    pub max_deviation: f64,
    pub conforming: bool,
}

/// Outcome of block classification. Field order matches the JSON layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub grid: BlockGrid,
    pub threshold: f64,
    pub epsilon: f64,
    #[serde(rename = "global")]
    pub global_features: FeatureVector,
    /// Most typical conforming block; `None` when nothing conforms.
    pub representative: Option<BlockIndex>,
    /// Row-major.
    pub blocks: Vec<BlockReport>,
    pub anomalies: Vec<BlockIndex>,
}

impl AnalysisResult {
    pub fn report(&self, index: BlockIndex) -> Option<&BlockReport> {
        if !self.grid.contains(index) {
            return None;
        }
        self.blocks.get(index.0 * self.grid.n_cols + index.1)
    }

    pub fn conforming(&self) -> impl Iterator<Item = BlockIndex> + '_ {
        self.blocks.iter().filter(|b| b.conforming).map(|b| b.index)
    }
}

pub fn classify_blocks(
    img: &GrayImage,
    grid: &BlockGrid,
    threshold: f64,
    epsilon: f64,
) -> Result<AnalysisResult> {
    classify_blocks_with(img, grid, threshold, epsilon, Execution::default())
}

/// Classifies every block of `grid` against the statistics of the whole
/// image, edge strips included.
///
/// A threshold of zero is accepted and admits only blocks whose features
/// equal the global ones exactly.
pub fn classify_blocks_with(
    img: &GrayImage,
    grid: &BlockGrid,
    threshold: f64,
    epsilon: f64,
    exec: Execution,
) -> Result<AnalysisResult> {
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(Error::param(format!(
            "threshold {threshold} must be finite and >= 0"
        )));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::param(format!(
            "epsilon {epsilon} must be finite and > 0"
        )));
    }
    grid.check_image(img)?;

    let global = features_of_region(img, img.bounds())?;
    let n_cols = grid.n_cols;
    let blocks: Vec<BlockReport> = exec
        .map(grid.len(), |k| {
            let index = (k / n_cols, k % n_cols);
            let features = features_of_region(img, grid.rect(index)?)?;
            let deviations = deviation(&features, &global, epsilon);
            let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
            Ok(BlockReport {
                index,
                features,
                deviations,
                max_deviation,
                conforming: max_deviation <= threshold,
            })
        })
        .into_iter()
        .collect::<Result<_>>()?;

    // the earliest block in row-major order wins ties
    let representative = blocks
        .iter()
        .filter(|b| b.conforming)
        .fold(None::<&BlockReport>, |best, b| match best {
            Some(r) if r.max_deviation <= b.max_deviation => Some(r),
            _ => Some(b),
        })
        .map(|b| b.index);
    let anomalies = blocks
        .iter()
        .filter(|b| !b.conforming)
        .map(|b| b.index)
        .collect();

    Ok(AnalysisResult {
        grid: *grid,
        threshold,
        epsilon,
        global_features: global,
        representative,
        blocks,
        anomalies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::features;
    use crate::Histogram;

    #[test]
    fn partition_counts() {
        let img = GrayImage::filled(100, 100, 0).unwrap();
        let g = partition(&img, 25, 25).unwrap();
        assert_eq!((g.n_rows, g.n_cols, g.len()), (4, 4, 16));

        let img = GrayImage::filled(100, 90, 0).unwrap();
        let g = partition(&img, 25, 25).unwrap();
        assert_eq!((g.n_rows, g.n_cols), (3, 4));
        assert_eq!(g.rect((2, 3)).unwrap(), Rect::new(75, 50, 25, 25));

        let g = partition(&img, 90, 100).unwrap();
        assert_eq!((g.n_rows, g.n_cols), (1, 1));
        assert!(partition(&img, 91, 10).is_err());
        assert!(partition(&img, 0, 10).is_err());
    }

    #[test]
    fn grid_rect_bounds() {
        let g = BlockGrid {
            block_h: 4,
            block_w: 5,
            n_rows: 2,
            n_cols: 3,
        };
        assert_eq!(g.rect((1, 2)).unwrap(), Rect::new(10, 4, 5, 4));
        assert_eq!(g.rect((2, 0)), Err(Error::BlockOutOfGrid(2, 0)));
        assert_eq!(
            g.indices().collect::<Vec<_>>()[..4],
            [(0, 0), (0, 1), (0, 2), (1, 0)]
        );
    }

    #[test]
    fn identical_features_deviate_by_zero() {
        let f = features(&Histogram::from_pixels(&[3, 9, 27, 81])).unwrap();
        assert_eq!(deviation(&f, &f, DEFAULT_EPSILON), [0.0; 6]);
    }

    #[test]
    fn mean_deviation_ten_percent() {
        let mut global = features(&Histogram::from_pixels(&[100])).unwrap();
        global.variance = 5.0;
        let mut local = global;
        local.mean = 90.0;
        let d = deviation(&local, &global, 1e-6);
        assert!((d[0] - 0.10).abs() < 1e-15);
        assert_eq!(d[1..], [0.0; 5]);
    }

    #[test]
    fn symmetric_global_blows_up_skewness_ratio() {
        // global {0, 255} is perfectly symmetric; the block is not
        let global = features(&Histogram::from_pixels(&[0, 255])).unwrap();
        assert_eq!(global.skewness, 0.0);
        let mut local = global;
        local.skewness = 50.0;
        let d = deviation(&local, &global, 1e-6);
        assert!((d[2] - 5e7).abs() < 1e-6);
    }

    #[test]
    fn exact_tiling_all_conform() {
        let texel = [9u8, 40, 77, 3, 250, 128];
        let img = GrayImage::from_fn(9, 8, |x, y| texel[(x % 3) + 3 * (y % 2)]).unwrap();
        let grid = partition(&img, 2, 3).unwrap();
        let res = classify_blocks(&img, &grid, 1e-12, DEFAULT_EPSILON).unwrap();
        assert!(res
            .blocks
            .iter()
            .all(|b| b.conforming && b.max_deviation == 0.0));
        assert_eq!(res.representative, Some((0, 0)));
        assert!(res.anomalies.is_empty());
    }

    #[test]
    fn zero_threshold_on_noise_has_no_representative() {
        let img = GrayImage::from_fn(32, 32, |x, y| {
            ((x * 7919 + y * 6007 + x * y * 31) % 256) as u8
        })
        .unwrap();
        let grid = partition(&img, 8, 8).unwrap();
        let res = classify_blocks(&img, &grid, 0.0, DEFAULT_EPSILON).unwrap();
        assert_eq!(res.representative, None);
        assert_eq!(res.anomalies.len(), 16);
    }

    #[test]
    fn representative_is_most_typical() {
        // one odd block in the corner, the rest split between two variants
        let img = GrayImage::from_fn(8, 4, |x, y| match (x / 2, y / 2) {
            (0, 0) => 250,
            _ => ((x + y) % 2 * 100) as u8,
        })
        .unwrap();
        let grid = partition(&img, 2, 2).unwrap();
        let res = classify_blocks(&img, &grid, 10.0, DEFAULT_EPSILON).unwrap();
        let rep = res.report(res.representative.unwrap()).unwrap();
        assert!(res
            .blocks
            .iter()
            .filter(|b| b.conforming)
            .all(|b| b.max_deviation >= rep.max_deviation));
        assert_ne!(res.representative, Some((0, 0)));
        assert_eq!(res.representative, Some((0, 1)));
    }

    #[test]
    fn parameter_checks() {
        let img = GrayImage::filled(8, 8, 1).unwrap();
        let grid = partition(&img, 4, 4).unwrap();
        assert!(classify_blocks(&img, &grid, -0.1, 1e-6).is_err());
        assert!(classify_blocks(&img, &grid, f64::NAN, 1e-6).is_err());
        assert!(classify_blocks(&img, &grid, 0.1, 0.0).is_err());
        let too_big = BlockGrid {
            block_h: 4,
            block_w: 4,
            n_rows: 3,
            n_cols: 1,
        };
        assert!(classify_blocks(&img, &too_big, 0.1, 1e-6).is_err());
    }

    #[test]
    fn json_layout() {
        let img = GrayImage::filled(4, 2, 5).unwrap();
        let grid = partition(&img, 2, 2).unwrap();
        let res = classify_blocks(&img, &grid, 0.1, 1e-6).unwrap();
        let text = serde_json::to_string(&res).unwrap();
        let positions: Vec<usize> = [
            "grid",
            "threshold",
            "epsilon",
            "global",
            "representative",
            "blocks",
            "anomalies",
        ]
        .iter()
        .map(|k| text.find(&format!("\"{k}\":")).unwrap())
        .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["representative"], serde_json::json!([0, 0]));
        assert_eq!(v["blocks"][1]["index"], serde_json::json!([0, 1]));
        assert_eq!(v["grid"]["block_h"], 2);
        let back: AnalysisResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, res);
    }
}
