//! Gray-level histograms and first-order statistics.
//!
//! With `p_k = n_k / n` the probability of gray level `k`:
//!
//! | feature    | definition                  |
//! |------------|-----------------------------|
//! | `mean`     | `Σ k p_k`                   |
//! | `variance` | `Σ (k - mean)^2 p_k`        |
//! | `skewness` | `Σ (k - mean)^3 p_k`        |
//! | `kurtosis` | `Σ (k - mean)^4 p_k`        |
//! | `energy`   | `Σ p_k^2`                   |
//! | `entropy`  | `-Σ p_k log2 p_k` (bits)    |
//!
//! Skewness and kurtosis are raw central moments, not standardized.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{GrayImage, Rect};

pub const GRAY_LEVELS: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; GRAY_LEVELS],
    n: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Histogram {
            counts: [0; GRAY_LEVELS],
            n: 0,
        }
    }
}

impl Histogram {
    pub fn from_pixels<'a>(pixels: impl IntoIterator<Item = &'a u8>) -> Self {
        let mut h = Histogram::default();
        for &v in pixels {
            h.counts[v as usize] += 1;
            h.n += 1;
        }
        h
    }

    pub fn counts(&self) -> &[u64; GRAY_LEVELS] {
        &self.counts
    }

    pub fn count(&self, level: u8) -> u64 {
        self.counts[level as usize]
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Adds another histogram's counts into this one.
    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
        self.n += other.n;
    }

    pub fn probability(&self, level: u8) -> f64 {
        self.counts[level as usize] as f64 / self.n as f64
    }
}

/// The six first-order features of a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub energy: f64,
    pub entropy: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 6] = [
        "mean", "variance", "skewness", "kurtosis", "energy", "entropy",
    ];

    /// Features in the fixed order of [`FeatureVector::NAMES`].
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.mean,
            self.variance,
            self.skewness,
            self.kurtosis,
            self.energy,
            self.entropy,
        ]
    }
}

pub fn histogram(img: &GrayImage, region: Rect) -> Result<Histogram> {
    img.check_rect(&region)?;
    let mut h = Histogram::default();
    for row in img.rect_rows(&region) {
        for &v in row {
            h.counts[v as usize] += 1;
        }
    }
    h.n = region.area() as u64;
    Ok(h)
}

pub fn features(h: &Histogram) -> Result<FeatureVector> {
    if h.n == 0 {
        return Err(Error::param("features of an empty histogram"));
    }
    let n = h.n as f64;
    let level_sum: u64 = h
        .counts
        .iter()
        .enumerate()
        .map(|(k, &c)| k as u64 * c)
        .sum();
    let mean = level_sum as f64 / n;

    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    let mut entropy = 0.0;
    let mut sum_sq: u128 = 0;
    for (k, &c) in h.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let p = c as f64 / n;
        let d = k as f64 - mean;
        let d2 = d * d;
        m2 += d2 * p;
        m3 += d2 * d * p;
        m4 += d2 * d2 * p;
        entropy += p * -p.log2();
        sum_sq += u128::from(c) * u128::from(c);
    }
    let energy = sum_sq as f64 / (n * n);

    Ok(FeatureVector {
        mean,
        variance: m2,
        skewness: m3,
        kurtosis: m4,
        energy,
        entropy: entropy.clamp(0.0, 8.0),
    })
}

pub fn features_of_region(img: &GrayImage, region: Rect) -> Result<FeatureVector> {
    features(&histogram(img, region)?)
}
