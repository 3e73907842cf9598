//! Independent reference implementations used as test oracles. None of these
//! share code paths with the library routines they check.
#![allow(dead_code)]

use texsynth::{GrayImage, Rect};

/// Column DMF sums by brute force over every ordered pixel pair of each row.
pub fn naive_column_dmf_sums(img: &GrayImage, d_max: usize) -> Vec<u64> {
    let (w, h) = (img.width(), img.height());
    let mut sums = vec![0u64; d_max];
    for d in 1..=d_max {
        for y in 0..h {
            for x in 0..w {
                for x2 in 0..w {
                    if x2 == x + d {
                        let diff = img.get(x, y) as i64 - img.get(x2, y) as i64;
                        sums[d - 1] += (diff * diff) as u64;
                    }
                }
            }
        }
    }
    sums
}

/// Row DMF sums by brute force over every ordered pixel pair of each column.
pub fn naive_row_dmf_sums(img: &GrayImage, d_max: usize) -> Vec<u64> {
    let (w, h) = (img.width(), img.height());
    let mut sums = vec![0u64; d_max];
    for d in 1..=d_max {
        for x in 0..w {
            for y in 0..h {
                for y2 in 0..h {
                    if y2 == y + d {
                        let diff = img.get(x, y) as i64 - img.get(x, y2) as i64;
                        sums[d - 1] += (diff * diff) as u64;
                    }
                }
            }
        }
    }
    sums
}

pub fn region_pixels(img: &GrayImage, r: Rect) -> Vec<u8> {
    let mut v = Vec::with_capacity(r.w * r.h);
    for y in r.y0..r.y0 + r.h {
        for x in r.x0..r.x0 + r.w {
            v.push(img.get(x, y));
        }
    }
    v
}

/// `[mean, variance, skewness, kurtosis, energy, entropy]` straight from the
/// pixels: two passes for the moments, sorted run lengths for the level
/// probabilities.
pub fn direct_features(pixels: &[u8]) -> [f64; 6] {
    let n = pixels.len() as f64;
    let mean = pixels.iter().map(|&v| v as f64).sum::<f64>() / n;
    let central = |m: i32| {
        pixels
            .iter()
            .map(|&v| (v as f64 - mean).powi(m))
            .sum::<f64>()
            / n
    };
    let mut sorted = pixels.to_vec();
    sorted.sort_unstable();
    let mut energy = 0.0;
    let mut entropy = 0.0;
    for run in sorted.chunk_by(|a, b| a == b) {
        let p = run.len() as f64 / n;
        energy += p * p;
        entropy -= p * p.log2();
    }
    [mean, central(2), central(3), central(4), energy, entropy]
}

/// `|a - b| / max(|a|, |b|, 1)`.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Pixels of `r` inside the border band of width `t`.
pub fn band_mask(width: usize, height: usize, r: Rect, t: usize) -> Vec<bool> {
    let mut mask = vec![false; width * height];
    for y in 0..height {
        for x in 0..width {
            let outer = r.contains(x, y);
            let inner = r.w > 2 * t
                && r.h > 2 * t
                && Rect::new(r.x0 + t, r.y0 + t, r.w - 2 * t, r.h - 2 * t).contains(x, y);
            mask[y * width + x] = outer && !inner;
        }
    }
    mask
}

/// True when the tiling of `texel` has a sub-period on either axis, checked
/// directly on a 2x2 tiling.
pub fn brute_force_has_sub_period(texel: &GrayImage) -> bool {
    let (w, h) = (texel.width(), texel.height());
    let px = |x: usize, y: usize| texel.get(x % w, y % h);
    let rows = (1..h).any(|q| (0..2 * h - q).all(|y| (0..w).all(|x| px(x, y) == px(x, y + q))));
    let cols = (1..w).any(|q| (0..h).all(|y| (0..2 * w - q).all(|x| px(x, y) == px(x + q, y))));
    rows || cols
}
