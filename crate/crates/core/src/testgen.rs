//! Seeded synthetic textures with known ground truth.
//!
//! All randomness comes from ChaCha8 (`rand_chacha` 0.3) seeded with
//! `seed_from_u64(seed)`. Texel pixels are drawn from stream 0 and noise from
//! stream 1 of the same seed, so the same seed reproduces the same image on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockIndex;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::periodicity::Axis;

/// Gray-level offset applied to texel pixels inside a defect block.
pub const DEFECT_SHIFT: u8 = 60;

/// Redraws allowed before `random_texel` gives up.
pub const MAX_TEXEL_DRAWS: usize = 64;

const TEXEL_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub texel_h: usize,
    pub texel_w: usize,
    pub reps_r: usize,
    pub reps_c: usize,
    pub defect_blocks: Vec<BlockIndex>,
    /// Uniform noise half-width in gray levels; 0 for an exact image.
    pub noise_amplitude: u8,
    pub seed: u64,
}

impl GroundTruth {
    pub fn image_width(&self) -> usize {
        self.reps_c * self.texel_w
    }

    pub fn image_height(&self) -> usize {
        self.reps_r * self.texel_h
    }

    fn validate(&self) -> Result<()> {
        if self.texel_h == 0 || self.texel_w == 0 || self.reps_r == 0 || self.reps_c == 0 {
            return Err(Error::param(
                "texel size and repetition counts must be positive",
            ));
        }
        if let Some(&(i, j)) = self
            .defect_blocks
            .iter()
            .find(|&&(i, j)| i >= self.reps_r || j >= self.reps_c)
        {
            return Err(Error::param(format!(
                "defect block ({i}, {j}) outside the {}x{} tile grid",
                self.reps_r, self.reps_c
            )));
        }
        Ok(())
    }
}

/// Finds the smallest proper sub-period of a texel treated as a tile: a
/// divisor `q` of its height (or width) such that rows (columns) `q` apart
/// are equal cyclically. `None` means the tile period is exactly `(h, w)`.
///
/// Rows are checked first.
pub fn sub_period(texel: &GrayImage) -> Option<(Axis, usize)> {
    let (w, h) = (texel.width(), texel.height());
    let rows = (1..h)
        .filter(|q| h % q == 0)
        .find(|&q| (0..h).all(|y| texel.row(y) == texel.row((y + q) % h)));
    if let Some(q) = rows {
        return Some((Axis::Rows, q));
    }
    (1..w)
        .filter(|q| w % q == 0)
        .find(|&q| (0..h).all(|y| (0..w).all(|x| texel.get(x, y) == texel.get((x + q) % w, y))))
        .map(|q| (Axis::Columns, q))
}

/// Gray-level distribution of generated texel pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TexelStyle {
    /// Every level in `0..=255` equally likely.
    #[default]
    Uniform,
    /// Dark background in `0..=80` with 15% bright specks in `150..=195`.
    /// Strongly right-skewed, and a defect shift never saturates.
    Speckled,
}

impl TexelStyle {
    fn sample(self, rng: &mut ChaCha8Rng) -> u8 {
        match self {
            TexelStyle::Uniform => rng.gen::<u8>(),
            TexelStyle::Speckled => {
                if rng.gen_bool(0.15) {
                    rng.gen_range(150..=195)
                } else {
                    rng.gen_range(0..=80)
                }
            }
        }
    }
}

/// Draws an `h` x `w` texel of uniformly random gray levels with at least two
/// distinct values and no exact sub-period.
pub fn random_texel(h: usize, w: usize, seed: u64) -> Result<GrayImage> {
    random_texel_styled(h, w, seed, TexelStyle::Uniform)
}

pub fn random_texel_styled(h: usize, w: usize, seed: u64, style: TexelStyle) -> Result<GrayImage> {
    if h < 2 || w < 2 {
        return Err(Error::param(format!(
            "texel {w}x{h} too small: both sides must be >= 2"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(TEXEL_STREAM);
    for _ in 0..MAX_TEXEL_DRAWS {
        let pixels: Vec<u8> = (0..h * w).map(|_| style.sample(&mut rng)).collect();
        if pixels.iter().all(|&v| v == pixels[0]) {
            continue;
        }
        let texel = GrayImage::new(w, h, pixels)?;
        if sub_period(&texel).is_none() {
            return Ok(texel);
        }
    }
    Err(Error::Generation(format!(
        "no {w}x{h} texel without a sub-period after {MAX_TEXEL_DRAWS} draws (seed {seed})"
    )))
}

/// Tiles `texel` into the grid described by `gt`, shifts the defect blocks
/// by [`DEFECT_SHIFT`] (saturating), then adds clamped uniform noise.
pub fn generate(gt: &GroundTruth, texel: &GrayImage) -> Result<GrayImage> {
    gt.validate()?;
    if texel.height() != gt.texel_h || texel.width() != gt.texel_w {
        return Err(Error::param(format!(
            "texel is {}x{}, ground truth says {}x{}",
            texel.width(),
            texel.height(),
            gt.texel_w,
            gt.texel_h
        )));
    }
    let (w, h) = (gt.image_width(), gt.image_height());
    let mut defect = vec![false; gt.reps_r * gt.reps_c];
    for &(i, j) in &gt.defect_blocks {
        defect[i * gt.reps_c + j] = true;
    }
    let mut pixels = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let v = texel.get(x % gt.texel_w, y % gt.texel_h);
            let block = (y / gt.texel_h) * gt.reps_c + x / gt.texel_w;
            pixels.push(if defect[block] {
                v.saturating_add(DEFECT_SHIFT)
            } else {
                v
            });
        }
    }
    if gt.noise_amplitude > 0 {
        let a = i16::from(gt.noise_amplitude);
        let mut rng = ChaCha8Rng::seed_from_u64(gt.seed);
        rng.set_stream(NOISE_STREAM);
        for p in &mut pixels {
            let n: i16 = rng.gen_range(-a..=a);
            *p = (i16::from(*p) + n).clamp(0, 255) as u8;
        }
    }
    GrayImage::new(w, h, pixels)
}

/// Draws the uniform texel for `gt.seed` and generates the image:
/// `(texel, image)`.
pub fn fixture(gt: &GroundTruth) -> Result<(GrayImage, GrayImage)> {
    fixture_styled(gt, TexelStyle::Uniform)
}

pub fn fixture_styled(gt: &GroundTruth, style: TexelStyle) -> Result<(GrayImage, GrayImage)> {
    let texel = random_texel_styled(gt.texel_h, gt.texel_w, gt.seed, style)?;
    let img = generate(gt, &texel)?;
    Ok((texel, img))
}
