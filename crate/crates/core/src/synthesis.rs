//! Texel extraction, tiling synthesis and anomaly highlighting.

use crate::blocks::{BlockGrid, BlockIndex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::image::{crop, paint_band, GrayImage};

/// Copies block `index` of `grid` out of `img`.
pub fn extract_texel(img: &GrayImage, grid: &BlockGrid, index: BlockIndex) -> Result<GrayImage> {
    crop(img, grid.rect(index)?)
}

pub fn synthesize(texel: &GrayImage, out_w: usize, out_h: usize) -> Result<GrayImage> {
    synthesize_with(texel, out_w, out_h, Execution::default())
}

/// Tiles `texel` from the top-left corner into an `out_w` x `out_h` image,
/// cropping the last partial tiles. No blending is done at tile seams.
pub fn synthesize_with(
    texel: &GrayImage,
    out_w: usize,
    out_h: usize,
    exec: Execution,
) -> Result<GrayImage> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::param(format!(
            "output size {out_w}x{out_h} must be positive"
        )));
    }
    let tw = texel.width();
    let mut pixels = vec![0u8; out_w * out_h];
    exec.for_each_row(&mut pixels, out_w, |y, row| {
        let src = texel.row(y % texel.height());
        for chunk in row.chunks_mut(tw) {
            chunk.copy_from_slice(&src[..chunk.len()]);
        }
    });
    Ok(GrayImage::from_parts_unchecked(out_w, out_h, pixels))
}

/// Outlines every anomalous block with a band of `value`.
///
/// When `2 * thickness` exceeds the block's smaller side the whole block is
/// filled. Overlapping bands of adjacent blocks are simply written twice.
pub fn highlight_anomalies(
    img: &GrayImage,
    grid: &BlockGrid,
    anomalies: &[BlockIndex],
    value: u8,
    thickness: usize,
) -> Result<GrayImage> {
    if thickness == 0 {
        return Err(Error::param("outline thickness must be at least 1"));
    }
    let rects = anomalies
        .iter()
        .map(|&ix| grid.rect(ix))
        .collect::<Result<Vec<_>>>()?;
    for r in &rects {
        img.check_rect(r)?;
    }
    let mut out = img.clone();
    for r in &rects {
        paint_band(&mut out, r, value, thickness);
    }
    Ok(out)
}
