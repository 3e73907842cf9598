//! Grayscale image representation and the geometric operations on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable 8-bit grayscale image stored row-major.
///
/// Coordinates are `(x, y)` with `x` the column and `y` the row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        match width.checked_mul(height) {
            Some(n) if n == pixels.len() => Ok(GrayImage {
                width,
                height,
                pixels,
            }),
            _ => Err(Error::param(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width.saturating_mul(height),
                pixels.len()
            ))),
        }
    }

    /// An image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Pixel at column `x`, row `y`. Panics when out of range.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of range"
        );
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    /// The rect covering the whole image.
    pub fn bounds(&self) -> Rect {
        Rect {
            x0: 0,
            y0: 0,
            w: self.width,
            h: self.height,
        }
    }

    pub fn transpose(&self) -> GrayImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.pixels[y * self.width + x]);
            }
        }
        GrayImage {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    /// Applies `f` to every pixel value.
    pub fn map(&self, f: impl Fn(u8) -> u8) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| f(v)).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        debug_assert_eq!(width * height, pixels.len());
        GrayImage {
            width,
            height,
            pixels,
        }
    }

    pub(crate) fn check_rect(&self, r: &Rect) -> Result<()> {
        if r.fits(self.width, self.height) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                rect: *r,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// Iterates over the rows of `r`, each as a slice of length `r.w`.
    /// The rect must already be checked.
    pub(crate) fn rect_rows<'a>(&'a self, r: &Rect) -> impl Iterator<Item = &'a [u8]> + 'a {
        let (x0, x1) = (r.x0, r.x0 + r.w);
        (r.y0..r.y0 + r.h).map(move |y| &self.row(y)[x0..x1])
    }
}

/// An axis-aligned rectangle: top-left corner `(x0, y0)` plus extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub const fn new(x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Rect { x0, y0, w, h }
    }

    /// True when the rect is non-empty and lies inside a `width`x`height` image.
    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.w >= 1
            && self.h >= 1
            && self.x0.checked_add(self.w).is_some_and(|x1| x1 <= width)
            && self.y0.checked_add(self.h).is_some_and(|y1| y1 <= height)
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x0 + self.w && y >= self.y0 && y < self.y0 + self.h
    }
}

pub fn crop(img: &GrayImage, r: Rect) -> Result<GrayImage> {
    img.check_rect(&r)?;
    let mut pixels = Vec::with_capacity(r.area());
    for row in img.rect_rows(&r) {
        pixels.extend_from_slice(row);
    }
    Ok(GrayImage::from_parts_unchecked(r.w, r.h, pixels))
}

/// Returns a copy of `img` with the band of width `thickness` just inside `r`
/// set to `value`.
///
/// Requires `1 <= thickness` and `2 * thickness <= min(r.w, r.h)`; at the
/// upper limit the band covers the whole rect.
pub fn draw_rect_outline(
    img: &GrayImage,
    r: Rect,
    value: u8,
    thickness: usize,
) -> Result<GrayImage> {
    img.check_rect(&r)?;
    if thickness == 0 || 2 * thickness > r.w.min(r.h) {
        return Err(Error::param(format!(
            "outline thickness {thickness} invalid for a {}x{} rect",
            r.w, r.h
        )));
    }
    let mut out = img.clone();
    paint_band(&mut out, &r, value, thickness);
    Ok(out)
}

/// Writes the border band in place. `thickness` is clamped so an oversized
/// band fills the rect.
pub(crate) fn paint_band(img: &mut GrayImage, r: &Rect, value: u8, thickness: usize) {
    let width = img.width;
    let t = thickness.min(r.w.div_ceil(2)).min(r.h.div_ceil(2));
    for y in r.y0..r.y0 + r.h {
        let row = &mut img.pixels[y * width + r.x0..y * width + r.x0 + r.w];
        if y < r.y0 + t || y >= r.y0 + r.h - t {
            row.fill(value);
        } else {
            row[..t].fill(value);
            row[r.w - t..].fill(value);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0; 3]).is_err());
        assert!(GrayImage::new(2, 2, vec![0; 4]).is_ok());
    }

    #[test]
    fn crop_identity_and_corner() {
        let img = GrayImage::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(crop(&img, img.bounds()).unwrap(), img);
        let c = crop(&img, Rect::new(1, 1, 1, 1)).unwrap();
        assert_eq!(c, GrayImage::new(1, 1, vec![4]).unwrap());
    }

    #[test]
    fn crop_out_of_bounds() {
        let img = GrayImage::filled(4, 4, 0).unwrap();
        assert!(matches!(
            crop(&img, Rect::new(3, 0, 2, 1)),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(crop(&img, Rect::new(0, 0, 0, 1)).is_err());
        assert!(crop(&img, Rect::new(usize::MAX, 0, 2, 1)).is_err());
    }

    #[test]
    fn crop_stays_inside_sentinel_border() {
        // 1-pixel border of 255 around a 0 interior
        let img = GrayImage::from_fn(8, 6, |x, y| {
            if x == 0 || y == 0 || x == 7 || y == 5 {
                255
            } else {
                0
            }
        })
        .unwrap();
        let c = crop(&img, Rect::new(1, 1, 6, 4)).unwrap();
        assert!(c.pixels().iter().all(|&v| v == 0));
    }

    #[test]
    fn outline_counts_on_4x4() {
        let img = GrayImage::filled(4, 4, 0).unwrap();
        let out = draw_rect_outline(&img, img.bounds(), 255, 1).unwrap();
        assert_eq!(out.pixels().iter().filter(|&&v| v == 255).count(), 12);
        for (x, y) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert_eq!(out.get(x, y), 0);
        }
    }

    #[test]
    fn outline_half_thickness_fills() {
        let img = GrayImage::filled(6, 5, 7).unwrap();
        let r = Rect::new(1, 0, 4, 5);
        let out = draw_rect_outline(&img, r, 200, 2).unwrap();
        for y in 0..5 {
            for x in 0..6 {
                let expected = if r.contains(x, y) { 200 } else { 7 };
                assert_eq!(out.get(x, y), expected);
            }
        }
    }

    #[test]
    fn outline_parameter_errors() {
        let img = GrayImage::filled(6, 6, 0).unwrap();
        assert!(matches!(
            draw_rect_outline(&img, Rect::new(0, 0, 4, 4), 1, 3),
            Err(Error::InvalidParameter(_))
        ));
        assert!(draw_rect_outline(&img, Rect::new(0, 0, 4, 4), 1, 0).is_err());
        assert!(matches!(
            draw_rect_outline(&img, Rect::new(4, 4, 4, 4), 1, 1),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn transpose_roundtrip() {
        let img = GrayImage::from_fn(3, 5, |x, y| (x * 10 + y) as u8).unwrap();
        let t = img.transpose();
        assert_eq!((t.width(), t.height()), (5, 3));
        assert_eq!(t.get(4, 2), img.get(2, 4));
        assert_eq!(t.transpose(), img);
    }
}
