//! PGM (Netpbm graymap) reading and writing.
//!
//! Both the binary `P5` and ASCII `P2` variants are supported with maxval up
//! to 255. Samples are stored as-is; files with maxval below 255 are not
//! rescaled. Output always declares maxval 255.

use crate::error::{PgmError, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmFormat {
    /// `P5`, one byte per sample.
    #[default]
    Binary,
    /// `P2`, whitespace separated decimal samples.
    Ascii,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Reads an unsigned decimal token. Returns `None` at end of input.
    fn number(&mut self) -> Option<std::result::Result<u32, String>> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return self
                .bytes
                .get(self.pos)
                .map(|&b| Err(format!("unexpected byte 0x{b:02x}")));
        }
        if let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_whitespace() && b != b'#' {
                return Some(Err(format!("unexpected byte 0x{b:02x} after number")));
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Some(text.parse::<u32>().map_err(|e| format!("{text}: {e}")))
    }

    fn header_field(&mut self, name: &str) -> std::result::Result<u32, PgmError> {
        match self.number() {
            Some(Ok(v)) => Ok(v),
            Some(Err(e)) => Err(PgmError::MalformedHeader(format!("{name}: {e}"))),
            None => Err(PgmError::MalformedHeader(format!("missing {name}"))),
        }
    }
}

/// Parses a P2 or P5 file.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let format = match bytes.get(..2) {
        Some(b"P5") => PgmFormat::Binary,
        Some(b"P2") => PgmFormat::Ascii,
        _ => return Err(PgmError::BadMagic.into()),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(PgmError::MalformedHeader("no separator after magic".into()).into());
    }
    let width = cur.header_field("width")? as usize;
    let height = cur.header_field("height")? as usize;
    let maxval = cur.header_field("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader(format!("zero dimension {width}x{height}")).into());
    }
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval).into());
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| PgmError::MalformedHeader("dimensions overflow".into()))?;

    let pixels = match format {
        PgmFormat::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
                return Err(PgmError::MalformedHeader("no whitespace after maxval".into()).into());
            }
            let data = &bytes[cur.pos + 1..];
            if data.len() < expected {
                return Err(PgmError::Truncated {
                    expected,
                    found: data.len(),
                }
                .into());
            }
            let data = &data[..expected];
            if let Some(index) = data.iter().position(|&v| u32::from(v) > maxval) {
                return Err(PgmError::BadSample {
                    index,
                    reason: format!("{} exceeds maxval {maxval}", data[index]),
                }
                .into());
            }
            data.to_vec()
        }
        PgmFormat::Ascii => {
            let mut pixels = Vec::with_capacity(expected);
            for index in 0..expected {
                match cur.number() {
                    Some(Ok(v)) if v <= maxval => pixels.push(v as u8),
                    Some(Ok(v)) => {
                        return Err(PgmError::BadSample {
                            index,
                            reason: format!("{v} exceeds maxval {maxval}"),
                        }
                        .into())
                    }
                    Some(Err(reason)) => return Err(PgmError::BadSample { index, reason }.into()),
                    None => {
                        return Err(PgmError::Truncated {
                            expected,
                            found: index,
                        }
                        .into())
                    }
                }
            }
            pixels
        }
    };
    GrayImage::new(width, height, pixels)
}

pub fn save_pgm(img: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    match format {
        PgmFormat::Binary => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend_from_slice(img.pixels());
            out
        }
        PgmFormat::Ascii => {
            use std::fmt::Write;
            let mut out = format!("P2\n{w} {h}\n255\n");
            for y in 0..h {
                let mut line_len = 0;
                for (i, v) in img.row(y).iter().enumerate() {
                    // keep lines under the 70 character Netpbm recommendation
                    if i > 0 {
                        if line_len + 4 > 70 {
                            out.push('\n');
                            line_len = 0;
                        } else {
                            out.push(' ');
                            line_len += 1;
                        }
                    }
                    let before = out.len();
                    write!(out, "{v}").expect("write to String");
                    line_len += out.len() - before;
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}
