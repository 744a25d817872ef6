//! Netpbm PGM (P2 ascii / P5 binary) reader and writer, maxval 255 only.

use super::GrayImage;
use crate::error::{Error, Result};

pub fn decode(bytes: &[u8]) -> Result<GrayImage> {
    let mut cursor = Cursor { bytes, pos: 0 };
    let magic = cursor.token()?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "pgm magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = cursor.number()?;
    let height = cursor.number()?;
    let maxval = cursor.number()?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!(
            "pgm maxval {maxval} (only 255 supported)"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::CorruptHeader(format!(
            "pgm dimensions {width}x{height}"
        )));
    }
    let count = width as usize * height as usize;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from raster data.
        cursor.skip_single_whitespace()?;
        let data = &cursor.bytes[cursor.pos..];
        if data.len() < count {
            return Err(Error::CorruptHeader(format!(
                "pgm raster truncated: {} of {count} bytes",
                data.len()
            )));
        }
        data[..count].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let v = cursor.number()?;
            if v > 255 {
                return Err(Error::CorruptHeader(format!("pgm sample {v} > 255")));
            }
            pixels.push(v as u8);
        }
        pixels
    };
    GrayImage::from_pixels(width, height, pixels)
}

pub fn encode(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&[u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::CorruptHeader("pgm header truncated".into()));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<u32> {
        let token = self.token()?;
        std::str::from_utf8(token)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::CorruptHeader(format!(
                    "pgm: expected number, got {:?}",
                    String::from_utf8_lossy(token)
                ))
            })
    }

    fn skip_single_whitespace(&mut self) -> Result<()> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::CorruptHeader(
                "pgm: missing separator before raster".into(),
            ))
        }
    }
}
