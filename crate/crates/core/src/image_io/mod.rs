//! Grayscale raster input/output.
//!
//! Images are 8-bit luminance rasters. PGM (P2/P5, maxval 255) is the
//! native round-trip format; 8-bit PNG is accepted with RGB inputs
//! converted through the integer BT.601 luma weights. [`pad_to_block_multiple`]
//! grows a raster to the next multiple of 8 in each dimension by edge
//! replication so it divides exactly into 8x8 blocks.

mod manifest;
mod pgm;
pub mod synthetic;

use std::path::Path;

pub use manifest::{DatasetManifest, ManifestEntry};

use crate::error::{Error, Result};

/// Width/height of the transform blocks the codec operates on.
pub const BLOCK_SIZE: u32 = 8;

/// An 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major pixel data. The pixel count must
    /// match `width * height` and both dimensions must be positive.
    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::CorruptHeader(format!(
                "zero image dimension {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(Error::CorruptHeader(format!(
                "pixel count {} does not match {width}x{height}",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` over the raster.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize]
    }
}

/// Loads a grayscale image from a PGM or PNG file, dispatching on content.
///
/// RGB PNG inputs are reduced with the integer luma formula
/// `Y = round(0.299 R + 0.587 G + 0.114 B)`.
pub fn load_image(path: &Path) -> Result<GrayImage> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        return pgm::decode(&bytes);
    }
    if bytes.starts_with(&[0x89, b'P', b'N', b'G']) {
        return decode_png(&bytes);
    }
    Err(Error::UnsupportedFormat(format!(
        "{}: not a PGM (P2/P5) or PNG file",
        path.display()
    )))
}

/// Saves an image as PGM (binary P5) or PNG depending on the file extension.
/// Anything that is not `.png` is written as PGM, which round-trips
/// bit-exactly through [`load_image`].
pub fn save_image(img: &GrayImage, path: &Path) -> Result<()> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("png") => encode_png(img, path),
        _ => {
            std::fs::write(path, pgm::encode(img))?;
            Ok(())
        }
    }
}

/// Integer BT.601 luma reduction, rounding to nearest.
pub fn rgb_to_luma(r: u8, g: u8, b: u8) -> u8 {
    ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let dynamic = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| Error::CorruptHeader(format!("png: {e}")))?;
    match dynamic {
        image::DynamicImage::ImageLuma8(img) => {
            GrayImage::from_pixels(img.width(), img.height(), img.into_raw())
        }
        image::DynamicImage::ImageRgb8(img) => {
            let (w, h) = (img.width(), img.height());
            let pixels = img
                .pixels()
                .map(|p| rgb_to_luma(p.0[0], p.0[1], p.0[2]))
                .collect();
            GrayImage::from_pixels(w, h, pixels)
        }
        other => Err(Error::UnsupportedFormat(format!(
            "png color type {:?} (expected 8-bit grayscale or RGB)",
            other.color()
        ))),
    }
}

fn encode_png(img: &GrayImage, path: &Path) -> Result<()> {
    let buffer = image::GrayImage::from_raw(img.width, img.height, img.pixels.clone())
        .expect("dimensions match pixel buffer");
    buffer
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => Error::Io(io),
            other => Error::UnsupportedFormat(other.to_string()),
        })
}

/// Grows the raster to the next multiple of 8 in each dimension.
/// New cells replicate the nearest edge pixel; the original region is
/// unchanged, and an already-aligned image is returned as-is.
pub fn pad_to_block_multiple(img: &GrayImage) -> GrayImage {
    let pad = |n: u32| n.div_ceil(BLOCK_SIZE) * BLOCK_SIZE;
    let (pw, ph) = (pad(img.width), pad(img.height));
    if pw == img.width && ph == img.height {
        return img.clone();
    }
    GrayImage::from_fn(pw, ph, |x, y| {
        img.get(x.min(img.width - 1), y.min(img.height - 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pixels_rejects_mismatched_length() {
        assert!(GrayImage::from_pixels(2, 2, vec![0, 1, 2]).is_err());
        assert!(GrayImage::from_pixels(0, 2, vec![]).is_err());
    }

    #[test]
    fn pgm_2x2_example() {
        let bytes = b"P5\n2 2\n255\n\x00\x64\xc8\xff";
        let img = pgm::decode(bytes).unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 2);
        assert_eq!(img.pixels(), &[0, 100, 200, 255]);
    }

    #[test]
    fn pgm_ascii_1x1() {
        let img = pgm::decode(b"P2\n1 1\n255\n0\n").unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.pixels(), &[0]);
    }

    #[test]
    fn pgm_comments_and_whitespace() {
        let img = pgm::decode(b"P2\n# comment line\n 2 1 # trailing\n255\n7 8").unwrap();
        assert_eq!(img.pixels(), &[7, 8]);
    }

    #[test]
    fn pgm_rejects_nonstandard_maxval() {
        assert!(pgm::decode(b"P5\n1 1\n65535\n\x00\x00").is_err());
        assert!(pgm::decode(b"P2\n1 1\n15\n3").is_err());
    }

    #[test]
    fn pgm_roundtrip_is_bit_exact() {
        let img = GrayImage::from_pixels(2, 2, vec![0, 100, 200, 255]).unwrap();
        let encoded = pgm::encode(&img);
        assert_eq!(pgm::decode(&encoded).unwrap(), img);
    }

    #[test]
    fn save_load_roundtrip_pgm_and_png() {
        let dir = tempfile::tempdir().unwrap();
        let img = GrayImage::from_fn(9, 5, |x, y| (x * 31 + y * 7) as u8);
        for name in ["img.pgm", "img.png"] {
            let path = dir.path().join(name);
            save_image(&img, &path).unwrap();
            assert_eq!(load_image(&path).unwrap(), img, "{name}");
        }
    }

    #[test]
    fn save_into_missing_directory_is_io_failure() {
        let img = GrayImage::from_pixels(1, 1, vec![128]).unwrap();
        let err = save_image(&img, Path::new("/nonexistent-dir-qic/x.pgm")).unwrap_err();
        assert!(matches!(err, Error::Io(_)), "{err:?}");
    }

    #[test]
    fn load_missing_file_is_file_not_found() {
        let err = load_image(Path::new("/no/such/file.pgm")).unwrap_err();
        assert!(matches!(err, Error::FileNotFound(_)));
    }

    #[test]
    fn luma_reduction_uses_bt601_weights() {
        assert_eq!(rgb_to_luma(10, 20, 30), 18); // round(18.15)
        assert_eq!(rgb_to_luma(255, 255, 255), 255);
        assert_eq!(rgb_to_luma(0, 0, 0), 0);
        assert_eq!(rgb_to_luma(255, 0, 0), 76); // round(76.245)
    }

    #[test]
    fn rgb_png_is_reduced_to_luma() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgb.png");
        let rgb = image::RgbImage::from_fn(2, 1, |x, _| {
            if x == 0 {
                image::Rgb([10, 20, 30])
            } else {
                image::Rgb([255, 0, 0])
            }
        });
        rgb.save(&path).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.pixels(), &[18, 76]);
    }

    #[test]
    fn padding_aligned_image_is_identity() {
        let img = GrayImage::from_fn(16, 8, |x, y| (x + y) as u8);
        assert_eq!(pad_to_block_multiple(&img), img);
    }

    #[test]
    fn padding_replicates_edges() {
        let img = GrayImage::from_fn(10, 8, |x, y| (x * 10 + y) as u8);
        let padded = pad_to_block_multiple(&img);
        assert_eq!((padded.width(), padded.height()), (16, 8));
        for y in 0..8 {
            for x in 10..16 {
                assert_eq!(padded.get(x, y), img.get(9, y));
            }
        }
    }

    #[test]
    fn padding_1x1_fills_block() {
        let img = GrayImage::from_pixels(1, 1, vec![42]).unwrap();
        let padded = pad_to_block_multiple(&img);
        assert_eq!((padded.width(), padded.height()), (8, 8));
        assert!(padded.pixels().iter().all(|&p| p == 42));
    }
}
