//! Deterministic decode from circuit IR back to images, plus the MSE/PSNR
//! quality measures.
//!
//! [`decode_circuit`] is the real inverse mapping: it pattern-matches the
//! gate list itself and only consults group metadata for the block address
//! (which is never gate-encoded) after verifying that everything else
//! agrees. A circuit whose metadata lies about its gates does not decode.

use serde::{Deserialize, Serialize};

use crate::circuit::parse::{parse_structure, GroupFamily};
use crate::circuit::{require_valid, Circuit};
use crate::encoders::SparseCoefficient;
use crate::error::{Error, Result};
use crate::image_io::{GrayImage, BLOCK_SIZE};
use crate::transform::{dct_inverse, dct_inverse_shifted, dequantize, QuantizedBlock};

/// Reconstruction quality relative to an original.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub image_name: String,
    pub scheme: String,
    pub q_factor: u32,
    /// Mean squared error in intensity^2 units.
    pub mse: f64,
    /// Peak signal-to-noise ratio in dB; `None` is the infinity sentinel for
    /// identical images (serialized as the string "inf" in CSV output).
    pub psnr_db: Option<f64>,
}

impl QualityReport {
    pub fn with_labels(mut self, image_name: &str, scheme: &str, q_factor: u32) -> Self {
        self.image_name = image_name.to_string();
        self.scheme = scheme.to_string();
        self.q_factor = q_factor;
        self
    }
}

/// Re-derives the coefficient list from gate structure alone.
///
/// On-one trigger controls give the position's 1-bits; on-zero or absent
/// controls are 0-bits, which covers both the zero-discarding and the
/// full-control trigger styles with one rule. Auxiliary fan-out targets give
/// the magnitude bits, a sign gate gives the sign, and block addresses come
/// from the group metadata after the structural fields are checked against
/// it entry by entry.
pub fn decode_circuit(circuit: &Circuit) -> Result<Vec<SparseCoefficient>> {
    require_valid(circuit)?;
    let parsed = parse_structure(circuit)
        .map_err(|e| Error::MalformedGroup(format!("gate {:?}: {}", e.gate, e.message)))?;

    if parsed.groups.iter().any(|g| g.family == GroupFamily::PixelMap) {
        return Err(Error::MalformedGroup(
            "pixel-map circuit encodes raw pixels, not transform coefficients".into(),
        ));
    }
    if parsed.groups.len() != circuit.groups.len() {
        return Err(if circuit.groups.is_empty() {
            Error::MissingGroupMetadata
        } else {
            Error::MalformedGroup(format!(
                "metadata lists {} groups, gate structure has {}",
                circuit.groups.len(),
                parsed.groups.len()
            ))
        });
    }

    parsed
        .groups
        .iter()
        .zip(&circuit.groups)
        .enumerate()
        .map(|(i, (derived, meta))| {
            if !derived.matches(meta) {
                return Err(Error::MalformedGroup(format!(
                    "group {i}: metadata disagrees with gate structure"
                )));
            }
            Ok(SparseCoefficient {
                block_row: meta.block_row(),
                block_col: meta.block_col(),
                x: derived.x,
                y: derived.y,
                magnitude: derived.magnitude,
                sign: derived.sign,
            })
        })
        .collect()
}

/// Densifies coefficients into blocks, dequantizes, inverse-transforms and
/// assembles the raster, cropping back to `dims`. Blocks without any
/// coefficient reconstruct from all-zero spectra.
pub fn reconstruct(
    coefficients: &[SparseCoefficient],
    dims: (u32, u32),
    q: u32,
    level_shift: bool,
) -> Result<GrayImage> {
    if q < 1 {
        return Err(Error::QOutOfRange(q));
    }
    let (width, height) = dims;
    let cols = width.div_ceil(BLOCK_SIZE);
    let rows = height.div_ceil(BLOCK_SIZE);

    let zero = QuantizedBlock {
        magnitudes: [0; 64],
        signs: [0; 64],
        q_factor: q,
    };
    let mut blocks = vec![zero; (rows * cols) as usize];
    for c in coefficients {
        if c.block_row >= rows || c.block_col >= cols || c.x >= 8 || c.y >= 8 {
            return Err(Error::CoefficientOutOfBounds {
                block_row: c.block_row,
                block_col: c.block_col,
                x: c.x,
                y: c.y,
            });
        }
        let block = &mut blocks[(c.block_row * cols + c.block_col) as usize];
        let i = c.y as usize * 8 + c.x as usize;
        block.magnitudes[i] = c.magnitude;
        block.signs[i] = c.sign;
    }

    let mut pixels = vec![0u8; width as usize * height as usize];
    for row in 0..rows {
        for col in 0..cols {
            let coeffs = dequantize(&blocks[(row * cols + col) as usize]);
            let block = if level_shift {
                dct_inverse_shifted(&coeffs)
            } else {
                dct_inverse(&coeffs)
            };
            for by in 0..BLOCK_SIZE {
                let y = row * BLOCK_SIZE + by;
                if y >= height {
                    break;
                }
                for bx in 0..BLOCK_SIZE {
                    let x = col * BLOCK_SIZE + bx;
                    if x >= width {
                        break;
                    }
                    pixels[(y * width + x) as usize] = block.get(bx as usize, by as usize);
                }
            }
        }
    }
    GrayImage::from_pixels(width, height, pixels)
}

/// Mean squared error and PSNR between two equally-sized images.
pub fn psnr(original: &GrayImage, reconstructed: &GrayImage) -> Result<QualityReport> {
    if (original.width(), original.height()) != (reconstructed.width(), reconstructed.height()) {
        return Err(Error::DimensionMismatch(
            original.width(),
            original.height(),
            reconstructed.width(),
            reconstructed.height(),
        ));
    }
    let sse: f64 = original
        .pixels()
        .iter()
        .zip(reconstructed.pixels())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    let mse = sse / original.pixels().len() as f64;
    let psnr_db = (mse > 0.0).then(|| 10.0 * (255.0f64 * 255.0 / mse).log10());
    Ok(QualityReport {
        image_name: String::new(),
        scheme: String::new(),
        q_factor: 0,
        mse,
        psnr_db,
    })
}
