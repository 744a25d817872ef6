//! 8x8 block transform stage: forward/inverse DCT, scalar quantization,
//! sign extraction and dequantization.
//!
//! The DCT kernel is the orthonormal DCT-II,
//! `F(x,y) = C(x) C(y) sum_{i,j} P(i,j) cos[(2i+1)x pi/16] cos[(2j+1)y pi/16]`
//! with `C(0) = 1/(2 sqrt 2)` and `C(k) = 1/2` otherwise, so Parseval holds
//! exactly and `|F(0,0)| <= 8 * 255`. Quantization divides by a scalar factor
//! and rounds half-away-from-zero; the rounding mode is pinned because ties
//! feed directly into gate counts.
//!
//! All arithmetic is double precision. No level shift is applied here; the
//! shifted variants subtract/add 128 at the block boundary for callers that
//! enable the flag.

use std::sync::LazyLock;

use crate::error::{Error, Result};

/// One 8x8 tile of pixel samples, row-major (`values[y * 8 + x]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelBlock {
    pub values: [u8; 64],
}

impl PixelBlock {
    pub fn uniform(value: u8) -> Self {
        Self { values: [value; 64] }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.values[y * 8 + x]
    }
}

/// DCT-domain counterpart of a [`PixelBlock`], `values[y * 8 + x]` holding
/// `F(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBlock {
    pub values: [f64; 64],
}

impl CoeffBlock {
    pub fn zero() -> Self {
        Self { values: [0.0; 64] }
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * 8 + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * 8 + x] = v;
    }
}

/// Quantized coefficients split into magnitude and sign planes.
///
/// `signs[i] == 0` exactly when `magnitudes[i] == 0`; magnitudes can exceed
/// 255 only at quantization factors below 2 (the DC bound is 2040), which the
/// encoder stage clamps and reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedBlock {
    pub magnitudes: [u16; 64],
    pub signs: [i8; 64],
    pub q_factor: u32,
}

impl QuantizedBlock {
    pub fn is_all_zero(&self) -> bool {
        self.magnitudes.iter().all(|&m| m == 0)
    }
}

/// Cosine basis `M[k][i] = C(k) cos((2i+1) k pi / 16)`; orthogonal, so the
/// inverse transform reuses the transpose.
static BASIS: LazyLock<[[f64; 8]; 8]> = LazyLock::new(|| {
    let mut m = [[0.0; 8]; 8];
    for (k, row) in m.iter_mut().enumerate() {
        let c = if k == 0 {
            1.0 / (2.0 * std::f64::consts::SQRT_2)
        } else {
            0.5
        };
        for (i, v) in row.iter_mut().enumerate() {
            *v = c * ((2 * i + 1) as f64 * k as f64 * std::f64::consts::PI / 16.0).cos();
        }
    }
    m
});

/// Forward DCT of one block.
pub fn dct_forward(block: &PixelBlock) -> CoeffBlock {
    let samples: [f64; 64] = std::array::from_fn(|i| block.values[i] as f64);
    CoeffBlock {
        values: dct_2d(&samples),
    }
}

/// Forward DCT with a JPEG-style -128 level shift applied first.
pub fn dct_forward_shifted(block: &PixelBlock) -> CoeffBlock {
    let samples: [f64; 64] = std::array::from_fn(|i| block.values[i] as f64 - 128.0);
    CoeffBlock {
        values: dct_2d(&samples),
    }
}

/// Inverse DCT, rounded half-away-from-zero and clamped to `[0, 255]`.
pub fn dct_inverse(coeffs: &CoeffBlock) -> PixelBlock {
    samples_to_block(idct_2d(&coeffs.values), 0.0)
}

/// Inverse DCT for level-shifted data: adds 128 back before round/clamp.
pub fn dct_inverse_shifted(coeffs: &CoeffBlock) -> PixelBlock {
    samples_to_block(idct_2d(&coeffs.values), 128.0)
}

/// Inverse DCT without rounding or clamping, for fidelity measurements of
/// the transform itself.
pub fn dct_inverse_raw(coeffs: &CoeffBlock) -> [f64; 64] {
    idct_2d(&coeffs.values)
}

fn samples_to_block(samples: [f64; 64], offset: f64) -> PixelBlock {
    PixelBlock {
        values: std::array::from_fn(|i| (samples[i] + offset).round().clamp(0.0, 255.0) as u8),
    }
}

/// Separable 2D DCT: basis multiply along rows, then along columns.
fn dct_2d(samples: &[f64; 64]) -> [f64; 64] {
    let m = &*BASIS;
    let mut rows = [0.0; 64]; // rows[y*8 + x] = sum_i M[x][i] samples[y*8 + i]
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for i in 0..8 {
                acc += m[x][i] * samples[y * 8 + i];
            }
            rows[y * 8 + x] = acc;
        }
    }
    let mut out = [0.0; 64];
    for y in 0..8 {
        for x in 0..8 {
            let mut acc = 0.0;
            for j in 0..8 {
                acc += m[y][j] * rows[j * 8 + x];
            }
            out[y * 8 + x] = acc;
        }
    }
    out
}

fn idct_2d(coeffs: &[f64; 64]) -> [f64; 64] {
    let m = &*BASIS;
    let mut rows = [0.0; 64];
    for y in 0..8 {
        for i in 0..8 {
            let mut acc = 0.0;
            for x in 0..8 {
                acc += m[x][i] * coeffs[y * 8 + x];
            }
            rows[y * 8 + i] = acc;
        }
    }
    let mut out = [0.0; 64];
    for j in 0..8 {
        for i in 0..8 {
            let mut acc = 0.0;
            for y in 0..8 {
                acc += m[y][j] * rows[y * 8 + i];
            }
            out[j * 8 + i] = acc;
        }
    }
    out
}

/// Rounds half-away-from-zero, matching `f64::round`.
fn round_half_away(v: f64) -> i32 {
    v.round() as i32
}

/// Divides every coefficient by `q` and rounds half-away-from-zero,
/// splitting the result into magnitude and sign planes.
pub fn quantize(coeffs: &CoeffBlock, q: u32) -> Result<QuantizedBlock> {
    if q < 1 {
        return Err(Error::QOutOfRange(q));
    }
    let mut magnitudes = [0u16; 64];
    let mut signs = [0i8; 64];
    for i in 0..64 {
        let rounded = round_half_away(coeffs.values[i] / q as f64);
        magnitudes[i] = rounded.unsigned_abs() as u16;
        signs[i] = rounded.signum() as i8;
    }
    Ok(QuantizedBlock {
        magnitudes,
        signs,
        q_factor: q,
    })
}

/// Reconstructs coefficients as `sign * magnitude * q`.
pub fn dequantize(qb: &QuantizedBlock) -> CoeffBlock {
    let values = std::array::from_fn(|i| {
        qb.signs[i] as f64 * qb.magnitudes[i] as f64 * qb.q_factor as f64
    });
    CoeffBlock { values }
}
