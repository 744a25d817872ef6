//! The full codec chain: image -> blocks -> quantized spectra -> circuit,
//! and back. The command-line front end and the browser demo are both thin
//! wrappers over this module.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::encoders::{
    build_dctefrqi, build_mtgsc, build_neqr, build_scmneqr, count_gates, register_for, sparsify,
    BlockGrid, GateStats, Scheme, SparseCoefficient,
};
use crate::error::Result;
use crate::image_io::{pad_to_block_multiple, GrayImage, BLOCK_SIZE};
use crate::metrics::{decode_circuit, reconstruct};
use crate::simulator::{compare_circuits, EquivalenceReport, MAX_SIM_QUBITS};
use crate::transform::{dct_forward, dct_forward_shifted, quantize, PixelBlock};

#[derive(Debug, Clone, Copy)]
pub struct EncodeOptions {
    pub q: u32,
    pub scheme: Scheme,
    /// Subtract 128 before the forward transform (and add it back when
    /// reconstructing). Off by default.
    pub level_shift: bool,
}

#[derive(Debug, Clone)]
pub struct EncodedImage {
    pub circuit: Circuit,
    pub stats: GateStats,
    pub coefficients: Vec<SparseCoefficient>,
    /// Magnitudes clamped to the 8-bit register during sparsification.
    pub clamped: usize,
    pub original_dims: (u32, u32),
    pub padded_dims: (u32, u32),
}

/// Pads, transforms and quantizes every 8x8 block of an image.
pub fn quantize_blocks(img: &GrayImage, q: u32, level_shift: bool) -> Result<BlockGrid> {
    let padded = pad_to_block_multiple(img);
    let rows = padded.height() / BLOCK_SIZE;
    let cols = padded.width() / BLOCK_SIZE;
    let mut blocks = Vec::with_capacity((rows * cols) as usize);
    for row in 0..rows {
        for col in 0..cols {
            let mut values = [0u8; 64];
            for by in 0..BLOCK_SIZE {
                for bx in 0..BLOCK_SIZE {
                    values[(by * BLOCK_SIZE + bx) as usize] =
                        padded.get(col * BLOCK_SIZE + bx, row * BLOCK_SIZE + by);
                }
            }
            let block = PixelBlock { values };
            let coeffs = if level_shift {
                dct_forward_shifted(&block)
            } else {
                dct_forward(&block)
            };
            blocks.push(quantize(&coeffs, q)?);
        }
    }
    Ok(BlockGrid {
        rows,
        cols,
        q_factor: q,
        blocks,
    })
}

/// Runs the whole forward chain and builds the circuit for one scheme.
///
/// The `neqr` scheme maps raw pixels (no transform, `q` and `level_shift`
/// unused) and accepts images of at most one block.
pub fn encode_image(img: &GrayImage, opts: &EncodeOptions) -> Result<EncodedImage> {
    let original_dims = (img.width(), img.height());
    if opts.scheme == Scheme::Neqr {
        let reg = crate::circuit::QubitRegister::for_image_dims(img.width(), img.height());
        let circuit = build_neqr(img, &reg)?;
        let stats = count_gates(&circuit, original_dims, Scheme::Neqr)?;
        return Ok(EncodedImage {
            circuit,
            stats,
            coefficients: Vec::new(),
            clamped: 0,
            original_dims,
            padded_dims: original_dims,
        });
    }

    let grid = quantize_blocks(img, opts.q, opts.level_shift)?;
    let list = sparsify(&grid);
    let reg = register_for(&list.coefficients);
    let circuit = match opts.scheme {
        Scheme::Mtgsc => build_mtgsc(&list.coefficients, &reg)?,
        Scheme::Scmneqr => build_scmneqr(&list.coefficients, &reg)?,
        Scheme::Dctefrqi => build_dctefrqi(&list.coefficients, &reg)?,
        Scheme::Neqr => unreachable!("handled above"),
    };
    let stats = count_gates(&circuit, original_dims, opts.scheme)?;
    Ok(EncodedImage {
        circuit,
        stats,
        coefficients: list.coefficients,
        clamped: list.clamped,
        original_dims,
        padded_dims: (grid.cols * BLOCK_SIZE, grid.rows * BLOCK_SIZE),
    })
}

/// Structural decode followed by reconstruction.
pub fn decode_to_image(
    circuit: &Circuit,
    dims: (u32, u32),
    q: u32,
    level_shift: bool,
) -> Result<GrayImage> {
    let coefficients = decode_circuit(circuit)?;
    reconstruct(&coefficients, dims, q, level_shift)
}

/// Entropy-free classical storage proxy: 15 bits per non-zero coefficient
/// (8 magnitude + 1 sign + 6 in-block position) over the pixel count. This
/// is a labeled reference line, not a JPEG implementation.
pub fn jpeg_bpp_proxy(coefficient_count: usize, dims: (u32, u32)) -> f64 {
    coefficient_count as f64 * 15.0 / (dims.0 as f64 * dims.1 as f64)
}

/// Per-block outcome of the zero-control-discarding check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockVerification {
    pub block: (u32, u32),
    pub coefficients: usize,
    pub equivalence: EquivalenceReport,
    /// Whether the full-control and modified circuits decode to the same
    /// coefficient list.
    pub decode_match: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub blocks: Vec<BlockVerification>,
    pub all_decode_match: bool,
    pub max_tv_distance: f64,
    /// Blocks skipped because their register exceeds the simulator limit.
    pub skipped: usize,
}

/// Verifies the state-connection modification block by block: for each
/// sampled block, builds the full-control circuit and the zero-discarding
/// one over the same register, compares their exact output distributions on
/// all qubits, and checks that both decode to identical coefficients.
pub fn verify_circuit(circuit: &Circuit, max_blocks: usize) -> Result<VerificationReport> {
    let coefficients = decode_circuit(circuit)?;

    let mut block_order: Vec<(u32, u32)> = Vec::new();
    for c in &coefficients {
        let key = (c.block_row, c.block_col);
        if !block_order.contains(&key) {
            block_order.push(key);
        }
    }
    let sampled: Vec<(u32, u32)> = if block_order.len() <= max_blocks {
        block_order
    } else {
        (0..max_blocks)
            .map(|i| block_order[i * block_order.len() / max_blocks])
            .collect()
    };

    let mut blocks = Vec::with_capacity(sampled.len());
    let mut skipped = 0;
    for key in sampled {
        let block_coeffs: Vec<SparseCoefficient> = coefficients
            .iter()
            .filter(|c| (c.block_row, c.block_col) == key)
            .copied()
            .collect();
        let reg = register_for(&block_coeffs);
        if reg.total() > MAX_SIM_QUBITS {
            skipped += 1;
            continue;
        }
        let full = build_scmneqr(&block_coeffs, &reg)?;
        let modified = build_mtgsc(&block_coeffs, &reg)?;
        let subset: Vec<usize> = (0..reg.total()).collect();
        let equivalence = compare_circuits(&full, &modified, &subset)?;
        let decode_match = decode_circuit(&full)? == decode_circuit(&modified)?;
        blocks.push(BlockVerification {
            block: key,
            coefficients: block_coeffs.len(),
            equivalence,
            decode_match,
        });
    }

    let all_decode_match = blocks.iter().all(|b| b.decode_match);
    let max_tv_distance = blocks
        .iter()
        .map(|b| b.equivalence.tv_distance)
        .fold(0.0, f64::max);
    Ok(VerificationReport {
        blocks,
        all_decode_match,
        max_tv_distance,
        skipped,
    })
}
