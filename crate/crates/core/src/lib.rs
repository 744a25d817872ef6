//! Deterministic grayscale-image compression into quantum circuit
//! descriptions, with gate-resource accounting and statevector verification.
//!
//! The chain: split an image into 8x8 blocks, transform each with the
//! orthonormal DCT, quantize by a scalar factor, and encode the surviving
//! coefficients as multi-controlled-NOT circuits under one of four schemes
//! (`mtgsc`, `scmneqr`, `dctefrqi`, `neqr`). Circuits carry enough structure
//! to be decoded back to the exact coefficient list, so reconstruction
//! quality depends only on the quantization factor while the schemes differ
//! in how many gate connections they spend -- which is the benchmark this
//! crate measures.
//!
//! Module map:
//!
//! * [`image_io`] -- PGM/PNG rasters, padding, dataset manifest, synthetic
//!   benchmark textures
//! * [`transform`] -- DCT, quantization, their inverses
//! * [`circuit`] -- gate-list IR, validation, JSON and visual export
//! * [`encoders`] -- the four scheme builders and gate accounting
//! * [`simulator`] -- dense statevector execution and circuit comparison
//! * [`metrics`] -- structural decode, reconstruction, MSE/PSNR
//! * [`pipeline`] -- the assembled end-to-end chain

pub mod circuit;
pub mod encoders;
pub mod error;
pub mod image_io;
pub mod metrics;
pub mod pipeline;
pub mod simulator;
pub mod transform;

pub use error::{Error, Result};
