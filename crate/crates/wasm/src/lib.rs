//! Browser bindings for the codec demo page.
//!
//! Three interactive operations back the static page in `www/`:
//! encode-and-reconstruct preview, the gates-per-pixel vs PSNR sweep curve,
//! and the single-coefficient state-connection verifier. Results cross the
//! boundary as JSON strings plus raw grayscale buffers; all computation,
//! including the statevector runs, happens in the wasm module.
//!
//! The exported functions are thin `JsError` adapters over string-error
//! internals so the logic also compiles and tests on native targets.

use wasm_bindgen::prelude::*;

use qic_core::circuit::{quirk_url, QubitRegister};
use qic_core::encoders::{
    build_mtgsc, build_scmneqr, count_gates, register_for, Scheme, SparseCoefficient,
};
use qic_core::image_io::{synthetic, GrayImage};
use qic_core::metrics::psnr;
use qic_core::pipeline::{decode_to_image, encode_image, EncodeOptions};
use qic_core::simulator::compare_circuits;

type DemoResult<T> = Result<T, String>;

fn stringify<T>(result: qic_core::Result<T>) -> DemoResult<T> {
    result.map_err(|e| e.to_string())
}

fn image_from_raw(pixels: &[u8], width: u32, height: u32) -> DemoResult<GrayImage> {
    stringify(GrayImage::from_pixels(width, height, pixels.to_vec()))
}

fn parse_scheme(scheme: &str) -> DemoResult<Scheme> {
    scheme.parse::<Scheme>()
}

/// Names of the built-in test patterns.
#[wasm_bindgen]
pub fn pattern_names() -> String {
    let names: Vec<&str> = synthetic::BENCHMARK_SET.iter().map(|(n, _, _)| *n).collect();
    serde_json::to_string(&names).expect("names serialize")
}

/// Deterministic test pattern as raw grayscale bytes (`size` x `size`).
#[wasm_bindgen]
pub fn generate_pattern(name: &str, size: u32) -> Vec<u8> {
    synthetic::generate(name, size, size).pixels().to_vec()
}

/// Encodes and reports stats plus reconstruction quality as JSON.
#[wasm_bindgen]
pub fn codec_preview(
    pixels: &[u8],
    width: u32,
    height: u32,
    q: u32,
    scheme: &str,
    level_shift: bool,
) -> Result<String, JsError> {
    codec_preview_impl(pixels, width, height, q, scheme, level_shift)
        .map_err(|e| JsError::new(&e))
}

fn codec_preview_impl(
    pixels: &[u8],
    width: u32,
    height: u32,
    q: u32,
    scheme: &str,
    level_shift: bool,
) -> DemoResult<String> {
    let image = image_from_raw(pixels, width, height)?;
    let opts = EncodeOptions {
        q,
        scheme: parse_scheme(scheme)?,
        level_shift,
    };
    let encoded = stringify(encode_image(&image, &opts))?;
    let recon = stringify(decode_to_image(
        &encoded.circuit,
        (width, height),
        q,
        level_shift,
    ))?;
    let quality = stringify(psnr(&image, &recon))?;
    let report = serde_json::json!({
        "scheme": scheme,
        "q": q,
        "stats": encoded.stats,
        "coefficients": encoded.coefficients.len(),
        "clamped": encoded.clamped,
        "register_qubits": encoded.circuit.register.total(),
        "mse": quality.mse,
        "psnr_db": quality.psnr_db,
    });
    Ok(report.to_string())
}

/// Reconstructed pixels for the preview canvas (scheme-independent).
#[wasm_bindgen]
pub fn reconstruct_preview(
    pixels: &[u8],
    width: u32,
    height: u32,
    q: u32,
    level_shift: bool,
) -> Result<Vec<u8>, JsError> {
    reconstruct_preview_impl(pixels, width, height, q, level_shift).map_err(|e| JsError::new(&e))
}

fn reconstruct_preview_impl(
    pixels: &[u8],
    width: u32,
    height: u32,
    q: u32,
    level_shift: bool,
) -> DemoResult<Vec<u8>> {
    let image = image_from_raw(pixels, width, height)?;
    let opts = EncodeOptions {
        q,
        scheme: Scheme::Mtgsc,
        level_shift,
    };
    let encoded = stringify(encode_image(&image, &opts))?;
    let recon = stringify(decode_to_image(
        &encoded.circuit,
        (width, height),
        q,
        level_shift,
    ))?;
    Ok(recon.pixels().to_vec())
}

/// Sweeps the given quantization factors over the three DCT schemes and
/// returns `[{scheme, q, gates_per_pixel, psnr_db}]` as JSON.
#[wasm_bindgen]
pub fn sweep_curve(
    pixels: &[u8],
    width: u32,
    height: u32,
    q_factors: &[u32],
    level_shift: bool,
) -> Result<String, JsError> {
    sweep_curve_impl(pixels, width, height, q_factors, level_shift).map_err(|e| JsError::new(&e))
}

fn sweep_curve_impl(
    pixels: &[u8],
    width: u32,
    height: u32,
    q_factors: &[u32],
    level_shift: bool,
) -> DemoResult<String> {
    let image = image_from_raw(pixels, width, height)?;
    let mut rows = Vec::new();
    for &q in q_factors {
        for scheme in Scheme::DCT_SCHEMES {
            let opts = EncodeOptions {
                q,
                scheme,
                level_shift,
            };
            let encoded = stringify(encode_image(&image, &opts))?;
            let recon = stringify(decode_to_image(
                &encoded.circuit,
                (width, height),
                q,
                level_shift,
            ))?;
            let quality = stringify(psnr(&image, &recon))?;
            rows.push(serde_json::json!({
                "scheme": scheme.as_str(),
                "q": q,
                "gates_per_pixel": encoded.stats.gates_per_pixel,
                "psnr_db": quality.psnr_db,
            }));
        }
    }
    Ok(serde_json::Value::Array(rows).to_string())
}

/// Builds the full-control and zero-discarding circuits for one coefficient,
/// compares their exact output distributions, and returns the report with
/// gate counts and shareable circuit URLs as JSON.
#[wasm_bindgen]
pub fn verify_coefficient(
    magnitude: u32,
    x: u32,
    y: u32,
    negative: bool,
) -> Result<String, JsError> {
    verify_coefficient_impl(magnitude, x, y, negative).map_err(|e| JsError::new(&e))
}

fn verify_coefficient_impl(magnitude: u32, x: u32, y: u32, negative: bool) -> DemoResult<String> {
    if magnitude == 0 || magnitude > 255 {
        return Err("magnitude must be in 1..=255".into());
    }
    if x > 7 || y > 7 {
        return Err("position must be within an 8x8 block".into());
    }
    let coefficients = [SparseCoefficient {
        block_row: 0,
        block_col: 0,
        x: x as u8,
        y: y as u8,
        magnitude: magnitude as u16,
        sign: if negative { -1 } else { 1 },
    }];
    let reg: QubitRegister = register_for(&coefficients);
    let full = stringify(build_scmneqr(&coefficients, &reg))?;
    let modified = stringify(build_mtgsc(&coefficients, &reg))?;
    let subset: Vec<usize> = (0..reg.total()).collect();
    let equivalence = stringify(compare_circuits(&full, &modified, &subset))?;
    let full_stats = stringify(count_gates(&full, (8, 8), Scheme::Scmneqr))?;
    let modified_stats = stringify(count_gates(&modified, (8, 8), Scheme::Mtgsc))?;
    let report = serde_json::json!({
        "tv_distance": equivalence.tv_distance,
        "max_amp_dev": equivalence.max_amp_dev,
        "equivalent": equivalence.equivalent,
        "register_qubits": reg.total(),
        "full": {
            "gate_connections": full.total_connections(),
            "b_s0": full_stats.b_s0,
            "quirk_url": stringify(quirk_url(&full))?,
        },
        "modified": {
            "gate_connections": modified.total_connections(),
            "b_s0": modified_stats.b_s0,
            "quirk_url": stringify(quirk_url(&modified))?,
        },
    });
    Ok(report.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_listing_and_generation() {
        let names: Vec<String> = serde_json::from_str(&pattern_names()).unwrap();
        assert!(names.contains(&"grass".to_string()));
        let pixels = generate_pattern("grass", 32);
        assert_eq!(pixels.len(), 32 * 32);
    }

    #[test]
    fn preview_reports_stats_and_quality() {
        let pixels = generate_pattern("house", 32);
        let report = codec_preview_impl(&pixels, 32, 32, 8, "mtgsc", false).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert!(value["stats"]["gates_per_pixel"].as_f64().unwrap() > 0.0);
        assert!(value["psnr_db"].as_f64().unwrap() > 20.0);
        let recon = reconstruct_preview_impl(&pixels, 32, 32, 8, false).unwrap();
        assert_eq!(recon.len(), pixels.len());
    }

    #[test]
    fn sweep_rows_cover_schemes_and_factors() {
        let pixels = generate_pattern("grass", 16);
        let rows: serde_json::Value =
            serde_json::from_str(&sweep_curve_impl(&pixels, 16, 16, &[8, 70], false).unwrap())
                .unwrap();
        assert_eq!(rows.as_array().unwrap().len(), 6);
    }

    #[test]
    fn verifier_matches_the_demo_instance() {
        let report: serde_json::Value =
            serde_json::from_str(&verify_coefficient_impl(62, 3, 2, false).unwrap()).unwrap();
        assert!((report["tv_distance"].as_f64().unwrap() - 7.0 / 64.0).abs() < 1e-12);
        assert_eq!(report["equivalent"], serde_json::json!(false));
        // All-ones position: no controls discarded, circuits identical.
        let report: serde_json::Value =
            serde_json::from_str(&verify_coefficient_impl(62, 7, 7, false).unwrap()).unwrap();
        assert_eq!(report["tv_distance"].as_f64().unwrap(), 0.0);
        assert_eq!(report["equivalent"], serde_json::json!(true));
    }

    #[test]
    fn verifier_rejects_bad_inputs() {
        assert!(verify_coefficient_impl(0, 0, 0, false).is_err());
        assert!(verify_coefficient_impl(300, 0, 0, false).is_err());
        assert!(verify_coefficient_impl(5, 9, 0, false).is_err());
    }
}
