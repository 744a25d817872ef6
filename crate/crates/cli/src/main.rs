//! `qic`: encode grayscale images into quantum circuit descriptions, decode
//! them back, verify the state-connection modification on a simulator, and
//! run the gates-per-pixel vs PSNR benchmark sweep.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

mod csv;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use qic_core::circuit::Circuit;
use qic_core::encoders::Scheme;
use qic_core::image_io::{load_image, save_image};
use qic_core::metrics::psnr;
use qic_core::pipeline::{decode_to_image, encode_image, verify_circuit, EncodeOptions};

#[derive(Parser)]
#[command(name = "qic", version, about = "Quantum image compression codec and benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an image into a circuit JSON file plus a stats CSV row.
    Encode(EncodeArgs),
    /// Decode a circuit JSON file back into an image.
    Decode(DecodeArgs),
    /// Compare full-control vs zero-discarding circuits block by block.
    Verify(VerifyArgs),
    /// Run the benchmark sweep across images, quantization factors and schemes.
    Sweep(sweep::SweepArgs),
}

#[derive(Args)]
struct EncodeArgs {
    /// Input image (PGM or PNG).
    #[arg(long)]
    image: PathBuf,
    /// Quantization factor.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    q: u32,
    /// Encoding scheme: mtgsc, scmneqr, dctefrqi or neqr.
    #[arg(long)]
    scheme: Scheme,
    /// Output directory for the circuit JSON and stats.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Subtract 128 before the forward transform.
    #[arg(long)]
    level_shift: bool,
}

#[derive(Args)]
struct DecodeArgs {
    /// Circuit JSON file produced by `encode`.
    #[arg(long)]
    circuit: PathBuf,
    /// Original image width (circuits do not carry dimensions).
    #[arg(long)]
    width: u32,
    /// Original image height.
    #[arg(long)]
    height: u32,
    /// Quantization factor used at encode time.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    q: u32,
    /// Where to write the reconstruction (.pgm or .png).
    #[arg(long, default_value = "recon.pgm")]
    out: PathBuf,
    /// Original image; enables the PSNR report row.
    #[arg(long)]
    original: Option<PathBuf>,
    /// The encode used a level shift.
    #[arg(long)]
    level_shift: bool,
    /// CSV file to append the quality row to.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit JSON file to verify.
    #[arg(long)]
    circuit: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verify at most this many blocks (evenly sampled).
    #[arg(long, default_value_t = 16)]
    max_blocks: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => sweep::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn image_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

fn cmd_encode(args: EncodeArgs) -> anyhow::Result<()> {
    let image = load_image(&args.image)?;
    let opts = EncodeOptions {
        q: args.q,
        scheme: args.scheme,
        level_shift: args.level_shift,
    };
    let encoded = encode_image(&image, &opts)?;
    if encoded.clamped > 0 {
        eprintln!(
            "warning: {} magnitudes clamped to the 8-bit register",
            encoded.clamped
        );
    }

    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let stem = image_stem(&args.image);
    let circuit_path = args
        .out
        .join(format!("{stem}_{}_q{}.circuit.json", args.scheme, args.q));
    std::fs::write(&circuit_path, encoded.circuit.to_json())
        .with_context(|| format!("writing {}", circuit_path.display()))?;

    let csv_path = args.out.join("stats.csv");
    csv::append_row(
        &csv_path,
        &csv::Row {
            scheme: args.scheme.to_string(),
            image: stem,
            q: args.q,
            stats: Some(encoded.stats),
            quality: None,
            jpeg_bpp_proxy: None,
        },
    )?;

    println!(
        "encoded {} [{} q={}]: {} coefficients, {:.6} gates/pixel -> {}",
        args.image.display(),
        args.scheme,
        args.q,
        encoded.stats.n_tcn,
        encoded.stats.gates_per_pixel,
        circuit_path.display()
    );
    Ok(())
}

fn load_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    // A file that does not parse as circuit JSON cannot yield groups at all.
    Circuit::from_json(&text)
        .map_err(|e| anyhow::anyhow!("MalformedGroup: {}: {e}", path.display()))
}

fn cmd_decode(args: DecodeArgs) -> anyhow::Result<()> {
    let circuit = load_circuit(&args.circuit)?;
    let image = decode_to_image(&circuit, (args.width, args.height), args.q, args.level_shift)?;
    save_image(&image, &args.out)?;

    let psnr_text = match &args.original {
        None => String::new(),
        Some(original_path) => {
            let original = load_image(original_path)?;
            let report = psnr(&original, &image)?.with_labels(
                &image_stem(original_path),
                "",
                args.q,
            );
            let text = csv::format_psnr(report.psnr_db);
            if let Some(csv_path) = &args.stats {
                csv::append_row(
                    csv_path,
                    &csv::Row {
                        scheme: String::new(),
                        image: report.image_name.clone(),
                        q: args.q,
                        stats: None,
                        quality: Some(report),
                        jpeg_bpp_proxy: None,
                    },
                )?;
            }
            text
        }
    };
    println!(
        "decoded {} -> {} ({}x{}, q={}, psnr={})",
        args.circuit.display(),
        args.out.display(),
        args.width,
        args.height,
        args.q,
        psnr_text
    );
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<()> {
    let circuit = load_circuit(&args.circuit)?;
    if args.max_blocks == 0 {
        bail!("--max-blocks must be at least 1");
    }
    let report = verify_circuit(&circuit, args.max_blocks)?;

    for block in &report.blocks {
        println!(
            "block ({},{}) [{} coefficients]: tv_distance={} max_amp_dev={} equivalent={} decode_match={}",
            block.block.0,
            block.block.1,
            block.coefficients,
            block.equivalence.tv_distance,
            block.equivalence.max_amp_dev,
            block.equivalence.equivalent,
            block.decode_match
        );
    }
    println!(
        "verified {} blocks: max tv_distance={}, all decodes match: {}{}",
        report.blocks.len(),
        report.max_tv_distance,
        report.all_decode_match,
        if report.skipped > 0 {
            format!(" ({} blocks skipped: register over simulator limit)", report.skipped)
        } else {
            String::new()
        }
    );

    if let Some(out) = &args.out {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(out, json).with_context(|| format!("writing {}", out.display()))?;
        println!("report written to {}", out.display());
    }
    Ok(())
}
