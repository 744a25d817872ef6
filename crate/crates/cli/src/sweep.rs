//! The benchmark sweep: every selected image at every quantization factor
//! under every scheme, emitting the combined CSV, per-image plot data and a
//! gate-saving summary.
//!
//! Images resolve through the dataset manifest first; benchmark names whose
//! canonical file is absent fall back to the deterministic synthetic
//! stand-ins so the sweep always runs end to end. The fallback is listed in
//! the summary.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::Args;
use rayon::prelude::*;

use qic_core::encoders::Scheme;
use qic_core::image_io::{load_image, save_image, synthetic, DatasetManifest, GrayImage};
use qic_core::metrics::psnr;
use qic_core::pipeline::{decode_to_image, encode_image, jpeg_bpp_proxy, EncodeOptions};

use crate::csv;

#[derive(Args)]
pub struct SweepArgs {
    /// Flat key=value config file; command-line flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated image names, or `all` for the benchmark set.
    #[arg(long)]
    images: Option<String>,
    /// Comma-separated quantization factors.
    #[arg(long)]
    q_factors: Option<String>,
    /// Comma-separated schemes (mtgsc, scmneqr, dctefrqi).
    #[arg(long)]
    schemes: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dataset manifest path (default: $QIC_DATASET_DIR/manifest.txt,
    /// falling back to datasets/manifest.txt).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Subtract 128 before the forward transform.
    #[arg(long)]
    level_shift: bool,
    /// Also write every circuit JSON (large).
    #[arg(long)]
    emit_circuits: bool,
    /// Also write the reconstructed images.
    #[arg(long)]
    emit_recon: bool,
    /// Append the entropy-free classical bits-per-pixel reference column.
    #[arg(long)]
    jpeg_proxy: bool,
}

#[derive(Debug, Clone)]
struct SweepConfig {
    images: Vec<String>,
    q_factors: Vec<u32>,
    schemes: Vec<Scheme>,
    output_dir: PathBuf,
    manifest: Option<PathBuf>,
    level_shift: bool,
    emit_circuits: bool,
    emit_recon: bool,
    jpeg_proxy: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            images: vec!["all".into()],
            q_factors: vec![8, 16, 32, 36, 70],
            schemes: vec![Scheme::Mtgsc, Scheme::Scmneqr, Scheme::Dctefrqi],
            output_dir: PathBuf::from("sweep_out"),
            manifest: None,
            level_shift: false,
            emit_circuits: false,
            emit_recon: false,
            jpeg_proxy: false,
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("bad {what} {s:?}: {e}")))
        .collect()
}

fn parse_bool(value: &str, key: &str) -> anyhow::Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => bail!("config key {key}: expected a boolean, got {other:?}"),
    }
}

impl SweepConfig {
    fn from_file(path: &Path) -> anyhow::Result<Self> {
        let mut config = Self::default();
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected key=value, got {raw:?}", lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "images" => config.images = parse_list(value, "image name")?,
                "q_factors" => config.q_factors = parse_list(value, "quantization factor")?,
                "schemes" => config.schemes = parse_list(value, "scheme")?,
                "output_dir" => config.output_dir = PathBuf::from(value),
                "manifest" => config.manifest = Some(PathBuf::from(value)),
                "level_shift" => config.level_shift = parse_bool(value, key)?,
                "emit_circuits" => config.emit_circuits = parse_bool(value, key)?,
                "emit_recon_images" => config.emit_recon = parse_bool(value, key)?,
                "jpeg_bpp_proxy" => config.jpeg_proxy = parse_bool(value, key)?,
                other => bail!("config line {}: unknown key {other:?}", lineno + 1),
            }
        }
        Ok(config)
    }

    fn apply_cli(mut self, args: &SweepArgs) -> anyhow::Result<Self> {
        if let Some(images) = &args.images {
            self.images = parse_list(images, "image name")?;
        }
        if let Some(qs) = &args.q_factors {
            self.q_factors = parse_list(qs, "quantization factor")?;
        }
        if let Some(schemes) = &args.schemes {
            self.schemes = parse_list(schemes, "scheme")?;
        }
        if let Some(out) = &args.out {
            self.output_dir = out.clone();
        }
        if let Some(manifest) = &args.manifest {
            self.manifest = Some(manifest.clone());
        }
        // Boolean flags are set-only: present wins, absent defers to config.
        self.level_shift |= args.level_shift;
        self.emit_circuits |= args.emit_circuits;
        self.emit_recon |= args.emit_recon;
        self.jpeg_proxy |= args.jpeg_proxy;
        Ok(self)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.q_factors.is_empty() {
            bail!("q_factors must be non-empty");
        }
        if let Some(&q) = self.q_factors.iter().find(|&&q| q < 1) {
            bail!("quantization factor {q} out of range (must be >= 1)");
        }
        if self.schemes.is_empty() {
            bail!("schemes must be non-empty");
        }
        if self.schemes.contains(&Scheme::Neqr) {
            bail!("the sweep covers the DCT schemes; neqr is capped at 8x8 images (use `qic encode`)");
        }
        if self.images.is_empty() {
            bail!("images must be non-empty");
        }
        Ok(())
    }
}

enum Resolved {
    Canonical(GrayImage),
    Synthetic(GrayImage),
    Missing(String),
}

fn resolve_image(name: &str, manifest: &Option<DatasetManifest>, root: Option<&Path>) -> Resolved {
    if let Some(manifest) = manifest {
        if let Some(entry) = manifest.find(name) {
            let path = manifest.resolve_path(entry, root);
            if path.exists() {
                return match load_image(&path) {
                    Ok(img) => {
                        if (img.width(), img.height())
                            != (entry.expected_width, entry.expected_height)
                        {
                            Resolved::Missing(format!(
                                "{name}: {} is {}x{}, manifest expects {}x{}",
                                path.display(),
                                img.width(),
                                img.height(),
                                entry.expected_width,
                                entry.expected_height
                            ))
                        } else {
                            Resolved::Canonical(img)
                        }
                    }
                    Err(e) => Resolved::Missing(format!("{name}: {e}")),
                };
            }
        }
    }
    match synthetic::benchmark_image(name) {
        Some(img) => Resolved::Synthetic(img),
        None => Resolved::Missing(format!(
            "{name}: no manifest entry resolves to a file and no synthetic stand-in exists"
        )),
    }
}

struct JobResult {
    image_index: usize,
    q_index: usize,
    rows: Vec<csv::Row>,
    /// (scheme, gates_per_pixel, psnr text) points for the plot files.
    points: Vec<(Scheme, f64, String)>,
}

pub fn run(args: SweepArgs) -> anyhow::Result<()> {
    let config = match &args.config {
        Some(path) => SweepConfig::from_file(path)?,
        None => SweepConfig::default(),
    }
    .apply_cli(&args)?;
    config.validate()?;

    let dataset_root = std::env::var_os("QIC_DATASET_DIR").map(PathBuf::from);
    let manifest_path = config.manifest.clone().unwrap_or_else(|| {
        dataset_root
            .as_deref()
            .unwrap_or(Path::new("datasets"))
            .join("manifest.txt")
    });
    let manifest = DatasetManifest::load(&manifest_path).ok();

    let names: Vec<String> = if config.images == ["all"] {
        synthetic::BENCHMARK_SET
            .iter()
            .map(|(n, _, _)| n.to_string())
            .collect()
    } else {
        config.images.clone()
    };

    let mut images: Vec<(String, Arc<GrayImage>)> = Vec::new();
    let mut synthetic_used: Vec<String> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for name in &names {
        match resolve_image(name, &manifest, dataset_root.as_deref()) {
            Resolved::Canonical(img) => images.push((name.clone(), Arc::new(img))),
            Resolved::Synthetic(img) => {
                synthetic_used.push(name.clone());
                images.push((name.clone(), Arc::new(img)));
            }
            Resolved::Missing(reason) => skipped.push(reason),
        }
    }
    if images.is_empty() {
        bail!(
            "no images resolved; skipped: {}",
            skipped.join("; ")
        );
    }

    let out_dir = &config.output_dir;
    std::fs::create_dir_all(out_dir)?;
    if config.emit_circuits {
        std::fs::create_dir_all(out_dir.join("circuits"))?;
    }
    if config.emit_recon {
        std::fs::create_dir_all(out_dir.join("recon"))?;
    }
    std::fs::create_dir_all(out_dir.join("plots"))?;

    let jobs: Vec<(usize, usize)> = (0..images.len())
        .flat_map(|i| (0..config.q_factors.len()).map(move |j| (i, j)))
        .collect();

    let mut results: Vec<JobResult> = jobs
        .par_iter()
        .map(|&(image_index, q_index)| {
            run_job(&config, &images[image_index], image_index, q_index, out_dir)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    // The parallel order is nondeterministic; the output order is not.
    results.sort_by_key(|r| (r.image_index, r.q_index));

    let header = if config.jpeg_proxy {
        csv::HEADER_WITH_PROXY
    } else {
        csv::HEADER
    };
    let mut csv_text = format!("{header}\n");
    for result in &results {
        for row in &result.rows {
            csv_text.push_str(&row.to_line(config.jpeg_proxy));
            csv_text.push('\n');
        }
    }
    let csv_path = out_dir.join("stats.csv");
    std::fs::write(&csv_path, &csv_text)?;

    write_plot_files(&config, &images, &results, out_dir)?;

    let mut summary = String::new();
    let saving = mean_saving(&results);
    match saving {
        Some((mean, pairs)) => summary.push_str(&format!(
            "mean gate saving of mtgsc vs dctefrqi: {:.2}% over {} (image, q) pairs\n",
            mean * 100.0,
            pairs
        )),
        None => summary.push_str(
            "mean gate saving unavailable (sweep needs both mtgsc and dctefrqi)\n",
        ),
    }
    summary.push_str(&format!(
        "rows: {} ({} images x {} q-factors x {} schemes)\n",
        results.iter().map(|r| r.rows.len()).sum::<usize>(),
        images.len(),
        config.q_factors.len(),
        config.schemes.len()
    ));
    if !synthetic_used.is_empty() {
        summary.push_str(&format!(
            "synthetic stand-ins used for: {}\n",
            synthetic_used.join(", ")
        ));
    }
    for reason in &skipped {
        summary.push_str(&format!("skipped: {reason}\n"));
    }
    std::fs::write(out_dir.join("summary.txt"), &summary)?;
    print!("{summary}");
    println!("stats written to {}", csv_path.display());
    Ok(())
}

fn run_job(
    config: &SweepConfig,
    image: &(String, Arc<GrayImage>),
    image_index: usize,
    q_index: usize,
    out_dir: &Path,
) -> anyhow::Result<JobResult> {
    let (name, img) = image;
    let q = config.q_factors[q_index];
    let dims = (img.width(), img.height());

    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut reference_recon: Option<GrayImage> = None;
    for &scheme in &config.schemes {
        let opts = EncodeOptions {
            q,
            scheme,
            level_shift: config.level_shift,
        };
        let encoded = encode_image(img, &opts)
            .with_context(|| format!("encoding {name} at q={q} under {scheme}"))?;
        if encoded.clamped > 0 {
            eprintln!("warning: {name} q={q} {scheme}: {} magnitudes clamped", encoded.clamped);
        }

        let recon = decode_to_image(&encoded.circuit, dims, q, config.level_shift)?;
        match &reference_recon {
            None => reference_recon = Some(recon.clone()),
            Some(reference) => {
                if reference != &recon {
                    bail!(
                        "reconstruction mismatch: {name} q={q} {scheme} disagrees with {}",
                        config.schemes[0]
                    );
                }
            }
        }
        let quality = psnr(img, &recon)?.with_labels(name, scheme.as_str(), q);

        if config.emit_circuits {
            let path = out_dir
                .join("circuits")
                .join(format!("{name}_{scheme}_q{q}.circuit.json"));
            std::fs::write(path, encoded.circuit.to_json())?;
        }
        if config.emit_recon && scheme == config.schemes[0] {
            // Reconstructions are scheme-independent (checked above); one
            // file per (image, q) suffices.
            save_image(&recon, &out_dir.join("recon").join(format!("{name}_q{q}.pgm")))?;
        }

        points.push((
            scheme,
            encoded.stats.gates_per_pixel,
            csv::format_psnr(quality.psnr_db),
        ));
        rows.push(csv::Row {
            scheme: scheme.to_string(),
            image: name.clone(),
            q,
            stats: Some(encoded.stats),
            quality: Some(quality),
            jpeg_bpp_proxy: config
                .jpeg_proxy
                .then(|| jpeg_bpp_proxy(encoded.coefficients.len(), dims)),
        });
    }

    Ok(JobResult {
        image_index,
        q_index,
        rows,
        points,
    })
}

/// One `.dat` file per (image, scheme): `gates_per_pixel psnr` per line,
/// quantization factors in sweep order.
fn write_plot_files(
    config: &SweepConfig,
    images: &[(String, Arc<GrayImage>)],
    results: &[JobResult],
    out_dir: &Path,
) -> anyhow::Result<()> {
    for (image_index, (name, _)) in images.iter().enumerate() {
        for &scheme in &config.schemes {
            let mut text = format!("# {name} {scheme}: gates_per_pixel psnr (one row per q)\n");
            for result in results.iter().filter(|r| r.image_index == image_index) {
                for (s, gpp, psnr_text) in &result.points {
                    if *s == scheme {
                        text.push_str(&format!("{gpp} {psnr_text}\n"));
                    }
                }
            }
            std::fs::write(out_dir.join("plots").join(format!("{name}_{scheme}.dat")), text)?;
        }
    }
    Ok(())
}

/// Mean of `1 - mtgsc/dctefrqi` in gates-per-pixel over all (image, q) pairs.
fn mean_saving(results: &[JobResult]) -> Option<(f64, usize)> {
    let mut total = 0.0;
    let mut pairs = 0;
    for result in results {
        let find = |scheme| {
            result
                .points
                .iter()
                .find(|(s, _, _)| *s == scheme)
                .map(|&(_, gpp, _)| gpp)
        };
        if let (Some(m), Some(d)) = (find(Scheme::Mtgsc), find(Scheme::Dctefrqi)) {
            if d > 0.0 {
                total += 1.0 - m / d;
                pairs += 1;
            }
        }
    }
    (pairs > 0).then(|| (total / pairs as f64, pairs))
}
