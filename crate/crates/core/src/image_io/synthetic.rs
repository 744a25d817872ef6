//! Deterministic procedural stand-ins for the benchmark images.
//!
//! The canonical benchmark photographs are not distributed with this
//! repository. Every generator here is seeded by image name, so sweeps and
//! tests are reproducible byte-for-byte on any machine. The textures are
//! shaped to span the spectrum the benchmark needs: `grass`/`baboon` are
//! dense high-frequency textures, `house`/`peppers` are smooth with sparse
//! detail, the rest sit in between.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GrayImage;

/// Benchmark image inventory: (name, width, height).
pub const BENCHMARK_SET: &[(&str, u32, u32)] = &[
    ("deer", 1024, 1024),
    ("baboon", 512, 512),
    ("scenery", 512, 512),
    ("airport", 1024, 1024),
    ("building", 512, 512),
    ("peppers", 512, 512),
    ("grass", 512, 512),
    ("house", 512, 512),
];

/// Generates the stand-in for a benchmark name at its inventory size.
pub fn benchmark_image(name: &str) -> Option<GrayImage> {
    let &(name, w, h) = BENCHMARK_SET.iter().find(|(n, _, _)| *n == name)?;
    Some(generate(name, w, h))
}

/// Generates a named texture at an arbitrary size. Unknown names get a
/// generic mid-frequency texture seeded by the name.
pub fn generate(name: &str, width: u32, height: u32) -> GrayImage {
    let seed = name_seed(name);
    let field: Box<dyn Fn(&mut Field)> = match name {
        "deer" => Box::new(|f| {
            f.gradient(40.0, 150.0, 0.3);
            f.blobs(9, 60.0, 200.0, 90.0);
            f.noise(64, 4, 45.0);
        }),
        "baboon" => Box::new(|f| {
            f.fill(120.0);
            f.noise(32, 5, 95.0);
        }),
        "scenery" => Box::new(|f| {
            f.gradient(210.0, 70.0, 1.0);
            f.ridge(0.55, 0.12, 80.0);
            f.noise(48, 3, 30.0);
        }),
        "airport" => Box::new(|f| {
            f.fill(105.0);
            f.grid(96, 14, 70.0);
            f.noise(40, 4, 35.0);
        }),
        "building" => Box::new(|f| {
            f.gradient(170.0, 120.0, 0.8);
            f.rects(12, 70.0);
            f.noise(24, 3, 25.0);
        }),
        "peppers" => Box::new(|f| {
            f.fill(95.0);
            f.blobs(14, 45.0, 220.0, 70.0);
            f.noise(96, 2, 14.0);
        }),
        "grass" => Box::new(|f| {
            f.fill(110.0);
            f.noise(16, 5, 85.0);
        }),
        "house" => Box::new(|f| {
            f.fill(165.0);
            f.rects(5, 90.0);
            f.noise(128, 2, 10.0);
        }),
        _ => Box::new(|f| {
            f.fill(128.0);
            f.noise(48, 3, 50.0);
        }),
    };
    let mut canvas = Field::new(width, height, seed);
    field(&mut canvas);
    canvas.into_image()
}

/// Seeded multi-octave value noise on a mid-gray base; the generic texture
/// knob used by tests that need families of images with varying roughness.
pub fn noise_image(seed: u64, width: u32, height: u32, base_cell: u32, octaves: u32) -> GrayImage {
    let mut field = Field::new(width, height, seed);
    field.fill(128.0);
    field.noise(base_cell, octaves, 70.0);
    field.into_image()
}

fn name_seed(name: &str) -> u64 {
    // FNV-1a; stable across platforms and releases.
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in name.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

struct Field {
    width: u32,
    height: u32,
    values: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Field {
    fn new(width: u32, height: u32, seed: u64) -> Self {
        Self {
            width,
            height,
            values: vec![0.0; width as usize * height as usize],
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn fill(&mut self, level: f64) {
        self.values.fill(level);
    }

    fn gradient(&mut self, top: f64, bottom: f64, diagonal: f64) {
        for y in 0..self.height {
            for x in 0..self.width {
                let ty = y as f64 / self.height.max(1) as f64;
                let tx = x as f64 / self.width.max(1) as f64;
                let t = ((ty + diagonal * tx) / (1.0 + diagonal)).clamp(0.0, 1.0);
                self.values[(y * self.width + x) as usize] = top + (bottom - top) * t;
            }
        }
    }

    /// Soft elliptical bumps, bright or dark.
    fn blobs(&mut self, count: u32, min_radius: f64, max_radius: f64, amplitude: f64) {
        for _ in 0..count {
            let cx = self.rng.gen_range(0.0..self.width as f64);
            let cy = self.rng.gen_range(0.0..self.height as f64);
            let r = self.rng.gen_range(min_radius..max_radius);
            let amp = if self.rng.gen::<bool>() {
                amplitude
            } else {
                -amplitude
            };
            for y in 0..self.height {
                for x in 0..self.width {
                    let d2 = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)) / (r * r);
                    if d2 < 1.0 {
                        let falloff = (1.0 - d2).powi(2);
                        self.values[(y * self.width + x) as usize] += amp * falloff;
                    }
                }
            }
        }
    }

    /// Horizon line with a sinusoidal ridge; darkens everything below it.
    fn ridge(&mut self, base: f64, sway: f64, amplitude: f64) {
        let period = self.width.max(1) as f64 / 2.5;
        for x in 0..self.width {
            let horizon =
                (base + sway * (x as f64 / period * std::f64::consts::TAU).sin()) * self.height as f64;
            for y in 0..self.height {
                if (y as f64) > horizon {
                    self.values[(y * self.width + x) as usize] -= amplitude;
                }
            }
        }
    }

    /// Axis-aligned runway/street bands.
    fn grid(&mut self, spacing: u32, thickness: u32, amplitude: f64) {
        for y in 0..self.height {
            for x in 0..self.width {
                let on_v = x % spacing < thickness;
                let on_h = y % spacing < thickness;
                if on_v || on_h {
                    self.values[(y * self.width + x) as usize] += amplitude;
                }
            }
        }
    }

    /// Random opaque rectangles with sharp edges.
    fn rects(&mut self, count: u32, amplitude: f64) {
        for _ in 0..count {
            let w = self.rng.gen_range(self.width / 8..=self.width / 2).max(1);
            let h = self.rng.gen_range(self.height / 8..=self.height / 2).max(1);
            let x0 = self.rng.gen_range(0..self.width);
            let y0 = self.rng.gen_range(0..self.height);
            let delta = self.rng.gen_range(-amplitude..amplitude);
            for y in y0..(y0 + h).min(self.height) {
                for x in x0..(x0 + w).min(self.width) {
                    self.values[(y * self.width + x) as usize] += delta;
                }
            }
        }
    }

    /// Multi-octave bilinear value noise. `base_cell` is the lattice spacing
    /// of the first octave; each further octave halves the cell and the
    /// amplitude.
    fn noise(&mut self, base_cell: u32, octaves: u32, amplitude: f64) {
        let mut cell = base_cell.max(1);
        let mut amp = amplitude;
        for _ in 0..octaves {
            let gw = self.width / cell + 2;
            let gh = self.height / cell + 2;
            let lattice: Vec<f64> = (0..gw as usize * gh as usize)
                .map(|_| self.rng.gen_range(-1.0..1.0))
                .collect();
            for y in 0..self.height {
                let gy = y / cell;
                let fy = smoothstep((y % cell) as f64 / cell as f64);
                for x in 0..self.width {
                    let gx = x / cell;
                    let fx = smoothstep((x % cell) as f64 / cell as f64);
                    let idx = |gx: u32, gy: u32| lattice[(gy * gw + gx) as usize];
                    let top = idx(gx, gy) * (1.0 - fx) + idx(gx + 1, gy) * fx;
                    let bottom = idx(gx, gy + 1) * (1.0 - fx) + idx(gx + 1, gy + 1) * fx;
                    self.values[(y * self.width + x) as usize] +=
                        amp * (top * (1.0 - fy) + bottom * fy);
                }
            }
            cell = (cell / 2).max(1);
            amp *= 0.5;
        }
    }

    fn into_image(self) -> GrayImage {
        let pixels = self
            .values
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        GrayImage::from_pixels(self.width, self.height, pixels).expect("field dimensions valid")
    }
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}
