//! The combined stats/quality CSV. Column order is fixed; gate-stat columns
//! are empty on quality-only rows and vice versa. Infinite PSNR serializes
//! as the string `inf` so downstream tooling never misreads a sentinel
//! number.

use std::path::Path;

use anyhow::Context;
use qic_core::encoders::GateStats;
use qic_core::metrics::QualityReport;

pub const HEADER: &str = "scheme,image,q,n_tcn,q_o,s_bit,a_bit,b_t,b_rg,b_z,b_s0,bpe,total,gates_per_pixel,mse,psnr";
pub const HEADER_WITH_PROXY: &str = "scheme,image,q,n_tcn,q_o,s_bit,a_bit,b_t,b_rg,b_z,b_s0,bpe,total,gates_per_pixel,mse,psnr,jpeg_bpp_proxy";

pub struct Row {
    pub scheme: String,
    pub image: String,
    pub q: u32,
    pub stats: Option<GateStats>,
    pub quality: Option<QualityReport>,
    pub jpeg_bpp_proxy: Option<f64>,
}

pub fn format_psnr(psnr_db: Option<f64>) -> String {
    match psnr_db {
        None => "inf".to_string(),
        Some(db) => db.to_string(),
    }
}

impl Row {
    pub fn to_line(&self, with_proxy: bool) -> String {
        let mut fields: Vec<String> = vec![
            self.scheme.clone(),
            self.image.clone(),
            self.q.to_string(),
        ];
        match &self.stats {
            Some(s) => fields.extend([
                s.n_tcn.to_string(),
                s.q_o.to_string(),
                s.s_bit.to_string(),
                s.a_bit.to_string(),
                s.b_t.to_string(),
                s.b_rg.to_string(),
                s.b_z.to_string(),
                s.b_s0.to_string(),
                s.bpe.to_string(),
                s.total_gates.to_string(),
                s.gates_per_pixel.to_string(),
            ]),
            None => fields.extend(std::iter::repeat_n(String::new(), 11)),
        }
        match &self.quality {
            Some(q) => fields.extend([q.mse.to_string(), format_psnr(q.psnr_db)]),
            None => fields.extend([String::new(), String::new()]),
        }
        if with_proxy {
            fields.push(self.jpeg_bpp_proxy.map(|v| v.to_string()).unwrap_or_default());
        }
        fields.join(",")
    }
}

/// Appends one row, writing the header first when the file is new.
pub fn append_row(path: &Path, row: &Row) -> anyhow::Result<()> {
    use std::io::Write;
    let new = !path.exists();
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    if new {
        writeln!(file, "{HEADER}")?;
    }
    writeln!(file, "{}", row.to_line(false))?;
    Ok(())
}
