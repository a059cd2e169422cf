//! CSV/JSON artifact writing.
//!
//! CSV artifacts carry a header row, `,` separators, `.` decimals, and LF
//! line endings; JSON artifacts are arrays of row objects with exactly the
//! CSV column names. Identical inputs produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use smlink::{BerCurve64, BerEstimate64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// One BER table row; also the JSON mirror of the CSV schema.
#[derive(Serialize)]
pub struct BerRow {
    pub scheme: String,
    pub constellation: String,
    pub nt: usize,
    pub nr: usize,
    pub ebn0_db: f64,
    pub ber: f64,
    pub bits: u64,
    pub errors: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BerRow {
    pub fn from_point(curve: &BerCurve64, p: &BerEstimate64) -> Self {
        let cfg = curve.config();
        Self {
            scheme: cfg.scheme.name().to_string(),
            constellation: cfg.constellation.name().to_string(),
            nt: cfg.n_t,
            nr: cfg.n_r,
            ebn0_db: p.ebn0_db,
            ber: p.ber,
            bits: p.bits_simulated,
            errors: p.bit_errors,
            ci_low: p.ci95_low,
            ci_high: p.ci95_high,
        }
    }
}

pub const BER_HEADER: &str = "scheme,constellation,nt,nr,ebn0_db,ber,bits,errors,ci_low,ci_high";

pub fn ber_rows_to_csv(rows: &[BerRow]) -> String {
    let mut out = String::new();
    out.push_str(BER_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.scheme,
            r.constellation,
            r.nt,
            r.nr,
            r.ebn0_db,
            r.ber,
            r.bits,
            r.errors,
            r.ci_low,
            r.ci_high
        )
        .expect("string write");
    }
    out
}

#[derive(Serialize)]
pub struct SpectrumRow {
    pub freq: f64,
    pub level_dbr: f64,
}

pub fn spectrum_to_csv(rows: &[SpectrumRow]) -> String {
    let mut out = String::from("freq,level_dbr\n");
    for r in rows {
        writeln!(out, "{},{}", r.freq, r.level_dbr).expect("string write");
    }
    out
}

#[derive(Serialize)]
pub struct TapRow {
    pub index: usize,
    pub tap: f64,
}

pub fn taps_to_csv(rows: &[TapRow]) -> String {
    let mut out = String::from("index,tap\n");
    for r in rows {
        writeln!(out, "{},{}", r.index, r.tap).expect("string write");
    }
    out
}

#[derive(Serialize)]
pub struct EfficiencyRow {
    pub t_s: f64,
    pub nt: usize,
    pub gamma_as: f64,
    pub gamma_sm: f64,
}

pub fn efficiency_to_csv(rows: &[EfficiencyRow]) -> String {
    let mut out = String::from("t_s,nt,gamma_as,gamma_sm\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.t_s, r.nt, r.gamma_as, r.gamma_sm).expect("string write");
    }
    out
}

#[derive(Serialize)]
pub struct MaskReportRow {
    pub filter: String,
    pub length: usize,
    pub oversampling: usize,
    pub rate_reduction: f64,
    pub mask_edge: f64,
    pub mask_level_dbr: f64,
    pub margin_dbr: f64,
}

pub fn mask_report_to_csv(rows: &[MaskReportRow]) -> String {
    let mut out = String::from(
        "filter,length,oversampling,rate_reduction,mask_edge,mask_level_dbr,margin_dbr\n",
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.filter,
            r.length,
            r.oversampling,
            r.rate_reduction,
            r.mask_edge,
            r.mask_level_dbr,
            r.margin_dbr
        )
        .expect("string write");
    }
    out
}

pub fn to_json<T: Serialize>(rows: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows).context("JSON serialization")?;
    s.push('\n');
    Ok(s)
}

/// Writes to the path, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir)
                        .with_context(|| format!("creating directory {}", dir.display()))?;
                }
            }
            fs::write(p, contents).with_context(|| format!("writing {}", p.display()))
        }
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .context("writing to stdout"),
    }
}

/// Default output directory: `$SMLINK_OUTDIR` if set, else the working dir.
pub fn default_outdir() -> PathBuf {
    std::env::var_os("SMLINK_OUTDIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}
