//! Canned experiment recipes that regenerate the data behind the headline
//! comparison figures: the pulse-shaping spectra, and the two BER scenario
//! sweeps (equal QPSK at n_t = 8; AS/8QAM vs SM/QPSK at n_t = 64).

use std::path::PathBuf;

use anyhow::Result;
use serde::Serialize;

use smlink::pulse::{mask_margin, psd, rrc_taps, slepian_taps};
use smlink::{harness, LinkConfig64, LinkScheme, Scheme, SpectralMask};

use crate::output::{
    ber_rows_to_csv, emit, mask_report_to_csv, spectrum_to_csv, BerRow, MaskReportRow, SpectrumRow,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Clone, Debug)]
pub struct FigureOptions {
    pub outdir: PathBuf,
    pub seed: u64,
    pub min_errors: u64,
    pub max_bits: u64,
    pub nfft: usize,
}

const EBN0_GRID: &str = "-25:2:5";
const NR_SET: [usize; 5] = [4, 8, 16, 32, 64];

#[derive(Serialize)]
struct SeriesSpec {
    scheme: &'static str,
    constellation: &'static str,
    nt: usize,
    nr: usize,
    command: String,
}

#[derive(Serialize)]
struct BerFigureRecipe {
    figure: String,
    seed: u64,
    min_errors: u64,
    max_bits: u64,
    ebn0_grid: String,
    series: Vec<SeriesSpec>,
}

#[derive(Serialize)]
struct FilterSpec {
    kind: &'static str,
    length: usize,
    parameter: f64,
    oversampling: usize,
    command: String,
}

#[derive(Serialize)]
struct Fig2Recipe {
    figure: String,
    nfft: usize,
    mask_edge: f64,
    mask_level_dbr: f64,
    filters: Vec<FilterSpec>,
}

/// Runs one canned recipe and returns the paths written.
pub fn run_figure(name: FigureName, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    match name {
        FigureName::Fig2 => run_fig2(opts),
        FigureName::Fig3 => run_ber_figure("fig3", 8, Scheme::Qpsk, Scheme::Qpsk, opts),
        FigureName::Fig4 => run_ber_figure("fig4", 64, Scheme::Qam8, Scheme::Qpsk, opts),
    }
}

fn run_fig2(opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    let osf = 4usize;
    let mask = SpectralMask::<f64>::common(osf);
    let slepian = slepian_taps(10, 0.65f64, osf)?;
    let rrc = rrc_taps(37, 0.4f64, osf)?;

    let mut written = Vec::new();
    let mut report = Vec::new();
    for (tag, filt) in [("slepian", &slepian), ("rrc", &rrc)] {
        let spectrum = psd(filt, opts.nfft)?;
        let rows: Vec<SpectrumRow> = spectrum
            .freqs()
            .iter()
            .zip(spectrum.level_dbr())
            .map(|(&freq, &level_dbr)| SpectrumRow { freq, level_dbr })
            .collect();
        let path = opts.outdir.join(format!("fig2_{tag}_spectrum.csv"));
        emit(Some(&path), &spectrum_to_csv(&rows))?;
        written.push(path);

        report.push(MaskReportRow {
            filter: tag.to_string(),
            length: filt.len(),
            oversampling: osf,
            rate_reduction: filt.rate_reduction(),
            mask_edge: mask.passband_edge,
            mask_level_dbr: mask.stopband_level_dbr,
            margin_dbr: mask_margin(&spectrum, &mask)?,
        });
    }

    let path = opts.outdir.join("fig2_mask_report.csv");
    emit(Some(&path), &mask_report_to_csv(&report))?;
    written.push(path);

    let recipe = Fig2Recipe {
        figure: "fig2".into(),
        nfft: opts.nfft,
        mask_edge: mask.passband_edge,
        mask_level_dbr: mask.stopband_level_dbr,
        filters: vec![
            FilterSpec {
                kind: "slepian",
                length: 10,
                parameter: 0.65,
                oversampling: osf,
                command: format!(
                    "smlink filter --kind slepian --length 10 --alpha 0.65 --oversampling {osf} --nfft {}",
                    opts.nfft
                ),
            },
            FilterSpec {
                kind: "rrc",
                length: 37,
                parameter: 0.4,
                oversampling: osf,
                command: format!(
                    "smlink filter --kind rrc --length 37 --rolloff 0.4 --oversampling {osf} --nfft {}",
                    opts.nfft
                ),
            },
        ],
    };
    let path = opts.outdir.join("fig2_recipe.json");
    emit(Some(&path), &crate::output::to_json(&recipe)?)?;
    written.push(path);
    Ok(written)
}

fn run_ber_figure(
    figure: &str,
    n_t: usize,
    as_mod: Scheme,
    sm_mod: Scheme,
    opts: &FigureOptions,
) -> Result<Vec<PathBuf>> {
    let grid = crate::grid::parse_sweep(EBN0_GRID)?;
    let mut rows: Vec<BerRow> = Vec::new();
    let mut series = Vec::new();

    for &n_r in &NR_SET {
        for (scheme, constellation) in [(LinkScheme::Sm, sm_mod), (LinkScheme::As, as_mod)] {
            let mut cfg = LinkConfig64::new(scheme, n_t, n_r, constellation);
            cfg.ebn0_db_grid = grid.clone();
            cfg.min_errors = opts.min_errors;
            cfg.max_bits = opts.max_bits;
            cfg.seed = opts.seed;
            let curve = harness::run_sweep(&cfg)?;
            rows.extend(curve.points().iter().map(|p| BerRow::from_point(&curve, p)));
            series.push(SeriesSpec {
                scheme: scheme.name(),
                constellation: constellation.name(),
                nt: n_t,
                nr: n_r,
                command: format!(
                    "smlink ber --scheme {} --nt {n_t} --nr {n_r} --mod {} --ebn0 {EBN0_GRID} --seed {} --min-errors {} --max-bits {}",
                    scheme.name(),
                    constellation.name(),
                    opts.seed,
                    opts.min_errors,
                    opts.max_bits
                ),
            });
        }
    }

    let mut written = Vec::new();
    let path = opts.outdir.join(format!("{figure}_ber.csv"));
    emit(Some(&path), &ber_rows_to_csv(&rows))?;
    written.push(path);

    let recipe = BerFigureRecipe {
        figure: figure.into(),
        seed: opts.seed,
        min_errors: opts.min_errors,
        max_bits: opts.max_bits,
        ebn0_grid: EBN0_GRID.into(),
        series,
    };
    let path = opts.outdir.join(format!("{figure}_recipe.json"));
    emit(Some(&path), &crate::output::to_json(&recipe)?)?;
    written.push(path);
    Ok(written)
}
