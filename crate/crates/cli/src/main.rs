//! Batch front end for the AS/SM link simulator.
//!
//! Subcommands: `ber` (Monte-Carlo sweep), `filter` (pulse synthesis and
//! spectrum), `efficiency` (spectral-efficiency tables), `crossover`
//! (AS-vs-SM break-even point), and `figure` (canned reproduction recipes).
//! Artifacts are CSV by default, JSON on request; reruns with the same seed
//! are byte-identical.

mod figures;
mod grid;
mod output;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use smlink::efficiency::{gamma_as_switching, gamma_sm_switching, EfficiencyParams};
use smlink::pulse::{mask_margin, psd, rrc_taps, slepian_taps};
use smlink::{harness, LinkConfig64, LinkScheme, Scheme, SpectralMask};

use figures::{FigureName, FigureOptions};
use output::{
    ber_rows_to_csv, efficiency_to_csv, emit, spectrum_to_csv, taps_to_csv, to_json, BerRow,
    EfficiencyRow, Format, SpectrumRow, TapRow,
};

#[derive(Parser)]
#[command(name = "smlink", version, about, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monte-Carlo BER sweep for one link configuration
    Ber(BerArgs),
    /// Pulse-shaping filter synthesis, spectrum, and mask check
    Filter(FilterArgs),
    /// Spectral-efficiency table over switching time and antenna count
    Efficiency(EfficiencyArgs),
    /// Locate the Eb/N0 where SM's BER crosses below AS's
    Crossover(CrossoverArgs),
    /// Regenerate the data for a headline figure
    Figure(FigureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    As,
    Sm,
}

impl From<SchemeArg> for LinkScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::As => LinkScheme::As,
            SchemeArg::Sm => LinkScheme::Sm,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

fn parse_modulation(s: &str) -> Result<Scheme, String> {
    Scheme::from_str(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct BerArgs {
    /// Transmission scheme
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Transmit antenna count
    #[arg(long)]
    nt: usize,
    /// Receive antenna count
    #[arg(long)]
    nr: usize,
    /// Modulation: qpsk or 8qam
    #[arg(long = "mod", value_parser = parse_modulation, default_value = "qpsk")]
    modulation: Scheme,
    /// Eb/N0 grid in dB: VALUE or START:STEP:STOP
    #[arg(long, allow_hyphen_values = true)]
    ebn0: String,
    /// Stop a grid point once this many bit errors are counted
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    /// Bit budget per grid point
    #[arg(long, default_value_t = 2_000_000)]
    max_bits: u64,
    /// Master seed; reruns with the same seed are byte-identical
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Symbols per coherence block
    #[arg(long, default_value_t = 1)]
    spb: usize,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Slepian,
    Rrc,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Filter length in samples
    #[arg(long)]
    length: usize,
    /// Slepian main-lobe width parameter
    #[arg(long, default_value_t = 0.65)]
    alpha: f64,
    /// RRC roll-off factor
    #[arg(long, default_value_t = 0.4)]
    rolloff: f64,
    /// Samples per nominal symbol
    #[arg(long, default_value_t = 4)]
    oversampling: usize,
    /// Spectrum resolution (uniform DFT size)
    #[arg(long, default_value_t = 4096)]
    nfft: usize,
    /// Mask stopband start in cycles/sample (default 1.5/(2*oversampling))
    #[arg(long)]
    mask_edge: Option<f64>,
    /// Mask stopband ceiling in dBr
    #[arg(long, default_value_t = -35.0, allow_hyphen_values = true)]
    mask_level: f64,
    /// Spectrum output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional taps output path
    #[arg(long)]
    taps_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct EfficiencyArgs {
    /// Modulation rate in bits per channel use
    #[arg(long, default_value_t = 2.0)]
    gamma_mod: f64,
    #[arg(long, default_value_t = 0.4)]
    rolloff: f64,
    /// Symbol-rate reduction factor of the SM pulse
    #[arg(long, default_value_t = 2.5)]
    zeta: f64,
    /// Symbol duration in seconds
    #[arg(long, default_value_t = 40e-9)]
    t0: f64,
    /// Coherence interval in seconds
    #[arg(long, default_value_t = 1e-3)]
    tc: f64,
    /// Switching-time sweep in seconds: VALUE or START:STEP:STOP
    #[arg(long, default_value = "0:2e-8:2e-7")]
    ts: String,
    /// Antenna counts, comma separated
    #[arg(long, default_value = "8")]
    nt: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct CrossoverArgs {
    #[arg(long)]
    nt: usize,
    #[arg(long)]
    nr: usize,
    /// AS modulation
    #[arg(long = "mod-as", value_parser = parse_modulation, default_value = "qpsk")]
    mod_as: Scheme,
    /// SM modulation
    #[arg(long = "mod-sm", value_parser = parse_modulation, default_value = "qpsk")]
    mod_sm: Scheme,
    #[arg(long, allow_hyphen_values = true)]
    ebn0: String,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 2_000_000)]
    max_bits: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    spb: usize,
    /// Output path for the two swept curves (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args)]
struct FigureArgs {
    /// Which figure's data to regenerate
    #[arg(long, value_enum)]
    name: FigureName,
    /// Output directory (defaults to $SMLINK_OUTDIR, else the working dir)
    #[arg(long)]
    outdir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 2_000_000)]
    max_bits: u64,
    #[arg(long, default_value_t = 4096)]
    nfft: usize,
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Ber(args) => cmd_ber(args),
        Cmd::Filter(args) => cmd_filter(args),
        Cmd::Efficiency(args) => cmd_efficiency(args),
        Cmd::Crossover(args) => cmd_crossover(args),
        Cmd::Figure(args) => cmd_figure(args),
    }
}

#[allow(clippy::too_many_arguments)]
fn build_config(
    scheme: LinkScheme,
    nt: usize,
    nr: usize,
    modulation: Scheme,
    ebn0: &str,
    min_errors: u64,
    max_bits: u64,
    seed: u64,
    spb: usize,
) -> Result<LinkConfig64> {
    let mut cfg = LinkConfig64::new(scheme, nt, nr, modulation);
    cfg.ebn0_db_grid = grid::parse_sweep(ebn0)?;
    cfg.min_errors = min_errors;
    cfg.max_bits = max_bits;
    cfg.seed = seed;
    cfg.symbols_per_block = spb;
    cfg.validate().map_err(anyhow::Error::from)?;
    Ok(cfg)
}

fn cmd_ber(args: BerArgs) -> Result<()> {
    let cfg = build_config(
        args.scheme.into(),
        args.nt,
        args.nr,
        args.modulation,
        &args.ebn0,
        args.min_errors,
        args.max_bits,
        args.seed,
        args.spb,
    )?;
    let curve = harness::run_sweep(&cfg)?;
    let rows: Vec<BerRow> = curve
        .points()
        .iter()
        .map(|p| BerRow::from_point(&curve, p))
        .collect();
    let contents = match args.format.into() {
        Format::Csv => ber_rows_to_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    emit(args.out.as_deref(), &contents)
}

fn cmd_filter(args: FilterArgs) -> Result<()> {
    let filt = match args.kind {
        KindArg::Slepian => slepian_taps(args.length, args.alpha, args.oversampling)?,
        KindArg::Rrc => rrc_taps(args.length, args.rolloff, args.oversampling)?,
    };
    let spectrum = psd(&filt, args.nfft)?;
    let edge = args
        .mask_edge
        .unwrap_or(1.5 / (2.0 * args.oversampling as f64));
    let mask = SpectralMask::new(edge, args.mask_level)?;
    let margin = mask_margin(&spectrum, &mask)?;

    let spectrum_rows: Vec<SpectrumRow> = spectrum
        .freqs()
        .iter()
        .zip(spectrum.level_dbr())
        .map(|(&freq, &level_dbr)| SpectrumRow { freq, level_dbr })
        .collect();
    let contents = match args.format.into() {
        Format::Csv => spectrum_to_csv(&spectrum_rows),
        Format::Json => to_json(&spectrum_rows)?,
    };
    emit(args.out.as_deref(), &contents)?;

    if let Some(taps_path) = &args.taps_out {
        let tap_rows: Vec<TapRow> = filt
            .taps()
            .iter()
            .enumerate()
            .map(|(index, &tap)| TapRow { index, tap })
            .collect();
        let contents = match args.format.into() {
            Format::Csv => taps_to_csv(&tap_rows),
            Format::Json => to_json(&tap_rows)?,
        };
        emit(Some(taps_path), &contents)?;
    }

    eprintln!(
        "{:?} length {} oversampling {}: rate reduction {}, mask margin {:.3} dB at edge {} ({} dBr)",
        args.kind,
        filt.len(),
        filt.oversampling(),
        filt.rate_reduction(),
        margin,
        mask.passband_edge,
        mask.stopband_level_dbr,
    );
    Ok(())
}

fn cmd_efficiency(args: EfficiencyArgs) -> Result<()> {
    let ts_sweep = grid::parse_sweep(&args.ts)?;
    let nt_list = grid::parse_usize_list(&args.nt)?;
    let mut rows = Vec::new();
    for &t_s in &ts_sweep {
        for &nt in &nt_list {
            let p = EfficiencyParams {
                gamma_mod: args.gamma_mod,
                rolloff: args.rolloff,
                zeta: args.zeta,
                n_t: nt,
                t_c: args.tc,
                t_s,
                t_0: args.t0,
                estimation_overhead: 0.0,
            };
            p.validate().map_err(anyhow::Error::from)?;
            rows.push(EfficiencyRow {
                t_s,
                nt,
                gamma_as: gamma_as_switching(&p),
                gamma_sm: gamma_sm_switching(&p)?,
            });
        }
    }
    let contents = match args.format.into() {
        Format::Csv => efficiency_to_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    emit(args.out.as_deref(), &contents)
}

fn cmd_crossover(args: CrossoverArgs) -> Result<()> {
    let sm_cfg = build_config(
        LinkScheme::Sm,
        args.nt,
        args.nr,
        args.mod_sm,
        &args.ebn0,
        args.min_errors,
        args.max_bits,
        args.seed,
        args.spb,
    )?;
    let as_cfg = build_config(
        LinkScheme::As,
        args.nt,
        args.nr,
        args.mod_as,
        &args.ebn0,
        args.min_errors,
        args.max_bits,
        args.seed,
        args.spb,
    )?;
    let sm_curve = harness::run_sweep(&sm_cfg)?;
    let as_curve = harness::run_sweep(&as_cfg)?;
    let crossover = harness::find_crossover(&sm_curve, &as_curve)?;

    let mut rows: Vec<BerRow> = Vec::new();
    for curve in [&sm_curve, &as_curve] {
        rows.extend(curve.points().iter().map(|p| BerRow::from_point(curve, p)));
    }
    let contents = match args.format.into() {
        Format::Csv => ber_rows_to_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    emit(args.out.as_deref(), &contents)?;

    match crossover {
        Some(x) => eprintln!("crossover_db = {x}"),
        None => eprintln!("crossover_db = none (no sign change on this grid)"),
    }
    Ok(())
}

fn cmd_figure(args: FigureArgs) -> Result<()> {
    if args.max_bits == 0 || args.min_errors == 0 {
        bail!("budgets must be positive");
    }
    let opts = FigureOptions {
        outdir: args.outdir.unwrap_or_else(output::default_outdir),
        seed: args.seed,
        min_errors: args.min_errors,
        max_bits: args.max_bits,
        nfft: args.nfft,
    };
    let written = figures::run_figure(args.name, &opts)
        .with_context(|| format!("running {:?}", args.name))?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
