//! Monte-Carlo BER engine.
//!
//! A trial is one coherence block: draw `H`, transmit `symbols_per_block`
//! payloads through the configured scheme, detect, count bit errors. Trials
//! are independently seeded from `(point seed, trial index)`, so a sweep is a
//! pure function of its configuration — batches run on rayon and reduce by
//! integer summation, which keeps results identical across thread counts.
//! A point stops once it has seen `min_errors` errors or spent `max_bits`.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::bits::BitWord;
use crate::channel::{derive_seed, draw_channel, draw_noise, RngStream};
use crate::constellation::{Constellation, Scheme};
use crate::error::{invalid_arg, Result};
use crate::num::Real;
use crate::transceiver::{detect_as_index, detect_sm, select_antenna, sm_encode_word};

/// Transmission scheme under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkScheme {
    /// Antenna selection: CSI picks the antenna, once per coherence block.
    As,
    /// Spatial modulation: payload bits pick the antenna every symbol.
    Sm,
}

impl LinkScheme {
    pub fn name(&self) -> &'static str {
        match self {
            LinkScheme::As => "as",
            LinkScheme::Sm => "sm",
        }
    }
}

/// Everything a BER sweep needs.
#[derive(Clone, Debug)]
pub struct LinkConfig<T> {
    pub scheme: LinkScheme,
    pub n_t: usize,
    pub n_r: usize,
    pub constellation: Scheme,
    pub ebn0_db_grid: Vec<T>,
    /// Bit budget per grid point.
    pub max_bits: u64,
    /// Stop a point early once this many bit errors are in.
    pub min_errors: u64,
    pub seed: u64,
    /// Symbols simulated per coherence block (per drawn `H`).
    pub symbols_per_block: usize,
}

impl<T: Real> LinkConfig<T> {
    pub fn new(scheme: LinkScheme, n_t: usize, n_r: usize, constellation: Scheme) -> Self {
        Self {
            scheme,
            n_t,
            n_r,
            constellation,
            ebn0_db_grid: Vec::new(),
            max_bits: 2_000_000,
            min_errors: 100,
            seed: 1,
            symbols_per_block: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_r == 0 {
            return Err(invalid_arg!("antenna counts must be positive"));
        }
        if self.scheme == LinkScheme::Sm && !self.n_t.is_power_of_two() {
            return Err(invalid_arg!(
                "SM needs a power-of-two transmit antenna count, got {}",
                self.n_t
            ));
        }
        if self.ebn0_db_grid.is_empty() {
            return Err(invalid_arg!("Eb/N0 grid must be non-empty"));
        }
        if self.ebn0_db_grid.iter().any(|x| !x.is_finite()) {
            return Err(invalid_arg!("Eb/N0 grid must be finite"));
        }
        if self.max_bits == 0 || self.min_errors == 0 {
            return Err(invalid_arg!("bit budget and error target must be positive"));
        }
        if self.symbols_per_block == 0 {
            return Err(invalid_arg!("symbols per block must be positive"));
        }
        Ok(())
    }

    /// Information bits per channel use: the modulation bits, plus the index
    /// bits under SM (which ride for free on the antenna choice).
    pub fn bits_per_use(&self) -> u32 {
        let mod_bits = Constellation::<T>::new(self.constellation).bits_per_symbol();
        match self.scheme {
            LinkScheme::As => mod_bits,
            LinkScheme::Sm => mod_bits + self.n_t.trailing_zeros(),
        }
    }
}

/// Noise variance for a target `Eb/N0` in dB: with unit symbol energy,
/// `SNR = 1/σ²` and `Eb/N0 = SNR / bits_per_use`, so
/// `σ² = 1 / (bits_per_use · 10^(Eb/N0 / 10))`.
pub fn sigma2_from_ebn0<T: Real>(ebn0_db: T, bits_per_use: T) -> T {
    let ten = T::from_f64_(10.0);
    (bits_per_use * ten.powf(ebn0_db / ten)).recip()
}

/// BER at one grid point with its Wilson 95% confidence interval.
#[derive(Clone, Copy, Debug)]
pub struct BerEstimate<T> {
    pub ebn0_db: T,
    pub bit_errors: u64,
    pub bits_simulated: u64,
    pub ber: T,
    pub ci95_low: T,
    pub ci95_high: T,
}

impl<T: Real> BerEstimate<T> {
    pub fn from_counts(ebn0_db: T, bit_errors: u64, bits_simulated: u64) -> Self {
        let (ci95_low, ci95_high) = wilson_interval(bit_errors, bits_simulated);
        Self {
            ebn0_db,
            bit_errors,
            bits_simulated,
            ber: T::from_f64_(bit_errors as f64 / bits_simulated as f64),
            ci95_low,
            ci95_high,
        }
    }
}

/// Wilson score interval at 95% confidence; robust at low error counts and
/// always brackets the point estimate.
fn wilson_interval<T: Real>(errors: u64, n: u64) -> (T, T) {
    const Z: f64 = 1.959963984540054;
    let n = n as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // clamp against roundoff so the interval always brackets p exactly
    (
        T::from_f64_(((center - half) / denom).max(0.0).min(p)),
        T::from_f64_(((center + half) / denom).min(1.0).max(p)),
    )
}

/// A full BER-vs-Eb/N0 curve.
#[derive(Clone, Debug)]
pub struct BerCurve<T> {
    config: LinkConfig<T>,
    points: Vec<BerEstimate<T>>,
}

impl<T: Real> BerCurve<T> {
    pub fn config(&self) -> &LinkConfig<T> {
        &self.config
    }

    pub fn points(&self) -> &[BerEstimate<T>] {
        &self.points
    }
}

fn trial<T: Real, R: Rng + ?Sized>(
    cfg: &LinkConfig<T>,
    c: &Constellation<T>,
    sigma2: T,
    rng: &mut R,
) -> (u64, u64) {
    let bits_per_use = match cfg.scheme {
        LinkScheme::As => c.bits_per_symbol(),
        LinkScheme::Sm => c.bits_per_symbol() + cfg.n_t.trailing_zeros(),
    };
    let payload_mask = if bits_per_use == 32 {
        u32::MAX
    } else {
        (1u32 << bits_per_use) - 1
    };
    let h = draw_channel::<T, _>(cfg.n_r, cfg.n_t, rng).expect("validated dims");
    let mut errors = 0u64;

    match cfg.scheme {
        LinkScheme::As => {
            let sel = select_antenna(&h);
            let col = h.column(sel.active());
            for _ in 0..cfg.symbols_per_block {
                let label = rng.random::<u32>() & payload_mask;
                let sym = c.point(c.point_index_of_label(label));
                let w = draw_noise::<T, _>(cfg.n_r, sigma2, rng).expect("validated");
                let y: Vec<Complex<T>> = col
                    .iter()
                    .zip(w.entries())
                    .map(|(hi, wi)| hi * sym + wi)
                    .collect();
                let got = detect_as_index(&y, col, c).expect("validated dims");
                errors += u64::from((label ^ c.label_of(got).value()).count_ones());
            }
        }
        LinkScheme::Sm => {
            for _ in 0..cfg.symbols_per_block {
                let payload = rng.random::<u32>() & payload_mask;
                let word = BitWord::new(payload, bits_per_use).expect("masked");
                let sent = sm_encode_word(word, cfg.n_t, c).expect("validated");
                let col = h.column(sent.selection.active());
                let w = draw_noise::<T, _>(cfg.n_r, sigma2, rng).expect("validated");
                let y: Vec<Complex<T>> = col
                    .iter()
                    .zip(w.entries())
                    .map(|(hi, wi)| hi * sent.symbol + wi)
                    .collect();
                let got = detect_sm(&y, &h, c).expect("validated dims");
                errors += u64::from(sent.bits.hamming(got.bits).expect("same length"));
            }
        }
    }
    (
        u64::from(bits_per_use) * cfg.symbols_per_block as u64,
        errors,
    )
}

/// Runs one coherence block at the given noise variance and returns
/// `(bits_sent, bit_errors)`. Draw order per trial: the channel matrix,
/// then payload and noise alternately per symbol.
pub fn run_trial<T: Real, R: Rng + ?Sized>(
    cfg: &LinkConfig<T>,
    sigma2: T,
    rng: &mut R,
) -> (u64, u64) {
    let c = Constellation::new(cfg.constellation);
    trial(cfg, &c, sigma2, rng)
}

/// Per-point master seed: mixes the configured seed with the Eb/N0 value
/// itself, so refining the grid never perturbs existing points.
fn point_seed<T: Real>(seed: u64, ebn0_db: T) -> u64 {
    derive_seed(seed, ebn0_db.to_f64().expect("finite").to_bits())
}

const FIRST_BATCH: u64 = 1024;
const MAX_BATCH: u64 = 1 << 18;

/// Estimates the BER at one Eb/N0 point under the configured stopping rule.
pub fn run_point<T: Real>(cfg: &LinkConfig<T>, ebn0_db: T) -> Result<BerEstimate<T>> {
    cfg.validate()?;
    let c = Constellation::new(cfg.constellation);
    let sigma2 = sigma2_from_ebn0(ebn0_db, T::from_f64_(f64::from(cfg.bits_per_use())));
    let seed = point_seed(cfg.seed, ebn0_db);
    let bits_per_trial = u64::from(cfg.bits_per_use()) * cfg.symbols_per_block as u64;

    let mut bits = 0u64;
    let mut errors = 0u64;
    let mut next_trial = 0u64;
    let mut batch = FIRST_BATCH;
    while errors < cfg.min_errors {
        let remaining = (cfg.max_bits - bits) / bits_per_trial;
        let n = batch.min(remaining);
        if n == 0 {
            break;
        }
        let (b, e) = (next_trial..next_trial + n)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(seed, t).rng();
                trial(cfg, &c, sigma2, &mut rng)
            })
            .reduce(|| (0, 0), |(b0, e0), (b1, e1)| (b0 + b1, e0 + e1));
        bits += b;
        errors += e;
        next_trial += n;
        batch = (batch * 2).min(MAX_BATCH);
    }
    // ensure at least one trial ran even under a sub-trial bit budget
    if bits == 0 {
        let mut rng = RngStream::new(seed, 0).rng();
        let (b, e) = trial(cfg, &c, sigma2, &mut rng);
        bits = b;
        errors = e;
    }
    Ok(BerEstimate::from_counts(ebn0_db, errors, bits))
}

/// Sweeps the configured Eb/N0 grid. Points use disjoint seed material and
/// are estimated independently.
pub fn run_sweep<T: Real>(cfg: &LinkConfig<T>) -> Result<BerCurve<T>> {
    cfg.validate()?;
    let points = cfg
        .ebn0_db_grid
        .iter()
        .map(|&x| run_point(cfg, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(BerCurve {
        config: cfg.clone(),
        points,
    })
}

/// First Eb/N0 where `log(ber_a) − log(ber_b)` changes sign, located by
/// log-domain linear interpolation; `None` without a strict sign change.
/// Grid points where either curve recorded zero errors are skipped.
pub fn find_crossover<T: Real>(a: &BerCurve<T>, b: &BerCurve<T>) -> Result<Option<T>> {
    if a.points.len() != b.points.len()
        || a.points
            .iter()
            .zip(&b.points)
            .any(|(p, q)| p.ebn0_db != q.ebn0_db)
    {
        return Err(invalid_arg!("curves must share the same Eb/N0 grid"));
    }
    let diff: Vec<Option<T>> = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| (p.ber > T::zero() && q.ber > T::zero()).then(|| p.ber.ln() - q.ber.ln()))
        .collect();
    for i in 0..diff.len().saturating_sub(1) {
        if let (Some(d0), Some(d1)) = (diff[i], diff[i + 1]) {
            if d0 * d1 < T::zero() {
                let x0 = a.points[i].ebn0_db;
                let x1 = a.points[i + 1].ebn0_db;
                return Ok(Some(x0 + d0 / (d0 - d1) * (x1 - x0)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpsk_cfg(scheme: LinkScheme, n_t: usize, n_r: usize) -> LinkConfig<f64> {
        LinkConfig::new(scheme, n_t, n_r, Scheme::Qpsk)
    }

    #[test]
    fn sigma2_examples() {
        assert!((sigma2_from_ebn0(0.0f64, 1.0) - 1.0).abs() < 1e-12);
        // 3.0103 dB is a factor of 2: sigma2 = 1/(2*2)
        assert!((sigma2_from_ebn0(3.010299956639812f64, 2.0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bits_per_use_accounting() {
        assert_eq!(qpsk_cfg(LinkScheme::Sm, 8, 4).bits_per_use(), 5);
        assert_eq!(qpsk_cfg(LinkScheme::As, 8, 4).bits_per_use(), 2);
        let c8 = LinkConfig::<f64>::new(LinkScheme::As, 64, 4, Scheme::Qam8);
        assert_eq!(c8.bits_per_use(), 3);
        let s8 = LinkConfig::<f64>::new(LinkScheme::Sm, 64, 4, Scheme::Qpsk);
        assert_eq!(s8.bits_per_use(), 8);
    }

    #[test]
    fn noiseless_trials_are_error_free() {
        for scheme in [LinkScheme::As, LinkScheme::Sm] {
            let mut cfg = qpsk_cfg(scheme, 8, 2);
            cfg.symbols_per_block = 4;
            for t in 0..200 {
                let mut rng = RngStream::new(99, t).rng();
                let (bits, errs) = run_trial(&cfg, 0.0, &mut rng);
                assert_eq!(errs, 0);
                assert_eq!(bits, cfg.bits_per_use() as u64 * 4);
            }
        }
    }

    #[test]
    fn sm_ber_bounded_by_half() {
        // even at hopeless SNR, ML detection cannot do worse than guessing
        let mut cfg = qpsk_cfg(LinkScheme::Sm, 2, 1);
        cfg.ebn0_db_grid = vec![-30.0];
        cfg.max_bits = 60_000;
        cfg.min_errors = u64::MAX / 2;
        let p = run_point(&cfg, -30.0).unwrap();
        let se = (p.ber * (1.0 - p.ber) / p.bits_simulated as f64).sqrt();
        assert!(p.ber <= 0.5 + 3.0 * se, "ber {}", p.ber);
    }

    #[test]
    fn run_point_is_deterministic() {
        let mut cfg = qpsk_cfg(LinkScheme::Sm, 4, 2);
        cfg.ebn0_db_grid = vec![-5.0];
        cfg.max_bits = 100_000;
        let a = run_point(&cfg, -5.0).unwrap();
        let b = run_point(&cfg, -5.0).unwrap();
        assert_eq!(a.bit_errors, b.bit_errors);
        assert_eq!(a.bits_simulated, b.bits_simulated);
        assert_eq!(a.ber, b.ber);
    }

    #[test]
    fn grid_refinement_keeps_points() {
        // the point seed depends on the Eb/N0 value, not its grid position
        let mut cfg = qpsk_cfg(LinkScheme::As, 2, 2);
        cfg.max_bits = 50_000;
        cfg.ebn0_db_grid = vec![-4.0, 0.0];
        let coarse = run_sweep(&cfg).unwrap();
        cfg.ebn0_db_grid = vec![-4.0, -2.0, 0.0];
        let fine = run_sweep(&cfg).unwrap();
        assert_eq!(coarse.points()[0].bit_errors, fine.points()[0].bit_errors);
        assert_eq!(coarse.points()[1].bit_errors, fine.points()[2].bit_errors);
    }

    #[test]
    fn stopping_rule_respects_min_errors() {
        let mut cfg = qpsk_cfg(LinkScheme::As, 1, 1);
        cfg.ebn0_db_grid = vec![-10.0];
        cfg.max_bits = 10_000_000;
        cfg.min_errors = 50;
        let p = run_point(&cfg, -10.0).unwrap();
        assert!(p.bit_errors >= 50);
        // an easy point stops far below the bit budget
        assert!(p.bits_simulated < 1_000_000);
        assert!(p.ber >= p.ci95_low && p.ber <= p.ci95_high);
    }

    #[test]
    fn bit_budget_caps_hopeless_points() {
        let mut cfg = qpsk_cfg(LinkScheme::As, 2, 4);
        cfg.ebn0_db_grid = vec![40.0];
        cfg.max_bits = 10_000;
        let p = run_point(&cfg, 40.0).unwrap();
        assert!(p.bit_errors < cfg.min_errors);
        assert!(p.bits_simulated <= cfg.max_bits);
        assert!(p.ci95_low == 0.0);
    }

    #[test]
    fn wilson_brackets_and_clamps() {
        let (lo, hi) = wilson_interval::<f64>(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
        let (lo, hi) = wilson_interval::<f64>(1000, 1000);
        assert!(lo < 1.0);
        assert_eq!(hi, 1.0);
        let (lo, hi) = wilson_interval::<f64>(100, 1000);
        assert!(lo <= 0.1 && 0.1 <= hi);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = qpsk_cfg(LinkScheme::Sm, 6, 2);
        cfg.ebn0_db_grid = vec![0.0];
        assert!(cfg.validate().is_err()); // nt not power of two
        let mut cfg = qpsk_cfg(LinkScheme::As, 2, 2);
        assert!(cfg.validate().is_err()); // empty grid
        cfg.ebn0_db_grid = vec![0.0];
        cfg.max_bits = 0;
        assert!(cfg.validate().is_err());
        cfg.max_bits = 1000;
        cfg.min_errors = 0;
        assert!(cfg.validate().is_err());
        cfg.min_errors = 10;
        cfg.validate().unwrap();
    }

    #[test]
    fn single_precision_point_runs() {
        let mut cfg = LinkConfig::<f32>::new(LinkScheme::Sm, 4, 2, Scheme::Qpsk);
        cfg.ebn0_db_grid = vec![-3.0];
        cfg.max_bits = 20_000;
        cfg.min_errors = 10;
        let p = run_point(&cfg, -3.0).unwrap();
        assert!(p.ber > 0.0 && p.ber < 1.0);
        assert!(p.ci95_low <= p.ber && p.ber <= p.ci95_high);
    }

    #[test]
    fn crossover_of_synthetic_curves() {
        // ber_a = 10^-x crosses ber_b = 10^(-2x+1) exactly at x = 1
        let mut cfg = qpsk_cfg(LinkScheme::As, 1, 1);
        cfg.ebn0_db_grid = vec![0.0, 0.5, 1.5, 2.0];
        let synth = |f: &dyn Fn(f64) -> f64| BerCurve {
            config: cfg.clone(),
            points: cfg
                .ebn0_db_grid
                .iter()
                .map(|&x| BerEstimate {
                    ebn0_db: x,
                    bit_errors: 1,
                    bits_simulated: 1,
                    ber: f(x),
                    ci95_low: 0.0,
                    ci95_high: 1.0,
                })
                .collect(),
        };
        let a = synth(&|x| 10f64.powf(-x));
        let b = synth(&|x| 10f64.powf(-2.0 * x + 1.0));
        let x = find_crossover(&a, &b).unwrap().unwrap();
        assert!((x - 1.0).abs() < 1e-12, "{x}");

        // identical curves: no strict sign change
        assert_eq!(find_crossover(&a, &a).unwrap(), None);

        // mismatched grids are rejected
        let mut other = cfg.clone();
        other.ebn0_db_grid = vec![0.0, 1.0, 2.0, 3.0];
        let c = BerCurve {
            config: other.clone(),
            points: other
                .ebn0_db_grid
                .iter()
                .map(|&x| BerEstimate {
                    ebn0_db: x,
                    bit_errors: 1,
                    bits_simulated: 1,
                    ber: 0.1,
                    ci95_low: 0.0,
                    ci95_high: 1.0,
                })
                .collect(),
        };
        assert!(find_crossover(&a, &c).is_err());
    }
}
