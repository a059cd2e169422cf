//! Pulse-shaping filter synthesis and spectral-mask analysis.
//!
//! Two filter families are compared under a common −35 dBr emission mask:
//! the dominant Slepian (DPSS) window, which packs the most energy into a
//! prescribed band for a given length, and the truncated root-raised-cosine
//! pulse. Time-separated (non-overlapping) pulses occupy `L` samples where
//! Nyquist signaling would use `oversampling`, so a length-`L` filter costs a
//! symbol-rate reduction of `ζ = L / oversampling`.

use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use crate::error::{invalid_arg, Result};
use crate::num::Real;

/// Spectrum levels below this are reported as the floor (avoids log of zero).
const DBR_FLOOR: f64 = -300.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterKind {
    Slepian,
    Rrc,
}

/// A real FIR pulse with unit energy (`Σ taps² = 1`).
#[derive(Clone, Debug)]
pub struct FilterTaps<T> {
    taps: Vec<T>,
    oversampling: usize,
    kind: FilterKind,
}

impl<T: Real> FilterTaps<T> {
    /// Wraps explicit taps, normalizing them to unit energy.
    pub fn new(taps: Vec<T>, oversampling: usize, kind: FilterKind) -> Result<Self> {
        if taps.is_empty() {
            return Err(invalid_arg!("a filter needs at least one tap"));
        }
        if oversampling < 1 {
            return Err(invalid_arg!("oversampling must be at least 1"));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(invalid_arg!("taps must be finite"));
        }
        let energy: T = taps.iter().map(|&t| t * t).sum();
        if energy <= T::zero() {
            return Err(invalid_arg!("taps must carry non-zero energy"));
        }
        let mut taps = taps;
        normalize_energy(&mut taps);
        Ok(Self {
            taps,
            oversampling,
            kind,
        })
    }

    pub fn taps(&self) -> &[T] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    /// `ζ` for this filter: see [`rate_reduction`].
    pub fn rate_reduction(&self) -> T {
        rate_reduction(self.taps.len(), self.oversampling)
    }
}

fn normalize_energy<T: Real>(taps: &mut [T]) {
    let energy: T = taps.iter().map(|&t| t * t).sum();
    let inv = energy.sqrt().recip();
    for t in taps.iter_mut() {
        *t *= inv;
    }
}

/// Dominant discrete prolate spheroidal sequence of length `l` for the
/// half-bandwidth `W = alpha / oversampling` cycles/sample, so `alpha` sets
/// the main-lobe width as a fraction of the nominal symbol bandwidth.
///
/// Computed as the top eigenvector of the symmetric tridiagonal operator
/// that commutes with the prolate concentration kernel (diagonal
/// `((L−1−2i)/2)²·cos(2πW)`, off-diagonal `i(L−i)/2`), extracted by shifted
/// power iteration. Taps come out single-signed; they are returned positive
/// with unit energy.
pub fn slepian_taps<T: Real>(l: usize, alpha: T, oversampling: usize) -> Result<FilterTaps<T>> {
    if l < 2 {
        return Err(invalid_arg!("Slepian length must be at least 2, got {l}"));
    }
    if oversampling < 1 {
        return Err(invalid_arg!("oversampling must be at least 1"));
    }
    let w = alpha / T::from_usize_(oversampling);
    if !(w > T::zero()) || w >= T::from_f64_(0.5) {
        return Err(invalid_arg!(
            "half-bandwidth alpha/oversampling = {w} outside (0, 0.5)"
        ));
    }

    let half = T::from_f64_(0.5);
    let two = T::from_f64_(2.0);
    let c = (two * T::PI() * w).cos();
    let lm1 = T::from_usize_(l - 1);
    let diag: Vec<T> = (0..l)
        .map(|i| {
            let x = (lm1 - two * T::from_usize_(i)) * half;
            x * x * c
        })
        .collect();
    let off: Vec<T> = (1..l)
        .map(|i| T::from_usize_(i) * (T::from_usize_(l) - T::from_usize_(i)) * half)
        .collect();

    // Gershgorin shift makes the top eigenvalue strictly dominant in modulus.
    let mut shift = T::zero();
    for i in 0..l {
        let mut row = diag[i].abs();
        if i > 0 {
            row += off[i - 1];
        }
        if i < l - 1 {
            row += off[i];
        }
        shift = shift.max(row);
    }
    shift += T::one();

    let mut v = vec![T::from_usize_(l).sqrt().recip(); l];
    let mut next = vec![T::zero(); l];
    let tol = T::epsilon() * T::from_f64_(4.0);
    for _ in 0..100_000 {
        for i in 0..l {
            let mut acc = (diag[i] + shift) * v[i];
            if i > 0 {
                acc += off[i - 1] * v[i - 1];
            }
            if i < l - 1 {
                acc += off[i] * v[i + 1];
            }
            next[i] = acc;
        }
        let norm: T = next.iter().map(|&x| x * x).sum::<T>().sqrt();
        let mut delta = T::zero();
        for i in 0..l {
            next[i] /= norm;
            delta = delta.max((next[i] - v[i]).abs());
        }
        std::mem::swap(&mut v, &mut next);
        if delta < tol {
            break;
        }
    }

    if v.iter().copied().sum::<T>() < T::zero() {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    normalize_energy(&mut v);
    Ok(FilterTaps {
        taps: v,
        oversampling,
        kind: FilterKind::Slepian,
    })
}

/// Root-raised-cosine impulse response at `t` symbol periods (unnormalized,
/// peak `1 − β + 4β/π` at t = 0). Removable singularities are replaced by
/// their analytic limits.
fn rrc_impulse<T: Real>(t: T, rolloff: T) -> T {
    let pi = T::PI();
    let one = T::one();
    let two = T::from_f64_(2.0);
    let four = T::from_f64_(4.0);
    let guard = T::from_f64_(1e-8);

    if t.abs() < guard {
        return one - rolloff + four * rolloff / pi;
    }
    let q = four * rolloff * t;
    if (q.abs() - one).abs() < guard {
        let a = pi / (four * rolloff);
        return rolloff / two.sqrt() * ((one + two / pi) * a.sin() + (one - two / pi) * a.cos());
    }
    (((pi * t) * (one - rolloff)).sin() + q * ((pi * t) * (one + rolloff)).cos())
        / ((pi * t) * (one - q * q))
}

/// Truncated root-raised-cosine filter of odd length `l`, sampled at
/// `t = (i − (l−1)/2) / oversampling` symbol periods, unit-energy normalized.
pub fn rrc_taps<T: Real>(l: usize, rolloff: T, oversampling: usize) -> Result<FilterTaps<T>> {
    if l < 1 || l.is_multiple_of(2) {
        return Err(invalid_arg!("RRC length must be odd and positive, got {l}"));
    }
    if !(rolloff > T::zero()) || rolloff > T::one() {
        return Err(invalid_arg!("roll-off must be in (0, 1], got {rolloff}"));
    }
    if oversampling < 1 {
        return Err(invalid_arg!("oversampling must be at least 1"));
    }
    let mid = T::from_usize_(l - 1) / T::from_f64_(2.0);
    let osf = T::from_usize_(oversampling);
    let mut taps: Vec<T> = (0..l)
        .map(|i| rrc_impulse((T::from_usize_(i) - mid) / osf, rolloff))
        .collect();
    normalize_energy(&mut taps);
    Ok(FilterTaps {
        taps,
        oversampling,
        kind: FilterKind::Rrc,
    })
}

/// Symbol-rate reduction factor `ζ = L / oversampling` incurred when pulses
/// are kept separated in time instead of Nyquist-overlapped.
pub fn rate_reduction<T: Real>(l: usize, oversampling: usize) -> T {
    debug_assert!(l >= 1 && oversampling >= 1);
    T::from_usize_(l) / T::from_usize_(oversampling)
}

/// Peak-normalized power spectrum on `[0, 0.5]` cycles/sample.
#[derive(Clone, Debug)]
pub struct SpectrumCurve<T> {
    freqs: Vec<T>,
    level_dbr: Vec<T>,
}

impl<T: Real> SpectrumCurve<T> {
    /// Wraps an externally computed peak-normalized spectrum.
    pub fn new(freqs: Vec<T>, level_dbr: Vec<T>) -> Result<Self> {
        if freqs.len() != level_dbr.len() || freqs.is_empty() {
            return Err(invalid_arg!(
                "frequency and level grids must be non-empty and equal length"
            ));
        }
        let peak = level_dbr.iter().copied().fold(T::neg_infinity(), T::max);
        if peak.abs() > T::from_f64_(1e-9) {
            return Err(invalid_arg!(
                "spectrum is not peak-normalized (max {peak} dBr)"
            ));
        }
        Ok(Self { freqs, level_dbr })
    }

    pub fn freqs(&self) -> &[T] {
        &self.freqs
    }

    /// Levels in dB relative to the spectral peak (max is exactly 0).
    pub fn level_dbr(&self) -> &[T] {
        &self.level_dbr
    }
}

/// Magnitude-squared of the zero-padded DFT on `n_fft` uniform frequencies,
/// peak-normalized to 0 dBr and clipped at −300 dBr. Returns the first
/// `n_fft/2 + 1` bins (the real-filter spectrum is symmetric).
pub fn psd<T: Real + FftNum>(f: &FilterTaps<T>, n_fft: usize) -> Result<SpectrumCurve<T>> {
    if n_fft < 8 * f.len() {
        return Err(invalid_arg!(
            "n_fft = {n_fft} too small for length {} (need at least 8x)",
            f.len()
        ));
    }
    let mut buf: Vec<Complex<T>> = f
        .taps
        .iter()
        .map(|&t| Complex::new(t, T::zero()))
        .chain(std::iter::repeat(Complex::new(T::zero(), T::zero())))
        .take(n_fft)
        .collect();
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);

    let power: Vec<T> = buf[..=n_fft / 2].iter().map(|x| x.norm_sqr()).collect();
    let peak = power.iter().copied().fold(T::zero(), T::max);
    let ten = T::from_f64_(10.0);
    let floor = T::from_f64_(DBR_FLOOR);
    let level_dbr: Vec<T> = power
        .iter()
        .map(|&p| {
            if p <= T::zero() {
                floor
            } else {
                (ten * (p / peak).log10()).max(floor)
            }
        })
        .collect();
    let freqs = (0..=n_fft / 2)
        .map(|k| T::from_usize_(k) / T::from_usize_(n_fft))
        .collect();
    Ok(SpectrumCurve { freqs, level_dbr })
}

/// A brick emission mask: everything beyond `passband_edge` must stay below
/// `stopband_level_dbr`.
#[derive(Clone, Copy, Debug)]
pub struct SpectralMask<T> {
    pub passband_edge: T,
    pub stopband_level_dbr: T,
}

impl<T: Real> SpectralMask<T> {
    pub fn new(passband_edge: T, stopband_level_dbr: T) -> Result<Self> {
        if !(passband_edge > T::zero()) || passband_edge >= T::from_f64_(0.5) {
            return Err(invalid_arg!(
                "passband edge must lie in (0, 0.5) cycles/sample, got {passband_edge}"
            ));
        }
        Ok(Self {
            passband_edge,
            stopband_level_dbr,
        })
    }

    /// The common −35 dBr mask both filter kinds are judged against: the
    /// stopband starts at the 50% excess-bandwidth point `1.5/(2·osf)`,
    /// leaving a transition region beyond the nominal band edge.
    pub fn common(oversampling: usize) -> Self {
        Self {
            passband_edge: T::from_f64_(1.5) / (T::from_f64_(2.0) * T::from_usize_(oversampling)),
            stopband_level_dbr: T::from_f64_(-35.0),
        }
    }
}

/// Worst-case clearance to the mask over the stopband:
/// `min over f > passband_edge of (stopband_level − level(f))`.
/// Non-negative means the filter complies.
pub fn mask_margin<T: Real>(s: &SpectrumCurve<T>, m: &SpectralMask<T>) -> Result<T> {
    let mut margin = T::infinity();
    for (&f, &level) in s.freqs.iter().zip(&s.level_dbr) {
        if f > m.passband_edge {
            margin = margin.min(m.stopband_level_dbr - level);
        }
    }
    if margin.is_infinite() {
        return Err(invalid_arg!(
            "spectrum grid has no frequencies beyond the passband edge {}",
            m.passband_edge
        ));
    }
    Ok(margin)
}
