//! Rayleigh block-fading channel and AWGN generation with reproducible,
//! stream-addressable randomness.
//!
//! Every Monte-Carlo trial owns an [`RngStream`]: the master seed picks the
//! ChaCha key and the stream id selects an independent counter stream, so a
//! trial's draws do not depend on scheduling order.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid_arg, Result};
use crate::num::Real;

/// Addressable source of randomness: identical `(seed, stream_id)` pairs
/// reproduce identical draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Instantiates the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// splitmix64 finalizer; used to derive per-point seeds from (seed, salt)
/// so that sweep points are independent of grid layout.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn std_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = StandardNormal.sample(rng);
    T::from_f64_(x)
}

/// One coherence block of channel gains, stored column-major so that the
/// per-antenna vectors the detectors walk are contiguous.
#[derive(Clone, Debug)]
pub struct ChannelMatrix<T> {
    entries: Vec<Complex<T>>,
    n_r: usize,
    n_t: usize,
}

impl<T: Real> ChannelMatrix<T> {
    /// Wraps explicit column-major entries. Mostly useful in tests.
    pub fn from_columns(n_r: usize, n_t: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if n_r == 0 || n_t == 0 {
            return Err(invalid_arg!("channel dimensions must be positive"));
        }
        if entries.len() != n_r * n_t {
            return Err(invalid_arg!(
                "expected {} entries for a {n_r}x{n_t} channel, got {}",
                n_r * n_t,
                entries.len()
            ));
        }
        if entries
            .iter()
            .any(|e| !e.re.is_finite() || !e.im.is_finite())
        {
            return Err(invalid_arg!("channel entries must be finite"));
        }
        Ok(Self { entries, n_r, n_t })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Gain vector from transmit antenna `n` (zero-based) to the receive array.
    pub fn column(&self, n: usize) -> &[Complex<T>] {
        &self.entries[n * self.n_r..(n + 1) * self.n_r]
    }

    /// `‖h_n‖²`: received power collected from transmit antenna `n`.
    pub fn column_gain(&self, n: usize) -> Result<T> {
        if n >= self.n_t {
            return Err(invalid_arg!(
                "column index {n} out of range for {} transmit antennas",
                self.n_t
            ));
        }
        Ok(self.column(n).iter().map(|e| e.norm_sqr()).sum())
    }
}

/// Draws an `n_r × n_t` matrix of i.i.d. unit-variance circularly-symmetric
/// complex Gaussians: each entry is `(a + ib)/√2` with `a, b ~ N(0, 1)`.
///
/// Entries are drawn column by column, real part before imaginary part.
pub fn draw_channel<T: Real, R: Rng + ?Sized>(
    n_r: usize,
    n_t: usize,
    rng: &mut R,
) -> Result<ChannelMatrix<T>> {
    if n_r == 0 || n_t == 0 {
        return Err(invalid_arg!(
            "channel dimensions must be positive, got {n_r}x{n_t}"
        ));
    }
    let scale = T::from_f64_(0.5).sqrt();
    let entries = (0..n_r * n_t)
        .map(|_| {
            Complex::new(
                std_normal::<T, _>(rng) * scale,
                std_normal::<T, _>(rng) * scale,
            )
        })
        .collect();
    Ok(ChannelMatrix { entries, n_r, n_t })
}

/// Complex AWGN with per-entry total variance `sigma2`.
#[derive(Clone, Debug)]
pub struct NoiseVector<T> {
    entries: Vec<Complex<T>>,
    variance: T,
}

impl<T: Real> NoiseVector<T> {
    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn variance(&self) -> T {
        self.variance
    }
}

/// Draws `n_r` noise samples with `E|w_i|² = sigma2` (each real component has
/// variance `sigma2 / 2`). `sigma2 = 0` yields the zero vector.
pub fn draw_noise<T: Real, R: Rng + ?Sized>(
    n_r: usize,
    sigma2: T,
    rng: &mut R,
) -> Result<NoiseVector<T>> {
    if n_r == 0 {
        return Err(invalid_arg!("noise dimension must be positive"));
    }
    if sigma2 < T::zero() {
        return Err(invalid_arg!("noise variance must be non-negative"));
    }
    let scale = (sigma2 / T::from_f64_(2.0)).sqrt();
    let entries = (0..n_r)
        .map(|_| {
            Complex::new(
                std_normal::<T, _>(rng) * scale,
                std_normal::<T, _>(rng) * scale,
            )
        })
        .collect();
    Ok(NoiseVector {
        entries,
        variance: sigma2,
    })
}
