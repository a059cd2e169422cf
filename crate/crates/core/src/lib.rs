//! Link-level simulator comparing antenna selection (AS) and spatial
//! modulation (SM) for single-RF-chain MIMO transmitters under a common
//! band-limitation constraint.
//!
//! The crate provides:
//! - [`constellation`]: QPSK / rectangular 8QAM alphabets with Gray labels,
//! - [`channel`]: seeded i.i.d. Rayleigh block fading and complex AWGN,
//! - [`transceiver`]: max-gain antenna selection, SM bit mapping, and exact
//!   ML detection (known-antenna and joint antenna/symbol),
//! - [`pulse`]: Slepian (DPSS) and truncated-RRC pulse synthesis, PSD and
//!   spectral-mask analysis, and the symbol-rate reduction factor `ζ`,
//! - [`efficiency`]: spectral-efficiency and antenna-sizing formulas,
//!   including finite antenna switching time,
//! - [`harness`]: a deterministic Monte-Carlo BER engine with Wilson
//!   confidence intervals and AS/SM crossover location.
//!
//! All numerics are generic over the scalar type via [`num::Real`]
//! (`f32` or `f64`); the `*64` aliases below pick the double-precision
//! instantiation the CLI uses.

// negated float comparisons in argument guards are deliberate NaN rejectors
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bits;
pub mod channel;
pub mod constellation;
pub mod efficiency;
pub mod error;
pub mod harness;
pub mod num;
pub mod pulse;
pub mod transceiver;

pub use bits::BitWord;
pub use channel::{ChannelMatrix, NoiseVector, RngStream};
pub use constellation::{Constellation, Scheme};
pub use error::{Error, Result};
pub use harness::{BerCurve, BerEstimate, LinkConfig, LinkScheme};
pub use num::Real;
pub use pulse::{FilterKind, FilterTaps, SpectralMask, SpectrumCurve};
pub use transceiver::{SelectionVector, SmCodeword};

/// Complex sample generic over the scalar.
pub type Cplx<T> = num_complex::Complex<T>;

/// Double-precision instantiations (the defaults everywhere downstream).
pub type C64 = num_complex::Complex<f64>;
pub type Constellation64 = Constellation<f64>;
pub type ChannelMatrix64 = ChannelMatrix<f64>;
pub type FilterTaps64 = FilterTaps<f64>;
pub type SpectrumCurve64 = SpectrumCurve<f64>;
pub type SpectralMask64 = SpectralMask<f64>;
pub type LinkConfig64 = LinkConfig<f64>;
pub type BerCurve64 = BerCurve<f64>;
pub type BerEstimate64 = BerEstimate<f64>;
