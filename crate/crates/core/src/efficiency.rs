//! Spectral-efficiency bookkeeping for AS and SM links.
//!
//! The antenna-count sizing rules pick `N_t` so that SM's index bits
//! compensate the symbol-rate loss `ζ` of time-separated pulses, and the
//! `Γ` formulas turn modulation rate, roll-off, `ζ`, and (optionally) a
//! finite antenna switching time into net bits/s/Hz.
//!
//! `⌊·⌉` is round-to-nearest with halves up; the switching-time formulas use
//! a true floor for the whole-symbol count inside a coherence interval.

use crate::error::{invalid_arg, Result};
use crate::num::Real;

/// Round-to-nearest, halves up: `⌊x⌉`.
fn round_half_up<T: Real>(x: T) -> T {
    (x + T::from_f64_(0.5)).floor()
}

fn pow2_checked<T: Real>(exponent: T) -> u64 {
    let e = exponent
        .to_u32()
        .unwrap_or_else(|| panic!("antenna exponent {exponent} out of range"));
    assert!(e < 64, "antenna exponent {e} out of range");
    1u64 << e
}

/// Antenna count compensating the rate loss at equal modulation on both
/// sides: `N_t = 2^⌊Γ_mod·(ζ−1)⌉`.
pub fn nt_scenario1<T: Real>(gamma_mod: T, zeta: T) -> u64 {
    pow2_checked(round_half_up(gamma_mod * (zeta - T::one())))
}

/// Antenna count for SM-with-QPSK matching a richer AS modulation:
/// `N_t = 2^⌊Γ_new·ζ − Γ_old⌉`.
pub fn nt_scenario2<T: Real>(gamma_new: T, zeta: T, gamma_old: T) -> Result<u64> {
    let exponent = gamma_new * zeta - gamma_old;
    if exponent <= T::zero() {
        return Err(invalid_arg!(
            "antenna exponent {exponent} must be positive (gamma_new*zeta must exceed gamma_old)"
        ));
    }
    Ok(pow2_checked(round_half_up(exponent)))
}

/// AS spectral efficiency with Nyquist pulses of roll-off `α`:
/// `Γ_AS = Γ_mod / (1 + α)`.
pub fn gamma_as<T: Real>(gamma_mod: T, rolloff: T) -> T {
    gamma_mod / (T::one() + rolloff)
}

/// SM spectral efficiency with rate-reduced pulses:
/// `Γ_SM = ⌊ζ·Γ_mod⌉ / (ζ·(1 + α))`.
pub fn gamma_sm<T: Real>(gamma_mod: T, zeta: T, rolloff: T) -> T {
    round_half_up(zeta * gamma_mod) / (zeta * (T::one() + rolloff))
}

/// Inputs to the finite-switching-time efficiency formulas.
#[derive(Clone, Copy, Debug)]
pub struct EfficiencyParams<T> {
    /// Modulation rate in bits per channel use.
    pub gamma_mod: T,
    /// Pulse roll-off factor.
    pub rolloff: T,
    /// Symbol-rate reduction factor of the SM pulse.
    pub zeta: T,
    /// Transmit antenna count (power of two for SM).
    pub n_t: usize,
    /// Coherence interval in seconds.
    pub t_c: T,
    /// Antenna switching time in seconds.
    pub t_s: T,
    /// Symbol duration in seconds.
    pub t_0: T,
    /// Fraction of the coherence interval spent on channel estimation.
    /// Reserved; both schemes assume free CSI here, so this must be zero.
    pub estimation_overhead: T,
}

impl<T: Real> EfficiencyParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_mod > T::zero())
            || !(self.rolloff >= T::zero())
            || !(self.t_c > T::zero())
            || !(self.t_0 > T::zero())
        {
            return Err(invalid_arg!("efficiency parameters must be positive"));
        }
        if self.zeta < T::one() {
            return Err(invalid_arg!("zeta must be at least 1, got {}", self.zeta));
        }
        if self.t_s < T::zero() || self.t_s >= self.t_c {
            return Err(invalid_arg!(
                "switching time must satisfy 0 <= t_s < t_c, got {}",
                self.t_s
            ));
        }
        if self.n_t == 0 {
            return Err(invalid_arg!("antenna count must be positive"));
        }
        if self.estimation_overhead != T::zero() {
            return Err(invalid_arg!("channel-estimation overhead is fixed at zero"));
        }
        Ok(())
    }
}

/// AS efficiency with one switching event per coherence interval:
/// `Γ_AS = Γ_mod/(1+α) · ⌊(T_c − T_s)/T₀⌋ · T₀/T_c`.
pub fn gamma_as_switching<T: Real>(p: &EfficiencyParams<T>) -> T {
    let symbols = ((p.t_c - p.t_s) / p.t_0).floor();
    gamma_as(p.gamma_mod, p.rolloff) * symbols * p.t_0 / p.t_c
}

/// SM efficiency with a switching gap after every symbol:
/// `Γ_SM = (Γ_mod + log₂N_t)/(1+α) · ⌊T_c/(ζT₀ + T_s)⌋ · T₀/T_c`.
pub fn gamma_sm_switching<T: Real>(p: &EfficiencyParams<T>) -> Result<T> {
    if !p.n_t.is_power_of_two() {
        return Err(invalid_arg!(
            "SM needs a power-of-two antenna count, got {}",
            p.n_t
        ));
    }
    let bits = p.gamma_mod + T::from_usize_(p.n_t.trailing_zeros() as usize);
    let slots = (p.t_c / (p.zeta * p.t_0 + p.t_s)).floor();
    Ok(bits / (T::one() + p.rolloff) * slots * p.t_0 / p.t_c)
}
