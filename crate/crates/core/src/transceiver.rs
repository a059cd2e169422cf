//! Antenna selection, spatial-modulation encoding, and the ML detectors.
//!
//! Both detectors enumerate every hypothesis exactly (at most `n_t * |A|`,
//! which never exceeds 512 here) using the expanded distance
//! `‖y − h v‖² = ‖y‖² − 2 Re(v̄ ⟨h, y⟩) + |v|² ‖h‖²` with the common `‖y‖²`
//! dropped. All argmin ties break toward the lowest index.

use num_complex::Complex;

use crate::bits::BitWord;
use crate::channel::ChannelMatrix;
use crate::constellation::Constellation;
use crate::error::{dim_mismatch, invalid_arg, Result};
use crate::num::Real;

/// One-hot activation of a single transmit antenna (zero-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectionVector {
    n_t: usize,
    active: usize,
}

impl SelectionVector {
    pub fn new(n_t: usize, active: usize) -> Result<Self> {
        if n_t == 0 {
            return Err(invalid_arg!("selection vector needs at least one antenna"));
        }
        if active >= n_t {
            return Err(invalid_arg!(
                "active index {active} out of range for {n_t} antennas"
            ));
        }
        Ok(Self { n_t, active })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Zero-based index of the single active antenna.
    pub fn active(&self) -> usize {
        self.active
    }

    /// Materializes the selection as the 0/1 vector `b`.
    pub fn to_onehot(&self) -> Vec<u8> {
        let mut b = vec![0u8; self.n_t];
        b[self.active] = 1;
        b
    }
}

/// An SM transmission: which antenna fires, which symbol it carries, and the
/// payload bits (index bits followed by symbol bits).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmCodeword<T> {
    pub selection: SelectionVector,
    pub symbol: Complex<T>,
    pub bits: BitWord,
}

/// Picks the transmit antenna with the largest channel gain `‖h_n‖²`.
/// Ties break toward the lowest index.
pub fn select_antenna<T: Real>(h: &ChannelMatrix<T>) -> SelectionVector {
    let mut best = 0usize;
    let mut best_gain = h.column_gain(0).expect("column 0 exists");
    for n in 1..h.n_t() {
        let g = h.column_gain(n).expect("in range");
        if g > best_gain {
            best = n;
            best_gain = g;
        }
    }
    SelectionVector {
        n_t: h.n_t(),
        active: best,
    }
}

fn index_bits(n_t: usize) -> Result<u32> {
    if !n_t.is_power_of_two() {
        return Err(invalid_arg!(
            "SM needs a power-of-two antenna count, got {n_t}"
        ));
    }
    Ok(n_t.trailing_zeros())
}

/// Encodes a packed payload word: the leading `log2(n_t)` bits pick the
/// antenna (natural binary, "00…0" = antenna 0), the rest pick the symbol.
pub fn sm_encode_word<T: Real>(
    word: BitWord,
    n_t: usize,
    c: &Constellation<T>,
) -> Result<SmCodeword<T>> {
    let idx_bits = index_bits(n_t)?;
    let expect = idx_bits + c.bits_per_symbol();
    if word.len() != expect {
        return Err(invalid_arg!(
            "expected {expect} payload bits for n_t={n_t} with {}, got {}",
            c.scheme(),
            word.len()
        ));
    }
    let antenna = (word.value() >> c.bits_per_symbol()) as usize;
    let label = word.value() & ((1 << c.bits_per_symbol()) - 1);
    Ok(SmCodeword {
        selection: SelectionVector::new(n_t, antenna)?,
        symbol: c.point(c.point_index_of_label(label)),
        bits: word,
    })
}

/// Bit-slice front end of [`sm_encode_word`].
pub fn sm_encode<T: Real>(bits: &[u8], n_t: usize, c: &Constellation<T>) -> Result<SmCodeword<T>> {
    sm_encode_word(BitWord::from_bits(bits)?, n_t, c)
}

/// `⟨h, y⟩ = h^H y` and `‖h‖²` for one candidate column.
#[inline]
fn column_stats<T: Real>(h: &[Complex<T>], y: &[Complex<T>]) -> (Complex<T>, T) {
    let mut z = Complex::new(T::zero(), T::zero());
    let mut g = T::zero();
    for (hi, yi) in h.iter().zip(y) {
        z += hi.conj() * yi;
        g += hi.norm_sqr();
    }
    (z, g)
}

/// Expanded metric `−2 Re(v̄ z) + |v|² g`, equal to `‖y − h v‖² − ‖y‖²`.
#[inline]
fn hypothesis_metric<T: Real>(v: Complex<T>, z: Complex<T>, g: T) -> T {
    let cross = v.conj() * z;
    g * v.norm_sqr() - (cross.re + cross.re)
}

/// ML symbol detection with the transmit antenna known: minimizes
/// `‖y − h_sel·v‖²` over the alphabet. Returns the point index.
pub fn detect_as_index<T: Real>(
    y: &[Complex<T>],
    h_sel: &[Complex<T>],
    c: &Constellation<T>,
) -> Result<usize> {
    if y.len() != h_sel.len() || y.is_empty() {
        return Err(dim_mismatch!(
            "received vector has {} entries, channel column {}",
            y.len(),
            h_sel.len()
        ));
    }
    let (z, g) = column_stats(h_sel, y);
    let mut best = 0usize;
    let mut best_metric = hypothesis_metric(c.point(0), z, g);
    for (i, &v) in c.points().iter().enumerate().skip(1) {
        let m = hypothesis_metric(v, z, g);
        if m < best_metric {
            best = i;
            best_metric = m;
        }
    }
    Ok(best)
}

/// ML symbol detection with the transmit antenna known. With a single
/// non-zero entry in `b` this is maximal-ratio combining.
pub fn detect_as<T: Real>(
    y: &[Complex<T>],
    h_sel: &[Complex<T>],
    c: &Constellation<T>,
) -> Result<Complex<T>> {
    Ok(c.point(detect_as_index(y, h_sel, c)?))
}

/// Joint ML detection of (antenna, symbol): minimizes `‖y − h_n·v‖²` over
/// all `n_t · |A|` hypotheses and reassembles the payload bits.
pub fn detect_sm<T: Real>(
    y: &[Complex<T>],
    h: &ChannelMatrix<T>,
    c: &Constellation<T>,
) -> Result<SmCodeword<T>> {
    if y.len() != h.n_r() {
        return Err(dim_mismatch!(
            "received vector has {} entries, channel has {} rows",
            y.len(),
            h.n_r()
        ));
    }
    let idx_bits = index_bits(h.n_t())?;

    let mut best_antenna = 0usize;
    let mut best_point = 0usize;
    let mut best_metric = T::infinity();
    for n in 0..h.n_t() {
        let (z, g) = column_stats(h.column(n), y);
        for (i, &v) in c.points().iter().enumerate() {
            let m = hypothesis_metric(v, z, g);
            if m < best_metric {
                best_antenna = n;
                best_point = i;
                best_metric = m;
            }
        }
    }

    let word = BitWord::new(
        ((best_antenna as u32) << c.bits_per_symbol()) | c.label_of(best_point).value(),
        idx_bits + c.bits_per_symbol(),
    )?;
    Ok(SmCodeword {
        selection: SelectionVector::new(h.n_t(), best_antenna)?,
        symbol: c.point(best_point),
        bits: word,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channel, draw_noise, RngStream};
    use crate::constellation::Scheme;
    use num_complex::Complex64;

    fn matrix(n_r: usize, cols: &[&[Complex64]]) -> ChannelMatrix<f64> {
        let entries: Vec<_> = cols.iter().flat_map(|c| c.iter().copied()).collect();
        ChannelMatrix::from_columns(n_r, cols.len(), entries).unwrap()
    }

    #[test]
    fn select_ties_break_low() {
        let eye = matrix(
            2,
            &[
                &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        );
        assert_eq!(select_antenna(&eye).active(), 0);
    }

    #[test]
    fn select_picks_max_gain() {
        let h = matrix(
            1,
            &[
                &[Complex64::new(0.5, 0.5)],  // gain 0.5
                &[Complex64::new(0.0, -1.7)], // gain 2.89
                &[Complex64::new(1.0, 0.2)],  // gain 1.04
            ],
        );
        let sel = select_antenna(&h);
        assert_eq!(sel.active(), 1);
        assert_eq!(sel.to_onehot(), vec![0, 1, 0]);
    }

    #[test]
    fn select_matches_exhaustive_scan() {
        for trial in 0..50 {
            let mut rng = RngStream::new(11, trial).rng();
            let h = draw_channel::<f64, _>(8, 8, &mut rng).unwrap();
            let brute = (0..8)
                .max_by(|&a, &b| {
                    h.column_gain(a)
                        .unwrap()
                        .partial_cmp(&h.column_gain(b).unwrap())
                        .unwrap()
                })
                .unwrap();
            assert_eq!(select_antenna(&h).active(), brute);
        }
    }

    #[test]
    fn select_invariant_under_column_phase() {
        let mut rng = RngStream::new(13, 0).rng();
        let h = draw_channel::<f64, _>(4, 4, &mut rng).unwrap();
        let mut rotated = Vec::new();
        for n in 0..4 {
            let rot = Complex64::from_polar(1.0, 0.7 * (n as f64 + 1.0));
            rotated.extend(h.column(n).iter().map(|e| e * rot));
        }
        let h2 = ChannelMatrix::from_columns(4, 4, rotated).unwrap();
        assert_eq!(select_antenna(&h).active(), select_antenna(&h2).active());
    }

    #[test]
    fn sm_encode_examples() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        // Leading index bits "00" select the first antenna.
        let cw = sm_encode(&[0, 0, 0, 1], 4, &c).unwrap();
        assert_eq!(cw.selection.active(), 0);
        assert_eq!(cw.symbol, c.map_bits(&[0, 1]).unwrap());
        // "11" selects the last of four antennas.
        let cw = sm_encode(&[1, 1, 1, 0], 4, &c).unwrap();
        assert_eq!(cw.selection.active(), 3);
        assert_eq!(cw.symbol, c.map_bits(&[1, 0]).unwrap());
    }

    #[test]
    fn sm_encode_is_injective() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        let mut seen = std::collections::HashSet::new();
        for v in 0..16u32 {
            let w = BitWord::new(v, 4).unwrap();
            let cw = sm_encode_word(w, 4, &c).unwrap();
            assert!(seen.insert((
                cw.selection.active(),
                cw.symbol.re.to_bits(),
                cw.symbol.im.to_bits()
            )));
            assert_eq!(cw.bits, w);
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn sm_encode_rejects_bad_input() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        assert!(sm_encode(&[0, 0, 0], 3, &c).is_err()); // not a power of two
        assert!(sm_encode(&[0, 0, 0], 4, &c).is_err()); // wrong bit count
    }

    #[test]
    fn detect_as_noiseless_recovery() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        let mut rng = RngStream::new(21, 0).rng();
        let h = draw_channel::<f64, _>(4, 1, &mut rng).unwrap();
        for &v in c.points() {
            let y: Vec<_> = h.column(0).iter().map(|hi| hi * v).collect();
            assert_eq!(detect_as(&y, h.column(0), &c).unwrap(), v);
        }
    }

    #[test]
    fn detect_sm_noiseless_recovery() {
        let c = Constellation::<f64>::new(Scheme::Qam8);
        let mut rng = RngStream::new(22, 0).rng();
        let h = draw_channel::<f64, _>(6, 8, &mut rng).unwrap();
        let v = c.point(5);
        let y: Vec<_> = h.column(2).iter().map(|hi| hi * v).collect();
        let cw = detect_sm(&y, &h, &c).unwrap();
        assert_eq!(cw.selection.active(), 2);
        assert_eq!(cw.symbol, v);
    }

    #[test]
    fn detect_sm_reduces_to_detect_as_for_single_column() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        for trial in 0..200 {
            let mut rng = RngStream::new(23, trial).rng();
            let h = draw_channel::<f64, _>(3, 1, &mut rng).unwrap();
            let w = draw_noise::<f64, _>(3, 0.8, &mut rng).unwrap();
            let v = c.point((trial % 4) as usize);
            let y: Vec<_> = h
                .column(0)
                .iter()
                .zip(w.entries())
                .map(|(hi, wi)| hi * v + wi)
                .collect();
            let sym = detect_as(&y, h.column(0), &c).unwrap();
            let joint = detect_sm(&y, &h, &c).unwrap();
            assert_eq!(joint.selection.active(), 0);
            assert_eq!(joint.symbol, sym);
        }
    }

    #[test]
    fn detect_scaling_invariance() {
        let c = Constellation::<f64>::new(Scheme::Qam8);
        for trial in 0..100 {
            let mut rng = RngStream::new(24, trial).rng();
            let h = draw_channel::<f64, _>(2, 4, &mut rng).unwrap();
            let w = draw_noise::<f64, _>(2, 1.5, &mut rng).unwrap();
            let v = c.point((trial % 8) as usize);
            let y: Vec<_> = h
                .column(1)
                .iter()
                .zip(w.entries())
                .map(|(hi, wi)| hi * v + wi)
                .collect();
            let a = detect_sm(&y, &h, &c).unwrap();

            let k = 3.7f64;
            let ys: Vec<_> = y.iter().map(|yi| yi * k).collect();
            let scaled: Vec<_> = (0..4)
                .flat_map(|n| h.column(n).iter().map(move |e| e * k))
                .collect();
            let hs = ChannelMatrix::from_columns(2, 4, scaled).unwrap();
            let b = detect_sm(&ys, &hs, &c).unwrap();
            assert_eq!(a.bits, b.bits);
        }
    }

    #[test]
    fn detect_dimension_errors() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        let mut rng = RngStream::new(25, 0).rng();
        let h = draw_channel::<f64, _>(4, 2, &mut rng).unwrap();
        let y = vec![Complex64::new(0.0, 0.0); 3];
        assert!(detect_sm(&y, &h, &c).is_err());
        assert!(detect_as(&y, h.column(0), &c).is_err());
        assert!(detect_as::<f64>(&[], &[], &c).is_err());
    }

    #[test]
    fn noiseless_round_trip_all_codewords() {
        let c = Constellation::<f64>::new(Scheme::Qpsk);
        let mut rng = RngStream::new(26, 0).rng();
        let h = draw_channel::<f64, _>(4, 8, &mut rng).unwrap();
        for v in 0..(8 * 4) as u32 {
            let word = BitWord::new(v, 5).unwrap();
            let sent = sm_encode_word(word, 8, &c).unwrap();
            let y: Vec<_> = h
                .column(sent.selection.active())
                .iter()
                .map(|hi| hi * sent.symbol)
                .collect();
            let got = detect_sm(&y, &h, &c).unwrap();
            assert_eq!(got.bits, word);
        }
    }
}
