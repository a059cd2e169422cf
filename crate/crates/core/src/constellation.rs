//! Modulation alphabets with bit labeling.
//!
//! Two alphabets are supported: QPSK with points `{+1, -1, +i, -i}` and a
//! rectangular 8QAM built from the `{±1, ±3} × {±1}` grid scaled to unit mean
//! energy. Labels are Gray codes — by phase for QPSK, by grid position for
//! 8QAM — so symbol errors between neighbouring points cost one bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::bits::BitWord;
use crate::error::{invalid_arg, Error, Result};
use crate::num::Real;

/// Modulation scheme selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Qpsk,
    Qam8,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Qpsk => "qpsk",
            Scheme::Qam8 => "8qam",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" => Ok(Scheme::Qpsk),
            "8qam" | "qam8" => Ok(Scheme::Qam8),
            other => Err(invalid_arg!("unknown constellation \"{other}\"")),
        }
    }
}

/// A symbol alphabet with unit mean energy and a Gray bit labeling.
///
/// `labels[i]` is the packed MSB-first bit label of `points[i]`;
/// `label_to_point` inverts that map.
#[derive(Clone, Debug)]
pub struct Constellation<T> {
    scheme: Scheme,
    points: Vec<Complex<T>>,
    labels: Vec<u32>,
    label_to_point: Vec<usize>,
    bits_per_symbol: u32,
}

impl<T: Real> Constellation<T> {
    /// Builds the named alphabet. Total over the scheme enum.
    pub fn new(scheme: Scheme) -> Self {
        let one = T::one();
        let zero = T::zero();
        let (points, labels): (Vec<Complex<T>>, Vec<u32>) = match scheme {
            // Phase order +1, +i, -1, -i with the 2-bit Gray sequence.
            Scheme::Qpsk => (
                vec![
                    Complex::new(one, zero),
                    Complex::new(zero, one),
                    Complex::new(-one, zero),
                    Complex::new(zero, -one),
                ],
                vec![0b00, 0b01, 0b11, 0b10],
            ),
            // Rows im = +1, -1; columns re = -3, -1, +1, +3; scaled so the
            // mean point energy (4*2 + 4*10)/8 = 6 becomes 1.
            Scheme::Qam8 => {
                let s = T::from_f64_(6.0).sqrt().recip();
                let col_re = [-3.0, -1.0, 1.0, 3.0];
                let col_gray = [0b00u32, 0b01, 0b11, 0b10];
                let mut points = Vec::with_capacity(8);
                let mut labels = Vec::with_capacity(8);
                for (row, im) in [1.0, -1.0].iter().enumerate() {
                    for (c, re) in col_re.iter().enumerate() {
                        points.push(Complex::new(T::from_f64_(*re) * s, T::from_f64_(*im) * s));
                        labels.push((col_gray[c] << 1) | row as u32);
                    }
                }
                (points, labels)
            }
        };

        let bits_per_symbol = points.len().trailing_zeros();
        let mut label_to_point = vec![usize::MAX; points.len()];
        for (i, &l) in labels.iter().enumerate() {
            label_to_point[l as usize] = i;
        }
        debug_assert!(label_to_point.iter().all(|&i| i != usize::MAX));

        Self {
            scheme,
            points,
            labels,
            label_to_point,
            bits_per_symbol,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    pub fn point(&self, index: usize) -> Complex<T> {
        self.points[index]
    }

    /// Packed label of a point index.
    pub fn label_of(&self, index: usize) -> BitWord {
        BitWord::new(self.labels[index], self.bits_per_symbol).expect("label fits")
    }

    /// Point index for a packed label value. Hot-path inverse of `label_of`.
    pub fn point_index_of_label(&self, label: u32) -> usize {
        self.label_to_point[label as usize]
    }

    /// Maps a bit string of length `bits_per_symbol` to its symbol.
    pub fn map_bits(&self, bits: &[u8]) -> Result<Complex<T>> {
        if bits.len() != self.bits_per_symbol as usize {
            return Err(invalid_arg!(
                "expected {} bits for {}, got {}",
                self.bits_per_symbol,
                self.scheme,
                bits.len()
            ));
        }
        let word = BitWord::from_bits(bits)?;
        Ok(self.points[self.point_index_of_label(word.value())])
    }

    /// Label of a symbol that is exactly one of the alphabet points.
    ///
    /// Nearest-point quantization belongs to the detector; this is an exact
    /// identity lookup.
    pub fn demap(&self, symbol: Complex<T>) -> Result<Vec<u8>> {
        match self.points.iter().position(|&p| p == symbol) {
            Some(i) => Ok(self.label_of(i).bits()),
            None => Err(invalid_arg!("symbol {symbol} is not an alphabet point")),
        }
    }
}
