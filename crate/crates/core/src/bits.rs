//! Compact bit strings.
//!
//! Payloads here are at most a handful of bits (symbol labels plus antenna
//! index bits), so a bit string is stored as a packed word with an explicit
//! length. Bit order is MSB-first: `bits[0]` is the most significant bit of
//! `value`.

use std::fmt;

use crate::error::{invalid_arg, Result};

/// A bit string of up to 32 bits, packed MSB-first.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    value: u32,
    len: u32,
}

impl BitWord {
    pub fn new(value: u32, len: u32) -> Result<Self> {
        if len > 32 {
            return Err(invalid_arg!("bit string length {len} exceeds 32"));
        }
        if len < 32 && value >> len != 0 {
            return Err(invalid_arg!("value {value:#b} does not fit in {len} bits"));
        }
        Ok(Self { value, len })
    }

    /// Parses a slice of 0/1 values, MSB first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > 32 {
            return Err(invalid_arg!("bit string length {} exceeds 32", bits.len()));
        }
        let mut value = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(invalid_arg!("bit value {b} is not 0 or 1"));
            }
            value = (value << 1) | u32::from(b);
        }
        Ok(Self {
            value,
            len: bits.len() as u32,
        })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Expands back to a 0/1 vector, MSB first.
    pub fn bits(&self) -> Vec<u8> {
        (0..self.len)
            .rev()
            .map(|i| ((self.value >> i) & 1) as u8)
            .collect()
    }

    /// Number of differing bits. Both words must have the same length.
    pub fn hamming(self, other: Self) -> Result<u32> {
        if self.len != other.len {
            return Err(invalid_arg!(
                "hamming distance of bit strings with lengths {} and {}",
                self.len,
                other.len
            ));
        }
        Ok((self.value ^ other.value).count_ones())
    }

    /// `self` followed by `other`.
    pub fn concat(self, other: Self) -> Result<Self> {
        Self::new(
            (self.value << other.len) | other.value,
            self.len + other.len,
        )
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord(\"{self}\")")
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            write!(f, "{}", (self.value >> i) & 1)?;
        }
        Ok(())
    }
}
