//! Helpers for subgraph-local bitstrings packed into a `u64`.
//!
//! Bit `v` of the word is the side of local vertex `v`. Textual form writes
//! vertex 0 first, so `"110"` is the word `0b011`.

use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 63;

pub fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub fn flip(word: u64, width: usize) -> u64 {
    !word & mask(width)
}

pub fn bit(word: u64, v: usize) -> bool {
    (word >> v) & 1 == 1
}

/// Sort key equal to the numeric value of the textual form.
pub fn order_key(word: u64, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        word.reverse_bits() >> (64 - width)
    }
}

pub fn to_string(word: u64, width: usize) -> String {
    (0..width)
        .map(|v| if bit(word, v) { '1' } else { '0' })
        .collect()
}

pub fn parse(s: &str) -> Result<(u64, usize)> {
    if s.len() > MAX_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "bitstring of {} bits exceeds {MAX_WIDTH}",
            s.len()
        )));
    }
    let mut word = 0u64;
    for (v, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => word |= 1 << v,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "invalid bit {other:?} in {s:?}"
                )))
            }
        }
    }
    Ok((word, s.len()))
}
