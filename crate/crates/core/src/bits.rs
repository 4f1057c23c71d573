//! Bit-string conventions for points of `{0,1}^n`.
//!
//! A point is stored in a `u64`. Position `i` (1-based, left to right in the
//! printed string) lives in bit `n - i`, so `format(x, n)` is the ordinary
//! zero-padded binary rendering and position 1 is the most significant bit.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest dimension a point can have.
pub const MAX_BITS: u32 = 63;

pub fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn weight(x: u64) -> u32 {
    x.count_ones()
}

/// Inner product `x . y` over `Z_2`.
pub fn dot(x: u64, y: u64) -> u32 {
    (x & y).count_ones() & 1
}

/// Bit mask of 1-based positions.
pub fn positions_mask(n: u32, positions: &[u32]) -> Result<u64> {
    let mut m = 0u64;
    for &p in positions {
        if p == 0 || p > n {
            return Err(Error::domain(alloc::format!(
                "position {p} outside 1..={n}"
            )));
        }
        m |= 1u64 << (n - p);
    }
    Ok(m)
}

pub fn format(x: u64, n: u32) -> String {
    (1..=n)
        .map(|i| if (x >> (n - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse(s: &str) -> Result<(u64, u32)> {
    let n = s.len() as u32;
    if n > MAX_BITS {
        return Err(Error::domain("bit string longer than 63 characters"));
    }
    let mut x = 0u64;
    for c in s.chars() {
        x <<= 1;
        match c {
            '0' => {}
            '1' => x |= 1,
            _ => return Err(Error::domain(alloc::format!("invalid bit '{c}'"))),
        }
    }
    Ok((x, n))
}

/// Gathers the bits of `x` at `positions`, first listed position becoming
/// the most significant bit of the result.
pub fn gather(x: u64, n: u32, positions: &[u32]) -> u64 {
    positions
        .iter()
        .fold(0u64, |acc, &p| (acc << 1) | ((x >> (n - p)) & 1))
}

/// All points of `{0,1}^n` with weight exactly `r`, ascending.
pub fn sphere_points(n: u32, r: u32) -> Vec<u64> {
    (0..1u64 << n).filter(|&x| weight(x) == r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_is_msb_first() {
        assert_eq!(format(0b101, 3), "101");
        assert_eq!(format(1, 4), "0001");
        assert_eq!(parse("0110").unwrap(), (0b0110, 4));
        assert!(parse("01a").is_err());
    }

    #[test]
    fn position_masks() {
        assert_eq!(positions_mask(3, &[1, 3]).unwrap(), 0b101);
        assert!(positions_mask(3, &[4]).is_err());
        assert_eq!(gather(0b1100, 4, &[2, 4]), 0b10);
        assert_eq!(gather(0b1100, 4, &[4, 2]), 0b01);
    }
}
