//! In-place fast Walsh-Hadamard transform.

use core::ops::{Add, Sub};

/// Unnormalised transform: `data[z] <- sum_y (-1)^{z.y} data[y]`.
///
/// `data.len()` must be a power of two. Runs in `O(n 2^n)`.
pub fn fwht<T>(data: &mut [T])
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    assert!(
        len.is_power_of_two(),
        "transform length must be a power of two"
    );
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let a = data[i].clone();
                let b = data[i + half].clone();
                data[i] = a.clone() + b.clone();
                data[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

/// Normalised transform on floats, scaling by `2^{-n/2}`; an involution.
pub fn fwht_normalised(data: &mut [f64]) {
    fwht(data);
    let scale = 1.0 / libm::sqrt(data.len() as f64);
    for v in data.iter_mut() {
        *v *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::dot;
    use alloc::vec::Vec;

    fn naive(data: &[i64]) -> Vec<i64> {
        (0..data.len() as u64)
            .map(|z| {
                (0..data.len() as u64)
                    .map(|y| {
                        if dot(z, y) == 0 {
                            data[y as usize]
                        } else {
                            -data[y as usize]
                        }
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_character_sum() {
        let data: Vec<i64> = (0..16).map(|i| (i * 7 % 5) as i64 - 2).collect();
        let mut fast = data.clone();
        fwht(&mut fast);
        assert_eq!(fast, naive(&data));
    }

    #[test]
    fn normalised_is_involution() {
        let data: Vec<f64> = (0..32).map(|i| libm::sin(i as f64)).collect();
        let mut twice = data.clone();
        fwht_normalised(&mut twice);
        fwht_normalised(&mut twice);
        for (a, b) in data.iter().zip(&twice) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
