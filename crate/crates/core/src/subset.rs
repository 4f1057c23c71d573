//! Declarative descriptions of hidden subsets of `{0,1}^n`.

use alloc::vec::Vec;

use crate::bits::{self, dot, weight};
use crate::error::{Error, Result};

/// Largest dimension for which a subset is materialised point by point.
pub const MAX_EXPLICIT_DIMENSION: u32 = 20;

/// A hidden subset `S` of `{0,1}^n`.
///
/// Bit positions are 1-based and follow [`crate::bits`]: position 1 is the
/// leftmost character and the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetKind {
    /// An explicit non-empty list of points.
    Explicit(Vec<u64>),
    /// All points of Hamming weight `r`, `r <= n/2`.
    Sphere(u32),
    /// All points of weight at most `r`, `r <= n`.
    Ball(u32),
    /// Points where a non-constant function of the variables `vars` is 1.
    /// `table[i]` is the value on the assignment whose bits, read with the
    /// first listed variable as most significant, spell `i`.
    Junta { vars: Vec<u32>, table: Vec<bool> },
    /// Points with odd parity on the non-empty position set `T`.
    ParitySet(Vec<u32>),
    /// Points with `t . x_[k] + f(x_{k+1..n}) = 1`, where `t` is a `k`-bit
    /// string and `f` has a truth table indexed by the trailing `n - k`
    /// bits read as an integer.
    GeneralisedParity {
        k: u32,
        t: u64,
        suffix_table: Vec<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSpec {
    n: u32,
    kind: SubsetKind,
}

impl SubsetSpec {
    pub fn new(n: u32, kind: SubsetKind) -> Result<Self> {
        if n == 0 || n > bits::MAX_BITS {
            return Err(Error::domain(alloc::format!(
                "dimension {n} outside 1..=63"
            )));
        }
        match &kind {
            SubsetKind::Explicit(points) => {
                if points.is_empty() {
                    return Err(Error::domain("explicit subset is empty"));
                }
                if let Some(p) = points.iter().find(|&&p| p > bits::mask(n)) {
                    return Err(Error::domain(alloc::format!(
                        "point {p} is not an {n}-bit string"
                    )));
                }
            }
            SubsetKind::Sphere(r) => {
                if 2 * r > n {
                    return Err(Error::domain(alloc::format!(
                        "sphere radius {r} exceeds n/2; S_r and S_(n-r) give the same states"
                    )));
                }
            }
            SubsetKind::Ball(r) => {
                if *r > n {
                    return Err(Error::domain(alloc::format!(
                        "ball radius {r} exceeds n = {n}"
                    )));
                }
            }
            SubsetKind::Junta { vars, table } => {
                bits::positions_mask(n, vars)?;
                if has_duplicates(vars) {
                    return Err(Error::domain("junta variables repeat"));
                }
                if vars.len() > 20 || table.len() != 1usize << vars.len() {
                    return Err(Error::domain("junta truth table must have 2^|T| entries"));
                }
                if table.iter().all(|&b| b) || table.iter().all(|&b| !b) {
                    return Err(Error::domain("junta function is constant"));
                }
            }
            SubsetKind::ParitySet(positions) => {
                if positions.is_empty() {
                    return Err(Error::domain("parity set needs a non-empty T"));
                }
                bits::positions_mask(n, positions)?;
            }
            SubsetKind::GeneralisedParity { k, t, suffix_table } => {
                if *k == 0 || *k > n {
                    return Err(Error::domain("prefix length k must lie in 1..=n"));
                }
                if *t > bits::mask(*k) {
                    return Err(Error::domain("t is longer than k bits"));
                }
                let tail = n - k;
                if tail > MAX_EXPLICIT_DIMENSION {
                    return Err(Error::domain("suffix truth table too large"));
                }
                if suffix_table.len() != 1usize << tail {
                    return Err(Error::domain(
                        "suffix truth table must have 2^(n-k) entries",
                    ));
                }
                if *t == 0 && suffix_table.iter().all(|&b| !b) {
                    return Err(Error::domain("generalised parity set is empty"));
                }
            }
        }
        Ok(SubsetSpec { n, kind })
    }

    pub fn sphere(n: u32, r: u32) -> Result<Self> {
        Self::new(n, SubsetKind::Sphere(r))
    }

    pub fn ball(n: u32, r: u32) -> Result<Self> {
        Self::new(n, SubsetKind::Ball(r))
    }

    pub fn explicit(n: u32, points: Vec<u64>) -> Result<Self> {
        Self::new(n, SubsetKind::Explicit(points))
    }

    pub fn parity_set(n: u32, positions: Vec<u32>) -> Result<Self> {
        Self::new(n, SubsetKind::ParitySet(positions))
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> &SubsetKind {
        &self.kind
    }

    /// Membership of a single point.
    pub fn contains(&self, x: u64) -> bool {
        let n = self.n;
        if x > bits::mask(n) {
            return false;
        }
        match &self.kind {
            SubsetKind::Explicit(points) => points.contains(&x),
            SubsetKind::Sphere(r) => weight(x) == *r,
            SubsetKind::Ball(r) => weight(x) <= *r,
            SubsetKind::Junta { vars, table } => table[bits::gather(x, n, vars) as usize],
            SubsetKind::ParitySet(positions) => {
                // validated in `new`
                let t = bits::positions_mask(n, positions).unwrap_or(0);
                dot(x, t) == 1
            }
            SubsetKind::GeneralisedParity { k, t, suffix_table } => {
                let tail = n - k;
                let prefix = x >> tail;
                let suffix = x & bits::mask(tail);
                (dot(prefix, *t) == 1) ^ suffix_table[suffix as usize]
            }
        }
    }

    /// The parity vector `t` of a [`SubsetKind::ParitySet`].
    pub fn parity_vector(&self) -> Option<u64> {
        match &self.kind {
            SubsetKind::ParitySet(positions) => bits::positions_mask(self.n, positions).ok(),
            _ => None,
        }
    }

    /// Mask of the variables a junta depends on.
    pub fn junta_mask(&self) -> Option<u64> {
        match &self.kind {
            SubsetKind::Junta { vars, .. } => bits::positions_mask(self.n, vars).ok(),
            _ => None,
        }
    }

    /// All points of `S`, sorted and deduplicated.
    pub fn materialise(&self) -> Result<Vec<u64>> {
        if let SubsetKind::Explicit(points) = &self.kind {
            let mut pts = points.clone();
            pts.sort_unstable();
            pts.dedup();
            return Ok(pts);
        }
        if self.n > MAX_EXPLICIT_DIMENSION {
            return Err(Error::Capacity {
                what: "materialised dimension",
                requested: self.n as u64,
                limit: MAX_EXPLICIT_DIMENSION as u64,
            });
        }
        let pts: Vec<u64> = (0..1u64 << self.n).filter(|&x| self.contains(x)).collect();
        if pts.is_empty() {
            return Err(Error::domain("subset is empty"));
        }
        Ok(pts)
    }
}

fn has_duplicates(vars: &[u32]) -> bool {
    vars.iter()
        .enumerate()
        .any(|(i, v)| vars[i + 1..].contains(v))
}
