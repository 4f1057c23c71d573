//! Exact Krawtchouk polynomials `K_r^n(x)`.
//!
//! `K_r^n(x)` is the character sum of the weight-`r` sphere of `{0,1}^n`
//! evaluated at any point of weight `x`:
//!
//! ```text
//! K_r^n(x) = sum_{|y| = r} (-1)^{x.y} = sum_i (-1)^i C(x, i) C(n - x, r - i)
//! ```
//!
//! Three independent evaluation routes are provided (direct alternating
//! sum, Pascal-style table in `n`, generating-function expansion) together
//! with the recurrences and the partial-sum identity used for Hamming balls.
//! Everything is exact.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{binomial, sign_pow, Integer};

/// `K_r^n(x)` by the alternating binomial sum.
pub fn kraw_direct(n: u32, r: u32, x: u32) -> Result<Integer> {
    if r > n || x > n {
        return Err(Error::domain(alloc::format!(
            "K_r^n(x) needs 0 <= r, x <= n (n={n}, r={r}, x={x})"
        )));
    }
    Ok(kraw_sum(n, r, x))
}

/// Alternating sum without range checks; vanishes for `r > n`.
pub(crate) fn kraw_sum(n: u32, r: u32, x: u32) -> Integer {
    let (n, r, x) = (n as u64, r as u64, x as u64);
    let mut acc = Integer::zero();
    for i in 0..=r.min(x) {
        if r - i > n - x {
            continue;
        }
        let term = binomial(x, i) * binomial(n - x, r - i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Full table of `K_r^n(x)` for `0 <= r, x <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KrawtchoukTable {
    n: u32,
    // row-major: entries[r * (n + 1) + x]
    entries: Vec<Integer>,
}

impl KrawtchoukTable {
    /// The `n = 0` table: the single entry `K_0^0(0) = 1`.
    pub fn base() -> Self {
        KrawtchoukTable {
            n: 0,
            entries: vec![Integer::from(1)],
        }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn get(&self, r: u32, x: u32) -> Option<&Integer> {
        if r > self.n || x > self.n {
            return None;
        }
        self.entries.get((r * (self.n + 1) + x) as usize)
    }

    /// Like [`get`](Self::get) but zero outside the table.
    fn at(&self, r: i64, x: i64) -> Integer {
        if r < 0 || x < 0 {
            return Integer::zero();
        }
        self.get(r as u32, x as u32)
            .cloned()
            .unwrap_or_else(Integer::zero)
    }

    /// Table for dimension `n + 1`.
    ///
    /// Appending a coordinate on which the evaluation point is 0 gives
    /// `K_r^{n+1}(x) = K_r^n(x) + K_{r-1}^n(x)`; appending one on which it
    /// is 1 gives `K_r^{n+1}(x) = K_r^n(x-1) - K_{r-1}^n(x-1)`. The first
    /// fills `x <= n`, the second the last column `x = n + 1`.
    pub fn extend(&self) -> Self {
        let m = self.n + 1;
        let width = (m + 1) as usize;
        let mut entries = vec![Integer::zero(); width * width];
        for r in 0..=m as i64 {
            for x in 0..=m as i64 {
                let v = if x < m as i64 {
                    self.at(r, x) + self.at(r - 1, x)
                } else {
                    self.at(r, x - 1) - self.at(r - 1, x - 1)
                };
                entries[r as usize * width + x as usize] = v;
            }
        }
        KrawtchoukTable { n: m, entries }
    }

    pub fn row(&self, r: u32) -> &[Integer] {
        let w = (self.n + 1) as usize;
        &self.entries[r as usize * w..(r as usize + 1) * w]
    }
}

/// Builds the table for dimension `n` from the `n = 0` base by repeated
/// [`KrawtchoukTable::extend`].
pub fn kraw_table(n: u32) -> KrawtchoukTable {
    (0..n).fold(KrawtchoukTable::base(), |t, _| t.extend())
}

/// Coefficients of `(1 - z)^x (1 + z)^{n - x}`; entry `r` is `K_r^n(x)`.
pub fn kraw_gf_coefficients(n: u32, x: u32) -> Result<Vec<Integer>> {
    if x > n {
        return Err(Error::domain(alloc::format!("weight {x} exceeds n = {n}")));
    }
    let mut poly = vec![Integer::from(1)];
    let mut multiply = |sign: i32| {
        let mut next = vec![Integer::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            if sign > 0 {
                next[i + 1] += c;
            } else {
                next[i + 1] -= c;
            }
        }
        poly = next;
    };
    for _ in 0..x {
        multiply(-1);
    }
    for _ in x..n {
        multiply(1);
    }
    Ok(poly)
}

/// `K_r^n(x)` for every `x` at a fixed degree, via the three-term
/// recurrence in `x`. Costs `O(n)` big-integer operations, so it stays
/// usable where the full table does not.
pub fn kraw_degree_row(n: u32, r: u32) -> Result<Vec<Integer>> {
    if r > n {
        return Err(Error::domain(alloc::format!("degree {r} exceeds n = {n}")));
    }
    let nn = n as i64;
    let rr = r as i64;
    let mut row = Vec::with_capacity(n as usize + 1);
    row.push(binomial(n as u64, r as u64));
    if n == 0 {
        return Ok(row);
    }
    // K_r(1) = C(n-1, r) - C(n-1, r-1)
    let k1 = binomial(n as u64 - 1, r as u64)
        - if r == 0 {
            Integer::zero()
        } else {
            binomial(n as u64 - 1, r as u64 - 1)
        };
    row.push(k1);
    for x in 1..nn {
        // (n - x) K_r(x + 1) = (n - 2r) K_r(x) - x K_r(x - 1)
        let xi = x as usize;
        let num = Integer::from(nn - 2 * rr) * &row[xi] - Integer::from(x) * &row[xi - 1];
        row.push(num / Integer::from(nn - x));
    }
    Ok(row)
}

/// Both sides of the partial-sum identity
/// `sum_{s <= r} K_s^n(x) = K_r^{n-1}(x - 1)`, valid for `x >= 1`.
pub fn kraw_ball_identity(n: u32, r: u32, x: u32) -> Result<(Integer, Integer)> {
    if x == 0 {
        return Err(Error::domain("ball identity needs x >= 1"));
    }
    if r > n || x > n {
        return Err(Error::domain(alloc::format!(
            "ball identity needs r, x <= n (n={n}, r={r}, x={x})"
        )));
    }
    let lhs = (0..=r).map(|s| kraw_sum(n, s, x)).sum();
    let rhs = kraw_sum(n - 1, r, x - 1);
    Ok((lhs, rhs))
}

/// Residuals of the two recurrences:
///
/// * three-term: `x K_r(x-1) - (n - 2r) K_r(x) + (n - x) K_r(x+1)`, for `1 <= x <= n-1`;
/// * mixed: `K_r(x-1) - K_{r-1}(x) - K_{r-1}(x-1) - K_r(x)`, for `x, r >= 1`.
///
/// A residual is `None` where its recurrence is not defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceResiduals {
    pub three_term: Option<Integer>,
    pub mixed: Option<Integer>,
}

pub fn kraw_recurrence_residual(n: u32, r: u32, x: u32) -> Result<RecurrenceResiduals> {
    if r > n || x > n {
        return Err(Error::domain(alloc::format!(
            "recurrence indices out of range (n={n}, r={r}, x={x})"
        )));
    }
    let k = |r: u32, x: u32| kraw_sum(n, r, x);
    let three_term = (x >= 1 && x < n).then(|| {
        Integer::from(x) * k(r, x - 1) - Integer::from(n as i64 - 2 * r as i64) * k(r, x)
            + Integer::from(n - x) * k(r, x + 1)
    });
    let mixed = (x >= 1 && r >= 1).then(|| k(r, x - 1) - k(r - 1, x) - k(r - 1, x - 1) - k(r, x));
    if three_term.is_none() && mixed.is_none() {
        return Err(Error::domain(alloc::format!(
            "no recurrence is defined at (n={n}, r={r}, x={x})"
        )));
    }
    Ok(RecurrenceResiduals { three_term, mixed })
}

/// Closed form of `K_r^n(n/2)` for even `n`: zero for odd `r`, otherwise
/// `(-1)^{r/2} C(n/2, r/2)`.
pub fn kraw_half_weight(n: u32, r: u32) -> Result<Integer> {
    if n % 2 != 0 || r > n {
        return Err(Error::domain("half-weight value needs even n and r <= n"));
    }
    if r % 2 == 1 {
        return Ok(Integer::zero());
    }
    Ok(sign_pow(r as u64 / 2) * binomial(n as u64 / 2, r as u64 / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{dot, weight};

    /// Character sum over the explicit sphere; shares no code with the
    /// routes under test.
    fn brute(n: u32, r: u32, x: u32) -> i64 {
        let point = (1u64 << x) - 1;
        (0..1u64 << n)
            .filter(|&y| weight(y) == r)
            .map(|y| if dot(point, y) == 0 { 1 } else { -1 })
            .sum()
    }

    #[test]
    fn direct_examples() {
        assert_eq!(kraw_direct(5, 0, 3).unwrap(), Integer::from(1));
        assert_eq!(kraw_direct(7, 3, 0).unwrap(), Integer::from(35));
        assert_eq!(kraw_direct(4, 2, 2).unwrap(), Integer::from(brute(4, 2, 2)));
        assert_eq!(kraw_direct(4, 2, 2).unwrap(), Integer::from(-2));
        assert!(kraw_direct(4, 5, 0).is_err());
        assert!(kraw_direct(4, 0, 5).is_err());
    }

    #[test]
    fn table_examples() {
        let t0 = kraw_table(0);
        assert_eq!(t0.get(0, 0), Some(&Integer::from(1)));
        assert_eq!(kraw_table(4).get(2, 2), Some(&Integer::from(-2)));
        assert_eq!(brute(6, 3, 3), 0);
        assert_eq!(kraw_table(6).get(3, 3), Some(&Integer::zero()));
    }

    #[test]
    fn table_matches_brute_force() {
        for n in 0..=10 {
            let t = kraw_table(n);
            for r in 0..=n {
                for x in 0..=n {
                    assert_eq!(
                        t.get(r, x).unwrap(),
                        &Integer::from(brute(n, r, x)),
                        "{n} {r} {x}"
                    );
                }
            }
        }
    }

    #[test]
    fn generating_function_examples() {
        let ints = |v: &[i64]| v.iter().map(|&c| Integer::from(c)).collect::<Vec<_>>();
        assert_eq!(kraw_gf_coefficients(2, 1).unwrap(), ints(&[1, 0, -1]));
        assert_eq!(kraw_gf_coefficients(3, 0).unwrap(), ints(&[1, 3, 3, 1]));
        assert_eq!(kraw_gf_coefficients(4, 2).unwrap(), ints(&[1, 0, -2, 0, 1]));
        assert!(kraw_gf_coefficients(2, 3).is_err());
    }

    #[test]
    fn degree_row_matches_table() {
        for n in 0..=16 {
            let t = kraw_table(n);
            for r in 0..=n {
                assert_eq!(kraw_degree_row(n, r).unwrap(), t.row(r), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn ball_identity_examples() {
        let (l, r) = kraw_ball_identity(3, 3, 1).unwrap();
        assert_eq!((l, r), (Integer::zero(), Integer::zero()));
        let (l, r) = kraw_ball_identity(4, 0, 2).unwrap();
        assert_eq!((l, r), (Integer::from(1), Integer::from(1)));
        let (l, r) = kraw_ball_identity(5, 2, 3).unwrap();
        let brute_lhs: i64 = (0..=2).map(|s| brute(5, s, 3)).sum();
        assert_eq!(l, Integer::from(brute_lhs));
        assert_eq!(r, Integer::from(brute(4, 2, 2)));
        assert_eq!(l, r);
        assert!(kraw_ball_identity(4, 1, 0).is_err());
    }

    #[test]
    fn recurrence_examples() {
        for (n, r, x) in [(4, 2, 2), (6, 1, 3), (3, 3, 1)] {
            let res = kraw_recurrence_residual(n, r, x).unwrap();
            assert_eq!(res.three_term, Some(Integer::zero()));
            assert_eq!(res.mixed, Some(Integer::zero()));
        }
        let edge = kraw_recurrence_residual(4, 1, 4).unwrap();
        assert_eq!(edge.three_term, None);
        assert_eq!(edge.mixed, Some(Integer::zero()));
        assert!(kraw_recurrence_residual(4, 0, 0).is_err());
        assert!(kraw_recurrence_residual(4, 5, 1).is_err());
    }

    #[test]
    fn half_weight_closed_form() {
        for n in (2..=20).step_by(2) {
            let t = kraw_table(n);
            for r in 0..=n {
                assert_eq!(&kraw_half_weight(n, r).unwrap(), t.get(r, n / 2).unwrap());
            }
        }
        assert!(kraw_half_weight(5, 1).is_err());
    }
}
