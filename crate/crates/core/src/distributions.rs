//! Exact Fourier-sampling distributions.
//!
//! Measuring `H^{\otimes n} |S + x>` yields `z` with probability
//!
//! ```text
//! pi_S(z) = (sum_{y in S} (-1)^{y.z})^2 / (|S| 2^n)
//! ```
//!
//! independently of the shift `x`. For spheres and balls the law depends on
//! `|z|` only and is kept as a [`WeightDistribution`] over `0..=n`, which
//! scales to dimensions far beyond what a state vector can hold.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::bits::{self, weight};
use crate::error::{Error, Result};
use crate::exact::{self, binomial, binomial_row, pow2, Integer, Rational};
use crate::krawtchouk::kraw_degree_row;
use crate::subset::{SubsetSpec, MAX_EXPLICIT_DIMENSION};
use crate::walsh::fwht;

/// `pi_S` over all of `{0,1}^n`, stored as integer numerators over the
/// common denominator `|S| 2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeDistribution {
    n: u32,
    numerators: Vec<u64>,
    denominator: u64,
}

impl CubeDistribution {
    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn prob(&self, z: u64) -> Rational {
        exact::ratio(self.numerators[z as usize], self.denominator)
    }

    pub fn prob_f64(&self, z: u64) -> f64 {
        self.numerators[z as usize] as f64 / self.denominator as f64
    }

    /// Points with non-zero probability.
    pub fn support(&self) -> Vec<u64> {
        (0..self.numerators.len() as u64)
            .filter(|&z| self.numerators[z as usize] != 0)
            .collect()
    }

    /// Probability mass per Hamming weight.
    pub fn weight_collapse(&self) -> WeightDistribution {
        let mut nums = vec![Integer::zero(); self.n as usize + 1];
        for (z, &v) in self.numerators.iter().enumerate() {
            nums[weight(z as u64) as usize] += v;
        }
        WeightDistribution {
            n: self.n,
            numerators: nums,
            denominator: Integer::from(self.denominator),
        }
    }

    /// Sum of probabilities is exactly one.
    pub fn is_normalised(&self) -> bool {
        self.numerators.iter().map(|&v| v as u128).sum::<u128>() == self.denominator as u128
    }
}

/// `pi_S` for a subset described by `spec`.
pub fn pi_subset(spec: &SubsetSpec) -> Result<CubeDistribution> {
    if spec.dimension() > MAX_EXPLICIT_DIMENSION {
        return Err(Error::Capacity {
            what: "cube dimension",
            requested: spec.dimension() as u64,
            limit: MAX_EXPLICIT_DIMENSION as u64,
        });
    }
    pi_points(spec.dimension(), &spec.materialise()?)
}

/// `pi_S` for an explicit point list (duplicates ignored).
pub fn pi_points(n: u32, points: &[u64]) -> Result<CubeDistribution> {
    if n > MAX_EXPLICIT_DIMENSION {
        return Err(Error::Capacity {
            what: "cube dimension",
            requested: n as u64,
            limit: MAX_EXPLICIT_DIMENSION as u64,
        });
    }
    let sums = character_sums(n, points)?;
    let size = sums.size;
    let numerators = sums.values.iter().map(|&h| (h * h) as u64).collect();
    Ok(CubeDistribution {
        n,
        numerators,
        denominator: size << n,
    })
}

pub(crate) struct CharacterSums {
    pub values: Vec<i64>,
    pub size: u64,
}

/// `sum_{y in S} (-1)^{y.z}` for every `z`, exactly.
pub(crate) fn character_sums(n: u32, points: &[u64]) -> Result<CharacterSums> {
    let len = 1usize << n;
    let mut indicator = vec![0i64; len];
    for &p in points {
        if p > bits::mask(n) {
            return Err(Error::domain(alloc::format!(
                "point {p} is not an {n}-bit string"
            )));
        }
        indicator[p as usize] = 1;
    }
    let size = indicator.iter().filter(|&&v| v == 1).count() as u64;
    if size == 0 {
        return Err(Error::domain("subset is empty"));
    }
    fwht(&mut indicator);
    Ok(CharacterSums {
        values: indicator,
        size,
    })
}

/// A law on Hamming weights `0..=n`, as integer numerators over a common
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    n: u32,
    numerators: Vec<Integer>,
    denominator: Integer,
}

impl WeightDistribution {
    /// Builds and validates a distribution.
    pub fn new(numerators: Vec<Integer>, denominator: Integer) -> Result<Self> {
        if numerators.is_empty() {
            return Err(Error::domain("empty weight distribution"));
        }
        if !denominator.is_positive() || numerators.iter().any(|v| v.is_negative()) {
            return Err(Error::domain("weight distribution has negative entries"));
        }
        if numerators.iter().sum::<Integer>() != denominator {
            return Err(Error::domain("weight distribution does not sum to one"));
        }
        Ok(WeightDistribution {
            n: numerators.len() as u32 - 1,
            numerators,
            denominator,
        })
    }

    /// Point mass at weight `w`.
    pub fn point_mass(n: u32, w: u32) -> Result<Self> {
        if w > n {
            return Err(Error::domain("point mass outside 0..=n"));
        }
        let mut nums = vec![Integer::zero(); n as usize + 1];
        nums[w as usize] = Integer::from(1);
        Self::new(nums, Integer::from(1))
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn numerators(&self) -> &[Integer] {
        &self.numerators
    }

    pub fn denominator(&self) -> &Integer {
        &self.denominator
    }

    pub fn prob(&self, w: u32) -> Rational {
        Rational::new(
            self.numerators[w as usize].clone(),
            self.denominator.clone(),
        )
    }

    pub fn probs(&self) -> Vec<Rational> {
        (0..=self.n).map(|w| self.prob(w)).collect()
    }

    pub fn prob_f64(&self, w: u32) -> f64 {
        exact::quotient_to_f64(&self.numerators[w as usize], &self.denominator)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..=self.n).map(|w| self.prob_f64(w)).collect()
    }

    pub fn is_normalised(&self) -> bool {
        self.numerators.iter().all(|v| !v.is_negative())
            && self.numerators.iter().sum::<Integer>() == self.denominator
    }
}

/// Weight law of Fourier samples from the radius-`r` sphere:
/// `pi_r(x) = C(n, x) K_r(x)^2 / (C(n, r) 2^n)`.
pub fn pi_sphere(n: u32, r: u32) -> Result<WeightDistribution> {
    if 2 * r > n {
        return Err(Error::domain(alloc::format!(
            "sphere radius {r} exceeds n/2 for n = {n}"
        )));
    }
    let kraw = kraw_degree_row(n, r)?;
    let row = binomial_row(n as u64);
    let numerators = row.iter().zip(&kraw).map(|(c, k)| c * k * k).collect();
    let denominator = binomial(n as u64, r as u64) << n as u64;
    Ok(WeightDistribution {
        n,
        numerators,
        denominator,
    })
}

/// Weight law of Fourier samples from the radius-`r` ball.
///
/// For `x >= 1` the character sum is `K_r^{n-1}(x - 1)`; at `x = 0` it is
/// the ball size itself.
pub fn pi_ball(n: u32, r: u32) -> Result<WeightDistribution> {
    if n == 0 || r > n {
        return Err(Error::domain(alloc::format!(
            "ball radius {r} invalid for n = {n}"
        )));
    }
    let row = binomial_row(n as u64);
    let size: Integer = row[..=r as usize].iter().sum();
    let shifted = if r < n {
        kraw_degree_row(n - 1, r)?
    } else {
        vec![Integer::zero(); n as usize]
    };
    let mut numerators = Vec::with_capacity(n as usize + 1);
    numerators.push(&size * &size);
    for x in 1..=n as usize {
        let k = &shifted[x - 1];
        numerators.push(&row[x] * k * k);
    }
    let denominator = size << n as u64;
    Ok(WeightDistribution {
        n,
        numerators,
        denominator,
    })
}

/// Probabilities near the middle weight.
///
/// For even `n`: `center = pi_r(n/2)`, `flank = pi_r(n/2-1) + pi_r(n/2+1)`.
/// For odd `n`: `center` is absent and
/// `flank = pi_r((n-1)/2) + pi_r((n+1)/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleProbs {
    pub center: Option<Rational>,
    pub flank: Rational,
}

/// Closed forms for the middle-weight probabilities of a sphere.
pub fn closed_form_middle_probs(n: u32, r: u32) -> Result<MiddleProbs> {
    if n < 1 || 2 * r > n {
        return Err(Error::domain(alloc::format!(
            "need 1 <= n and r <= n/2 (n={n}, r={r})"
        )));
    }
    let (nn, rr) = (n as u64, r as u64);
    let cube = pow2(nn);
    let central = |a: u64| binomial(a, a / 2);
    if n % 2 == 0 {
        let (center, flank) = if r % 2 == 0 {
            let b = central(rr) * central(nn - rr);
            let d = Integer::from(nn - 2 * rr);
            let flank = Rational::new(
                Integer::from(2) * &d * &d * &b,
                &cube * Integer::from(nn * (nn + 2)),
            );
            (Rational::new(b, cube), flank)
        } else {
            let b = central(rr - 1) * central(nn - rr - 1);
            let flank = Rational::new(
                Integer::from(32 * rr * (nn - rr)) * b,
                cube * Integer::from(nn * (nn + 2)),
            );
            (Rational::zero(), flank)
        };
        Ok(MiddleProbs {
            center: Some(center),
            flank,
        })
    } else {
        let flank = if r % 2 == 0 {
            Rational::new(
                Integer::from(4 * (nn - rr)) * central(rr) * central(nn - rr - 1),
                cube * Integer::from(nn + 1),
            )
        } else {
            Rational::new(
                Integer::from(4 * rr) * central(rr - 1) * central(nn - rr),
                cube * Integer::from(nn + 1),
            )
        };
        Ok(MiddleProbs {
            center: None,
            flank,
        })
    }
}

/// The same middle-weight quantities read off an arbitrary weight law.
pub fn middle_probs(dist: &WeightDistribution) -> MiddleProbs {
    let n = dist.dimension();
    if n % 2 == 0 {
        let h = n / 2;
        let flank = if h >= 1 {
            dist.prob(h - 1) + dist.prob(h + 1)
        } else {
            Rational::zero()
        };
        MiddleProbs {
            center: Some(dist.prob(h)),
            flank,
        }
    } else {
        let h = (n - 1) / 2;
        MiddleProbs {
            center: None,
            flank: dist.prob(h) + dist.prob(h + 1),
        }
    }
}

fn central(a: u64) -> Integer {
    binomial(a, a / 2)
}

/// `pi_r(n/2) - pi_{r+2}(n/2)` in closed form, for even `n`, even `r`,
/// `r <= n/2 - 2`.
pub fn center_gap_even(n: u32, r: u32) -> Result<Rational> {
    if n % 2 != 0 || r % 2 != 0 || 2 * (r + 2) > n {
        return Err(Error::domain(alloc::format!(
            "center gap needs even n, even r, r <= n/2 - 2 (n={n}, r={r})"
        )));
    }
    let (nn, rr) = (n as u64, r as u64);
    Ok(Rational::new(
        Integer::from(nn - 2 * (rr + 1)) * central(rr) * central(nn - rr),
        pow2(nn) * Integer::from((nn - rr - 1) * (rr + 2)),
    ))
}

/// `p(r+2) - p(r)` with `p(r) = pi_r(n/2-1) + pi_r(n/2+1)`, for even `n`,
/// odd `r`, `r + 2 <= n/2`.
pub fn flank_gap_even(n: u32, r: u32) -> Result<Rational> {
    if n % 2 != 0 || r % 2 != 1 || 2 * (r + 2) > n {
        return Err(Error::domain(alloc::format!(
            "even flank gap needs even n, odd r, r + 2 <= n/2 (n={n}, r={r})"
        )));
    }
    let (nn, rr) = (n as u64, r as u64);
    Ok(Rational::new(
        Integer::from(32 * rr * (nn - 2 * (rr + 1))) * central(rr - 1) * central(nn - rr - 1),
        pow2(nn) * Integer::from(nn * (nn + 2) * (rr + 1)),
    ))
}

/// `p'(r+2) - p'(r)` with `p'(r) = pi_r((n-1)/2) + pi_r((n+1)/2)`, for odd
/// `n`, odd `r`, `r + 2 <= n/2`.
pub fn flank_gap_odd(n: u32, r: u32) -> Result<Rational> {
    if n % 2 != 1 || r % 2 != 1 || 2 * (r + 2) > n {
        return Err(Error::domain(alloc::format!(
            "odd flank gap needs odd n, odd r, r + 2 <= n/2 (n={n}, r={r})"
        )));
    }
    let (nn, rr) = (n as u64, r as u64);
    Ok(Rational::new(
        Integer::from(4 * rr) * central(rr - 1) * central(nn - rr),
        pow2(nn) * Integer::from((rr + 1) * (nn - rr - 1)),
    ))
}

/// `4^m / sqrt(pi m) >= C(2m, m) >= 4^m / sqrt(2 pi m)`, decided exactly
/// with a rational bracket on pi. Only meaningful for `m >= 1`.
pub fn central_binomial_bounds_hold(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let c = exact::int(binomial(2 * m, m));
    let c2 = &c * &c;
    let sixteen_m = exact::int(pow2(4 * m));
    let mm = exact::int(m);
    let upper = sixteen_m >= &c2 * exact::pi_upper() * &mm;
    let lower = &c2 * exact::int(2) * exact::pi_lower() * &mm >= sixteen_m;
    upper && lower
}

/// `pi_r(n/2) >= 1 / (pi sqrt(r (n - r)))` for even `n`, even `0 < r <= n/2`,
/// decided exactly from the exact left side.
pub fn center_lower_bound_holds(n: u32, r: u32) -> Result<bool> {
    if n % 2 != 0 || r % 2 != 0 || r == 0 || 2 * r > n {
        return Err(Error::domain(
            "center bound needs even n and even 0 < r <= n/2",
        ));
    }
    let p = pi_sphere(n, r)?.prob(n / 2);
    let pi = exact::pi_lower();
    let lhs = &p * &p * &pi * &pi * exact::int(r as u64 * (n - r) as u64);
    Ok(lhs >= exact::int(1))
}

/// `pi_0(n/2) >= 1 / sqrt(pi n)` for even `n`.
pub fn center_r0_bound_holds(n: u32) -> Result<bool> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::domain("r = 0 center bound needs even n >= 2"));
    }
    let p = pi_sphere(n, 0)?.prob(n / 2);
    Ok(&p * &p * exact::pi_lower() * exact::int(n) >= exact::int(1))
}

/// Constant `c` in `pi_0(n/2) >= c / sqrt(n)`, namely `1/sqrt(pi)`.
pub const CENTER_R0_CONSTANT: f64 = 0.564_189_583_547_756_3;
