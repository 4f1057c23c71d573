//! Distances between outcome distributions and the copy counts they imply.
//!
//! Fidelity here is the classical one, `F = (sum_x sqrt(p_x q_x))^2`, and
//! trace distance is the `l1` distance `T = sum_x |p_x - q_x|`, so
//! `0 <= T <= 2` and `F <= 1 - T^2 / 4`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::distributions::{character_sums, pi_sphere, CubeDistribution, WeightDistribution};
use crate::error::{Error, Result};
use crate::exact::{self, Integer, Rational};
use crate::subset::MAX_EXPLICIT_DIMENSION;
use crate::walsh::{fwht, fwht_normalised};

/// Largest dimension accepted by [`hy_lower_bound`].
pub const MAX_HY_DIMENSION: u32 = 14;
/// Above this estimate [`copies_bound`] stops confirming the ceiling with
/// exact powers and trusts the floating-point quotient.
const EXACT_COPIES_LIMIT: u64 = 4_096;
const DIRECT_CONVOLUTION_LIMIT: u32 = 12;

/// A real function on `{0,1}^n`, indexed by the bit pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    n: u32,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        if n > MAX_EXPLICIT_DIMENSION {
            return Err(Error::Capacity {
                what: "cube function dimension",
                requested: n as u64,
                limit: MAX_EXPLICIT_DIMENSION as u64,
            });
        }
        if values.len() != 1usize << n {
            return Err(Error::domain("cube function needs 2^n values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("cube function values must be finite"));
        }
        Ok(CubeFunction { n, values })
    }

    /// Characteristic function of a point set.
    pub fn indicator(n: u32, points: &[u64]) -> Result<Self> {
        let mut values = vec![0.0; 1usize << n.min(MAX_EXPLICIT_DIMENSION)];
        for &p in points {
            let slot = values
                .get_mut(p as usize)
                .ok_or_else(|| Error::domain("point outside the cube"))?;
            *slot = 1.0;
        }
        Self::new(n, values)
    }

    pub fn delta(n: u32, at: u64) -> Result<Self> {
        Self::indicator(n, &[at])
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm2(&self) -> f64 {
        libm::sqrt(self.values.iter().map(|v| v * v).sum())
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &CubeFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }

    pub fn pointwise_product(&self, other: &CubeFunction) -> Result<CubeFunction> {
        check_dims(self.n, other.n)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(CubeFunction { n: self.n, values })
    }
}

fn check_dims(a: u32, b: u32) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

/// `f^(x) = 2^{-n/2} sum_y (-1)^{x.y} f(y)`.
pub fn walsh_transform(f: &CubeFunction) -> CubeFunction {
    let mut values = f.values.clone();
    fwht_normalised(&mut values);
    CubeFunction { n: f.n, values }
}

/// `(f * g)(x) = 2^{-n/2} sum_y f(y) g(x + y)`.
pub fn convolve(f: &CubeFunction, g: &CubeFunction) -> Result<CubeFunction> {
    check_dims(f.n, g.n)?;
    let len = f.values.len();
    let scale = 1.0 / libm::sqrt(len as f64);
    let values = if f.n <= DIRECT_CONVOLUTION_LIMIT {
        (0..len)
            .map(|x| scale * (0..len).map(|y| f.values[y] * g.values[x ^ y]).sum::<f64>())
            .collect()
    } else {
        let fh = walsh_transform(f);
        let gh = walsh_transform(g);
        walsh_transform(&fh.pointwise_product(&gh)?).values
    };
    Ok(CubeFunction { n: f.n, values })
}

/// Unnormalised transform of exact values.
pub fn walsh_exact(values: &[Rational]) -> Result<Vec<Rational>> {
    if !values.len().is_power_of_two() {
        return Err(Error::domain("transform length must be a power of two"));
    }
    let mut out = values.to_vec();
    fwht(&mut out);
    Ok(out)
}

/// Checks `sum F(u)^2 = 2^n sum f(y)^2` for the unnormalised transform.
pub fn parseval_exact(values: &[Rational]) -> Result<bool> {
    let transformed = walsh_exact(values)?;
    let lhs: Rational = transformed.iter().map(|v| v * v).sum();
    let rhs: Rational = values.iter().map(|v| v * v).sum::<Rational>() * exact::int(values.len());
    Ok(lhs == rhs)
}

fn check_laws(p: &[Rational], q: &[Rational]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::domain("distributions are indexed by different sets"));
    }
    Ok(())
}

/// `sum_x |p_x - q_x|`, exactly.
pub fn trace_distance(p: &[Rational], q: &[Rational]) -> Result<Rational> {
    check_laws(p, q)?;
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

/// `(sum_x sqrt(p_x q_x))^2`.
pub fn fidelity(p: &[Rational], q: &[Rational]) -> Result<f64> {
    check_laws(p, q)?;
    let bc: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| libm::sqrt(exact::to_f64(&(a * b))))
        .sum();
    Ok((bc * bc).min(1.0))
}

pub fn trace_distance_weights(p: &WeightDistribution, q: &WeightDistribution) -> Result<Rational> {
    check_dims(p.dimension(), q.dimension())?;
    trace_distance(&p.probs(), &q.probs())
}

pub fn fidelity_weights(p: &WeightDistribution, q: &WeightDistribution) -> Result<f64> {
    check_dims(p.dimension(), q.dimension())?;
    fidelity(&p.probs(), &q.probs())
}

/// Trace distance between two laws on the cube, from their integer
/// numerators.
pub fn trace_distance_cube(p: &CubeDistribution, q: &CubeDistribution) -> Result<Rational> {
    check_dims(p.dimension(), q.dimension())?;
    let (dp, dq) = (p.denominator() as u128, q.denominator() as u128);
    let total: Integer = p
        .numerators()
        .iter()
        .zip(q.numerators())
        .map(|(&a, &b)| Integer::from((a as u128 * dq).abs_diff(b as u128 * dp)))
        .sum();
    Ok(exact::ratio(total, Integer::from(dp) * Integer::from(dq)))
}

/// Outcome of a copy-count computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopiesBound {
    pub copies: u64,
    /// The fidelity bound was zero, so a single copy identifies the state
    /// and the logarithmic formula does not apply.
    pub degenerate: bool,
}

/// Smallest `k` with `k log(1/F) >= 2 log(N / eps)`, i.e.
/// `(1/F)^k >= (N/eps)^2`. The comparison is exact, so the logarithm base
/// does not matter.
pub fn copies_bound(family: u64, fidelity: &Rational, epsilon: &Rational) -> Result<u64> {
    if family < 2 {
        return Err(Error::domain("family needs at least two states"));
    }
    if !fidelity.is_positive() || *fidelity >= Rational::one() {
        return Err(Error::domain("fidelity must lie in (0, 1)"));
    }
    if !epsilon.is_positive() || *epsilon >= Rational::one() {
        return Err(Error::domain("epsilon must lie in (0, 1)"));
    }
    let target = {
        let t = exact::int(family) / epsilon;
        &t * &t
    };
    let inv_f = fidelity.recip();
    let ln_target = exact::ln_ratio(target.numer(), target.denom());
    let ln_inv_f = exact::ln_ratio(inv_f.numer(), inv_f.denom());
    let estimate = libm::ceil(ln_target / ln_inv_f).max(1.0);
    if estimate > EXACT_COPIES_LIMIT as f64 {
        return Ok(estimate.to_u64().unwrap_or(u64::MAX));
    }
    let satisfies = |k: u64| num_traits::pow::pow(inv_f.clone(), k as usize) >= target;
    let mut k = estimate as u64;
    while k > 1 && satisfies(k - 1) {
        k -= 1;
    }
    while !satisfies(k) {
        k += 1;
    }
    Ok(k)
}

/// Failure probability used by [`copies_bound_from_trace`].
pub fn default_epsilon() -> Rational {
    exact::ratio(1, 3)
}

/// Copies sufficient to tell apart `family` states whose pairwise trace
/// distances are all at least `trace`, via `F <= 1 - T^2/4` and
/// [`copies_bound`] at failure probability 1/3.
pub fn copies_bound_from_trace(family: u64, trace: &Rational) -> Result<CopiesBound> {
    if !trace.is_positive() || *trace > exact::int(2) {
        return Err(Error::domain("trace distance must lie in (0, 2]"));
    }
    let f = Rational::one() - trace * trace / exact::int(4);
    if f.is_zero() {
        if family < 2 {
            return Err(Error::domain("family needs at least two states"));
        }
        return Ok(CopiesBound {
            copies: 1,
            degenerate: true,
        });
    }
    Ok(CopiesBound {
        copies: copies_bound(family, &f, &default_epsilon())?,
        degenerate: false,
    })
}

/// `A_S(x) = #{y in S : y + x in S}` for every `x`.
pub fn autocorrelation(n: u32, points: &[u64]) -> Result<Vec<u64>> {
    let sums = character_sums(n, points)?;
    let mut squares: Vec<i64> = sums.values.iter().map(|h| h * h).collect();
    fwht(&mut squares);
    Ok(squares.iter().map(|&v| (v >> n) as u64).collect())
}

/// Lower bound on `||pi_S - pi_T||_1` from the Hausdorff-Young inequality:
/// `max_x |A_S(x)/|S| - A_T(x)/|T||`, which is `sqrt(2^n)` times the sup
/// norm of the difference of the normalised self-convolutions.
pub fn hy_lower_bound(n: u32, s: &[u64], t: &[u64]) -> Result<Rational> {
    if n > MAX_HY_DIMENSION {
        return Err(Error::Capacity {
            what: "Hausdorff-Young dimension",
            requested: n as u64,
            limit: MAX_HY_DIMENSION as u64,
        });
    }
    let a = autocorrelation(n, s)?;
    let b = autocorrelation(n, t)?;
    let (sa, sb) = (a[0], b[0]);
    let best = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| ((x as u128) * (sb as u128)).abs_diff((y as u128) * (sa as u128)))
        .max()
        .unwrap_or(0);
    Ok(exact::ratio(
        Integer::from(best),
        Integer::from(sa) * Integer::from(sb),
    ))
}

/// `A_{S_r}(x) / |S_r|` for `|x| = w`: the fraction of weight-`r` strings
/// `y` with `|y + x| = r`, which needs `y` to meet `x` in `w/2` places.
fn sphere_autocorrelation(n: u32, r: u32, w: u32) -> Rational {
    if w % 2 == 1 {
        return Rational::zero();
    }
    let (n, r, w) = (n as i64, r as i64, w as i64);
    let count = exact::binomial_signed(w, w / 2) * exact::binomial_signed(n - w, r - w / 2);
    Rational::new(count, exact::binomial(n as u64, r as u64))
}

/// Distances between `pi_{S_i}` and `pi_{S_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub pair: (u32, u32),
    pub trace: Rational,
    pub fidelity: f64,
    pub hy_lower: Rational,
}

impl DistanceReport {
    /// `hy_lower <= T <= 2` and `F <= 1 - T^2/4` (with float slack on `F`).
    pub fn is_consistent(&self) -> bool {
        let t = exact::to_f64(&self.trace);
        self.hy_lower <= self.trace
            && self.trace <= exact::int(2)
            && (0.0..=1.0).contains(&self.fidelity)
            && self.fidelity <= 1.0 - t * t / 4.0 + 1e-12
    }
}

/// Every pair `i <= j` of admissible sphere radii `0..=n/2`, comparing the
/// weight laws (which carry all the information in `pi_{S_r}`).
pub fn sphere_distance_survey(n: u32) -> Result<Vec<DistanceReport>> {
    let laws = (0..=n / 2)
        .map(|r| Ok(pi_sphere(n, r)?.probs()))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = Vec::new();
    for i in 0..=n / 2 {
        for j in i..=n / 2 {
            let hy_lower = (0..=n)
                .map(|w| (sphere_autocorrelation(n, i, w) - sphere_autocorrelation(n, j, w)).abs())
                .max()
                .unwrap_or_default();
            // Weight classes aggregate points, so the cube-level l1 distance
            // equals the weight-level one.
            reports.push(DistanceReport {
                pair: (i, j),
                trace: trace_distance(&laws[i as usize], &laws[j as usize])?,
                fidelity: fidelity(&laws[i as usize], &laws[j as usize])?,
                hy_lower,
            });
        }
    }
    Ok(reports)
}

/// Off-diagonal report with the smallest trace distance.
pub fn closest_pair(reports: &[DistanceReport]) -> Option<&DistanceReport> {
    reports
        .iter()
        .filter(|r| r.pair.0 != r.pair.1)
        .min_by(|a, b| a.trace.cmp(&b.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits;
    use crate::distributions::pi_points;

    #[test]
    fn transform_of_delta_is_flat() {
        let f = walsh_transform(&CubeFunction::delta(4, 0).unwrap());
        assert!(f.values().iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn parity_indicator_has_two_coefficients() {
        let n = 5;
        let t = 0b10110;
        let pts: Vec<u64> = (0..32).filter(|&x| bits::dot(x, t) % 2 == 1).collect();
        let f = walsh_transform(&CubeFunction::indicator(n, &pts).unwrap());
        let support: Vec<usize> = (0..32).filter(|&u| f.values()[u].abs() > 1e-12).collect();
        assert_eq!(support, vec![0, t as usize]);
        assert!((f.values()[0].abs() - f.values()[t as usize].abs()).abs() < 1e-12);
    }

    #[test]
    fn convolution_examples() {
        let n = 6;
        let pts = [1u64, 6, 17, 40, 63];
        let ind = CubeFunction::indicator(n, &pts).unwrap();
        let auto = convolve(&ind, &ind).unwrap();
        assert!((auto.values()[0] - 5.0 / 8.0).abs() < 1e-15);
        let with_delta = convolve(&ind, &CubeFunction::delta(n, 0).unwrap()).unwrap();
        for (a, b) in with_delta.values().iter().zip(ind.values()) {
            assert!((a - b / 8.0).abs() < 1e-15);
        }
        assert!(convolve(&ind, &CubeFunction::delta(5, 0).unwrap()).is_err());
    }

    #[test]
    fn large_convolution_agrees_with_direct() {
        let n = 13;
        let mut vals = vec![0.0; 1 << n];
        for (i, v) in vals.iter_mut().enumerate().step_by(97) {
            *v = (i % 7) as f64 - 3.0;
        }
        let f = CubeFunction::new(n, vals).unwrap();
        let g = CubeFunction::delta(n, 5).unwrap();
        let c = convolve(&f, &g).unwrap();
        let scale = 1.0 / libm::sqrt((1u64 << n) as f64);
        for x in (0..1usize << n).step_by(211) {
            assert!((c.values()[x] - scale * f.values()[x ^ 5]).abs() < 1e-9);
        }
    }

    #[test]
    fn parseval_on_rationals() {
        let vals: Vec<Rational> = (0..16).map(|i| exact::ratio(i * i - 7, i + 1)).collect();
        assert!(parseval_exact(&vals).unwrap());
        assert!(walsh_exact(&vals[..3]).is_err());
    }

    #[test]
    fn trace_and_fidelity_examples() {
        let p = pi_sphere(4, 0).unwrap();
        let q = pi_sphere(4, 2).unwrap();
        assert_eq!(trace_distance_weights(&p, &p).unwrap(), Rational::zero());
        assert!((fidelity_weights(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        // pi_0 = C(4,w)/16; pi_2(w) = K_2(w)^2 C(4,w) / (6 * 16) with
        // K_2 = 6, 0, -2, 0, 6.
        let p0 = [1, 4, 6, 4, 1].map(|c| exact::ratio(c, 16));
        let p2 = [36, 0, 24, 0, 36].map(|c| exact::ratio(c, 96));
        let expected: Rational = p0.iter().zip(&p2).map(|(a, b)| (a - b).abs()).sum();
        assert_eq!(trace_distance_weights(&p, &q).unwrap(), expected);
        assert_eq!(expected, exact::ratio(5, 4));
        let a = [
            exact::ratio(1, 2),
            exact::ratio(1, 2),
            Rational::zero(),
            Rational::zero(),
        ];
        let b = [
            Rational::zero(),
            Rational::zero(),
            exact::ratio(1, 3),
            exact::ratio(2, 3),
        ];
        assert_eq!(trace_distance(&a, &b).unwrap(), exact::int(2));
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        assert!(trace_distance(&a, &b[..3]).is_err());
    }

    #[test]
    fn cube_trace_matches_rational_sum() {
        let p = pi_points(5, &[0, 3, 9, 30]).unwrap();
        let q = pi_points(5, &[1, 2, 4, 8, 16]).unwrap();
        let direct: Rational = (0..32).map(|z| (p.prob(z) - q.prob(z)).abs()).sum();
        assert_eq!(trace_distance_cube(&p, &q).unwrap(), direct);
    }

    #[test]
    fn copies_examples() {
        let q = exact::ratio;
        assert_eq!(copies_bound(2, &q(1, 4), &q(1, 4)).unwrap(), 3);
        assert_eq!(copies_bound(2, &q(1, 2), &q(1, 3)).unwrap(), 6);
        assert!(copies_bound(2, &exact::int(1), &q(1, 3)).is_err());
        assert!(copies_bound(1, &q(1, 2), &q(1, 3)).is_err());
        let bound = copies_bound_from_trace(5, &exact::int(2)).unwrap();
        assert_eq!(
            bound,
            CopiesBound {
                copies: 1,
                degenerate: true
            }
        );
        assert!(copies_bound_from_trace(5, &Rational::zero()).is_err());
    }

    #[test]
    fn halving_trace_quadruples_copies() {
        for t in [q(1, 20), q(1, 50), q(1, 100)] {
            let big = copies_bound_from_trace(8, &t).unwrap().copies as f64;
            let small = copies_bound_from_trace(8, &(t / exact::int(2)))
                .unwrap()
                .copies as f64;
            let ratio = small / big;
            assert!((3.5..=4.5).contains(&ratio), "{ratio}");
        }
        fn q(a: i64, b: i64) -> Rational {
            exact::ratio(a, b)
        }
    }

    #[test]
    fn autocorrelation_brute_force() {
        let n = 5;
        let pts = [0u64, 5, 7, 19, 28, 31];
        let a = autocorrelation(n, &pts).unwrap();
        for x in 0..32u64 {
            let direct = pts.iter().filter(|&&y| pts.contains(&(y ^ x))).count() as u64;
            assert_eq!(a[x as usize], direct);
        }
    }

    #[test]
    fn hy_examples() {
        let s = [1u64, 2, 12, 33];
        assert_eq!(hy_lower_bound(6, &s, &s).unwrap(), Rational::zero());
        let n = 6;
        let odd = |t: u64| -> Vec<u64> { (0..64).filter(|&x| bits::dot(x, t) % 2 == 1).collect() };
        let (s, t) = (odd(0b000011), odd(0b110000));
        let lower = hy_lower_bound(n, &s, &t).unwrap();
        let trace =
            trace_distance_cube(&pi_points(n, &s).unwrap(), &pi_points(n, &t).unwrap()).unwrap();
        // Both laws put 1/2 on 0 and 1/2 on their own t.
        assert_eq!(trace, exact::int(1));
        assert!(lower <= trace);
        assert!(hy_lower_bound(15, &s, &t).is_err());
    }

    #[test]
    fn sphere_autocorrelation_matches_brute_force() {
        let n = 7;
        for r in 0..=3 {
            let pts = bits::sphere_points(n, r);
            let a = autocorrelation(n, &pts).unwrap();
            for x in 0..128u64 {
                let expected = sphere_autocorrelation(n, r, bits::weight(x));
                assert_eq!(exact::ratio(a[x as usize], pts.len() as u64), expected);
            }
        }
    }

    #[test]
    fn survey_small() {
        let reports = sphere_distance_survey(8).unwrap();
        assert_eq!(reports.len(), 15);
        for rep in &reports {
            assert!(rep.is_consistent(), "{:?}", rep.pair);
            if rep.pair.0 == rep.pair.1 {
                assert!(rep.trace.is_zero());
            } else {
                assert!(rep.trace.is_positive());
            }
        }
        let n4 = sphere_distance_survey(4).unwrap();
        let t01 = &n4.iter().find(|r| r.pair == (0, 1)).unwrap().trace;
        let p0 = pi_sphere(4, 0).unwrap().probs();
        let p1 = pi_sphere(4, 1).unwrap().probs();
        assert_eq!(*t01, trace_distance(&p0, &p1).unwrap());
        assert!(closest_pair(&n4).is_some());
    }
}
