//! Simulation of the Fourier-sampling primitive.
//!
//! [`make_shifted_state`] prepares `|S + x>`, [`fourier_sample`] applies
//! `H^{\otimes n}` and measures. For repeated sampling the measurement law
//! is cached in a sampler ([`FourierSampler`], [`CubeSampler`],
//! [`WeightSampler`]) and drawn from through a [`SampleStream`], which owns
//! the random state and counts samples.
//!
//! Weight histograms of `k` samples are drawn as a multinomial via
//! conditional binomials, so their cost does not grow with `k`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::bits::{self, weight};
use crate::distributions::{CubeDistribution, WeightDistribution};
use crate::error::{Error, Result};
use crate::exact::{quotient_to_f64, Integer};
use crate::subset::{SubsetSpec, MAX_EXPLICIT_DIMENSION};
use crate::walsh::fwht_normalised;

/// Reproducible random state: ChaCha with 8 rounds, seeded from a `u64`,
/// on an explicit stream. The same `(seed, stream)` produces the same
/// sequence on every platform.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngState { seed, stream, rng }
    }

    /// Independent stream for trial `trial` of an experiment seeded with
    /// `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(seed, trial)
    }

    pub fn algorithm(&self) -> &'static str {
        Self::ALGORITHM
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Tolerance on the squared norm of a state vector.
pub const NORM_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

/// `|S + x>` as a real state vector over `{0,1}^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedState {
    n: u32,
    amplitudes: Vec<f64>,
    shift: u64,
    support_size: usize,
}

impl ShiftedState {
    /// Equal superposition over `{y + shift : y in points}`.
    pub fn from_support(n: u32, points: &[u64], shift: u64) -> Result<Self> {
        if n > MAX_EXPLICIT_DIMENSION {
            return Err(Error::Capacity {
                what: "state dimension",
                requested: n as u64,
                limit: MAX_EXPLICIT_DIMENSION as u64,
            });
        }
        if shift > bits::mask(n) {
            return Err(Error::domain("shift is not an n-bit string"));
        }
        let mut amplitudes = vec![0.0; 1usize << n];
        let mut count = 0usize;
        for &p in points {
            if p > bits::mask(n) {
                return Err(Error::domain("support point is not an n-bit string"));
            }
            let slot = &mut amplitudes[(p ^ shift) as usize];
            if *slot == 0.0 {
                *slot = 1.0;
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::domain("empty support"));
        }
        let amp = 1.0 / libm::sqrt(count as f64);
        for a in amplitudes.iter_mut().filter(|a| **a != 0.0) {
            *a = amp;
        }
        Ok(ShiftedState {
            n,
            amplitudes,
            shift,
            support_size: count,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// The hidden shift, kept for inspection in tests.
    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn support_size(&self) -> usize {
        self.support_size
    }

    pub fn support(&self) -> Vec<u64> {
        (0..self.amplitudes.len() as u64)
            .filter(|&z| self.amplitudes[z as usize] != 0.0)
            .collect()
    }

    /// Unit norm within [`NORM_TOLERANCE`] and `|S|` equal non-zero
    /// amplitudes `1/sqrt|S|`.
    pub fn is_valid(&self) -> bool {
        let norm: f64 = self.amplitudes.iter().map(|a| a * a).sum();
        let amp = 1.0 / libm::sqrt(self.support_size as f64);
        let nonzero: Vec<f64> = self
            .amplitudes
            .iter()
            .copied()
            .filter(|&a| a != 0.0)
            .collect();
        (norm - 1.0).abs() <= NORM_TOLERANCE
            && nonzero.len() == self.support_size
            && nonzero.iter().all(|&a| (a - amp).abs() <= NORM_TOLERANCE)
    }

    /// Amplitudes after `H^{\otimes n}`.
    pub fn transformed(&self) -> Vec<f64> {
        let mut out = self.amplitudes.clone();
        fwht_normalised(&mut out);
        out
    }

    /// Measurement probabilities of the transformed state.
    pub fn outcome_probabilities(&self) -> Vec<f64> {
        self.transformed().into_iter().map(|a| a * a).collect()
    }
}

/// Prepares `|S + x>` for the subset `spec` and shift `shift`.
pub fn make_shifted_state(spec: &SubsetSpec, shift: u64) -> Result<ShiftedState> {
    if spec.dimension() > MAX_EXPLICIT_DIMENSION {
        return Err(Error::Capacity {
            what: "state dimension",
            requested: spec.dimension() as u64,
            limit: MAX_EXPLICIT_DIMENSION as u64,
        });
    }
    ShiftedState::from_support(spec.dimension(), &spec.materialise()?, shift)
}

/// One Fourier sample: transform the state, then measure in the
/// computational basis.
pub fn fourier_sample(state: &ShiftedState, rng: &mut RngState) -> u64 {
    let probs = state.outcome_probabilities();
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut last = 0;
    for (z, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last = z;
            if u < p {
                return z as u64;
            }
            u -= p;
        }
    }
    last as u64
}

/// Source of Hamming weights of Fourier samples.
pub trait WeightSource {
    fn dimension(&self) -> u32;

    fn draw_weight(&self, rng: &mut RngState) -> u32;

    /// Counts per weight of `count` independent draws.
    fn weight_histogram(&self, count: u64, rng: &mut RngState) -> Vec<u64> {
        let mut hist = vec![0u64; self.dimension() as usize + 1];
        for _ in 0..count {
            hist[self.draw_weight(rng) as usize] += 1;
        }
        hist
    }
}

/// Source of full `n`-bit Fourier samples.
pub trait CubeSource: WeightSource {
    fn draw(&self, rng: &mut RngState) -> u64;
}

/// Multinomial counts from conditional probabilities
/// `cond[i] = p_i / (p_i + ... + p_last)`.
fn multinomial(count: u64, cond: &[f64], rng: &mut RngState) -> Vec<u64> {
    let mut out = vec![0u64; cond.len()];
    let mut remaining = count;
    for (slot, &c) in out.iter_mut().zip(cond) {
        if remaining == 0 {
            break;
        }
        let k = if c >= 1.0 {
            remaining
        } else if c <= 0.0 {
            0
        } else {
            // p in (0, 1) and remaining > 0, so construction cannot fail.
            Binomial::new(remaining, c)
                .map(|b| b.sample(rng))
                .unwrap_or(0)
        };
        *slot = k;
        remaining -= k;
    }
    out
}

fn conditional_from_f64(probs: &[f64]) -> Vec<f64> {
    let mut cond = vec![0.0; probs.len()];
    let mut suffix = 0.0;
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0);
    for i in (0..probs.len()).rev() {
        suffix += probs[i];
        cond[i] = match last_nonzero {
            Some(l) if i == l => 1.0,
            _ if suffix > 0.0 => (probs[i] / suffix).min(1.0),
            _ => 0.0,
        };
    }
    cond
}

/// Inverse-CDF sampler for an exact [`WeightDistribution`].
#[derive(Debug, Clone)]
pub struct WeightSampler {
    n: u32,
    cdf: Vec<f64>,
    conditional: Vec<f64>,
}

impl WeightSampler {
    pub fn new(dist: &WeightDistribution) -> Self {
        let nums = dist.numerators();
        let den = dist.denominator();
        let last_nonzero = nums.iter().rposition(|v| !v.is_zero()).unwrap_or(0);
        let mut cdf = Vec::with_capacity(nums.len());
        let mut prefix = Integer::zero();
        for (i, v) in nums.iter().enumerate() {
            prefix += v;
            cdf.push(if i >= last_nonzero {
                1.0
            } else {
                quotient_to_f64(&prefix, den)
            });
        }
        let mut conditional = vec![0.0; nums.len()];
        let mut suffix = Integer::zero();
        for i in (0..nums.len()).rev() {
            suffix += &nums[i];
            conditional[i] = if i == last_nonzero {
                1.0
            } else if suffix.is_zero() {
                0.0
            } else {
                quotient_to_f64(&nums[i], &suffix)
            };
        }
        WeightSampler {
            n: dist.dimension(),
            cdf,
            conditional,
        }
    }
}

impl WeightSource for WeightSampler {
    fn dimension(&self) -> u32 {
        self.n
    }

    fn draw_weight(&self, rng: &mut RngState) -> u32 {
        let u = rng.random::<f64>();
        self.cdf.partition_point(|&c| c <= u) as u32
    }

    fn weight_histogram(&self, count: u64, rng: &mut RngState) -> Vec<u64> {
        multinomial(count, &self.conditional, rng)
    }
}

/// One draw from an exact weight distribution.
pub fn sample_weight(dist: &WeightDistribution, rng: &mut RngState) -> u32 {
    WeightSampler::new(dist).draw_weight(rng)
}

/// Exact sampler for a [`CubeDistribution`]: draws an integer below the
/// common denominator and locates it in the integer CDF.
#[derive(Debug, Clone)]
pub struct CubeSampler {
    n: u32,
    cumulative: Vec<u64>,
    denominator: u64,
    weight_conditional: Vec<f64>,
}

impl CubeSampler {
    pub fn new(dist: &CubeDistribution) -> Self {
        let mut acc = 0u64;
        let cumulative = dist
            .numerators()
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect();
        let collapsed = dist.weight_collapse();
        CubeSampler {
            n: dist.dimension(),
            cumulative,
            denominator: dist.denominator(),
            weight_conditional: WeightSampler::new(&collapsed).conditional,
        }
    }
}

impl WeightSource for CubeSampler {
    fn dimension(&self) -> u32 {
        self.n
    }

    fn draw_weight(&self, rng: &mut RngState) -> u32 {
        weight(self.draw(rng))
    }

    fn weight_histogram(&self, count: u64, rng: &mut RngState) -> Vec<u64> {
        multinomial(count, &self.weight_conditional, rng)
    }
}

impl CubeSource for CubeSampler {
    fn draw(&self, rng: &mut RngState) -> u64 {
        let u = rng.random_range(0..self.denominator);
        self.cumulative.partition_point(|&c| c <= u) as u64
    }
}

/// Sampler built from a simulated state: the transform is applied once
/// and the measurement law cached.
#[derive(Debug, Clone)]
pub struct FourierSampler {
    n: u32,
    cdf: Vec<f64>,
    probabilities: Vec<f64>,
    weight_conditional: Vec<f64>,
}

impl FourierSampler {
    pub fn new(state: &ShiftedState) -> Self {
        let n = state.dimension();
        let probabilities = state.outcome_probabilities();
        let total: f64 = probabilities.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = probabilities
            .iter()
            .map(|p| {
                acc += p / total;
                acc
            })
            .collect();
        if let Some(l) = probabilities.iter().rposition(|&p| p > 0.0) {
            for c in &mut cdf[l..] {
                *c = 1.0;
            }
        }
        let mut by_weight = vec![0.0; n as usize + 1];
        for (z, p) in probabilities.iter().enumerate() {
            by_weight[weight(z as u64) as usize] += p / total;
        }
        FourierSampler {
            n,
            cdf,
            weight_conditional: conditional_from_f64(&by_weight),
            probabilities,
        }
    }

    /// Measurement probabilities, as computed from the state vector.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

impl WeightSource for FourierSampler {
    fn dimension(&self) -> u32 {
        self.n
    }

    fn draw_weight(&self, rng: &mut RngState) -> u32 {
        weight(self.draw(rng))
    }

    fn weight_histogram(&self, count: u64, rng: &mut RngState) -> Vec<u64> {
        multinomial(count, &self.weight_conditional, rng)
    }
}

impl CubeSource for FourierSampler {
    fn draw(&self, rng: &mut RngState) -> u64 {
        let u = rng.random::<f64>();
        self.cdf.partition_point(|&c| c <= u) as u64
    }
}

/// A sample source together with the random state that drives it and a
/// running count of samples drawn.
#[derive(Debug)]
pub struct SampleStream<'a, S: ?Sized> {
    source: &'a S,
    rng: RngState,
    drawn: u64,
}

impl<'a, S: WeightSource + ?Sized> SampleStream<'a, S> {
    pub fn new(source: &'a S, rng: RngState) -> Self {
        SampleStream {
            source,
            rng,
            drawn: 0,
        }
    }

    pub fn dimension(&self) -> u32 {
        self.source.dimension()
    }

    pub fn weight(&mut self) -> u32 {
        self.drawn += 1;
        self.source.draw_weight(&mut self.rng)
    }

    pub fn weight_histogram(&mut self, count: u64) -> Vec<u64> {
        self.drawn = self.drawn.saturating_add(count);
        self.source.weight_histogram(count, &mut self.rng)
    }

    /// Total samples drawn so far.
    pub fn drawn(&self) -> u64 {
        self.drawn
    }

    pub fn rng(&self) -> &RngState {
        &self.rng
    }

    pub fn into_rng(self) -> RngState {
        self.rng
    }
}

impl<'a, S: CubeSource + ?Sized> SampleStream<'a, S> {
    pub fn outcome(&mut self) -> u64 {
        self.drawn += 1;
        self.source.draw(&mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{pi_points, pi_sphere};
    use crate::subset::SubsetSpec;
    use alloc::vec;

    #[test]
    fn rng_is_reproducible() {
        let mut a = RngState::new(7, 3);
        let mut b = RngState::new(7, 3);
        let mut c = RngState::new(7, 4);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
        assert_eq!(a.algorithm(), "chacha8");
    }

    #[test]
    fn shifted_state_examples() {
        let point = SubsetSpec::explicit(3, vec![0]).unwrap();
        let s = make_shifted_state(&point, 0).unwrap();
        assert_eq!(s.support(), vec![0]);
        assert!(s.is_valid());

        let sphere = SubsetSpec::sphere(2, 1).unwrap();
        let s = make_shifted_state(&sphere, 0b10).unwrap();
        assert_eq!(s.support(), vec![0b00, 0b11]);
        let amp = 1.0 / libm::sqrt(2.0);
        assert!((s.amplitudes()[0] - amp).abs() < 1e-15);
        assert!(s.is_valid());

        let spec = SubsetSpec::sphere(5, 2).unwrap();
        let s = make_shifted_state(&spec, 0).unwrap();
        assert_eq!(s.support(), spec.materialise().unwrap());
        assert!(make_shifted_state(&spec, 1 << 5).is_err());
    }

    #[test]
    fn full_cube_always_samples_zero() {
        let pts: Vec<u64> = (0..16).collect();
        let state = ShiftedState::from_support(4, &pts, 5).unwrap();
        let mut rng = RngState::new(1, 0);
        assert!((0..200).all(|_| fourier_sample(&state, &mut rng) == 0));
    }

    #[test]
    fn parity_set_samples_only_zero_or_t() {
        let spec = SubsetSpec::parity_set(3, vec![1, 3]).unwrap();
        let state = make_shifted_state(&spec, 0b110).unwrap();
        let probs = state.outcome_probabilities();
        assert!((probs[0b000] - 0.5).abs() < 1e-12);
        assert!((probs[0b101] - 0.5).abs() < 1e-12);
        let mut rng = RngState::new(2, 0);
        for _ in 0..200 {
            let z = fourier_sample(&state, &mut rng);
            assert!(z == 0b000 || z == 0b101);
        }
    }

    #[test]
    fn point_mass_weight_sampler() {
        let d = WeightDistribution::point_mass(6, 4).unwrap();
        let mut rng = RngState::new(3, 0);
        assert!((0..100).all(|_| sample_weight(&d, &mut rng) == 4));
        let sampler = WeightSampler::new(&d);
        let h = sampler.weight_histogram(1_000, &mut rng);
        assert_eq!(h[4], 1_000);
    }

    #[test]
    fn zero_probability_weight_never_sampled() {
        let sampler = WeightSampler::new(&pi_sphere(4, 1).unwrap());
        let mut rng = RngState::new(4, 0);
        assert!((0..100_000).all(|_| sampler.draw_weight(&mut rng) != 2));
        assert_eq!(sampler.weight_histogram(100_000, &mut rng)[2], 0);
    }

    #[test]
    fn weight_frequency_near_exact() {
        let sampler = WeightSampler::new(&pi_sphere(4, 2).unwrap());
        let mut rng = RngState::new(5, 0);
        let hits = (0..100_000)
            .filter(|_| sampler.draw_weight(&mut rng) == 2)
            .count();
        assert!((hits as f64 / 1e5 - 0.25).abs() < 0.01);
        let h = sampler.weight_histogram(100_000, &mut rng);
        assert_eq!(h.iter().sum::<u64>(), 100_000);
        assert!((h[2] as f64 / 1e5 - 0.25).abs() < 0.01);
    }

    #[test]
    fn cube_sampler_respects_support() {
        let d = pi_points(3, &[0b001, 0b011, 0b100, 0b110]).unwrap();
        let sampler = CubeSampler::new(&d);
        let mut rng = RngState::new(6, 0);
        let mut stream = SampleStream::new(&sampler, rng.clone());
        for _ in 0..500 {
            let z = stream.outcome();
            assert!(z == 0 || z == 0b101);
        }
        assert_eq!(stream.drawn(), 500);
        let h = sampler.weight_histogram(10_000, &mut rng);
        assert_eq!(h[1] + h[3], 0);
    }
}
