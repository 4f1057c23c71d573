//! Classical post-processing of Fourier samples.
//!
//! Each procedure draws from a [`SampleStream`] and returns a
//! [`RecoveryResult`]. Radius decoders compare exact empirical frequencies
//! against exact tables built from [`crate::distributions`], so a decision
//! is a pure function of the observed counts.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::bits;
use crate::distributions::{middle_probs, pi_ball, pi_sphere};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::sampler::{CubeSource, SampleStream, WeightSource};
use crate::subset::{SubsetKind, SubsetSpec};

/// Samples per unit of `n` for the radius-parity test.
pub const PARITY_SAMPLES_PER_N: u64 = 8;
/// Constant in the `c n^6` budget for full recovery with even `n`.
pub const EVEN_RADIUS_CONSTANT: u64 = 4;
/// Constant in the `c n^4` budget for full recovery with odd `n`.
pub const ODD_RADIUS_CONSTANT: u64 = 4;
/// Constant in the `c 2^n` budget for ball radius recovery.
pub const BALL_CONSTANT: u64 = 16;
/// Default number of draws for the junta and parity procedures.
pub const DEFAULT_DRAWS: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    /// Samples for deciding the parity of a sphere radius.
    Parity,
    /// Samples for estimating a probability.
    Estimate,
    /// Maximum draws when waiting for an informative outcome.
    Draws,
}

/// Sample counts per phase, plus the number of independent repetitions
/// used for majority-vote amplification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBudget {
    counts: BTreeMap<Phase, u64>,
    repetitions: u32,
}

impl SampleBudget {
    pub fn new(counts: impl IntoIterator<Item = (Phase, u64)>) -> Result<Self> {
        let counts: BTreeMap<Phase, u64> = counts.into_iter().collect();
        if counts.is_empty() || counts.values().any(|&c| c == 0) {
            return Err(Error::domain("every budget phase needs a positive count"));
        }
        Ok(SampleBudget {
            counts,
            repetitions: 1,
        })
    }

    fn single(phase: Phase, count: u64) -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(phase, count.max(1));
        SampleBudget {
            counts,
            repetitions: 1,
        }
    }

    /// `8 n` samples for the radius-parity test.
    pub fn radius_parity(n: u32) -> Self {
        Self::single(Phase::Parity, PARITY_SAMPLES_PER_N * n as u64)
    }

    /// `4 n^6` samples for full radius recovery with even `n`.
    pub fn radius_even_n(n: u32) -> Self {
        Self::single(
            Phase::Estimate,
            EVEN_RADIUS_CONSTANT.saturating_mul((n as u64).saturating_pow(6)),
        )
    }

    /// `4 n^4` samples for full radius recovery with odd `n`.
    pub fn radius_odd_n(n: u32) -> Self {
        Self::single(
            Phase::Estimate,
            ODD_RADIUS_CONSTANT.saturating_mul((n as u64).saturating_pow(4)),
        )
    }

    /// Default for sphere radius recovery, by parity of `n`.
    pub fn radius(n: u32) -> Self {
        if n % 2 == 0 {
            Self::radius_even_n(n)
        } else {
            Self::radius_odd_n(n)
        }
    }

    /// `16 2^n` samples for ball radius recovery. Balls of radius `n - 1`
    /// and `n` differ in a single point, so no polynomial budget separates
    /// every pair.
    pub fn ball(n: u32) -> Self {
        let scale = if n >= 60 { u64::MAX } else { 1u64 << n };
        Self::single(Phase::Estimate, BALL_CONSTANT.saturating_mul(scale))
    }

    /// `ceil(2 ln 6 / eps^2)` samples: by Hoeffding the empirical frequency
    /// is then within `eps` with probability at least `1 - 2/6^4`.
    pub fn size_estimate(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain("epsilon must lie in (0, 1)"));
        }
        let k = libm::ceil(2.0 * libm::log(6.0) / (epsilon * epsilon)) as u64;
        Ok(Self::single(Phase::Estimate, k))
    }

    /// At most `k` draws while waiting for an informative outcome.
    pub fn draws(k: u64) -> Self {
        Self::single(Phase::Draws, k)
    }

    /// Every count multiplied by `multiplier`, rounded up, at least 1.
    pub fn scaled(&self, multiplier: Ratio<u64>) -> Result<Self> {
        if multiplier.numer().is_zero() {
            return Err(Error::domain("budget multiplier must be positive"));
        }
        let counts = self
            .counts
            .iter()
            .map(|(&p, &c)| {
                let scaled =
                    (c as u128 * *multiplier.numer() as u128).div_ceil(*multiplier.denom() as u128);
                (p, scaled.clamp(1, u64::MAX as u128) as u64)
            })
            .collect();
        Ok(SampleBudget {
            counts,
            repetitions: self.repetitions,
        })
    }

    /// Majority vote over `repetitions` independent runs; must be odd.
    pub fn with_repetitions(mut self, repetitions: u32) -> Result<Self> {
        if repetitions % 2 == 0 {
            return Err(Error::domain("repetitions must be odd"));
        }
        self.repetitions = repetitions;
        Ok(self)
    }

    pub fn count(&self, phase: Phase) -> Option<u64> {
        self.counts.get(&phase).copied()
    }

    fn require(&self, phase: Phase) -> Result<u64> {
        self.count(phase)
            .ok_or_else(|| Error::domain(alloc::format!("budget has no {phase:?} phase")))
    }

    pub fn repetitions(&self) -> u32 {
        self.repetitions
    }

    /// Samples one repetition may use.
    pub fn per_run(&self) -> u64 {
        self.counts.values().fold(0u64, |a, &c| a.saturating_add(c))
    }

    /// Samples all repetitions together may use.
    pub fn total(&self) -> u64 {
        self.per_run().saturating_mul(self.repetitions as u64)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Outcomes of weight `n/2`.
    pub t1: Option<u64>,
    /// Outcomes of weight `n/2 - 1` or `n/2 + 1` (even `n`), or of weight
    /// `(n-1)/2` or `(n+1)/2` (odd `n`).
    pub t2: Option<u64>,
    /// Estimated probability the decoder compared against its table.
    pub estimate: Option<f64>,
    /// Votes for the winning answer when amplified.
    pub votes: Option<(u32, u32)>,
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult<T> {
    pub answer: T,
    pub samples_used: u64,
    pub diagnostics: Diagnostics,
}

/// Runs `run` `repetitions` times and returns the most frequent answer,
/// ties going to the smallest. Inconclusive runs abstain.
pub fn amplify<T, F>(repetitions: u32, mut run: F) -> Result<RecoveryResult<T>>
where
    T: Ord + Clone,
    F: FnMut() -> Result<RecoveryResult<T>>,
{
    if repetitions <= 1 {
        return run();
    }
    let mut tally: BTreeMap<T, u32> = BTreeMap::new();
    let mut used = 0u64;
    let mut last = None;
    for _ in 0..repetitions {
        match run() {
            Ok(res) => {
                used = used.saturating_add(res.samples_used);
                *tally.entry(res.answer.clone()).or_default() += 1;
                last = Some(res);
            }
            Err(Error::Inconclusive { samples_used, .. }) => {
                used = used.saturating_add(samples_used)
            }
            Err(e) => return Err(e),
        }
    }
    let Some(mut result) = last else {
        return Err(Error::Inconclusive {
            samples_used: used,
            reason: "every repetition was inconclusive".to_string(),
        });
    };
    let (answer, votes) = tally
        .iter()
        .fold(None::<(&T, u32)>, |best, (a, &v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((a, v)),
        })
        .map(|(a, v)| (a.clone(), v))
        .expect("tally is non-empty");
    result.answer = answer;
    result.samples_used = used;
    result.diagnostics.votes = Some((votes, repetitions));
    Ok(result)
}

/// Parity of a sphere radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RadiusParity {
    Even,
    Odd,
}

impl RadiusParity {
    pub fn of(r: u32) -> Self {
        if r % 2 == 0 {
            RadiusParity::Even
        } else {
            RadiusParity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            RadiusParity::Even => 0,
            RadiusParity::Odd => 1,
        }
    }
}

/// Decides the parity of the radius of a hidden sphere for even `n`:
/// even iff some outcome of weight `n/2` is seen. Odd radii give weight
/// `n/2` probability exactly zero, so "odd" is never misreported as even.
pub fn recover_radius_parity<S: WeightSource + ?Sized>(
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<RadiusParity>> {
    let n = stream.dimension();
    if n % 2 != 0 {
        return Err(Error::domain("radius parity test needs even n"));
    }
    let k = budget.require(Phase::Parity)?;
    amplify(budget.repetitions(), || {
        let hist = stream.weight_histogram(k);
        let t1 = hist[(n / 2) as usize];
        Ok(RecoveryResult {
            answer: if t1 > 0 {
                RadiusParity::Even
            } else {
                RadiusParity::Odd
            },
            samples_used: k,
            diagnostics: Diagnostics {
                t1: Some(t1),
                ..Diagnostics::default()
            },
        })
    })
}

/// Exact decoding tables for sphere radius recovery in dimension `n`.
///
/// * even `n`: `pi_r(n/2)` for even `r`, and
///   `p(r) = pi_r(n/2-1) + pi_r(n/2+1)` for odd `r`;
/// * odd `n`: `p'(r) = pi_r((n-1)/2) + pi_r((n+1)/2)` for every `r <= n/2`.
#[derive(Debug, Clone)]
pub struct SphereDecoder {
    n: u32,
    center: Vec<(u32, Rational)>,
    flank: Vec<(u32, Rational)>,
}

impl SphereDecoder {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sphere decoder needs n >= 1"));
        }
        let mut center = Vec::new();
        let mut flank = Vec::new();
        for r in 0..=n / 2 {
            let probs = middle_probs(&pi_sphere(n, r)?);
            if n % 2 == 0 {
                if r % 2 == 0 {
                    center.push((r, probs.center.unwrap_or_default()));
                } else {
                    flank.push((r, probs.flank));
                }
            } else {
                flank.push((r, probs.flank));
            }
        }
        Ok(SphereDecoder { n, center, flank })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// `(r, pi_r(n/2))` for even `r` (empty for odd `n`).
    pub fn center_table(&self) -> &[(u32, Rational)] {
        &self.center
    }

    /// `(r, flank probability)` for the candidates decoded from flanks.
    pub fn flank_table(&self) -> &[(u32, Rational)] {
        &self.flank
    }

    /// Nearest table value to `hits / total`, ties to the smaller radius.
    fn nearest(table: &[(u32, Rational)], hits: u64, total: u64) -> Option<u32> {
        let est = exact::ratio(hits, total);
        table
            .iter()
            .map(|(r, p)| (*r, (&est - p).abs()))
            .fold(None::<(u32, Rational)>, |best, (r, d)| match best {
                Some((_, ref bd)) if *bd <= d => best,
                _ => Some((r, d)),
            })
            .map(|(r, _)| r)
    }

    /// Decodes a radius from a weight histogram of `total` samples.
    pub fn decode(&self, hist: &[u64]) -> Result<RecoveryResult<u32>> {
        let n = self.n;
        if hist.len() != n as usize + 1 {
            return Err(Error::domain("histogram length must be n + 1"));
        }
        let total: u64 = hist.iter().sum();
        if total == 0 {
            return Err(Error::Inconclusive {
                samples_used: 0,
                reason: "no samples".to_string(),
            });
        }
        let (answer, diagnostics) = if n % 2 == 0 {
            let h = (n / 2) as usize;
            let t1 = hist[h];
            let t2 = hist[h - 1] + hist[h + 1];
            let (answer, est, note) = if t1 > 0 {
                let est = t1 as f64 / total as f64;
                let r = Self::nearest(&self.center, t1, total);
                (r, est, None)
            } else {
                let est = t2 as f64 / total as f64;
                let r = Self::nearest(&self.flank, t2, total);
                (r, est, Some("no weight n/2 outcome: decoded as odd radius"))
            };
            (
                answer,
                Diagnostics {
                    t1: Some(t1),
                    t2: Some(t2),
                    estimate: Some(est),
                    note,
                    ..Diagnostics::default()
                },
            )
        } else {
            let h = ((n - 1) / 2) as usize;
            let t2 = hist[h] + hist[h + 1];
            (
                Self::nearest(&self.flank, t2, total),
                Diagnostics {
                    t2: Some(t2),
                    estimate: Some(t2 as f64 / total as f64),
                    ..Diagnostics::default()
                },
            )
        };
        let answer = answer.ok_or_else(|| Error::domain("empty decoding table"))?;
        Ok(RecoveryResult {
            answer,
            samples_used: total,
            diagnostics,
        })
    }

    /// Draws the `Estimate` phase from `stream` and decodes.
    pub fn recover<S: WeightSource + ?Sized>(
        &self,
        stream: &mut SampleStream<'_, S>,
        budget: &SampleBudget,
    ) -> Result<RecoveryResult<u32>> {
        if stream.dimension() != self.n {
            return Err(Error::DimensionMismatch {
                left: stream.dimension(),
                right: self.n,
            });
        }
        let k = budget.require(Phase::Estimate)?;
        amplify(budget.repetitions(), || {
            self.decode(&stream.weight_histogram(k))
        })
    }
}

/// Full radius recovery for even `n`: count outcomes of weight `n/2`
/// (`t1`) and `n/2 +- 1` (`t2`); if `t1 > 0` the radius is even and is
/// decoded from `pi_r(n/2)`, otherwise it is odd and decoded from `p(r)`.
pub fn recover_radius_even_n<S: WeightSource + ?Sized>(
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<u32>> {
    let n = stream.dimension();
    if n % 2 != 0 {
        return Err(Error::domain("even-n radius recovery called with odd n"));
    }
    SphereDecoder::new(n)?.recover(stream, budget)
}

/// Full radius recovery for odd `n` from the frequency of weights
/// `(n-1)/2` and `(n+1)/2`.
pub fn recover_radius_odd_n<S: WeightSource + ?Sized>(
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<u32>> {
    let n = stream.dimension();
    if n % 2 != 1 {
        return Err(Error::domain("odd-n radius recovery called with even n"));
    }
    SphereDecoder::new(n)?.recover(stream, budget)
}

/// Maximum-likelihood decoder over the ball weight laws for `r = 0..=n`.
#[derive(Debug, Clone)]
pub struct BallDecoder {
    n: u32,
    // log_probs[r][w]; -inf where the probability is zero
    log_probs: Vec<Vec<f64>>,
}

impl BallDecoder {
    pub fn new(n: u32) -> Result<Self> {
        let log_probs = (0..=n)
            .map(|r| {
                let d = pi_ball(n, r)?;
                Ok(d.numerators()
                    .iter()
                    .map(|num| exact::ln_ratio(num, d.denominator()))
                    .collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Ok(BallDecoder { n, log_probs })
    }

    pub fn log_likelihood(&self, r: u32, hist: &[u64]) -> f64 {
        self.log_probs[r as usize]
            .iter()
            .zip(hist)
            .filter(|(_, &h)| h > 0)
            .map(|(&lp, &h)| lp * h as f64)
            .sum()
    }

    pub fn decode(&self, hist: &[u64]) -> Result<RecoveryResult<u32>> {
        if hist.len() != self.n as usize + 1 {
            return Err(Error::domain("histogram length must be n + 1"));
        }
        let total: u64 = hist.iter().sum();
        let mut best = (0u32, f64::NEG_INFINITY);
        for r in 0..=self.n {
            let ll = self.log_likelihood(r, hist);
            if ll > best.1 {
                best = (r, ll);
            }
        }
        Ok(RecoveryResult {
            answer: best.0,
            samples_used: total,
            diagnostics: Diagnostics {
                estimate: Some(best.1),
                note: Some("estimate is the maximum log-likelihood"),
                ..Diagnostics::default()
            },
        })
    }
}

/// Radius of a hidden Hamming ball by maximum likelihood over the full
/// weight histogram.
pub fn recover_ball_radius<S: WeightSource + ?Sized>(
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<u32>> {
    let decoder = BallDecoder::new(stream.dimension())?;
    let k = budget.require(Phase::Estimate)?;
    amplify(budget.repetitions(), || {
        decoder.decode(&stream.weight_histogram(k))
    })
}

/// Estimates `|S| / 2^n` as the frequency of the all-zero outcome.
pub fn estimate_size<S: WeightSource + ?Sized>(
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<Rational>> {
    let k = budget.require(Phase::Estimate)?;
    // |z| = 0 iff z = 0^n, so the weight histogram suffices.
    let zeros = stream.weight_histogram(k)[0];
    let estimate = exact::ratio(zeros, k);
    Ok(RecoveryResult {
        diagnostics: Diagnostics {
            estimate: Some(exact::to_f64(&estimate)),
            ..Diagnostics::default()
        },
        answer: estimate,
        samples_used: k,
    })
}

/// Disjoint juntas, each given by its variable mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JuntaFamily {
    n: u32,
    masks: Vec<u64>,
}

impl JuntaFamily {
    /// Validates that every member is a junta and that their variable sets
    /// are pairwise disjoint.
    pub fn new(members: &[SubsetSpec]) -> Result<Self> {
        let n = members
            .first()
            .map(|m| m.dimension())
            .ok_or_else(|| Error::domain("empty junta family"))?;
        let mut masks = Vec::with_capacity(members.len());
        for m in members {
            if m.dimension() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: m.dimension(),
                });
            }
            let SubsetKind::Junta { .. } = m.kind() else {
                return Err(Error::domain("junta family member is not a junta"));
            };
            let mask = m.junta_mask().unwrap_or(0);
            if masks.iter().any(|&other| other & mask != 0) {
                return Err(Error::domain("junta variable sets overlap"));
            }
            masks.push(mask);
        }
        Ok(JuntaFamily { n, masks })
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Member whose variable set contains the support of `z`.
    pub fn classify(&self, z: u64) -> Option<usize> {
        if z == 0 {
            return None;
        }
        self.masks.iter().position(|&m| z & !m == 0)
    }
}

/// Identifies which junta of `family` is hidden: the first non-zero
/// outcome has its support inside that junta's variables. Returns the
/// index into the family.
pub fn recover_junta<S: CubeSource + ?Sized>(
    family: &JuntaFamily,
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<usize>> {
    if stream.dimension() != family.n {
        return Err(Error::DimensionMismatch {
            left: stream.dimension(),
            right: family.n,
        });
    }
    let limit = budget.require(Phase::Draws)?;
    amplify(budget.repetitions(), || {
        for used in 1..=limit {
            let z = stream.outcome();
            if z == 0 {
                continue;
            }
            return match family.classify(z) {
                Some(k) => Ok(RecoveryResult {
                    answer: k,
                    samples_used: used,
                    diagnostics: Diagnostics::default(),
                }),
                None => Err(Error::domain(alloc::format!(
                    "outcome {} is not supported on any single junta",
                    bits::format(z, family.n)
                ))),
            };
        }
        Err(Error::Inconclusive {
            samples_used: limit,
            reason: "only zero outcomes".to_string(),
        })
    })
}

/// Recovers the parity vector `t` of a hidden parity set: every non-zero
/// outcome equals `t`.
pub fn recover_parity_set<S: CubeSource + ?Sized>(
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<u64>> {
    let limit = budget.require(Phase::Draws)?;
    amplify(budget.repetitions(), || {
        for used in 1..=limit {
            let z = stream.outcome();
            if z != 0 {
                return Ok(RecoveryResult {
                    answer: z,
                    samples_used: used,
                    diagnostics: Diagnostics::default(),
                });
            }
        }
        Err(Error::Inconclusive {
            samples_used: limit,
            reason: "only zero outcomes".to_string(),
        })
    })
}

/// Recovers the `k`-bit prefix vector `t` of a generalised parity set from
/// the first outcome with a non-zero prefix. When `t = 0^k` every outcome
/// has a zero prefix and the procedure reports the case as inconclusive.
pub fn recover_generalised_parity<S: CubeSource + ?Sized>(
    k: u32,
    stream: &mut SampleStream<'_, S>,
    budget: &SampleBudget,
) -> Result<RecoveryResult<u64>> {
    let n = stream.dimension();
    if k == 0 || k > n {
        return Err(Error::domain("prefix length must lie in 1..=n"));
    }
    let limit = budget.require(Phase::Draws)?;
    amplify(budget.repetitions(), || {
        for used in 1..=limit {
            let prefix = stream.outcome() >> (n - k);
            if prefix != 0 {
                return Ok(RecoveryResult {
                    answer: prefix,
                    samples_used: used,
                    diagnostics: Diagnostics::default(),
                });
            }
        }
        Err(Error::Inconclusive {
            samples_used: limit,
            reason:
                "only zero prefixes; t = 0^k cannot be told apart from the suffix function alone"
                    .to_string(),
        })
    })
}
