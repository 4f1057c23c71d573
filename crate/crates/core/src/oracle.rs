//! The colouring, shifting and uncolouring oracles.
//!
//! An instance hides a set `S` of `n`-bit strings behind three functions on
//! `2n`-bit strings:
//!
//! * `c(x)`: the colour of `x`; every colour class has `|S|` points except
//!   possibly the last, which takes the remainder;
//! * `s(x, c0)`: for `c(x) = c0`, the point `S[pi_c0(x)] + sigma(c0)`;
//! * `c_inv(c0, y)`: the inverse of `x -> (c(x), s(x, c(x)))`.
//!
//! The colouring is a keyed Feistel permutation of `{0,1}^{2n}` cut into
//! consecutive blocks of `|S|`, so nothing of size `2^{2n}` is stored.
//! Replies to invalid queries are keyed hashes of the query.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer as _;
use rand::{Rng, RngCore};

use crate::bits;
use crate::error::{Error, Result};
use crate::sampler::{RngState, ShiftedState};
use crate::subset::SubsetSpec;

/// Largest base dimension `n` an instance supports (domain of `2n` bits).
pub const MAX_ORACLE_DIMENSION: u32 = 16;
/// Largest domain width for which [`OracleInstance::colour_table`] works.
pub const MAX_TABLE_BITS: u32 = 24;

const FEISTEL_ROUNDS: usize = 6;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Colour,
    Shift,
    Uncolour,
}

/// Query counts per oracle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounts {
    pub c: u64,
    pub s: u64,
    pub c_inv: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.c + self.s + self.c_inv
    }

    /// Per-oracle difference `self - earlier`.
    pub fn since(&self, earlier: &QueryCounts) -> QueryCounts {
        QueryCounts {
            c: self.c - earlier.c,
            s: self.s - earlier.s,
            c_inv: self.c_inv - earlier.c_inv,
        }
    }
}

#[derive(Debug)]
pub struct OracleInstance {
    n: u32,
    set: Vec<u64>,
    colours: u64,
    remainder: u64,
    round_keys: [u64; FEISTEL_ROUNDS],
    shift_key: u64,
    bijection_key: u64,
    garbage_key: u64,
    count_c: AtomicU64,
    count_s: AtomicU64,
    count_c_inv: AtomicU64,
}

/// Builds an instance hiding `spec` with pseudo-random colouring, shifts
/// and per-colour bijections derived from `seed`.
pub fn build_instance(spec: &SubsetSpec, seed: u64) -> Result<OracleInstance> {
    OracleInstance::new(spec, seed)
}

impl OracleInstance {
    pub fn new(spec: &SubsetSpec, seed: u64) -> Result<Self> {
        let n = spec.dimension();
        if n == 0 || n > MAX_ORACLE_DIMENSION {
            return Err(Error::Capacity {
                what: "oracle dimension",
                requested: n as u64,
                limit: MAX_ORACLE_DIMENSION as u64,
            });
        }
        let set = spec.materialise()?;
        let size = set.len() as u64;
        let domain = 1u64 << (2 * n);
        let mut rng = RngState::new(seed, 0x6f72_6163_6c65);
        let mut round_keys = [0u64; FEISTEL_ROUNDS];
        for k in round_keys.iter_mut() {
            *k = rng.next_u64();
        }
        Ok(OracleInstance {
            n,
            colours: domain.div_ceil(size),
            remainder: domain % size,
            set,
            round_keys,
            shift_key: rng.next_u64(),
            bijection_key: rng.next_u64(),
            garbage_key: rng.next_u64(),
            count_c: AtomicU64::new(0),
            count_s: AtomicU64::new(0),
            count_c_inv: AtomicU64::new(0),
        })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// The hidden set, sorted; `S[j]` is its `j`-th element.
    pub fn hidden_set(&self) -> &[u64] {
        &self.set
    }

    /// Number of colours, `ceil(2^{2n} / |S|)`. Colours are `1..=count`.
    pub fn colour_count(&self) -> u64 {
        self.colours
    }

    /// Points of colour `c0`; zero for an invalid colour.
    pub fn class_size(&self, c0: u64) -> u64 {
        if c0 == 0 || c0 > self.colours {
            0
        } else if c0 == self.colours && self.remainder != 0 {
            self.remainder
        } else {
            self.set.len() as u64
        }
    }

    /// Whether `c0` is the single short colour class.
    pub fn is_deficient(&self, c0: u64) -> bool {
        self.remainder != 0 && c0 == self.colours
    }

    /// Hidden shift `sigma(c0)`.
    pub fn sigma(&self, c0: u64) -> u64 {
        splitmix(self.shift_key ^ splitmix(c0)) & bits::mask(self.n)
    }

    pub fn counts(&self) -> QueryCounts {
        QueryCounts {
            c: self.count_c.load(Ordering::Relaxed),
            s: self.count_s.load(Ordering::Relaxed),
            c_inv: self.count_c_inv.load(Ordering::Relaxed),
        }
    }

    fn bump(&self, kind: OracleKind) {
        let counter = match kind {
            OracleKind::Colour => &self.count_c,
            OracleKind::Shift => &self.count_s,
            OracleKind::Uncolour => &self.count_c_inv,
        };
        counter.fetch_add(1, Ordering::Relaxed);
    }

    fn feistel_round(&self, k: u64, half: u64) -> u64 {
        splitmix(k ^ half) & bits::mask(self.n)
    }

    fn permute(&self, x: u64) -> u64 {
        let m = bits::mask(self.n);
        let (mut l, mut r) = (x >> self.n, x & m);
        for &k in &self.round_keys {
            (l, r) = (r, l ^ self.feistel_round(k, r));
        }
        (l << self.n) | r
    }

    fn unpermute(&self, y: u64) -> u64 {
        let m = bits::mask(self.n);
        let (mut l, mut r) = (y >> self.n, y & m);
        for &k in self.round_keys.iter().rev() {
            (l, r) = (r ^ self.feistel_round(k, l), l);
        }
        (l << self.n) | r
    }

    // pi_c0(j) = (a j + b) mod |S| with gcd(a, |S|) = 1.
    fn bijection(&self, c0: u64) -> (u64, u64) {
        let m = self.set.len() as u64;
        let h = splitmix(self.bijection_key ^ splitmix(c0));
        let mut a = (h % m).max(1);
        while a.gcd(&m) != 1 {
            a += 1;
        }
        (a % m.max(1), (h >> 32) % m)
    }

    fn apply_bijection(&self, c0: u64, j: u64) -> u64 {
        let m = self.set.len() as u64;
        let (a, b) = self.bijection(c0);
        ((a as u128 * j as u128 + b as u128) % m as u128) as u64
    }

    fn invert_bijection(&self, c0: u64, k: u64) -> u64 {
        let m = self.set.len() as i128;
        if m == 1 {
            return 0;
        }
        let (a, b) = self.bijection(c0);
        let inv = (a as i128).extended_gcd(&m).x.rem_euclid(m);
        ((k as i128 - b as i128).rem_euclid(m) * inv % m) as u64
    }

    fn garbage(&self, tag: u64, a: u64, b: u64, width: u32) -> u64 {
        splitmix(self.garbage_key ^ splitmix(tag ^ splitmix(a ^ splitmix(b)))) & bits::mask(width)
    }

    fn colour_of(&self, x: u64) -> u64 {
        self.permute(x & bits::mask(2 * self.n)) / self.set.len() as u64 + 1
    }

    fn shift_of(&self, x: u64, c0: u64) -> u64 {
        let x = x & bits::mask(2 * self.n);
        let p = self.permute(x);
        let m = self.set.len() as u64;
        if p / m + 1 != c0 {
            return self.garbage(1, x, c0, self.n);
        }
        self.set[self.apply_bijection(c0, p % m) as usize] ^ self.sigma(c0)
    }

    fn uncolour(&self, c0: u64, y: u64) -> u64 {
        let m = self.set.len() as u64;
        let fallback = || self.garbage(2, c0, y, 2 * self.n);
        if c0 == 0 || c0 > self.colours {
            return fallback();
        }
        let Ok(k) = self.set.binary_search(&(y ^ self.sigma(c0))) else {
            return fallback();
        };
        let j = self.invert_bijection(c0, k as u64);
        if j >= self.class_size(c0) {
            return fallback();
        }
        self.unpermute((c0 - 1) * m + j)
    }

    /// Colouring oracle `c`.
    pub fn query_c(&self, x: u64) -> u64 {
        self.bump(OracleKind::Colour);
        self.colour_of(x)
    }

    /// Shifting oracle `s`.
    pub fn query_s(&self, x: u64, c0: u64) -> u64 {
        self.bump(OracleKind::Shift);
        self.shift_of(x, c0)
    }

    /// Uncolouring oracle `c^{-1}`.
    pub fn query_c_inv(&self, c0: u64, y: u64) -> u64 {
        self.bump(OracleKind::Uncolour);
        self.uncolour(c0, y)
    }

    /// Members of colour class `c0`, without counting queries.
    pub fn class_members(&self, c0: u64) -> Vec<u64> {
        let m = self.set.len() as u64;
        (0..self.class_size(c0))
            .map(|j| self.unpermute((c0 - 1) * m + j))
            .collect()
    }

    /// The full colouring as a table indexed by `x`, for `2n <= 24`.
    pub fn colour_table(&self) -> Result<Vec<u64>> {
        if 2 * self.n > MAX_TABLE_BITS {
            return Err(Error::Capacity {
                what: "colour table width",
                requested: 2 * self.n as u64,
                limit: MAX_TABLE_BITS as u64,
            });
        }
        Ok((0..1u64 << (2 * self.n))
            .map(|x| self.colour_of(x))
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub colour: u64,
    pub state: ShiftedState,
    /// The colour class was the short one, so the state is over a proper
    /// subset of `S`.
    pub deficient: bool,
}

/// Simulates the three-query preparation of `|S + sigma(c0)>`: query `c`
/// on a uniform superposition and measure the colour, query `s` on the
/// collapsed class, then erase the `2n`-bit register with `c^{-1}`.
///
/// The measured colour is drawn by colouring a uniform random point, which
/// gives each colour probability proportional to its class size. The class
/// is then evaluated in superposition, so each oracle is charged once.
pub fn quantum_extract(instance: &OracleInstance, rng: &mut RngState) -> Result<Extraction> {
    let x = rng.random_range(0..1u64 << (2 * instance.n));
    let c0 = instance.query_c(x);
    extract_colour(instance, c0)
}

/// The last two steps of [`quantum_extract`] once colour `c0` has been
/// measured: one `s` query and one `c^{-1}` query on the whole class.
pub fn extract_colour(instance: &OracleInstance, c0: u64) -> Result<Extraction> {
    if instance.class_size(c0) == 0 {
        return Err(Error::domain(alloc::format!("{c0} is not a colour")));
    }
    let members = instance.class_members(c0);
    instance.bump(OracleKind::Shift);
    let shifted: Vec<u64> = members.iter().map(|&x| instance.shift_of(x, c0)).collect();
    instance.bump(OracleKind::Uncolour);
    for (&x, &y) in members.iter().zip(&shifted) {
        if instance.uncolour(c0, y) != x {
            return Err(Error::domain(
                "uncolouring failed to disentangle the register",
            ));
        }
    }
    Ok(Extraction {
        colour: c0,
        state: ShiftedState::from_support(instance.n, &shifted, 0)?,
        deficient: instance.is_deficient(c0),
    })
}

/// Record of a classical query experiment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLog {
    pub counts: QueryCounts,
    /// Two distinct points with the same colour, if found.
    pub collision: Option<(u64, u64)>,
    /// `(query, reply)` pairs in order.
    pub transcript: Vec<(u64, u64)>,
}

impl QueryLog {
    pub fn collision_found(&self) -> bool {
        self.collision.is_some()
    }

    /// Queries made up to and including the colliding one, if any.
    pub fn queries_to_collision(&self) -> Option<u64> {
        self.collision.map(|_| self.transcript.len() as u64)
    }
}

/// A classical algorithm that probes the colouring oracle.
pub trait ProbeStrategy {
    /// Next point to query, given the `(query, colour)` pairs so far, or
    /// `None` to stop.
    fn next_probe(&mut self, n: u32, history: &[(u64, u64)], rng: &mut RngState) -> Option<u64>;
}

/// Queries distinct uniformly random `2n`-bit points.
#[derive(Debug, Clone, Default)]
pub struct RandomProbe {
    seen: BTreeSet<u64>,
}

impl ProbeStrategy for RandomProbe {
    fn next_probe(&mut self, n: u32, _history: &[(u64, u64)], rng: &mut RngState) -> Option<u64> {
        let domain = 1u64 << (2 * n);
        if self.seen.len() as u64 >= domain {
            return None;
        }
        loop {
            let x = rng.random_range(0..domain);
            if self.seen.insert(x) {
                return Some(x);
            }
        }
    }
}

/// Runs `strategy` against the colouring oracle until two probes share a
/// colour or `max_queries` is spent. The log's counts cover only this run.
pub fn run_strategy<P: ProbeStrategy + ?Sized>(
    instance: &OracleInstance,
    strategy: &mut P,
    max_queries: u64,
    rng: &mut RngState,
) -> QueryLog {
    let mut log = QueryLog::default();
    let mut by_colour = alloc::collections::BTreeMap::new();
    while (log.transcript.len() as u64) < max_queries {
        let Some(x) = strategy.next_probe(instance.n, &log.transcript, rng) else {
            break;
        };
        let colour = instance.query_c(x);
        log.counts.c += 1;
        log.transcript.push((x, colour));
        if let Some(&earlier) = by_colour.get(&colour) {
            if earlier != x {
                log.collision = Some((earlier, x));
                break;
            }
        }
        by_colour.insert(colour, x);
    }
    log
}

/// Random-probe collision search.
pub fn classical_collision_experiment(
    instance: &OracleInstance,
    max_queries: u64,
    rng: &mut RngState,
) -> QueryLog {
    run_strategy(instance, &mut RandomProbe::default(), max_queries, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::SubsetKind;
    use alloc::vec;

    #[test]
    fn feistel_is_a_permutation() {
        let inst = build_instance(&SubsetSpec::sphere(4, 1).unwrap(), 1).unwrap();
        let mut seen = vec![false; 256];
        for x in 0..256 {
            let y = inst.permute(x);
            assert_eq!(inst.unpermute(y), x);
            assert!(!seen[y as usize]);
            seen[y as usize] = true;
        }
    }

    #[test]
    fn class_sizes_for_sphere_n3() {
        let inst = build_instance(&SubsetSpec::sphere(3, 1).unwrap(), 5).unwrap();
        assert_eq!(inst.colour_count(), 22);
        let table = inst.colour_table().unwrap();
        let mut hist = [0u64; 23];
        for c in table {
            hist[c as usize] += 1;
        }
        assert_eq!(hist[0], 0);
        assert!(hist[1..22].iter().all(|&h| h == 3));
        assert_eq!(hist[22], 1);
        assert!(inst.is_deficient(22));
    }

    #[test]
    fn singleton_set_has_injective_colouring() {
        let inst = build_instance(&SubsetSpec::explicit(3, vec![5]).unwrap(), 2).unwrap();
        let mut rng = RngState::new(0, 0);
        let log = classical_collision_experiment(&inst, 64, &mut rng);
        assert!(!log.collision_found());
        assert_eq!(log.counts.c, 64);
    }

    #[test]
    fn bijections_are_bijections() {
        let inst = build_instance(&SubsetSpec::sphere(6, 2).unwrap(), 3).unwrap();
        let m = inst.hidden_set().len() as u64;
        for c0 in [1, 7, 100] {
            let mut img: Vec<u64> = (0..m).map(|j| inst.apply_bijection(c0, j)).collect();
            for j in 0..m {
                assert_eq!(inst.invert_bijection(c0, inst.apply_bijection(c0, j)), j);
            }
            img.sort_unstable();
            assert_eq!(img, (0..m).collect::<Vec<_>>());
        }
    }

    #[test]
    fn round_trip_on_random_probes() {
        let inst = build_instance(&SubsetSpec::ball(5, 2).unwrap(), 11).unwrap();
        let mut rng = RngState::new(4, 0);
        for _ in 0..1000 {
            let x = rng.random_range(0..1u64 << 10);
            let c0 = inst.query_c(x);
            let y = inst.query_s(x, c0);
            assert!(inst.hidden_set().contains(&(y ^ inst.sigma(c0))));
            assert_eq!(inst.query_c_inv(c0, y), x);
        }
        assert_eq!(
            inst.counts(),
            QueryCounts {
                c: 1000,
                s: 1000,
                c_inv: 1000
            }
        );
    }

    #[test]
    fn invalid_queries_are_deterministic() {
        let inst = build_instance(&SubsetSpec::sphere(4, 2).unwrap(), 9).unwrap();
        let x = 0x3c;
        let other = inst.query_c(x) % inst.colour_count() + 1;
        assert_eq!(inst.query_s(x, other), inst.query_s(x, other));
        assert_eq!(inst.query_c_inv(0, 3), inst.query_c_inv(0, 3));
        assert!(inst.query_c_inv(0, 3) < 256);
    }

    #[test]
    fn extraction_costs_three_queries() {
        let spec = SubsetSpec::new(
            4,
            SubsetKind::Junta {
                vars: vec![1, 3],
                table: vec![false, true, true, true],
            },
        )
        .unwrap();
        let inst = build_instance(&spec, 21).unwrap();
        let mut rng = RngState::new(1, 0);
        for _ in 0..20 {
            let before = inst.counts();
            let ex = quantum_extract(&inst, &mut rng).unwrap();
            assert_eq!(
                inst.counts().since(&before),
                QueryCounts {
                    c: 1,
                    s: 1,
                    c_inv: 1
                }
            );
            let sigma = inst.sigma(ex.colour);
            let mut expected: Vec<u64> = inst.hidden_set().iter().map(|&p| p ^ sigma).collect();
            expected.sort_unstable();
            assert_eq!(ex.state.support(), expected);
        }
    }

    #[test]
    fn collisions_share_a_colour() {
        let inst =
            build_instance(&SubsetSpec::parity_set(6, (1..=6).collect()).unwrap(), 4).unwrap();
        let mut rng = RngState::new(3, 0);
        let log = classical_collision_experiment(&inst, 10_000, &mut rng);
        let (a, b) = log.collision.unwrap();
        assert_ne!(a, b);
        assert_eq!(inst.query_c(a), inst.query_c(b));
        assert_eq!(log.queries_to_collision(), Some(log.counts.c));
    }
}
