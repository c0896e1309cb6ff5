//! Seeded, valuation-stratified samplers for property checking.
//!
//! Uniform sampling almost never produces two elements of equal valuation
//! once the valuation range is wide, so every sampler can be asked for
//! tuples whose valuations collide or form a chain.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::funcring::{CompactSpace, LCFunction};
use crate::padic::{rational_pow_p, PAdic, Rational};

/// Shape of the valuation profile of a sampled tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    /// Independent elements, zeros allowed.
    Free,
    /// All elements share one valuation (pointwise, for functions).
    Collide,
    /// Valuations are non-decreasing along the tuple; zeros only at the end.
    Chain,
}

impl Stratum {
    pub fn pick(rng: &mut ChaCha8Rng) -> Stratum {
        match rng.gen_range(0..3) {
            0 => Stratum::Free,
            1 => Stratum::Collide,
            _ => Stratum::Chain,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for one trial of one check, so trials can run in
/// any order and still reproduce.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed) ^ splitmix64(trial ^ 0x5eed));
    rng.set_stream(stream);
    rng
}

pub trait Sampler<E>: Send + Sync {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize, stratum: Stratum) -> Vec<E>;
}

/// Random elements of `Q_p` with exact `N`-digit representatives.
#[derive(Debug, Clone)]
pub struct PAdicSampler {
    pub prime: u32,
    pub precision: u32,
    pub min_valuation: i64,
    pub max_valuation: i64,
    pub zero_rate: f64,
}

impl PAdicSampler {
    pub fn new(prime: u32, precision: u32) -> Self {
        PAdicSampler {
            prime,
            precision,
            min_valuation: -6,
            max_valuation: 6,
            zero_rate: 0.05,
        }
    }

    pub fn with_valuations(mut self, min: i64, max: i64) -> Self {
        self.min_valuation = min;
        self.max_valuation = max;
        self
    }

    pub fn with_zero_rate(mut self, rate: f64) -> Self {
        self.zero_rate = rate;
        self
    }

    /// A random element of valuation exactly `v`.
    pub fn with_valuation(&self, rng: &mut ChaCha8Rng, v: i64) -> PAdic {
        let p = self.prime;
        if rng.gen_bool(0.1) {
            // small structured units such as -1, 2, -1/2 produce exact
            // cancellations that random digits never do
            let mut n: i64 = rng.gen_range(1..6);
            while n % p as i64 == 0 {
                n += 1;
            }
            let mut d: i64 = rng.gen_range(1..4);
            while d % p as i64 == 0 {
                d += 1;
            }
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let r = Rational::new(BigInt::from(sign * n), BigInt::from(d)) * rational_pow_p(p, v);
            return PAdic::embed(&r, p, self.precision);
        }
        let mut digits = Vec::with_capacity(self.precision as usize);
        digits.push(rng.gen_range(1..p));
        for _ in 1..self.precision {
            digits.push(rng.gen_range(0..p));
        }
        PAdic::from_digits(p, v, &digits).expect("valid digits")
    }

    fn valuation(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(self.min_valuation..=self.max_valuation)
    }

    /// `n` values following `stratum`.
    pub fn values(&self, rng: &mut ChaCha8Rng, n: usize, stratum: Stratum) -> Vec<PAdic> {
        match stratum {
            Stratum::Free => (0..n)
                .map(|_| {
                    if rng.gen_bool(self.zero_rate) {
                        PAdic::zero(self.prime, self.precision)
                    } else {
                        let v = self.valuation(rng);
                        self.with_valuation(rng, v)
                    }
                })
                .collect(),
            Stratum::Collide => {
                let v = self.valuation(rng);
                (0..n).map(|_| self.with_valuation(rng, v)).collect()
            }
            Stratum::Chain => {
                let mut vals: Vec<i64> = (0..n).map(|_| self.valuation(rng)).collect();
                vals.sort_unstable();
                let zero_tail = rng.gen_bool(self.zero_rate * 2.0);
                vals.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        if zero_tail && i + 1 == n {
                            PAdic::zero(self.prime, self.precision)
                        } else {
                            self.with_valuation(rng, v)
                        }
                    })
                    .collect()
            }
        }
    }
}

impl Sampler<PAdic> for PAdicSampler {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize, stratum: Stratum) -> Vec<PAdic> {
        self.values(rng, n, stratum)
    }
}

/// Random rationals `+-p^v a/b` with `a`, `b` prime to `p`.
#[derive(Debug, Clone)]
pub struct RationalSampler {
    pub prime: u32,
    pub min_valuation: i64,
    pub max_valuation: i64,
    pub zero_rate: f64,
}

impl RationalSampler {
    pub fn new(prime: u32) -> Self {
        RationalSampler {
            prime,
            min_valuation: -6,
            max_valuation: 6,
            zero_rate: 0.05,
        }
    }

    pub fn with_valuation(&self, rng: &mut ChaCha8Rng, v: i64) -> Rational {
        let p = self.prime as i64;
        let coprime =|rng: &mut ChaCha8Rng| loop {
            let x: i64 = rng.gen_range(1..100_000);
            if x % p != 0 {
                return x;
            }
        };
        let a = coprime(rng);
        let b = coprime(rng);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new(BigInt::from(sign * a), BigInt::from(b)) * rational_pow_p(self.prime, v)
    }

    fn valuation(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(self.min_valuation..=self.max_valuation)
    }
}

impl Sampler<Rational> for RationalSampler {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize, stratum: Stratum) -> Vec<Rational> {
        match stratum {
            Stratum::Free => (0..n)
                .map(|_| {
                    if rng.gen_bool(self.zero_rate) {
                        Rational::from_integer(0.into())
                    } else {
                        let v = self.valuation(rng);
                        self.with_valuation(rng, v)
                    }
                })
                .collect(),
            Stratum::Collide => {
                let v = self.valuation(rng);
                (0..n).map(|_| self.with_valuation(rng, v)).collect()
            }
            Stratum::Chain => {
                let mut vals: Vec<i64> = (0..n).map(|_| self.valuation(rng)).collect();
                vals.sort_unstable();
                vals.into_iter().map(|v| self.with_valuation(rng, v)).collect()
            }
        }
    }
}

/// Random locally constant functions. Each tuple lives on one space drawn
/// from `spaces`; strata apply point by point.
#[derive(Debug, Clone)]
pub struct FunctionSampler {
    pub spaces: Vec<CompactSpace>,
    pub values: PAdicSampler,
}

impl FunctionSampler {
    pub fn new(spaces: Vec<CompactSpace>, values: PAdicSampler) -> Self {
        assert!(!spaces.is_empty());
        FunctionSampler { spaces, values }
    }

    /// Finite spaces of 1..=8 points and `Z_p` at levels 0..=3.
    pub fn desk_scale(prime: u32, precision: u32) -> Self {
        let mut spaces: Vec<CompactSpace> = (1..=8).map(CompactSpace::Finite).collect();
        spaces.extend((0..=3).map(|k| CompactSpace::ZpLevel { k, p: prime }));
        FunctionSampler::new(spaces, PAdicSampler::new(prime, precision).with_zero_rate(0.15))
    }

    pub fn space(&self, rng: &mut ChaCha8Rng) -> CompactSpace {
        self.spaces[rng.gen_range(0..self.spaces.len())]
    }

    pub fn draw_on(&self, rng: &mut ChaCha8Rng, space: CompactSpace, n: usize, stratum: Stratum) -> Vec<LCFunction> {
        let mut columns: Vec<Vec<PAdic>> = vec![Vec::with_capacity(space.size()); n];
        for _ in 0..space.size() {
            for (col, v) in columns.iter_mut().zip(self.values.values(rng, n, stratum)) {
                col.push(v);
            }
        }
        columns
            .into_iter()
            .map(|vals| LCFunction::new(space, self.values.prime, vals).expect("sampled shape"))
            .collect()
    }
}

impl Sampler<LCFunction> for FunctionSampler {
    fn draw(&self, rng: &mut ChaCha8Rng, n: usize, stratum: Stratum) -> Vec<LCFunction> {
        let space = self.space(rng);
        self.draw_on(rng, space, n, stratum)
    }
}
