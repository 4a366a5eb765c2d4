//! Exact samplers for the input models.
//!
//! * uniform R: both count vectors from `n` IID uniform picks among the urns
//!   (Maxwell-Boltzmann), equivalently IID Poisson conditioned on the sum;
//! * multiset R: both vectors uniform over compositions of `n` into `m`
//!   parts (Bose-Einstein), equivalently IID geometric conditioned;
//! * iid: `2m` unconditioned draws from a count distribution `F`;
//! * conditioned: IID draws from `F` conditioned on each color summing to
//!   `n`, sampled sequentially from a convolution table (no rejection).
//!
//! All samplers are pure functions of the supplied random stream.

use rand::Rng;
use rand_distr::Distribution as _;
use thiserror::Error;

use crate::walk::RootConfig;

/// Tolerance for a custom pmf summing to one.
pub const PMF_SUM_TOLERANCE: f64 = 1e-12;

/// Cap on convolution-table entries (about 800 MB of `f64`).
const MAX_TABLE_ENTRIES: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("distribution mean must be positive, got {0}")]
    NonPositiveMean(f64),
    #[error("custom pmf must have at least one positive entry")]
    EmptyPmf,
    #[error("custom pmf entry {index} is negative or not finite")]
    InvalidMass { index: usize },
    #[error("custom pmf sums to {sum}, not 1 (tolerance {PMF_SUM_TOLERANCE})")]
    MassNotNormalized { sum: f64 },
    #[error("support has gcd {gcd}, but the input models need an aperiodic distribution")]
    PeriodicSupport { gcd: u64 },
    #[error("sum {n} is not attainable by {m} draws from this distribution")]
    UnattainableSum { m: usize, n: u64 },
    #[error("conditioning table would need {entries} entries (cap {MAX_TABLE_ENTRIES})")]
    TableTooLarge { entries: u64 },
    #[error("need at least one urn")]
    NoUrns,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Poisson,
    Geometric,
    Custom(Vec<f64>),
}

/// A distribution on the nonnegative integers used for ball counts: Poisson,
/// geometric (parameterized by its mean), or a finite pmf table.
///
/// Construction enforces the aperiodicity assumption of the conditioned
/// model: the gcd of the support must be 1. The single exception is a point
/// mass at zero, which is accepted as the degenerate empty-urn case.
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    kind: Kind,
    mean: f64,
    variance: f64,
}

impl CountDistribution {
    /// Poisson with the given mean; variance equals the mean.
    pub fn poisson(mean: f64) -> Result<Self, SamplerError> {
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(SamplerError::NonPositiveMean(mean));
        }
        Ok(Self {
            kind: Kind::Poisson,
            mean,
            variance: mean,
        })
    }

    /// Geometric on `0, 1, 2, ..` with the given mean: `P(k) = (1-q) q^k`
    /// with `q = mean / (1 + mean)`; variance is `mean * (mean + 1)`.
    pub fn geometric(mean: f64) -> Result<Self, SamplerError> {
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(SamplerError::NonPositiveMean(mean));
        }
        Ok(Self {
            kind: Kind::Geometric,
            mean,
            variance: mean * (mean + 1.0),
        })
    }

    /// Finite pmf table over `0..pmf.len()`. Must sum to 1 and have an
    /// aperiodic support.
    pub fn custom(pmf: Vec<f64>) -> Result<Self, SamplerError> {
        for (index, &p) in pmf.iter().enumerate() {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(SamplerError::InvalidMass { index });
            }
        }
        let sum: f64 = pmf.iter().sum();
        if pmf.is_empty() || pmf.iter().all(|&p| p == 0.0) {
            return Err(SamplerError::EmptyPmf);
        }
        if (sum - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(SamplerError::MassNotNormalized { sum });
        }
        let gcd = pmf
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .fold(0u64, |acc, (k, _)| gcd(acc, k as u64));
        if gcd > 1 {
            return Err(SamplerError::PeriodicSupport { gcd });
        }
        let mean: f64 = pmf.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
        let second: f64 = pmf
            .iter()
            .enumerate()
            .map(|(k, &p)| (k as f64) * (k as f64) * p)
            .sum();
        Ok(Self {
            kind: Kind::Custom(pmf),
            mean,
            variance: second - mean * mean,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// "poisson", "geometric" or "custom"; used in report labels.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Poisson => "poisson",
            Kind::Geometric => "geometric",
            Kind::Custom(_) => "custom",
        }
    }

    /// Probability mass at `k`.
    pub fn pmf(&self, k: u64) -> f64 {
        match &self.kind {
            Kind::Poisson => {
                // exp(-mean + k ln mean - ln k!)
                let k_f = k as f64;
                let log_p = -self.mean + k_f * self.mean.ln() - ln_factorial(k);
                log_p.exp()
            }
            Kind::Geometric => {
                let q = self.mean / (1.0 + self.mean);
                (1.0 - q) * q.powi(k as i32)
            }
            Kind::Custom(pmf) => pmf.get(k as usize).copied().unwrap_or(0.0),
        }
    }

    /// One draw.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.kind {
            Kind::Poisson => {
                let dist = rand_distr::Poisson::new(self.mean).expect("validated mean");
                dist.sample(rng) as u64
            }
            Kind::Geometric => {
                let p = 1.0 / (1.0 + self.mean);
                let dist = rand_distr::Geometric::new(p).expect("validated mean");
                dist.sample(rng)
            }
            Kind::Custom(pmf) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (k, &p) in pmf.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        return k as u64;
                    }
                }
                (pmf.len() - 1) as u64
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Counts of `n` IID uniform picks among `m` urns.
pub fn multinomial_row<R: Rng + ?Sized>(m: usize, n: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; m];
    for _ in 0..n {
        counts[rng.random_range(0..m)] += 1;
    }
    counts
}

/// A uniform composition of `n` into `m` nonnegative parts, by drawing a
/// uniform `(m-1)`-subset of `n+m-1` slot positions (stars and bars) and
/// reading off the gap sizes.
pub fn composition_row<R: Rng + ?Sized>(m: usize, n: u64, rng: &mut R) -> Vec<u64> {
    if m == 1 {
        return vec![n];
    }
    let universe = (n + m as u64 - 1) as usize;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, universe, m - 1).into_vec();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(m);
    let mut prev = 0usize; // bars are 0-based slot indices
    for &bar in &bars {
        parts.push((bar - prev) as u64);
        prev = bar + 1;
    }
    parts.push((universe - prev) as u64);
    parts
}

/// Uniform R model: independent multinomial count vectors for each color.
pub fn sample_uniform_r<R: Rng + ?Sized>(
    m: usize,
    n: u64,
    rng: &mut R,
) -> Result<RootConfig, SamplerError> {
    if m == 0 {
        return Err(SamplerError::NoUrns);
    }
    let a = multinomial_row(m, n, rng);
    let b = multinomial_row(m, n, rng);
    Ok(RootConfig::new(a, b).expect("multinomial counts are valid"))
}

/// Multiset R model: independent uniform compositions for each color.
pub fn sample_multiset_r<R: Rng + ?Sized>(
    m: usize,
    n: u64,
    rng: &mut R,
) -> Result<RootConfig, SamplerError> {
    if m == 0 {
        return Err(SamplerError::NoUrns);
    }
    let a = composition_row(m, n, rng);
    let b = composition_row(m, n, rng);
    Ok(RootConfig::new(a, b).expect("composition parts are valid"))
}

/// Unconditioned model: `2m` IID draws from `dist`.
pub fn sample_iid<R: Rng + ?Sized>(
    dist: &CountDistribution,
    m: usize,
    rng: &mut R,
) -> Result<RootConfig, SamplerError> {
    if m == 0 {
        return Err(SamplerError::NoUrns);
    }
    let a: Vec<u64> = (0..m).map(|_| dist.sample_one(rng)).collect();
    let b: Vec<u64> = (0..m).map(|_| dist.sample_one(rng)).collect();
    Ok(RootConfig::new(a, b).expect("draws are valid counts"))
}

/// Conditioned model: each color is `m` IID draws from `dist` given sum `n`.
///
/// Poisson resolves to the multinomial urn, geometric to the uniform
/// composition (the classical equivalences); other distributions go through
/// the convolution table, which this entry point rebuilds per call — loops
/// should construct a [`ConditionedTable`] once instead.
pub fn sample_conditioned<R: Rng + ?Sized>(
    dist: &CountDistribution,
    m: usize,
    n: u64,
    rng: &mut R,
) -> Result<RootConfig, SamplerError> {
    if m == 0 {
        return Err(SamplerError::NoUrns);
    }
    match dist.kind {
        Kind::Poisson => sample_uniform_r(m, n, rng),
        Kind::Geometric => sample_multiset_r(m, n, rng),
        Kind::Custom(_) => ConditionedTable::new(dist, m, n)?.sample_config(rng),
    }
}

/// Convolution table for sequential conditioned sampling.
///
/// Row `k` holds the law of the sum of `k` IID draws, truncated to `0..=n`
/// and renormalized (the normalization cancels in the sampling weights, so
/// renormalizing per row only guards against underflow). Coordinates are
/// then drawn left to right: `P(A_j = x)` is proportional to
/// `F(x) * rows[m-j][remaining - x]`.
#[derive(Debug, Clone)]
pub struct ConditionedTable {
    m: usize,
    n: u64,
    pmf: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl ConditionedTable {
    pub fn new(dist: &CountDistribution, m: usize, n: u64) -> Result<Self, SamplerError> {
        if m == 0 {
            return Err(SamplerError::NoUrns);
        }
        let entries = (m as u64 + 1).saturating_mul(n + 1);
        if entries > MAX_TABLE_ENTRIES {
            return Err(SamplerError::TableTooLarge { entries });
        }

        let width = n as usize + 1;
        // Truncation to 0..=n is exact: given a total of n, no draw exceeds n.
        let pmf: Vec<f64> = (0..width as u64).map(|k| dist.pmf(k)).collect();
        let support: Vec<usize> = (0..width).filter(|&k| pmf[k] > 0.0).collect();
        if support.is_empty() {
            return Err(SamplerError::UnattainableSum { m, n });
        }

        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        let mut base = vec![0.0; width];
        base[0] = 1.0;
        rows.push(base);
        for k in 1..=m {
            let prev = &rows[k - 1];
            let mut row = vec![0.0; width];
            for s in 0..width {
                let mut acc = 0.0;
                for &x in support.iter().take_while(|&&x| x <= s) {
                    acc += pmf[x] * prev[s - x];
                }
                row[s] = acc;
            }
            let total: f64 = row.iter().sum();
            if total > 0.0 {
                for v in &mut row {
                    *v /= total;
                }
            }
            rows.push(row);
        }

        if rows[m][n as usize] <= 0.0 {
            return Err(SamplerError::UnattainableSum { m, n });
        }

        Ok(Self { m, n, pmf, rows })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// One count vector of length `m` summing to `n` exactly.
    pub fn sample_row<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.m);
        let mut remaining = self.n as usize;
        for j in 1..=self.m {
            let rest = self.m - j;
            if rest == 0 {
                out.push(remaining as u64);
                remaining = 0;
                continue;
            }
            let weights: Vec<f64> = (0..=remaining)
                .map(|x| self.pmf[x] * self.rows[rest][remaining - x])
                .collect();
            let total: f64 = weights.iter().sum();
            debug_assert!(total > 0.0, "conditioned state must stay attainable");
            let mut u: f64 = rng.random::<f64>() * total;
            let mut chosen = remaining;
            for (x, &w) in weights.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                if u < w {
                    chosen = x;
                    break;
                }
                u -= w;
            }
            out.push(chosen as u64);
            remaining -= chosen;
        }
        debug_assert_eq!(remaining, 0);
        out
    }

    /// Two independent rows as a configuration.
    pub fn sample_config<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<RootConfig, SamplerError> {
        let a = self.sample_row(rng);
        let b = self.sample_row(rng);
        Ok(RootConfig::new(a, b).expect("rows are valid counts"))
    }
}

/// An input model: which law the root configurations are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    UniformR { m: usize, n: u64 },
    MultisetR { m: usize, n: u64 },
    Iid { dist: CountDistribution, m: usize },
    Conditioned { dist: CountDistribution, m: usize, n: u64 },
}

impl Model {
    pub fn m(&self) -> usize {
        match *self {
            Model::UniformR { m, .. }
            | Model::MultisetR { m, .. }
            | Model::Iid { m, .. }
            | Model::Conditioned { m, .. } => m,
        }
    }

    pub fn n(&self) -> Option<u64> {
        match *self {
            Model::UniformR { n, .. }
            | Model::MultisetR { n, .. }
            | Model::Conditioned { n, .. } => Some(n),
            Model::Iid { .. } => None,
        }
    }

    /// Mean ball count per urn: `n/m` for the urn models, the distribution
    /// mean otherwise.
    pub fn lambda(&self) -> f64 {
        match self {
            Model::UniformR { m, n } | Model::MultisetR { m, n } => *n as f64 / *m as f64,
            Model::Iid { dist, .. } | Model::Conditioned { dist, .. } => dist.mean(),
        }
    }

    /// Report label, e.g. "uniform-r" or "cond-geometric".
    pub fn label(&self) -> String {
        match self {
            Model::UniformR { .. } => "uniform-r".into(),
            Model::MultisetR { .. } => "multiset-r".into(),
            Model::Iid { dist, .. } => format!("iid-{}", dist.kind_name()),
            Model::Conditioned { dist, .. } => format!("cond-{}", dist.kind_name()),
        }
    }

    /// Resolve the model into a sampler, building any conditioning table
    /// once up front.
    pub fn prepare(&self) -> Result<PreparedSampler, SamplerError> {
        if self.m() == 0 {
            return Err(SamplerError::NoUrns);
        }
        let inner = match self {
            Model::UniformR { m, n } => Prepared::UniformR { m: *m, n: *n },
            Model::MultisetR { m, n } => Prepared::MultisetR { m: *m, n: *n },
            Model::Iid { dist, m } => Prepared::Iid {
                dist: dist.clone(),
                m: *m,
            },
            Model::Conditioned { dist, m, n } => match dist.kind {
                Kind::Poisson => Prepared::UniformR { m: *m, n: *n },
                Kind::Geometric => Prepared::MultisetR { m: *m, n: *n },
                Kind::Custom(_) => Prepared::Table(ConditionedTable::new(dist, *m, *n)?),
            },
        };
        Ok(PreparedSampler { inner })
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    UniformR { m: usize, n: u64 },
    MultisetR { m: usize, n: u64 },
    Iid { dist: CountDistribution, m: usize },
    Table(ConditionedTable),
}

/// A model resolved for repeated sampling; read-only and shareable across
/// threads.
#[derive(Debug, Clone)]
pub struct PreparedSampler {
    inner: Prepared,
}

impl PreparedSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RootConfig {
        match &self.inner {
            Prepared::UniformR { m, n } => {
                sample_uniform_r(*m, *n, rng).expect("validated model")
            }
            Prepared::MultisetR { m, n } => {
                sample_multiset_r(*m, *n, rng).expect("validated model")
            }
            Prepared::Iid { dist, m } => sample_iid(dist, *m, rng).expect("validated model"),
            Prepared::Table(table) => table.sample_config(rng).expect("validated model"),
        }
    }
}
