//! Problem instances, random instance generation, stochastic quality
//! realizations, and revenue/constraint evaluation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Error raised by instance construction and generation.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainError {
    /// A parameter violates its legal range.
    InvalidParameter(String),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DomainError {}

/// How producer qualities and costs are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    /// Qualities and costs drawn from `U[0, 1]`.
    Uniform,
    /// Qualities and costs drawn from `N(mean, stddev)` and clamped into
    /// their legal ranges (qualities into `[0, 1]`, costs into `[0, inf)`).
    Normal,
}

/// Recipe for sampling a random problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub distribution: DistributionKind,
    /// Mean of the normal distribution; ignored for `Uniform`.
    pub mean: f64,
    /// Standard deviation of the normal distribution; ignored for `Uniform`.
    pub stddev: f64,
    /// Capacities are integers drawn uniformly from `{k_lo, ..., k_hi}`.
    pub k_lo: u32,
    pub k_hi: u32,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn uniform(k_lo: u32, k_hi: u32, seed: u64) -> Self {
        Self {
            distribution: DistributionKind::Uniform,
            mean: 0.0,
            stddev: 0.0,
            k_lo,
            k_hi,
            seed,
        }
    }

    pub fn normal(mean: f64, stddev: f64, k_lo: u32, k_hi: u32, seed: u64) -> Self {
        Self {
            distribution: DistributionKind::Normal,
            mean,
            stddev,
            k_lo,
            k_hi,
            seed,
        }
    }

    fn validate(&self) -> Result<(), DomainError> {
        if self.distribution == DistributionKind::Normal && self.stddev <= 0.0 {
            return Err(DomainError::InvalidParameter(String::from(
                "normal stddev must be > 0",
            )));
        }
        if self.k_lo < 1 || self.k_hi < self.k_lo {
            return Err(DomainError::InvalidParameter(String::from(
                "capacity range must satisfy 1 <= k_lo <= k_hi",
            )));
        }
        Ok(())
    }
}

/// Integer units procured per producer by one agent in one round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcurementVector(pub Vec<u32>);

impl ProcurementVector {
    pub fn zeros(m: usize) -> Self {
        Self(alloc::vec![0; m])
    }

    pub fn ones(m: usize) -> Self {
        Self(alloc::vec![1; m])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }

    pub fn total_units(&self) -> u64 {
        self.0.iter().map(|&l| u64::from(l)).sum()
    }
}

/// Count of quality-one units observed per producer in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationVector(pub Vec<u32>);

/// Ground truth of a simulation: producers' true qualities plus per-agent
/// costs, capacities and the constraint parameters. Immutable after
/// construction.
///
/// The JSON form (used by the harness for replayable experiments) carries
/// exactly the fields `m, n, T, rho, alpha, gamma, q, c, k, seed, spec`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    /// Number of producers.
    pub m: usize,
    /// Number of agents.
    pub n: usize,
    /// Horizon (number of rounds).
    #[serde(rename = "T")]
    pub horizon: u64,
    /// Revenue proportionality constant (`> 0`).
    pub rho: f64,
    /// Quality threshold in `(0, 1)`.
    pub alpha: f64,
    /// Separation margin (`> 0`, with `alpha + gamma < 1`); policies target
    /// the threshold `alpha + gamma`.
    pub gamma: f64,
    /// True qualities, `q[i]` in `[0, 1]`.
    pub q: Vec<f64>,
    /// Unit costs, `c[i][j] >= 0` for producer `i` and agent `j`.
    pub c: Vec<Vec<f64>>,
    /// Integer capacities, `k[i][j] >= 1`.
    pub k: Vec<Vec<u32>>,
    /// Seed the instance was generated from (copied from `spec`).
    pub seed: u64,
    pub spec: InstanceSpec,
}

impl ProblemInstance {
    /// Cost column of one agent.
    pub fn costs_of(&self, agent: usize) -> Vec<f64> {
        self.c.iter().map(|row| row[agent]).collect()
    }

    /// Capacity column of one agent.
    pub fn capacities_of(&self, agent: usize) -> Vec<u32> {
        self.k.iter().map(|row| row[agent]).collect()
    }

    /// Restriction of the instance to its first `n` agents. Producer
    /// qualities are untouched, so instances generated with a larger agent
    /// pool stay comparable across agent counts.
    pub fn restrict_agents(&self, n: usize) -> Result<ProblemInstance, DomainError> {
        if n < 1 || n > self.n {
            return Err(DomainError::InvalidParameter(String::from(
                "restriction must satisfy 1 <= n <= instance n",
            )));
        }
        let mut out = self.clone();
        out.n = n;
        for row in &mut out.c {
            row.truncate(n);
        }
        for row in &mut out.k {
            row.truncate(n);
        }
        Ok(out)
    }

    fn validate(&self) -> Result<(), DomainError> {
        if self.m < 1 || self.n < 1 || self.horizon < 1 {
            return Err(DomainError::InvalidParameter(String::from(
                "m, n, T must all be >= 1",
            )));
        }
        if !(self.rho > 0.0) {
            return Err(DomainError::InvalidParameter(String::from("rho must be > 0")));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(DomainError::InvalidParameter(String::from(
                "alpha must lie in (0, 1)",
            )));
        }
        if !(self.gamma > 0.0 && self.alpha + self.gamma < 1.0) {
            return Err(DomainError::InvalidParameter(String::from(
                "gamma must be > 0 with alpha + gamma < 1",
            )));
        }
        Ok(())
    }
}

/// Samples a problem instance from `spec`. The same spec and seed always
/// produce the same instance, bit for bit: qualities are drawn first, then
/// costs and capacities in producer-major order.
pub fn generate_instance(
    spec: InstanceSpec,
    m: usize,
    n: usize,
    horizon: u64,
    rho: f64,
    alpha: f64,
    gamma: f64,
) -> Result<ProblemInstance, DomainError> {
    spec.validate()?;
    let mut rng = crate::sim::rng_from_seed(spec.seed);

    let normal = match spec.distribution {
        DistributionKind::Normal => Some(
            Normal::new(spec.mean, spec.stddev)
                .map_err(|_| DomainError::InvalidParameter(String::from("bad normal params")))?,
        ),
        DistributionKind::Uniform => None,
    };

    let mut draw_quality = |rng: &mut crate::sim::SimRng| -> f64 {
        match normal {
            None => rng.random::<f64>(),
            Some(d) => d.sample(rng).clamp(0.0, 1.0),
        }
    };
    let q: Vec<f64> = (0..m).map(|_| draw_quality(&mut rng)).collect();

    let mut draw_cost = |rng: &mut crate::sim::SimRng| -> f64 {
        match normal {
            None => rng.random::<f64>(),
            Some(d) => d.sample(rng).max(0.0),
        }
    };
    let c: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| draw_cost(&mut rng)).collect())
        .collect();

    let k: Vec<Vec<u32>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| rng.random_range(spec.k_lo..=spec.k_hi))
                .collect()
        })
        .collect();

    let inst = ProblemInstance {
        m,
        n,
        horizon,
        rho,
        alpha,
        gamma,
        q,
        c,
        k,
        seed: spec.seed,
        spec,
    };
    inst.validate()?;
    Ok(inst)
}

/// Draws the quality realizations for a procurement: `x_i` is the number of
/// quality-one units among the `l_i` procured, i.e. a `Binomial(l_i, q_i)`
/// sample.
pub fn sample_realizations<R: Rng>(
    inst: &ProblemInstance,
    s: &ProcurementVector,
    rng: &mut R,
) -> RealizationVector {
    let x = s
        .0
        .iter()
        .zip(&inst.q)
        .map(|(&l, &q)| sample_binomial(l, q, rng))
        .collect();
    RealizationVector(x)
}

pub(crate) fn sample_binomial<R: Rng>(l: u32, q: f64, rng: &mut R) -> u32 {
    if l == 0 {
        return 0;
    }
    if q <= 0.0 {
        return 0;
    }
    if q >= 1.0 {
        return l;
    }
    let d = rand_distr::Binomial::new(u64::from(l), q).expect("valid binomial parameters");
    d.sample(rng) as u32
}

/// Expected revenue of a procurement vector for one agent:
/// `sum_i l_i * (rho * q_i - c_ij)`.
pub fn expected_revenue(inst: &ProblemInstance, agent: usize, s: &ProcurementVector) -> f64 {
    s.0.iter()
        .enumerate()
        .map(|(i, &l)| f64::from(l) * (inst.rho * inst.q[i] - inst.c[i][agent]))
        .sum()
}

/// Procurement-weighted mean quality `sum_i l_i q_i / sum_i l_i`, or `None`
/// for the all-zero vector (the empty bundle has no defined quality; callers
/// treat it as constraint-satisfying with revenue zero).
pub fn effective_quality(s: &ProcurementVector, q: &[f64]) -> Option<f64> {
    let units = s.total_units();
    if units == 0 {
        return None;
    }
    let weighted: f64 = s
        .0
        .iter()
        .zip(q)
        .map(|(&l, &qi)| f64::from(l) * qi)
        .sum();
    Some(weighted / units as f64)
}

/// Whether a procurement vector meets the quality threshold under the true
/// qualities. The all-zero vector counts as satisfying (its regret is still
/// maximal through the revenue gap).
pub fn constraint_satisfied(inst: &ProblemInstance, s: &ProcurementVector, threshold: f64) -> bool {
    match effective_quality(s, &inst.q) {
        None => true,
        Some(eq) => eq >= threshold,
    }
}
