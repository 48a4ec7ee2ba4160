//! Quality-constrained subset-selection oracles.
//!
//! [`greedy_ssa`] is the production oracle used by every policy: a
//! deterministic greedy pass over producers in decreasing per-unit-revenue
//! order that keeps the running effective quality above the threshold.
//! [`brute_force_oracle`] enumerates every procurement vector and is used in
//! tests to quantify the greedy's optimality gap.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::domain::{effective_quality, ProblemInstance, ProcurementVector};
use crate::math;

/// Default enumeration cap for [`brute_force_oracle`].
pub const ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// The brute-force search space exceeds the enumeration cap.
    EnumerationCapExceeded { states: u64, cap: u64 },
    InvalidInput(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::EnumerationCapExceeded { states, cap } => {
                write!(f, "enumeration of {states} states exceeds cap {cap}")
            }
            OracleError::InvalidInput(msg) => write!(f, "invalid oracle input: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

/// Inputs consumed by the oracles. `qhat_plus` holds UCB quality values and
/// may exceed 1; it is passed through unclamped.
#[derive(Debug, Clone)]
pub struct OracleInput<'a> {
    pub qhat_plus: &'a [f64],
    pub cost: &'a [f64],
    pub capacity: &'a [u32],
    /// Quality threshold the bundle must meet (policies pass `alpha + gamma`).
    pub threshold: f64,
    pub rho: f64,
}

impl OracleInput<'_> {
    fn check(&self) -> Result<(), OracleError> {
        let m = self.qhat_plus.len();
        if self.cost.len() != m || self.capacity.len() != m {
            return Err(OracleError::InvalidInput(String::from(
                "input vectors must share one length",
            )));
        }
        Ok(())
    }

    fn margin(&self, i: usize) -> f64 {
        self.rho * self.qhat_plus[i] - self.cost[i]
    }

    fn revenue(&self, s: &ProcurementVector) -> f64 {
        s.0.iter()
            .enumerate()
            .map(|(i, &l)| f64::from(l) * self.margin(i))
            .sum()
    }

    fn feasible(&self, s: &ProcurementVector) -> bool {
        match effective_quality(s, self.qhat_plus) {
            None => true,
            Some(eq) => eq >= self.threshold,
        }
    }
}

/// Greedy subset-selection: producers are visited in decreasing per-unit
/// revenue order (ties broken by lower index); each producer contributes its
/// full capacity when that keeps the running effective quality at or above
/// the threshold, otherwise the largest integer number of units that still
/// satisfies it. Only producers with strictly positive per-unit revenue are
/// considered. Returns the all-zero vector when nothing is admissible.
pub fn greedy_ssa(input: &OracleInput) -> Result<ProcurementVector, OracleError> {
    input.check()?;
    let m = qlen(input);
    let mut out = ProcurementVector::zeros(m);
    greedy_ssa_into(input, &mut out);
    Ok(out)
}

fn qlen(input: &OracleInput) -> usize {
    input.qhat_plus.len()
}

/// In-place variant used by the simulation hot loop.
pub(crate) fn greedy_ssa_into(input: &OracleInput, out: &mut ProcurementVector) {
    let m = qlen(input);
    out.0.clear();
    out.0.resize(m, 0);

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        input
            .margin(b)
            .partial_cmp(&input.margin(a))
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let theta = input.threshold;
    // Running totals of the accumulated bundle: quality mass and unit count.
    let mut mass = 0.0_f64;
    let mut units = 0.0_f64;
    for &i in &order {
        if input.margin(i) <= 0.0 {
            break;
        }
        let q = input.qhat_plus[i];
        let cap = input.capacity[i];
        let take = if q >= theta {
            cap
        } else if units == 0.0 {
            // A sub-threshold producer cannot anchor an empty bundle.
            0
        } else {
            // Largest a with (mass + a q) / (units + a) >= theta.
            let slack = mass - theta * units;
            let a = math::floor(slack / (theta - q));
            if a <= 0.0 {
                0
            } else {
                (a as u64).min(u64::from(cap)) as u32
            }
        };
        if take > 0 {
            out.0[i] = take;
            mass += f64::from(take) * q;
            units += f64::from(take);
        }
    }
}

/// Exhaustive reference oracle: enumerates every vector in lexicographic
/// order and returns the feasible one with maximum revenue (first wins on
/// ties, i.e. the lexicographically smallest). Refuses when the state count
/// exceeds `cap`.
pub fn brute_force_oracle(
    input: &OracleInput,
    cap: u64,
) -> Result<ProcurementVector, OracleError> {
    input.check()?;
    let m = qlen(input);
    let mut states: u64 = 1;
    for &k in input.capacity {
        states = states.saturating_mul(u64::from(k) + 1);
        if states > cap {
            return Err(OracleError::EnumerationCapExceeded { states, cap });
        }
    }

    let mut current = ProcurementVector::zeros(m);
    let mut best = ProcurementVector::zeros(m);
    let mut best_revenue = 0.0_f64; // the all-zero vector is always feasible
    loop {
        if input.feasible(&current) {
            let r = input.revenue(&current);
            if r > best_revenue {
                best_revenue = r;
                best = current.clone();
            }
        }
        // Odometer increment with the last index fastest, which yields
        // ascending lexicographic order.
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            if current.0[pos] < input.capacity[pos] {
                current.0[pos] += 1;
                break;
            }
            current.0[pos] = 0;
        }
    }
}

/// Maximum per-round regret constant `L = r_{s*} - min_s r_s`. The
/// revenue-minimizing vector procures full capacity from every producer
/// whose margin is negative, so the minimum is available in closed form.
pub fn max_regret_l(inst: &ProblemInstance, agent: usize, s_star: &ProcurementVector) -> f64 {
    let r_star = crate::domain::expected_revenue(inst, agent, s_star);
    let min_revenue: f64 = (0..inst.m)
        .map(|i| {
            let margin = inst.rho * inst.q[i] - inst.c[i][agent];
            f64::from(inst.k[i][agent]) * margin.min(0.0)
        })
        .sum();
    r_star - min_revenue
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::InstanceSpec;

    fn input<'a>(
        q: &'a [f64],
        c: &'a [f64],
        k: &'a [u32],
        threshold: f64,
        rho: f64,
    ) -> OracleInput<'a> {
        OracleInput {
            qhat_plus: q,
            cost: c,
            capacity: k,
            threshold,
            rho,
        }
    }

    #[test]
    fn single_profitable_producer_takes_full_capacity() {
        let s = greedy_ssa(&input(&[0.9], &[0.1], &[5], 0.4, 1.0)).unwrap();
        assert_eq!(s.0, alloc::vec![5]);
    }

    #[test]
    fn all_negative_margins_yield_zero_vector() {
        let s = greedy_ssa(&input(&[0.2, 0.3], &[0.9, 0.8], &[5, 5], 0.1, 1.0)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn greedy_matches_enumeration_on_two_producers() {
        // Producer 0 anchors the quality constraint, producer 1 is cheap
        // filler; greedy fills 0 fully then tops up 1 to the feasibility
        // boundary: (2*0.9 + a*0.2)/(2+a) >= 0.5 -> a <= 2.66 -> a = 2.
        let inp = input(&[0.9, 0.2], &[0.1, 0.0], &[2, 10], 0.5, 1.0);
        let g = greedy_ssa(&inp).unwrap();
        assert_eq!(g.0, alloc::vec![2, 2]);
        let b = brute_force_oracle(&inp, ENUMERATION_CAP).unwrap();
        assert!(inp.feasible(&g));
        assert!(inp.revenue(&b) >= inp.revenue(&g));
        assert_eq!(b.0, g.0);
    }

    #[test]
    fn enumeration_counts_states_and_respects_cap() {
        let inp = input(&[0.9], &[0.1], &[3], 0.4, 1.0);
        // 4 states for a single producer with capacity 3.
        assert!(brute_force_oracle(&inp, 4).is_ok());
        assert!(matches!(
            brute_force_oracle(&inp, 3),
            Err(OracleError::EnumerationCapExceeded { states: 4, cap: 3 })
        ));
    }

    #[test]
    fn brute_force_feasibility_over_random_inputs() {
        let mut rng = crate::sim::rng_from_seed(99);
        for _ in 0..100 {
            let q: Vec<f64> = (0..3).map(|_| rand::Rng::random::<f64>(&mut rng) * 1.2).collect();
            let c: Vec<f64> = (0..3).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let inp = input(&q, &c, &[2, 2, 2], 0.5, 1.0);
            let b = brute_force_oracle(&inp, ENUMERATION_CAP).unwrap();
            let g = greedy_ssa(&inp).unwrap();
            assert!(inp.feasible(&b));
            assert!(inp.feasible(&g));
            assert!(inp.revenue(&b) >= inp.revenue(&g) - 1e-12);
        }
    }

    #[test]
    fn ucb_lift_never_lowers_greedy_revenue_under_lifted_qualities() {
        let mut rng = crate::sim::rng_from_seed(123);
        for _ in 0..50 {
            let q: Vec<f64> = (0..4).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let c: Vec<f64> = (0..4).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let k = [3u32, 5, 2, 4];
            let base = input(&q, &c, &k, 0.5, 1.0);
            let s_base = greedy_ssa(&base).unwrap();
            let r_base = base.revenue(&s_base);

            let lifted: Vec<f64> = q.iter().map(|x| x + 0.2).collect();
            let up = input(&lifted, &c, &k, 0.5, 1.0);
            let s_up = greedy_ssa(&up).unwrap();
            let r_up = up.revenue(&s_up);
            assert!(r_up >= r_base - 1e-9, "lift lowered revenue: {r_base} -> {r_up}");
        }
    }

    #[test]
    fn max_regret_examples() {
        // All margins >= 0: the minimizing vector is empty, L = r_star.
        let inst = ProblemInstance {
            m: 1,
            n: 1,
            horizon: 10,
            rho: 1.0,
            alpha: 0.4,
            gamma: 0.1,
            q: alloc::vec![0.9],
            c: alloc::vec![alloc::vec![0.1]],
            k: alloc::vec![alloc::vec![10]],
            seed: 0,
            spec: InstanceSpec::uniform(1, 50, 0),
        };
        let s_star = ProcurementVector(alloc::vec![10]);
        let l = max_regret_l(&inst, 0, &s_star);
        assert!((l - 8.0).abs() < 1e-12);

        // Negative margin: L = 0 - 10 * (-0.3) = 3.
        let inst2 = ProblemInstance {
            q: alloc::vec![0.2],
            c: alloc::vec![alloc::vec![0.5]],
            ..inst
        };
        let l2 = max_regret_l(&inst2, 0, &ProcurementVector(alloc::vec![0]));
        assert!((l2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn max_regret_dominates_sampled_vectors() {
        let spec = InstanceSpec::uniform(1, 8, 5);
        let inst = crate::domain::generate_instance(spec, 4, 1, 10, 1.0, 0.4, 0.1).unwrap();
        let q = inst.q.clone();
        let c = inst.costs_of(0);
        let k = inst.capacities_of(0);
        let inp = input(&q, &c, &k, inst.alpha, inst.rho);
        let s_star = brute_force_oracle(&inp, ENUMERATION_CAP).unwrap();
        let r_star = crate::domain::expected_revenue(&inst, 0, &s_star);
        let l = max_regret_l(&inst, 0, &s_star);

        let mut rng = crate::sim::rng_from_seed(17);
        for _ in 0..1000 {
            let s = ProcurementVector(
                k.iter()
                    .map(|&cap| rand::Rng::random_range(&mut rng, 0..=cap))
                    .collect(),
            );
            let r = crate::domain::expected_revenue(&inst, 0, &s);
            assert!(l >= r_star - r - 1e-9);
        }
    }
}
