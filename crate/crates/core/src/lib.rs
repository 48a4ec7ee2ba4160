//! Simulation core for quality-constrained federated combinatorial bandits
//! with differential privacy.
//!
//! A set of `n` agents repeatedly procures goods from `m` producers. Each
//! producer has an unknown Bernoulli quality, a per-agent unit cost and a
//! per-agent capacity. Every round an agent picks an integer procurement
//! vector that must keep the expected quality of the bundle above a
//! threshold, observes per-unit quality realizations, and accumulates
//! regret against the revenue of an oracle that knows the true qualities.
//!
//! Three policies are implemented:
//!
//! * [`PolicyKind::NonFederated`] — independent UCB learners, no
//!   communication.
//! * [`PolicyKind::Fcb`] — federated learning with full synchronization of
//!   raw realizations every round.
//! * [`PolicyKind::Pfcb`] — private federated learning: agents share
//!   Gaussian-perturbed accumulators on a doubling schedule inside a
//!   communication window, filter incoming data through a confidence-band
//!   acceptance rule, and account the privacy budget spent per round.
//!
//! The crate is `no_std`-compatible (with `alloc`); all IO, file formats and
//! the experiment CLI live in the companion `pfcb-harness` crate. All
//! randomness flows through caller-provided seeded generators, so every run
//! is reproducible bit-for-bit from its seeds.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod domain;
pub mod federation;
pub(crate) mod math;
pub mod metrics;
pub mod oracle;
pub mod policies;
pub mod privacy;
pub mod sim;

pub use domain::{InstanceSpec, ProblemInstance, ProcurementVector, RealizationVector};
pub use policies::{AgentEstimates, PolicyConfig, PolicyKind};
pub use privacy::{PrivacyAccountant, PrivacyParams, PrivatizedMessage};
pub use sim::{RunConfig, RunOutput};
