//! Moderate posteriors: posterior distributions that interpolate between a
//! working Bayesian posterior and frequentist confidence posteriors at a
//! chosen caution level κ in [0, 1].
//!
//! The interpolation is an information projection: each benchmark
//! (confidence) posterior is projected in Kullback-Leibler divergence onto
//! the κ-contracted set of plausible posteriors — mixtures
//! κ P' + (1 - κ) P_dot of plausible posteriors P' with the working
//! posterior P_dot — and the projection with the smallest divergence wins,
//! ties resolved toward the working posterior. κ = 0 recovers pure Bayes,
//! κ = 1 the fully cautious blend against the benchmarks.
//!
//! The [`decisions`] module derives point estimates and finite-menu actions
//! from the resulting posteriors, including the κ-blended worst-case rule
//! over a plausible set; [`confidence`] builds benchmarks from observed
//! data or p-values and carries the calibration lower bound on the null
//! posterior probability.

pub mod confidence;
pub mod decisions;
pub mod distributions;
mod error;
pub(crate) mod numeric;
pub mod posterior_sets;
pub mod projection;

pub use error::Error;

pub use confidence::{HypothesisConfig, PValuePair};
pub use decisions::{ActionChoice, ActionResult, Existence, LossSpec, MassBounds, TableLoss};
pub use distributions::{
    Binary, Distribution, Divergence, FiniteDiscrete, Gaussian, GaussianMixture,
};
pub use posterior_sets::{
    BinaryNullBoundedSet, ContractedSet, GaussianConjugateSet, KnowledgeBase, WorkingPrior,
};
pub use projection::{BenchmarkSet, BlendResult, BoundaryFlag};
