//! Confidence posteriors (benchmarks) from observed data or p-values, the
//! calibration lower bound on the null posterior probability, and the
//! self-benchmark blending shortcut for the case where the working posterior
//! is itself the confidence posterior.

use crate::distributions::{validate_kappa, Binary, Distribution, Gaussian};
use crate::error::Error;
use crate::posterior_sets::{BinaryNullBoundedSet, KnowledgeBase};
use crate::projection::{moderate_posterior, BenchmarkSet, BlendResult};

/// A one-sided / two-sided p-value pair with p1 <= p2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValuePair {
    p1: f64,
    p2: f64,
}

impl PValuePair {
    pub fn new(p1: f64, p2: f64) -> Result<Self, Error> {
        if !p1.is_finite() || !p2.is_finite() || p1 <= 0.0 || p1 > p2 || p2 > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "p-value pair must satisfy 0 < p1 <= p2 <= 1, got ({p1}, {p2})"
            )));
        }
        Ok(Self { p1, p2 })
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }
}

/// Configuration of a two-p-value hypothesis analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisConfig {
    pi_prior_low: f64,
    working_null_prob: f64,
    kappa: f64,
}

impl HypothesisConfig {
    pub fn new(pi_prior_low: f64, working_null_prob: f64, kappa: f64) -> Result<Self, Error> {
        if !(0.0..1.0).contains(&pi_prior_low) || pi_prior_low == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "prior null lower bound must lie in (0, 1), got {pi_prior_low}"
            )));
        }
        if !(0.0..1.0).contains(&working_null_prob) || working_null_prob == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "working null probability must lie in (0, 1), got {working_null_prob}"
            )));
        }
        validate_kappa(kappa)?;
        Ok(Self {
            pi_prior_low,
            working_null_prob,
            kappa,
        })
    }

    pub fn pi_prior_low(&self) -> f64 {
        self.pi_prior_low
    }

    pub fn working_null_prob(&self) -> f64 {
        self.working_null_prob
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// The confidence posterior N(x, 1) for the normal-mean problem.
pub fn confidence_posterior_normal(x: f64) -> Result<Gaussian, Error> {
    Gaussian::new(x, 1.0)
}

/// The binary confidence posterior whose null mass equals the p-value.
pub fn confidence_posterior_from_pvalue(p: f64) -> Result<Binary, Error> {
    Binary::new(p)
}

/// Calibration lower bound on the posterior null probability from a p-value
/// and a prior null lower bound: with B(p) = e p log(1/p) for p < 1/e and
/// B(p) = 1 beyond (where the raw expression would decrease and the
/// calibration is conventionally capped), the bound is
/// (1 + (1 - pi)/(pi B(p)))^-1, never exceeding pi itself.
pub fn sellke_lower_bound(p: f64, pi_prior_low: f64) -> Result<f64, Error> {
    if !p.is_finite() || p <= 0.0 || p > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "p-value must lie in (0, 1], got {p}"
        )));
    }
    if !pi_prior_low.is_finite() || pi_prior_low <= 0.0 || pi_prior_low >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "prior null lower bound must lie in (0, 1), got {pi_prior_low}"
        )));
    }
    let e_inv = (-1.0f64).exp();
    let factor = if p >= e_inv {
        1.0
    } else {
        std::f64::consts::E * p * (1.0 / p).ln()
    };
    let bound = 1.0 / (1.0 + (1.0 - pi_prior_low) / (pi_prior_low * factor));
    Ok(bound.min(pi_prior_low))
}

/// The larger of the two per-p-value calibration bounds.
pub fn pair_lower_bound(pair: &PValuePair, pi_prior_low: f64) -> Result<f64, Error> {
    let b1 = sellke_lower_bound(pair.p1(), pi_prior_low)?;
    let b2 = sellke_lower_bound(pair.p2(), pi_prior_low)?;
    Ok(b1.max(b2))
}

/// Full two-p-value analysis: benchmarks Binary(p1) and Binary(p2), the
/// calibration bound from the pair, and the moderate posterior of the
/// resulting binary problem.
pub fn two_pvalue_blend(pair: &PValuePair, cfg: &HypothesisConfig) -> Result<BlendResult, Error> {
    let pi_low = pair_lower_bound(pair, cfg.pi_prior_low())?;
    let base = KnowledgeBase::BinaryNullBounded(BinaryNullBoundedSet::new(pi_low)?);
    let working: Distribution = Binary::new(cfg.working_null_prob())?.into();
    let benchmarks = BenchmarkSet::new(vec![
        confidence_posterior_from_pvalue(pair.p1())?.into(),
        confidence_posterior_from_pvalue(pair.p2())?.into(),
    ])?;
    moderate_posterior(&working, &base, &benchmarks, cfg.kappa())
}

/// The self-benchmark blend, where the working posterior equals the
/// confidence posterior Binary(p): null mass
/// max(kappa * pi_low + (1 - kappa) * p, p).
pub fn self_benchmark_blend(p: f64, pi_low: f64, kappa: f64) -> Result<Binary, Error> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "p-value must lie in [0, 1], got {p}"
        )));
    }
    if !pi_low.is_finite() || pi_low <= 0.0 || pi_low >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "null lower bound must lie in (0, 1), got {pi_low}"
        )));
    }
    validate_kappa(kappa)?;
    Binary::new((kappa * pi_low + (1.0 - kappa) * p).max(p))
}
