//! Probability distributions on scalar and binary parameter spaces, together
//! with Kullback-Leibler divergence and the inferential-gain functionals.
//!
//! Gaussian-Gaussian divergence uses the closed form; anything involving a
//! Gaussian mixture falls back to Gauss-Hermite quadrature with an adaptive
//! Simpson refinement when the 128- and 256-node estimates disagree.

use crate::error::Error;
use crate::numeric;

/// A normal distribution parameterized by mean and (strictly positive)
/// variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    mean: f64,
    variance: f64,
}

impl Gaussian {
    pub fn new(mean: f64, variance: f64) -> Result<Self, Error> {
        if !mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Gaussian mean must be finite, got {mean}"
            )));
        }
        if !variance.is_finite() || variance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Gaussian variance must be finite and > 0, got {variance}"
            )));
        }
        Ok(Self { mean, variance })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// A distribution on the binary hypothesis space {0, 1}, stored as the mass
/// `p0` on the null state 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binary {
    p0: f64,
}

impl Binary {
    pub fn new(p0: f64) -> Result<Self, Error> {
        if !p0.is_finite() || !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidParameter(format!(
                "Binary null mass must lie in [0, 1], got {p0}"
            )));
        }
        Ok(Self { p0 })
    }

    /// Mass on the null state 0.
    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Mass on the alternative state 1.
    pub fn p1(&self) -> f64 {
        1.0 - self.p0
    }
}

/// A distribution on a finite labeled state set.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDiscrete {
    states: Vec<String>,
    masses: Vec<f64>,
}

impl FiniteDiscrete {
    pub fn new<S: Into<String>>(states: Vec<S>, masses: Vec<f64>) -> Result<Self, Error> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() || states.len() != masses.len() {
            return Err(Error::InvalidParameter(
                "states and masses must be nonempty lists of equal length".into(),
            ));
        }
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                if states[i] == states[j] {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate state label {:?}",
                        states[i]
                    )));
                }
            }
        }
        let mut total = 0.0;
        for &m in &masses {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "masses must be finite and >= 0, got {m}"
                )));
            }
            total += m;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "masses must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(Self { states, masses })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// State labels parsed as real numbers, for moment computations.
    pub fn numeric_states(&self) -> Result<Vec<f64>, Error> {
        self.states
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::NonNumericStates))
            .collect()
    }
}

/// A finite mixture of Gaussians. Weights are nonnegative and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    weights: Vec<f64>,
    components: Vec<Gaussian>,
}

impl GaussianMixture {
    pub fn new(weights: Vec<f64>, components: Vec<Gaussian>) -> Result<Self, Error> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(Error::InvalidParameter(
                "weights and components must be nonempty lists of equal length".into(),
            ));
        }
        let mut total = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "mixture weights must be finite and >= 0, got {w}"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Gaussian] {
        &self.components
    }

    pub fn mean(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.components)
            .map(|(w, c)| w * c.mean())
            .sum()
    }
}

/// Tagged union over every distribution type the library works with.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Gaussian(Gaussian),
    Binary(Binary),
    FiniteDiscrete(FiniteDiscrete),
    GaussianMixture(GaussianMixture),
}

impl From<Gaussian> for Distribution {
    fn from(g: Gaussian) -> Self {
        Distribution::Gaussian(g)
    }
}

impl From<Binary> for Distribution {
    fn from(b: Binary) -> Self {
        Distribution::Binary(b)
    }
}

impl From<FiniteDiscrete> for Distribution {
    fn from(d: FiniteDiscrete) -> Self {
        Distribution::FiniteDiscrete(d)
    }
}

impl From<GaussianMixture> for Distribution {
    fn from(m: GaussianMixture) -> Self {
        Distribution::GaussianMixture(m)
    }
}

#[derive(Debug, PartialEq)]
pub(crate) enum Space<'a> {
    Scalar,
    Binary,
    Discrete(&'a [String]),
}

pub(crate) fn space_of(d: &Distribution) -> Space<'_> {
    match d {
        Distribution::Gaussian(_) | Distribution::GaussianMixture(_) => Space::Scalar,
        Distribution::Binary(_) => Space::Binary,
        Distribution::FiniteDiscrete(f) => Space::Discrete(f.states()),
    }
}

pub(crate) fn require_same_space(p: &Distribution, q: &Distribution) -> Result<(), Error> {
    if space_of(p) == space_of(q) {
        Ok(())
    } else {
        Err(Error::MismatchedSpace)
    }
}

/// Parameter-wise equality within `tol`, used for membership and collapse
/// checks. Distributions of different shape never compare equal.
pub(crate) fn approx_same(a: &Distribution, b: &Distribution, tol: f64) -> bool {
    match (a, b) {
        (Distribution::Gaussian(x), Distribution::Gaussian(y)) => {
            (x.mean() - y.mean()).abs() <= tol && (x.variance() - y.variance()).abs() <= tol
        }
        (Distribution::Binary(x), Distribution::Binary(y)) => (x.p0() - y.p0()).abs() <= tol,
        (Distribution::FiniteDiscrete(x), Distribution::FiniteDiscrete(y)) => {
            x.states() == y.states()
                && x.masses()
                    .iter()
                    .zip(y.masses())
                    .all(|(a, b)| (a - b).abs() <= tol)
        }
        (Distribution::GaussianMixture(x), Distribution::GaussianMixture(y)) => {
            x.weights().len() == y.weights().len()
                && x.weights()
                    .iter()
                    .zip(y.weights())
                    .all(|(a, b)| (a - b).abs() <= tol)
                && x.components().iter().zip(y.components()).all(|(a, b)| {
                    (a.mean() - b.mean()).abs() <= tol && (a.variance() - b.variance()).abs() <= tol
                })
        }
        _ => false,
    }
}

/// An information divergence value: nonnegative, possibly infinite. Kept as
/// a distinct type rather than a sentinel float so infinity propagates
/// explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub(crate) fn finite(v: f64) -> Self {
        // Quadrature can undershoot zero by rounding; divergence never does.
        Divergence::Finite(v.max(0.0))
    }

    /// The divergence as a float, with `Infinite` mapped to `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match self {
            Divergence::Finite(v) => *v,
            Divergence::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Divergence::Infinite)
    }
}

fn kl_gaussian_closed(p: &Gaussian, q: &Gaussian) -> f64 {
    let (m1, v1) = (p.mean(), p.variance());
    let (m2, v2) = (q.mean(), q.variance());
    0.5 * ((v2 / v1).ln() + v1 / v2 + (m1 - m2) * (m1 - m2) / v2 - 1.0)
}

/// KL between two finite mass vectors on a common state set, with the
/// 0 log 0 = 0 convention and infinity when p has mass where q has none.
fn kl_masses(p: &[f64], q: &[f64]) -> Divergence {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Divergence::Infinite;
            }
            acc += pi * (pi / qi).ln();
        }
    }
    Divergence::finite(acc)
}

/// Weights, means and variances of a scalar-continuous distribution viewed
/// as a Gaussian mixture (a pure Gaussian is a one-component mixture).
fn component_form(d: &Distribution) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    match d {
        Distribution::Gaussian(g) => Some((vec![1.0], vec![g.mean()], vec![g.variance()])),
        Distribution::GaussianMixture(m) => Some((
            m.weights().to_vec(),
            m.components().iter().map(|c| c.mean()).collect(),
            m.components().iter().map(|c| c.variance()).collect(),
        )),
        _ => None,
    }
}

/// KL divergence between scalar-continuous distributions in component form,
/// by component-centered Gauss-Hermite quadrature. Falls back to adaptive
/// Simpson when the 128- and 256-node estimates differ by more than 1e-9
/// relative.
pub(crate) fn kl_continuous_quadrature(
    pw: &[f64],
    pm: &[f64],
    pv: &[f64],
    qw: &[f64],
    qm: &[f64],
    qv: &[f64],
) -> f64 {
    let log_ratio =
        |x: f64| numeric::mixture_log_pdf(pw, pm, pv, x) - numeric::mixture_log_pdf(qw, qm, qv, x);
    let estimate = |rule: &numeric::HermiteRule| -> f64 {
        let mut acc = 0.0;
        for i in 0..pw.len() {
            if pw[i] > 0.0 {
                acc += pw[i] * numeric::gauss_hermite_expect(rule, pm[i], pv[i], &log_ratio);
            }
        }
        acc
    };
    let coarse = estimate(numeric::hermite_128());
    let fine = estimate(numeric::hermite_256());
    if (fine - coarse).abs() <= 1e-9 * fine.abs().max(1.0) {
        return fine;
    }
    // Subdivision fallback: integrate p * log(p/q) directly over a window
    // holding all numerically relevant mass of p.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..pw.len() {
        if pw[i] > 0.0 {
            let sd = pv[i].sqrt();
            lo = lo.min(pm[i] - 40.0 * sd);
            hi = hi.max(pm[i] + 40.0 * sd);
        }
    }
    let integrand = |x: f64| {
        let lp = numeric::mixture_log_pdf(pw, pm, pv, x);
        if lp == f64::NEG_INFINITY {
            0.0
        } else {
            lp.exp() * (lp - numeric::mixture_log_pdf(qw, qm, qv, x))
        }
    };
    numeric::adaptive_simpson(&integrand, lo, hi, 1e-12)
}

/// The information divergence I(P||Q) between two distributions on the same
/// parameter space. Infinite when P is not absolutely continuous with
/// respect to Q.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<Divergence, Error> {
    require_same_space(p, q)?;
    match (p, q) {
        (Distribution::Gaussian(a), Distribution::Gaussian(b)) => {
            Ok(Divergence::finite(kl_gaussian_closed(a, b)))
        }
        (Distribution::Binary(a), Distribution::Binary(b)) => {
            Ok(kl_masses(&[a.p0(), a.p1()], &[b.p0(), b.p1()]))
        }
        (Distribution::FiniteDiscrete(a), Distribution::FiniteDiscrete(b)) => {
            Ok(kl_masses(a.masses(), b.masses()))
        }
        _ => {
            let (pw, pm, pv) = component_form(p).ok_or(Error::MismatchedSpace)?;
            let (qw, qm, qv) = component_form(q).ok_or(Error::MismatchedSpace)?;
            Ok(Divergence::finite(kl_continuous_quadrature(
                &pw, &pm, &pv, &qw, &qm, &qv,
            )))
        }
    }
}

/// The inferential gain of `candidate` relative to `benchmark` given
/// `reference`: I(reference||benchmark) - I(reference||candidate).
///
/// Requires I(reference||benchmark) finite; returns negative infinity when
/// I(reference||candidate) is infinite.
pub fn inferential_gain(
    reference: &Distribution,
    benchmark: &Distribution,
    candidate: &Distribution,
) -> Result<f64, Error> {
    let to_benchmark = match kl_divergence(reference, benchmark)? {
        Divergence::Finite(v) => v,
        Divergence::Infinite => return Err(Error::UndefinedGain),
    };
    match kl_divergence(reference, candidate)? {
        Divergence::Finite(v) => Ok(to_benchmark - v),
        Divergence::Infinite => Ok(f64::NEG_INFINITY),
    }
}

pub(crate) fn validate_kappa(kappa: f64) -> Result<(), Error> {
    if kappa.is_finite() && (0.0..=1.0).contains(&kappa) {
        Ok(())
    } else {
        Err(Error::InvalidKappa(kappa))
    }
}

/// The mixture kappa * a + (1 - kappa) * b. Degenerates to `b` at kappa = 0
/// and to `a` at kappa = 1; binary and discrete mixtures stay in type, and
/// Gaussian mixtures flatten.
pub fn mix(kappa: f64, a: &Distribution, b: &Distribution) -> Result<Distribution, Error> {
    validate_kappa(kappa)?;
    require_same_space(a, b)?;
    if kappa == 0.0 {
        return Ok(b.clone());
    }
    if kappa == 1.0 {
        return Ok(a.clone());
    }
    match (a, b) {
        (Distribution::Binary(x), Distribution::Binary(y)) => {
            Ok(Binary::new(kappa * x.p0() + (1.0 - kappa) * y.p0())?.into())
        }
        (Distribution::FiniteDiscrete(x), Distribution::FiniteDiscrete(y)) => {
            let masses = x
                .masses()
                .iter()
                .zip(y.masses())
                .map(|(mx, my)| kappa * mx + (1.0 - kappa) * my)
                .collect();
            Ok(FiniteDiscrete::new(x.states().to_vec(), masses)?.into())
        }
        (Distribution::Gaussian(x), Distribution::Gaussian(y)) if x == y => Ok((*x).into()),
        _ => {
            let (aw, am, av) = component_form(a).ok_or(Error::MismatchedSpace)?;
            let (bw, bm, bv) = component_form(b).ok_or(Error::MismatchedSpace)?;
            let mut weights = Vec::with_capacity(aw.len() + bw.len());
            let mut components = Vec::with_capacity(aw.len() + bw.len());
            for i in 0..aw.len() {
                weights.push(kappa * aw[i]);
                components.push(Gaussian::new(am[i], av[i])?);
            }
            for i in 0..bw.len() {
                weights.push((1.0 - kappa) * bw[i]);
                components.push(Gaussian::new(bm[i], bv[i])?);
            }
            Ok(GaussianMixture::new(weights, components)?.into())
        }
    }
}

/// The kappa-inferential gain: the inferential gain evaluated at the mixture
/// reference kappa * plausible + (1 - kappa) * working.
pub fn kappa_inferential_gain(
    plausible: &Distribution,
    working: &Distribution,
    benchmark: &Distribution,
    candidate: &Distribution,
    kappa: f64,
) -> Result<f64, Error> {
    let reference = mix(kappa, plausible, working)?;
    inferential_gain(&reference, benchmark, candidate)
}

/// First moment of a distribution with numeric states.
pub fn mean(p: &Distribution) -> Result<f64, Error> {
    match p {
        Distribution::Gaussian(g) => Ok(g.mean()),
        Distribution::GaussianMixture(m) => Ok(m.mean()),
        Distribution::Binary(b) => Ok(b.p1()),
        Distribution::FiniteDiscrete(d) => {
            let states = d.numeric_states()?;
            Ok(states.iter().zip(d.masses()).map(|(s, m)| s * m).sum())
        }
    }
}

/// Variance, for the same types `mean` supports.
pub fn variance(p: &Distribution) -> Result<f64, Error> {
    match p {
        Distribution::Gaussian(g) => Ok(g.variance()),
        Distribution::GaussianMixture(m) => {
            let mu = m.mean();
            Ok(m.weights()
                .iter()
                .zip(m.components())
                .map(|(w, c)| w * (c.variance() + (c.mean() - mu) * (c.mean() - mu)))
                .sum())
        }
        Distribution::Binary(b) => Ok(b.p0() * b.p1()),
        Distribution::FiniteDiscrete(d) => {
            let states = d.numeric_states()?;
            let mu: f64 = states.iter().zip(d.masses()).map(|(s, m)| s * m).sum();
            Ok(states
                .iter()
                .zip(d.masses())
                .map(|(s, m)| m * (s - mu) * (s - mu))
                .sum())
        }
    }
}
