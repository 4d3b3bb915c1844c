//! Knowledge bases (representable convex sets of plausible posteriors), the
//! working posterior from conjugate Bayes updating, and the κ-contraction
//! that mixes every plausible posterior with the working one.

use crate::distributions::{
    approx_same, require_same_space, validate_kappa, Binary, Distribution, Gaussian,
};
use crate::error::Error;

/// The working normal prior N(mu, sigma^2) for the normal-mean problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkingPrior {
    mu: f64,
    sigma: f64,
}

impl WorkingPrior {
    pub fn new(mu: f64, sigma: f64) -> Result<Self, Error> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "working prior mean must be finite, got {mu}"
            )));
        }
        if !sigma.is_finite() || sigma <= 0.0 || sigma * sigma == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "working prior sigma must be finite and > 0, got {sigma}"
            )));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Conjugate posterior for a N(theta, 1) observation x under the prior
/// N(mu, sigma^2): mean (mu + sigma^2 x) / (1 + sigma^2), variance
/// sigma^2 / (1 + sigma^2).
pub fn bayes_update_normal(prior: &WorkingPrior, x: f64) -> Gaussian {
    let s2 = prior.sigma * prior.sigma;
    let mean = (prior.mu + s2 * x) / (1.0 + s2);
    let variance = s2 / (1.0 + s2);
    Gaussian::new(mean, variance).expect("conjugate posterior parameters are always valid")
}

/// The conjugate-normal knowledge base of Bayes posteriors
/// N((mu + sigma^2 x)/(1 + sigma^2), sigma^2/(1 + sigma^2)) for mu and sigma
/// ranging over (extended-real) bounds. `mu_lo`/`mu_hi` may be -inf/+inf and
/// `sigma_hi` may be +inf; `sigma_lo = 0` denotes an open lower endpoint
/// (the Dirac prior itself is excluded).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianConjugateSet {
    x: f64,
    mu_lo: f64,
    mu_hi: f64,
    sigma_lo: f64,
    sigma_hi: f64,
}

impl GaussianConjugateSet {
    pub fn new(
        x: f64,
        mu_lo: f64,
        mu_hi: f64,
        sigma_lo: f64,
        sigma_hi: f64,
    ) -> Result<Self, Error> {
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "observed datum must be finite, got {x}"
            )));
        }
        if mu_lo.is_nan() || mu_hi.is_nan() || mu_lo > mu_hi {
            return Err(Error::InvalidParameter(format!(
                "mu bounds must satisfy mu_lo <= mu_hi, got [{mu_lo}, {mu_hi}]"
            )));
        }
        if mu_lo == f64::INFINITY || mu_hi == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter(
                "mu bounds must leave a nonempty real interval".into(),
            ));
        }
        if sigma_lo.is_nan() || sigma_hi.is_nan() || !(0.0..f64::INFINITY).contains(&sigma_lo) {
            return Err(Error::InvalidParameter(format!(
                "sigma_lo must be a finite value >= 0, got {sigma_lo}"
            )));
        }
        if sigma_hi < sigma_lo {
            return Err(Error::InvalidParameter(format!(
                "sigma bounds must satisfy sigma_lo <= sigma_hi, got [{sigma_lo}, {sigma_hi}]"
            )));
        }
        Ok(Self {
            x,
            mu_lo,
            mu_hi,
            sigma_lo,
            sigma_hi,
        })
    }

    /// Bounds mu in (-inf, inf) and sigma in (0, inf].
    pub fn unbounded(x: f64) -> Result<Self, Error> {
        Self::new(x, f64::NEG_INFINITY, f64::INFINITY, 0.0, f64::INFINITY)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn mu_lo(&self) -> f64 {
        self.mu_lo
    }

    pub fn mu_hi(&self) -> f64 {
        self.mu_hi
    }

    pub fn sigma_lo(&self) -> f64 {
        self.sigma_lo
    }

    pub fn sigma_hi(&self) -> f64 {
        self.sigma_hi
    }

    /// The posterior-variance interval [t_lo, t_hi], where
    /// t = sigma^2 / (1 + sigma^2). sigma_hi = inf maps to t_hi = 1 (the
    /// closure point); sigma_lo = 0 maps to an open endpoint at 0.
    pub fn t_bounds(&self) -> (f64, f64) {
        let t_of = |s: f64| {
            if s.is_infinite() {
                1.0
            } else {
                s * s / (1.0 + s * s)
            }
        };
        (t_of(self.sigma_lo), t_of(self.sigma_hi))
    }

    /// Posterior mean (1 - t) mu + t x induced by prior mean mu at posterior
    /// variance t.
    pub fn posterior_mean(&self, mu: f64, t: f64) -> f64 {
        (1.0 - t) * mu + t * self.x
    }

    /// Whether a Gaussian is one of the conjugate posteriors in the set.
    pub fn contains_gaussian(&self, g: &Gaussian) -> bool {
        let t = g.variance();
        let (t_lo, t_hi) = self.t_bounds();
        let tol = 1e-9;
        if t > t_hi + tol {
            return false;
        }
        if self.sigma_hi.is_infinite() && t >= 1.0 {
            // t = 1 is the closure point, reached by no finite prior sigma.
            return false;
        }
        if self.sigma_lo > 0.0 {
            if t < t_lo - tol {
                return false;
            }
        } else if t <= 0.0 {
            return false;
        }
        let one_minus_t = 1.0 - t;
        if one_minus_t <= 1e-12 {
            // The posterior mean is pinned to x; any real prior mean fits.
            return (g.mean() - self.x).abs() <= 1e-6 * (1.0 + self.x.abs());
        }
        let mu = (g.mean() - t * self.x) / one_minus_t;
        let slack = 1e-9 * (1.0 + mu.abs() + self.x.abs()) / one_minus_t;
        mu >= self.mu_lo - slack && mu <= self.mu_hi + slack
    }
}

/// Binary plausible posteriors with a lower-bounded null mass: Binary(q)
/// belongs iff pi_low <= q < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryNullBoundedSet {
    pi_low: f64,
}

impl BinaryNullBoundedSet {
    pub fn new(pi_low: f64) -> Result<Self, Error> {
        if !pi_low.is_finite() || pi_low <= 0.0 || pi_low >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "null-mass lower bound must lie in (0, 1), got {pi_low}"
            )));
        }
        Ok(Self { pi_low })
    }

    pub fn pi_low(&self) -> f64 {
        self.pi_low
    }

    pub fn contains_binary(&self, b: &Binary) -> bool {
        b.p0() >= self.pi_low && b.p0() < 1.0
    }
}

/// A representable knowledge base of plausible posteriors.
#[derive(Debug, Clone, PartialEq)]
pub enum KnowledgeBase {
    GaussianConjugate(GaussianConjugateSet),
    BinaryNullBounded(BinaryNullBoundedSet),
    /// Every distribution on the parameter space is plausible.
    Unconstrained,
}

impl KnowledgeBase {
    pub fn contains(&self, d: &Distribution) -> bool {
        match (self, d) {
            (KnowledgeBase::GaussianConjugate(s), Distribution::Gaussian(g)) => {
                s.contains_gaussian(g)
            }
            (KnowledgeBase::GaussianConjugate(_), _) => false,
            (KnowledgeBase::BinaryNullBounded(s), Distribution::Binary(b)) => s.contains_binary(b),
            (KnowledgeBase::BinaryNullBounded(_), _) => false,
            (KnowledgeBase::Unconstrained, _) => true,
        }
    }
}

/// The κ-contracted set: mixtures kappa * P' + (1 - kappa) * working over
/// plausible P'. At kappa = 0 it is the singleton {working}; at kappa = 1 it
/// is the base itself. The working posterior is always a member.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedSet {
    kappa: f64,
    working: Distribution,
    base: KnowledgeBase,
}

/// Builds the κ-contracted set, validating that the working posterior is a
/// member of the base.
pub fn contract(
    base: KnowledgeBase,
    working: Distribution,
    kappa: f64,
) -> Result<ContractedSet, Error> {
    validate_kappa(kappa)?;
    if !base.contains(&working) {
        return Err(Error::WorkingNotPlausible);
    }
    Ok(ContractedSet {
        kappa,
        working,
        base,
    })
}

impl ContractedSet {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn working(&self) -> &Distribution {
        &self.working
    }

    pub fn base(&self) -> &KnowledgeBase {
        &self.base
    }

    /// For a binary null-bounded base, the contracted null-mass interval
    /// [kappa*pi_low + (1-kappa)*p0_dot, kappa + (1-kappa)*p0_dot). The
    /// upper endpoint is half-open, mirroring the exclusion of null mass 1
    /// from the base.
    pub fn binary_null_interval(&self) -> Option<(f64, f64)> {
        match (&self.base, &self.working) {
            (KnowledgeBase::BinaryNullBounded(s), Distribution::Binary(w)) => {
                let lo = self.kappa * s.pi_low() + (1.0 - self.kappa) * w.p0();
                let hi = self.kappa + (1.0 - self.kappa) * w.p0();
                Some((lo, hi))
            }
            _ => None,
        }
    }

    /// Membership test for the contracted set.
    ///
    /// With an unconstrained base and kappa > 0, every distribution on the
    /// space is treated as a member, so a benchmark always intersects the
    /// contracted set there. For the conjugate-normal base with kappa < 1, a
    /// pure Gaussian can only be the working posterior itself; a two-part
    /// mixture is a member when one part is the working posterior at weight
    /// 1 - kappa and the other is a plausible conjugate posterior at weight
    /// kappa.
    pub fn contains(&self, candidate: &Distribution) -> Result<bool, Error> {
        require_same_space(&self.working, candidate)?;
        if self.kappa == 0.0 {
            return Ok(approx_same(candidate, &self.working, 1e-12));
        }
        match &self.base {
            KnowledgeBase::Unconstrained => Ok(true),
            KnowledgeBase::BinaryNullBounded(_) => {
                let (lo, hi) = self.binary_null_interval().expect("binary base");
                let Distribution::Binary(c) = candidate else {
                    return Err(Error::MismatchedSpace);
                };
                Ok(c.p0() >= lo && c.p0() < hi)
            }
            KnowledgeBase::GaussianConjugate(set) => match candidate {
                Distribution::Gaussian(g) => {
                    if self.kappa == 1.0 {
                        Ok(set.contains_gaussian(g))
                    } else {
                        Ok(approx_same(candidate, &self.working, 1e-12))
                    }
                }
                Distribution::GaussianMixture(m) if m.components().len() == 2 => {
                    let tol = 1e-12;
                    let Distribution::Gaussian(w) = &self.working else {
                        return Ok(false);
                    };
                    let part = |i: usize, j: usize| {
                        (m.weights()[i] - (1.0 - self.kappa)).abs() <= tol
                            && (m.components()[i].mean() - w.mean()).abs() <= tol
                            && (m.components()[i].variance() - w.variance()).abs() <= tol
                            && (m.weights()[j] - self.kappa).abs() <= tol
                            && set.contains_gaussian(&m.components()[j])
                    };
                    Ok(part(0, 1) || part(1, 0))
                }
                _ => Ok(false),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Gaussian;

    #[test]
    fn conjugate_update_examples() {
        // Oracle for both: grid-based Bayes rule, checked in the property
        // suite; here the closed form against hand arithmetic.
        let p = bayes_update_normal(&WorkingPrior::new(0.0, 1.0).unwrap(), 0.0);
        assert_eq!((p.mean(), p.variance()), (0.0, 0.5));
        let p = bayes_update_normal(&WorkingPrior::new(2.0, 1.0).unwrap(), 0.0);
        assert_eq!((p.mean(), p.variance()), (1.0, 0.5));
    }

    #[test]
    fn conjugate_update_flat_prior_limit() {
        let p = bayes_update_normal(&WorkingPrior::new(0.0, 1e6).unwrap(), 3.0);
        assert!((p.mean() - 3.0).abs() < 1e-6);
        assert!((p.variance() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn contract_endpoints() {
        let base = KnowledgeBase::BinaryNullBounded(BinaryNullBoundedSet::new(0.1).unwrap());
        let working: Distribution = Binary::new(0.5).unwrap().into();

        let s0 = contract(base.clone(), working.clone(), 0.0).unwrap();
        let (lo, hi) = s0.binary_null_interval().unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));
        assert!(s0.contains(&working).unwrap());
        assert!(!s0.contains(&Binary::new(0.4).unwrap().into()).unwrap());

        let s1 = contract(base.clone(), working.clone(), 1.0).unwrap();
        let (lo, hi) = s1.binary_null_interval().unwrap();
        assert_eq!((lo, hi), (0.1, 1.0));
    }

    #[test]
    fn contracted_binary_interval_arithmetic() {
        let base = KnowledgeBase::BinaryNullBounded(BinaryNullBoundedSet::new(0.1).unwrap());
        let set = contract(base, Binary::new(0.5).unwrap().into(), 0.5).unwrap();
        let (lo, hi) = set.binary_null_interval().unwrap();
        assert!((lo - 0.3).abs() < 1e-15);
        assert!((hi - 0.75).abs() < 1e-15);
        assert!(!set.contains(&Binary::new(0.2).unwrap().into()).unwrap());
        assert!(set.contains(&Binary::new(0.3).unwrap().into()).unwrap());
        // Half-open upper endpoint.
        assert!(set
            .contains(&Binary::new(0.7499999).unwrap().into())
            .unwrap());
        assert!(!set.contains(&Binary::new(0.75).unwrap().into()).unwrap());
    }

    #[test]
    fn working_not_plausible_is_rejected() {
        let base = KnowledgeBase::BinaryNullBounded(BinaryNullBoundedSet::new(0.4).unwrap());
        let err = contract(base, Binary::new(0.2).unwrap().into(), 0.5).unwrap_err();
        assert_eq!(err, Error::WorkingNotPlausible);
    }

    #[test]
    fn unconstrained_absorbs_everything_at_positive_kappa() {
        let working: Distribution = Binary::new(0.5).unwrap().into();
        let set = contract(KnowledgeBase::Unconstrained, working, 0.7).unwrap();
        for q in [0.0, 0.2, 0.5, 0.99, 1.0] {
            assert!(set.contains(&Binary::new(q).unwrap().into()).unwrap());
        }
        // A mismatched space still errors.
        let g: Distribution = Gaussian::new(0.0, 1.0).unwrap().into();
        assert_eq!(set.contains(&g).unwrap_err(), Error::MismatchedSpace);
    }

    #[test]
    fn conjugate_set_membership() {
        let set = GaussianConjugateSet::new(0.0, -1.0, 1.0, 0.5, 2.0).unwrap();
        // sigma = 1, mu = 0.5 -> posterior N(0.25, 0.5)
        assert!(set.contains_gaussian(&Gaussian::new(0.25, 0.5).unwrap()));
        // Variance outside the sigma image.
        assert!(!set.contains_gaussian(&Gaussian::new(0.0, 0.9).unwrap()));
        // Mean requires |mu| <= 1: posterior mean 0.75 at t = 0.5 needs mu = 1.5.
        assert!(!set.contains_gaussian(&Gaussian::new(0.75, 0.5).unwrap()));
        // Closed sigma endpoints are members: sigma = 0.5 -> t = 0.2, mu = 1.
        assert!(set.contains_gaussian(&Gaussian::new(0.8, 0.2).unwrap()));
    }

    #[test]
    fn conjugate_set_open_endpoints() {
        let set = GaussianConjugateSet::unbounded(0.0).unwrap();
        // The closure point t = 1 is not a member.
        assert!(!set.contains_gaussian(&Gaussian::new(0.0, 1.0).unwrap()));
        // Any t in (0, 1) with any mean is.
        assert!(set.contains_gaussian(&Gaussian::new(-17.0, 0.999).unwrap()));
        assert!(set.contains_gaussian(&Gaussian::new(4.0, 1e-9).unwrap()));
    }

    #[test]
    fn contracted_gaussian_membership_rules() {
        let set = GaussianConjugateSet::new(0.0, -1.0, 1.0, 0.5, 2.0).unwrap();
        let working = bayes_update_normal(&WorkingPrior::new(0.5, 1.0).unwrap(), 0.0);
        let base = KnowledgeBase::GaussianConjugate(set);
        let contracted = contract(base, working.into(), 0.5).unwrap();
        // Working posterior is always a member.
        assert!(contracted.contains(&working.into()).unwrap());
        // Another plausible pure Gaussian is not, at kappa < 1.
        assert!(!contracted
            .contains(&Gaussian::new(0.8, 0.2).unwrap().into())
            .unwrap());
        // But the kappa-mixture with the working posterior is.
        let mixture = crate::distributions::mix(
            0.5,
            &Gaussian::new(0.8, 0.2).unwrap().into(),
            &working.into(),
        )
        .unwrap();
        assert!(contracted.contains(&mixture).unwrap());
    }
}
