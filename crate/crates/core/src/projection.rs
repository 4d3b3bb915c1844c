//! The moderate-posterior engine: information projection of benchmarks onto
//! κ-contracted sets, the member-benchmark shortcut, and multi-benchmark
//! selection with the tie-break toward the working posterior.
//!
//! The binary projection is a three-case clip of the benchmark null mass
//! into the contracted interval. The Gaussian projection minimizes
//! I(κ N(m,t) + (1-κ) P_dot || benchmark) over the compactified coordinates
//! (m, t), t = sigma^2/(1+sigma^2), by multi-start coordinate descent with
//! golden-section line searches.

use crate::distributions::{
    approx_same, kl_divergence, require_same_space, space_of, validate_kappa, Binary, Distribution,
    Divergence, Gaussian, GaussianMixture,
};
use crate::error::Error;
use crate::numeric;
use crate::posterior_sets::{contract, ContractedSet, GaussianConjugateSet, KnowledgeBase};

/// Where the projected posterior landed relative to the contracted set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryFlag {
    /// The optimum is interior to the set.
    Interior,
    /// The optimum sits on the lower boundary.
    ClippedLow,
    /// The optimum sits on the upper boundary.
    ClippedHigh,
    /// A benchmark is itself a member of the contracted set and was returned
    /// directly.
    BenchmarkAbsorbed,
}

impl BoundaryFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryFlag::Interior => "interior",
            BoundaryFlag::ClippedLow => "clipped_low",
            BoundaryFlag::ClippedHigh => "clipped_high",
            BoundaryFlag::BenchmarkAbsorbed => "benchmark_absorbed",
        }
    }
}

/// An ordered, nonempty list of benchmark (confidence) posteriors on one
/// parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSet {
    benchmarks: Vec<Distribution>,
}

impl BenchmarkSet {
    pub fn new(benchmarks: Vec<Distribution>) -> Result<Self, Error> {
        let Some(first) = benchmarks.first() else {
            return Err(Error::EmptyBenchmarks);
        };
        for b in &benchmarks[1..] {
            require_same_space(first, b)?;
        }
        Ok(Self { benchmarks })
    }

    pub fn len(&self) -> usize {
        self.benchmarks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.benchmarks.is_empty()
    }

    pub fn get(&self, i: usize) -> &Distribution {
        &self.benchmarks[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Distribution> {
        self.benchmarks.iter()
    }
}

/// The moderate posterior with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendResult {
    /// The moderate posterior itself.
    pub posterior: Distribution,
    /// inf over the contracted set of I(Q || benchmark), at the selected
    /// benchmark.
    pub achieved_divergence: Divergence,
    /// Index into the benchmark list of the selected benchmark.
    pub selected_benchmark: usize,
    /// Size of the candidate set after per-benchmark minima were compared.
    pub candidate_count: usize,
    pub boundary_flag: BoundaryFlag,
}

/// Projects a binary benchmark onto a contracted binary null-bounded set:
/// the benchmark null mass is clipped into the contracted interval
/// [lo, hi], lo = kappa*pi_low + (1-kappa)*p0_dot, hi = kappa + (1-kappa)*p0_dot.
/// The upper endpoint is the closure point of the half-open interval.
pub fn project_binary(
    set: &ContractedSet,
    benchmark: &Binary,
) -> Result<(Binary, Divergence, BoundaryFlag), Error> {
    let (lo, hi) = set
        .binary_null_interval()
        .ok_or(Error::UnsupportedProjection(
            "binary projection requires a binary null-bounded base",
        ))?;
    let p = benchmark.p0();
    let (q, flag) = if p < lo {
        (lo, BoundaryFlag::ClippedLow)
    } else if p > hi {
        (hi, BoundaryFlag::ClippedHigh)
    } else {
        (p, BoundaryFlag::Interior)
    };
    let projected = Binary::new(q)?;
    let divergence = kl_divergence(&projected.into(), &(*benchmark).into())?;
    Ok((projected, divergence, flag))
}

/// Feasible interval of the posterior mean m at fixed t, together with
/// whether each endpoint comes from a real mu bound (as opposed to the
/// trust region standing in for an infinite one).
struct MeanInterval {
    lo: f64,
    hi: f64,
    lo_is_real: bool,
    hi_is_real: bool,
}

struct GaussianObjective<'a> {
    set: &'a GaussianConjugateSet,
    working: &'a Gaussian,
    benchmark: &'a Gaussian,
    kappa: f64,
    /// Half-width of the trust region substituted for infinite mu bounds.
    trust_halfwidth: f64,
}

impl GaussianObjective<'_> {
    fn mean_interval(&self, t: f64) -> MeanInterval {
        if 1.0 - t <= 0.0 {
            // All posterior means collapse to x at the closure point.
            return MeanInterval {
                lo: self.set.x(),
                hi: self.set.x(),
                lo_is_real: true,
                hi_is_real: true,
            };
        }
        // Anchors the trust region must cover regardless of width.
        let mut anchor_lo = self.benchmark.mean().min(self.working.mean());
        let mut anchor_hi = self.benchmark.mean().max(self.working.mean());
        let (lo, lo_is_real) = if self.set.mu_lo().is_finite() {
            let v = self.set.posterior_mean(self.set.mu_lo(), t);
            anchor_lo = anchor_lo.min(v);
            anchor_hi = anchor_hi.max(v);
            (v, true)
        } else {
            (f64::NEG_INFINITY, false)
        };
        let (hi, hi_is_real) = if self.set.mu_hi().is_finite() {
            let v = self.set.posterior_mean(self.set.mu_hi(), t);
            anchor_lo = anchor_lo.min(v);
            anchor_hi = anchor_hi.max(v);
            (v, true)
        } else {
            (f64::INFINITY, false)
        };
        MeanInterval {
            lo: if lo_is_real {
                lo
            } else {
                anchor_lo - self.trust_halfwidth
            },
            hi: if hi_is_real {
                hi
            } else {
                anchor_hi + self.trust_halfwidth
            },
            lo_is_real,
            hi_is_real,
        }
    }

    /// I(kappa N(m, t) + (1 - kappa) working || benchmark). At kappa = 1 the
    /// closed Gaussian-Gaussian form; otherwise quadrature at 128 nodes
    /// (cheap enough for line searches; the final divergence is recomputed
    /// with the adaptive rule).
    fn eval(&self, m: f64, t: f64) -> f64 {
        if self.kappa == 1.0 {
            let (bm, bv) = (self.benchmark.mean(), self.benchmark.variance());
            0.5 * ((bv / t).ln() + t / bv + (m - bm) * (m - bm) / bv - 1.0)
        } else {
            let pw = [self.kappa, 1.0 - self.kappa];
            let pm = [m, self.working.mean()];
            let pv = [t, self.working.variance()];
            let log_ratio = |x: f64| {
                numeric::mixture_log_pdf(&pw, &pm, &pv, x)
                    - numeric::gaussian_log_pdf(x, self.benchmark.mean(), self.benchmark.variance())
            };
            let rule = numeric::hermite_128();
            let mut acc = 0.0;
            for i in 0..2 {
                if pw[i] > 0.0 {
                    acc += pw[i] * numeric::gauss_hermite_expect(rule, pm[i], pv[i], &log_ratio);
                }
            }
            acc
        }
    }

    /// The reported divergence at the optimum, with the 128/256-node
    /// agreement check and subdivision fallback.
    fn final_divergence(&self, m: f64, t: f64) -> f64 {
        if self.kappa == 1.0 {
            return self.eval(m, t);
        }
        crate::distributions::kl_continuous_quadrature(
            &[self.kappa, 1.0 - self.kappa],
            &[m, self.working.mean()],
            &[t, self.working.variance()],
            &[1.0],
            &[self.benchmark.mean()],
            &[self.benchmark.variance()],
        )
    }
}

/// Projects a Gaussian benchmark onto a contracted conjugate-normal set.
/// Multi-start (3x3) coordinate descent over the feasible (m, t) box;
/// infinite mu bounds are handled by a benchmark-centered trust region that
/// doubles and re-solves whenever the optimum lands on it.
pub fn project_gaussian(
    set: &ContractedSet,
    benchmark: &Gaussian,
) -> Result<(Distribution, Divergence, BoundaryFlag), Error> {
    let KnowledgeBase::GaussianConjugate(conj) = set.base() else {
        return Err(Error::UnsupportedProjection(
            "gaussian projection requires a conjugate-normal base",
        ));
    };
    let Distribution::Gaussian(working) = set.working() else {
        return Err(Error::UnsupportedProjection(
            "gaussian projection requires a Gaussian working posterior",
        ));
    };
    let kappa = set.kappa();
    if kappa == 0.0 {
        let divergence = kl_divergence(set.working(), &(*benchmark).into())?;
        return Ok((set.working().clone(), divergence, BoundaryFlag::Interior));
    }

    let (t_lo_raw, t_hi) = conj.t_bounds();
    let t_lo = t_lo_raw.max(1e-12);
    let needs_trust = !conj.mu_lo().is_finite() || !conj.mu_hi().is_finite();

    let mut trust_halfwidth = 12.0 * benchmark.std_dev();
    let mut best: Option<(f64, f64, f64, f64)> = None; // (m, t, value, last sweep improvement)
    for _widening in 0..8 {
        let objective = GaussianObjective {
            set: conj,
            working,
            benchmark,
            kappa,
            trust_halfwidth,
        };
        best = Some(minimize_gaussian_objective(&objective, t_lo, t_hi));
        let (m, t, _, _) = best.unwrap();
        if !needs_trust {
            break;
        }
        // Re-solve on a doubled trust region if the optimum pressed against
        // a synthetic boundary.
        let iv = objective.mean_interval(t);
        let margin = 1e-6 * trust_halfwidth;
        let on_lo = !iv.lo_is_real && m <= iv.lo + margin;
        let on_hi = !iv.hi_is_real && m >= iv.hi - margin;
        if on_lo || on_hi {
            trust_halfwidth *= 2.0;
        } else {
            break;
        }
    }
    let (m_opt, t_opt, _value, last_improvement) = best.expect("at least one solve");
    if last_improvement > 1e-8 {
        return Err(Error::NonConvergence);
    }

    let objective = GaussianObjective {
        set: conj,
        working,
        benchmark,
        kappa,
        trust_halfwidth,
    };
    let flag = gaussian_boundary_flag(&objective, m_opt, t_opt, t_lo, t_hi);
    let component = Gaussian::new(m_opt, t_opt)?;
    let posterior: Distribution = if kappa == 1.0 {
        component.into()
    } else if approx_same(&component.into(), &(*working).into(), 1e-12) {
        // kappa P + (1 - kappa) P collapses to P.
        (*working).into()
    } else {
        GaussianMixture::new(vec![kappa, 1.0 - kappa], vec![component, *working])?.into()
    };
    let raw_divergence = objective.final_divergence(m_opt, t_opt);
    if !raw_divergence.is_finite() {
        return Err(Error::InfiniteBenchmarkDivergence);
    }
    let divergence = Divergence::finite(raw_divergence);
    Ok((posterior, divergence, flag))
}

/// 3x3 multi-start coordinate descent. Returns (m, t, objective value, last
/// sweep improvement of the winning start).
fn minimize_gaussian_objective(
    objective: &GaussianObjective<'_>,
    t_lo: f64,
    t_hi: f64,
) -> (f64, f64, f64, f64) {
    let t_span = (t_hi - t_lo).max(0.0);
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for &rt in &[0.05, 0.5, 0.95] {
        let t0 = t_lo + rt * t_span;
        let iv = objective.mean_interval(t0);
        for &rm in &[0.05, 0.5, 0.95] {
            let m0 = iv.lo + rm * (iv.hi - iv.lo);
            let (m, t, value, improvement) = coordinate_descent(objective, m0, t0, t_lo, t_hi);
            if best.is_none() || value < best.unwrap().2 {
                best = Some((m, t, value, improvement));
            }
        }
    }
    best.expect("nonempty start grid")
}

fn coordinate_descent(
    objective: &GaussianObjective<'_>,
    m0: f64,
    t0: f64,
    t_lo: f64,
    t_hi: f64,
) -> (f64, f64, f64, f64) {
    let mut m = m0;
    let mut t = t0;
    let mut value = objective.eval(m, t);
    let mut improvement = f64::INFINITY;
    for _sweep in 0..200 {
        let iv = objective.mean_interval(t);
        let xtol_m = 1e-11 * (1.0 + (iv.hi - iv.lo).abs());
        let (m_new, _) = numeric::line_min(&|mm| objective.eval(mm, t), iv.lo, iv.hi, xtol_m);
        m = m_new;
        let (t_new, _) = numeric::line_min(
            &|tt| {
                let iv = objective.mean_interval(tt);
                objective.eval(m.clamp(iv.lo, iv.hi), tt)
            },
            t_lo,
            t_hi,
            1e-11,
        );
        t = t_new;
        let iv = objective.mean_interval(t);
        m = m.clamp(iv.lo, iv.hi);
        let new_value = objective.eval(m, t);
        improvement = value - new_value;
        value = new_value;
        if improvement.abs() < 1e-10 {
            improvement = improvement.abs();
            break;
        }
    }
    (m, t, value, improvement)
}

fn gaussian_boundary_flag(
    objective: &GaussianObjective<'_>,
    m: f64,
    t: f64,
    t_lo: f64,
    t_hi: f64,
) -> BoundaryFlag {
    let t_eps = 1e-9 * (1.0 + t_hi - t_lo);
    if t_hi - t_lo > t_eps {
        if t <= t_lo + t_eps {
            return BoundaryFlag::ClippedLow;
        }
        if t >= t_hi - t_eps {
            return BoundaryFlag::ClippedHigh;
        }
    }
    let iv = objective.mean_interval(t);
    let m_eps = 1e-9 * (1.0 + (iv.hi - iv.lo).abs());
    if iv.hi - iv.lo > m_eps {
        if iv.lo_is_real && m <= iv.lo + m_eps {
            return BoundaryFlag::ClippedLow;
        }
        if iv.hi_is_real && m >= iv.hi - m_eps {
            return BoundaryFlag::ClippedHigh;
        }
    }
    BoundaryFlag::Interior
}

fn project_onto(
    set: &ContractedSet,
    benchmark: &Distribution,
) -> Result<(Distribution, Divergence, BoundaryFlag), Error> {
    match set.base() {
        KnowledgeBase::BinaryNullBounded(_) => {
            let Distribution::Binary(b) = benchmark else {
                return Err(Error::MismatchedSpace);
            };
            let (posterior, divergence, flag) = project_binary(set, b)?;
            Ok((posterior.into(), divergence, flag))
        }
        KnowledgeBase::GaussianConjugate(_) => {
            let Distribution::Gaussian(g) = benchmark else {
                return Err(Error::UnsupportedProjection(
                    "conjugate-normal projection takes Gaussian benchmarks",
                ));
            };
            project_gaussian(set, g)
        }
        KnowledgeBase::Unconstrained => {
            // Only reached at kappa = 0 (any positive kappa absorbs the
            // benchmark beforehand): the contracted set is {working}.
            let divergence = kl_divergence(set.working(), benchmark)?;
            Ok((set.working().clone(), divergence, BoundaryFlag::Interior))
        }
    }
}

/// Per-benchmark finiteness validation: the projection reduction needs
/// I(P'||benchmark) finite over the plausible set, and on the binary space
/// every plausible posterior has infinite divergence to a benchmark with
/// null mass 0 or 1.
fn validate_benchmarks(working: &Distribution, benchmarks: &BenchmarkSet) -> Result<(), Error> {
    if matches!(space_of(working), crate::distributions::Space::Binary) {
        for b in benchmarks.iter() {
            if let Distribution::Binary(b) = b {
                if b.p0() <= 0.0 || b.p0() >= 1.0 {
                    return Err(Error::InfiniteBenchmarkDivergence);
                }
            }
        }
    }
    Ok(())
}

/// Computes the moderate posterior: per-benchmark information projections
/// onto the κ-contracted set, the candidate set of projections achieving the
/// minimal divergence (tolerance 1e-10), and the tie-break selecting the
/// candidate closest to the working posterior, lowest index on equality.
///
/// When a benchmark is itself a member of the contracted set, the member
/// benchmark closest to the working posterior is returned directly with
/// divergence zero.
pub fn moderate_posterior(
    working: &Distribution,
    base: &KnowledgeBase,
    benchmarks: &BenchmarkSet,
    kappa: f64,
) -> Result<BlendResult, Error> {
    validate_kappa(kappa)?;
    for b in benchmarks.iter() {
        require_same_space(working, b)?;
    }
    validate_benchmarks(working, benchmarks)?;
    let set = contract(base.clone(), working.clone(), kappa)?;

    // Member-benchmark shortcut.
    let members: Vec<usize> = (0..benchmarks.len())
        .filter(|&i| set.contains(benchmarks.get(i)).unwrap_or(false))
        .collect();
    if !members.is_empty() {
        let mut selected = members[0];
        let mut best = f64::INFINITY;
        for &i in &members {
            let d = kl_divergence(working, benchmarks.get(i))?.value();
            if d < best {
                best = d;
                selected = i;
            }
        }
        return Ok(BlendResult {
            posterior: benchmarks.get(selected).clone(),
            achieved_divergence: Divergence::finite(0.0),
            selected_benchmark: selected,
            candidate_count: members.len(),
            boundary_flag: BoundaryFlag::BenchmarkAbsorbed,
        });
    }

    let mut projections = Vec::with_capacity(benchmarks.len());
    for b in benchmarks.iter() {
        projections.push(project_onto(&set, b)?);
    }
    let min_divergence = projections
        .iter()
        .map(|(_, d, _)| d.value())
        .fold(f64::INFINITY, f64::min);
    if !min_divergence.is_finite() {
        return Err(Error::InfiniteBenchmarkDivergence);
    }
    let candidates: Vec<usize> = (0..projections.len())
        .filter(|&i| projections[i].1.value() <= min_divergence + 1e-10)
        .collect();
    let selected = if candidates.len() == 1 {
        candidates[0]
    } else {
        // The tie-break of the uniqueness rule: closest to the working
        // posterior, first index on exact equality.
        let mut chosen = candidates[0];
        let mut best = f64::INFINITY;
        for &i in &candidates {
            let d = kl_divergence(working, &projections[i].0)?.value();
            if d < best {
                best = d;
                chosen = i;
            }
        }
        chosen
    };
    let (posterior, achieved_divergence, boundary_flag) = projections.swap_remove(selected);
    Ok(BlendResult {
        posterior,
        achieved_divergence,
        selected_benchmark: selected,
        candidate_count: candidates.len(),
        boundary_flag,
    })
}

/// The blended posterior: the moderate posterior under complete caution.
pub fn blended_posterior(
    working: &Distribution,
    base: &KnowledgeBase,
    benchmarks: &BenchmarkSet,
) -> Result<BlendResult, Error> {
    moderate_posterior(working, base, benchmarks, 1.0)
}
