//! Decision rules: the κ-blended worst-case action for finite decision
//! tables and bounded conjugate-normal sets, the action induced by a
//! moderate posterior, and the two urn-drawing fixtures that exhibit the
//! ambiguity-aversion pattern.

use crate::distributions::{
    mean, validate_kappa, variance, Distribution, FiniteDiscrete, Gaussian,
};
use crate::error::Error;
use crate::numeric;
use crate::posterior_sets::GaussianConjugateSet;

/// Loss table for a finite decision problem: rows are actions, columns are
/// states, entries are losses (negated utilities).
#[derive(Debug, Clone, PartialEq)]
pub struct TableLoss {
    actions: Vec<String>,
    states: Vec<String>,
    losses: Vec<Vec<f64>>,
}

impl TableLoss {
    pub fn new<S: Into<String>>(
        actions: Vec<S>,
        states: Vec<S>,
        losses: Vec<Vec<f64>>,
    ) -> Result<Self, Error> {
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if actions.is_empty() || states.is_empty() {
            return Err(Error::InvalidParameter(
                "loss table needs at least one action and one state".into(),
            ));
        }
        if losses.len() != actions.len() || losses.iter().any(|row| row.len() != states.len()) {
            return Err(Error::InvalidParameter(
                "loss table dimensions must match the action and state lists".into(),
            ));
        }
        if losses.iter().flatten().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("losses must be finite".into()));
        }
        Ok(Self {
            actions,
            states,
            losses,
        })
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn row(&self, action: usize) -> &[f64] {
        &self.losses[action]
    }
}

/// Loss under which an action is judged.
#[derive(Debug, Clone, PartialEq)]
pub enum LossSpec {
    /// Scalar squared error (a - theta)^2.
    Quadratic,
    Table(TableLoss),
}

/// An action: either a labeled choice from a finite menu or a real estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionChoice {
    Label(String),
    Estimate(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Existence {
    Unique,
    NonUnique,
    Nonexistent,
}

/// Outcome of a decision rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionResult {
    /// The chosen action; absent when no optimal action exists.
    pub action: Option<ActionChoice>,
    /// The achieved objective (blended or posterior expected loss);
    /// infinite when nonexistent.
    pub objective: f64,
    pub existence: Existence,
}

/// Per-state mass intervals whose intersection with the simplex forms the
/// plausible set of a finite decision problem.
#[derive(Debug, Clone, PartialEq)]
pub struct MassBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl MassBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, Error> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidParameter(
                "lower and upper bound lists must be nonempty and equally long".into(),
            ));
        }
        for (&l, &u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() || l < 0.0 || l > u {
                return Err(Error::InvalidParameter(format!(
                    "state mass interval [{l}, {u}] is invalid"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn contains(&self, masses: &[f64]) -> bool {
        masses.len() == self.lower.len()
            && masses
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&m, (&l, &u))| m >= l - 1e-12 && m <= u + 1e-12)
    }

    /// sup over the plausible set of the expected value of `values`: start
    /// every state at its lower bound and push the remaining mass onto the
    /// highest-valued states first, subject to the interval caps.
    pub fn sup_expected(&self, values: &[f64]) -> Result<f64, Error> {
        let lower_total: f64 = self.lower.iter().sum();
        let upper_total: f64 = self.upper.iter().sum();
        if lower_total > 1.0 + 1e-12 || upper_total < 1.0 - 1e-12 {
            return Err(Error::InfeasibleSet);
        }
        let mut masses = self.lower.clone();
        let mut remaining = 1.0 - lower_total;
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        for i in order {
            if remaining <= 0.0 {
                break;
            }
            let add = (self.upper[i] - self.lower[i]).min(remaining);
            masses[i] += add;
            remaining -= add;
        }
        Ok(masses.iter().zip(values).map(|(m, v)| m * v).sum())
    }
}

const TIE_TOL: f64 = 1e-9;

fn pick_min(objectives: &[f64]) -> (usize, f64, Existence) {
    let mut best_i = 0;
    let mut best = objectives[0];
    for (i, &v) in objectives.iter().enumerate().skip(1) {
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let ties = objectives
        .iter()
        .filter(|&&v| v <= best + TIE_TOL * (1.0 + best.abs()))
        .count();
    let existence = if ties > 1 {
        Existence::NonUnique
    } else {
        Existence::Unique
    };
    (best_i, best, existence)
}

/// The κ-blended worst-case action for a finite decision table: per action,
/// kappa times the supremum of expected loss over the plausible set plus
/// (1 - kappa) times the expected loss under the working posterior. At the
/// endpoints the vanished term is skipped outright.
pub fn kcg_action_discrete(
    loss: &TableLoss,
    plausible: &MassBounds,
    working: &FiniteDiscrete,
    kappa: f64,
) -> Result<ActionResult, Error> {
    validate_kappa(kappa)?;
    if plausible.len() != loss.states().len() || working.states() != loss.states() {
        return Err(Error::LossMismatch);
    }
    if !plausible.contains(working.masses()) {
        return Err(Error::WorkingNotPlausible);
    }
    let mut objectives = Vec::with_capacity(loss.actions().len());
    for a in 0..loss.actions().len() {
        let row = loss.row(a);
        let worst = if kappa > 0.0 {
            kappa * plausible.sup_expected(row)?
        } else {
            0.0
        };
        let bayes = if kappa < 1.0 {
            let e: f64 = working.masses().iter().zip(row).map(|(m, l)| m * l).sum();
            (1.0 - kappa) * e
        } else {
            0.0
        };
        objectives.push(worst + bayes);
    }
    let (best_i, best, existence) = pick_min(&objectives);
    Ok(ActionResult {
        action: Some(ActionChoice::Label(loss.actions()[best_i].clone())),
        objective: best,
        existence,
    })
}

/// The κ-blended worst-case estimate under squared error for a
/// conjugate-normal plausible set. With any infinite mu bound and kappa > 0
/// the worst case diverges for every estimate and no action exists.
pub fn kcg_action_quadratic(
    plausible: &GaussianConjugateSet,
    working: &Gaussian,
    kappa: f64,
) -> Result<ActionResult, Error> {
    validate_kappa(kappa)?;
    if kappa == 0.0 {
        return Ok(ActionResult {
            action: Some(ActionChoice::Estimate(working.mean())),
            objective: working.variance(),
            existence: Existence::Unique,
        });
    }
    if !plausible.mu_lo().is_finite() || !plausible.mu_hi().is_finite() {
        return Ok(ActionResult {
            action: None,
            objective: f64::INFINITY,
            existence: Existence::Nonexistent,
        });
    }
    let (t_lo, t_hi) = plausible.t_bounds();
    // Worst-case posterior risk at estimate a: the quadratic is convex in
    // the posterior mean, so the extreme prior mean is an endpoint; over t
    // the endpoints are scanned together with interior candidates and the
    // best bracket polished.
    let worst_risk = |a: f64| -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for mu in [plausible.mu_lo(), plausible.mu_hi()] {
            let risk = |t: f64| {
                let m = plausible.posterior_mean(mu, t);
                (a - m) * (a - m) + t
            };
            let (_, at_best) = numeric::line_max(&risk, t_lo, t_hi, 1e-10);
            worst = worst.max(risk(t_lo)).max(risk(t_hi)).max(at_best);
        }
        worst
    };
    let objective = |a: f64| {
        let bayes = (a - working.mean()) * (a - working.mean()) + working.variance();
        kappa * worst_risk(a) + (1.0 - kappa) * bayes
    };
    // The minimizer lies in the hull of the attainable posterior means and
    // the working mean.
    let x = plausible.x();
    let mut lo = plausible.mu_lo().min(working.mean()).min(x);
    let mut hi = plausible.mu_hi().max(working.mean()).max(x);
    if lo == hi {
        lo -= 1.0;
        hi += 1.0;
    }
    let (a_opt, value) = numeric::golden_section_min(&objective, lo, hi, 1e-11 * (1.0 + hi - lo));
    Ok(ActionResult {
        action: Some(ActionChoice::Estimate(a_opt)),
        objective: value,
        existence: Existence::Unique,
    })
}

/// The action a moderate posterior prescribes: the posterior mean under
/// quadratic loss, or the expected-loss minimizer over a finite action menu
/// under a table loss, ties resolved to the lowest index.
pub fn moderate_action(
    posterior: &Distribution,
    loss: &LossSpec,
    actions: Option<&[String]>,
) -> Result<ActionResult, Error> {
    match loss {
        LossSpec::Quadratic => {
            let m = mean(posterior)?;
            let v = variance(posterior)?;
            Ok(ActionResult {
                action: Some(ActionChoice::Estimate(m)),
                objective: v,
                existence: Existence::Unique,
            })
        }
        LossSpec::Table(table) => {
            let Distribution::FiniteDiscrete(post) = posterior else {
                return Err(Error::LossMismatch);
            };
            if post.states() != table.states() {
                return Err(Error::LossMismatch);
            }
            let menu: Vec<usize> = match actions {
                None => (0..table.actions().len()).collect(),
                Some(names) => names
                    .iter()
                    .map(|n| {
                        table
                            .actions()
                            .iter()
                            .position(|a| a == n)
                            .ok_or(Error::LossMismatch)
                    })
                    .collect::<Result<_, _>>()?,
            };
            if menu.is_empty() {
                return Err(Error::LossMismatch);
            }
            let objectives: Vec<f64> = menu
                .iter()
                .map(|&a| {
                    post.masses()
                        .iter()
                        .zip(table.row(a))
                        .map(|(m, l)| m * l)
                        .sum()
                })
                .collect();
            let (best_i, best, existence) = pick_min(&objectives);
            Ok(ActionResult {
                action: Some(ActionChoice::Label(table.actions()[menu[best_i]].clone())),
                objective: best,
                existence,
            })
        }
    }
}

/// Urn states shared by the two fixture tables.
pub const URN_STATES: [&str; 3] = ["red", "black", "yellow"];

/// Fixture: $100 on red for action I, $100 on black for action II, as
/// losses (negated dollars).
pub fn ellsberg_loss_setting_one() -> TableLoss {
    TableLoss::new(
        vec!["I", "II"],
        URN_STATES.to_vec(),
        vec![vec![-100.0, 0.0, 0.0], vec![0.0, -100.0, 0.0]],
    )
    .expect("fixture is well formed")
}

/// Fixture: $100 on red-or-yellow for action III, $100 on black-or-yellow
/// for action IV.
pub fn ellsberg_loss_setting_two() -> TableLoss {
    TableLoss::new(
        vec!["III", "IV"],
        URN_STATES.to_vec(),
        vec![vec![-100.0, 0.0, -100.0], vec![0.0, -100.0, -100.0]],
    )
    .expect("fixture is well formed")
}

/// Fixture: a third of the balls are red, the black/yellow split is unknown.
pub fn ellsberg_mass_bounds() -> MassBounds {
    MassBounds::new(
        vec![1.0 / 3.0, 0.0, 0.0],
        vec![1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
    )
    .expect("fixture is well formed")
}

/// Fixture: the uniform working posterior over the three colors.
pub fn ellsberg_uniform_working() -> FiniteDiscrete {
    FiniteDiscrete::new(URN_STATES.to_vec(), vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
        .expect("fixture is well formed")
}
