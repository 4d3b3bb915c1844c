//! Executes a validated analysis over a caution grid and assembles the
//! result record. Per-row numerical failures are recorded as status tokens
//! without aborting the remaining rows.

use caution_blend::confidence::{confidence_posterior_normal, self_benchmark_blend};
use caution_blend::decisions::{
    ellsberg_loss_setting_one, ellsberg_loss_setting_two, ellsberg_mass_bounds,
    ellsberg_uniform_working, kcg_action_discrete, moderate_action, ActionChoice, ActionResult,
    LossSpec,
};
use caution_blend::distributions::kl_divergence;
use caution_blend::projection::moderate_posterior;
use caution_blend::{
    BenchmarkSet, Binary, BinaryNullBoundedSet, BlendResult, Distribution, Error,
    GaussianConjugateSet, KnowledgeBase, WorkingPrior,
};

use crate::config::{
    resolve_kappas, validate_parameters, AnalysisConfig, KnowledgeKind, ValidatedAnalysis,
};
use crate::error::CliError;
use crate::record::{PosteriorParams, ResultRecord, Row, Value};

pub fn execute(
    config: &AnalysisConfig,
    grid_override: Option<&[f64]>,
) -> Result<ResultRecord, CliError> {
    let analysis = validate_parameters(config)?;
    let kappas = resolve_kappas(&config.parameters, grid_override)?;
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in &kappas {
        rows.push(run_row(&analysis, kappa));
    }
    Ok(ResultRecord::new(config.clone(), rows))
}

fn blend_row(kappa: f64, blend: &BlendResult, action: Option<&ActionResult>) -> Row {
    Row {
        kappa,
        posterior: Some(PosteriorParams::from_distribution(&blend.posterior)),
        achieved_divergence: Some(Value::from_divergence(&blend.achieved_divergence)),
        selected_benchmark: Some(blend.selected_benchmark),
        boundary_flag: Some(blend.boundary_flag.as_str().to_string()),
        action: action.map(action_value),
        objective: action.map(|a| Value::from_f64(a.objective)),
        status: "ok".into(),
    }
}

fn action_value(result: &ActionResult) -> Value {
    match &result.action {
        Some(ActionChoice::Estimate(v)) => Value::from_f64(*v),
        Some(ActionChoice::Label(l)) => Value::Text(l.clone()),
        None => Value::Text("nonexistent".into()),
    }
}

fn error_row(kappa: f64, err: &Error) -> Row {
    let status = match err {
        Error::NonConvergence => "error:non_convergence".into(),
        other => format!("error:{other}"),
    };
    Row {
        kappa,
        posterior: None,
        achieved_divergence: None,
        selected_benchmark: None,
        boundary_flag: None,
        action: None,
        objective: None,
        status,
    }
}

fn run_row(analysis: &ValidatedAnalysis, kappa: f64) -> Row {
    match try_run_row(analysis, kappa) {
        Ok(row) => row,
        Err(err) => error_row(kappa, &err),
    }
}

fn try_run_row(analysis: &ValidatedAnalysis, kappa: f64) -> Result<Row, Error> {
    match analysis {
        ValidatedAnalysis::GaussianBlend {
            x,
            prior_mean,
            prior_sd,
            mu_lo,
            mu_hi,
            sigma_lo,
            sigma_hi,
            knowledge,
        } => {
            let prior = WorkingPrior::new(*prior_mean, *prior_sd)?;
            let working: Distribution =
                caution_blend::posterior_sets::bayes_update_normal(&prior, *x).into();
            let base = match knowledge {
                KnowledgeKind::Conjugate => KnowledgeBase::GaussianConjugate(
                    GaussianConjugateSet::new(*x, *mu_lo, *mu_hi, *sigma_lo, *sigma_hi)?,
                ),
                KnowledgeKind::Unconstrained => KnowledgeBase::Unconstrained,
            };
            let benchmarks = BenchmarkSet::new(vec![confidence_posterior_normal(*x)?.into()])?;
            let blend = moderate_posterior(&working, &base, &benchmarks, kappa)?;
            let action = moderate_action(&blend.posterior, &LossSpec::Quadratic, None)?;
            Ok(blend_row(kappa, &blend, Some(&action)))
        }
        ValidatedAnalysis::BinaryBlend {
            p,
            working_null_prob,
            null_lower_bound,
        } => {
            let working: Distribution = Binary::new(*working_null_prob)?.into();
            let base =
                KnowledgeBase::BinaryNullBounded(BinaryNullBoundedSet::new(*null_lower_bound)?);
            let benchmarks = BenchmarkSet::new(vec![Binary::new(*p)?.into()])?;
            let blend = moderate_posterior(&working, &base, &benchmarks, kappa)?;
            Ok(blend_row(kappa, &blend, None))
        }
        ValidatedAnalysis::TwoPvalue {
            p1,
            p2,
            working_null_prob,
            null_lower_bound,
        } => {
            let working: Distribution = Binary::new(*working_null_prob)?.into();
            let base =
                KnowledgeBase::BinaryNullBounded(BinaryNullBoundedSet::new(*null_lower_bound)?);
            let benchmarks =
                BenchmarkSet::new(vec![Binary::new(*p1)?.into(), Binary::new(*p2)?.into()])?;
            let blend = moderate_posterior(&working, &base, &benchmarks, kappa)?;
            Ok(blend_row(kappa, &blend, None))
        }
        ValidatedAnalysis::EllsbergKcg => {
            let working = ellsberg_uniform_working();
            let bounds = ellsberg_mass_bounds();
            let one = kcg_action_discrete(&ellsberg_loss_setting_one(), &bounds, &working, kappa)?;
            let two = kcg_action_discrete(&ellsberg_loss_setting_two(), &bounds, &working, kappa)?;
            Ok(Row {
                kappa,
                posterior: None,
                achieved_divergence: None,
                selected_benchmark: None,
                boundary_flag: None,
                action: Some(Value::PerSetting {
                    setting1: Box::new(action_value(&one)),
                    setting2: Box::new(action_value(&two)),
                }),
                objective: Some(Value::PerSetting {
                    setting1: Box::new(Value::from_f64(one.objective)),
                    setting2: Box::new(Value::from_f64(two.objective)),
                }),
                status: "ok".into(),
            })
        }
        ValidatedAnalysis::SelfBenchmark { p, pi_low } => {
            let blended = self_benchmark_blend(*p, *pi_low, kappa)?;
            let benchmark: Distribution = Binary::new(*p)?.into();
            let divergence = kl_divergence(&blended.into(), &benchmark)?;
            let flag = if blended.p0() > *p {
                "clipped_low"
            } else {
                "interior"
            };
            Ok(Row {
                kappa,
                posterior: Some(PosteriorParams::Binary {
                    null_mass: blended.p0(),
                }),
                achieved_divergence: Some(Value::from_divergence(&divergence)),
                selected_benchmark: Some(0),
                boundary_flag: Some(flag.into()),
                action: None,
                objective: None,
                status: "ok".into(),
            })
        }
    }
}
