//! Analysis configuration: a TOML document with a `kind`, a `[parameters]`
//! table mirroring the library operation signatures, and an optional
//! `[output]` section. Unknown keys are rejected outright.

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisKind {
    GaussianBlend,
    BinaryBlend,
    TwoPvalue,
    EllsbergKcg,
    SelfBenchmark,
}

impl AnalysisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnalysisKind::GaussianBlend => "gaussian_blend",
            AnalysisKind::BinaryBlend => "binary_blend",
            AnalysisKind::TwoPvalue => "two_pvalue",
            AnalysisKind::EllsbergKcg => "ellsberg_kcg",
            AnalysisKind::SelfBenchmark => "self_benchmark",
        }
    }
}

/// An extended-real bound: a number, or the literal strings "inf" / "-inf".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Literal(BoundLiteral),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundLiteral {
    #[serde(rename = "inf")]
    PosInf,
    #[serde(rename = "-inf")]
    NegInf,
}

impl Bound {
    pub fn resolve(&self, field: &str) -> Result<f64, CliError> {
        match self {
            Bound::Number(v) if v.is_finite() => Ok(*v),
            Bound::Number(v) => Err(CliError::validation(
                field,
                format!("must be finite or the literal \"inf\"/\"-inf\", got {v}"),
            )),
            Bound::Literal(BoundLiteral::PosInf) => Ok(f64::INFINITY),
            Bound::Literal(BoundLiteral::NegInf) => Ok(f64::NEG_INFINITY),
        }
    }
}

/// A caution grid: either the string "start:stop:step" or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Expression(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnowledgeKind {
    Conjugate,
    Unconstrained,
}

/// The kind-specific parameters, kept flat; which fields are required is
/// validated per kind with errors naming the offending field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    // gaussian_blend
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_sd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_lo: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_hi: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_lo: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_hi: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knowledge: Option<KnowledgeKind>,

    // binary_blend / self_benchmark
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_low: Option<f64>,

    // two_pvalue
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi_prior_low: Option<f64>,

    // shared binary-space fields
    #[serde(skip_serializing_if = "Option::is_none")]
    pub working_null_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_lower_bound: Option<f64>,

    // caution
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_grid: Option<GridSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub kind: AnalysisKind,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "is_default_output")]
    pub output: OutputSpec,
}

fn is_default_output(o: &OutputSpec) -> bool {
    o.format.is_none() && o.path.is_none()
}

impl AnalysisConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }
}

fn check_unit(v: f64, field: &str, open_lo: bool, open_hi: bool) -> Result<f64, CliError> {
    let lo_ok = if open_lo { v > 0.0 } else { v >= 0.0 };
    let hi_ok = if open_hi { v < 1.0 } else { v <= 1.0 };
    if v.is_finite() && lo_ok && hi_ok {
        Ok(v)
    } else {
        let lo = if open_lo { "(0" } else { "[0" };
        let hi = if open_hi { "1)" } else { "1]" };
        Err(CliError::validation(
            field,
            format!("must lie in {lo}, {hi}, got {v}"),
        ))
    }
}

fn require<T: Copy>(v: Option<T>, field: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::validation(field, "is required for this analysis kind".into()))
}

/// The caution values an analysis runs at, in ascending order.
pub fn resolve_kappas(
    parameters: &Parameters,
    grid_override: Option<&[f64]>,
) -> Result<Vec<f64>, CliError> {
    let kappas = if let Some(grid) = grid_override {
        grid.to_vec()
    } else {
        match (&parameters.kappa, &parameters.kappa_grid) {
            (Some(_), Some(_)) => {
                return Err(CliError::validation(
                    "kappa",
                    "give either kappa or kappa_grid, not both".into(),
                ))
            }
            (Some(k), None) => vec![*k],
            (None, Some(grid)) => parse_grid_spec(grid)?,
            (None, None) => {
                return Err(CliError::validation(
                    "kappa",
                    "either kappa or kappa_grid is required".into(),
                ))
            }
        }
    };
    validate_grid(&kappas)?;
    Ok(kappas)
}

pub fn parse_grid_spec(grid: &GridSpec) -> Result<Vec<f64>, CliError> {
    match grid {
        GridSpec::List(values) => Ok(values.clone()),
        GridSpec::Expression(text) => parse_grid_expression(text),
    }
}

/// Parses "start:stop:step" or a comma-separated list of values.
pub fn parse_grid_expression(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| CliError::validation("kappa_grid", msg);
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("expected start:stop:step, got {text:?}")));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(format!("expected start:stop:step, got {text:?} ({e})")))?;
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(bad(format!("grid endpoints must be finite, got {text:?}")));
        }
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step <= 0.0 || stop < start {
            return Err(bad(format!(
                "need start <= stop and step > 0, got {text:?}"
            )));
        }
        let count = (stop - start) / step;
        let rounded = count.round();
        let values = if (count - rounded).abs() < 1e-9 && rounded >= 0.0 {
            // The step divides the range: place points as exact fractions of
            // the span so 0:1:0.1 yields 0.1, 0.2, ... without accumulation
            // noise.
            let n = rounded as u32;
            (0..=n)
                .map(|i| {
                    if n == 0 {
                        start
                    } else {
                        start + (stop - start) * (i as f64 / n as f64)
                    }
                })
                .collect()
        } else {
            let mut values = Vec::new();
            let mut i = 0u32;
            loop {
                let v = start + step * i as f64;
                if v > stop + step * 1e-9 {
                    break;
                }
                values.push(v.min(stop));
                i += 1;
            }
            values
        };
        Ok(values)
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("bad grid value {s:?}: {e}")))
            })
            .collect()
    }
}

pub fn validate_grid(kappas: &[f64]) -> Result<(), CliError> {
    if kappas.is_empty() {
        return Err(CliError::validation("kappa_grid", "grid is empty".into()));
    }
    for &k in kappas {
        if !k.is_finite() || !(0.0..=1.0).contains(&k) {
            return Err(CliError::validation(
                "kappa",
                format!("must lie in [0, 1], got {k}"),
            ));
        }
    }
    for pair in kappas.windows(2) {
        if pair[1] <= pair[0] {
            return Err(CliError::validation(
                "kappa_grid",
                "grid values must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// Validated inputs of one analysis, independent of caution.
#[derive(Debug, Clone)]
pub enum ValidatedAnalysis {
    GaussianBlend {
        x: f64,
        prior_mean: f64,
        prior_sd: f64,
        mu_lo: f64,
        mu_hi: f64,
        sigma_lo: f64,
        sigma_hi: f64,
        knowledge: KnowledgeKind,
    },
    BinaryBlend {
        p: f64,
        working_null_prob: f64,
        null_lower_bound: f64,
    },
    TwoPvalue {
        p1: f64,
        p2: f64,
        working_null_prob: f64,
        null_lower_bound: f64,
    },
    EllsbergKcg,
    SelfBenchmark {
        p: f64,
        pi_low: f64,
    },
}

pub fn validate_parameters(config: &AnalysisConfig) -> Result<ValidatedAnalysis, CliError> {
    let p = &config.parameters;
    match config.kind {
        AnalysisKind::GaussianBlend => {
            let x = require(p.x, "x")?;
            if !x.is_finite() {
                return Err(CliError::validation(
                    "x",
                    format!("must be finite, got {x}"),
                ));
            }
            let prior_mean = require(p.prior_mean, "prior_mean")?;
            if !prior_mean.is_finite() {
                return Err(CliError::validation(
                    "prior_mean",
                    format!("must be finite, got {prior_mean}"),
                ));
            }
            let prior_sd = require(p.prior_sd, "prior_sd")?;
            if !prior_sd.is_finite() || prior_sd <= 0.0 {
                return Err(CliError::validation(
                    "prior_sd",
                    format!("must be finite and > 0, got {prior_sd}"),
                ));
            }
            let knowledge = p.knowledge.unwrap_or(KnowledgeKind::Conjugate);
            let mu_lo = p
                .mu_lo
                .unwrap_or(Bound::Literal(BoundLiteral::NegInf))
                .resolve("mu_lo")?;
            let mu_hi = p
                .mu_hi
                .unwrap_or(Bound::Literal(BoundLiteral::PosInf))
                .resolve("mu_hi")?;
            let sigma_lo = p
                .sigma_lo
                .unwrap_or(Bound::Number(0.0))
                .resolve("sigma_lo")?;
            let sigma_hi = p
                .sigma_hi
                .unwrap_or(Bound::Literal(BoundLiteral::PosInf))
                .resolve("sigma_hi")?;
            if mu_lo > mu_hi {
                return Err(CliError::validation(
                    "mu_lo",
                    "must not exceed mu_hi".into(),
                ));
            }
            if sigma_lo < 0.0 || sigma_lo > sigma_hi {
                return Err(CliError::validation(
                    "sigma_lo",
                    "must satisfy 0 <= sigma_lo <= sigma_hi".into(),
                ));
            }
            if knowledge == KnowledgeKind::Conjugate {
                if prior_mean < mu_lo || prior_mean > mu_hi {
                    return Err(CliError::validation(
                        "prior_mean",
                        "must lie within the mu bounds".into(),
                    ));
                }
                if prior_sd < sigma_lo || prior_sd > sigma_hi {
                    return Err(CliError::validation(
                        "prior_sd",
                        "must lie within the sigma bounds".into(),
                    ));
                }
            }
            Ok(ValidatedAnalysis::GaussianBlend {
                x,
                prior_mean,
                prior_sd,
                mu_lo,
                mu_hi,
                sigma_lo,
                sigma_hi,
                knowledge,
            })
        }
        AnalysisKind::BinaryBlend => {
            let pv = check_unit(require(p.p, "p")?, "p", false, false)?;
            let working = check_unit(
                require(p.working_null_prob, "working_null_prob")?,
                "working_null_prob",
                true,
                true,
            )?;
            let bound = check_unit(
                require(p.null_lower_bound, "null_lower_bound")?,
                "null_lower_bound",
                true,
                true,
            )?;
            if working < bound {
                return Err(CliError::validation(
                    "working_null_prob",
                    "must be at least null_lower_bound (the working posterior must be plausible)"
                        .into(),
                ));
            }
            Ok(ValidatedAnalysis::BinaryBlend {
                p: pv,
                working_null_prob: working,
                null_lower_bound: bound,
            })
        }
        AnalysisKind::TwoPvalue => {
            let p1 = check_unit(require(p.p1, "p1")?, "p1", true, false)?;
            let p2 = check_unit(require(p.p2, "p2")?, "p2", true, false)?;
            if p1 > p2 {
                return Err(CliError::validation("p1", "must not exceed p2".into()));
            }
            let working = check_unit(
                require(p.working_null_prob, "working_null_prob")?,
                "working_null_prob",
                true,
                true,
            )?;
            let bound = match (p.null_lower_bound, p.pi_prior_low) {
                (Some(_), Some(_)) => {
                    return Err(CliError::validation(
                        "null_lower_bound",
                        "give either null_lower_bound or pi_prior_low, not both".into(),
                    ))
                }
                (Some(b), None) => check_unit(b, "null_lower_bound", true, true)?,
                (None, Some(pi)) => {
                    let pi = check_unit(pi, "pi_prior_low", true, true)?;
                    let pair = caution_blend::PValuePair::new(p1, p2)
                        .map_err(|e| CliError::validation("p1", e.to_string()))?;
                    caution_blend::confidence::pair_lower_bound(&pair, pi)
                        .map_err(|e| CliError::validation("pi_prior_low", e.to_string()))?
                }
                (None, None) => {
                    return Err(CliError::validation(
                        "null_lower_bound",
                        "either null_lower_bound or pi_prior_low is required".into(),
                    ))
                }
            };
            if working < bound {
                return Err(CliError::validation(
                    "working_null_prob",
                    format!(
                        "must be at least the null lower bound {bound} (the working posterior must be plausible)"
                    ),
                ));
            }
            Ok(ValidatedAnalysis::TwoPvalue {
                p1,
                p2,
                working_null_prob: working,
                null_lower_bound: bound,
            })
        }
        AnalysisKind::EllsbergKcg => Ok(ValidatedAnalysis::EllsbergKcg),
        AnalysisKind::SelfBenchmark => {
            let pv = check_unit(require(p.p, "p")?, "p", false, false)?;
            let pi_low = check_unit(require(p.pi_low, "pi_low")?, "pi_low", true, true)?;
            Ok(ValidatedAnalysis::SelfBenchmark { p: pv, pi_low })
        }
    }
}
