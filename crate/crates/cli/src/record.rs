//! The machine-readable result record: a format tag, the config echo, and
//! one row per caution value. JSON output round-trips bit-exactly (floats
//! are emitted in shortest form that re-parses to the identical value);
//! CSV carries a versioned header comment and a fixed column order.

use serde::{Deserialize, Serialize};

use caution_blend::{Distribution, Divergence};

use crate::config::AnalysisConfig;

pub const FORMAT_TAG: &str = "caution-blend v1";

/// A cell value: a finite number, or an explicit token such as "inf" or
/// "nonexistent", or a per-setting pair for the two-table decision analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
    PerSetting {
        setting1: Box<Value>,
        setting2: Box<Value>,
    },
}

impl Value {
    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            Value::Number(v)
        } else if v.is_infinite() && v > 0.0 {
            Value::Text("inf".into())
        } else if v.is_infinite() {
            Value::Text("-inf".into())
        } else {
            Value::Text("nan".into())
        }
    }

    pub fn from_divergence(d: &Divergence) -> Self {
        match d {
            Divergence::Finite(v) => Value::Number(*v),
            Divergence::Infinite => Value::Text("inf".into()),
        }
    }

    fn csv_cell(&self) -> String {
        match self {
            Value::Number(v) => format!("{v}"),
            Value::Text(t) => t.clone(),
            Value::PerSetting { setting1, setting2 } => {
                format!("{};{}", setting1.csv_cell(), setting2.csv_cell())
            }
        }
    }
}

/// Posterior parameters in serializable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PosteriorParams {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Binary {
        null_mass: f64,
    },
    GaussianMixture {
        weights: Vec<f64>,
        means: Vec<f64>,
        variances: Vec<f64>,
    },
    FiniteDiscrete {
        states: Vec<String>,
        masses: Vec<f64>,
    },
}

impl PosteriorParams {
    pub fn from_distribution(d: &Distribution) -> Self {
        match d {
            Distribution::Gaussian(g) => PosteriorParams::Gaussian {
                mean: g.mean(),
                variance: g.variance(),
            },
            Distribution::Binary(b) => PosteriorParams::Binary { null_mass: b.p0() },
            Distribution::GaussianMixture(m) => PosteriorParams::GaussianMixture {
                weights: m.weights().to_vec(),
                means: m.components().iter().map(|c| c.mean()).collect(),
                variances: m.components().iter().map(|c| c.variance()).collect(),
            },
            Distribution::FiniteDiscrete(f) => PosteriorParams::FiniteDiscrete {
                states: f.states().to_vec(),
                masses: f.masses().to_vec(),
            },
        }
    }

    fn csv_cell(&self) -> String {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join("|")
        };
        match self {
            PosteriorParams::Gaussian { mean, variance } => {
                format!("gaussian(mean={mean};variance={variance})")
            }
            PosteriorParams::Binary { null_mass } => format!("binary(null_mass={null_mass})"),
            PosteriorParams::GaussianMixture {
                weights,
                means,
                variances,
            } => format!(
                "mixture(weights={};means={};variances={})",
                join(weights),
                join(means),
                join(variances)
            ),
            PosteriorParams::FiniteDiscrete { states, masses } => format!(
                "discrete(states={};masses={})",
                states.join("|"),
                join(masses)
            ),
        }
    }
}

/// One per-caution row of an analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub kappa: f64,
    pub posterior: Option<PosteriorParams>,
    pub achieved_divergence: Option<Value>,
    pub selected_benchmark: Option<usize>,
    pub boundary_flag: Option<String>,
    pub action: Option<Value>,
    pub objective: Option<Value>,
    pub status: String,
}

impl Row {
    pub fn csv_line(&self) -> String {
        let cell = |v: &Option<Value>| v.as_ref().map(Value::csv_cell).unwrap_or_default();
        [
            format!("{}", self.kappa),
            self.posterior
                .as_ref()
                .map(PosteriorParams::csv_cell)
                .unwrap_or_default(),
            cell(&self.achieved_divergence),
            self.selected_benchmark
                .map(|i| i.to_string())
                .unwrap_or_default(),
            self.boundary_flag.clone().unwrap_or_default(),
            cell(&self.action),
            cell(&self.objective),
            self.status.clone(),
        ]
        .join(",")
    }
}

pub const CSV_COLUMNS: &str =
    "kappa,posterior,achieved_divergence,selected_benchmark,boundary_flag,action,objective,status";

/// A full analysis result: format tag, config echo, per-kappa rows sorted
/// ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub format: String,
    pub config: AnalysisConfig,
    pub rows: Vec<Row>,
}

impl ResultRecord {
    pub fn new(config: AnalysisConfig, rows: Vec<Row>) -> Self {
        Self {
            format: FORMAT_TAG.into(),
            config,
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("record serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {FORMAT_TAG}\n"));
        out.push_str(CSV_COLUMNS);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_tokens() {
        assert_eq!(Value::from_f64(f64::INFINITY), Value::Text("inf".into()));
        assert_eq!(Value::from_f64(0.5), Value::Number(0.5));
    }

    #[test]
    fn csv_cells_are_flat() {
        let p = PosteriorParams::GaussianMixture {
            weights: vec![0.5, 0.5],
            means: vec![0.0, 1.0],
            variances: vec![1.0, 2.0],
        };
        let cell = p.csv_cell();
        assert!(!cell.contains(','), "{cell}");
    }
}
