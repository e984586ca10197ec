use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::error::Error;
use crate::fieldlang::{parse_scalar_expr, ChartBox, ParseError, ScalarFieldExpr};
use crate::gauge::GaugeField;
use crate::geometry::TOL_HERM;
use crate::linalg::{hermiticity_residual, MatrixField2};
use crate::operator::{reconstruct, RawOperator};

use super::suites::Suite;

/// A 2×2 matrix of expression strings, row-major.
pub type MatrixText = [[String; 2]; 2];

/// The configuration file as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub name: String,
    pub operator: OperatorSpec,
    /// Covariant subprincipal symbol. Mutually exclusive with `potential`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csub: Option<MatrixText>,
    /// Electromagnetic potential `A`, giving `csub = σ^α A_α`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<[String; 4]>,
    #[serde(default = "default_rho")]
    pub rho: String,
    /// Potential used on the geometric side of the `theorem1` suite instead
    /// of the one extracted from the operator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_potential: Option<[String; 4]>,
    #[serde(default)]
    pub chart: ChartSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub gauges: Vec<GaugeSpec>,
    #[serde(default = "default_masses")]
    pub mass_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bispinor: Option<[String; 4]>,
    /// Suites to run; empty means all.
    #[serde(default)]
    pub suites: Vec<String>,
    /// Per-suite tolerance overrides.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<[MatrixText; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawSpec>,
}

/// Coefficients of `L = P^α ∂_α + Q` given directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub p: [MatrixText; 4],
    pub q: MatrixText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Default for ChartSpec {
    fn default() -> Self {
        ChartSpec { lo: [-0.5; 4], hi: [0.5; 4] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    /// `scalar_psi`, `phase_phi`, `sl2c_R` or `gl2c_Q`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixText>,
}

fn default_rho() -> String {
    "1".into()
}

fn default_seed() -> u64 {
    42
}

fn default_samples() -> usize {
    200
}

fn default_masses() -> Vec<f64> {
    vec![0.0, 1.0, 2.5]
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("cannot parse expression at `{location}`: {source}")]
    Expression {
        location: String,
        #[source]
        source: ParseError,
    },
    #[error("invalid `{block}`: {message}")]
    Validation { block: String, message: String },
}

fn invalid(block: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Validation {
        block: block.into(),
        message: message.to_string(),
    }
}

/// A fully parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct VerificationConfig {
    pub name: String,
    pub operator: RawOperator,
    /// True when the operator was given through its raw coefficients.
    pub raw: bool,
    /// Potential the operator was built from, when given as `potential`.
    pub potential: Option<[ScalarFieldExpr; 4]>,
    pub reference_potential: Option<[ScalarFieldExpr; 4]>,
    pub chart: ChartBox,
    pub gauges: Vec<GaugeField>,
    pub mass_values: Vec<f64>,
    pub bispinor: [ScalarFieldExpr; 4],
    pub suites: Vec<Suite>,
    pub tolerances: BTreeMap<Suite, f64>,
    /// SHA-256 of the canonical serialization of `source`.
    pub digest: String,
    pub source: ConfigFile,
}

impl VerificationConfig {
    pub fn tolerance(&self, suite: Suite) -> f64 {
        self.tolerances.get(&suite).copied().unwrap_or_else(|| suite.default_tolerance())
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<VerificationConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    validate(parse_config_text(&text)?)
}

/// Deserializes a configuration, reporting schema errors with their JSON path.
pub fn parse_config_text(text: &str) -> Result<ConfigFile, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn expr(text: &str, location: impl Into<String>) -> Result<ScalarFieldExpr, ConfigError> {
    parse_scalar_expr(text).map_err(|source| ConfigError::Expression {
        location: location.into(),
        source,
    })
}

fn matrix(text: &MatrixText, location: &str) -> Result<MatrixField2, ConfigError> {
    let mut entries: [[ScalarFieldExpr; 2]; 2] = Default::default();
    for r in 0..2 {
        for c in 0..2 {
            entries[r][c] = expr(&text[r][c], format!("{location}[{r}][{c}]"))?;
        }
    }
    Ok(MatrixField2::new(entries))
}

fn column(text: &[String; 4], location: &str) -> Result<[ScalarFieldExpr; 4], ConfigError> {
    let mut out: [ScalarFieldExpr; 4] = Default::default();
    for (k, t) in text.iter().enumerate() {
        out[k] = expr(t, format!("{location}[{k}]"))?;
    }
    Ok(out)
}

fn default_bispinor() -> [String; 4] {
    ["x1 + i*x2", "1 + x3^2", "cos(x4) - i*x1", "0.5 - x2*x4"].map(String::from)
}

/// Validates a parsed configuration and builds the operator.
pub fn validate(file: ConfigFile) -> Result<VerificationConfig, ConfigError> {
    let chart = ChartBox::new(file.chart.lo, file.chart.hi, file.seed, file.samples).map_err(|e| invalid("chart", e))?;
    if file.samples == 0 {
        return Err(invalid("samples", "must be positive"));
    }
    let rho = expr(&file.rho, "rho")?;

    let potential = file.potential.as_ref().map(|a| column(a, "potential")).transpose()?;
    let (operator, raw) = match (&file.operator.sigma, &file.operator.raw) {
        (Some(sigma_text), None) => {
            let mut sigma: [MatrixField2; 4] = Default::default();
            for (k, m) in sigma_text.iter().enumerate() {
                sigma[k] = matrix(m, &format!("operator.sigma[{k}]"))?;
            }
            for x in chart.sample_points(0) {
                for (k, s) in sigma.iter().enumerate() {
                    let v = s.eval(&x).map_err(|e| invalid(format!("operator.sigma[{k}]"), e))?;
                    let h = hermiticity_residual(&v);
                    if h > TOL_HERM {
                        return Err(invalid(
                            format!("operator.sigma[{k}]"),
                            format!("not Hermitian at {x:?} (residual {h:e})"),
                        ));
                    }
                }
            }
            let csub = match (&file.csub, &file.potential) {
                (Some(_), Some(_)) => return Err(invalid("csub", "give either `csub` or `potential`, not both")),
                (Some(c), None) => matrix(c, "csub")?,
                (None, Some(_)) => {
                    let a = potential.clone().expect("parsed above");
                    (0..4).fold(MatrixField2::zero(), |acc, k| acc.add(&sigma[k].scale(&a[k])))
                }
                (None, None) => MatrixField2::zero(),
            };
            let op = reconstruct(sigma, csub, rho, &chart).map_err(|e| invalid(block_of(&e), e))?;
            (op, false)
        }
        (None, Some(r)) => {
            if file.csub.is_some() || file.potential.is_some() {
                return Err(invalid("operator.raw", "raw operators take their zeroth-order term from `q`"));
            }
            let mut p: [MatrixField2; 4] = Default::default();
            for (k, m) in r.p.iter().enumerate() {
                p[k] = matrix(m, &format!("operator.raw.p[{k}]"))?;
            }
            let q = matrix(&r.q, "operator.raw.q")?;
            let op = RawOperator::new(p, q, rho);
            op.validate(&chart).map_err(|e| invalid(block_of(&e), e))?;
            (op, true)
        }
        _ => return Err(invalid("operator", "exactly one of `sigma` or `raw` is required")),
    };

    let reference_potential = file
        .reference_potential
        .as_ref()
        .map(|a| column(a, "reference_potential"))
        .transpose()?;
    if let Some(a) = &reference_potential {
        for (k, e) in a.iter().enumerate() {
            chart
                .validate_expr(e)
                .map_err(|err| invalid(format!("reference_potential[{k}]"), err))?;
        }
    }

    let mut gauges = Vec::new();
    // Without explicit gauges the catalog defaults are exercised.
    let gauge_specs = if file.gauges.is_empty() {
        super::presets::default_gauges()
    } else {
        file.gauges.clone()
    };
    for (k, g) in gauge_specs.iter().enumerate() {
        let block = format!("gauges[{k}]");
        let scalar = || -> Result<ScalarFieldExpr, ConfigError> {
            let t = g.expr.as_ref().ok_or_else(|| invalid(&block, "`expr` is required"))?;
            expr(t, format!("{block}.expr"))
        };
        let mat = || -> Result<MatrixField2, ConfigError> {
            let t = g.matrix.as_ref().ok_or_else(|| invalid(&block, "`matrix` is required"))?;
            matrix(t, &format!("{block}.matrix"))
        };
        let gauge = match g.kind.as_str() {
            "scalar_psi" => GaugeField::ScalarPsi(scalar()?),
            "phase_phi" => GaugeField::PhasePhi(scalar()?),
            "sl2c_R" => GaugeField::Sl2cR(mat()?),
            "gl2c_Q" => GaugeField::Gl2cQ(mat()?),
            other => return Err(invalid(&block, format!("unknown gauge kind `{other}`"))),
        };
        gauge.validate(&chart).map_err(|e| invalid(&block, e))?;
        gauges.push(gauge);
    }

    for (k, m) in file.mass_values.iter().enumerate() {
        if !(*m >= 0.0) || !m.is_finite() {
            return Err(invalid(format!("mass_values[{k}]"), Error::NegativeMass(*m)));
        }
    }

    let bispinor = column(file.bispinor.as_ref().unwrap_or(&default_bispinor()), "bispinor")?;

    let suites = if file.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        let mut out = Vec::new();
        for (k, s) in file.suites.iter().enumerate() {
            let suite = Suite::from_name(s).ok_or_else(|| invalid(format!("suites[{k}]"), format!("unknown suite `{s}`")))?;
            if !out.contains(&suite) {
                out.push(suite);
            }
        }
        out
    };

    let mut tolerances = BTreeMap::new();
    for (name, tol) in &file.tolerances {
        let suite = Suite::from_name(name).ok_or_else(|| invalid("tolerances", format!("unknown suite `{name}`")))?;
        if !(*tol >= 0.0) {
            return Err(invalid("tolerances", format!("tolerance of `{name}` must be non-negative")));
        }
        tolerances.insert(suite, *tol);
    }

    Ok(VerificationConfig {
        name: file.name.clone(),
        operator,
        raw,
        potential,
        reference_potential,
        chart,
        gauges,
        mass_values: file.mass_values.clone(),
        bispinor,
        suites,
        tolerances,
        digest: digest(&file),
        source: file,
    })
}

fn block_of(e: &Error) -> &'static str {
    match e {
        Error::Density(_) => "rho",
        Error::NotHermitian { .. } => "csub",
        _ => "operator",
    }
}

/// SHA-256 over the canonical JSON serialization.
pub fn digest(file: &ConfigFile) -> String {
    let canonical = serde_json::to_vec(file).expect("config serializes");
    hex::encode(Sha256::digest(&canonical))
}
