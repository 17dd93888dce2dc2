//! JSON wire formats for configurations and reports.
//!
//! Exact values travel as canonical strings (`"p/q"`, or `"a+bi"` for complex
//! values) next to a decimal rendering with 17 significant digits.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{
    format_f64, parse_rational, GaussRational, GaussRationalRepr, ParseScalarError,
};
use crate::symbol::{InteractionConfig, SymbolBreakdown, SymbolError};
use crate::tensor::{Covector4, Matrix4, MatrixKind};

pub const SYMBOL_SCHEMA: &str = "emwave.symbol/1";
pub const APPENDIX_SCHEMA: &str = "emwave.verify-appendix/1";
pub const SEARCH_SCHEMA: &str = "emwave.search/1";
pub const SIMULATE_SCHEMA: &str = "emwave.simulate/1";
pub const OBSERVE_SCHEMA: &str = "emwave.observe/1";
pub const MANIFEST_SCHEMA: &str = "emwave.manifest/1";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}[{index}]: expected 4 components, found {found}")]
    Arity {
        field: &'static str,
        index: usize,
        found: usize,
    },
    #[error("{field}: expected 4 covectors, found {found}")]
    Count { field: &'static str, found: usize },
    #[error("{field}[{index}]: {source}")]
    Scalar {
        field: &'static str,
        index: usize,
        #[source]
        source: ParseScalarError,
    },
    #[error(transparent)]
    Invariant(#[from] SymbolError),
}

/// A scalar given either as `"p/q"` or as `{"re": "...", "im": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarInput {
    Real(String),
    Complex(GaussRationalRepr),
}

impl ScalarInput {
    fn value(&self) -> Result<GaussRational, ParseScalarError> {
        match self {
            ScalarInput::Real(s) => GaussRational::parse(s),
            ScalarInput::Complex(r) => GaussRational::try_from(r),
        }
    }
}

/// On-disk interaction configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub zetas: Vec<Vec<ScalarInput>>,
    pub pols: Vec<Vec<ScalarInput>>,
}

fn covectors(
    field: &'static str,
    rows: &[Vec<ScalarInput>],
) -> Result<[Covector4; 4], ConfigError> {
    if rows.len() != 4 {
        return Err(ConfigError::Count {
            field,
            found: rows.len(),
        });
    }
    let mut out: [Covector4; 4] = Default::default();
    for (index, row) in rows.iter().enumerate() {
        if row.len() != 4 {
            return Err(ConfigError::Arity {
                field,
                index,
                found: row.len(),
            });
        }
        for (k, s) in row.iter().enumerate() {
            out[index].0[k] = s.value().map_err(|source| ConfigError::Scalar {
                field,
                index,
                source,
            })?;
        }
    }
    Ok(out)
}

impl ConfigFile {
    pub fn from_config(cfg: &InteractionConfig) -> Self {
        let real_or_complex = |z: &GaussRational| {
            if z.is_real() {
                ScalarInput::Real(z.to_string())
            } else {
                ScalarInput::Complex(GaussRationalRepr::from(z))
            }
        };
        ConfigFile {
            schema: None,
            zetas: cfg
                .zetas
                .iter()
                .map(|c| c.0.iter().map(real_or_complex).collect())
                .collect(),
            pols: cfg
                .pols
                .iter()
                .map(|c| c.0.iter().map(|z| ScalarInput::Complex(z.into())).collect())
                .collect(),
        }
    }

    /// Validated configuration (light-like covectors, gauge-compatible polarizations).
    pub fn into_config(&self) -> Result<InteractionConfig, ConfigError> {
        let zetas = covectors("zetas", &self.zetas)?;
        let pols = covectors("pols", &self.pols)?;
        Ok(InteractionConfig::new(zetas, pols)?)
    }
}

pub fn parse_config(text: &str) -> Result<InteractionConfig, ConfigError> {
    let file: ConfigFile = serde_json::from_str(text)?;
    file.into_config()
}

/// An exact value with its decimal rendering.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decimal_im: Option<String>,
}

impl From<&GaussRational> for ExactValue {
    fn from(z: &GaussRational) -> Self {
        let (re, im) = z.to_f64_pair();
        ExactValue {
            exact: z.to_string(),
            decimal: format_f64(re),
            decimal_im: (!z.is_real()).then(|| format_f64(im)),
        }
    }
}

/// Rational input such as `"-3/4"` or `"0.25"`, as an [`ExactValue`].
pub fn exact_from_str(s: &str) -> Result<ExactValue, ParseScalarError> {
    Ok(ExactValue::from(&GaussRational::real(parse_rational(s)?)))
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    pub kind: MatrixKind,
    /// `null` where the kind leaves an entry undefined.
    pub entries: Vec<Vec<Option<ExactValue>>>,
}

impl From<&Matrix4> for MatrixReport {
    fn from(m: &Matrix4) -> Self {
        MatrixReport {
            kind: m.kind(),
            entries: (0..4)
                .map(|a| {
                    (0..4)
                        .map(|b| m.entry(a, b).ok().map(ExactValue::from))
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolReport {
    pub schema: &'static str,
    /// Entries are coefficients of `c_π = (2π)⁻³`.
    pub cpi_factored: bool,
    pub h1: MatrixReport,
    pub h2: MatrixReport,
    pub h3: MatrixReport,
    pub total: MatrixReport,
    /// Slots (02, 03, 12, 13, 23) of the total.
    pub t_vector: Vec<ExactValue>,
}

impl SymbolReport {
    pub fn new(b: &SymbolBreakdown) -> Self {
        SymbolReport {
            schema: SYMBOL_SCHEMA,
            cpi_factored: b.total.cpi_factored,
            h1: (&b.h1.matrix).into(),
            h2: (&b.h2.matrix).into(),
            h3: (&b.h3.matrix).into(),
            total: (&b.total.matrix).into(),
            t_vector: crate::symbol::t_projection(&b.total)
                .0
                .iter()
                .map(ExactValue::from)
                .collect(),
        }
    }
}

pub fn covector_strings(c: &Covector4) -> Vec<String> {
    c.0.iter().map(|z| z.to_string()).collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}
