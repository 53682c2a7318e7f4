//! Itemized gate-error budgets shared by every scheme.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::BudgetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    UniformBlockade,
    LatticeAveraged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Sequential,
    Simultaneous,
    Grover,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Sequential => "sequential",
            Scheme::Simultaneous => "simultaneous",
            Scheme::Grover => "grover",
        }
    }
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::UniformBlockade => "uniform-blockade",
            Mode::LatticeAveraged => "lattice-averaged",
        }
    }
}

/// Error terms in evaluation order plus their sum.
///
/// `diagnostics` carries auxiliary numbers that are not part of the total,
/// such as alternative closed forms and interaction-to-drive ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub scheme: Scheme,
    pub mode: Mode,
    pub terms: IndexMap<String, f64>,
    pub total: f64,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub diagnostics: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ErrorBudget {
    pub(crate) fn from_terms(
        scheme: Scheme,
        mode: Mode,
        terms: &[(&'static str, f64)],
    ) -> Result<Self, BudgetError> {
        let mut map = IndexMap::with_capacity(terms.len());
        for &(name, value) in terms {
            if !value.is_finite() {
                return Err(BudgetError::NonFinite { term: name });
            }
            debug_assert!(value >= 0.0, "{name} = {value}");
            map.insert(name.to_string(), value);
        }
        let total = map.values().sum();
        Ok(Self { scheme, mode, terms: map, total, diagnostics: IndexMap::new(), warnings: Vec::new() })
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.get(name).copied()
    }
}
