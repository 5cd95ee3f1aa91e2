use serde::{Deserialize, Serialize};

use crate::analysis::ToleranceConfig;
use crate::error::{Error, Result};
use crate::graph_model::SsbmParams;
use crate::linalg::EigOptions;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantConfig {
    #[default]
    Mst,
    /// Threshold at each cell's own `Δ = 0.8 (p − q) √(n/k)`.
    Threshold,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KModeConfig {
    /// Use the cell's `k`.
    #[default]
    Known,
    Auto { k_max: usize },
}

/// Optional per-trial analysis checks; their margins land in
/// [`super::TrialResult::margins`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Eig,
    Poly,
    Sandwich,
    Decomp,
    Fentry,
    Norm,
    Weyl,
    Projconc,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Eig,
        CheckKind::Poly,
        CheckKind::Sandwich,
        CheckKind::Decomp,
        CheckKind::Fentry,
        CheckKind::Norm,
        CheckKind::Weyl,
        CheckKind::Projconc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Eig => "eig",
            CheckKind::Poly => "poly",
            CheckKind::Sandwich => "sandwich",
            CheckKind::Decomp => "decomp",
            CheckKind::Fentry => "fentry",
            CheckKind::Norm => "norm",
            CheckKind::Weyl => "weyl",
            CheckKind::Projconc => "projconc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Settings shared by every trial of a sweep.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub variant: VariantConfig,
    pub k_mode: KModeConfig,
    pub checks: Vec<CheckKind>,
    pub zero_diagonal: bool,
    /// Wall-clock timings make output non-reproducible; off by default and
    /// written as 0.
    pub record_runtime: bool,
    pub eig: EigOptions,
    pub tolerances: ToleranceConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    #[serde(flatten)]
    pub trial: TrialConfig,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameters("trials must be >= 1".into()));
        }
        if [self.n.len(), self.k.len(), self.p.len(), self.q.len()].contains(&0) {
            return Err(Error::InvalidParameters("every grid needs at least one value".into()));
        }
        for params in self.cells() {
            params.validate()?;
            if let KModeConfig::Auto { k_max } = self.trial.k_mode {
                if k_max == 0 || k_max >= params.n {
                    return Err(Error::InvalidParameters(format!(
                        "auto k needs 1 <= k_max < n, got k_max = {k_max}, n = {}",
                        params.n
                    )));
                }
            }
        }
        if self.trial.variant == VariantConfig::Threshold && self.p.iter().any(|p| self.q.iter().any(|q| p <= q)) {
            return Err(Error::InvalidParameters(
                "threshold variant needs p > q in every cell".into(),
            ));
        }
        self.trial.tolerances.validate()
    }

    /// Grid cells in `n, k, p, q` nesting order; `seed` is left at 0.
    pub fn cells(&self) -> Vec<SsbmParams> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &k in &self.k {
                for &p in &self.p {
                    for &q in &self.q {
                        out.push(SsbmParams { n, k, p, q, seed: 0 });
                    }
                }
            }
        }
        out
    }
}
