//! Run configuration: JSON-loadable, with every key overridable by the
//! command line. Extended reals (`mu`, entries of `rho_list`) accept the
//! string `"inf"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::{ext_real, ext_real_vec};

/// Which theorem's parameter selection drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Besov sharpness mode: `sigma = lambda/(p-1) - (1-1/theta)/((p-1)mu)`.
    #[serde(rename = "main")]
    Main,
    /// Gradient-integrability mode: `lambda` is fixed to 1 and the dual
    /// train sits at the Lipschitz edge.
    #[serde(rename = "L", alias = "l")]
    L,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Main => "main",
            Mode::L => "L",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Mode::Main),
            "L" | "l" => Ok(Mode::L),
            other => Err(Error::BadConfig(format!(
                "mode must be \"main\" or \"L\", got {other:?}"
            ))),
        }
    }
}

/// Check tolerances; every one appears in the report next to the measured
/// value it gated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for closed-form vs quadrature norms.
    pub norm_rel: f64,
    /// Half-width of the accepted window around predicted exponents.
    pub slope_window: f64,
    /// Scale factor for the weak-form residual, times `1 + ||psi||_W1`.
    pub weak_residual: f64,
    /// Relative tolerance for strong-vs-weak pairing agreement.
    pub strong_rel: f64,
    /// Spot-check tolerance for exact pointwise identities.
    pub pointwise: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm_rel: 1e-8,
            slope_window: 0.05,
            weak_residual: 1e-8,
            strong_rel: 1e-6,
            pointwise: 1e-12,
        }
    }
}

/// Full experiment description. Defaults reproduce the stock sharpness run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub p: f64,
    pub lambda: f64,
    #[serde(with = "ext_real")]
    pub mu: f64,
    pub epsilon: f64,
    pub mode: Mode,
    #[serde(with = "ext_real_vec")]
    pub rho_list: Vec<f64>,
    /// Dyadic steps `h = 2^{-j}` for the modulus sweeps.
    pub h_exponents: Vec<u32>,
    /// Dimensions for the weak-form stage (grids support 1..=3).
    pub d_list: Vec<usize>,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: 3.0,
            lambda: 0.5,
            mu: 2.0,
            epsilon: 0.05,
            mode: Mode::Main,
            rho_list: vec![1.0, 2.0, 4.0, f64::INFINITY],
            h_exponents: (6..=12).collect(),
            d_list: vec![1, 2],
            tolerances: Tolerances::default(),
            seed: 7,
        }
    }
}

impl ExperimentConfig {
    /// Parse from JSON, rejecting structurally invalid values eagerly so a
    /// bad config never reaches the numeric stages.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::BadConfig(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Structural validation only; theorem hypotheses are checked by the
    /// parameter-selection stage with named inequalities.
    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() {
            return Err(Error::BadConfig(format!("p must be finite, got {}", self.p)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 2.0) {
            return Err(Error::BadConfig(format!(
                "epsilon {} puts the derived theta = 1/(1 - epsilon/2) outside (1, inf)",
                self.epsilon
            )));
        }
        if self.rho_list.is_empty() {
            return Err(Error::BadConfig("rho_list is empty".to_string()));
        }
        for &rho in &self.rho_list {
            if rho.is_nan() || rho <= 0.0 {
                return Err(Error::BadRho { rho });
            }
        }
        if self.h_exponents.is_empty() {
            return Err(Error::BadConfig("h_exponents is empty".to_string()));
        }
        if self.d_list.iter().any(|&d| d == 0 || d > 3) {
            return Err(Error::BadConfig(format!(
                "d_list {:?} outside 1..=3",
                self.d_list
            )));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("norm_rel", t.norm_rel),
            ("slope_window", t.slope_window),
            ("weak_residual", t.weak_residual),
            ("strong_rel", t.strong_rel),
            ("pointwise", t.pointwise),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::BadConfig(format!(
                    "tolerances.{name} = {v} must be positive and finite"
                )));
            }
        }
        Ok(())
    }
}
