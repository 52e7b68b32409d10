//! Predicted membership tables for the solution and its flux field, plus
//! the gradient-integrability verdicts and the shift-theorem comparison.
//!
//! Classification depends only on how `rho` orders against the threshold
//! (`mu (p-1)` for the solution, `mu` for the field); the fine index `q`
//! enters solely through the endpoint row, whose membership holds with the
//! supremum index and fails for every finite `q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::w_prime_lp_norm;
use crate::render::ext_real;

use super::params::MainTheoremConfig;

/// Which object a membership verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    SolutionU,
    FieldA,
}

/// One row of a predicted-membership table: contained in smoothness `s_in`,
/// excluded from smoothness `s_out` (same integrability `rho`).
#[derive(Debug, Clone, Serialize)]
pub struct MembershipCase {
    pub space_kind: SpaceKind,
    #[serde(with = "ext_real")]
    pub rho: f64,
    #[serde(with = "ext_real")]
    pub q: f64,
    /// 1: above the threshold, 2: at it, 3: below it.
    pub row: u8,
    pub s_in: f64,
    pub s_out: f64,
    /// Row 2 only: `s_in = s_out`; membership needs the supremum fine
    /// index, exclusion holds for every finite `q`.
    pub endpoint_case: bool,
}

impl MembershipCase {
    /// Human-readable verdict, e.g. for the text report.
    pub fn describe(&self) -> String {
        let what = match self.space_kind {
            SpaceKind::SolutionU => "u",
            SpaceKind::FieldA => "A",
        };
        let rho = crate::render::sig_short(self.rho);
        if self.endpoint_case {
            format!(
                "{what}: in B^{:.6}_{{{rho},inf}}, out of B^{:.6}_{{{rho},q}} for q < inf",
                self.s_in, self.s_out
            )
        } else {
            format!(
                "{what}: in B^{:.6}_{{{rho},q}}, out of B^{:.6}_{{{rho},q}} (any q)",
                self.s_in, self.s_out
            )
        }
    }
}

fn check_indices(rho: f64, q: f64) -> Result<()> {
    if rho.is_nan() || rho < 1.0 {
        return Err(Error::OutOfValidity {
            reason: format!(
                "classification needs 1 <= rho <= inf (rho = {rho}); the quasi-norm range \
                 is only surfaced by the estimator"
            ),
        });
    }
    if q.is_nan() || q <= 0.0 {
        return Err(Error::BadConfig(format!("fine index q = {q} outside (0, inf]")));
    }
    Ok(())
}

fn classify(rho: f64, threshold: f64, base: f64, eps: f64) -> (u8, f64, f64, bool) {
    if rho > threshold {
        (1, base - eps, base, false)
    } else if rho == threshold {
        (2, base, base, true)
    } else {
        (3, base, base + eps, false)
    }
}

/// Predicted membership row for the solution: threshold `mu (p-1)`,
/// smoothness base `1 + lambda/(p-1)`.
pub fn classify_u(rho: f64, q: f64, cfg: &MainTheoremConfig) -> Result<MembershipCase> {
    check_indices(rho, q)?;
    let base = 1.0 + cfg.lambda / (cfg.p - 1.0);
    let threshold = cfg.mu * (cfg.p - 1.0);
    let (row, s_in, s_out, endpoint_case) = classify(rho, threshold, base, cfg.epsilon);
    Ok(MembershipCase {
        space_kind: SpaceKind::SolutionU,
        rho,
        q,
        row,
        s_in,
        s_out,
        endpoint_case,
    })
}

/// Predicted membership row for the flux field: threshold `mu`, smoothness
/// base `lambda`.
pub fn classify_a(rho: f64, q: f64, cfg: &MainTheoremConfig) -> Result<MembershipCase> {
    check_indices(rho, q)?;
    let (row, s_in, s_out, endpoint_case) = classify(rho, cfg.mu, cfg.lambda, cfg.epsilon);
    Ok(MembershipCase {
        space_kind: SpaceKind::FieldA,
        rho,
        q,
        row,
        s_in,
        s_out,
        endpoint_case,
    })
}

/// Gradient-integrability verdict for the flux field: `A` lies in `W^1_rho`
/// exactly when `rho < mu`, and the dual train's slope norm decides it.
#[derive(Debug, Clone, Serialize)]
pub struct W1Row {
    #[serde(with = "ext_real")]
    pub rho: f64,
    /// Predicted: `rho < mu`.
    pub expected_member: bool,
    /// Measured: the dual slope norm is finite in `L_rho`.
    pub measured_member: bool,
}

impl W1Row {
    pub fn pass(&self) -> bool {
        self.expected_member == self.measured_member
    }
}

/// Decide `A in (W^1_rho)^d` for each `rho` via the dual train's slope
/// norm; meaningful for `1 < rho < inf`.
pub fn w1_table(cfg: &MainTheoremConfig, rhos: &[f64]) -> Result<Vec<W1Row>> {
    let dual = cfg.dual_bump()?;
    rhos.iter()
        .map(|&rho| {
            if !(rho > 1.0) || rho.is_infinite() {
                return Err(Error::OutOfValidity {
                    reason: format!("gradient-integrability verdict needs 1 < rho < inf, got {rho}"),
                });
            }
            Ok(W1Row {
                rho,
                expected_member: rho < cfg.mu,
                measured_member: !w_prime_lp_norm(&dual, rho)?.is_divergent(),
            })
        })
        .collect()
}

/// Shift-theorem comparison: the guaranteed gain versus the exclusion bound
/// of this construction at `rho = q = p`.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftComparison {
    pub p: f64,
    pub lambda: f64,
    /// `1 + lambda/(p-1)`: guaranteed smoothness of `u` in `L_p`.
    pub guaranteed: f64,
    /// The construction excludes `u` above this smoothness in `L_p`.
    pub excluded_above: f64,
    /// Whether `lambda` is inside the shift theorem's range `(0, 1 - 1/p)`.
    pub in_range: bool,
    pub note: String,
}

pub fn savare_compare(cfg: &MainTheoremConfig) -> Result<ShiftComparison> {
    let dual_bound = 1.0 - 1.0 / cfg.p; // 1/p'
    let case = classify_u(cfg.p, cfg.p, cfg)?;
    let in_range = cfg.lambda > 0.0 && cfg.lambda < dual_bound;
    let note = if cfg.p == 2.0 {
        "linear case: the shift is 1 + lambda".to_string()
    } else if !in_range {
        format!(
            "lambda = {} outside (0, {dual_bound}); guaranteed shift quoted for reference only",
            cfg.lambda
        )
    } else {
        format!(
            "gap between guarantee and exclusion closes to {}",
            case.s_out - (1.0 + cfg.lambda / (cfg.p - 1.0))
        )
    };
    Ok(ShiftComparison {
        p: cfg.p,
        lambda: cfg.lambda,
        guaranteed: 1.0 + cfg.lambda / (cfg.p - 1.0),
        excluded_above: case.s_out,
        in_range,
        note,
    })
}
