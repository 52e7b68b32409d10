//! Closed-form Lebesgue norms of the train and its derivative.
//!
//! Per block `n`, `integral of w^rho = (2/(sigma rho + 1) + 1) W^(sigma rho + 1)`
//! with `W = n^-theta`, so summing the blocks gives
//!
//! ```text
//! ||w||_rho^rho  = (2/(sigma rho + 1) + 1) * sum_{n>=2} n^{-theta(sigma rho + 1)}
//! ||w'||_rho^rho = 2 sigma^rho / (1 + (sigma-1) rho) * sum_{n>=2} n^{-theta(1 + (sigma-1) rho)}
//! ```
//!
//! The first series always converges; the second diverges exactly when
//! `sigma < 1` and `(1 - sigma) / (1 - 1/theta) >= 1/rho` (with `1/inf = 0`),
//! either because the ramp-edge singularity `t^{(sigma-1)rho}` fails local
//! integrability or because the block sum fails at the accumulation point.

use crate::bump::BumpParams;
use crate::error::{Error, Result};
use crate::zeta::zeta_tail;

/// Value of a possibly divergent Lebesgue norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpNorm {
    Finite(f64),
    Divergent,
}

impl LpNorm {
    pub fn finite(self) -> Option<f64> {
        match self {
            LpNorm::Finite(v) => Some(v),
            LpNorm::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, LpNorm::Divergent)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::BadRho { rho });
    }
    Ok(())
}

/// `||w||_rho` in closed form; finite for every `rho in (0, inf]`.
pub fn w_lp_norm(bump: &BumpParams, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let (sigma, theta) = (bump.sigma(), bump.theta());
    if rho.is_infinite() {
        return Ok(bump.sup_w());
    }
    let srho = sigma * rho + 1.0;
    let series = zeta_tail(theta * srho, 1e-13)?.value;
    Ok(((2.0 / srho + 1.0) * series).powf(1.0 / rho))
}

/// Critical integrability index of `w'`: the norm `||w'||_rho` diverges
/// exactly when `sigma < 1` and `1/rho <=` this value.
pub fn w_prime_critical_inv_rho(sigma: f64, theta: f64) -> f64 {
    (1.0 - sigma) / (1.0 - 1.0 / theta)
}

/// `||w'||_rho` in closed form, or [`LpNorm::Divergent`] on or past the
/// integrability boundary.
pub fn w_prime_lp_norm(bump: &BumpParams, rho: f64) -> Result<LpNorm> {
    check_rho(rho)?;
    let (sigma, theta) = (bump.sigma(), bump.theta());
    let inv_rho = if rho.is_infinite() { 0.0 } else { 1.0 / rho };
    if sigma < 1.0 && w_prime_critical_inv_rho(sigma, theta) >= inv_rho {
        return Ok(LpNorm::Divergent);
    }
    if rho.is_infinite() {
        // Largest slope over all ramps; attained on block 2 for sigma >= 1.
        return Ok(LpNorm::Finite(
            sigma * (2.0f64).powf(-theta * (sigma - 1.0)),
        ));
    }
    let expo = 1.0 + (sigma - 1.0) * rho;
    debug_assert!(expo > 0.0 && theta * expo > 1.0);
    let series = zeta_tail(theta * expo, 1e-13)?.value;
    Ok(LpNorm::Finite(
        (2.0 * sigma.powf(rho) / expo * series).powf(1.0 / rho),
    ))
}
