//! Theorem-mode parameter selection.
//!
//! Both modes pick `1/theta = 1 - epsilon/2` (the hypotheses only demand
//! `1 - epsilon < 1/theta < 1`; the midpoint makes runs reproducible) and
//! derive the train exponent `sigma` so that the critical Besov exponents
//! land exactly where the sharpness argument wants them. Every inequality
//! of the derivation is re-verified numerically and failures name the
//! violated inequality with its numbers.

use serde::Serialize;

use crate::bump::BumpParams;
use crate::error::{Error, Result};
use crate::radial::RadialFieldSpec;
use crate::render::ext_real;

use super::config::Mode;

/// Selected and derived parameters of one run.
#[derive(Debug, Clone, Serialize)]
pub struct MainTheoremConfig {
    pub p: f64,
    pub lambda: f64,
    #[serde(with = "ext_real")]
    pub mu: f64,
    pub epsilon: f64,
    pub mode: Mode,
    /// Derived: `1/theta = 1 - epsilon/2`.
    pub theta: f64,
    /// Derived train exponent.
    pub sigma: f64,
    /// `(p-1) sigma`, pinned to exactly 1 in L mode with `mu = inf`.
    pub sigma_dual: f64,
}

fn violated(name: &str, detail: String) -> Error {
    Error::HypothesisViolated(format!("{name}: {detail}"))
}

fn require(ok: bool, name: &str, detail: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(violated(name, detail))
    }
}

impl MainTheoremConfig {
    /// `1 - 1/theta`, computed from epsilon without a division round trip.
    pub fn theta_gap(&self) -> f64 {
        0.5 * self.epsilon
    }

    fn inv(x: f64) -> f64 {
        if x.is_infinite() {
            0.0
        } else {
            1.0 / x
        }
    }

    /// Critical exponent of the solution train in `L_rho`:
    /// `s_rho = lambda/(p-1) + (1/rho - 1/((p-1) mu)) (1 - 1/theta)`.
    pub fn s_rho(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::BadRho { rho });
        }
        let g = self.theta_gap();
        Ok(self.lambda / (self.p - 1.0)
            + (Self::inv(rho) - Self::inv((self.p - 1.0) * self.mu)) * g)
    }

    /// Critical exponent of the field train in `L_rho`:
    /// `s~_rho = lambda + (1/rho - 1/mu) (1 - 1/theta)`.
    pub fn s_tilde_rho(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::BadRho { rho });
        }
        let g = self.theta_gap();
        Ok(self.lambda + (Self::inv(rho) - Self::inv(self.mu)) * g)
    }

    /// The solution-side train `w_{sigma, theta}`.
    pub fn bump(&self) -> Result<BumpParams> {
        BumpParams::new(self.sigma, self.theta)
    }

    /// The field-side train `w_{(p-1) sigma, theta}`, sharing breakpoints.
    pub fn dual_bump(&self) -> Result<BumpParams> {
        self.bump()?.with_sigma(self.sigma_dual)
    }

    /// The radial lift in dimension `d`.
    pub fn field(&self, d: usize) -> Result<RadialFieldSpec> {
        RadialFieldSpec::new(&self.bump()?, self.p, d)
    }

    /// Advisory: tiny epsilon drives `theta -> 1`, where `zeta(theta)` and
    /// the block counts of every sweep blow up.
    pub fn epsilon_warning(&self) -> Option<String> {
        (self.epsilon < 0.02).then(|| {
            format!(
                "epsilon = {} gives theta = {:.6}; expect large zeta({:.6}) = {:.2} and \
                 slow sweeps",
                self.epsilon,
                self.theta,
                self.theta,
                self.bump().map(|b| b.zeta_theta()).unwrap_or(f64::NAN)
            )
        })
    }

    /// The named inequalities of the selected mode, with their numbers, in
    /// derivation order. All hold by construction; they are re-exported so
    /// reports can show the verified chain.
    pub fn hypothesis_chain(&self) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        let mut push = |name: String, ok: bool| out.push((name, ok));
        let (p, eps, lam, mu) = (self.p, self.epsilon, self.lambda, self.mu);
        let inv_theta = 1.0 - self.theta_gap();
        let sd = self.sigma_dual;
        match self.mode {
            Mode::Main => {
                push(format!("0 < eps = {eps} < 1/p = {}", 1.0 / p), eps > 0.0 && eps < 1.0 / p);
                push(
                    format!("eps (p-1) = {} < lambda = {lam} < 1 - eps = {}", eps * (p - 1.0), 1.0 - eps),
                    eps * (p - 1.0) < lam && lam < 1.0 - eps,
                );
                push(format!("1 - eps < 1/theta = {inv_theta} < 1"), 1.0 - eps < inv_theta && inv_theta < 1.0);
                push(
                    format!("0 < lambda/(p-1) - eps = {} < sigma = {}", lam / (p - 1.0) - eps, self.sigma),
                    0.0 < lam / (p - 1.0) - eps && lam / (p - 1.0) - eps < self.sigma,
                );
                push(format!("sigma = {} <= (p-1) sigma = {sd}", self.sigma), self.sigma <= sd);
                push(format!("(p-1) sigma = {sd} < 1/theta = {inv_theta}"), sd < inv_theta);
            }
            Mode::L => {
                push(format!("p = {p} > 2"), p > 2.0);
                let cap = (1.0 / (p - 1.0)).min(1.0 - 1.0 / (p - 1.0));
                push(format!("0 < eps = {eps} < min(1/(p-1), 1-1/(p-1)) = {cap}"), eps > 0.0 && eps < cap);
                push(format!("0 < sigma = {}", self.sigma), self.sigma > 0.0);
                push(format!("sigma = {} < 1/theta = {inv_theta}", self.sigma), self.sigma < inv_theta);
                push(format!("1/theta = {inv_theta} < (p-1) sigma = {sd}"), inv_theta < sd);
                push(format!("(p-1) sigma = {sd} <= 1"), sd <= 1.0);
            }
        }
        push(format!("1 < mu = {mu} <= inf"), mu > 1.0);
        out
    }
}

/// Sharpness-mode selection: given the regularity shift target `lambda`,
/// the integrability `mu` of the data side, and the slack `epsilon`, derive
/// `theta` and `sigma` and verify the full inequality chain.
pub fn select_params_main(p: f64, lambda: f64, mu: f64, epsilon: f64) -> Result<MainTheoremConfig> {
    require(
        p.is_finite() && p >= 2.0,
        "2 <= p < inf",
        format!("p = {p}"),
    )?;
    require(
        epsilon > 0.0 && epsilon < 1.0 / p,
        "0 < eps < 1/p",
        format!("eps = {epsilon}, 1/p = {}", 1.0 / p),
    )?;
    require(
        epsilon * (p - 1.0) < lambda && lambda < 1.0 - epsilon,
        "eps (p-1) < lambda < 1 - eps",
        format!(
            "eps (p-1) = {}, lambda = {lambda}, 1 - eps = {}",
            epsilon * (p - 1.0),
            1.0 - epsilon
        ),
    )?;
    require(
        mu > 1.0 && !mu.is_nan(),
        "1 < mu <= inf",
        format!("mu = {mu}"),
    )?;
    let gap = 0.5 * epsilon; // 1 - 1/theta
    let theta = 1.0 / (1.0 - gap);
    let mu_term = if mu.is_infinite() {
        0.0
    } else {
        gap / ((p - 1.0) * mu)
    };
    let sigma = lambda / (p - 1.0) - mu_term;
    let sigma_dual = (p - 1.0) * sigma;
    let cfg = MainTheoremConfig {
        p,
        lambda,
        mu,
        epsilon,
        mode: Mode::Main,
        theta,
        sigma,
        sigma_dual,
    };
    for (name, ok) in cfg.hypothesis_chain() {
        require(ok, "derived chain", name)?;
    }
    Ok(cfg)
}

/// Gradient-integrability mode: `lambda` is 1 and the dual train has
/// exponent `(p-1) sigma = 1 - (1-1/theta)/mu`, exactly 1 when `mu = inf`.
pub fn select_params_l(p: f64, mu: f64, epsilon: f64) -> Result<MainTheoremConfig> {
    require(p.is_finite() && p > 2.0, "p > 2", format!("p = {p}"))?;
    let cap = (1.0 / (p - 1.0)).min(1.0 - 1.0 / (p - 1.0));
    require(
        epsilon > 0.0 && epsilon < cap,
        "0 < eps < min(1/(p-1), 1 - 1/(p-1))",
        format!("eps = {epsilon}, cap = {cap}"),
    )?;
    require(
        mu > 1.0 && !mu.is_nan(),
        "1 < mu <= inf",
        format!("mu = {mu}"),
    )?;
    let gap = 0.5 * epsilon;
    let theta = 1.0 / (1.0 - gap);
    let (sigma, sigma_dual) = if mu.is_infinite() {
        // The dual exponent is exactly the Lipschitz edge.
        (1.0 / (p - 1.0), 1.0)
    } else {
        let s = 1.0 / (p - 1.0) - gap / ((p - 1.0) * mu);
        (s, (p - 1.0) * s)
    };
    let cfg = MainTheoremConfig {
        p,
        lambda: 1.0,
        mu,
        epsilon,
        mode: Mode::L,
        theta,
        sigma,
        sigma_dual,
    };
    for (name, ok) in cfg.hypothesis_chain() {
        require(ok, "derived chain", name)?;
    }
    Ok(cfg)
}
