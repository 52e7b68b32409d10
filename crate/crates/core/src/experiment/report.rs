//! Report assembly: a machine-readable JSON document plus an aligned text
//! rendering, with one line per check. Every failed check carries the
//! measured value and the tolerance that rejected it.

use serde::Serialize;
use std::fmt::Write as _;

use crate::fit::ExponentFit;
use crate::modulus::ModulusSample;
use crate::render::{ext_real, sig_short};

use super::classify::{MembershipCase, ShiftComparison, W1Row};
use super::config::ExperimentConfig;
use super::params::MainTheoremConfig;

/// One verified statement. `detail` always shows the numbers involved; on
/// failure it includes the tolerance that was exceeded.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub stage: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(stage: &str, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            stage: stage.to_string(),
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// One modulus sweep of one train at one integrability index.
#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    /// `"solution"` or `"field"`.
    pub train: String,
    #[serde(with = "ext_real")]
    pub rho: f64,
    pub samples: Vec<ModulusSample>,
    pub fit: Option<ExponentFit>,
    /// The critical exponent the slope should recover, when the prediction
    /// window covers this `rho`.
    pub predicted: Option<f64>,
    /// `"asserted"`, or the reason the prediction is reported unasserted.
    pub validity: String,
    /// Only set when `validity == "asserted"`.
    pub pass: Option<bool>,
}

/// Everything one run produces.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub derived: MainTheoremConfig,
    pub checks: Vec<CheckItem>,
    pub sweeps: Vec<SweepOutcome>,
    pub solution_table: Vec<MembershipCase>,
    pub field_table: Vec<MembershipCase>,
    /// Gradient-integrability verdicts; L mode only.
    pub gradient_table: Option<Vec<W1Row>>,
    pub shift_line: Option<ShiftComparison>,
    pub overall_pass: bool,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Recompute the verdict from the recorded outcomes.
    pub fn compute_overall(&mut self) {
        let checks_ok = self.checks.iter().all(|c| c.pass);
        let sweeps_ok = self.sweeps.iter().all(|s| s.pass.unwrap_or(true));
        let grad_ok = self
            .gradient_table
            .as_ref()
            .map(|t| t.iter().all(|r| r.pass()))
            .unwrap_or(true);
        self.overall_pass = checks_ok && sweeps_ok && grad_ok;
    }

    /// Aligned, human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let d = &self.derived;
        let _ = writeln!(out, "== run parameters ==");
        let _ = writeln!(
            out,
            "  mode {}  p {}  lambda {}  mu {}  epsilon {}",
            d.mode,
            sig_short(d.p),
            sig_short(d.lambda),
            sig_short(d.mu),
            sig_short(d.epsilon)
        );
        let _ = writeln!(
            out,
            "  theta {:.12}  sigma {:.12}  dual sigma {:.12}",
            d.theta, d.sigma, d.sigma_dual
        );
        for (name, ok) in d.hypothesis_chain() {
            let _ = writeln!(out, "  [{}] {name}", if ok { "ok" } else { "VIOLATED" });
        }

        let _ = writeln!(out, "\n== checks ==");
        let width = self
            .checks
            .iter()
            .map(|c| c.stage.len() + c.name.len() + 1)
            .max()
            .unwrap_or(0);
        for c in &self.checks {
            let label = format!("{}/{}", c.stage, c.name);
            let _ = writeln!(
                out,
                "  {} {label:<width$}  {}",
                if c.pass { "pass" } else { "FAIL" },
                c.detail
            );
        }

        let _ = writeln!(out, "\n== modulus sweeps ==");
        for s in &self.sweeps {
            let slope = s
                .fit
                .as_ref()
                .map(|f| format!("{:+.5}", f.slope))
                .unwrap_or_else(|| "    --".to_string());
            let predicted = s
                .predicted
                .map(|p| format!("{p:+.5}"))
                .unwrap_or_else(|| "    --".to_string());
            let verdict = match s.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "note",
            };
            let _ = writeln!(
                out,
                "  {verdict} {:<8} rho {:<5} slope {slope}  predicted {predicted}  [{}]",
                s.train,
                sig_short(s.rho),
                s.validity
            );
        }

        let _ = writeln!(out, "\n== predicted memberships: solution ==");
        for case in &self.solution_table {
            let _ = writeln!(out, "  row {} | rho {:<5} | {}", case.row, sig_short(case.rho), case.describe());
        }
        let _ = writeln!(out, "\n== predicted memberships: field ==");
        for case in &self.field_table {
            let _ = writeln!(out, "  row {} | rho {:<5} | {}", case.row, sig_short(case.rho), case.describe());
        }

        if let Some(table) = &self.gradient_table {
            let _ = writeln!(out, "\n== gradient integrability (A in W1_rho iff rho < mu) ==");
            for row in table {
                let _ = writeln!(
                    out,
                    "  {} rho {:<6} expected {:<5} measured {}",
                    if row.pass() { "pass" } else { "FAIL" },
                    sig_short(row.rho),
                    row.expected_member,
                    row.measured_member
                );
            }
        }

        if let Some(line) = &self.shift_line {
            let _ = writeln!(out, "\n== shift-theorem comparison ==");
            let _ = writeln!(
                out,
                "  guaranteed smoothness {:.6} in L_{}, excluded above {:.6} ({})",
                line.guaranteed,
                sig_short(line.p),
                line.excluded_above,
                line.note
            );
        }

        let _ = writeln!(
            out,
            "\noverall: {}",
            if self.overall_pass { "PASS" } else { "FAIL" }
        );
        out
    }
}
