//! The staged experiment driver: parameter selection, invariant spot
//! checks, closed-form-versus-quadrature norms, modulus sweeps with
//! exponent fits, weak- and strong-form pairings, and the membership
//! tables. Stage failures are recorded as failed checks and the run
//! continues; the overall verdict aggregates everything.

use std::collections::VecDeque;
use std::path::Path;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bump::BumpParams;
use crate::error::{Error, Result};
use crate::fit::{fit_exponent, predicted_exponent};
use crate::modulus::{diff_norm, full_window, max_step, samples_to_csv, DiffOpts, ModulusSample};
use crate::norms::{w_lp_norm, w_prime_lp_norm};
use crate::probe::TestFunction;
use crate::radial::{f_weak, strong_check, weak_pair, QuadratureGrid};
use crate::reference::{reference_w_lp_norm, reference_w_prime_lp_norm};
use crate::render::sig_short;

use super::classify::{classify_a, classify_u, savare_compare, w1_table, MembershipCase};
use super::config::{ExperimentConfig, Mode};
use super::params::{select_params_l, select_params_main, MainTheoremConfig};
use super::report::{CheckItem, ExperimentReport, SweepOutcome};

/// Sweep quadrature order; the per-piece integrands are smooth after the
/// built-in substitutions, and slope fits only need a few digits.
const SWEEP_ORDER: usize = 8;
/// Tail cutoff factor for sweeps; the omitted fraction is step-independent,
/// so it shifts intercepts, never slopes.
const SWEEP_CUTOFF: f64 = 64.0;
/// Radial grid resolution for the weak-form stage.
const GRID_SPLIT: usize = 512;
/// Gauss order per radial panel. The strong-form side integrates the dual
/// slope t^(sigma - 1), a fractional power even after the panel
/// substitution; order 12 leaves ~1e-5 of it, order 20 brings the
/// strong/weak disagreement below 1e-9.
const GRID_RADIAL_ORDER: usize = 20;

pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir: Option<&Path>,
) -> Result<ExperimentReport> {
    config.validate()?;
    let derived = match config.mode {
        Mode::Main => select_params_main(config.p, config.lambda, config.mu, config.epsilon)?,
        Mode::L => select_params_l(config.p, config.mu, config.epsilon)?,
    };
    let mut checks: Vec<CheckItem> = Vec::new();
    stage_params(config, &derived, &mut checks);

    let bump = derived.bump()?;
    let dual = derived.dual_bump()?;
    stage_invariants(config, &derived, &bump, &dual, &mut checks);
    stage_norms(config, &bump, &dual, &mut checks);
    let sweeps = stage_sweeps(config, &derived, &bump, &dual, &mut checks);
    stage_weak_form(config, &derived, &mut checks);

    let (solution_table, field_table) = stage_tables(config, &derived, &mut checks);
    let gradient_table = match config.mode {
        Mode::L => match gradient_rows(config, &derived) {
            Ok(rows) => Some(rows),
            Err(e) => {
                checks.push(CheckItem::new("tables", "gradient integrability", false, e.to_string()));
                None
            }
        },
        Mode::Main => None,
    };
    let shift_line = match savare_compare(&derived) {
        Ok(line) => Some(line),
        Err(e) => {
            checks.push(CheckItem::new("tables", "shift comparison", false, e.to_string()));
            None
        }
    };

    let mut report = ExperimentReport {
        config: config.clone(),
        derived,
        checks,
        sweeps,
        solution_table,
        field_table,
        gradient_table,
        shift_line,
        overall_pass: false,
    };
    report.compute_overall();

    if let Some(dir) = out_dir {
        write_artifacts(&report, dir)?;
    }
    Ok(report)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn push_rel_check(
    checks: &mut Vec<CheckItem>,
    stage: &str,
    name: String,
    got: f64,
    want: f64,
    tol: f64,
) {
    let rel = rel_err(got, want);
    checks.push(CheckItem::new(
        stage,
        name,
        rel <= tol,
        format!("got {got:.12e}, want {want:.12e}, rel {rel:.3e} vs tol {tol:.1e}"),
    ));
}

// ---------------------------------------------------------------- stage 1

fn stage_params(config: &ExperimentConfig, derived: &MainTheoremConfig, checks: &mut Vec<CheckItem>) {
    for (name, ok) in derived.hypothesis_chain() {
        checks.push(CheckItem::new("params", name.clone(), ok, "verified numerically".to_string()));
    }
    if let Some(warning) = derived.epsilon_warning() {
        checks.push(CheckItem::new("params", "epsilon floor", true, warning));
    }
    // The two displayed exponent formulas are affinely related; verify the
    // identity and the agreement with the estimator's prediction.
    let g = derived.theta_gap();
    let mut max_affine: f64 = 0.0;
    let mut max_estimator: f64 = 0.0;
    for &rho in &config.rho_list {
        let inv_rho = if rho.is_infinite() { 0.0 } else { 1.0 / rho };
        let (s, st) = match (derived.s_rho(rho), derived.s_tilde_rho(rho)) {
            (Ok(s), Ok(st)) => (s, st),
            _ => continue,
        };
        let affine = (derived.p - 1.0) * (s - inv_rho * g) + inv_rho * g;
        max_affine = max_affine.max((st - affine).abs());
        if let Ok(pe) = predicted_exponent(derived.sigma, derived.theta, rho) {
            max_estimator = max_estimator.max((s - pe).abs());
        }
    }
    checks.push(CheckItem::new(
        "params",
        "prediction consistency",
        max_affine <= 1e-12 && max_estimator <= 1e-12,
        format!(
            "max |s~ - affine(s)| = {max_affine:.2e}, max |s - estimator| = {max_estimator:.2e}, tol 1e-12"
        ),
    ));
}

// ---------------------------------------------------------------- stage 2

fn stage_invariants(
    config: &ExperimentConfig,
    derived: &MainTheoremConfig,
    bump: &BumpParams,
    dual: &BumpParams,
    checks: &mut Vec<CheckItem>,
) {
    let tol = config.tolerances.pointwise;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let a_inf = bump.a_inf();

    // Power law: the dual train is the primal raised to p-1, pointwise.
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let x = rng.gen_range(3.9..a_inf + 0.5);
        let lhs = bump.eval_w(x).powf(derived.p - 1.0);
        let rhs = dual.eval_w(x);
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }
    checks.push(CheckItem::new(
        "invariants",
        "power law w^(p-1)",
        worst <= tol,
        format!("max rel dev {worst:.3e} over 300 points, tol {tol:.1e}"),
    ));

    // Two-sided smoothness bound of the train.
    if bump.sigma() < 1.0 {
        let ms = max_step(bump.theta());
        let mut worst: f64 = 0.0;
        for _ in 0..300 {
            let x = rng.gen_range(3.9..a_inf + 0.1);
            let h = 10f64.powf(rng.gen_range(-6.0..ms.log10()));
            let delta = (bump.eval_w(x + h) - bump.eval_w(x)).abs();
            worst = worst.max(delta / (2.0 * h.powf(bump.sigma())));
        }
        checks.push(CheckItem::new(
            "invariants",
            "increment bound 2 h^sigma",
            worst <= 1.0 + tol,
            format!("max |delta| / 2h^sigma = {worst:.12}, tol 1 + {tol:.1e}"),
        ));
    }

    // Supremum: never exceeded, attained on the first plateau.
    let sup = bump.sup_w();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let x = rng.gen_range(0.0..a_inf + 1.0);
        worst = worst.max(bump.eval_w(x));
    }
    let plateau_mid = bump.breakpoint(2).unwrap_or(4.0) + 1.5 * bump.block_width(2);
    let attained = rel_err(bump.eval_w(plateau_mid), sup) <= tol;
    checks.push(CheckItem::new(
        "invariants",
        "supremum bound and attainment",
        worst <= sup * (1.0 + tol) && attained,
        format!("max sample {worst:.12e} vs sup {sup:.12e}, attained at first plateau: {attained}"),
    ));

    // Window support and cancellation.
    let mut worst_support: f64 = 0.0;
    for _ in 0..100 {
        let r = rng.gen_range(0.76..1.5);
        worst_support = worst_support.max(bump.eval_u(r).abs());
    }
    for _ in 0..100 {
        let r = rng.gen_range(0.0..0.24);
        worst_support = worst_support.max(bump.eval_u(r).abs());
    }
    // The two evaluations round the train coordinate independently, so the
    // identity holds up to machine epsilon times the local slope; scale the
    // bound accordingly (the slope is unbounded near ramp edges).
    let mut worst_cancel: f64 = 0.0;
    let scale = 16.0 * bump.zeta_theta();
    for _ in 0..200 {
        let r = rng.gen_range(0.25..0.5);
        let slope = match bump.eval_w_prime(scale * r - 4.0 * bump.zeta_theta()) {
            Ok(s) => s.abs(),
            Err(_) => continue,
        };
        let dev = (bump.eval_v(r) + bump.eval_v(r + 0.25)).abs() / (1.0 + slope);
        worst_cancel = worst_cancel.max(dev);
    }
    checks.push(CheckItem::new(
        "invariants",
        "window support",
        worst_support <= tol,
        format!("max |u| off the support annulus {worst_support:.3e}, tol {tol:.1e}"),
    ));
    checks.push(CheckItem::new(
        "invariants",
        "lobe cancellation",
        worst_cancel <= tol,
        format!("max |v(r) + v(r + 1/4)| / (1 + |w'|) = {worst_cancel:.3e}, tol {tol:.1e}"),
    ));
}

// ---------------------------------------------------------------- stage 3

fn stage_norms(
    config: &ExperimentConfig,
    bump: &BumpParams,
    dual: &BumpParams,
    checks: &mut Vec<CheckItem>,
) {
    let tol = config.tolerances.norm_rel;
    // Always include rho = 1: it pins the total mass.
    let mut rhos: Vec<f64> = vec![1.0];
    rhos.extend(config.rho_list.iter().copied());
    rhos.dedup_by(|a, b| a == b);
    for (train_name, train) in [("solution", bump), ("field", dual)] {
        for &rho in &rhos {
            let label = format!("{train_name} L_{}", sig_short(rho));
            if rho.is_infinite() {
                match w_lp_norm(train, rho) {
                    Ok(closed) => {
                        let plateau =
                            train.breakpoint(2).unwrap_or(4.0) + 1.5 * train.block_width(2);
                        push_rel_check(
                            checks,
                            "norms",
                            format!("{label} sup attained"),
                            train.eval_w(plateau),
                            closed,
                            1e-14,
                        );
                    }
                    Err(e) => checks.push(CheckItem::new("norms", label, false, e.to_string())),
                }
                continue;
            }
            match (w_lp_norm(train, rho), reference_w_lp_norm(train, rho, 1e-12)) {
                (Ok(closed), Ok(reference)) => {
                    push_rel_check(checks, "norms", label, closed, reference, tol)
                }
                (a, b) => checks.push(CheckItem::new(
                    "norms",
                    label,
                    false,
                    format!("closed {a:?}, reference {b:?}"),
                )),
            }
            // Slope-norm agreement, including on the divergence verdict.
            let label = format!("{train_name} slope L_{}", sig_short(rho));
            match (
                w_prime_lp_norm(train, rho),
                reference_w_prime_lp_norm(train, rho, 1e-12),
            ) {
                (Ok(closed), Ok(reference)) => match (closed.finite(), reference.finite()) {
                    (Some(c), Some(r)) => push_rel_check(checks, "norms", label, c, r, tol),
                    (None, None) => checks.push(CheckItem::new(
                        "norms",
                        label,
                        true,
                        "divergent by both the boundary rule and the reference scaling".to_string(),
                    )),
                    (c, r) => checks.push(CheckItem::new(
                        "norms",
                        label,
                        false,
                        format!("divergence verdicts differ: closed {c:?}, reference {r:?}"),
                    )),
                },
                (a, b) => checks.push(CheckItem::new(
                    "norms",
                    label,
                    false,
                    format!("closed {a:?}, reference {b:?}"),
                )),
            }
        }
    }
}

// ---------------------------------------------------------------- stage 4

fn sweep_notes(bump: &BumpParams, js: &[u32]) -> (Vec<u32>, Vec<String>) {
    let mut usable = Vec::new();
    let mut notes = Vec::new();
    let ms = max_step(bump.theta());
    for &j in js {
        let h = 2f64.powi(-(j as i32));
        if h > ms {
            notes.push(format!("2^-{j} above the step ceiling {ms:.3e}; skipped"));
            continue;
        }
        let blocks = SWEEP_CUTOFF * h.powf(-1.0 / bump.theta());
        if blocks > (bump.n_cap() - 1) as f64 {
            notes.push(format!(
                "2^-{j} needs {blocks:.1e} blocks, beyond the table cap; skipped"
            ));
            continue;
        }
        usable.push(j);
    }
    (usable, notes)
}

fn sweep_one(bump: &BumpParams, rho: f64, js: &[u32]) -> Result<Vec<ModulusSample>> {
    let opts = DiffOpts {
        order: SWEEP_ORDER,
        cutoff_factor: SWEEP_CUTOFF,
        refine_check: None,
    };
    js.iter()
        .map(|&j| diff_norm(bump, 2f64.powi(-(j as i32)), rho, full_window(bump), &opts))
        .collect()
}

fn stage_sweeps(
    config: &ExperimentConfig,
    derived: &MainTheoremConfig,
    bump: &BumpParams,
    dual: &BumpParams,
    checks: &mut Vec<CheckItem>,
) -> Vec<SweepOutcome> {
    let window = config.tolerances.slope_window;
    let trains: [(&str, &BumpParams, f64); 2] =
        [("solution", bump, derived.sigma), ("field", dual, derived.sigma_dual)];
    let mut jobs: Vec<(usize, &str, &BumpParams, f64, f64)> = Vec::new();
    for (train_name, train, sigma) in trains {
        for &rho in &config.rho_list {
            jobs.push((jobs.len(), train_name, train, sigma, rho));
        }
    }

    // Fan the (train, rho) sweeps out to a small worker pool; sample
    // production is embarrassingly parallel, assembly stays ordered.
    let queue: Mutex<VecDeque<_>> = Mutex::new(jobs.iter().copied().collect());
    let results: Mutex<Vec<Option<(Vec<u32>, Vec<String>, Result<Vec<ModulusSample>>)>>> =
        Mutex::new((0..jobs.len()).map(|_| None).collect());
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let job = queue.lock().unwrap().pop_front();
                let Some((idx, _, train, _, rho)) = job else {
                    break;
                };
                let (usable, notes) = sweep_notes(train, &config.h_exponents);
                let samples = sweep_one(train, rho, &usable);
                results.lock().unwrap()[idx] = Some((usable, notes, samples));
            });
        }
    });

    let mut outcomes = Vec::with_capacity(jobs.len());
    for ((_, train_name, _, sigma, rho), slot) in
        jobs.iter().copied().zip(results.into_inner().unwrap())
    {
        let (usable, notes, samples) = slot.expect("worker filled every slot");
        for note in &notes {
            checks.push(CheckItem::new("sweeps", format!("{train_name} steps"), true, note.clone()));
        }
        let samples = match samples {
            Ok(s) => s,
            Err(e) => {
                checks.push(CheckItem::new(
                    "sweeps",
                    format!("{train_name} rho {}", sig_short(rho)),
                    false,
                    e.to_string(),
                ));
                continue;
            }
        };
        let fit = fit_exponent(&samples).ok();
        let mut outcome = match predicted_exponent(sigma, derived.theta, rho) {
            Ok(predicted) => {
                let (pass, validity) = match &fit {
                    Some(f) => (
                        Some((f.slope - predicted).abs() <= window),
                        "asserted".to_string(),
                    ),
                    None => (
                        Some(false),
                        format!("needed >= 6 usable steps, got {}", usable.len()),
                    ),
                };
                SweepOutcome {
                    train: train_name.to_string(),
                    rho,
                    samples,
                    fit,
                    predicted: Some(predicted),
                    validity,
                    pass,
                }
            }
            Err(e) => SweepOutcome {
                train: train_name.to_string(),
                rho,
                samples,
                fit,
                predicted: None,
                validity: format!("not asserted: {e}"),
                pass: None,
            },
        };
        // The supremum modulus additionally obeys the two-sided envelope.
        if rho.is_infinite() && sigma <= 1.0 {
            let mut ok = true;
            let mut detail = String::new();
            for s in &outcome.samples {
                let lo = s.h.powf(sigma);
                if !(s.value >= lo * (1.0 - 1e-9) && s.value <= 2.0 * lo * (1.0 + 1e-9)) {
                    ok = false;
                    detail = format!("h {:.3e}: value {:.6e} outside [{:.6e}, {:.6e}]", s.h, s.value, lo, 2.0 * lo);
                    break;
                }
            }
            if detail.is_empty() {
                detail = format!("{} samples inside [h^sigma, 2 h^sigma]", outcome.samples.len());
            }
            checks.push(CheckItem::new(
                "sweeps",
                format!("{train_name} sup envelope"),
                ok,
                detail,
            ));
            if !ok {
                outcome.pass = Some(false);
            }
        }
        outcomes.push(outcome);
    }
    outcomes
}

// ---------------------------------------------------------------- stage 5

fn stage_weak_form(
    config: &ExperimentConfig,
    derived: &MainTheoremConfig,
    checks: &mut Vec<CheckItem>,
) {
    let tol = &config.tolerances;
    let mut dims = config.d_list.clone();
    dims.sort_unstable();
    dims.dedup();
    for d in dims {
        let stage = "weak form";
        let field = match derived.field(d) {
            Ok(f) => f,
            Err(e) => {
                checks.push(CheckItem::new(stage, format!("d={d} field"), false, e.to_string()));
                continue;
            }
        };
        let probes = match TestFunction::family(d) {
            Ok(p) => p,
            Err(e) => {
                checks.push(CheckItem::new(stage, format!("d={d} probes"), false, e.to_string()));
                continue;
            }
        };
        let grid = match QuadratureGrid::build(&field, GRID_SPLIT, GRID_RADIAL_ORDER, 24) {
            Ok(g) => g,
            Err(e) => {
                checks.push(CheckItem::new(stage, format!("d={d} grid"), false, e.to_string()));
                continue;
            }
        };
        for psi in &probes {
            let name = format!("d={d} residual [{}]", psi.name());
            match (weak_pair(&field, psi, &grid), psi.w1_norm()) {
                (Ok(pair), Ok(w1)) => {
                    let bound = tol.weak_residual * (1.0 + w1);
                    let resid = (pair.lhs - pair.rhs).abs();
                    checks.push(CheckItem::new(
                        stage,
                        name,
                        resid <= bound,
                        format!("|lhs - rhs| = {resid:.3e} vs {bound:.3e} (pairing {:.6e})", pair.rhs),
                    ));
                }
                (a, b) => checks.push(CheckItem::new(stage, name, false, format!("{a:?} / {b:?}"))),
            }
        }
        if field.f_strong_valid() {
            for psi in probes.iter().take(2) {
                let name = format!("d={d} strong form [{}]", psi.name());
                match strong_check(&field, psi, &grid) {
                    Ok(chk) => {
                        let rel = (chk.weak - chk.strong).abs() / chk.weak.abs().max(1e-3);
                        checks.push(CheckItem::new(
                            stage,
                            name,
                            rel <= tol.strong_rel,
                            format!(
                                "weak {:.9e} vs strong {:.9e}, rel {rel:.3e} vs tol {:.1e}",
                                chk.weak, chk.strong, tol.strong_rel
                            ),
                        ));
                    }
                    Err(e) => checks.push(CheckItem::new(stage, name, false, e.to_string())),
                }
            }
        } else {
            checks.push(CheckItem::new(
                stage,
                format!("d={d} strong form"),
                true,
                "dual ramp slopes not integrable here; pointwise data has no strong form (expected)"
                    .to_string(),
            ));
        }
        // Resolution study: only meaningful when the unresolved tail's
        // amplitude is already negligible at this theta.
        let tail_amp = (GRID_SPLIT as f64).powf(-field.dual().theta() * field.dual().sigma());
        if tail_amp < 1e-3 {
            let name = format!("d={d} grid convergence");
            match grid
                .refined(&field)
                .and_then(|fine| Ok((f_weak(&field, &probes[0], &grid)?, f_weak(&field, &probes[0], &fine)?)))
            {
                Ok((coarse, fine)) => {
                    let rel = (coarse - fine).abs() / fine.abs().max(1e-3);
                    checks.push(CheckItem::new(
                        stage,
                        name,
                        rel <= 1e-5,
                        format!("coarse {coarse:.9e} vs refined {fine:.9e}, rel {rel:.3e} vs 1e-5"),
                    ));
                }
                Err(e) => checks.push(CheckItem::new(stage, name, false, e.to_string())),
            }
        } else {
            checks.push(CheckItem::new(
                stage,
                format!("d={d} grid convergence"),
                true,
                format!(
                    "unresolved tail amplitude {tail_amp:.2e} at theta {:.4}; \
                     resolution study skipped, shared-grid identities above still bind",
                    derived.theta
                ),
            ));
        }
    }
}

// ---------------------------------------------------------------- stage 6

fn table_rhos(threshold: f64, rho_list: &[f64]) -> Vec<f64> {
    let mut rhos = Vec::new();
    if threshold.is_finite() {
        rhos.push((2.0 * threshold).max(threshold + 1.0));
        rhos.push(threshold);
        rhos.push(((1.0 + threshold) * 0.5).max(1.0));
    } else {
        rhos.push(f64::INFINITY);
        rhos.push(4.0);
    }
    rhos.extend(rho_list.iter().copied().filter(|r| *r >= 1.0));
    rhos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    rhos.dedup();
    rhos
}

fn stage_tables(
    config: &ExperimentConfig,
    derived: &MainTheoremConfig,
    checks: &mut Vec<CheckItem>,
) -> (Vec<MembershipCase>, Vec<MembershipCase>) {
    let q = derived.p;
    let mut solution = Vec::new();
    for rho in table_rhos(derived.mu * (derived.p - 1.0), &config.rho_list) {
        match classify_u(rho, q, derived) {
            Ok(case) => solution.push(case),
            Err(e) => checks.push(CheckItem::new(
                "tables",
                format!("solution rho {}", sig_short(rho)),
                false,
                e.to_string(),
            )),
        }
    }
    let mut field = Vec::new();
    for rho in table_rhos(derived.mu, &config.rho_list) {
        match classify_a(rho, q, derived) {
            Ok(case) => field.push(case),
            Err(e) => checks.push(CheckItem::new(
                "tables",
                format!("field rho {}", sig_short(rho)),
                false,
                e.to_string(),
            )),
        }
    }
    let rows_u: Vec<u8> = solution.iter().map(|c| c.row).collect();
    let rows_a: Vec<u8> = field.iter().map(|c| c.row).collect();
    let all_rows = |rows: &[u8]| (1..=3).all(|r| rows.contains(&r));
    let complete = if derived.mu.is_finite() {
        all_rows(&rows_u) && all_rows(&rows_a)
    } else {
        // Above an infinite threshold there is no row 1.
        rows_u.contains(&2) && rows_u.contains(&3) && rows_a.contains(&2) && rows_a.contains(&3)
    };
    checks.push(CheckItem::new(
        "tables",
        "case coverage",
        complete,
        format!("solution rows {rows_u:?}, field rows {rows_a:?}"),
    ));
    (solution, field)
}

fn gradient_rows(
    config: &ExperimentConfig,
    derived: &MainTheoremConfig,
) -> Result<Vec<super::classify::W1Row>> {
    let mut rhos = vec![1.2, 1.5, 4.0];
    if derived.mu.is_finite() {
        rhos.push(derived.mu - 0.01);
        rhos.push(derived.mu + 0.01);
    }
    // Exclude rho at the membership boundary itself: deciding `rho = mu`
    // hinges on the last ulp of the derived exponents, so the table
    // demonstrates the "iff" from strictly inside each side instead.
    rhos.extend(config.rho_list.iter().copied().filter(|r| {
        *r > 1.0 && r.is_finite() && (r - derived.mu).abs() > 1e-6 * derived.mu.min(1e12)
    }));
    rhos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rhos.dedup();
    w1_table(derived, &rhos)
}

// ------------------------------------------------------------- artifacts

fn write_artifacts(report: &ExperimentReport, dir: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("report.json"), report.to_json()).map_err(io)?;
    std::fs::write(dir.join("report.txt"), report.render_text()).map_err(io)?;
    for sweep in &report.sweeps {
        let name = format!("sweep_{}_rho_{}.csv", sweep.train, sig_short(sweep.rho));
        std::fs::write(dir.join(name), samples_to_csv(&sweep.samples)).map_err(io)?;
    }
    Ok(())
}
