//! Radial lift of the window to `R^d`, the power-law flux map, and the
//! divergence-form data the lift solves, with baked quadrature grids for
//! pairing against test functions.
//!
//! For a train with exponent `sigma` and its dual with
//! `sigma_dual = (p - 1) sigma`:
//!
//! ```text
//! u_d(x)      = u(|x|)
//! grad u_d(x) = v(|x|) x/|x|
//! A(x)        = |grad u_d|^(p-2) grad u_d = v_dual(|x|) x/|x|
//! f_strong(r) = -v_dual'(r) - (d-1)/r * v_dual(r)
//! ```
//!
//! The last identity (the pointwise divergence of `A`) holds as locally
//! integrable data only when `d = 1` or the dual ramp slopes are integrable.
//!
//! # Grid design
//!
//! Radial nodes follow the window's block panels with power substitution at
//! ramp ends, and each node stores the window value and slope computed from
//! the piece descriptor *in distance coordinates*: substituted nodes can sit
//! closer to a ramp edge than one ulp of the radius, where re-deriving the
//! distance by subtraction would collapse to zero and blow up the slope.

use crate::bump::{BumpParams, Piece};
use crate::error::{Error, Result};
use crate::norms::w_prime_lp_norm;
use crate::probe::TestFunction;
use crate::quad::{gauss_legendre, integrate_panel, PanelSing};
use crate::window::WindowPiece;

/// Dimension, growth exponent, and the two trains of one radial field.
#[derive(Debug, Clone)]
pub struct RadialFieldSpec {
    d: usize,
    p: f64,
    bump: BumpParams,
    dual: BumpParams,
}

impl RadialFieldSpec {
    /// `p >= 2` and `d >= 1`; the dual train shares the primal's breakpoints.
    pub fn new(bump: &BumpParams, p: f64, d: usize) -> Result<Self> {
        if !p.is_finite() || p < 2.0 {
            return Err(Error::BadConfig(format!("growth exponent p = {p} below 2")));
        }
        if d == 0 {
            return Err(Error::UnsupportedDimension {
                d,
                supported: "1 and up",
            });
        }
        let dual = bump.with_sigma((p - 1.0) * bump.sigma())?;
        Ok(RadialFieldSpec {
            d,
            p,
            bump: bump.clone(),
            dual,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn bump(&self) -> &BumpParams {
        &self.bump
    }

    pub fn dual(&self) -> &BumpParams {
        &self.dual
    }

    fn radius(x: &[f64]) -> f64 {
        x.iter().map(|xi| xi * xi).sum::<f64>().sqrt()
    }

    /// The lift `u(|x|)`.
    pub fn eval_u_d(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.d);
        self.bump.eval_u(Self::radius(x))
    }

    /// `grad u_d = v(|x|) x / |x|`, zero at the origin (`u` is flat there).
    pub fn eval_grad_u_d(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.d);
        debug_assert_eq!(out.len(), self.d);
        let r = Self::radius(x);
        if r == 0.0 {
            out.fill(0.0);
            return;
        }
        let s = self.bump.eval_v(r) / r;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }

    /// Scalar flux profile `|v(r)|^(p-2) v(r)` computed from the *primal*
    /// train through the power map; coincides with the dual window.
    pub fn a_radial_profile(&self, r: f64) -> f64 {
        let g = self.bump.eval_v(r);
        if self.p == 2.0 || g == 0.0 {
            g
        } else {
            g.abs().powf(self.p - 2.0) * g
        }
    }

    /// The dual window `v_dual(r)`, evaluated on its own train.
    pub fn dual_profile(&self, r: f64) -> f64 {
        self.dual.eval_v(r)
    }

    /// The flux field `A(x) = |grad u_d|^(p-2) grad u_d`.
    pub fn eval_a(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.d);
        debug_assert_eq!(out.len(), self.d);
        let r = Self::radius(x);
        if r == 0.0 {
            out.fill(0.0);
            return;
        }
        let s = self.a_radial_profile(r) / r;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = s * xi;
        }
    }

    /// Whether the pointwise divergence is locally integrable data:
    /// `d = 1`, or the dual ramp slopes lie in `L_1`.
    pub fn f_strong_valid(&self) -> bool {
        self.d == 1
            || w_prime_lp_norm(&self.dual, 1.0)
                .map(|n| !n.is_divergent())
                .unwrap_or(false)
    }

    /// `f_strong(r) = -v_dual'(r) - (d-1)/r * v_dual(r)` for `r > 0`; errors
    /// at window kinks (only one-sided slopes there) and when the strong
    /// form is not valid data.
    pub fn eval_f_strong(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::BadConfig(format!(
                "strong-form data needs r > 0, got {r}"
            )));
        }
        if !self.f_strong_valid() {
            return Err(Error::HypothesisViolated(
                "pointwise divergence needs d = 1 or integrable dual ramp slopes".to_string(),
            ));
        }
        let z = self.dual.zeta_theta();
        let t = 16.0 * z * r;
        let dv = 16.0
            * z
            * (self.dual.eval_w_prime(t - 4.0 * z)? - self.dual.eval_w_prime(t - 8.0 * z)?);
        Ok(-dv - (self.d as f64 - 1.0) / r * self.dual.eval_v(r))
    }
}

/// Surface measure of the unit sphere, `2 pi^(d/2) / Gamma(d/2)`.
pub fn sphere_area(d: usize) -> f64 {
    assert!(d >= 1);
    // Gamma(d/2) for integer and half-integer arguments.
    let gamma_half = if d % 2 == 0 {
        let mut g = 1.0;
        for k in 1..(d / 2) {
            g *= k as f64;
        }
        g
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut a = 0.5;
        while a + 1.0 <= d as f64 / 2.0 {
            g *= a;
            a += 1.0;
        }
        g
    };
    2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half
}

/// Uniform refinement of the unresolved lobe-tail panels.
const TAIL_SUBPANELS: usize = 32;

/// One radial node: position, weight (including `r^(d-1)`), and the dual
/// window's value and slope from the piece descriptor.
#[derive(Debug, Clone, Copy)]
struct RadialNode {
    r: f64,
    w: f64,
    v: f64,
    dv: f64,
}

/// Baked product quadrature adapted to the window's block structure.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    d: usize,
    theta: f64,
    sigma_dual: f64,
    /// Nodes on exactly described panels (blocks below the split).
    resolved: Vec<RadialNode>,
    /// Nodes on the unresolved lobe tails; value-level integrands only.
    tail: Vec<RadialNode>,
    angular: Vec<([f64; 3], f64)>,
    n_split: usize,
    radial_order: usize,
    angular_order: usize,
}

impl QuadratureGrid {
    /// Build a grid for the field's window geometry. `n_split` controls how
    /// many blocks are resolved exactly per lobe, `radial_order` the Gauss
    /// order per panel, `angular_order` the sphere rule size.
    pub fn build(
        field: &RadialFieldSpec,
        n_split: usize,
        radial_order: usize,
        angular_order: usize,
    ) -> Result<Self> {
        let d = field.d();
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension {
                d,
                supported: "1..=3",
            });
        }
        if !(4..=88).contains(&radial_order) {
            return Err(Error::BadConfig(format!(
                "radial order {radial_order} outside 4..=88"
            )));
        }
        let dual = field.dual();
        let sd = dual.sigma();
        let scale = dual.window_scale();
        // Substitution strength covering slope-level integrands t^(sd - 1).
        let m = (8.0 / sd.min(field.bump().sigma())).ceil().clamp(2.0, 24.0);
        let (gl_nodes, gl_weights) = gauss_legendre(radial_order);
        let mut resolved = Vec::new();
        let mut tail = Vec::new();
        let rpow = |r: f64| match d {
            1 => 1.0,
            2 => r,
            _ => r * r,
        };
        for panel in dual.window_panels(n_split)? {
            let len = panel.hi - panel.lo;
            if !(len > 0.0) {
                continue;
            }
            match panel.kind {
                WindowPiece::Quiet => {} // v and f vanish; nothing to pair
                WindowPiece::Exact { piece: Piece::Zero, .. } => {}
                WindowPiece::Exact { sign, piece } => match piece {
                    Piece::Plateau { height } => {
                        let c = 0.5 * len;
                        let mid = 0.5 * (panel.lo + panel.hi);
                        for (x, w) in gl_nodes.iter().zip(gl_weights) {
                            let r = mid + c * x;
                            resolved.push(RadialNode {
                                r,
                                w: c * w * rpow(r),
                                v: sign * height,
                                dv: 0.0,
                            });
                        }
                    }
                    Piece::RampUp { sigma, .. } => {
                        // Vanishes at the panel's left end; nodes measured
                        // by their distance from it.
                        for (x, w) in gl_nodes.iter().zip(gl_weights) {
                            let z = 0.5 * (x + 1.0);
                            let zm1 = z.powf(m - 1.0);
                            let dist = len * (zm1 * z);
                            let r = panel.lo + dist;
                            let t = scale * dist;
                            resolved.push(RadialNode {
                                r,
                                w: 0.5 * len * w * m * zm1 * rpow(r),
                                v: sign * t.powf(sigma),
                                dv: sign * scale * sigma * t.powf(sigma - 1.0),
                            });
                        }
                    }
                    Piece::RampDown { sigma, .. } => {
                        // Vanishes at the panel's right end.
                        for (x, w) in gl_nodes.iter().zip(gl_weights) {
                            let z = 0.5 * (x + 1.0);
                            let zm1 = z.powf(m - 1.0);
                            let dist = len * (zm1 * z);
                            let r = panel.hi - dist;
                            let t = scale * dist;
                            resolved.push(RadialNode {
                                r,
                                w: 0.5 * len * w * m * zm1 * rpow(r),
                                v: sign * t.powf(sigma),
                                dv: -sign * scale * sigma * t.powf(sigma - 1.0),
                            });
                        }
                    }
                    Piece::Zero => {}
                },
                WindowPiece::Tail { .. } => {
                    // Uniform subpanels: the unresolved oscillation amplitude
                    // decays along the tail, so short panels near its start
                    // cap the aliasing error.
                    for k in 0..TAIL_SUBPANELS {
                        let a = panel.lo + len * k as f64 / TAIL_SUBPANELS as f64;
                        let b = panel.lo + len * (k + 1) as f64 / TAIL_SUBPANELS as f64;
                        let c = 0.5 * (b - a);
                        let mid = 0.5 * (a + b);
                        for (x, w) in gl_nodes.iter().zip(gl_weights) {
                            let r = mid + c * x;
                            tail.push(RadialNode {
                                r,
                                w: c * w * rpow(r),
                                v: dual.eval_v(r),
                                dv: 0.0,
                            });
                        }
                    }
                }
            }
        }
        let angular = build_angular(d, angular_order)?;
        Ok(QuadratureGrid {
            d,
            theta: dual.theta(),
            sigma_dual: sd,
            resolved,
            tail,
            angular,
            n_split,
            radial_order,
            angular_order,
        })
    }

    /// A finer grid for two-resolution agreement checks.
    pub fn refined(&self, field: &RadialFieldSpec) -> Result<Self> {
        Self::build(
            field,
            self.n_split * 2,
            self.radial_order + 8,
            self.angular_order * 2,
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// (resolved, tail) radial node counts.
    pub fn node_counts(&self) -> (usize, usize) {
        (self.resolved.len(), self.tail.len())
    }

    fn check_compatible(&self, field: &RadialFieldSpec, psi: &TestFunction) -> Result<()> {
        if psi.dim() != self.d || field.d() != self.d {
            return Err(Error::BadConfig(format!(
                "dimension mismatch: grid {}, field {}, probe {}",
                self.d,
                field.d(),
                psi.dim()
            )));
        }
        if field.dual().theta() != self.theta || field.dual().sigma() != self.sigma_dual {
            return Err(Error::BadConfig(
                "grid was built for a different train".to_string(),
            ));
        }
        Ok(())
    }
}

fn build_angular(d: usize, order: usize) -> Result<Vec<([f64; 3], f64)>> {
    use std::f64::consts::PI;
    Ok(match d {
        1 => vec![([1.0, 0.0, 0.0], 1.0), ([-1.0, 0.0, 0.0], 1.0)],
        2 => {
            let n = order.max(8);
            (0..n)
                .map(|j| {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                    ([phi.cos(), phi.sin(), 0.0], 2.0 * PI / n as f64)
                })
                .collect()
        }
        3 => {
            let n_phi = order.max(8);
            let n_cos = (order / 2).max(6);
            let (nodes, weights) = gauss_legendre(n_cos);
            let mut out = Vec::with_capacity(n_phi * n_cos);
            for (c, wc) in nodes.iter().zip(weights) {
                let s = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..n_phi {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / n_phi as f64;
                    out.push((
                        [s * phi.cos(), s * phi.sin(), *c],
                        wc * 2.0 * PI / n_phi as f64,
                    ));
                }
            }
            out
        }
        _ => {
            return Err(Error::UnsupportedDimension {
                d,
                supported: "1..=3",
            })
        }
    })
}

fn kahan_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let y = v - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// The weak divergence functional `f(psi) = integral <A, grad psi>`,
/// evaluated through the dual window stored on the grid.
pub fn f_weak(field: &RadialFieldSpec, psi: &TestFunction, grid: &QuadratureGrid) -> Result<f64> {
    grid.check_compatible(field, psi)?;
    let d = grid.d;
    let mut x = [0.0f64; 3];
    let mut g = [0.0f64; 3];
    let (mut sum, mut comp) = (0.0, 0.0);
    for (dir, wa) in &grid.angular {
        for node in grid.resolved.iter().chain(&grid.tail) {
            for i in 0..d {
                x[i] = node.r * dir[i];
            }
            psi.grad(&x[..d], &mut g[..d]);
            let dot: f64 = (0..d).map(|i| dir[i] * g[i]).sum();
            kahan_add(&mut sum, &mut comp, wa * node.w * node.v * dot);
        }
    }
    Ok(sum)
}

/// Both sides of the weak identity on one shared grid: `lhs` assembles the
/// flux from the primal gradient through the power map, `rhs` uses the dual
/// window; they agree up to the pointwise power identity and roundoff.
#[derive(Debug, Clone, Copy)]
pub struct WeakPair {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn weak_pair(
    field: &RadialFieldSpec,
    psi: &TestFunction,
    grid: &QuadratureGrid,
) -> Result<WeakPair> {
    grid.check_compatible(field, psi)?;
    let d = grid.d;
    let mut x = [0.0f64; 3];
    let mut g = [0.0f64; 3];
    // The independent flux profile, evaluated once per radial node.
    let profile: Vec<f64> = grid
        .resolved
        .iter()
        .chain(&grid.tail)
        .map(|n| field.a_radial_profile(n.r))
        .collect();
    let (mut lhs, mut lc) = (0.0, 0.0);
    let (mut rhs, mut rc) = (0.0, 0.0);
    for (dir, wa) in &grid.angular {
        for (node, a_prof) in grid.resolved.iter().chain(&grid.tail).zip(&profile) {
            for i in 0..d {
                x[i] = node.r * dir[i];
            }
            psi.grad(&x[..d], &mut g[..d]);
            let dot: f64 = (0..d).map(|i| dir[i] * g[i]).sum();
            kahan_add(&mut lhs, &mut lc, wa * node.w * a_prof * dot);
            kahan_add(&mut rhs, &mut rc, wa * node.w * node.v * dot);
        }
    }
    Ok(WeakPair { lhs, rhs })
}

/// Strong-versus-weak comparison on the resolved region.
///
/// Both pairings run over the same resolved panels, whose boundaries are
/// window zeros: integration by parts there has no boundary terms, so the
/// two values agree exactly in the limit. The unresolved lobe tails carry
/// the same functional on both sides and are omitted from both.
#[derive(Debug, Clone, Copy)]
pub struct StrongCheck {
    /// `integral <A, grad psi>` over the resolved region (dual window path).
    pub weak: f64,
    /// `integral f_strong psi` over the resolved region.
    pub strong: f64,
}

pub fn strong_check(
    field: &RadialFieldSpec,
    psi: &TestFunction,
    grid: &QuadratureGrid,
) -> Result<StrongCheck> {
    grid.check_compatible(field, psi)?;
    if !field.f_strong_valid() {
        return Err(Error::HypothesisViolated(
            "pointwise divergence needs d = 1 or integrable dual ramp slopes".to_string(),
        ));
    }
    let d = grid.d;
    let dm1 = d as f64 - 1.0;
    let mut x = [0.0f64; 3];
    let mut g = [0.0f64; 3];
    let (mut weak, mut wc) = (0.0, 0.0);
    let (mut strong, mut sc) = (0.0, 0.0);
    for (dir, wa) in &grid.angular {
        for node in &grid.resolved {
            for i in 0..d {
                x[i] = node.r * dir[i];
            }
            psi.grad(&x[..d], &mut g[..d]);
            let dot: f64 = (0..d).map(|i| dir[i] * g[i]).sum();
            kahan_add(&mut weak, &mut wc, wa * node.w * node.v * dot);
            let f = -node.dv - dm1 / node.r * node.v;
            kahan_add(&mut strong, &mut sc, wa * node.w * f * psi.eval(&x[..d]));
        }
    }
    Ok(StrongCheck { weak, strong })
}

/// Which radial profile a Lebesgue norm refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialProfile {
    /// The lift `u(|x|)`.
    U,
    /// `|grad u_d| = |v(|x|)|`.
    GradU,
    /// `|A| = |v(|x|)|^(p-1)`, via the primal power map.
    Flux,
}

/// `L_rho(R^d)` norm of a radial profile by block-adapted quadrature
/// (`rho = inf` returns the exact supremum).
pub fn radial_lp_norm(
    field: &RadialFieldSpec,
    profile: RadialProfile,
    rho: f64,
    n_split: usize,
    order: usize,
) -> Result<f64> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::BadRho { rho });
    }
    let d = field.d();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension {
            d,
            supported: "1..=3",
        });
    }
    let bump = field.bump();
    if rho.is_infinite() {
        return Ok(match profile {
            RadialProfile::U => bump.u_plateau(),
            RadialProfile::GradU => bump.sup_w(),
            RadialProfile::Flux => bump.sup_w().powf(field.p() - 1.0),
        });
    }
    let g = |r: f64| -> f64 {
        match profile {
            RadialProfile::U => bump.eval_u(r),
            RadialProfile::GradU => bump.eval_v(r).abs(),
            RadialProfile::Flux => field.a_radial_profile(r).abs(),
        }
    };
    // Worst-case endpoint exponent of |g|^rho at ramp edges.
    let alpha = match profile {
        RadialProfile::U => (bump.sigma() + 1.0) * rho.min(1.0),
        RadialProfile::GradU => bump.sigma() * rho.min(1.0),
        RadialProfile::Flux => field.dual().sigma() * rho.min(1.0),
    };
    let dm1 = (d - 1) as i32;
    let f = |r: f64| g(r).powf(rho) * r.powi(dm1);
    let (mut sum, mut comp) = (0.0, 0.0);
    for panel in bump.window_panels(n_split)? {
        if matches!(panel.kind, WindowPiece::Tail { .. }) {
            for k in 0..TAIL_SUBPANELS {
                let len = panel.hi - panel.lo;
                let a = panel.lo + len * k as f64 / TAIL_SUBPANELS as f64;
                let b = panel.lo + len * (k + 1) as f64 / TAIL_SUBPANELS as f64;
                kahan_add(&mut sum, &mut comp, crate::quad::gauss_panel(&f, a, b, order));
            }
            continue;
        }
        let sing = match panel.kind {
            WindowPiece::Quiet => {
                if profile != RadialProfile::U {
                    continue; // v vanishes identically there
                }
                PanelSing::NONE
            }
            WindowPiece::Exact { piece, .. } => match piece {
                Piece::Zero => {
                    if profile != RadialProfile::U {
                        continue;
                    }
                    PanelSing::NONE // u is constant across gaps
                }
                Piece::Plateau { .. } => PanelSing::NONE,
                Piece::RampUp { .. } => PanelSing::left(alpha),
                Piece::RampDown { .. } => PanelSing::right(alpha),
            },
            WindowPiece::Tail { .. } => unreachable!(),
        };
        kahan_add(
            &mut sum,
            &mut comp,
            integrate_panel(&f, panel.lo, panel.hi, sing, order),
        );
    }
    Ok((sphere_area(d) * sum.max(0.0)).powf(1.0 / rho))
}

/// Structure-blind radial norm of an arbitrary profile over uniform panels;
/// a cross-check for [`radial_lp_norm`].
pub fn radial_lp_norm_fn(
    g: impl Fn(f64) -> f64,
    d: usize,
    rho: f64,
    lo: f64,
    hi: f64,
    panels: usize,
    order: usize,
) -> f64 {
    let dm1 = (d - 1) as i32;
    let f = |r: f64| g(r).abs().powf(rho) * r.powi(dm1);
    let (mut sum, mut comp) = (0.0, 0.0);
    for i in 0..panels {
        let a = lo + (hi - lo) * i as f64 / panels as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / panels as f64;
        kahan_add(&mut sum, &mut comp, crate::quad::gauss_panel(&f, a, b, order));
    }
    (sphere_area(d) * sum.max(0.0)).powf(1.0 / rho)
}
