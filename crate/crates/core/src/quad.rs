//! Quadrature building blocks: Gauss–Legendre rules, panel integration with
//! algebraic-endpoint substitution, and a recursive Simpson fallback.
//!
//! The piecewise integrands in this crate are smooth inside each panel but
//! often behave like `(x - a)^alpha` (0 < alpha, possibly < 1, or down to
//! alpha > -1 for derivative integrands) at a panel endpoint. Substituting
//! `x = a + (b - a) z^m` turns such a factor into `z^{m(alpha+1)-1}` after
//! including the Jacobian, so choosing `m >= 6/(1+alpha)` restores enough
//! smoothness for a fixed Gauss rule to converge to near machine precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, cached per order.
pub fn gauss_legendre(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gauss cache poisoned");
    if let Some(rule) = guard.get(&order) {
        return rule;
    }
    let rule: &'static _ = Box::leak(Box::new(compute_gauss_legendre(order)));
    guard.insert(order, rule);
    rule
}

/// Newton iteration on the Legendre polynomial, symmetric-pair layout.
fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "order must be at least 2");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Standard cosine initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate `f` over `[lo, hi]` with a plain Gauss–Legendre rule.
pub fn gauss_panel<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let c = 0.5 * (hi - lo);
    let mid = 0.5 * (lo + hi);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + c * x);
    }
    c * sum
}

/// Leading power behaviour of an integrand at a panel endpoint.
///
/// `Some(alpha)` means the integrand looks like `c0 + c1 * t^alpha * (...)`
/// in the distance `t` to that endpoint with non-integer `alpha > -1`;
/// `None` means it is smooth there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelSing {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

impl PanelSing {
    pub const NONE: PanelSing = PanelSing {
        left: None,
        right: None,
    };

    pub fn left(alpha: f64) -> Self {
        PanelSing {
            left: Some(alpha),
            right: None,
        }
    }

    pub fn right(alpha: f64) -> Self {
        PanelSing {
            left: None,
            right: Some(alpha),
        }
    }
}

/// Substitution strength for a leading exponent `alpha`.
fn subst_power(alpha: f64) -> f64 {
    // m(alpha + 1) - 1 >= 7 keeps the pulled-back integrand ~C^7.
    let m = (8.0 / (1.0 + alpha)).ceil();
    m.clamp(2.0, 64.0)
}

fn gauss_panel_subst_left<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    alpha: f64,
    order: usize,
) -> f64 {
    let m = subst_power(alpha);
    let len = hi - lo;
    let (nodes, weights) = gauss_legendre(order);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let z = 0.5 * (x + 1.0); // map to (0, 1)
        let zm1 = z.powf(m - 1.0);
        sum += w * f(lo + len * (zm1 * z)) * m * zm1;
    }
    0.5 * len * sum
}

/// Integrate `f` over `[lo, hi]`, removing declared endpoint power behaviour
/// by substitution. Panels with both endpoints singular are quarter-split so
/// each substitution owns the end it straightens.
///
/// `f` is evaluated at absolute coordinates, so for a *negative* exponent at
/// an endpoint `e != 0` the attainable accuracy is capped near
/// `(ulp(e)/len)^(1+alpha)`: offsets below one ulp of `e` are unrepresentable
/// and their (infinite-density) mass is lost. Nonnegative exponents -- the
/// only kind the library's own panels declare -- are unaffected.
pub fn integrate_panel<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    sing: PanelSing,
    order: usize,
) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    match (sing.left, sing.right) {
        (None, None) => gauss_panel(f, lo, hi, order),
        (Some(a), None) => gauss_panel_subst_left(f, lo, hi, a, order),
        (None, Some(a)) => {
            // Mirror: integrate g(t) = f(lo + hi - t) with a left singularity.
            let g = |t: f64| f(lo + hi - t);
            gauss_panel_subst_left(&g, lo, hi, a, order)
        }
        (Some(a), Some(b)) => {
            // Quarter split: the substitutions squeeze everything away from
            // their endpoint toward the panel's far edge, so give each one
            // only a quarter and integrate the smooth middle directly.
            let q1 = lo + 0.25 * (hi - lo);
            let q3 = hi - 0.25 * (hi - lo);
            integrate_panel(f, lo, q1, PanelSing::left(a), order)
                + gauss_panel(f, q1, q3, order)
                + integrate_panel(f, q3, hi, PanelSing::right(b), order)
        }
    }
}

/// Append the nodes and weights that [`integrate_panel`] would use for this
/// panel, so callers can bake reusable quadrature tables. Summing
/// `weight * f(node)` over the entries reproduces `integrate_panel` exactly.
pub fn panel_nodes(lo: f64, hi: f64, sing: PanelSing, order: usize, out: &mut Vec<(f64, f64)>) {
    if !(hi > lo) {
        return;
    }
    let (nodes, weights) = gauss_legendre(order);
    let len = hi - lo;
    match (sing.left, sing.right) {
        (None, None) => {
            let c = 0.5 * len;
            let mid = 0.5 * (lo + hi);
            for (x, w) in nodes.iter().zip(weights) {
                out.push((mid + c * x, c * w));
            }
        }
        (Some(a), None) => {
            let m = subst_power(a);
            for (x, w) in nodes.iter().zip(weights) {
                let z = 0.5 * (x + 1.0);
                let zm1 = z.powf(m - 1.0);
                out.push((lo + len * (zm1 * z), 0.5 * len * w * m * zm1));
            }
        }
        (None, Some(a)) => {
            let m = subst_power(a);
            for (x, w) in nodes.iter().zip(weights) {
                let z = 0.5 * (x + 1.0);
                let zm1 = z.powf(m - 1.0);
                out.push((hi - len * (zm1 * z), 0.5 * len * w * m * zm1));
            }
        }
        (Some(a), Some(b)) => {
            let q1 = lo + 0.25 * (hi - lo);
            let q3 = hi - 0.25 * (hi - lo);
            panel_nodes(lo, q1, PanelSing::left(a), order, out);
            panel_nodes(q1, q3, PanelSing::NONE, order, out);
            panel_nodes(q3, hi, PanelSing::right(b), order, out);
        }
    }
}

/// Recursive adaptive Simpson with Richardson update.
///
/// General-purpose fallback for integrands without declared structure; the
/// error estimate is the usual `(fine - coarse)/15` heuristic with a depth
/// cap, which handles integrable endpoint singularities by localizing the
/// bisection around them.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_depth: u32,
) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, len: f64) -> f64 {
        len / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        lo: f64,
        hi: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let mid = 0.5 * (lo + hi);
        let lm = 0.5 * (lo + mid);
        let rm = 0.5 * (mid + hi);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, mid - lo);
        let right = simpson(fm, frm, fb, hi - mid);
        let err = left + right - whole;
        if depth == 0 || err.abs() <= 15.0 * tol {
            return left + right + err / 15.0;
        }
        recurse(f, lo, mid, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, mid, hi, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if !(hi > lo) {
        return 0.0;
    }
    let fa = f(lo);
    let fb = f(hi);
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let whole = simpson(fa, fm, fb, hi - lo);
    recurse(f, lo, hi, fa, fm, fb, whole, tol, max_depth)
}
