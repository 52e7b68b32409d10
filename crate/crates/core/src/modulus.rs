//! Finite-difference smoothness measurements of the train: the quantity
//! `h -> || w(. + h) - w(.) ||_{L_rho(window)}` computed by piecewise-exact
//! quadrature, plus the closed forms available on gap windows.
//!
//! # How the quadrature stays exact
//!
//! On any interval containing no transition of `w(.)` and no shifted
//! transition of `w(. + h)`, the integrand is `|R(x+h) - L(x)|^rho` for two
//! fixed analytic pieces `L`, `R`. Panels are therefore taken between
//! consecutive points of `{block transitions} union {block transitions - h}`.
//!
//! Within a panel the difference `D(x) = R(x+h) - L(x)` is monotone: ramps
//! share the exponent `sigma`, so `D'` compares two slopes `sigma t^(sigma-1)`
//! at arguments whose difference is constant across the panel, giving `D'` a
//! uniform sign for every piece combination. Hence `D` has at most one
//! interior root (isolated by bisection, then split), and `|D|^rho` is
//! singular only at panel ends with a known worst-case exponent:
//! `sigma * min(rho, 1)` where a ramp vanishes (covering both the
//! `t^(sigma rho)` and offset `t^sigma` cases, since a stronger substitution
//! is always safe) and `rho` at an interior root. Those exponents feed the
//! power-substituted Gauss panels of [`crate::quad`], so a fixed low order
//! integrates to near machine precision.
//!
//! # Tail cutoff
//!
//! Blocks beyond `N_cut = cutoff_factor * h^(-1/theta)` are omitted. The
//! retained integral scales like `h^(sigma rho + 1 - 1/theta)` and the
//! omitted tail like `cutoff_factor^(1 - theta(1 + sigma rho))` times that
//! same power of `h`: the omitted *fraction* depends on the cutoff factor
//! alone, not on `h`, so fitted exponents are unaffected while each run
//! touches only finitely many blocks.

use serde::Serialize;

use crate::bump::{BumpParams, Phase, Piece};
use crate::error::{Error, Result};
use crate::quad::{gauss_panel, integrate_panel, PanelSing};
use crate::render::sig17;

/// How a sample's value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Evaluated from an exact closed form.
    ClosedForm,
    /// Piecewise-exact panel quadrature of the difference integrand.
    GridQuadrature,
    /// Supremum over the finite candidate set containing all extrema.
    SupSampling,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::GridQuadrature => "grid_quadrature",
            Method::SupSampling => "sup_sampling",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s.trim() {
            "closed_form" => Some(Method::ClosedForm),
            "grid_quadrature" => Some(Method::GridQuadrature),
            "sup_sampling" => Some(Method::SupSampling),
            _ => None,
        }
    }
}

/// One measured point of the smoothness modulus.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModulusSample {
    pub h: f64,
    #[serde(with = "crate::render::ext_real")]
    pub rho: f64,
    pub value: f64,
    pub method: Method,
}

/// Integration window in the train coordinate.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

/// The whole line; the difference vanishes outside `[4 - h, a_inf]` anyway.
pub fn full_window(_bump: &BumpParams) -> Window {
    Window {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    }
}

/// The gap of block `n`, `[a_n + 3 n^-theta, a_{n+1}]`, on which the
/// difference reduces to the bare entry ramp of block `n + 1`.
pub fn gap_window(bump: &BumpParams, n: usize) -> Result<Window> {
    let a = bump.breakpoint(n)?;
    let w = bump.block_width(n);
    Ok(Window {
        lo: a + 3.0 * w,
        hi: bump.breakpoint(n + 1)?,
    })
}

/// Largest step the modulus machinery accepts: `6^-theta`, the piece scale
/// of the widest block.
pub fn max_step(theta: f64) -> f64 {
    6.0f64.powf(-theta)
}

/// Number of blocks whose pieces are wide relative to the step,
/// `ceil(h^(-1/theta) / 3)`; these fully resolved ramps pin the modulus to
/// its predicted power of `h`.
pub fn block_count(theta: f64, h: f64) -> usize {
    (h.powf(-1.0 / theta) / 3.0).ceil() as usize
}

/// Exact `|| w(.+h) - w(.) ||_{L_rho(gap_n)}` for `h <= (n+1)^-theta`: over
/// the gap the difference is the entry ramp of block `n + 1`, so the rho-th
/// power integral is `h^(sigma rho + 1) / (sigma rho + 1)`, independent of
/// `n`. For `rho = inf` the supremum is `h^sigma`.
pub fn exact_gap_diff(bump: &BumpParams, n: usize, h: f64, rho: f64) -> Result<f64> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::BadRho { rho });
    }
    let w_next = bump.block_width(n + 1);
    if !(h > 0.0) || h > w_next {
        return Err(Error::BadStep { h, max: w_next });
    }
    bump.breakpoint(n + 1)?; // ensure the gap's right neighbor exists
    let sigma = bump.sigma();
    if rho.is_infinite() {
        return Ok(h.powf(sigma));
    }
    let srho = sigma * rho + 1.0;
    Ok((h.powf(srho) / srho).powf(1.0 / rho))
}

/// Options for [`diff_norm`].
#[derive(Debug, Clone, Copy)]
pub struct DiffOpts {
    /// Gauss order per panel.
    pub order: usize,
    /// Tail cutoff: blocks beyond `cutoff_factor * h^(-1/theta)` are omitted,
    /// from the train and from its shifted copy alike. (Keeping the shifted
    /// copy's deep blocks would force the scan through every block whenever
    /// `h` exceeds the tail width left past the cutoff.)
    pub cutoff_factor: f64,
    /// When set, re-integrate at `order + 8` and require the two sums to
    /// agree to this relative tolerance, else fail with `GridTooCoarse`.
    pub refine_check: Option<f64>,
}

impl Default for DiffOpts {
    fn default() -> Self {
        DiffOpts {
            order: 16,
            cutoff_factor: 64.0,
            refine_check: Some(1e-8),
        }
    }
}

// Boundary-point flags: a piece vanishes with a power at this point, seen
// from the panel on the given side.
const VANISH_RIGHTWARD: u8 = 1; // panel starting here sees (x - pt)^sigma
const VANISH_LEFTWARD: u8 = 2; // panel ending here sees (pt - x)^sigma

fn merge_tol(x: f64) -> f64 {
    1e-12 * x.abs().max(1.0)
}

/// Ascending stream of block transition points shifted left by `shift`,
/// cut off at `before` and at source block `n_stop`. Points at or below the
/// scan start are yielded too (a handful at most) and absorbed by the merge
/// loop.
///
/// The block cap is what keeps a scan affordable when `before + shift`
/// reaches past the support's accumulation point: without it the stream
/// would walk every tabulated block, because the shifted transitions never
/// overtake `before`.
struct BoundaryStream<'a> {
    bump: &'a BumpParams,
    shift: f64,
    before: f64,
    n_stop: usize,
    n: usize,
    k: usize,
    a_n: f64,
    w_n: f64,
    head: Option<(f64, u8)>,
    done: bool,
}

impl<'a> BoundaryStream<'a> {
    fn new(
        bump: &'a BumpParams,
        shift: f64,
        start: f64,
        before: f64,
        n_stop: usize,
    ) -> Result<Self> {
        let probe = start + shift;
        let (n, done) = if probe < 4.0 {
            (2, false)
        } else {
            match bump.locate(probe) {
                Ok(loc) if (2..bump.n_cap()).contains(&loc.block) && loc.block <= n_stop => {
                    (loc.block, false)
                }
                Ok(loc) if loc.phase == Phase::OutsideLeft => (2, false),
                // Beyond the support, the table, or the block cap: no
                // admissible transition can land past `start` anymore.
                _ => (2, true),
            }
        };
        let mut s = BoundaryStream {
            bump,
            shift,
            before,
            n_stop,
            n,
            k: 0,
            a_n: 0.0,
            w_n: 0.0,
            head: None,
            done,
        };
        if !s.done {
            s.reload()?;
            s.pump()?;
        }
        Ok(s)
    }

    fn reload(&mut self) -> Result<()> {
        self.a_n = self.bump.breakpoint(self.n)?;
        self.w_n = self.bump.block_width(self.n);
        self.k = 0;
        Ok(())
    }

    fn pump(&mut self) -> Result<()> {
        self.head = None;
        if self.done {
            return Ok(());
        }
        if self.k == 4 {
            if self.n + 1 > self.n_stop || self.n + 1 >= self.bump.n_cap() {
                self.done = true;
                return Ok(());
            }
            self.n += 1;
            self.reload()?;
        }
        let pt = self.a_n + self.k as f64 * self.w_n - self.shift;
        let flags = match self.k {
            0 => VANISH_RIGHTWARD,
            3 => VANISH_LEFTWARD,
            _ => 0,
        };
        self.k += 1;
        if pt >= self.before {
            self.done = true;
            return Ok(());
        }
        self.head = Some((pt, flags));
        Ok(())
    }
}

/// Pop the smallest head among the two streams, merging (and OR-ing flags
/// of) any heads within merge tolerance of it.
fn merge_next(a: &mut BoundaryStream, b: &mut BoundaryStream) -> Result<Option<(f64, u8)>> {
    let pick_a = match (a.head, b.head) {
        (None, None) => return Ok(None),
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (Some((xa, _)), Some((xb, _))) => xa <= xb,
    };
    let (x, mut f) = if pick_a {
        let h = a.head.expect("picked head");
        a.pump()?;
        h
    } else {
        let h = b.head.expect("picked head");
        b.pump()?;
        h
    };
    let tol = merge_tol(x);
    while let Some((y, g)) = a.head {
        if (y - x).abs() > tol {
            break;
        }
        f |= g;
        a.pump()?;
    }
    while let Some((y, g)) = b.head {
        if (y - x).abs() > tol {
            break;
        }
        f |= g;
        b.pump()?;
    }
    Ok(Some((x, f)))
}

/// Drive `on_panel(lo, hi, left_flags, right_flags)` over the maximal
/// subintervals of `[lo, hi]` free of (shifted) transitions, ignoring
/// blocks past `n_stop` in both the train and its shifted copy.
fn scan_panels(
    bump: &BumpParams,
    h: f64,
    lo: f64,
    hi: f64,
    n_stop: usize,
    mut on_panel: impl FnMut(f64, f64, u8, u8) -> Result<()>,
) -> Result<()> {
    let mut a = BoundaryStream::new(bump, 0.0, lo, hi + merge_tol(hi), n_stop)?;
    let mut b = BoundaryStream::new(bump, h, lo, hi + merge_tol(hi), n_stop)?;
    let mut cur = lo;
    let mut lf = 0u8;
    loop {
        match merge_next(&mut a, &mut b)? {
            Some((x, f)) if x <= lo + merge_tol(lo) => {
                if x >= lo - merge_tol(lo) {
                    lf |= f; // transition sitting exactly at the window start
                }
            }
            Some((x, f)) if x >= hi - merge_tol(hi) => {
                on_panel(cur, hi, lf, f)?;
                return Ok(());
            }
            Some((x, f)) => {
                if x > cur + merge_tol(x) {
                    on_panel(cur, x, lf, f)?;
                    cur = x;
                    lf = f;
                } else {
                    lf |= f;
                }
            }
            None => {
                on_panel(cur, hi, lf, 0)?;
                return Ok(());
            }
        }
    }
}

/// Analytic piece of the train covering `x`, in absolute coordinates;
/// untabulated-tail points and blocks past `n_stop` count as zero, matching
/// the truncation the panel scan applies.
fn piece_at(bump: &BumpParams, x: f64, n_stop: usize) -> Piece {
    match bump.locate(x) {
        Err(_) => Piece::Zero,
        Ok(loc) if loc.block > n_stop => Piece::Zero,
        Ok(loc) => match loc.phase {
            Phase::RampUp => Piece::RampUp {
                start: x - loc.offset,
                sigma: bump.sigma(),
            },
            Phase::Plateau => Piece::Plateau {
                height: loc.width.powf(bump.sigma()),
            },
            Phase::RampDown => Piece::RampDown {
                end: x - loc.offset + 3.0 * loc.width,
                sigma: bump.sigma(),
            },
            _ => Piece::Zero,
        },
    }
}

fn pow_rho(a: f64, rho: f64) -> f64 {
    if rho == 1.0 {
        a
    } else if rho == 2.0 {
        a * a
    } else {
        a.powf(rho)
    }
}

fn kahan_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let y = v - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// One full quadrature sweep of `integral |w(x+h) - w(x)|^rho dx` at a
/// given Gauss order; `diff_norm` runs this once or twice.
fn quad_pass(
    bump: &BumpParams,
    h: f64,
    rho: f64,
    lo: f64,
    hi: f64,
    n_stop: usize,
    order: usize,
) -> Result<f64> {
    let alpha_vanish = bump.sigma() * rho.min(1.0);
    let mut sum = 0.0;
    let mut comp = 0.0;
    scan_panels(bump, h, lo, hi, n_stop, |p_lo, p_hi, lf, rf| {
        let xm = 0.5 * (p_lo + p_hi);
        let left = piece_at(bump, xm, n_stop);
        let right = piece_at(bump, xm + h, n_stop);
        if left.is_zero() && right.is_zero() {
            return Ok(());
        }
        let diff = move |x: f64| right.eval(x + h) - left.eval(x);
        let f = move |x: f64| pow_rho(diff(x).abs(), rho);
        let alpha_l = (lf & VANISH_RIGHTWARD != 0).then_some(alpha_vanish);
        let alpha_r = (rf & VANISH_LEFTWARD != 0).then_some(alpha_vanish);
        let len = p_hi - p_lo;
        let d0 = diff(p_lo + 1e-9 * len);
        let d1 = diff(p_hi - 1e-9 * len);
        if d0 != 0.0 && d1 != 0.0 && (d0 > 0.0) != (d1 > 0.0) {
            // Single interior sign change (monotonicity); |D| vanishes
            // linearly there, so the integrand behaves like t^rho.
            let root = bisect(&diff, p_lo + 1e-9 * len, p_hi - 1e-9 * len);
            let sing_l = PanelSing {
                left: alpha_l,
                right: Some(rho),
            };
            let sing_r = PanelSing {
                left: Some(rho),
                right: alpha_r,
            };
            kahan_add(
                &mut sum,
                &mut comp,
                integrate_panel(&f, p_lo, root, sing_l, order),
            );
            kahan_add(
                &mut sum,
                &mut comp,
                integrate_panel(&f, root, p_hi, sing_r, order),
            );
        } else {
            let sing = PanelSing {
                left: alpha_l,
                right: alpha_r,
            };
            kahan_add(
                &mut sum,
                &mut comp,
                integrate_panel(&f, p_lo, p_hi, sing, order),
            );
        }
        Ok(())
    })?;
    Ok(sum)
}

/// `|| w(. + h) - w(.) ||_{L_rho(window)}` by piecewise-exact quadrature
/// (`rho < inf`), or the exact supremum over panel boundaries
/// (`rho = inf`; panel monotonicity puts every extremum there).
pub fn diff_norm(
    bump: &BumpParams,
    h: f64,
    rho: f64,
    window: Window,
    opts: &DiffOpts,
) -> Result<ModulusSample> {
    let tmax = max_step(bump.theta());
    if !(h > 0.0) || !h.is_finite() || h > tmax {
        return Err(Error::BadStep { h, max: tmax });
    }
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::BadRho { rho });
    }
    if !(4..=88).contains(&opts.order) {
        return Err(Error::BadConfig(format!(
            "gauss order {} outside 4..=88",
            opts.order
        )));
    }
    if !(opts.cutoff_factor >= 4.0) {
        return Err(Error::BadConfig(format!(
            "cutoff factor {} below 4",
            opts.cutoff_factor
        )));
    }
    let n_cut = ((opts.cutoff_factor * h.powf(-1.0 / bump.theta())).ceil() as usize)
        .clamp(8, bump.n_cap() - 1);
    let x_cut = bump.breakpoint(n_cut + 1)?;
    let lo = window.lo.max(4.0 - h);
    let hi = window.hi.min(x_cut);
    let method = if rho.is_infinite() {
        Method::SupSampling
    } else {
        Method::GridQuadrature
    };
    if !(hi - lo > 4.0 * merge_tol(hi.abs().max(lo.abs()))) {
        return Ok(ModulusSample {
            h,
            rho,
            value: 0.0,
            method,
        });
    }
    if rho.is_infinite() {
        let at = |x: f64| (bump.eval_w(x + h) - bump.eval_w(x)).abs();
        let mut best = at(lo).max(at(hi));
        scan_panels(bump, h, lo, hi, n_cut, |p_lo, _, _, _| {
            best = best.max(at(p_lo));
            Ok(())
        })?;
        return Ok(ModulusSample {
            h,
            rho,
            value: best,
            method,
        });
    }
    let base = quad_pass(bump, h, rho, lo, hi, n_cut, opts.order)?;
    if let Some(tol) = opts.refine_check {
        let fine = quad_pass(bump, h, rho, lo, hi, n_cut, opts.order + 8)?;
        let delta = (base - fine).abs() / fine.abs().max(f64::MIN_POSITIVE);
        if delta > tol {
            return Err(Error::GridTooCoarse { delta, tol });
        }
    }
    Ok(ModulusSample {
        h,
        rho,
        value: base.max(0.0).powf(1.0 / rho),
        method,
    })
}

/// Brute-force difference norm of an arbitrary function over uniform Gauss
/// panels; a structure-blind cross-check for [`diff_norm`].
pub fn diff_norm_fn(
    f: impl Fn(f64) -> f64,
    h: f64,
    rho: f64,
    lo: f64,
    hi: f64,
    panels: usize,
    order: usize,
) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for i in 0..panels {
        let a = lo + (hi - lo) * i as f64 / panels as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / panels as f64;
        let v = gauss_panel(|x| pow_rho((f(x + h) - f(x)).abs(), rho), a, b, order);
        kahan_add(&mut sum, &mut comp, v);
    }
    sum.max(0.0).powf(1.0 / rho)
}

/// Render samples as `h,rho,value,method` CSV with 17-significant-digit
/// fields (and `inf` for the sup norm), so re-parsing reproduces the exact
/// doubles.
pub fn samples_to_csv(samples: &[ModulusSample]) -> String {
    let mut out = String::from("h,rho,value,method\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sig17(s.h),
            sig17(s.rho),
            sig17(s.value),
            s.method.as_str()
        ));
    }
    out
}

/// Parse CSV produced by [`samples_to_csv`].
pub fn samples_from_csv(text: &str) -> Result<Vec<ModulusSample>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let bad = || Error::BadConfig(format!("bad csv row {}: {line:?}", i + 1));
        if cols.len() != 4 {
            return Err(bad());
        }
        let h = crate::render::parse_ext(cols[0]).ok_or_else(bad)?;
        let rho = crate::render::parse_ext(cols[1]).ok_or_else(bad)?;
        let value = crate::render::parse_ext(cols[2]).ok_or_else(bad)?;
        let method = Method::parse(cols[3]).ok_or_else(bad)?;
        rows.push(ModulusSample {
            h,
            rho,
            value,
            method,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn gap_window_reproduces_closed_form() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        let opts = DiffOpts::default();
        for n in [2, 3, 5] {
            let win = gap_window(&b, n).unwrap();
            for rho in [1.0, 2.0, 3.5] {
                for j in [9, 10, 12] {
                    let h = (2.0f64).powi(-j);
                    let got = diff_norm(&b, h, rho, win, &opts).unwrap();
                    let want = exact_gap_diff(&b, n, h, rho).unwrap();
                    assert!(
                        rel(got.value, want) < 1e-12,
                        "n={n} rho={rho} h=2^-{j}: {} vs {want}",
                        got.value
                    );
                }
            }
            // Supremum over the gap window is exactly h^sigma.
            let h = (2.0f64).powi(-10);
            let got = diff_norm(&b, h, f64::INFINITY, win, &opts).unwrap();
            assert!(rel(got.value, h.powf(0.5)) < 1e-12);
            assert_eq!(got.method, Method::SupSampling);
        }
    }

    #[test]
    fn agrees_with_structure_blind_quadrature() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        let h = (2.0f64).powi(-7);
        let win = Window { lo: 3.9, hi: 5.0 };
        let got = diff_norm(&b, h, 2.0, win, &DiffOpts::default()).unwrap();
        let brute = diff_norm_fn(|x| b.eval_w(x), h, 2.0, 4.0 - h, 5.0, 40_000, 4);
        assert!(
            rel(got.value, brute) < 3e-5,
            "panelized {} vs brute {brute}",
            got.value
        );
    }

    #[test]
    fn full_window_sup_sits_in_predicted_envelope() {
        let b = BumpParams::new(0.5, 1.5).unwrap();
        let win = full_window(&b);
        for j in [6, 8, 10] {
            let h = (2.0f64).powi(-j);
            let got = diff_norm(&b, h, f64::INFINITY, win, &DiffOpts::default()).unwrap();
            let lo = h.powf(0.5);
            assert!(
                got.value >= lo - 1e-14 && got.value <= 2.0 * lo + 1e-14,
                "h=2^-{j}: sup {} outside [{lo}, {}]",
                got.value,
                2.0 * lo
            );
        }
    }

    #[test]
    fn cutoff_factor_is_slope_neutral() {
        let b = BumpParams::new(0.5, 1.5).unwrap();
        let win = full_window(&b);
        let slope = |factor: f64| {
            let opts = DiffOpts {
                cutoff_factor: factor,
                refine_check: None,
                ..DiffOpts::default()
            };
            let h1 = (2.0f64).powi(-8);
            let h2 = (2.0f64).powi(-10);
            let v1 = diff_norm(&b, h1, 1.0, win, &opts).unwrap().value;
            let v2 = diff_norm(&b, h2, 1.0, win, &opts).unwrap().value;
            (v1 / v2).ln() / (h1 / h2).ln()
        };
        let s32 = slope(32.0);
        let s256 = slope(256.0);
        assert!(
            (s32 - s256).abs() < 5e-3,
            "cutoff changed slope: {s32} vs {s256}"
        );
    }

    #[test]
    fn refine_check_flags_impossible_tolerances() {
        let b = BumpParams::new(0.25, 1.5).unwrap();
        let opts = DiffOpts {
            refine_check: Some(1e-18),
            ..DiffOpts::default()
        };
        let win = Window { lo: 3.9, hi: 6.0 };
        match diff_norm(&b, (2.0f64).powi(-8), 1.0, win, &opts) {
            Err(Error::GridTooCoarse { delta, tol }) => {
                assert!(delta > tol);
            }
            other => panic!("expected GridTooCoarse, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_steps_and_exponents() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        let win = full_window(&b);
        let opts = DiffOpts::default();
        assert!(matches!(
            diff_norm(&b, 0.2, 1.0, win, &opts),
            Err(Error::BadStep { .. })
        ));
        assert!(matches!(
            diff_norm(&b, -0.01, 1.0, win, &opts),
            Err(Error::BadStep { .. })
        ));
        assert!(matches!(
            diff_norm(&b, 1e-3, 0.0, win, &opts),
            Err(Error::BadRho { rho: _ })
        ));
        // Gap closed form needs h within the next block's piece width.
        assert!(matches!(
            exact_gap_diff(&b, 3, 0.2, 1.0),
            Err(Error::BadStep { .. })
        ));
    }

    #[test]
    fn step_and_block_count_helpers() {
        assert_eq!(max_step(2.0), 1.0 / 36.0);
        // Counted blocks really are wide relative to the step.
        for (theta, j) in [(2.0, 8), (1.5, 9), (1.5, 12)] {
            let h = (2.0f64).powi(-j);
            let n = block_count(theta, h);
            assert!(n >= 1);
            assert!(
                (n as f64).powf(-theta) >= 3.0 * h,
                "theta={theta} h=2^-{j}: block {n} too narrow"
            );
        }
        // Roughly dyadic growth in 1/h.
        let n1 = block_count(1.5, (2.0f64).powi(-9));
        let n2 = block_count(1.5, (2.0f64).powi(-12));
        assert!(n2 > 3 * n1);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let b = BumpParams::new(0.45, 2.0).unwrap();
        let win = full_window(&b);
        // The samples only exist to exercise the text format; skip the
        // refine gate so marginal quadrature agreement can't fail the test.
        let opts = DiffOpts {
            refine_check: None,
            ..DiffOpts::default()
        };
        let mut samples = Vec::new();
        for j in [6, 7, 8] {
            let h = (2.0f64).powi(-j);
            samples.push(diff_norm(&b, h, 1.0, win, &opts).unwrap());
            samples.push(diff_norm(&b, h, f64::INFINITY, win, &opts).unwrap());
        }
        let text = samples_to_csv(&samples);
        let back = samples_from_csv(&text).unwrap();
        assert_eq!(back.len(), samples.len());
        for (x, y) in samples.iter().zip(&back) {
            assert_eq!(x.h.to_bits(), y.h.to_bits());
            assert_eq!(x.rho.to_bits(), y.rho.to_bits());
            assert_eq!(x.value.to_bits(), y.value.to_bits());
            assert_eq!(x.method, y.method);
        }
    }
}
