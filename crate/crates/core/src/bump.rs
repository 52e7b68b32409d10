//! The one-dimensional train of power bumps `w_{sigma,theta}` and its
//! segment geometry.
//!
//! For `sigma > 0` and `theta > 1` the function is supported on
//! `[4, a_inf)` with `a_inf = 4 * zeta(theta)`, built from blocks indexed by
//! `n >= 2`. Block `n` starts at `a_n = 4 * sum_{j<n} j^-theta`, has unit
//! width `W = n^-theta`, and consists of four consecutive pieces:
//!
//! ```text
//! ramp-up   (xi - a_n)^sigma          on [a_n,      a_n +  W)
//! plateau   W^sigma                   on [a_n +  W, a_n + 2W)
//! ramp-down (a_n + 3W - xi)^sigma     on [a_n + 2W, a_n + 3W)
//! gap       0                         on [a_n + 3W, a_{n+1})
//! ```
//!
//! Breakpoints are tabulated lazily (thread-safe, append-only) up to a cap
//! `n_cap`; beyond the cap the train is treated as zero, which is an error
//! of at most `n_cap^{-theta*sigma}` in value.

use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::zeta::zeta_tail;

/// Default block-table cap.
pub const DEFAULT_N_CAP: usize = 1_000_000;

/// Default relative snap tolerance for transition detection.
pub const DEFAULT_SNAP_TOL: f64 = 1e-14;

/// Which piece of the train a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    OutsideLeft,
    RampUp,
    Plateau,
    RampDown,
    Gap,
    OutsideRight,
}

/// Resolved position of a point within the block structure.
#[derive(Debug, Clone, Copy)]
pub struct SegmentLocator {
    /// Block index `n >= 2`; 0 for points outside the support.
    pub block: usize,
    pub phase: Phase,
    /// Offset from the block start `a_n` (0 for outside phases).
    pub offset: f64,
    /// Block piece width `n^-theta` (0 for outside phases).
    pub width: f64,
    /// True when the point was snapped onto a transition point.
    pub on_transition: bool,
}

/// Analytic description of the train on one panel, in absolute coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Zero,
    Plateau { height: f64 },
    /// `(x - start)^sigma`, vanishing at `start`.
    RampUp { start: f64, sigma: f64 },
    /// `(end - x)^sigma`, vanishing at `end`.
    RampDown { end: f64, sigma: f64 },
}

impl Piece {
    /// Value of the piece at `x` (only meaningful inside its panel).
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Piece::Zero => 0.0,
            Piece::Plateau { height } => height,
            Piece::RampUp { start, sigma } => (x - start).max(0.0).powf(sigma),
            Piece::RampDown { end, sigma } => (end - x).max(0.0).powf(sigma),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Piece::Zero)
    }
}

/// Lazily grown table of breakpoints `a_n`, shared between trains with the
/// same `theta` (the breakpoints do not depend on `sigma`).
#[derive(Debug)]
struct BreakTable {
    theta: f64,
    /// `a[i] = a_{i+2}`; grown by the Kahan-compensated recurrence
    /// `a_{n+1} = a_n + 4 n^-theta`.
    state: RwLock<KahanVec>,
}

#[derive(Debug)]
struct KahanVec {
    vals: Vec<f64>,
    comp: f64,
}

impl KahanVec {
    fn push_add(&mut self, increment: f64) {
        let last = *self.vals.last().expect("table never empty");
        let y = increment - self.comp;
        let t = last + y;
        self.comp = (t - last) - y;
        self.vals.push(t);
    }
}

impl BreakTable {
    fn new(theta: f64) -> Self {
        BreakTable {
            theta,
            state: RwLock::new(KahanVec {
                vals: vec![4.0],
                comp: 0.0,
            }),
        }
    }

    /// Grow the table until it holds `a_n` for all `n <= upto`.
    fn extend_to(&self, upto: usize) {
        let needed = upto - 1; // entries for n = 2..=upto
        {
            let st = self.state.read().expect("break table poisoned");
            if st.vals.len() >= needed {
                return;
            }
        }
        let mut st = self.state.write().expect("break table poisoned");
        while st.vals.len() < needed {
            let n = st.vals.len() + 1; // a_{n+1} = a_n + 4 n^-theta
            st.push_add(4.0 * (n as f64).powf(-self.theta));
        }
    }

    fn get(&self, n: usize) -> f64 {
        self.extend_to(n);
        self.state.read().expect("break table poisoned").vals[n - 2]
    }

    /// Largest tabulated index i with `a[i] <= xi`, extending as needed but
    /// never past `n_max`. Returns the block index, or `None` when `xi`
    /// falls at or beyond `a_{n_max}`.
    fn block_of(&self, xi: f64, n_max: usize) -> Option<usize> {
        loop {
            let st = self.state.read().expect("break table poisoned");
            let last = *st.vals.last().expect("never empty");
            if last > xi {
                let i = st.vals.partition_point(|a| *a <= xi) - 1;
                return Some(i + 2);
            }
            // Full table (entries up to a_{n_max}) and still last <= xi.
            if st.vals.len() >= n_max - 1 {
                return None; // xi >= a_{n_max}
            }
            drop(st);
            self.extend_to(self.needed_guess(n_max));
        }
    }

    /// Growth schedule: double the table per round, up to `a_{n_max}`. The
    /// cap must stay reachable -- if growth stalled short of it, `block_of`
    /// could spin forever on points between the last entry and `a_inf`.
    fn needed_guess(&self, n_max: usize) -> usize {
        let len = self.state.read().expect("break table poisoned").vals.len();
        (2 * len + 17).min(n_max)
    }
}

/// Lazily grown prefix masses `integral of w over (-inf, a_n]`.
#[derive(Debug)]
pub(crate) struct MassTable {
    /// `pm[i] = W(a_{i+2})`, so `pm[0] = 0`.
    state: RwLock<KahanVec>,
    /// Mass of the full train: `(2/(sigma+1) + 1) * sum_{n>=2} n^{-theta(sigma+1)}`.
    pub(crate) total: f64,
    pref: f64,
}

/// Parameters and lazy tables for one train `w_{sigma,theta}`.
///
/// Cloning is cheap; trains produced by [`BumpParams::with_sigma`] share the
/// breakpoint table. All evaluation methods take `&self` and are safe to
/// call from many threads concurrently.
#[derive(Debug, Clone)]
pub struct BumpParams {
    sigma: f64,
    theta: f64,
    zeta_theta: f64,
    a_inf: f64,
    n_cap: usize,
    snap_tol: f64,
    breaks: Arc<BreakTable>,
    mass: Arc<OnceLock<MassTable>>,
}

impl BumpParams {
    /// Validate parameters and set up lazy tables with default options.
    pub fn new(sigma: f64, theta: f64) -> Result<Self> {
        Self::with_options(sigma, theta, DEFAULT_N_CAP, DEFAULT_SNAP_TOL)
    }

    /// As [`BumpParams::new`] with an explicit block cap and snap tolerance.
    pub fn with_options(sigma: f64, theta: f64, n_cap: usize, snap_tol: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::SigmaOutOfRange { sigma });
        }
        if !theta.is_finite() || theta <= 1.0 {
            return Err(Error::ThetaOutOfRange { theta });
        }
        if n_cap < 16 {
            return Err(Error::BadConfig(format!("n_cap too small: {n_cap}")));
        }
        if !(snap_tol > 0.0) || snap_tol > 1e-6 {
            return Err(Error::BadTolerance { tol: snap_tol });
        }
        let zeta_theta = crate::zeta::zeta(theta, 1e-13)?.value;
        Ok(BumpParams {
            sigma,
            theta,
            zeta_theta,
            a_inf: 4.0 * zeta_theta,
            n_cap,
            snap_tol,
            breaks: Arc::new(BreakTable::new(theta)),
            mass: Arc::new(OnceLock::new()),
        })
    }

    /// A train with the same `theta` (sharing the breakpoint table) but a
    /// different ramp exponent; used for power laws `w_{gamma sigma}`.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::SigmaOutOfRange { sigma });
        }
        Ok(BumpParams {
            sigma,
            mass: Arc::new(OnceLock::new()),
            breaks: Arc::clone(&self.breaks),
            ..*self
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `zeta(theta)`, certified to 1e-13.
    pub fn zeta_theta(&self) -> f64 {
        self.zeta_theta
    }

    /// Right endpoint of the support, `4 * zeta(theta)`.
    pub fn a_inf(&self) -> f64 {
        self.a_inf
    }

    pub fn n_cap(&self) -> usize {
        self.n_cap
    }

    /// Values in the untabulated tail `[a_ncap, a_inf)` are below this.
    pub fn tail_height_bound(&self) -> f64 {
        (self.n_cap as f64).powf(-self.theta * self.sigma)
    }

    /// Global bound `sup w = 2^{-sigma * theta}`, attained on block 2.
    pub fn sup_w(&self) -> f64 {
        (2.0f64).powf(-self.sigma * self.theta)
    }

    /// Block start `a_n = 4 * sum_{j<n} j^-theta` for `2 <= n <= n_cap`.
    pub fn breakpoint(&self, n: usize) -> Result<f64> {
        if n < 2 || n > self.n_cap {
            return Err(Error::BadConfig(format!(
                "block index {n} outside 2..={}",
                self.n_cap
            )));
        }
        Ok(self.breaks.get(n))
    }

    /// Piece width `n^-theta` of block `n`.
    pub fn block_width(&self, n: usize) -> f64 {
        (n as f64).powf(-self.theta)
    }

    /// The four transition points of block `n`: `a_n + k n^-theta`, k = 0..3.
    pub fn transitions(&self, n: usize) -> Result<[f64; 4]> {
        let a = self.breakpoint(n)?;
        let w = self.block_width(n);
        Ok([a, a + w, a + 2.0 * w, a + 3.0 * w])
    }

    /// Panel bounds and piece descriptors of block `n`. The fifth bound is
    /// the tabulated `a_{n+1}` (bit-identical to the table entry used by
    /// `locate`), and the four pieces are ramp-up / plateau / ramp-down / gap.
    pub fn block_panels(&self, n: usize) -> Result<([f64; 5], [Piece; 4])> {
        let a = self.breakpoint(n)?;
        let a_next = if n + 1 <= self.n_cap {
            self.breakpoint(n + 1)?
        } else {
            self.a_inf
        };
        let w = self.block_width(n);
        let bounds = [a, a + w, a + 2.0 * w, a + 3.0 * w, a_next];
        let pieces = [
            Piece::RampUp {
                start: a,
                sigma: self.sigma,
            },
            Piece::Plateau {
                height: w.powf(self.sigma),
            },
            Piece::RampDown {
                end: a + 3.0 * w,
                sigma: self.sigma,
            },
            Piece::Zero,
        ];
        Ok((bounds, pieces))
    }

    /// Resolve the block, phase, and local offset of `xi`, snapping onto
    /// transition points within `snap_tol * max(1, |xi|)`.
    ///
    /// Errors with [`Error::TruncationSaturated`] for points in the
    /// untabulated tail `[a_ncap, a_inf)`; callers that only need a value
    /// may treat that as 0 with error at most [`Self::tail_height_bound`].
    pub fn locate(&self, xi: f64) -> Result<SegmentLocator> {
        let outside = |phase: Phase, on_transition: bool| SegmentLocator {
            block: 0,
            phase,
            offset: 0.0,
            width: 0.0,
            on_transition,
        };
        if xi.is_nan() {
            return Ok(outside(Phase::OutsideLeft, false));
        }
        let tol = self.snap_tol * xi.abs().max(1.0);
        if xi < 4.0 {
            let snapped = 4.0 - xi <= tol;
            if !snapped {
                return Ok(outside(Phase::OutsideLeft, false));
            }
            return Ok(SegmentLocator {
                block: 2,
                phase: Phase::RampUp,
                offset: 0.0,
                width: self.block_width(2),
                on_transition: true,
            });
        }
        if (xi - self.a_inf).abs() <= tol {
            return Ok(outside(Phase::OutsideRight, true));
        }
        if xi >= self.a_inf {
            return Ok(outside(Phase::OutsideRight, false));
        }
        let Some(mut n) = self.breaks.block_of(xi, self.n_cap) else {
            return Err(Error::TruncationSaturated {
                xi,
                bound: self.tail_height_bound(),
            });
        };
        let mut w = self.block_width(n);
        let mut offset = xi - self.breaks.get(n);
        let mut on_transition = false;
        let k = (offset / w).round();
        if (offset - k * w).abs() <= tol && (0.0..=4.0).contains(&k) {
            if k == 4.0 {
                // Snapped onto the start of the next block.
                n += 1;
                if n >= self.n_cap {
                    return Err(Error::TruncationSaturated {
                        xi,
                        bound: self.tail_height_bound(),
                    });
                }
                w = self.block_width(n);
                offset = 0.0;
            } else {
                offset = k * w;
            }
            on_transition = true;
        }
        let phase = if offset < w {
            Phase::RampUp
        } else if offset < 2.0 * w {
            Phase::Plateau
        } else if offset < 3.0 * w {
            Phase::RampDown
        } else {
            Phase::Gap
        };
        Ok(SegmentLocator {
            block: n,
            phase,
            offset,
            width: w,
            on_transition,
        })
    }

    /// Evaluate the train. Points in the untabulated tail evaluate to 0
    /// (error at most [`Self::tail_height_bound`]); this method never fails.
    pub fn eval_w(&self, xi: f64) -> f64 {
        match self.locate(xi) {
            Err(_) => 0.0,
            Ok(loc) => match loc.phase {
                Phase::RampUp => loc.offset.powf(self.sigma),
                Phase::Plateau => loc.width.powf(self.sigma),
                Phase::RampDown => (3.0 * loc.width - loc.offset).powf(self.sigma),
                _ => 0.0,
            },
        }
    }

    /// One-sided-free derivative of the train.
    ///
    /// Errors with [`Error::NotDifferentiable`] at (snapped) transition
    /// points, where only one-sided derivatives exist; the caller decides
    /// any one-sided handling. Untabulated-tail points evaluate to 0.
    pub fn eval_w_prime(&self, xi: f64) -> Result<f64> {
        let loc = match self.locate(xi) {
            Err(Error::TruncationSaturated { .. }) => return Ok(0.0),
            other => other?,
        };
        if loc.on_transition {
            return Err(Error::NotDifferentiable { xi });
        }
        Ok(match loc.phase {
            Phase::RampUp => self.sigma * loc.offset.powf(self.sigma - 1.0),
            Phase::RampDown => -self.sigma * (3.0 * loc.width - loc.offset).powf(self.sigma - 1.0),
            _ => 0.0,
        })
    }

    /// Mass of block `n`: `(2/(sigma+1) + 1) * (n^-theta)^(sigma+1)`.
    pub fn block_mass(&self, n: usize) -> f64 {
        self.mass_pref() * self.block_width(n).powf(self.sigma + 1.0)
    }

    fn mass_pref(&self) -> f64 {
        2.0 / (self.sigma + 1.0) + 1.0
    }

    pub(crate) fn mass_table(&self) -> &MassTable {
        self.mass.get_or_init(|| {
            let total = self.mass_pref()
                * zeta_tail(self.theta * (self.sigma + 1.0), 1e-13)
                    .expect("theta(sigma+1) > 1 by construction")
                    .value;
            MassTable {
                state: RwLock::new(KahanVec {
                    vals: vec![0.0],
                    comp: 0.0,
                }),
                total,
                pref: self.mass_pref(),
            }
        })
    }

    /// Prefix mass `W(a_n)`, i.e. the integral of the train up to `a_n`.
    pub(crate) fn prefix_mass(&self, n: usize) -> f64 {
        debug_assert!((2..=self.n_cap).contains(&n));
        let table = self.mass_table();
        let needed = n - 1; // entries for 2..=n
        {
            let st = table.state.read().expect("mass table poisoned");
            if st.vals.len() >= needed {
                return st.vals[n - 2];
            }
        }
        let mut st = table.state.write().expect("mass table poisoned");
        while st.vals.len() < needed {
            let m = st.vals.len() + 1; // pm for a_{m+1} adds block m's mass
            st.push_add(table.pref * self.block_width(m).powf(self.sigma + 1.0));
        }
        st.vals[n - 2]
    }

    /// Total mass of the train, `(2/(sigma+1)+1) * sum_{n>=2} n^{-theta(sigma+1)}`.
    pub fn total_mass(&self) -> f64 {
        self.mass_table().total
    }

    /// Remaining mass beyond the table cap; bounds the jump of
    /// [`crate::BumpParams::cumulative_w`] across the untabulated tail.
    pub fn truncated_mass_bound(&self) -> f64 {
        (self.total_mass() - self.prefix_mass(self.n_cap)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_parameters() {
        assert!(BumpParams::new(0.0, 2.0).is_err());
        assert!(BumpParams::new(-0.5, 2.0).is_err());
        assert!(BumpParams::new(0.5, 1.0).is_err());
        assert!(BumpParams::new(0.5, 0.9).is_err());
        assert!(BumpParams::new(f64::NAN, 2.0).is_err());
    }

    #[test]
    fn breakpoints_match_partial_sums() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        assert_abs_diff_eq!(b.breakpoint(2).unwrap(), 4.0, epsilon = 0.0);
        assert_abs_diff_eq!(b.breakpoint(3).unwrap(), 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.breakpoint(4).unwrap(), 5.0 + 4.0 / 9.0, epsilon = 1e-15);
        // theta = 1.5: a_5 = 4 (1 + 2^-1.5 + 3^-1.5 + 4^-1.5)
        let b = BumpParams::new(0.5, 1.5).unwrap();
        assert_abs_diff_eq!(
            b.breakpoint(5).unwrap(),
            6.684013921292596,
            epsilon = 1e-14
        );
    }

    #[test]
    fn breakpoints_increase_and_stay_below_a_inf() {
        let b = BumpParams::new(0.5, 1.5).unwrap();
        let mut prev = b.breakpoint(2).unwrap();
        for n in 3..=4000 {
            let a = b.breakpoint(n).unwrap();
            assert!(a > prev);
            assert!(a < b.a_inf());
            prev = a;
        }
    }

    #[test]
    fn locate_reports_phases() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        // Block 2: [4, 5), width 1/4.
        let l = b.locate(4.1).unwrap();
        assert_eq!((l.block, l.phase), (2, Phase::RampUp));
        let l = b.locate(4.3).unwrap();
        assert_eq!((l.block, l.phase), (2, Phase::Plateau));
        let l = b.locate(4.6).unwrap();
        assert_eq!((l.block, l.phase), (2, Phase::RampDown));
        let l = b.locate(4.9).unwrap();
        assert_eq!((l.block, l.phase), (2, Phase::Gap));
        assert_eq!(b.locate(3.0).unwrap().phase, Phase::OutsideLeft);
        assert_eq!(b.locate(7.0).unwrap().phase, Phase::OutsideRight);
        assert_eq!(b.locate(b.a_inf()).unwrap().phase, Phase::OutsideRight);
    }

    #[test]
    fn locate_snaps_transition_points() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        for (x, phase) in [
            (4.0, Phase::RampUp),
            (4.25, Phase::Plateau),
            (4.5, Phase::RampDown),
            (4.75, Phase::Gap),
        ] {
            let l = b.locate(x).unwrap();
            assert!(l.on_transition, "x = {x}");
            assert_eq!(l.phase, phase, "x = {x}");
            // A nudge below snap tolerance still snaps...
            let l = b.locate(x + 1e-15).unwrap();
            assert!(l.on_transition, "x = {x} + 1e-15");
            // ...but a clear offset does not.
            let l = b.locate(x + 1e-9).unwrap();
            assert!(!l.on_transition, "x = {x} + 1e-9");
        }
        // Snapping onto a_3 from just below lands in block 3.
        let l = b.locate(5.0 - 1e-16).unwrap();
        assert_eq!((l.block, l.phase, l.offset), (3, Phase::RampUp, 0.0));
        assert!(l.on_transition);
    }

    #[test]
    fn eval_matches_piecewise_definition() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        assert_abs_diff_eq!(b.eval_w(4.125), 0.125f64.sqrt(), epsilon = 1e-16);
        assert_abs_diff_eq!(b.eval_w(4.375), 0.5, epsilon = 1e-16);
        assert_abs_diff_eq!(b.eval_w(4.625), 0.125f64.sqrt(), epsilon = 1e-15);
        assert_eq!(b.eval_w(4.875), 0.0);
        assert_eq!(b.eval_w(3.9), 0.0);
        assert_eq!(b.eval_w(b.a_inf() + 0.1), 0.0);
        assert_eq!(b.eval_w(f64::NAN), 0.0);
    }

    #[test]
    fn sup_bound_attained_on_block_two() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        assert_abs_diff_eq!(b.eval_w(4.375), b.sup_w(), epsilon = 1e-16);
        for x in [4.05, 4.2, 4.45, 4.8, 5.03, 5.2, 6.1, 6.5] {
            assert!(b.eval_w(x) <= b.sup_w() + 1e-15);
        }
    }

    #[test]
    fn derivative_values_and_transition_refusal() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        assert_abs_diff_eq!(
            b.eval_w_prime(4.125).unwrap(),
            0.5 * 0.125f64.powf(-0.5),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            b.eval_w_prime(4.625).unwrap(),
            -0.5 * 0.125f64.powf(-0.5),
            epsilon = 1e-14
        );
        assert_eq!(b.eval_w_prime(4.3).unwrap(), 0.0);
        assert_eq!(b.eval_w_prime(4.9).unwrap(), 0.0);
        assert_eq!(b.eval_w_prime(3.0).unwrap(), 0.0);
        for x in [4.0, 4.25, 4.5, 4.75, 5.0] {
            assert!(
                matches!(b.eval_w_prime(x), Err(Error::NotDifferentiable { .. })),
                "x = {x}"
            );
        }
        assert!(matches!(
            b.eval_w_prime(b.a_inf()),
            Err(Error::NotDifferentiable { .. })
        ));
    }

    #[test]
    fn truncation_saturates_with_bound() {
        let b = BumpParams::with_options(0.5, 2.0, 16, 1e-14).unwrap();
        let deep = b.breakpoint(16).unwrap() + 1e-3;
        assert!(deep < b.a_inf());
        match b.locate(deep) {
            Err(Error::TruncationSaturated { bound, .. }) => {
                assert_abs_diff_eq!(bound, 16f64.powf(-1.0), epsilon = 1e-18);
            }
            other => panic!("expected saturation, got {other:?}"),
        }
        assert_eq!(b.eval_w(deep), 0.0);
        assert_eq!(b.eval_w_prime(deep).unwrap(), 0.0);
    }

    #[test]
    fn block_mass_and_prefix_masses_agree() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        // block_mass(3) = (2/1.5 + 1) * 3^-3 = 7/(3*27)
        assert_abs_diff_eq!(b.block_mass(3), 7.0 / 81.0, epsilon = 1e-16);
        let pm4 = b.prefix_mass(4);
        assert_abs_diff_eq!(pm4, b.block_mass(2) + b.block_mass(3), epsilon = 1e-15);
        // total: (2/1.5+1) * (zeta(3) - 1)
        assert_abs_diff_eq!(b.total_mass(), 0.47146610737238667, epsilon = 1e-13);
        assert!(b.truncated_mass_bound() < 1e-8);
    }

    #[test]
    fn shared_breakpoints_after_with_sigma() {
        let b = BumpParams::new(0.5, 2.0).unwrap();
        let c = b.with_sigma(1.0).unwrap();
        assert_eq!(b.breakpoint(37).unwrap(), c.breakpoint(37).unwrap());
        assert_abs_diff_eq!(c.eval_w(4.125), 0.125, epsilon = 1e-16);
    }

    #[test]
    fn concurrent_lazy_growth_is_consistent() {
        let b = BumpParams::new(0.5, 1.5).unwrap();
        let seq: Vec<f64> = (0..400)
            .map(|i| b.eval_w(4.0 + i as f64 * 0.02))
            .collect();
        let b2 = BumpParams::new(0.5, 1.5).unwrap();
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let b2 = b2.clone();
                std::thread::spawn(move || {
                    (0..400)
                        .map(|i| b2.eval_w(4.0 + i as f64 * 0.02))
                        .collect::<Vec<f64>>()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), seq);
        }
    }
}
