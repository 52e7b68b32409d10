//! The compactly supported window pair built from the train: its exact
//! antiderivative, the mean-zero window `v`, and the `C^1` primitive `u`.
//!
//! With `z = zeta(theta)` the train's support `[4, 4z)` is mapped into the
//! unit interval twice:
//!
//! ```text
//! v(r) = w(16 z r - 4 z) - w(16 z r - 8 z)
//! u(r) = (W(16 z r - 4 z) - W(16 z r - 8 z)) / (16 z)
//! ```
//!
//! where `W` is the antiderivative of `w`. The positive lobe of `v` lives in
//! `(1/4, 1/2)`, the negative lobe in `(1/2, 3/4)`, `v(r) = -v(r + 1/4)` on
//! the lobe overlap, `u' = v`, and `u >= 0` with a plateau of height
//! `total_mass / (16 z)` between the lobes.

use crate::bump::{BumpParams, Phase, Piece};
use crate::error::Result;

/// How the window behaves on one radial panel.
#[derive(Debug, Clone, Copy)]
pub enum WindowPiece {
    /// `v(r) = sign * piece(16 z r - shift)`; the piece descriptor is in
    /// train coordinates.
    Exact { sign: f64, piece: Piece },
    /// Within a lobe but past the panel cutoff: infinitely many shrinking
    /// blocks remain. `v` is bounded there by `n_start^{-theta*sigma}`.
    Tail { sign: f64, n_start: usize },
    /// `v` vanishes identically (head gap or the inter-lobe plateau);
    /// `u` is constant on the panel.
    Quiet,
}

/// One radial panel `[lo, hi]` with its window behavior.
#[derive(Debug, Clone, Copy)]
pub struct WindowPanel {
    pub lo: f64,
    pub hi: f64,
    pub kind: WindowPiece,
}

impl BumpParams {
    /// Exact antiderivative `W(xi)` of the train, using tabulated prefix
    /// masses plus the in-block closed forms. Constant (equal to the prefix
    /// mass at the cap) across the untabulated tail, so it jumps by at most
    /// [`BumpParams::truncated_mass_bound`] at `a_inf`.
    pub fn cumulative_w(&self, xi: f64) -> f64 {
        let loc = match self.locate(xi) {
            Err(_) => return self.prefix_mass(self.n_cap()),
            Ok(loc) => loc,
        };
        match loc.phase {
            Phase::OutsideLeft => 0.0,
            Phase::OutsideRight => self.total_mass(),
            phase => {
                let base = self.prefix_mass(loc.block);
                let s1 = self.sigma() + 1.0;
                let w = loc.width;
                let t = loc.offset;
                let ramp_mass = w.powf(s1) / s1;
                let height = w.powf(self.sigma());
                base + match phase {
                    Phase::RampUp => t.powf(s1) / s1,
                    Phase::Plateau => ramp_mass + height * (t - w),
                    Phase::RampDown => {
                        ramp_mass + height * w + (w.powf(s1) - (3.0 * w - t).powf(s1)) / s1
                    }
                    _ => self.block_mass(loc.block), // gap: block complete
                }
            }
        }
    }

    /// Scale factor `16 z` of the window maps.
    pub fn window_scale(&self) -> f64 {
        16.0 * self.zeta_theta()
    }

    /// Pull a train coordinate back to the radial variable of the positive
    /// (`sign = +1`) or negative (`sign = -1`) lobe.
    pub fn lobe_pullback(&self, t: f64, sign: f64) -> f64 {
        let z = self.zeta_theta();
        let shift = if sign > 0.0 { 4.0 * z } else { 8.0 * z };
        (t + shift) / (16.0 * z)
    }

    /// The mean-zero window `v(r) = w(16zr - 4z) - w(16zr - 8z)`; vanishes
    /// outside `(1/4, 3/4)` and for `r <= 0`.
    pub fn eval_v(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return 0.0;
        }
        let z = self.zeta_theta();
        let t = 16.0 * z * r;
        self.eval_w(t - 4.0 * z) - self.eval_w(t - 8.0 * z)
    }

    /// The `C^1` primitive `u(r) = (W(16zr-4z) - W(16zr-8z)) / (16z)` with
    /// `u' = v`; vanishes outside `[1/4, 3/4]`, nonnegative, plateau height
    /// `total_mass / (16 z)` between the lobes.
    pub fn eval_u(&self, r: f64) -> f64 {
        if !(r > 0.0) {
            return 0.0;
        }
        let z = self.zeta_theta();
        let t = 16.0 * z * r;
        (self.cumulative_w(t - 4.0 * z) - self.cumulative_w(t - 8.0 * z)) / (16.0 * z)
    }

    /// Plateau value `u(1/2) = total_mass / (16 z)`.
    pub fn u_plateau(&self) -> f64 {
        self.total_mass() / self.window_scale()
    }

    /// Conservative support bounds of `u` (and `v`): `[1/4, 3/4]`.
    pub fn window_support(&self) -> (f64, f64) {
        (0.25, 0.75)
    }

    /// Radial panels covering `[1/4, 3/4]`, in increasing order: per lobe,
    /// the four pieces of blocks `2..n_split` (exact descriptors) followed by
    /// one lobe-tail panel, with quiet panels for the head gap and the
    /// inter-lobe plateau. Panel ends are pullbacks of block breakpoints.
    pub fn window_panels(&self, n_split: usize) -> Result<Vec<WindowPanel>> {
        let n_split = n_split.clamp(3, self.n_cap() - 1);
        let mut panels = Vec::with_capacity(8 * n_split + 8);
        for sign in [1.0f64, -1.0] {
            let head = self.lobe_pullback(0.0, sign).max(0.25);
            let start = self.lobe_pullback(4.0, sign);
            if start > head {
                panels.push(WindowPanel {
                    lo: head,
                    hi: start,
                    kind: WindowPiece::Quiet,
                });
            }
            for n in 2..n_split {
                let (bounds, pieces) = self.block_panels(n)?;
                for (k, piece) in pieces.iter().enumerate() {
                    panels.push(WindowPanel {
                        lo: self.lobe_pullback(bounds[k], sign),
                        hi: self.lobe_pullback(bounds[k + 1], sign),
                        kind: WindowPiece::Exact {
                            sign,
                            piece: *piece,
                        },
                    });
                }
            }
            let tail_lo = self.lobe_pullback(self.breakpoint(n_split)?, sign);
            let tail_hi = self.lobe_pullback(4.0 * self.zeta_theta(), sign);
            panels.push(WindowPanel {
                lo: tail_lo,
                hi: tail_hi,
                kind: WindowPiece::Tail {
                    sign,
                    n_start: n_split,
                },
            });
        }
        // The negative lobe's head panel [1/2, 1/2 + 1/(4z)] doubles as the
        // inter-lobe plateau, so the two lobes already tile [1/4, 3/4].
        Ok(panels)
    }
}
