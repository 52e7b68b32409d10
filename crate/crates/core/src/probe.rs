//! Smooth compactly supported test functions with analytic gradients, used
//! to pair against the divergence-form data of the radial field.
//!
//! Each function is `psi(x) = P(x) * phi(|x - c|^2 / R^2)` with a polynomial
//! `P` and the mollifier `phi(t) = exp(1 - 1/(1 - t))` for `t < 1`, zero
//! otherwise: infinitely smooth, supported on the ball `|x - c| <= R`, with
//!
//! ```text
//! grad psi = phi(t) grad P - P phi(t) / (1 - t)^2 * 2 (x - c) / R^2 .
//! ```

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// `P(x) * exp(1 - 1/(1 - |x - c|^2 / R^2))`, smooth with support in the
/// ball of radius `R` around `c`.
#[derive(Debug)]
pub struct TestFunction {
    name: String,
    center: Vec<f64>,
    radius: f64,
    /// `P` as (coefficient, per-coordinate exponents) monomials.
    monomials: Vec<(f64, Vec<u32>)>,
    w1: OnceLock<f64>,
}

fn mollifier(t: f64) -> (f64, f64) {
    if t >= 1.0 - 1e-12 {
        return (0.0, 0.0);
    }
    let inv = 1.0 / (1.0 - t);
    let phi = (1.0 - inv).exp();
    (phi, -phi * inv * inv)
}

impl TestFunction {
    pub fn new(
        name: impl Into<String>,
        center: Vec<f64>,
        radius: f64,
        monomials: Vec<(f64, Vec<u32>)>,
    ) -> Result<Self> {
        let d = center.len();
        if d == 0 {
            return Err(Error::BadConfig("empty center".to_string()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::BadConfig(format!("bad support radius {radius}")));
        }
        if monomials.is_empty() || monomials.iter().any(|(_, e)| e.len() != d) {
            return Err(Error::BadConfig(
                "monomial exponent lists must match the dimension".to_string(),
            ));
        }
        Ok(TestFunction {
            name: name.into(),
            center,
            radius,
            monomials,
            w1: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn support_center(&self) -> &[f64] {
        &self.center
    }

    pub fn support_radius(&self) -> f64 {
        self.radius
    }

    fn poly(&self, x: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|(c, exps)| {
                c * exps
                    .iter()
                    .zip(x)
                    .map(|(e, xi)| xi.powi(*e as i32))
                    .product::<f64>()
            })
            .sum()
    }

    fn poly_grad(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (c, exps) in &self.monomials {
            for j in 0..x.len() {
                if exps[j] == 0 {
                    continue;
                }
                let mut term = c * exps[j] as f64;
                for (i, (e, xi)) in exps.iter().zip(x).enumerate() {
                    let e = if i == j { e - 1 } else { *e };
                    term *= xi.powi(e as i32);
                }
                out[j] += term;
            }
        }
    }

    fn ball_coord(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (xi, ci) in x.iter().zip(&self.center) {
            s += (xi - ci) * (xi - ci);
        }
        s / (self.radius * self.radius)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let t = self.ball_coord(x);
        if t >= 1.0 {
            return 0.0;
        }
        self.poly(x) * mollifier(t).0
    }

    /// Analytic gradient; `out` must have the function's dimension.
    pub fn grad(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        let t = self.ball_coord(x);
        if t >= 1.0 {
            out.fill(0.0);
            return;
        }
        let (phi, dphi) = mollifier(t);
        let p = self.poly(x);
        self.poly_grad(x, out);
        let scale = p * dphi * 2.0 / (self.radius * self.radius);
        for i in 0..x.len() {
            out[i] = phi * out[i] + scale * (x[i] - self.center[i]);
        }
    }

    /// Cached `W^1_2` norm, `sqrt(int psi^2 + |grad psi|^2)`, by composite
    /// tensor Gauss quadrature over the support box. The integrand is smooth
    /// but not analytic at the support sphere, so a single panel per axis
    /// stalls near 1e-7 relative accuracy; four panels push the truncation
    /// below 1e-10.
    pub fn w1_norm(&self) -> Result<f64> {
        if let Some(v) = self.w1.get() {
            return Ok(*v);
        }
        let d = self.dim();
        if d > 3 {
            return Err(Error::UnsupportedDimension {
                d,
                supported: "1..=3",
            });
        }
        const PANELS: usize = 4;
        let (nodes, weights) = gauss_legendre(32);
        let mut zs = Vec::with_capacity(PANELS * nodes.len());
        let mut ws = Vec::with_capacity(PANELS * nodes.len());
        for k in 0..PANELS {
            let mid = -1.0 + (2.0 * k as f64 + 1.0) / PANELS as f64;
            for (z, w) in nodes.iter().zip(weights) {
                zs.push(mid + z / PANELS as f64);
                ws.push(w / PANELS as f64);
            }
        }
        let map = |i: usize, z: f64| self.center[i] + self.radius * z;
        let mut sum = 0.0;
        let mut x = vec![0.0; d];
        let mut g = vec![0.0; d];
        let mut idx = vec![0usize; d];
        let n = zs.len();
        let total = n.pow(d as u32);
        for flat in 0..total {
            let mut rem = flat;
            let mut wprod = 1.0;
            for i in 0..d {
                idx[i] = rem % n;
                rem /= n;
                x[i] = map(i, zs[idx[i]]);
                wprod *= ws[idx[i]] * self.radius;
            }
            let val = self.eval(&x);
            self.grad(&x, &mut g);
            let g2: f64 = g.iter().map(|gi| gi * gi).sum();
            sum += wprod * (val * val + g2);
        }
        let norm = sum.max(0.0).sqrt();
        Ok(*self.w1.get_or_init(|| norm))
    }

    /// Five probes per dimension: on-center and off-center mollifiers, a
    /// coordinate-weighted one, a radially-weighted one, and a tilted
    /// product, all overlapping the annulus `1/4 <= |x| <= 3/4`.
    pub fn family(d: usize) -> Result<Vec<TestFunction>> {
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension {
                d,
                supported: "1..=3",
            });
        }
        let zeros = vec![0u32; d];
        let e1 = {
            let mut e = zeros.clone();
            e[0] = 1;
            e
        };
        let mut center3 = vec![0.0; d];
        center3[0] = 0.3;
        let mut center5 = vec![0.0; d];
        center5[0] = -0.2;
        if d > 1 {
            center5[1] = 0.15;
        }
        let tilt = {
            let mut e = zeros.clone();
            if d > 1 {
                e[0] = 1;
                e[1] = 1;
            } else {
                e[0] = 2;
            }
            e
        };
        Ok(vec![
            TestFunction::new("ball", vec![0.0; d], 0.9, vec![(1.0, zeros.clone())])?,
            TestFunction::new("coordinate", vec![0.0; d], 0.8, vec![(1.0, e1)])?,
            TestFunction::new("offset", center3, 0.55, vec![(1.0, zeros.clone())])?,
            TestFunction::new(
                "radial_weight",
                vec![0.0; d],
                0.85,
                (0..d)
                    .map(|i| {
                        let mut e = zeros.clone();
                        e[i] = 2;
                        (1.0, e)
                    })
                    .chain(std::iter::once((0.5, zeros.clone())))
                    .collect(),
            )?,
            TestFunction::new("tilted", center5, 0.7, vec![(1.0, zeros), (0.8, tilt)])?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in 1..=3 {
            for psi in TestFunction::family(d).unwrap() {
                let mut g = vec![0.0; d];
                for _ in 0..40 {
                    let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-0.9..0.9)).collect();
                    psi.grad(&x, &mut g);
                    for j in 0..d {
                        let h = 1e-6;
                        let mut xp = x.clone();
                        let mut xm = x.clone();
                        xp[j] += h;
                        xm[j] -= h;
                        let fd = (psi.eval(&xp) - psi.eval(&xm)) / (2.0 * h);
                        assert!(
                            (fd - g[j]).abs() < 5e-8 * (1.0 + g[j].abs()),
                            "{} d={d} j={j}: fd {fd} vs {}",
                            psi.name(),
                            g[j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn support_is_respected() {
        let psi = TestFunction::family(2).unwrap().remove(2); // offset ball
        let c = psi.support_center().to_vec();
        let r = psi.support_radius();
        let mut g = vec![0.0; 2];
        for s in [1.0001, 1.1, 2.0] {
            let x = [c[0] + r * s, c[1]];
            assert_eq!(psi.eval(&x), 0.0);
            psi.grad(&x, &mut g);
            assert_eq!(g, [0.0, 0.0]);
        }
        assert!(psi.eval(&[c[0], c[1]]) > 0.0);
    }

    #[test]
    fn w1_norm_matches_direct_quadrature_in_1d() {
        let psi = TestFunction::new("unit", vec![0.0], 1.0, vec![(1.0, vec![0])]).unwrap();
        let val = psi.w1_norm().unwrap();
        // Independent check with adaptive Simpson on psi^2 + psi'^2.
        let f = |x: f64| {
            let mut g = [0.0];
            let v = psi.eval(&[x]);
            psi.grad(&[x], &mut g);
            v * v + g[0] * g[0]
        };
        let want = crate::quad::adaptive_simpson(&f, -1.0, 1.0, 1e-13, 48).sqrt();
        assert_abs_diff_eq!(val, want, epsilon = 1e-9);
        // Cached: second call returns the same value.
        assert_eq!(psi.w1_norm().unwrap(), val);
    }

    #[test]
    fn family_shapes_are_sane() {
        for d in 1..=3 {
            let fam = TestFunction::family(d).unwrap();
            assert_eq!(fam.len(), 5);
            for psi in &fam {
                assert_eq!(psi.dim(), d);
                let n = psi.w1_norm().unwrap();
                assert!(n.is_finite() && n > 0.0, "{} d={d}: norm {n}", psi.name());
            }
        }
        assert!(TestFunction::family(4).is_err());
    }
}
