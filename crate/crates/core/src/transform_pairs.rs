//! The compactly supported test functions `g_ε` and their transforms `h_ε`.
//!
//! `g_ε` is the `m`-fold self-convolution of the indicator of `[−a, a]`,
//! with `a = ε/m` so that it is supported on `[−ε, ε]`, and
//! `h_ε(ξ) = ∫ g_ε(x) e^{−iξx} dx = (2 sin(aξ)/ξ)^m`. The order is
//! `m = n + 2` for even `n` and `m = n + 1` for odd `n`, so `m` is even and
//! `h_ε ≥ 0` on `ℝ ∪ iℝ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bspline_eval, bspline_knots, integrate_with_breaks, QuadConfig, QuadResult};
use crate::plancherel::{sinc_power, sinc_power_integral, PlancherelDensity, SpectralWeight};
use crate::report::{scan, Check, Report, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpPair {
    pub n: u32,
    pub epsilon: f64,
    pub m: u32,
    pub a: f64,
    /// `(n − 1)/2`.
    pub nu: f64,
}

pub fn make_bump_pair(n: u32, epsilon: f64) -> Result<BumpPair> {
    if n < 2 {
        return Err(Error::domain(format!("bump pair needs n >= 2, got {n}")));
    }
    let m = if n.is_multiple_of(2) { n + 2 } else { n + 1 };
    BumpPair::build(n, epsilon, m)
}

impl BumpPair {
    fn build(n: u32, epsilon: f64, m: u32) -> Result<BumpPair> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(format!(
                "bump pair needs finite epsilon > 0, got {epsilon}"
            )));
        }
        Ok(BumpPair {
            n,
            epsilon,
            m,
            a: epsilon / m as f64,
            nu: (n as f64 - 1.0) / 2.0,
        })
    }

    /// A pair with an arbitrary convolution order, bypassing the parity rule.
    #[doc(hidden)]
    pub fn with_order_unchecked(n: u32, epsilon: f64, m: u32) -> Result<BumpPair> {
        if m == 0 {
            return Err(Error::domain("convolution order must be positive"));
        }
        BumpPair::build(n, epsilon, m)
    }

    pub fn g(&self, x: f64) -> f64 {
        bspline_eval(self.m, self.a, x)
    }

    /// `g(0)`.
    pub fn g0(&self) -> f64 {
        self.g(0.0)
    }

    /// Breakpoints of `g`, where it fails to be smooth.
    pub fn knots(&self) -> Vec<f64> {
        bspline_knots(self.m, self.a)
    }

    pub fn h(&self, xi: Complex64) -> Complex64 {
        let z = xi * self.a;
        let s = if z.norm() < 1e-4 {
            // 2 sin(aξ)/ξ = 2a (1 − z²/6 + z⁴/120 − …)
            let z2 = z * z;
            (Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0) * (2.0 * self.a)
        } else {
            z.sin() * 2.0 / xi
        };
        s.powu(self.m)
    }

    /// `h` on the real axis.
    pub fn h_real(&self, r: f64) -> f64 {
        sinc_power(self.m, self.a, r)
    }

    /// `h(it) = (2 sinh(at)/t)^m` on the imaginary axis.
    pub fn h_imag(&self, t: f64) -> f64 {
        let x = self.a * t;
        let s = if x.abs() < 1e-4 {
            let x2 = x * x;
            2.0 * self.a * (1.0 + x2 / 6.0 + x2 * x2 / 120.0)
        } else {
            2.0 * x.sinh() / t
        };
        s.powi(self.m as i32)
    }

    /// `h(0) = (2a)^m`, the mass of `g`.
    pub fn h0(&self) -> f64 {
        (2.0 * self.a).powi(self.m as i32)
    }

    /// `∫_0^∞ h(r) w(r) dr`.
    pub fn integrate_against(&self, w: &SpectralWeight, cfg: &QuadConfig) -> Result<QuadResult> {
        sinc_power_integral(self.m, self.a, w, cfg)
    }

    /// `∫_0^∞ h(r) Φ_n(r) dr`.
    pub fn spectral_integral(&self, cfg: &QuadConfig) -> Result<QuadResult> {
        self.integrate_against(&PlancherelDensity::new(self.n)?.weight(), cfg)
    }

    /// `∫_{−ε}^{ε} g(x) cos(ξx) dx`, which equals `h(ξ)` since `g` is even.
    pub fn numerical_transform(&self, xi: f64, cfg: &QuadConfig) -> Result<QuadResult> {
        integrate_with_breaks(|x| self.g(x) * (xi * x).cos(), &self.knots(), cfg)
    }
}

/// Sample counts and ranges for [`BumpPair::verify_admissibility`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityGrid {
    pub points: usize,
    /// Real-axis range `[0, xi_max]` for the sign check.
    pub xi_max: f64,
    /// Imaginary-axis range `[0, t_max]`; `None` means `ν + 1`.
    pub t_max: Option<f64>,
    /// The decay fit uses `|h|` on `[decay_from, decay_from · decay_span]` in units of `1/a`.
    pub decay_from: f64,
    pub decay_span: f64,
}

impl Default for AdmissibilityGrid {
    fn default() -> Self {
        AdmissibilityGrid {
            points: 10_000,
            xi_max: 200.0,
            t_max: None,
            decay_from: 10.0,
            decay_span: 1e4,
        }
    }
}

pub const SIGN_SLACK: f64 = 1e-12;

impl BumpPair {
    /// Evenness, sign and support of `g`, sign of `h` on both axes, and the
    /// decay rate of `h` on the real axis.
    pub fn verify_admissibility(&self, grid: &AdmissibilityGrid) -> Report {
        let mut report = Report::new(format!("admissibility n={} eps={} m={}", self.n, self.epsilon, self.m));
        let pts = grid.points;
        let eps = self.epsilon;

        let mut even = Check::new("g even");
        scan(&mut even, 0.0, 1.5 * eps, pts, SIGN_SLACK, |x| {
            -(self.g(x) - self.g(-x)).abs()
        });
        report.push(even);

        let mut nonneg = Check::new("g non-negative");
        scan(&mut nonneg, -1.5 * eps, 1.5 * eps, pts, SIGN_SLACK, |x| self.g(x));
        report.push(nonneg);

        let mut support = Check::new("g supported in [-eps, eps]");
        scan(&mut support, eps, 3.0 * eps, pts, 0.0, |x| -self.g(x).abs());
        scan(&mut support, -3.0 * eps, -eps, pts, 0.0, |x| -self.g(x).abs());
        report.push(support);

        let mut h_real = Check::new("h >= 0 on the real axis");
        scan(&mut h_real, 0.0, grid.xi_max, pts, SIGN_SLACK, |r| self.h_real(r));
        report.push(h_real);

        let mut h_imag = Check::new("h >= 0 on the imaginary axis");
        let t_max = grid.t_max.unwrap_or(self.nu + 1.0);
        scan(&mut h_imag, 0.0, t_max, pts, SIGN_SLACK, |t| {
            self.h(Complex64::new(0.0, t)).re
        });
        report.push(h_imag);

        report.push(self.decay_check(grid));
        report
    }

    /// Least-squares slope of `log |h|` against `log r` over the peaks of
    /// `|h|` (one sample per half-period of `sin(ar)`).
    fn decay_check(&self, grid: &AdmissibilityGrid) -> Check {
        let required = -(self.n as f64 + 1.0) + 0.1;
        let mut check = Check::new("h decay slope <= -(n+1) + 0.1");
        let period = std::f64::consts::PI / self.a;
        let r0 = grid.decay_from / self.a;
        let r1 = r0 * grid.decay_span;
        let k0 = (r0 / period).ceil() as u64;
        let k1 = (r1 / period).floor() as u64;
        let count = (grid.points as u64).min(k1.saturating_sub(k0)).max(2);
        let mut xs = Vec::with_capacity(count as usize);
        let mut ys = Vec::with_capacity(count as usize);
        for i in 0..count {
            // geometric spacing of the peak indices
            let k = (k0 as f64 * ((k1 as f64 / k0 as f64).powf(i as f64 / (count - 1) as f64))).round();
            let r = (k + 0.5) * period;
            let v = self.h_real(r).abs();
            if v > 0.0 {
                xs.push(r.ln());
                ys.push(v.ln());
            }
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        check.samples = xs.len();
        check.passed = slope <= required;
        check.max_violation = (slope - required).max(0.0);
        check.witness = Some(Witness {
            point: r0,
            value: slope,
        });
        check.note = Some(format!("fitted slope {slope:.4}"));
        check
    }

    /// Compare the numerical transform of `g` with `h` at each `ξ`.
    pub fn fourier_check(&self, xis: &[f64], tol: f64) -> Result<Report> {
        let mut report = Report::new(format!("fourier n={} eps={}", self.n, self.epsilon));
        let mut check = Check::new("transform of g equals h");
        let cfg = QuadConfig::absolute(tol * 1e-2);
        let mut max_dev = 0.0f64;
        for &xi in xis {
            if !(xi.abs() <= 50.0) {
                return Err(Error::domain(format!("fourier_check needs |xi| <= 50, got {xi}")));
            }
            let q = self.numerical_transform(xi, &cfg)?;
            let dev = (q.value - self.h_real(xi)).abs();
            max_dev = max_dev.max(dev);
            check.record(xi, tol - dev, 0.0);
        }
        check.note = Some(format!("max deviation {max_dev:.3e}"));
        report.push(check);
        Ok(report)
    }
}
