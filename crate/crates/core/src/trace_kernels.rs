//! Composite test functions built from a [`BumpPair`] by shifting and
//! cosine modulation.
//!
//! ```text
//! KissShift (R):   G(x) = (1+e^{νε}) g(x) + e^{νε}(g(x−R+ε) + g(x+R−ε))/2 − (g(x−R) + g(x+R))/2
//!                  H(ξ) = (1 + e^{νε} + e^{νε} cos((R−ε)ξ) − cos(Rξ)) h(ξ)
//! CosMinusOne (L): G(x) = (g(x−L) + g(x+L))/2 − g(x),   H(ξ) = (cos(Lξ) − 1) h(ξ)
//! OnePlusCos (L):  G(x) = g(x) + (g(x−L) + g(x+L))/2,   H(ξ) = (1 + cos(Lξ)) h(ξ)
//! ```

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{integrate_with_breaks, QuadConfig, QuadResult};
use crate::report::{scan, Check, Report};
use crate::transform_pairs::{BumpPair, SIGN_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    KissShift,
    CosMinusOne,
    OnePlusCos,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelFamily {
    pub kind: KernelKind,
    pub base: BumpPair,
    /// `R` for [`KernelKind::KissShift`], `L` otherwise.
    pub shift: f64,
}

impl KernelFamily {
    pub fn new(kind: KernelKind, base: BumpPair, shift: f64) -> Result<Self> {
        if !(shift > 0.0) || !shift.is_finite() {
            return Err(Error::domain(format!(
                "kernel shift must be finite and positive, got {shift}"
            )));
        }
        if kind == KernelKind::KissShift && shift < base.epsilon {
            return Err(Error::domain(format!(
                "kiss kernel needs R >= epsilon, got R = {shift}, epsilon = {}",
                base.epsilon
            )));
        }
        Ok(KernelFamily { kind, base, shift })
    }

    pub fn kiss_shift(base: BumpPair, r: f64) -> Result<Self> {
        Self::new(KernelKind::KissShift, base, r)
    }

    pub fn cos_minus_one(base: BumpPair, l: f64) -> Result<Self> {
        Self::new(KernelKind::CosMinusOne, base, l)
    }

    pub fn one_plus_cos(base: BumpPair, l: f64) -> Result<Self> {
        Self::new(KernelKind::OnePlusCos, base, l)
    }

    /// A family with no checks on the shift.
    #[doc(hidden)]
    pub fn new_unchecked(kind: KernelKind, base: BumpPair, shift: f64) -> Self {
        KernelFamily { kind, base, shift }
    }

    fn e_nu_eps(&self) -> f64 {
        (self.base.nu * self.base.epsilon).exp()
    }

    #[allow(non_snake_case)]
    pub fn G(&self, x: f64) -> f64 {
        let g = |y: f64| self.base.g(y);
        let s = self.shift;
        match self.kind {
            KernelKind::KissShift => {
                let e = self.e_nu_eps();
                let eps = self.base.epsilon;
                (1.0 + e) * g(x) + e * (g(x - s + eps) + g(x + s - eps)) / 2.0 - (g(x - s) + g(x + s)) / 2.0
            }
            KernelKind::CosMinusOne => (g(x - s) + g(x + s)) / 2.0 - g(x),
            KernelKind::OnePlusCos => g(x) + (g(x - s) + g(x + s)) / 2.0,
        }
    }

    /// The factor multiplying `h(ξ)` in `H(ξ)`.
    pub fn multiplier(&self, xi: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let s = self.shift;
        match self.kind {
            KernelKind::KissShift => {
                let e = self.e_nu_eps();
                let eps = self.base.epsilon;
                one * (1.0 + e) + (xi * (s - eps)).cos() * e - (xi * s).cos()
            }
            KernelKind::CosMinusOne => (xi * s).cos() - one,
            KernelKind::OnePlusCos => one + (xi * s).cos(),
        }
    }

    #[allow(non_snake_case)]
    pub fn H(&self, xi: Complex64) -> Complex64 {
        self.multiplier(xi) * self.base.h(xi)
    }

    /// `H` on the real axis.
    #[allow(non_snake_case)]
    pub fn H_real(&self, r: f64) -> f64 {
        self.multiplier(Complex64::new(r, 0.0)).re * self.base.h_real(r)
    }

    /// `H(it)` on the imaginary axis.
    #[allow(non_snake_case)]
    pub fn H_imag(&self, t: f64) -> f64 {
        self.multiplier(Complex64::new(0.0, t)).re * self.base.h_imag(t)
    }

    /// Breakpoints of `G`: the knots of every shifted copy of `g`.
    pub fn knots(&self) -> Vec<f64> {
        let eps = self.base.epsilon;
        let offsets: Vec<f64> = match self.kind {
            KernelKind::KissShift => vec![0.0, self.shift - eps, eps - self.shift, self.shift, -self.shift],
            _ => vec![0.0, self.shift, -self.shift],
        };
        let base = self.base.knots();
        let mut ks: Vec<f64> = offsets.iter().flat_map(|o| base.iter().map(move |k| k + o)).collect();
        ks.sort_by(f64::total_cmp);
        ks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(1.0));
        ks
    }

    /// `∫ G(x) cos(ξx) dx`, the transform of the even function `G`.
    pub fn numerical_transform(&self, xi: f64, cfg: &QuadConfig) -> Result<QuadResult> {
        integrate_with_breaks(|x| self.G(x) * (xi * x).cos(), &self.knots(), cfg)
    }

    /// Largest deviation between the numerical transform of `G` and `H` over `xis`.
    pub fn fourier_deviation(&self, xis: &[f64], cfg: &QuadConfig) -> Result<f64> {
        let mut worst = 0.0f64;
        for &xi in xis {
            let q = self.numerical_transform(xi, cfg)?;
            worst = worst.max((q.value - self.H_real(xi)).abs());
        }
        Ok(worst)
    }
}

/// Sample counts and ranges for [`KernelFamily::verify_sign_conditions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignGrid {
    /// Samples per axis segment.
    pub points: usize,
    /// Real-axis range `[0, xi_max]`.
    pub xi_max: f64,
    /// `x` is sampled on `[shift, shift + x_span·ε]`.
    pub x_span: f64,
}

impl Default for SignGrid {
    fn default() -> Self {
        SignGrid {
            points: 10_000,
            xi_max: 200.0,
            x_span: 10.0,
        }
    }
}

impl KernelFamily {
    pub fn verify_sign_conditions(&self, grid: &SignGrid) -> Report {
        let mut report = Report::new(format!(
            "{:?} n={} eps={} shift={}",
            self.kind, self.base.n, self.base.epsilon, self.shift
        ));
        let pts = grid.points;
        let eps = self.base.epsilon;
        let nu = self.base.nu;
        let s = self.shift;
        match self.kind {
            KernelKind::KissShift => {
                if s < eps {
                    report.push(Check::failed(
                        "precondition R >= eps",
                        format!("R = {s} is smaller than epsilon = {eps}"),
                    ));
                    return report;
                }
                let mut g_neg = Check::new("G <= 0 for x >= R");
                scan(&mut g_neg, s, s + grid.x_span * eps, pts, SIGN_SLACK, |x| -self.G(x));
                report.push(g_neg);

                let mut h_re = Check::new("H >= 0 on the real axis");
                scan(&mut h_re, 0.0, grid.xi_max, pts, SIGN_SLACK, |r| self.H_real(r));
                report.push(h_re);

                let mut h_im = Check::new("H >= 0 on i[0, nu]");
                scan(&mut h_im, 0.0, nu, pts, SIGN_SLACK, |t| self.H_imag(t));
                report.push(h_im);

                let e = self.e_nu_eps();
                let top = 2.0 * (1.0 + e);
                let mut mult = Check::new("real multiplier in [0, 2(1+e^(nu eps))]");
                scan(&mut mult, 0.0, grid.xi_max, pts, SIGN_SLACK, |r| {
                    let v = self.multiplier(Complex64::new(r, 0.0)).re;
                    v.min(top - v)
                });
                report.push(mult);

                let mut hyp = Check::new("e^(nu eps) cosh((R-eps)t) >= cosh(Rt) on [0, nu]");
                scan(&mut hyp, 0.0, nu, pts, SIGN_SLACK, |t| {
                    e * ((s - eps) * t).cosh() - (s * t).cosh()
                });
                report.push(hyp);
            }
            KernelKind::CosMinusOne => {
                let mut h_pos = Check::new("H <= 0 on the real axis");
                scan(&mut h_pos, 0.0, grid.xi_max, pts, SIGN_SLACK, |r| -self.H_real(r));
                report.push(h_pos);

                let mut h_low = Check::new("H >= -2h on the real axis");
                scan(&mut h_low, 0.0, grid.xi_max, pts, SIGN_SLACK, |r| {
                    self.H_real(r) + 2.0 * self.base.h_real(r)
                });
                report.push(h_low);
            }
            KernelKind::OnePlusCos => {
                let mut h_re = Check::new("H >= 0 on the real axis");
                scan(&mut h_re, 0.0, grid.xi_max, pts, SIGN_SLACK, |r| self.H_real(r));
                report.push(h_re);

                let mut h_im = Check::new("H >= 0 on i[0, nu]");
                scan(&mut h_im, 0.0, nu, pts, SIGN_SLACK, |t| self.H_imag(t));
                report.push(h_im);

                let top = 2.0 * self.base.g0();
                let mut g_box = Check::new("G in [0, 2g(0)]");
                let span = s + eps + grid.x_span * eps;
                scan(&mut g_box, 0.0, span, pts, SIGN_SLACK, |x| {
                    let v = self.G(x);
                    v.min(top - v)
                });
                report.push(g_box);
            }
        }
        report
    }
}
