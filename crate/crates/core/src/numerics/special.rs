//! Special functions: double factorial, Γ at half-integers, the logarithmic
//! integral and hyperbolic ball volumes.

use std::f64::consts::PI;

use serde::Serialize;

use super::quadrature::{integrate, QuadConfig, QuadResult};
use crate::error::{Error, Result};

/// `j!!`, the product of the integers in `1..=j` with the parity of `j`.
/// `0!! = 1`. Panics on `u128` overflow (`j > 56`).
pub fn double_factorial(j: u32) -> u128 {
    let mut acc: u128 = 1;
    let mut k = j;
    while k > 1 {
        acc = acc.checked_mul(k as u128).expect("double factorial overflows u128");
        k -= 2;
    }
    acc
}

/// `Γ(n/2)` for a positive integer `n`.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n > 0, "gamma_half: n must be positive");
    if n.is_multiple_of(2) {
        (1..n / 2).map(f64::from).product()
    } else {
        // Γ(k + 1/2) = (2k−1)!! √π / 2^k
        let k = (n - 1) / 2;
        let odd = if k == 0 {
            1.0
        } else {
            double_factorial(2 * k - 1) as f64
        };
        odd * PI.sqrt() / 2f64.powi(k as i32)
    }
}

/// `li(x) = ∫_2^x du / log u` (lower limit 2, so no principal value is needed).
///
/// Integrated in `t = log u` as `∫ e^t/t dt` to keep the integrand smooth
/// over many decades.
pub fn log_integral(x: f64) -> Result<f64> {
    Ok(log_integral_quad(x)?.value)
}

pub fn log_integral_quad(x: f64) -> Result<QuadResult> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_integral needs finite x > 1, got {x}")));
    }
    log_integral_of_log(x.ln())
}

/// `li(e^t)` with lower limit 2, for `t > 0`. Avoids forming `e^t`.
pub fn log_integral_of_log(t: f64) -> Result<QuadResult> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("log_integral needs x > 1, got log x = {t}")));
    }
    let lo = std::f64::consts::LN_2;
    let cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        ..Default::default()
    };
    if t == lo {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 1,
        });
    }
    // e^t/t for t near 0 blows up: split at ln 2 only matters for t < ln 2
    integrate(|s: f64| s.exp() / s, lo, t, &cfg)
}

/// `li(2) = PV ∫_0^2 du/log u = 1.04516…`, the offset between the
/// standard logarithmic integral and [`log_integral`].
///
/// Computed as `∫_0^2 (1/log u − 1/(u−1)) du`; the subtracted term has zero
/// principal value on `[0, 2]` and cancels the pole at `u = 1`.
pub fn li_offset() -> QuadResult {
    let f = |u: f64| {
        let v = u - 1.0;
        if v.abs() < 1e-3 {
            0.5 - v / 12.0 + v * v / 24.0 - 19.0 * v * v * v / 720.0
        } else {
            1.0 / u.ln() - 1.0 / v
        }
    };
    integrate(f, 0.0, 2.0, &QuadConfig::absolute(1e-13)).expect("regular integrand on a finite interval")
}

/// Standard `li(x)` (principal value from 0) for `x > 1`.
pub fn log_integral_standard(x: f64) -> Result<f64> {
    Ok(log_integral(x)? + li_offset().value)
}

/// Which lower-limit convention a value of li was computed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiConvention {
    OffsetFromTwo,
    Standard,
}

/// One evaluation of `x/log x + x/log²x ≤ li(x) ≤ x/log x + x/log²x + 3x/log³x`.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichCheck {
    pub x: f64,
    pub convention: LiConvention,
    pub li: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SandwichCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// The two sides of the sandwich at `x`.
pub fn li_sandwich_bounds(x: f64) -> (f64, f64) {
    let l = x.ln();
    let lower = x / l + x / (l * l);
    (lower, lower + 3.0 * x / (l * l * l))
}

pub fn li_sandwich(x: f64, convention: LiConvention) -> Result<SandwichCheck> {
    let li = match convention {
        LiConvention::OffsetFromTwo => log_integral(x)?,
        LiConvention::Standard => log_integral_standard(x)?,
    };
    let (lower, upper) = li_sandwich_bounds(x);
    Ok(SandwichCheck {
        x,
        convention,
        li,
        lower,
        upper,
        lower_holds: lower <= li,
        upper_holds: li <= upper,
    })
}

/// Volume of a ball of radius `r` in hyperbolic `n`-space,
/// `(2π^{n/2}/Γ(n/2)) ∫_0^r sinh^{n−1}`.
pub fn ball_volume(n: u32, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("ball_volume needs n >= 2, got {n}")));
    }
    if !(r > 0.0) {
        return Err(Error::domain(format!("ball_volume needs r > 0, got {r}")));
    }
    let sphere = 2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n);
    let radial = match n {
        2 => r.cosh() - 1.0,
        3 => 0.25 * ((2.0 * r).sinh() - 2.0 * r),
        _ => {
            let k = (n - 1) as i32;
            integrate(|x: f64| x.sinh().powi(k), 0.0, r, &QuadConfig::relative(1e-13))?.value
        }
    };
    Ok(sphere * radial)
}

/// Lower bound `(π^{n/2}/Γ(n/2))·e^{(n−1)r}/((n−1)2^{n−1})`, valid for `r > 1/(n−1)`.
pub fn ball_volume_lower_bound(n: u32, r: f64) -> f64 {
    let nm1 = (n - 1) as f64;
    PI.powf(n as f64 / 2.0) / gamma_half(n) * (nm1 * r).exp() / (nm1 * 2f64.powi(n as i32 - 1))
}
