//! The Plancherel density `Φ_n` of hyperbolic `n`-space and spectral-side
//! integrals `∫_0^∞ h(r) Φ_n(r) dr`.
//!
//! ```text
//! n even:  Φ_n(r) = r tanh(πr) / ((2π)^{n/2} (n−2)!!) · Π_{k=0}^{(n−4)/2} (r² + (k+½)²)
//! n odd:   Φ_n(r) = 1 / (2^{(n−1)/2} π^{(n+1)/2} (n−2)!!) · Π_{k=0}^{(n−3)/2} (r² + k²)
//! ```
//!
//! These are Parnovskii's formulas. Randol's printed `Φ_3` differs from them
//! by what appears to be a typographical error.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    double_factorial, integrate_semi_infinite_with, PowerEnvelope, QuadConfig, QuadResult, SincPolyTail,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlancherelDensity {
    n: u32,
}

impl PlancherelDensity {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("Plancherel density needs n >= 2, got {n}")));
        }
        Ok(PlancherelDensity { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn parity(&self) -> Parity {
        if self.n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn density(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::domain(format!("Plancherel density needs r >= 0, got {r}")));
        }
        Ok(self.weight().eval(r))
    }

    /// `Φ_n` as a [`SpectralWeight`].
    pub fn weight(&self) -> SpectralWeight {
        let n = self.n;
        let nf = n as f64;
        let dfact = double_factorial(n - 2) as f64;
        match self.parity() {
            Parity::Even => {
                let pref = 1.0 / ((2.0 * PI).powf(nf / 2.0) * dfact);
                let roots: Vec<f64> = (0..(n - 2) / 2).map(|k| (k as f64 + 0.5).powi(2)).collect();
                let poly = expand_in_r_squared(&roots);
                // times r
                let terms = poly
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (2 * k as u32 + 1, pref * c))
                    .collect();
                SpectralWeight::new(terms, Some(PI))
            }
            Parity::Odd => {
                let pref = 1.0 / (2f64.powf((nf - 1.0) / 2.0) * PI.powf((nf + 1.0) / 2.0) * dfact);
                let roots: Vec<f64> = (0..(n - 1) / 2).map(|k| (k * k) as f64).collect();
                let poly = expand_in_r_squared(&roots);
                let terms = poly
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (2 * k as u32, pref * c))
                    .collect();
                SpectralWeight::new(terms, None)
            }
        }
    }
}

/// Coefficients of `Π (r² + c_k)` as a polynomial in `r²`, lowest degree first.
fn expand_in_r_squared(cs: &[f64]) -> Vec<f64> {
    let mut p = vec![1.0];
    for &c in cs {
        let mut next = vec![0.0; p.len() + 1];
        for (i, &pi) in p.iter().enumerate() {
            next[i] += c * pi;
            next[i + 1] += pi;
        }
        p = next;
    }
    p
}

/// `tanh(x)` for `x ≥ 0` as `−expm1(−2x)/(1 + e^{−2x})`.
pub fn stable_tanh(x: f64) -> f64 {
    if x < 0.0 {
        return -stable_tanh(-x);
    }
    let e = (-2.0 * x).exp();
    -(-2.0 * x).exp_m1() / (1.0 + e)
}

/// A weight `w(r) = τ(r) · Σ c_j r^j` with `τ(r) = tanh(κr)` or `τ ≡ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralWeight {
    /// `(power, coefficient)` pairs.
    pub terms: Vec<(u32, f64)>,
    pub tanh_rate: Option<f64>,
}

impl SpectralWeight {
    pub fn new(terms: Vec<(u32, f64)>, tanh_rate: Option<f64>) -> Self {
        SpectralWeight { terms, tanh_rate }
    }

    /// `r·tanh(κr)`.
    pub fn r_tanh(rate: f64) -> Self {
        SpectralWeight::new(vec![(1, 1.0)], Some(rate))
    }

    pub fn eval(&self, r: f64) -> f64 {
        let poly: f64 = self.terms.iter().map(|&(j, c)| c * r.powi(j as i32)).sum();
        match self.tanh_rate {
            Some(k) => stable_tanh(k * r) * poly,
            None => poly,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }
}

/// `∫_0^∞ h(r) Φ_n(r) dr` for a caller-supplied `h` with
/// `|h(r)Φ_n(r)| ≤ envelope.c · r^{−envelope.p}` beyond `envelope.r0`.
pub fn spectral_integral<F>(pd: &PlancherelDensity, h: F, envelope: &PowerEnvelope, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    if envelope.p < 2.0 {
        return Err(Error::domain(format!(
            "spectral_integral needs decay exponent p >= 2, got {}",
            envelope.p
        )));
    }
    let w = pd.weight();
    integrate_semi_infinite_with(|r| h(r) * w.eval(r), envelope, &QuadConfig::absolute(tol))
}

/// `(2 sin(ar)/r)^m` for real `r`.
pub fn sinc_power(m: u32, a: f64, r: f64) -> f64 {
    let x = a * r;
    let s = if x.abs() < 1e-4 {
        let x2 = x * x;
        2.0 * a * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        2.0 * x.sin() / r
    };
    s.powi(m as i32)
}

/// `∫_0^∞ (2 sin(ar)/r)^m w(r) dr` for even `m`, with the tail past the
/// cutoff integrated in closed form rather than bounded by an envelope.
pub fn sinc_power_integral(m: u32, a: f64, w: &SpectralWeight, cfg: &QuadConfig) -> Result<QuadResult> {
    if !m.is_multiple_of(2) {
        return Err(Error::domain(format!("sinc_power_integral needs even m, got {m}")));
    }
    if !(a > 0.0) {
        return Err(Error::domain(format!("sinc_power_integral needs a > 0, got {a}")));
    }
    if w.degree() + 2 > m {
        return Err(Error::domain(format!(
            "weight of degree {} is not integrable against a sinc power of order {m}",
            w.degree()
        )));
    }
    let tail_terms = w.terms.iter().map(|&(j, c)| (m - j, c)).collect();
    let tail = SincPolyTail::new(m, a, tail_terms, w.tanh_rate);
    integrate_semi_infinite_with(|r| sinc_power(m, a, r) * w.eval(r), &tail, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;
    use proptest::prelude::*;

    #[test]
    fn low_dimensional_closed_forms() {
        let p2 = PlancherelDensity::new(2).unwrap();
        let p3 = PlancherelDensity::new(3).unwrap();
        for i in 0..200 {
            let r = 0.05 * i as f64;
            let d2 = p2.density(r).unwrap();
            assert!((d2 - r * (PI * r).tanh() / (2.0 * PI)).abs() <= 1e-15 * (1.0 + d2));
            let d3 = p3.density(r).unwrap();
            assert!((d3 - r * r / (2.0 * PI * PI)).abs() <= 1e-15 * (1.0 + d3));
        }
        assert!((p2.density(1.0).unwrap() - 0.158_562).abs() < 1e-6);
        assert!((p3.density(2.0).unwrap() - 0.202_642).abs() < 1e-6);
    }

    #[test]
    fn dimension_four_and_five_by_hand() {
        // n=4: r tanh(πr)(r² + 1/4)/(4π²·2); n=5: r²(r² + 1)/(4π³·3)
        let p4 = PlancherelDensity::new(4).unwrap();
        let p5 = PlancherelDensity::new(5).unwrap();
        for &r in &[0.3, 1.0, 2.5, 17.0] {
            let e4 = r * (PI * r).tanh() * (r * r + 0.25) / (8.0 * PI * PI);
            let e5 = r * r * (r * r + 1.0) / (12.0 * PI.powi(3));
            assert!(((p4.density(r).unwrap() - e4) / e4).abs() < 1e-14);
            assert!(((p5.density(r).unwrap() - e5) / e5).abs() < 1e-14);
        }
    }

    #[test]
    fn vanishes_at_zero_and_rejects_negative() {
        for n in 2..=9 {
            let pd = PlancherelDensity::new(n).unwrap();
            assert_eq!(pd.density(0.0).unwrap(), 0.0);
            assert!(pd.density(-1e-3).is_err());
        }
        assert!(PlancherelDensity::new(1).is_err());
    }

    #[test]
    fn even_density_vanishes_to_second_order() {
        // r·tanh(πr) ~ πr², so Φ_n(r)/r → 0 and Φ_n(r)/r² has a positive limit
        for n in [2u32, 4, 6, 8] {
            let pd = PlancherelDensity::new(n).unwrap();
            let q1 = |h: f64| pd.density(h).unwrap() / h;
            let q2 = |h: f64| pd.density(h).unwrap() / (h * h);
            // Richardson: q1 is odd in h, q2 is even
            let (h1, h2) = (1e-3, 5e-4);
            let lim1 = 2.0 * q1(h2 / 10.0) - q1(h1 / 10.0);
            assert!(lim1.abs() < 1e-9, "n={n}: {lim1}");
            let lim2 = (4.0 * q2(h2) - q2(h1)) / 3.0;
            assert!(lim2 > 0.0);
            assert!((lim2 - q2(1e-6)).abs() < 1e-9 * lim2, "n={n}");
            let w = pd.weight();
            let exact = PI * w.terms[0].1;
            assert!((lim2 - exact).abs() < 1e-9 * exact, "n={n}");
        }
    }

    #[test]
    fn large_r_has_no_overflow() {
        let pd = PlancherelDensity::new(6).unwrap();
        assert!(pd.density(1e5).unwrap().is_finite());
        assert_eq!(stable_tanh(400.0), 1.0);
        assert!((stable_tanh(0.3) - 0.3f64.tanh()).abs() < 3e-16);
        assert!((stable_tanh(-2.0) + 2f64.tanh()).abs() < 3e-16);
    }

    #[test]
    fn zero_function_integrates_to_zero() {
        let pd = PlancherelDensity::new(2).unwrap();
        let r = spectral_integral(&pd, |_| 0.0, &PowerEnvelope::new(1e-30, 2.0), 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn envelope_route_agrees_with_closed_form_tail() {
        // h(r) = 1/(1+r²)^2 against Φ_2: two routes, envelope bound vs long finite integral
        let pd = PlancherelDensity::new(2).unwrap();
        let h = |r: f64| (1.0 + r * r).powi(-2);
        let env = PowerEnvelope::new(1.0 / (2.0 * PI), 3.0);
        let a = spectral_integral(&pd, h, &env, 1e-9).unwrap();
        let b = integrate(
            |r| h(r) * pd.density(r).unwrap(),
            0.0,
            1e5,
            &QuadConfig::absolute(1e-11),
        )
        .unwrap();
        assert!((a.value - b.value).abs() < 1e-8, "{a:?} {b:?}");
    }

    #[test]
    fn sinc_tail_route_agrees_with_envelope_route() {
        // n = 3, m = 4: integrand (2 sin(ar))^4 r^{-2}/(2π²), envelope 16/(2π²) r^{-2}
        let pd = PlancherelDensity::new(3).unwrap();
        let a = 0.25;
        let tol = 1e-6;
        let env = PowerEnvelope::new(16.0 / (2.0 * PI * PI), 2.0);
        let by_envelope = spectral_integral(&pd, |r| sinc_power(4, a, r), &env, tol).unwrap();
        let by_tail = sinc_power_integral(4, a, &pd.weight(), &QuadConfig::absolute(1e-10)).unwrap();
        assert!(by_envelope.error_estimate < tol);
        assert!((by_envelope.value - by_tail.value).abs() < tol + by_tail.error_estimate);
    }

    #[test]
    fn sinc_power_integral_exact_case() {
        // ∫_0^∞ (sin r / r)^2 dr = π/2
        let w = SpectralWeight::new(vec![(0, 0.25)], None);
        let r = sinc_power_integral(2, 1.0, &w, &QuadConfig::absolute(1e-11)).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10, "{r:?}");
        // ∫_0^∞ (sin r / r)^4 dr = π/3
        let r = sinc_power_integral(
            4,
            1.0,
            &SpectralWeight::new(vec![(0, 1.0 / 16.0)], None),
            &QuadConfig::absolute(1e-11),
        )
        .unwrap();
        assert!((r.value - PI / 3.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn rejects_non_integrable_weight() {
        let pd = PlancherelDensity::new(4).unwrap();
        assert!(sinc_power_integral(4, 0.25, &pd.weight(), &QuadConfig::absolute(1e-8)).is_err());
        assert!(sinc_power_integral(3, 0.25, &SpectralWeight::r_tanh(1.0), &QuadConfig::absolute(1e-8)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn non_negative(n in 2u32..=8, r in 0.0f64..200.0) {
            prop_assert!(PlancherelDensity::new(n).unwrap().density(r).unwrap() >= 0.0);
        }

        #[test]
        fn odd_density_is_even_polynomial(k in 1u32..=3, r in 0.0f64..50.0) {
            let pd = PlancherelDensity::new(2 * k + 1).unwrap();
            let w = pd.weight();
            let d = pd.density(r).unwrap();
            let mirrored = w.eval(-r);
            prop_assert!((d - mirrored).abs() <= 1e-12 * d.max(1.0));
        }
    }
}
