use super::quadrature::{TailEstimate, TailModel};

/// Tail of `(2 sin(a r))^m · Σ_j q_j r^{−j} · w(r)` with `m` even, every
/// `j ≥ 2`, and `w(r) = tanh(c r)` or `w ≡ 1`.
///
/// `sin^m` is split into its mean `C(m, m/2)/2^m` (integrated exactly) and
/// the harmonics `cos(2k a r)`. Each harmonic is integrated by parts twice;
/// the remainder `(j(j+1)/ω²)·∫ cos(ωr) r^{−j−2}` is bounded by
/// `2 j(j+1)/(ω³ T^{j+2})`. Replacing `tanh(cr)` by 1 costs at most
/// `2e^{−2cT}` times the absolute integral.
#[derive(Debug, Clone, PartialEq)]
pub struct SincPolyTail {
    pub m: u32,
    pub a: f64,
    /// `(j, q_j)` pairs.
    pub terms: Vec<(u32, f64)>,
    pub tanh_rate: Option<f64>,
}

impl SincPolyTail {
    pub fn new(m: u32, a: f64, terms: Vec<(u32, f64)>, tanh_rate: Option<f64>) -> Self {
        assert!(m.is_multiple_of(2) && m >= 2, "sin^m tail model needs even m");
        assert!(a > 0.0);
        assert!(terms.iter().all(|&(j, _)| j >= 2), "tail needs r^-j with j >= 2");
        SincPolyTail { m, a, terms, tanh_rate }
    }

    /// Fourier cosine coefficients of `sin^m`: `(mean, [c_1, …, c_{m/2}])`.
    fn sin_power_coefficients(&self) -> (f64, Vec<f64>) {
        let m = self.m;
        let half = m / 2;
        let scale = 2f64.powi(-(m as i32));
        let mean = binomial(m, half) * scale;
        let harmonics = (1..=half)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                2.0 * scale * sign * binomial(m, half - k)
            })
            .collect();
        (mean, harmonics)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl TailModel for SincPolyTail {
    fn min_cutoff(&self) -> f64 {
        (4.0 * std::f64::consts::PI / self.a).max(1.0)
    }

    fn estimate(&self, cutoff: f64) -> TailEstimate {
        let t = cutoff;
        let amp = 2f64.powi(self.m as i32);
        let (mean, harmonics) = self.sin_power_coefficients();
        let mut value = 0.0;
        let mut bound = 0.0;
        let mut abs_integral = 0.0;
        for &(j, q) in &self.terms {
            let jf = j as f64;
            let tj = t.powi(j as i32);
            let mut v = mean * t / tj / (jf - 1.0);
            let mut b = 0.0;
            for (k, &ck) in harmonics.iter().enumerate() {
                let w = 2.0 * (k + 1) as f64 * self.a;
                let (s, c) = (w * t).sin_cos();
                v += ck * (-s / (w * tj) + jf * c / (w * w * tj * t));
                b += ck.abs() * 2.0 * jf * (jf + 1.0) / (w * w * w * tj * t * t);
            }
            value += q * v;
            bound += q.abs() * b;
            abs_integral += q.abs() * t / tj / (jf - 1.0);
        }
        let mut bound = amp * bound;
        if let Some(c) = self.tanh_rate {
            bound += amp * 2.0 * (-2.0 * c * t).exp() * abs_integral;
        }
        // rounding in the closed form
        bound += 1e-15 * (amp * value).abs();
        TailEstimate {
            value: amp * value,
            bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate, QuadConfig};

    #[test]
    fn sin_power_expansion() {
        let tail = SincPolyTail::new(6, 1.0, vec![(2, 1.0)], None);
        let (mean, h) = tail.sin_power_coefficients();
        for &x in &[0.1f64, 0.7, 2.3, -1.9] {
            let series = mean
                + h.iter()
                    .enumerate()
                    .map(|(k, c)| c * (2.0 * (k + 1) as f64 * x).cos())
                    .sum::<f64>();
            assert!((series - x.sin().powi(6)).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_estimate_within_its_bound() {
        // ∫_T^∞ (2 sin(0.7 r))^4 (r^-2 − 0.3 r^-4) dr, reference from a long finite integral
        let tail = SincPolyTail::new(4, 0.7, vec![(2, 1.0), (4, -0.3)], None);
        let f = |r: f64| (2.0 * (0.7 * r).sin()).powi(4) * (r.powi(-2) - 0.3 * r.powi(-4));
        let t = 40.0;
        let far = 4000.0;
        let body = integrate(f, t, far, &QuadConfig::absolute(1e-12)).unwrap().value;
        // beyond `far` the harmonics are negligible at this tolerance; use the model there too
        let reference = body + tail.estimate(far).value;
        let est = tail.estimate(t);
        assert!(
            (est.value - reference).abs() <= est.bound + 1e-10,
            "{est:?} vs {reference}"
        );
    }
}
