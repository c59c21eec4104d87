/// Value at `x` of the `m`-fold self-convolution of the indicator of `[−a, a]`.
///
/// Uses the truncated-power form
/// `(1/(m−1)!) Σ_k (−1)^k C(m,k) (s − 2ak)_+^{m−1}` with `s = ma − |x|`,
/// evaluated on the left flank so that only the terms with `2ak < s`
/// contribute. The result is exactly zero for `|x| ≥ m·a`.
pub fn bspline_eval(m: u32, a: f64, x: f64) -> f64 {
    assert!(m >= 1, "bspline_eval: order must be >= 1");
    assert!(a > 0.0, "bspline_eval: half-width must be positive");
    let s = m as f64 * a - x.abs();
    if !(s > 0.0) {
        return 0.0;
    }
    let deg = (m - 1) as i32;
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=m {
        let t = s - 2.0 * a * k as f64;
        if t <= 0.0 {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * t.powi(deg);
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    let fact: f64 = (1..m).map(f64::from).product();
    (sum / fact).max(0.0)
}

/// Breakpoints of [`bspline_eval`]: `−ma, −ma + 2a, …, ma`.
pub fn bspline_knots(m: u32, a: f64) -> Vec<f64> {
    (0..=m).map(|k| -(m as f64) * a + 2.0 * a * k as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate_with_breaks, QuadConfig};
    use proptest::prelude::*;

    /// Iterated self-convolution of the indicator on a uniform grid.
    fn grid_convolution(m: u32, a: f64, x: f64, cells_per_a: usize) -> f64 {
        let h = a / cells_per_a as f64;
        let half = m as usize * cells_per_a;
        // samples at cell midpoints of [−ma, ma]
        let n = 2 * half;
        let centre = |i: usize| -(m as f64) * a + (i as f64 + 0.5) * h;
        let mut cur: Vec<f64> = (0..n).map(|i| if centre(i).abs() < a { 1.0 } else { 0.0 }).collect();
        let base = cur.clone();
        for _ in 1..m {
            let mut next = vec![0.0; n];
            // midpoint rule on the convolution; base supported on the middle 2a
            for (i, out) in next.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, &b) in base.iter().enumerate() {
                    if b == 0.0 {
                        continue;
                    }
                    let k = i as isize - j as isize + half as isize;
                    if k >= 0 && (k as usize) < n {
                        acc += cur[k as usize];
                    }
                }
                *out = acc * h;
            }
            cur = next;
        }
        // linear interpolation at x
        let pos = (x + m as f64 * a) / h - 0.5;
        let i = pos.floor() as usize;
        let w = pos - i as f64;
        cur[i] * (1.0 - w) + cur[i + 1] * w
    }

    #[test]
    fn indicator_and_triangle() {
        assert_eq!(bspline_eval(1, 1.0, 0.5), 1.0);
        assert_eq!(bspline_eval(1, 1.0, 1.0), 0.0);
        assert!((bspline_eval(2, 1.0, 0.0) - 2.0).abs() < 1e-15);
        assert!((bspline_eval(2, 1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_peak_matches_grid_convolution() {
        let a = 1f64.asinh() / 2.0;
        let exact = 2.0 * 1f64.asinh().powi(3) / 3.0;
        let v = bspline_eval(4, a, 0.0);
        assert!((v - exact).abs() < 1e-12);
        // midpoint-grid convolution converges as h², so use h small enough
        let g = grid_convolution(4, a, 0.0, 400);
        assert!((g - v).abs() < 1e-5, "grid {g} vs closed form {v}");
    }

    #[test]
    fn support_is_exact() {
        for m in 1..=10 {
            let a = 0.37;
            assert_eq!(bspline_eval(m, a, m as f64 * a), 0.0);
            assert_eq!(bspline_eval(m, a, -(m as f64) * a - 1e-300), 0.0);
            assert!(bspline_eval(m, a, m as f64 * a * (1.0 - 1e-9)) >= 0.0);
        }
    }

    #[test]
    fn mass_is_interval_length_to_the_m() {
        for m in 1..=9u32 {
            let a = 0.3;
            let cfg = QuadConfig::absolute(1e-12);
            let r = integrate_with_breaks(|x| bspline_eval(m, a, x), &bspline_knots(m, a), &cfg).unwrap();
            let mass = (2.0 * a).powi(m as i32);
            assert!((r.value - mass).abs() < 1e-8, "m={m}");
        }
    }

    proptest! {
        #[test]
        fn even(m in 1u32..=10, a in 0.01f64..3.0, x in -40.0f64..40.0) {
            prop_assert!((bspline_eval(m, a, x) - bspline_eval(m, a, -x)).abs() <= 1e-12);
        }

        #[test]
        fn non_increasing_on_half_line(m in 1u32..=10, a in 0.01f64..3.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
            let support = m as f64 * a;
            let (x1, x2) = if u < v { (u * support, v * support) } else { (v * support, u * support) };
            let (g1, g2) = (bspline_eval(m, a, x1), bspline_eval(m, a, x2));
            prop_assert!(g1 >= g2 - 1e-14 * g1.abs().max(1.0), "m={} x1={} x2={} g1={} g2={}", m, x1, x2, g1, g2);
            prop_assert!(g2 >= 0.0);
        }
    }
}
