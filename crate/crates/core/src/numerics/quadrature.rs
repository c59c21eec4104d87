//! Adaptive Gauss–Kronrod quadrature on finite intervals and on `[0, ∞)`.
//!
//! Finite pieces are integrated with a global adaptive 7/15-point
//! Gauss–Kronrod rule (QUADPACK error heuristics). Semi-infinite integrals
//! are split into `[0, T]`, handled adaptively, and `[T, ∞)`, handled by a
//! [`TailModel`] that returns an estimate of the tail together with a
//! rigorous bound on what that estimate misses. `T` is doubled until the
//! tail bound drops below half of the requested tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Kronrod abscissae on `[0, 1]`, descending; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value of an integral with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute, non-negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.error_estimate
        } else {
            self.error_estimate / self.value.abs()
        }
    }

    /// `k · self`, with the error bar scaled accordingly.
    pub fn scaled(self, k: f64) -> QuadResult {
        QuadResult {
            value: k * self.value,
            error_estimate: k.abs() * self.error_estimate,
            evaluations: self.evaluations,
        }
    }
}

/// Stopping rule: stop once `error ≤ max(abs_tol, rel_tol·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Largest cutoff `T` a semi-infinite integral may grow to.
    pub max_cutoff: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-9,
            rel_tol: 0.0,
            max_evals: 20_000_000,
            max_cutoff: 1e300,
        }
    }
}

impl QuadConfig {
    pub fn absolute(tol: f64) -> Self {
        QuadConfig {
            abs_tol: tol,
            rel_tol: 0.0,
            ..Default::default()
        }
    }

    pub fn relative(tol: f64) -> Self {
        QuadConfig {
            abs_tol: 0.0,
            rel_tol: tol,
            ..Default::default()
        }
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

/// Global adaptive integrator: always bisects the segment with the largest
/// error estimate.
struct Adaptive<'f, F> {
    f: &'f F,
    heap: BinaryHeap<Segment>,
    /// Segments too short to bisect further; their errors are final.
    frozen: Vec<Segment>,
    evaluations: usize,
}

impl<'f, F: Fn(f64) -> f64> Adaptive<'f, F> {
    fn new(f: &'f F) -> Self {
        Adaptive {
            f,
            heap: BinaryHeap::new(),
            frozen: Vec::new(),
            evaluations: 0,
        }
    }

    fn push(&mut self, a: f64, b: f64) {
        if b > a {
            self.heap.push(gk15(self.f, a, b));
            self.evaluations += 15;
        }
    }

    fn totals(&self) -> (f64, f64) {
        let mut value = 0.0;
        let mut error = 0.0;
        for s in self.heap.iter().chain(self.frozen.iter()) {
            value += s.value;
            error += s.error;
        }
        (value, error)
    }

    /// Bisect until `error ≤ target(value)` or the budget runs out.
    fn refine(&mut self, target: impl Fn(f64) -> f64, max_evals: usize) -> std::result::Result<(), (f64, f64)> {
        let (mut value, mut error) = self.totals();
        let mut since_resum = 0usize;
        loop {
            if error <= target(value) {
                return Ok(());
            }
            if self.evaluations + 30 > max_evals {
                return Err((value, error));
            }
            let Some(worst) = self.heap.pop() else {
                return Err((value, error));
            };
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 1e-14 * worst.b.abs() {
                self.frozen.push(worst);
                if self.heap.is_empty() {
                    return Err((value, error));
                }
                continue;
            }
            let left = gk15(self.f, worst.a, mid);
            let right = gk15(self.f, mid, worst.b);
            self.evaluations += 30;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            self.heap.push(left);
            self.heap.push(right);
            since_resum += 1;
            // running sums drift; recompute now and then
            if since_resum >= 512 {
                (value, error) = self.totals();
                since_resum = 0;
            }
        }
    }
}

/// Adaptive integral of `f` over `[a, b]` with the given breakpoints
/// (discontinuities of `f` or of its derivatives) used as initial panel ends.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], cfg: &QuadConfig) -> Result<QuadResult> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut adapt = Adaptive::new(&f);
    for w in pts.windows(2) {
        adapt.push(w[0], w[1]);
    }
    match adapt.refine(|v| cfg.target(v), cfg.max_evals) {
        Ok(()) => {
            let (value, error_estimate) = adapt.totals();
            Ok(QuadResult {
                value,
                error_estimate,
                evaluations: adapt.evaluations,
            })
        }
        Err((value, error_estimate)) => Err(Error::NoConvergence {
            value,
            error_estimate,
            target: cfg.target(value),
            evaluations: adapt.evaluations,
        }),
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate: limits must be finite"));
    }
    if a > b {
        return integrate(f, b, a, cfg).map(|r| r.scaled(-1.0));
    }
    integrate_with_breaks(f, &[a, b], cfg)
}

/// Estimate of `∫_T^∞ f` and a bound on `|true tail − value|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub value: f64,
    pub bound: f64,
}

/// Analytic control of an integrand beyond a cutoff `T`.
pub trait TailModel {
    /// Smallest cutoff at which the model is valid.
    fn min_cutoff(&self) -> f64;
    fn estimate(&self, cutoff: f64) -> TailEstimate;
}

/// `|f(r)| ≤ c·r^(−p)` for `r ≥ r0`, with `p > 1`. Contributes no value,
/// only the bound `c·T^(1−p)/(p−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEnvelope {
    pub c: f64,
    pub p: f64,
    pub r0: f64,
}

impl PowerEnvelope {
    pub fn new(c: f64, p: f64) -> Self {
        PowerEnvelope { c, p, r0: 1.0 }
    }

    pub fn from(mut self, r0: f64) -> Self {
        self.r0 = r0;
        self
    }
}

impl TailModel for PowerEnvelope {
    fn min_cutoff(&self) -> f64 {
        self.r0.max(f64::MIN_POSITIVE)
    }

    fn estimate(&self, cutoff: f64) -> TailEstimate {
        TailEstimate {
            value: 0.0,
            bound: self.c.abs() * cutoff.powf(1.0 - self.p) / (self.p - 1.0),
        }
    }
}

/// `∫_0^∞ f(r) dr` to absolute tolerance `tol`, with the tail past the
/// cutoff controlled by `tail`.
pub fn integrate_semi_infinite<F, T>(f: F, tail: &T, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    T: TailModel + ?Sized,
{
    integrate_semi_infinite_with(f, tail, &QuadConfig::absolute(tol))
}

pub fn integrate_semi_infinite_with<F, T>(f: F, tail: &T, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
    T: TailModel + ?Sized,
{
    if cfg.is_invalid() {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    let mut adapt = Adaptive::new(&f);
    let mut cutoff = tail.min_cutoff().max(1.0);
    // geometric panels [0,1], [1,2], [2,4], ... up to the first cutoff
    let mut lo = 0.0;
    let mut hi = 1.0f64.min(cutoff);
    while lo < cutoff {
        adapt.push(lo, hi);
        lo = hi;
        hi = (2.0 * hi).min(cutoff);
    }
    loop {
        let t = tail.estimate(cutoff);
        let (interior, _) = adapt.totals();
        let target = cfg.target(interior + t.value);
        if t.bound > 0.5 * target {
            if 2.0 * cutoff > cfg.max_cutoff || adapt.evaluations + 15 > cfg.max_evals {
                let (value, err) = adapt.totals();
                return Err(Error::NoConvergence {
                    value: value + t.value,
                    error_estimate: err + t.bound,
                    target,
                    evaluations: adapt.evaluations,
                });
            }
            adapt.push(cutoff, 2.0 * cutoff);
            cutoff *= 2.0;
            continue;
        }
        let tail_value = t.value;
        let tail_bound = t.bound;
        let refined = adapt.refine(
            |v| (cfg.target(v + tail_value) - tail_bound).max(0.5 * cfg.target(v + tail_value)),
            cfg.max_evals,
        );
        let (value, err) = adapt.totals();
        match refined {
            Ok(()) => {
                // the relative target may have moved with the value; re-check the tail
                let target = cfg.target(value + tail_value);
                if tail_bound > 0.5 * target {
                    continue;
                }
                return Ok(QuadResult {
                    value: value + tail_value,
                    error_estimate: err + tail_bound,
                    evaluations: adapt.evaluations,
                });
            }
            Err(_) => {
                return Err(Error::NoConvergence {
                    value: value + tail_value,
                    error_estimate: err + tail_bound,
                    target,
                    evaluations: adapt.evaluations,
                })
            }
        }
    }
}

impl QuadConfig {
    fn is_invalid(&self) -> bool {
        !(self.abs_tol > 0.0 || self.rel_tol > 0.0) || self.abs_tol < 0.0 || self.rel_tol < 0.0
    }
}
