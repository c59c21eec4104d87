//! Pass/fail records produced by the sampling verifiers.

use serde::Serialize;

/// Where a check was worst, and the value found there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub point: f64,
    pub value: f64,
}

/// One named property evaluated over a set of samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    /// Largest amount by which the property was violated (0 when it held everywhere).
    pub max_violation: f64,
    /// The sample with the smallest margin, violated or not.
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            samples: 0,
            max_violation: 0.0,
            witness: None,
            note: None,
        }
    }

    /// A check that failed before any sampling, e.g. a violated precondition.
    pub fn failed(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check {
            passed: false,
            note: Some(note.into()),
            ..Check::new(name)
        }
    }

    /// Record a sample whose property holds iff `margin ≥ −slack`.
    pub fn record(&mut self, point: f64, margin: f64, slack: f64) {
        self.samples += 1;
        let worst = self.witness.map_or(f64::INFINITY, |w| w.value);
        let violation = (-margin).max(0.0);
        if !(margin >= -slack) {
            self.passed = false;
        }
        if margin.is_nan() {
            self.max_violation = f64::NAN;
            self.witness = Some(Witness { point, value: margin });
            return;
        }
        if violation > self.max_violation {
            self.max_violation = violation;
        }
        if self.witness.is_none() || margin < worst {
            self.witness = Some(Witness { point, value: margin });
        }
    }
}

/// A list of checks; passes iff all of them pass.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sample `margin` at `points` evenly spaced points of `[lo, hi]`; the
/// property is `margin ≥ −slack`. Near-zero samples (within `10·slack`) get
/// a golden-section search for the minimum on the neighbouring cells.
pub fn scan<F>(check: &mut Check, lo: f64, hi: f64, points: usize, slack: f64, margin: F)
where
    F: Fn(f64) -> f64,
{
    let n = points.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect();
    let vals: Vec<f64> = xs.iter().map(|&x| margin(x)).collect();
    for (i, (&x, &v)) in xs.iter().zip(&vals).enumerate() {
        check.record(x, v, slack);
        if v.is_finite() && v < 10.0 * slack && n > 2 {
            let a = xs[i.saturating_sub(1)];
            let b = xs[(i + 1).min(n - 1)];
            let (xm, vm) = golden_min(&margin, a, b, 60);
            check.record(xm, vm, slack);
        }
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    [(a, fa), (b, fb), (c, fc), (d, fd)]
        .into_iter()
        .fold((c, fc), |best, cur| if cur.1 < best.1 { cur } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refinement_finds_dip_between_samples() {
        // minimum centred between two grid points
        let f = |x: f64| (x - 0.505).powi(2) * 1e-8 - 1e-12;
        let mut c = Check::new("dip");
        scan(&mut c, 0.0, 1.0, 101, 1e-13, f);
        assert!(!c.passed);
        let w = c.witness.unwrap();
        assert!((w.point - 0.505).abs() < 1e-6);
    }

    #[test]
    fn positive_function_passes() {
        let mut c = Check::new("pos");
        scan(&mut c, -1.0, 1.0, 1000, 1e-12, |x| x * x);
        assert!(c.passed);
        assert_eq!(c.max_violation, 0.0);
    }

    #[test]
    fn nan_fails() {
        let mut c = Check::new("nan");
        c.record(1.0, f64::NAN, 1e-12);
        assert!(!c.passed);
    }
}
