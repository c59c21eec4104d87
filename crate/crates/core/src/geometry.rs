//! The holonomy factor `D(γ) = |det(I − N^{−1} P^{−1})|` of a closed geodesic
//! and its two-sided bound `(1 − N^{−1})^{n−1} ≤ D ≤ (1 + N^{−1})^{n−1}`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Check, Report};

pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A closed geodesic's length and its holonomy on the normal bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomySample {
    pub n: u32,
    pub length: f64,
    /// `(n−1)×(n−1)` orthogonal.
    pub rotation: DMatrix<f64>,
}

impl HolonomySample {
    pub fn new(n: u32, length: f64, rotation: DMatrix<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("holonomy needs n >= 2, got {n}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::domain(format!(
                "geodesic length must be finite and positive, got {length}"
            )));
        }
        let k = (n - 1) as usize;
        if rotation.nrows() != k || rotation.ncols() != k {
            return Err(Error::domain(format!(
                "holonomy for n = {n} must be {k}x{k}, got {}x{}",
                rotation.nrows(),
                rotation.ncols()
            )));
        }
        let defect = (rotation.transpose() * &rotation - DMatrix::identity(k, k)).amax();
        if !(defect <= ORTHOGONALITY_TOL) {
            return Err(Error::domain(format!(
                "holonomy is not orthogonal: |P^T P - I| = {defect:e}"
            )));
        }
        Ok(HolonomySample { n, length, rotation })
    }

    /// `N = e^ℓ`.
    pub fn norm(&self) -> f64 {
        norm_of_length(self.length)
    }

    /// `(1 − N^{−1})^{n−1}` and `(1 + N^{−1})^{n−1}`.
    pub fn bounds(&self) -> (f64, f64) {
        let q = (-self.length).exp();
        let k = (self.n - 1) as i32;
        ((1.0 - q).powi(k), (1.0 + q).powi(k))
    }
}

/// `N = e^ℓ`.
pub fn norm_of_length(l: f64) -> f64 {
    l.exp()
}

/// `|det(I − e^{−ℓ} Pᵀ)|`.
pub fn holonomy_factor(s: &HolonomySample) -> f64 {
    let k = s.rotation.nrows();
    let m = DMatrix::identity(k, k) - s.rotation.transpose() * (-s.length).exp();
    m.determinant().abs()
}

/// Haar-distributed orthogonal `k×k` matrix (either determinant): QR of a
/// Gaussian matrix with the columns of `Q` rescaled by the signs of `diag R`.
pub fn random_orthogonal<R: Rng + ?Sized>(k: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..k {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub const HOLONOMY_SLACK: f64 = 1e-10;

/// Draw `trials` random (length, holonomy) pairs and check the determinant
/// bounds, the triangle-inequality step of their proof on random vectors,
/// and invariance of `D` under orthogonal conjugation.
pub fn holonomy_bounds_check(n: u32, trials: usize, seed: u64) -> Result<Report> {
    if trials == 0 {
        return Err(Error::domain("holonomy check needs at least one trial"));
    }
    if n < 2 {
        return Err(Error::domain(format!("holonomy needs n >= 2, got {n}")));
    }
    let k = (n - 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(format!("holonomy n={n} trials={trials} seed={seed}"));
    let mut lower = Check::new("(1-1/N)^(n-1) <= D");
    let mut upper = Check::new("D <= (1+1/N)^(n-1)");
    let mut strict = Check::new("(1+1/N)^(n-1) < 2^(n-1)");
    let mut norms = Check::new("(1-1/N)|v| <= |(I - P^-1/N) v| <= (1+1/N)|v|");
    let mut conj = Check::new("D invariant under orthogonal conjugation");
    let top = 2f64.powi(k as i32);
    for _ in 0..trials {
        let length = rng.random_range(0.01..10.0);
        let p = random_orthogonal(k, &mut rng);
        let s = HolonomySample::new(n, length, p)?;
        let d = holonomy_factor(&s);
        let (lo, hi) = s.bounds();
        lower.record(length, d - lo, HOLONOMY_SLACK);
        upper.record(length, hi - d, HOLONOMY_SLACK);
        strict.record(length, top - hi, 0.0);
        if top - hi == 0.0 {
            strict.passed = false;
        }

        let q = (-length).exp();
        let m = DMatrix::identity(k, k) - s.rotation.transpose() * q;
        for _ in 0..100 {
            let v = DVector::from_fn(k, |_, _| rng.sample::<f64, _>(StandardNormal));
            let nv = v.norm();
            let nm = (&m * &v).norm();
            norms.record(
                length,
                (nm - (1.0 - q) * nv).min((1.0 + q) * nv - nm),
                HOLONOMY_SLACK * nv,
            );
        }

        let o = random_orthogonal(k, &mut rng);
        let conjugated = HolonomySample::new(n, length, &o * &s.rotation * o.transpose())?;
        conj.record(length, -(holonomy_factor(&conjugated) - d).abs(), HOLONOMY_SLACK);
    }
    for c in [lower, upper, strict, norms, conj] {
        report.push(c);
    }
    Ok(report)
}

/// `D` for the identity holonomy of a surface geodesic, and the quantity
/// `2 sinh(ℓ/2) e^{−ℓ/2}` it should equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceIdentity {
    pub length: f64,
    pub factor: f64,
    pub sinh_form: f64,
}

pub fn surface_identity(length: f64) -> Result<SurfaceIdentity> {
    let s = HolonomySample::new(2, length, DMatrix::identity(1, 1))?;
    Ok(SurfaceIdentity {
        length,
        factor: holonomy_factor(&s),
        sinh_form: 2.0 * (length / 2.0).sinh() * (-length / 2.0).exp(),
    })
}
