use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real 2×2 matrix `[[a, b], [c, d]]`, acting on the upper half-plane by
/// `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl From<[f64; 4]> for Mat2 {
    fn from(m: [f64; 4]) -> Self {
        Mat2::new(m[0], m[1], m[2], m[3])
    }
}

impl From<Mat2> for [f64; 4] {
    fn from(m: Mat2) -> Self {
        m.to_row_major()
    }
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn to_row_major(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    pub fn scale(self, k: f64) -> Self {
        Mat2::new(k * self.a, k * self.b, k * self.c, k * self.d)
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(self) -> Self {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn pow(self, k: u32) -> Self {
        let mut out = Mat2::IDENTITY;
        let mut base = self;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = out * base;
            }
            base = base * base;
            e >>= 1;
        }
        out
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// Entrywise distance in PSL(2, ℝ): `min(|M − O|, |M + O|)` in the max norm.
    pub fn distance_pm(self, o: Mat2) -> f64 {
        let minus = (self.a - o.a)
            .abs()
            .max((self.b - o.b).abs())
            .max((self.c - o.c).abs())
            .max((self.d - o.d).abs());
        let plus = (self.a + o.a)
            .abs()
            .max((self.b + o.b).abs())
            .max((self.c + o.c).abs())
            .max((self.d + o.d).abs());
        minus.min(plus)
    }

    /// `cosh d(i, M·i) = (a² + b² + c² + d²)/2` for `det M = 1`.
    pub fn cosh_displacement(self) -> f64 {
        0.5 * (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d)
    }

    pub fn displacement(self) -> f64 {
        self.cosh_displacement().max(1.0).acosh()
    }

    pub fn is_hyperbolic(self) -> bool {
        self.trace().abs() > 2.0
    }

    /// `ℓ = 2 arccosh(|tr|/2)` for hyperbolic elements.
    pub fn translation_length(self) -> Option<f64> {
        let t = self.trace().abs();
        (t > 2.0).then(|| 2.0 * (t / 2.0).acosh())
    }

    /// Hyperbolic distance from `i` to the axis of a hyperbolic element.
    pub fn axis_distance(self) -> Option<f64> {
        let l = self.translation_length()?;
        let half = ((self.cosh_displacement() - 1.0).max(0.0) / 2.0).sqrt();
        Some((half / (l / 2.0).sinh()).max(1.0).acosh())
    }

    /// Fixed points on `ℝ ∪ {∞}` (repelling, attracting) of a hyperbolic
    /// element; `None` stands for `∞`.
    pub fn fixed_points(self) -> Option<(Option<f64>, Option<f64>)> {
        if !self.is_hyperbolic() {
            return None;
        }
        // normalise to positive trace so the attracting eigenvalue is the larger one
        let m = if self.trace() < 0.0 { -self } else { self };
        let disc = (m.trace() * m.trace() - 4.0).sqrt();
        let lam_big = (m.trace() + disc) / 2.0;
        let lam_small = (m.trace() - disc) / 2.0;
        // eigenvector (b, λ − a) or (λ − d, c), whichever is better conditioned
        let point = |lam: f64| -> Option<f64> {
            let (x1, y1) = (m.b, lam - m.a);
            let (x2, y2) = (lam - m.d, m.c);
            let (x, y) = if x1.hypot(y1) >= x2.hypot(y2) {
                (x1, y1)
            } else {
                (x2, y2)
            };
            (y != 0.0).then(|| x / y)
        };
        Some((point(lam_small), point(lam_big)))
    }

    /// `M·i` in the upper half-plane, as `(x, y)`.
    pub fn orbit_point(self) -> (f64, f64) {
        let den = self.c * self.c + self.d * self.d;
        ((self.a * self.c + self.b * self.d) / den, 1.0 / den)
    }

    pub fn check_finite(self) -> Result<Self> {
        if self.to_row_major().iter().all(|x| x.is_finite()) {
            Ok(self)
        } else {
            Err(Error::Group(format!("non-finite matrix entry in {self}")))
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}
