//! Verification suites. Each returns a pass/fail verdict and JSON detail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::output::to_value;
use crate::bounds::{epsilon_n, li_ratio, ExternalConstants, ManifoldParams};
use crate::error::{Error, Result};
use crate::fuchsian::{length_spectrum, validate_bounds, Completeness, Group, SpectrumConfig};
use crate::geometry::{holonomy_bounds_check, surface_identity};
use crate::numerics::{li_sandwich, LiConvention, QuadConfig};
use crate::report::Report;
use crate::trace_kernels::{KernelFamily, SignGrid};
use crate::transform_pairs::{make_bump_pair, AdmissibilityGrid, BumpPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Admissibility,
    Signs,
    Fourier,
    Holonomy,
    Li,
    Bounds,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Admissibility, Signs, Fourier, Holonomy, Li, Bounds],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Admissibility => "admissibility",
            Suite::Signs => "signs",
            Suite::Fourier => "fourier",
            Suite::Holonomy => "holonomy",
            Suite::Li => "li",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub passed: bool,
    pub detail: Value,
}

fn from_reports(suite: &'static str, reports: &[Report]) -> Result<SuiteResult> {
    Ok(SuiteResult {
        suite,
        passed: reports.iter().all(Report::passed),
        detail: to_value(&reports)?,
    })
}

fn surface_epsilon() -> f64 {
    2.0 * 1f64.asinh()
}

/// The pairs the bounds are built from, plus a spread of others.
pub fn admissibility_pairs() -> Vec<(u32, f64)> {
    let mut v: Vec<(u32, f64)> = (2..=7).map(|n| (n, epsilon_n(n))).collect();
    v.extend([
        (2, surface_epsilon()),
        (2, 1.0),
        (3, 0.5),
        (3, 1.0),
        (4, 0.5),
        (5, 1.0),
        (6, 0.5),
        (7, 1.0),
    ]);
    v
}

pub fn admissibility() -> Result<SuiteResult> {
    let grid = AdmissibilityGrid::default();
    let reports = admissibility_pairs()
        .into_iter()
        .map(|(n, e)| Ok(make_bump_pair(n, e)?.verify_admissibility(&grid)))
        .collect::<Result<Vec<_>>>()?;
    from_reports("admissibility", &reports)
}

/// Kernel families in the shapes the kissing and counting arguments use:
/// shifted kernels at the systole scale, and both cosine families at δ = 0.5.
pub fn sign_families() -> Result<Vec<KernelFamily>> {
    let mut out = Vec::new();
    let surface = make_bump_pair(2, surface_epsilon())?;
    for r in [surface.epsilon, 2.5, 3.0571418390] {
        out.push(KernelFamily::kiss_shift(surface, r)?);
    }
    for n in 2..=5 {
        let p = make_bump_pair(n, epsilon_n(n))?;
        for r in [p.epsilon, 0.1, 1.0] {
            out.push(KernelFamily::kiss_shift(p, r)?);
        }
    }
    for n in 2..=4 {
        let wide = make_bump_pair(n, 1.0)?;
        let narrow = make_bump_pair(n, 0.5)?;
        for l in [0.5, 2.0, 4.0, 8.0] {
            out.push(KernelFamily::cos_minus_one(wide, l)?);
            out.push(KernelFamily::one_plus_cos(narrow, l)?);
        }
    }
    Ok(out)
}

pub fn signs() -> Result<SuiteResult> {
    let grid = SignGrid::default();
    let reports: Vec<Report> = sign_families()?
        .iter()
        .map(|f| f.verify_sign_conditions(&grid))
        .collect();
    from_reports("signs", &reports)
}

pub const FOURIER_TOL: f64 = 1e-7;
pub const FOURIER_XI_MAX: f64 = 50.0;

pub fn fourier_pairs() -> Result<Vec<BumpPair>> {
    [(2, surface_epsilon()), (3, 0.5), (4, 1.0), (5, 0.7)]
        .into_iter()
        .map(|(n, e)| make_bump_pair(n, e))
        .collect()
}

pub fn random_xis(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| rng.random_range(-FOURIER_XI_MAX..=FOURIER_XI_MAX))
        .collect()
}

pub fn fourier(seed: u64) -> Result<SuiteResult> {
    let mut detail = Vec::new();
    let mut passed = true;
    for (i, p) in fourier_pairs()?.into_iter().enumerate() {
        let xis = random_xis(100, seed.wrapping_add(i as u64));
        let r = p.fourier_check(&xis, FOURIER_TOL)?;
        passed &= r.passed();
        detail.push(to_value(&r)?);
    }
    let cfg = QuadConfig::absolute(FOURIER_TOL * 1e-2);
    for n in [2u32, 3] {
        let p = make_bump_pair(n, 0.8)?;
        let xis = random_xis(100, seed.wrapping_add(100 + n as u64));
        for f in [
            KernelFamily::kiss_shift(p, 1.7)?,
            KernelFamily::cos_minus_one(p, 2.3)?,
            KernelFamily::one_plus_cos(p, 0.5)?,
        ] {
            let dev = f.fourier_deviation(&xis, &cfg)?;
            passed &= dev <= FOURIER_TOL;
            detail.push(json!({
                "family": f.kind, "n": n, "epsilon": p.epsilon, "shift": f.shift,
                "max_deviation": dev, "passed": dev <= FOURIER_TOL,
            }));
        }
    }
    Ok(SuiteResult {
        suite: "fourier",
        passed,
        detail: to_value(&detail)?,
    })
}

pub const SURFACE_IDENTITY_TOL: f64 = 1e-12;

pub fn holonomy(trials: usize, seed: u64) -> Result<SuiteResult> {
    let mut detail = Vec::new();
    let mut passed = true;
    for n in 2..=7u32 {
        let r = holonomy_bounds_check(n, trials, seed.wrapping_add(n as u64))?;
        passed &= r.passed();
        detail.push(to_value(&r)?);
    }
    let mut worst = 0.0f64;
    for i in 1..=200 {
        let s = surface_identity(0.05 * i as f64)?;
        worst = worst.max((s.factor - s.sinh_form).abs());
    }
    let ok = worst <= SURFACE_IDENTITY_TOL;
    passed &= ok;
    detail.push(json!({"surface identity": {"lengths": "0.05..10", "max_deviation": worst, "passed": ok}}));
    Ok(SuiteResult {
        suite: "holonomy",
        passed,
        detail: Value::Array(detail),
    })
}

pub const LI_POINTS: [f64; 5] = [11.0, 1e2, 1e4, 1e6, 1e8];

/// The two-sided sandwich at each point, under both conventions. The suite
/// passes only if it holds everywhere under the standard convention. The
/// ratio constant the count bounds actually use is reported alongside.
pub fn li() -> Result<SuiteResult> {
    let mut checks = Vec::new();
    let mut passed = true;
    for &x in &LI_POINTS {
        for conv in [LiConvention::Standard, LiConvention::OffsetFromTwo] {
            let c = li_sandwich(x, conv)?;
            if conv == LiConvention::Standard {
                passed &= c.holds();
            }
            checks.push(to_value(&c)?);
        }
    }
    let ratios = [6.0, 9.0, 12.0]
        .into_iter()
        .map(|t0| to_value(&li_ratio(t0)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteResult {
        suite: "li",
        passed,
        detail: json!({"sandwich": checks, "ratio_constants": ratios}),
    })
}

pub const BOUNDS_DELTA: f64 = 0.5;
pub const BOUNDS_GRID: [f64; 5] = [4.0, 5.0, 6.0, 7.0, 8.0];

/// Enumerate the group's spectrum past the last window and check every bound on it.
pub fn bounds(group: &Group, cfg: &SpectrumConfig, ext: &ExternalConstants) -> Result<SuiteResult> {
    let vol = group
        .volume
        .or_else(|| group.gauss_bonnet_area())
        .ok_or_else(|| Error::Config(format!("group {:?} needs a volume for the bounds suite", group.label)))?;
    let l_max = BOUNDS_GRID[BOUNDS_GRID.len() - 1] + BOUNDS_DELTA;
    let cfg = SpectrumConfig { l_max, ..*cfg };
    let spectrum = length_spectrum(group, &cfg)?;
    let sys = spectrum
        .systole
        .ok_or_else(|| Error::domain("no closed geodesics below the length cap"))?;
    let params = ManifoldParams::new(2, vol, sys, BOUNDS_DELTA)?;
    let v = validate_bounds(&spectrum, &params, ext, &BOUNDS_GRID)?;
    let complete = !matches!(spectrum.completeness, Completeness::Heuristic { .. });
    Ok(SuiteResult {
        suite: "bounds",
        passed: v.passed() && complete,
        detail: json!({
            "completeness": to_value(&spectrum.completeness)?,
            "elements": spectrum.elements,
            "validation": to_value(&v)?,
        }),
    })
}
