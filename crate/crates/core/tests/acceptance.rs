//! Acceptance run: one PASS/FAIL line per criterion. Criterion 7 (the li
//! sandwich) is a known failure; the run exits non-zero only if any other
//! criterion fails or criterion 7 unexpectedly starts passing.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use selberg_bounds::bounds::{
    constant_a, kiss_upper_bound, surface_kiss_constant, DimensionConstants, Estimate, ExternalConstants,
    LowerConstants, ManifoldParams, TanhVariant, UpperConstants, VolumeChain,
};
use selberg_bounds::cli::verify;
use selberg_bounds::fuchsian::{length_spectrum, load_group, validate_bounds, GroupSpec, Spectrum, SpectrumConfig};
use selberg_bounds::numerics::{bspline_eval, li_sandwich, LiConvention};
use selberg_bounds::Result;

const EXPECTED_FAILURES: &[u32] = &[7];

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn criterion(id: u32, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    let o = Outcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    };
    println!(
        "[{}] {}. {} ({:.2}s): {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.name,
        o.elapsed.as_secs_f64(),
        o.detail
    );
    o
}

fn surface_constant() -> Result<(bool, String)> {
    let start = Instant::now();
    let eps = 2.0 * 1f64.asinh();
    let pi_r = surface_kiss_constant(eps, 1e-9, TanhVariant::TanhPiR)?;
    let plain = surface_kiss_constant(eps, 1e-9, TanhVariant::TanhR)?;
    let u = 2.0 * PI * pi_r.value;
    let ok = (pi_r.value - 10.1391).abs() <= 5e-4 && (u - 63.71).abs() <= 0.01 && start.elapsed().as_secs_f64() < 5.0;
    Ok((
        ok,
        format!(
            "C' = {:.6} (tanh(pi r)), U = {u:.4}; the tanh(r) integrand gives {:.6} (U = {:.4})",
            pi_r.value,
            plain.value,
            2.0 * PI * plain.value
        ),
    ))
}

/// `g(0)` of the 4-fold indicator convolution from a grid: on `N` cells the
/// two-fold convolution is the triangle sampled at the nodes, and the
/// centre of its self-convolution is a trapezoid sum. The error is exactly
/// quadratic in the cell width, so one Richardson step removes it.
fn grid_g0(a: f64, cells: usize) -> f64 {
    let h = 2.0 * a / cells as f64;
    let tri: Vec<f64> = (0..2 * cells - 1)
        .map(|k| h * (k + 1).min(2 * cells - 1 - k) as f64)
        .collect();
    let centre = 2 * cells - 2;
    (0..=centre).map(|k| tri[k] * tri[centre - k]).sum::<f64>() * h
}

fn g0_cross_check() -> Result<(bool, String)> {
    let s = 1f64.asinh();
    let a = s / 2.0;
    let g0 = bspline_eval(4, a, 0.0);
    let coarse = grid_g0(a, 4000);
    let fine = grid_g0(a, 8000);
    let grid = (4.0 * fine - coarse) / 3.0;
    let closed = 2.0 * s.powi(3) / 3.0;
    let prefactor = 2.0 * 16.0 / g0;
    let target = 48.0 / s.powi(3);
    let ok =
        (g0 - grid).abs() <= 1e-8 && (g0 - closed).abs() <= 1e-10 && ((prefactor - target) / target).abs() <= 1e-12;
    Ok((
        ok,
        format!(
            "g(0) = {g0:.15}, grid {grid:.15}, 2 asinh(1)^3/3 = {closed:.15}; 32/g(0) - 48/asinh(1)^3 = {:.2e} (relative)",
            (prefactor - target) / target
        ),
    ))
}

fn fourier() -> Result<(bool, String)> {
    let start = Instant::now();
    let r = verify::fourier(2024)?;
    let worst = r
        .detail
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(|d| d["max_deviation"].as_f64())
        .fold(0.0f64, f64::max);
    let secs = start.elapsed().as_secs_f64();
    Ok((
        r.passed && secs < 60.0,
        format!("4 pairs and 6 composite kernels, 100 random xi each; worst composite deviation {worst:.2e}"),
    ))
}

fn signs() -> Result<(bool, String)> {
    let r = verify::signs()?;
    let mut violations = 0;
    let mut samples = 0;
    let mut worst = 0.0f64;
    for rep in r.detail.as_array().into_iter().flatten() {
        for c in rep["checks"].as_array().into_iter().flatten() {
            violations += u64::from(c["passed"] != true);
            worst = worst.max(c["max_violation"].as_f64().unwrap_or(f64::INFINITY));
            samples += c["samples"].as_u64().unwrap_or(0);
        }
    }
    let families = r.detail.as_array().map_or(0, Vec::len);
    Ok((
        r.passed && violations == 0,
        format!(
            "{families} kernel families, {samples} samples, {violations} failing checks, largest violation {worst:e}"
        ),
    ))
}

fn holonomy() -> Result<(bool, String)> {
    let r = verify::holonomy(10_000, 42)?;
    let identity = r
        .detail
        .as_array()
        .and_then(|a| a.last())
        .map(|v| v["surface identity"]["max_deviation"].clone());
    Ok((
        r.passed,
        format!(
            "10^4 samples for each n = 2..7; surface identity max deviation {}",
            identity.unwrap_or_default()
        ),
    ))
}

fn bolza_spec() -> GroupSpec {
    let text = include_str!("../../../config/bolza.json");
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    serde_json::from_value(v["groups"][0].clone()).unwrap()
}

fn bolza() -> Result<(bool, String)> {
    let start = Instant::now();
    let group = load_group(&bolza_spec())?;
    let run = |depth| -> Result<Spectrum> {
        length_spectrum(
            &group,
            &SpectrumConfig {
                l_max: 8.0,
                depth,
                trace_cap: Some(2.0 * 4f64.cosh()),
                ..SpectrumConfig::default()
            },
        )
    };
    let (s12, s13) = (run(12)?, run(13)?);
    let (a, b) = (s12.systole.unwrap_or(f64::NAN), s13.systole.unwrap_or(f64::NAN));
    let stable = (a - 3.05714).abs() <= 1e-5 && (b - 3.05714).abs() <= 1e-5 && (a - b).abs() <= 1e-5;

    let ext = ExternalConstants::default().set(
        2,
        DimensionConstants {
            w: Some(3.0 / (4.0 * PI)),
            ..Default::default()
        },
    );
    let vol = 4.0 * PI;
    let params = ManifoldParams::new(2, vol, b, 0.5)?;
    let grid = [4.0, 5.0, 6.0, 7.0, 8.0];
    let v = validate_bounds(&s13, &params, &ext, &grid)?;
    let kiss = v.kiss.verdict.map(|k| k.observed).unwrap_or(f64::NAN);
    let kiss_bound = kiss_upper_bound(&params, &ext)?.value.unwrap_or(f64::NAN);
    let evaluated = v
        .cumulative
        .iter()
        .filter(|c| c.upper.is_some() && c.observed.is_some())
        .count();
    let secs = start.elapsed().as_secs_f64();
    Ok((
        stable && v.passed() && evaluated == grid.len() && kiss <= kiss_bound && secs < 300.0,
        format!(
            "systole {a:.10} (depth 12), {b:.10} (depth 13); kiss {kiss} <= {kiss_bound:.2}; \
             cumulative counts inside both bounds at {evaluated} lengths; {} failures",
            v.failures.len()
        ),
    ))
}

fn li() -> Result<(bool, String)> {
    let mut ok = true;
    let mut failing = Vec::new();
    for &x in &verify::LI_POINTS {
        for conv in [LiConvention::Standard, LiConvention::OffsetFromTwo] {
            let c = li_sandwich(x, conv)?;
            if conv == LiConvention::Standard {
                ok &= c.holds();
            }
            if !c.holds() {
                let side = if c.lower_holds { "upper" } else { "lower" };
                failing.push(format!(
                    "{x:e} {side} ({conv:?}: li = {:.4}, bounds [{:.4}, {:.4}])",
                    c.li, c.lower, c.upper
                ));
            }
        }
    }
    Ok((ok, format!("fails at {}", failing.join("; "))))
}

fn stable(name: String, coarse: Estimate, fine: Estimate, out: &mut Vec<String>) -> bool {
    let ok = (coarse.value - fine.value).abs() <= coarse.error;
    if !ok {
        out.push(format!(
            "{name}: |{} - {}| > {:e}",
            coarse.value, fine.value, coarse.error
        ));
    }
    ok
}

fn convergence() -> Result<(bool, String)> {
    let (tc, tf) = (1e-8, 1e-9);
    let mut bad = Vec::new();
    let mut count = 0;
    let mut ok = true;
    for n in 2..=7 {
        ok &= stable(format!("A_{n}"), constant_a(n, tc)?, constant_a(n, tf)?, &mut bad);
        count += 1;
    }
    let eps = 2.0 * 1f64.asinh();
    for v in [TanhVariant::TanhPiR, TanhVariant::TanhR] {
        ok &= stable(
            format!("C' {v:?}"),
            surface_kiss_constant(eps, tc, v)?,
            surface_kiss_constant(eps, tf, v)?,
            &mut bad,
        );
        count += 1;
    }
    let ext = |tol| {
        ExternalConstants::default()
            .set(
                2,
                DimensionConstants {
                    w: Some(3.0 / (4.0 * PI)),
                    ..Default::default()
                },
            )
            .with_tol(tol)
    };
    let (ec, ef) = (ext(tc), ext(tf));
    let (uc, uf) = (
        UpperConstants::compute(2, 0.5, &ec)?,
        UpperConstants::compute(2, 0.5, &ef)?,
    );
    for (name, c, f) in [
        ("I", uc.i, uf.i),
        ("B", uc.b, uf.b),
        ("F", uc.f, uf.f),
        ("B'", uc.b_prime, uf.b_prime),
    ] {
        ok &= stable(name.into(), c, f, &mut bad);
        count += 1;
    }
    let (lc, lf) = (
        LowerConstants::compute(2, 0.5, &ec)?,
        LowerConstants::compute(2, 0.5, &ef)?,
    );
    for (name, c, f) in [
        ("I_delta", lc.i, lf.i),
        ("C", lc.c, lf.c),
        ("D", lc.d, lf.d),
        ("C'", lc.c_prime, lf.c_prime),
        ("D'", lc.d_prime, lf.d_prime),
    ] {
        ok &= stable(name.into(), c, f, &mut bad);
        count += 1;
    }
    let (vc, vf) = (VolumeChain::compute(2, &ec)?, VolumeChain::compute(2, &ef)?);
    for (name, c, f) in [
        ("b_n", vc.b_n, vf.b_n),
        ("c_n", vc.c_n, vf.c_n),
        ("A''_n", vc.a_double_prime, vf.a_double_prime),
    ] {
        ok &= stable(name.into(), c, f, &mut bad);
        count += 1;
    }
    let detail = if bad.is_empty() {
        format!("{count} constants stable from tol 1e-8 to 1e-9")
    } else {
        bad.join("; ")
    };
    Ok((ok, detail))
}

fn main() {
    let outcomes = [
        criterion(1, "surface kissing constant", surface_constant),
        criterion(2, "g(0) closed form", g0_cross_check),
        criterion(3, "Fourier duality", fourier),
        criterion(4, "sign conditions", signs),
        criterion(5, "holonomy determinant bounds", holonomy),
        criterion(6, "Bolza validation", bolza),
        criterion(7, "li sandwich", li),
        criterion(8, "quadrature convergence", convergence),
    ];
    let unexpected: Vec<u32> = outcomes
        .iter()
        .filter(|o| o.passed == EXPECTED_FAILURES.contains(&o.id))
        .map(|o| o.id)
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!(
        "{passed}/{} criteria pass; known failures: {EXPECTED_FAILURES:?}",
        outcomes.len()
    );
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
