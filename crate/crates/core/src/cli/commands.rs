use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::config::Config;
use super::output::to_value;
use super::verify::{self, Suite, SuiteResult};
use crate::bounds::{
    constant_a, corollary_volume_bound, cumulative_lower, cumulative_upper, epsilon_n, interval_count_lower,
    interval_count_upper, kiss_upper_bound, surface_constant_report, surface_kiss_constant, BoundReport,
    ExternalConstants, LowerConstants, ManifoldParams, TanhVariant, UpperConstants, VolumeChain,
};
use crate::error::{Error, Result};
use crate::fuchsian::{length_spectrum, Completeness, Truncation};

/// A rendered report and whether the command succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, ok: true }
    }
}

/// Parse `x`, `k·asinh(y)` or `k asinh y` forms such as `2asinh1`.
pub fn parse_scalar(s: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot parse {s:?} as a number or k*asinh(y)"));
    let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (k, rest) = t.split_once("asinh").ok_or_else(bad)?;
    let k = if k.is_empty() {
        1.0
    } else {
        k.parse::<f64>().map_err(|_| bad())?
    };
    let arg = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    let y = arg.parse::<f64>().map_err(|_| bad())?;
    Ok(k * y.asinh())
}

/// Run a fallible constant computation; a missing cited constant becomes an
/// explanation instead of an error.
fn or_unavailable(r: Result<Value>) -> Result<Value> {
    match r {
        Ok(v) => Ok(v),
        Err(e @ Error::MissingConstant { .. }) => Ok(json!({ "unavailable": e.to_string() })),
        Err(e) => Err(e),
    }
}

fn report_value(r: Result<BoundReport>) -> Result<Value> {
    or_unavailable(r.and_then(|b| to_value(&b)))
}

pub fn constants(cfg: &Config, n: u32, delta: f64, epsilon: Option<f64>, tol: Option<f64>) -> Result<Outcome> {
    let ext = cfg.external_constants(tol);
    let mut out = Map::new();
    out.insert("n".into(), json!(n));
    out.insert("tol".into(), json!(ext.tol));
    out.insert("delta".into(), json!(delta));
    out.insert("eps_n".into(), json!(epsilon_n(n)));
    out.insert("A_n".into(), to_value(&constant_a(n, ext.tol)?)?);

    if n == 2 {
        let eps = epsilon.unwrap_or(2.0 * 1f64.asinh());
        let surface = if (eps - 2.0 * 1f64.asinh()).abs() <= 1e-12 {
            to_value(&surface_constant_report(ext.tol)?)?
        } else {
            let mut m = Map::new();
            m.insert("epsilon".into(), json!(eps));
            for (name, v) in [("tanh(pi r)", TanhVariant::TanhPiR), ("tanh(r)", TanhVariant::TanhR)] {
                let c = surface_kiss_constant(eps, ext.tol, v)?;
                m.insert(format!("C'({name})"), to_value(&c)?);
                m.insert(format!("U({name})"), to_value(&c.scale(2.0 * std::f64::consts::PI))?);
            }
            Value::Object(m)
        };
        out.insert("surface".into(), surface);
    } else if epsilon.is_some() {
        out.insert(
            "surface".into(),
            json!({"unavailable": "the surface constant is defined for n = 2 only"}),
        );
    }

    out.insert(
        "upper".into(),
        or_unavailable(UpperConstants::compute(n, delta, &ext).and_then(|c| to_value(&c)))?,
    );
    out.insert(
        "lower".into(),
        or_unavailable(LowerConstants::compute(n, delta, &ext).and_then(|c| to_value(&c)))?,
    );
    out.insert(
        "volume_chain".into(),
        or_unavailable(VolumeChain::compute(n, &ext).and_then(|c| to_value(&c)))?,
    );
    Ok(Outcome::ok(Value::Object(out)))
}

fn check_volume(n: u32, vol: f64, ext: &ExternalConstants) -> Result<()> {
    if let Ok(v_n) = ext.v(n) {
        if vol < v_n {
            return Err(Error::Domain(format!(
                "vol = {vol} is below the volume lower bound v_{n} = {v_n}"
            )));
        }
    }
    Ok(())
}

pub fn bound(cfg: &Config, n: u32, vol: f64, sys: f64, delta: f64, l: Option<f64>) -> Result<Outcome> {
    let ext = cfg.external_constants(None);
    let params = ManifoldParams::new(n, vol, sys, delta)?;
    check_volume(n, vol, &ext)?;
    let mut out = Map::new();
    out.insert("params".into(), to_value(&params)?);
    out.insert("kiss".into(), to_value(&kiss_upper_bound(&params, &ext)?)?);
    out.insert(
        "kiss_volume".into(),
        report_value(corollary_volume_bound(n, vol, &ext))?,
    );
    if let Some(l) = l {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Domain(format!("L must be finite and positive, got {l}")));
        }
        let thick = sys >= 2.0 * delta;
        if !thick {
            out.insert(
                "note".into(),
                json!(format!(
                    "sys < 2 delta = {}; the count bounds assume sys >= 2 delta",
                    2.0 * delta
                )),
            );
        }
        out.insert(
            "interval_upper".into(),
            report_value(interval_count_upper(n, delta, vol, l, &ext))?,
        );
        out.insert(
            "interval_lower".into(),
            if l >= delta {
                report_value(interval_count_lower(n, delta, vol, l, &ext))?
            } else {
                json!({"unavailable": format!("L = {l} < delta = {delta}")})
            },
        );
        out.insert(
            "cumulative_upper".into(),
            report_value(cumulative_upper(n, delta, vol, l, &ext))?,
        );
        out.insert(
            "cumulative_lower".into(),
            report_value(cumulative_lower(n, delta, vol, l, &ext))?,
        );
    }
    Ok(Outcome::ok(Value::Object(out)))
}

pub struct SpectrumArgs<'a> {
    pub group: &'a str,
    pub l_max: f64,
    pub depth: Option<usize>,
    pub dir: Option<&'a Path>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

pub fn spectrum(cfg: &Config, a: &SpectrumArgs) -> Result<Outcome> {
    if !(a.l_max > 0.0) || !a.l_max.is_finite() {
        return Err(Error::Domain(format!(
            "--lmax must be finite and positive, got {}",
            a.l_max
        )));
    }
    let group = cfg.group(a.group)?;
    let s = length_spectrum(&group, &cfg.spectrum_config(a.l_max, a.depth))?;
    let complete = !matches!(s.completeness, Completeness::Heuristic { .. }) && s.truncation != Truncation::ElementCap;

    let stem = |ext: &str| a.dir.map(|d| d.join(format!("{}-spectrum.{ext}", s.label)));
    let csv_path = a.csv.clone().or_else(|| stem("csv"));
    let json_path = a.json.clone().or_else(|| stem("json"));
    let mut files = Vec::new();
    if let Some(p) = &csv_path {
        let f = std::fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        s.write_csv(std::io::BufWriter::new(f))?;
        files.push(p.display().to_string());
    }
    if let Some(p) = &json_path {
        let mut v = to_value(&s)?;
        if let Value::Object(m) = &mut v {
            m.insert("complete".into(), json!(complete));
        }
        std::fs::write(p, super::output::json_string(&v)?).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        files.push(p.display().to_string());
    }

    let kiss = s.kissing_number();
    let mut notes = s.notes.clone();
    if !complete {
        notes.push(format!(
            "enumeration incomplete: counts are trusted only up to {:.6}; rerun with a larger depth or element cap",
            s.horizon
        ));
    }
    let summary = json!({
        "group": s.label,
        "l_max": s.l_max,
        "depth": s.depth,
        "depth_reached": s.depth_reached,
        "elements": s.elements,
        "truncation": format!("{:?}", s.truncation),
        "covering_radius": s.covering_radius,
        "search_radius": s.search_radius,
        "side_pairings": s.side_pairings,
        "completeness": to_value(&s.completeness)?,
        "horizon": s.horizon,
        "complete": complete,
        "systole": s.systole,
        "kissing_number": kiss.map(|k| k.slack),
        "kissing_number_uncertain": kiss.map(|k| k.slack - k.strict),
        "distinct_lengths": s.entries.len(),
        "volume": s.volume,
        "files": files,
        "notes": notes,
    });
    Ok(Outcome {
        report: to_value(&summary)?,
        ok: complete,
    })
}

pub struct VerifyArgs<'a> {
    pub suite: Suite,
    pub group: Option<&'a str>,
    pub trials: usize,
    pub seed: u64,
}

pub fn verify(cfg: &Config, a: &VerifyArgs) -> Result<Outcome> {
    if a.suite == Suite::Bounds && a.group.is_none() {
        return Err(Error::Config("the bounds suite needs --group".into()));
    }
    let mut results: Vec<SuiteResult> = Vec::new();
    let mut skipped = Vec::new();
    for s in a.suite.expand() {
        let r = match s {
            Suite::Admissibility => verify::admissibility()?,
            Suite::Signs => verify::signs()?,
            Suite::Fourier => verify::fourier(a.seed)?,
            Suite::Holonomy => verify::holonomy(a.trials, a.seed)?,
            Suite::Li => verify::li()?,
            Suite::Bounds => match a.group {
                Some(label) => {
                    let group = cfg.group(label)?;
                    verify::bounds(&group, &cfg.spectrum_config(0.0, None), &cfg.external_constants(None))?
                }
                None => {
                    skipped.push(json!({"suite": "bounds", "reason": "no --group given"}));
                    continue;
                }
            },
            Suite::All => unreachable!("expanded above"),
        };
        results.push(r);
    }
    let ok = results.iter().all(|r| r.passed);
    let summary: Map<String, Value> = results.iter().map(|r| (r.suite.to_string(), json!(r.passed))).collect();
    let report = json!({
        "passed": ok,
        "summary": summary,
        "skipped": skipped,
        "seed": a.seed,
        "trials": a.trials,
        "suites": results,
    });
    Ok(Outcome {
        report: to_value(&report)?,
        ok,
    })
}
