//! Empirical counts from an enumerated spectrum against the proven bounds.

use serde::Serialize;

use super::spectrum::{Count, Spectrum};
use crate::bounds::{
    cumulative_lower_with, cumulative_upper_with, interval_count_lower_with, interval_count_upper_with,
    kiss_upper_bound, BoundReport, ExternalConstants, LowerConstants, ManifoldParams, UpperConstants,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountCheck {
    pub l: f64,
    pub interval: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Count>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<BoundReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl CountCheck {
    /// Lower margin `observed − bound` (strict count) and upper margin `bound − observed`
    /// (slack count); `None` where not evaluated or vacuous.
    pub fn margins(&self) -> (Option<f64>, Option<f64>) {
        let lower = self.lower.as_ref().filter(|r| !r.vacuous).and_then(|r| {
            let v = r.verdict?;
            Some(v.observed - r.value?)
        });
        let upper = self.upper.as_ref().and_then(|r| {
            let v = r.verdict?;
            Some(r.value? - v.observed)
        });
        (lower, upper)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub label: String,
    pub n: u32,
    pub vol: f64,
    pub sys: f64,
    pub delta: f64,
    pub kiss: BoundReport,
    pub windows: Vec<CountCheck>,
    pub cumulative: Vec<CountCheck>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn judge(r: &BoundReport, what: &str, l: f64, failures: &mut Vec<String>) {
    if let Some(v) = r.verdict {
        if !v.holds && !r.vacuous {
            failures.push(format!(
                "{what} at L = {l}: observed {} vs bound {}",
                v.observed,
                r.value.unwrap_or(f64::NAN)
            ));
        }
    }
}

/// Check the kissing bound and, for every `L` in `grid`, the window and
/// cumulative counts against both bounds. Upper bounds are compared with
/// the slack count, lower bounds with the strict count.
pub fn validate_bounds(
    spectrum: &Spectrum,
    params: &ManifoldParams,
    ext: &ExternalConstants,
    grid: &[f64],
) -> Result<Validation> {
    let sys = spectrum
        .systole
        .ok_or_else(|| Error::domain("the spectrum has no geodesics below its length cap"))?;
    if (params.sys - sys).abs() > 1e-6 {
        return Err(Error::domain(format!(
            "params.sys = {} differs from the enumerated systole {sys}",
            params.sys
        )));
    }
    if let Some(v) = spectrum.volume {
        if (params.vol - v).abs() > 1e-9 * v {
            return Err(Error::domain(format!(
                "params.vol = {} differs from the group volume {v}",
                params.vol
            )));
        }
    }
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let (n, vol, delta) = (params.n, params.vol, params.delta);

    let kiss_count = spectrum
        .kissing_number()
        .ok_or_else(|| Error::domain("kissing number unavailable"))?;
    let kiss = kiss_upper_bound(params, ext)?.compare(kiss_count.slack as f64);
    judge(&kiss, "kissing number", sys, &mut failures);

    let upper = match UpperConstants::compute(n, delta, ext) {
        Ok(c) => Some(c),
        Err(e @ Error::MissingConstant { .. }) => {
            notes.push(format!("upper count bounds skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let lower = match LowerConstants::compute(n, delta, ext) {
        Ok(c) => Some(c),
        Err(e @ Error::MissingConstant { .. }) => {
            notes.push(format!("lower count bounds skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let thick = sys >= 2.0 * delta;
    if !thick {
        notes.push(format!(
            "sys = {sys} < 2 delta = {}; count bounds do not apply",
            2.0 * delta
        ));
    }

    let mut windows = Vec::new();
    let mut cumulative = Vec::new();
    for &l in grid {
        let mut w = CountCheck {
            l,
            interval: [l - delta, l + delta],
            observed: None,
            lower: None,
            upper: None,
            skipped: Vec::new(),
        };
        let mut c = CountCheck {
            l,
            interval: [0.0, l],
            observed: None,
            lower: None,
            upper: None,
            skipped: Vec::new(),
        };
        if !thick {
            w.skipped.push("sys < 2 delta".into());
            c.skipped.push("sys < 2 delta".into());
            windows.push(w);
            cumulative.push(c);
            continue;
        }
        match spectrum.count(l - delta, l + delta, true) {
            Ok(count) => {
                w.observed = Some(count);
                if let Some(u) = &upper {
                    let r = interval_count_upper_with(u, vol, l).compare(count.slack as f64);
                    judge(&r, "window upper bound", l, &mut failures);
                    w.upper = Some(r);
                }
                if let Some(lc) = &lower {
                    if l >= delta {
                        let r = interval_count_lower_with(lc, vol, l)?.compare(count.strict as f64);
                        judge(&r, "window lower bound", l, &mut failures);
                        w.lower = Some(r);
                    }
                }
            }
            Err(e @ Error::BeyondHorizon { .. }) => w.skipped.push(e.to_string()),
            Err(e) => return Err(e),
        }
        match spectrum.count(0.0, l, true) {
            Ok(count) => {
                c.observed = Some(count);
                if let Some(u) = &upper {
                    let r = cumulative_upper_with(u, vol, l).compare(count.slack as f64);
                    judge(&r, "cumulative upper bound", l, &mut failures);
                    c.upper = Some(r);
                }
                if let Some(lc) = &lower {
                    let r = cumulative_lower_with(lc, vol, l).compare(count.strict as f64);
                    judge(&r, "cumulative lower bound", l, &mut failures);
                    c.lower = Some(r);
                }
            }
            Err(e @ Error::BeyondHorizon { .. }) => c.skipped.push(e.to_string()),
            Err(e) => return Err(e),
        }
        windows.push(w);
        cumulative.push(c);
    }

    Ok(Validation {
        label: spectrum.label.clone(),
        n,
        vol,
        sys,
        delta,
        kiss,
        windows,
        cumulative,
        failures,
        notes,
    })
}
