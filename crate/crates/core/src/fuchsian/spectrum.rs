//! Oriented closed geodesics as conjugacy classes of hyperbolic elements.
//!
//! Every class of length `ℓ ≤ L` has a representative whose axis passes
//! within the covering radius `R` of the Dirichlet polygon at `i`, and such a
//! representative moves `i` by at most `2 asinh(cosh R · sinh(L/2))`. Two such
//! representatives are conjugate by an element moving `i` by at most
//! `2R + ℓ/2`. Enumerating the ball that contains both sets, then testing
//! conjugacy by direct lookup, gives every class exactly once.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::dirichlet::{dirichlet_polygon, DirichletPolygon};
use super::enumerate::{enumerate_ball_with, BallConfig, Truncation};
use super::group::{Group, Word};
use super::index::{Lookup, MatrixIndex};
use super::mat2::Mat2;
use crate::error::{Error, Result};

/// Lengths closer than this are the same length.
pub const LENGTH_TOL: f64 = 1e-8;
const GEOMETRY_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub l_max: f64,
    /// Longest word the enumeration may use.
    pub depth: usize,
    pub element_cap: usize,
    /// Extra search radius beyond what the covering argument needs.
    pub search_slack: f64,
    /// Optional `|trace|` cap; lowers `l_max` to `2 arccosh(cap/2)`.
    pub trace_cap: Option<f64>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            l_max: 8.0,
            depth: 16,
            element_cap: 5_000_000,
            search_slack: 0.1,
            trace_cap: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Completeness {
    /// The search ball is exhausted and the generators pair the sides of the
    /// Dirichlet polygon, so every class up to `l_max` is present.
    Saturated,
    /// The enumeration was cut short, but no class of length `≤ l_max` first
    /// appeared at either of the last two word lengths.
    Stabilized,
    /// Counts are trusted only below `horizon`.
    Heuristic { horizon: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicClass {
    pub length: f64,
    pub word: Word,
    pub primitive: bool,
    /// `Λ(γ)`, the length of the primitive root.
    pub root_length: f64,
    /// Index of the class of `γ^{-1}`.
    pub inverse: Option<usize>,
    pub uncertain: bool,
    pub representatives: usize,
    /// Shortest word length among the representatives.
    pub first_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub length: f64,
    /// Oriented classes at this length, including uncertain ones.
    pub multiplicity: u64,
    pub primitive: bool,
    pub representative_word: Word,
    /// How many of `multiplicity` come from ambiguous conjugacy decisions.
    pub uncertain: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Count {
    /// Excluding classes with an ambiguous conjugacy decision.
    pub strict: u64,
    pub slack: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub label: String,
    pub l_max: f64,
    pub depth: usize,
    pub volume: Option<f64>,
    pub covering_radius: f64,
    pub polygon_area: f64,
    pub side_pairings: bool,
    pub search_radius: f64,
    pub elements: usize,
    pub depth_reached: usize,
    pub truncation: Truncation,
    pub completeness: Completeness,
    /// Counts of lengths up to here are complete.
    pub horizon: f64,
    pub systole: Option<f64>,
    pub entries: Vec<SpectrumEntry>,
    #[serde(skip)]
    pub classes: Vec<GeodesicClass>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

struct Candidate {
    ball_id: u32,
    matrix: Mat2,
    length: f64,
}

pub fn length_spectrum(group: &Group, cfg: &SpectrumConfig) -> Result<Spectrum> {
    if !(cfg.l_max > 0.0) || !cfg.l_max.is_finite() {
        return Err(Error::domain(format!(
            "l_max must be finite and positive, got {}",
            cfg.l_max
        )));
    }
    if cfg.depth == 0 {
        return Err(Error::domain("depth must be at least 1"));
    }
    if !(cfg.search_slack >= 0.0) {
        return Err(Error::domain(format!(
            "search_slack must be non-negative, got {}",
            cfg.search_slack
        )));
    }
    let l_max = match cfg.trace_cap {
        Some(t) if t <= 2.0 => return Err(Error::domain(format!("trace cap must exceed 2, got {t}"))),
        Some(t) => cfg.l_max.min(2.0 * (t / 2.0).acosh()),
        None => cfg.l_max,
    };
    let polygon = dirichlet_polygon(group, cfg.depth.max(40), cfg.element_cap)?;
    spectrum_with_polygon(group, cfg, l_max, &polygon)
}

fn spectrum_with_polygon(
    group: &Group,
    cfg: &SpectrumConfig,
    l_max: f64,
    polygon: &DirichletPolygon,
) -> Result<Spectrum> {
    let rd = polygon.covering_radius + GEOMETRY_SLACK;
    let rep_radius = 2.0 * (rd.cosh() * (l_max / 2.0).sinh()).asinh();
    let conj_radius = 2.0 * rd + l_max / 2.0;
    let target = rep_radius.max(conj_radius) + GEOMETRY_SLACK;
    // a tile path to any element stays within R of the geodesic to it
    let search_radius = target + rd + cfg.search_slack;
    let ball = enumerate_ball_with(
        group,
        &BallConfig {
            radius: search_radius,
            max_word_length: cfg.depth,
            element_cap: cfg.element_cap,
        },
    )?;
    let mut notes = Vec::new();
    if ball.ambiguous > 0 {
        notes.push(format!(
            "{} enumerated elements were within the ambiguous distance band of another",
            ball.ambiguous
        ));
    }

    let cosh_rep = rep_radius.cosh() * (1.0 + 1e-12);
    let mut candidates = Vec::new();
    let mut index = MatrixIndex::new();
    for (id, e) in ball.elements.iter().enumerate().skip(1) {
        if e.cosh_displacement > cosh_rep {
            continue;
        }
        let Some(length) = e.matrix.translation_length() else {
            continue;
        };
        if length > l_max + LENGTH_TOL {
            continue;
        }
        if e.matrix.axis_distance().is_some_and(|r| r <= rd + GEOMETRY_SLACK) {
            index.insert(e.matrix);
            candidates.push(Candidate {
                ball_id: id as u32,
                matrix: e.matrix,
                length,
            });
        }
    }

    let cosh_conj = (conj_radius + GEOMETRY_SLACK).cosh();
    let mut conjugators: Vec<(f64, Mat2)> = ball
        .elements
        .iter()
        .skip(1)
        .filter(|e| e.cosh_displacement <= cosh_conj)
        .map(|e| (e.cosh_displacement, e.matrix))
        .collect();
    conjugators.sort_by(|a, b| a.0.total_cmp(&b.0));

    let links: Vec<(u32, u32, bool)> = candidates
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, c)| {
            let bound = (2.0 * rd + c.length / 2.0 + 2.0 * GEOMETRY_SLACK).cosh();
            let mut out = Vec::new();
            for &(ch, h) in &conjugators {
                if ch > bound {
                    break;
                }
                match index.lookup(&(h * c.matrix * h.inverse())) {
                    Lookup::Found(j) if j as usize != i => out.push((i as u32, j, false)),
                    Lookup::Ambiguous(j, _) => out.push((i as u32, j, true)),
                    _ => {}
                }
            }
            out
        })
        .collect();

    let mut uf = UnionFind::new(candidates.len());
    let mut ambiguous = vec![false; candidates.len()];
    for &(i, j, amb) in &links {
        if amb {
            ambiguous[i as usize] = true;
            ambiguous[j as usize] = true;
        } else {
            uf.union(i, j);
        }
    }

    // one class per union-find root, represented by its earliest-found member
    let mut class_of_root = std::collections::HashMap::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    for i in 0..candidates.len() as u32 {
        let r = uf.find(i);
        let k = *class_of_root.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[k].push(i);
    }
    let mut classes: Vec<(GeodesicClass, u32)> = members
        .iter()
        .map(|m| {
            let rep = *m
                .iter()
                .min_by_key(|&&i| {
                    let id = candidates[i as usize].ball_id;
                    (ball.elements[id as usize].depth, id)
                })
                .expect("classes are non-empty");
            let c = &candidates[rep as usize];
            let first_depth = ball.elements[c.ball_id as usize].depth as usize;
            (
                GeodesicClass {
                    length: c.length,
                    word: ball.word(c.ball_id),
                    primitive: true,
                    root_length: c.length,
                    inverse: None,
                    uncertain: m.iter().any(|&i| ambiguous[i as usize]),
                    representatives: m.len(),
                    first_depth,
                },
                rep,
            )
        })
        .collect();
    classes.sort_by(|a, b| a.0.length.total_cmp(&b.0.length).then_with(|| a.0.word.cmp(&b.0.word)));
    let mut class_of_candidate = vec![0usize; candidates.len()];
    for (k, (_, rep)) in classes.iter().enumerate() {
        let root = uf.find(*rep);
        for &i in &members[class_of_root[&root]] {
            class_of_candidate[i as usize] = k;
        }
    }
    let reps: Vec<Mat2> = classes.iter().map(|(_, r)| candidates[*r as usize].matrix).collect();
    let mut classes: Vec<GeodesicClass> = classes.into_iter().map(|(c, _)| c).collect();

    let mut missing_inverse = 0;
    for k in 0..classes.len() {
        match index.lookup(&reps[k].inverse()) {
            Lookup::Found(j) => classes[k].inverse = Some(class_of_candidate[j as usize]),
            _ => missing_inverse += 1,
        }
    }
    if missing_inverse > 0 {
        notes.push(format!(
            "{missing_inverse} classes have no inverse class in the enumeration"
        ));
    }

    let mut missing_power = 0;
    for k in 0..classes.len() {
        let l0 = classes[k].length;
        let mut p = 2u32;
        while p as f64 * l0 <= l_max + LENGTH_TOL {
            match index.lookup(&reps[k].pow(p)) {
                Lookup::Found(j) => {
                    let c = &mut classes[class_of_candidate[j as usize]];
                    c.primitive = false;
                    c.root_length = c.root_length.min(l0);
                }
                _ => missing_power += 1,
            }
            p += 1;
        }
    }
    if missing_power > 0 {
        notes.push(format!("{missing_power} powers of enumerated classes were not found"));
    }

    let entries = group_entries(&classes);
    let systole = classes.first().map(|c| c.length);

    let (completeness, horizon) = if ball.truncation == Truncation::None && polygon.generated_by_side_pairings {
        (Completeness::Saturated, l_max)
    } else {
        let last = ball.depth_reached;
        let fresh = classes
            .iter()
            .filter(|c| c.first_depth + 1 >= last)
            .map(|c| c.length)
            .fold(f64::INFINITY, f64::min);
        if ball.truncation == Truncation::None {
            notes.push(
                "the generators do not pair the sides of the Dirichlet polygon; completeness is heuristic".into(),
            );
        }
        if fresh > l_max && ball.truncation != Truncation::None {
            (Completeness::Stabilized, l_max)
        } else {
            let h = fresh.min(l_max);
            (Completeness::Heuristic { horizon: h }, h)
        }
    };

    Ok(Spectrum {
        label: group.label.clone(),
        l_max,
        depth: cfg.depth,
        volume: group.volume,
        covering_radius: polygon.covering_radius,
        polygon_area: polygon.area,
        side_pairings: polygon.generated_by_side_pairings,
        search_radius,
        elements: ball.len(),
        depth_reached: ball.depth_reached,
        truncation: ball.truncation,
        completeness,
        horizon,
        systole,
        entries,
        classes,
        notes,
    })
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= LENGTH_TOL * a.abs().max(1.0)
}

fn group_entries(classes: &[GeodesicClass]) -> Vec<SpectrumEntry> {
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for c in classes {
        let existing = entries
            .iter_mut()
            .rev()
            .take_while(|e| same_length(e.length, c.length))
            .find(|e| e.primitive == c.primitive);
        match existing {
            Some(e) => {
                e.multiplicity += 1;
                e.uncertain += c.uncertain as u64;
            }
            None => entries.push(SpectrumEntry {
                length: c.length,
                multiplicity: 1,
                primitive: c.primitive,
                representative_word: c.word.clone(),
                uncertain: c.uncertain as u64,
            }),
        }
    }
    entries
}

impl Spectrum {
    fn check_horizon(&self, b: f64) -> Result<()> {
        if b > self.horizon + LENGTH_TOL {
            return Err(Error::BeyondHorizon {
                requested: b,
                horizon: self.horizon,
            });
        }
        Ok(())
    }

    fn in_range(&self, a: f64, b: f64) -> impl Iterator<Item = &GeodesicClass> {
        self.classes
            .iter()
            .filter(move |c| c.length >= a - LENGTH_TOL && c.length <= b + LENGTH_TOL)
    }

    /// Oriented classes with length in `[a, b]` (endpoints within `LENGTH_TOL`).
    pub fn count(&self, a: f64, b: f64, primitive_only: bool) -> Result<Count> {
        self.check_horizon(b)?;
        let mut n = Count { strict: 0, slack: 0 };
        if a > b {
            return Ok(n);
        }
        for c in self.in_range(a, b).filter(|c| c.primitive || !primitive_only) {
            n.slack += 1;
            n.strict += !c.uncertain as u64;
        }
        Ok(n)
    }

    /// Classes with `γ ~ γ^{-1}` merged.
    pub fn unoriented_count(&self, a: f64, b: f64, primitive_only: bool) -> Result<u64> {
        self.check_horizon(b)?;
        Ok(self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.length >= a - LENGTH_TOL && c.length <= b + LENGTH_TOL)
            .filter(|(_, c)| c.primitive || !primitive_only)
            .filter(|(k, c)| c.inverse.is_none_or(|j| j >= *k))
            .count() as u64)
    }

    /// Classes conjugate to their own inverse.
    pub fn self_inverse_count(&self, a: f64, b: f64) -> Result<u64> {
        self.check_horizon(b)?;
        Ok(self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.length >= a - LENGTH_TOL && c.length <= b + LENGTH_TOL)
            .filter(|(k, c)| c.inverse == Some(*k))
            .count() as u64)
    }

    /// Oriented classes realising the systole.
    pub fn kissing_number(&self) -> Option<Count> {
        let s = self.systole?;
        self.count(s, s, false).ok()
    }

    /// Columns `length, multiplicity, primitive, word`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["length", "multiplicity", "primitive", "word"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for e in &self.entries {
            w.write_record([
                format!("{:.12}", e.length),
                e.multiplicity.to_string(),
                e.primitive.to_string(),
                e.representative_word.to_string(),
            ])
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::group::load_group;
    use super::super::group::tests::bolza_spec;
    use super::*;

    fn bolza(l_max: f64) -> Spectrum {
        let g = load_group(&bolza_spec()).unwrap();
        length_spectrum(
            &g,
            &SpectrumConfig {
                l_max,
                ..SpectrumConfig::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn bolza_systole() {
        let s = bolza(5.0);
        assert_eq!(s.completeness, Completeness::Saturated);
        let sys = s.systole.unwrap();
        assert!((sys - 2.0 * (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-9, "{sys}");
        assert!(s.notes.is_empty(), "{:?}", s.notes);
        assert_eq!(s.count(0.0, sys - 1e-3, false).unwrap().slack, 0);
        assert_eq!(s.count(2.0, 1.0, false).unwrap().slack, 0);
    }

    #[test]
    fn orientation_and_inverse_closure() {
        let s = bolza(6.0);
        for (k, c) in s.classes.iter().enumerate() {
            let j = c.inverse.expect("inverse class present");
            assert!(same_length(s.classes[j].length, c.length));
            assert_eq!(s.classes[j].inverse, Some(k));
        }
        let sys = s.systole.unwrap();
        let oriented = s.count(sys, sys, false).unwrap().slack;
        let unoriented = s.unoriented_count(sys, sys, false).unwrap();
        let selfinv = s.self_inverse_count(sys, sys).unwrap();
        // each non-self-inverse pair is one unoriented geodesic
        assert_eq!(oriented, unoriented + (oriented - selfinv) / 2);
        assert_eq!(oriented + selfinv, 2 * unoriented);
    }

    #[test]
    fn squares_are_present_and_not_primitive() {
        let s = bolza(6.5);
        for c in s.classes.iter().filter(|c| c.primitive && 2.0 * c.length <= s.l_max) {
            assert!(s
                .classes
                .iter()
                .any(|d| !d.primitive && same_length(d.length, 2.0 * c.length)));
        }
        for c in s.classes.iter().filter(|c| !c.primitive) {
            assert!(s
                .classes
                .iter()
                .any(|d| d.primitive && same_length(d.length, c.root_length)));
        }
    }

    #[test]
    fn conjugated_generators_give_the_same_lengths() {
        let g = load_group(&bolza_spec()).unwrap();
        let h = Mat2::new(1.2, 0.3, 0.1, (1.0 + 0.03) / 1.2);
        let cfg = SpectrumConfig {
            l_max: 6.0,
            ..SpectrumConfig::default()
        };
        let a = length_spectrum(&g, &cfg).unwrap();
        let b = length_spectrum(&g.conjugated(h), &cfg).unwrap();
        assert!(!b.side_pairings);
        assert_eq!(a.classes.len(), b.classes.len());
        for (x, y) in a.classes.iter().zip(&b.classes) {
            assert!((x.length - y.length).abs() < 1e-7);
            assert_eq!(x.primitive, y.primitive);
        }
    }

    #[test]
    fn counts_stable_under_deeper_enumeration() {
        let g = load_group(&bolza_spec()).unwrap();
        let run = |depth| {
            length_spectrum(
                &g,
                &SpectrumConfig {
                    l_max: 5.0,
                    depth,
                    ..SpectrumConfig::default()
                },
            )
            .unwrap()
        };
        let (a, b) = (run(9), run(10));
        let la: Vec<_> = a.entries.iter().map(|e| (e.multiplicity, e.primitive)).collect();
        let lb: Vec<_> = b.entries.iter().map(|e| (e.multiplicity, e.primitive)).collect();
        assert_eq!(la, lb);
        let shorter = bolza(4.5);
        assert!(shorter.count(0.0, 4.5, false).unwrap().slack <= a.count(0.0, 4.5, false).unwrap().slack);
        assert_eq!(
            shorter.count(0.0, 4.5, false).unwrap(),
            a.count(0.0, 4.5, false).unwrap()
        );
    }

    #[test]
    fn beyond_horizon_is_an_error() {
        let s = bolza(4.0);
        assert!(matches!(s.count(0.0, 5.0, true), Err(Error::BeyondHorizon { .. })));
    }

    #[test]
    fn csv_columns() {
        let s = bolza(4.0);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("length,multiplicity,primitive,word\n"));
        assert_eq!(text.lines().count(), s.entries.len() + 1);
    }
}
