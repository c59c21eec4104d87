use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::mat2::Mat2;
use crate::error::{Error, Result};

/// Largest `|det − 1|` accepted before rescaling.
pub const DET_TOL: f64 = 1e-3;
/// A relator must evaluate to `±I` within this entrywise distance.
pub const RELATOR_TOL: f64 = 1e-8;
pub const TRACE_TOL: f64 = 1e-8;

/// A word in the generators. Letter `k > 0` is generator `k − 1`, `−k` its inverse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<i8>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Append a letter, cancelling it against the last one if they are inverse.
    pub fn push_reduced(&mut self, letter: i8) {
        if self.0.last() == Some(&-letter) {
            self.0.pop();
        } else {
            self.0.push(letter);
        }
    }

    pub fn reduced(&self) -> Word {
        let mut w = Word::identity();
        for &l in &self.0 {
            w.push_reduced(l);
        }
        w
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != -p[1])
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Parse `a`–`z` as generators and `A`–`Z` as their inverses.
    pub fn parse(s: &str, generators: usize) -> Result<Word> {
        let mut w = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let (idx, sign) = match ch {
                'a'..='z' => (ch as u8 - b'a', 1),
                'A'..='Z' => (ch as u8 - b'A', -1),
                _ => return Err(Error::Group(format!("bad letter {ch:?} in word {s:?}"))),
            };
            if idx as usize >= generators {
                return Err(Error::Group(format!(
                    "letter {ch:?} in {s:?} refers to generator {} of {generators}",
                    idx + 1
                )));
            }
            w.push(sign * (idx as i8 + 1));
        }
        Ok(Word(w))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            let base = if l > 0 { b'a' } else { b'A' };
            write!(f, "{}", (base + l.unsigned_abs() - 1) as char)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A group as it appears in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub label: String,
    /// Row-major `[a, b, c, d]`.
    pub generators: Vec<[f64; 4]>,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default)]
    pub volume: Option<f64>,
}

/// Validated generators, normalised to determinant one.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub label: String,
    pub generators: Vec<Mat2>,
    pub inverses: Vec<Mat2>,
    pub relators: Vec<Word>,
    pub volume: Option<f64>,
}

pub fn load_group(spec: &GroupSpec) -> Result<Group> {
    if spec.generators.is_empty() {
        return Err(Error::Group(format!("group {:?} has no generators", spec.label)));
    }
    if spec.generators.len() > 26 {
        return Err(Error::Group(format!(
            "group {:?} has more than 26 generators",
            spec.label
        )));
    }
    let mut generators = Vec::with_capacity(spec.generators.len());
    for (i, &g) in spec.generators.iter().enumerate() {
        let name = (b'a' + i as u8) as char;
        let m = Mat2::from(g).check_finite()?;
        let det = m.det();
        if !(det > 0.0) || (det - 1.0).abs() > DET_TOL {
            return Err(Error::Group(format!("generator {name} has determinant {det}")));
        }
        let m = m.scale(1.0 / det.sqrt());
        let tr = m.trace().abs();
        if tr < 2.0 - TRACE_TOL {
            return Err(Error::Group(format!("generator {name} is elliptic (|trace| = {tr})")));
        }
        if tr <= 2.0 + TRACE_TOL {
            return Err(Error::Group(format!(
                "generator {name} is not hyperbolic (|trace| = {tr}); identity and parabolic generators are not allowed"
            )));
        }
        generators.push(m);
    }
    if let Some(v) = spec.volume {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Group(format!(
                "group {:?} has non-positive volume {v}",
                spec.label
            )));
        }
    }
    let inverses = generators.iter().map(|m| m.inverse()).collect();
    let mut group = Group {
        label: spec.label.clone(),
        generators,
        inverses,
        relators: Vec::new(),
        volume: spec.volume,
    };
    for r in &spec.relators {
        let w = Word::parse(r, group.generators.len())?;
        let dist = group.eval(&w).distance_pm(Mat2::IDENTITY);
        if !(dist <= RELATOR_TOL) {
            return Err(Error::Group(format!(
                "relator {r} evaluates {dist:e} away from the identity"
            )));
        }
        group.relators.push(w);
    }
    Ok(group)
}

impl Group {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn letter(&self, l: i8) -> Mat2 {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            self.generators[i]
        } else {
            self.inverses[i]
        }
    }

    /// All letters `1, −1, 2, −2, …`.
    pub fn letters(&self) -> Vec<i8> {
        (1..=self.rank() as i8).flat_map(|k| [k, -k]).collect()
    }

    pub fn eval(&self, w: &Word) -> Mat2 {
        w.0.iter().fold(Mat2::IDENTITY, |m, &l| m * self.letter(l))
    }

    /// Conjugate every generator by `h`.
    pub fn conjugated(&self, h: Mat2) -> Group {
        let hi = h.inverse();
        let generators: Vec<Mat2> = self.generators.iter().map(|&g| h * g * hi).collect();
        Group {
            label: self.label.clone(),
            inverses: generators.iter().map(|m| m.inverse()).collect(),
            generators,
            relators: self.relators.clone(),
            volume: self.volume,
        }
    }

    /// `4π(g − 1)` for a standard surface presentation: `2g` generators and one
    /// relator of length `4g`.
    pub fn gauss_bonnet_area(&self) -> Option<f64> {
        let k = self.rank();
        match self.relators.as_slice() {
            [r] if k.is_multiple_of(2) && k >= 4 && r.len() == 2 * k => Some(4.0 * PI * (k as f64 / 2.0 - 1.0)),
            _ => None,
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn bolza_spec() -> GroupSpec {
        GroupSpec {
            label: "bolza".into(),
            generators: vec![
                [4.611_581_789_308_714_5, 0.0, 0.0, 0.216_845_335_437_475_1],
                [
                    3.967_987_536_403_132_5,
                    -1.553_773_974_030_037_4,
                    -1.553_773_974_030_037_4,
                    0.860_439_588_343_057_8,
                ],
                [
                    2.414_213_562_373_095,
                    -2.197_368_226_935_62,
                    -2.197_368_226_935_62,
                    2.414_213_562_373_095,
                ],
                [
                    0.860_439_588_343_057_8,
                    -1.553_773_974_030_037_4,
                    -1.553_773_974_030_037_4,
                    3.967_987_536_403_132_5,
                ],
            ],
            relators: vec!["aBcDAbCd".into()],
            volume: Some(4.0 * PI),
        }
    }

    #[test]
    fn bolza_fixture_loads() {
        let g = load_group(&bolza_spec()).unwrap();
        assert_eq!(g.rank(), 4);
        assert_eq!(g.relators[0].len(), 8);
        assert!((g.gauss_bonnet_area().unwrap() - 4.0 * PI).abs() < 1e-15);
        for m in &g.generators {
            assert!((m.det() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_identity_and_elliptic() {
        let mut s = bolza_spec();
        s.generators = vec![[1.0, 0.0, 0.0, 1.0]];
        s.relators.clear();
        assert!(matches!(load_group(&s), Err(Error::Group(_))));
        s.generators = vec![[0.0, -1.0, 1.0, 0.0]];
        let e = load_group(&s).unwrap_err().to_string();
        assert!(e.contains("elliptic"), "{e}");
        s.generators.clear();
        assert!(load_group(&s).is_err());
    }

    #[test]
    fn rescales_nearly_unimodular_generators() {
        let mut s = bolza_spec();
        let k = 1.0001f64.sqrt();
        for g in &mut s.generators {
            for x in g.iter_mut() {
                *x *= k;
            }
        }
        s.relators.clear();
        let g = load_group(&s).unwrap();
        for m in &g.generators {
            assert!((m.det() - 1.0).abs() < 1e-12);
        }
        s.generators[0] = [2.0, 0.0, 0.0, 2.0];
        assert!(load_group(&s).is_err());
    }

    #[test]
    fn rejects_false_relator() {
        let mut s = bolza_spec();
        s.relators = vec!["aBcDAbcD".into()];
        assert!(load_group(&s).is_err());
        s.relators = vec!["aBe".into()];
        assert!(load_group(&s).is_err());
    }

    #[test]
    fn words() {
        let w = Word::parse("abBAc", 3).unwrap();
        assert!(!w.is_reduced());
        assert_eq!(w.reduced().to_string(), "c");
        assert_eq!(Word::parse("aBc", 3).unwrap().inverse().to_string(), "CbA");
        assert_eq!(Word::identity().to_string(), "1");
    }
}
