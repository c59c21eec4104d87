//! Breadth-first enumeration of group elements by word length.

use rayon::prelude::*;
use serde::Serialize;

use super::group::{Group, Word, TRACE_TOL};
use super::index::{Lookup, MatrixIndex};
use super::mat2::Mat2;
use crate::error::{Error, Result};

/// Why an enumeration stopped before running out of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    None,
    /// The next word length still produced new elements.
    Depth,
    ElementCap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallConfig {
    /// Keep only elements moving `i` at most this far; `f64::INFINITY` keeps all.
    pub radius: f64,
    pub max_word_length: usize,
    pub element_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub matrix: Mat2,
    pub cosh_displacement: f64,
    /// Index of the element this one extends by one letter (itself for the identity).
    pub parent: u32,
    pub letter: i8,
    pub depth: u16,
}

/// Distinct elements (up to sign) of word length at most `max_word_length`,
/// reached through prefixes that all stay within `radius`. Element 0 is the
/// identity.
#[derive(Debug)]
pub struct Ball {
    pub elements: Vec<Element>,
    pub radius: f64,
    pub depth_reached: usize,
    pub truncation: Truncation,
    /// Near matches in the ambiguous band, kept as distinct elements.
    pub ambiguous: usize,
    index: MatrixIndex,
}

impl Ball {
    pub fn word(&self, i: u32) -> Word {
        let mut letters = Vec::new();
        let mut k = i;
        while k != 0 {
            let e = &self.elements[k as usize];
            letters.push(e.letter);
            k = e.parent;
        }
        letters.reverse();
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lookup(&self, m: &Mat2) -> Lookup {
        self.index.lookup(m)
    }

    pub fn displacement(&self, i: u32) -> f64 {
        self.elements[i as usize].cosh_displacement.max(1.0).acosh()
    }
}

struct Candidate {
    matrix: Mat2,
    parent: u32,
    letter: i8,
}

fn expand(group: &Group, elements: &[Element], frontier: &[u32], cosh_radius: f64) -> Vec<Candidate> {
    let letters = group.letters();
    frontier
        .par_iter()
        .flat_map_iter(|&p| {
            let e = elements[p as usize];
            let last = if p == 0 { 0 } else { e.letter };
            letters
                .iter()
                .filter(move |&&l| l != -last)
                .filter_map(move |&l| {
                    let m = e.matrix * group.letter(l);
                    (m.cosh_displacement() <= cosh_radius).then_some(Candidate {
                        matrix: m,
                        parent: p,
                        letter: l,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn enumerate_ball_with(group: &Group, cfg: &BallConfig) -> Result<Ball> {
    if cfg.max_word_length == 0 {
        return Err(Error::domain("max_word_length must be at least 1"));
    }
    if !(cfg.radius > 0.0) {
        return Err(Error::domain(format!(
            "search radius must be positive, got {}",
            cfg.radius
        )));
    }
    let cosh_radius = if cfg.radius.is_finite() {
        cfg.radius.cosh()
    } else {
        f64::INFINITY
    };
    let mut ball = Ball {
        elements: vec![Element {
            matrix: Mat2::IDENTITY,
            cosh_displacement: 1.0,
            parent: 0,
            letter: 0,
            depth: 0,
        }],
        radius: cfg.radius,
        depth_reached: 0,
        truncation: Truncation::None,
        ambiguous: 0,
        index: MatrixIndex::new(),
    };
    ball.index.insert(Mat2::IDENTITY);
    let mut frontier = vec![0u32];
    for depth in 1..=cfg.max_word_length + 1 {
        if frontier.is_empty() {
            break;
        }
        // candidates come back in frontier order, so the merge is deterministic
        let candidates = expand(group, &ball.elements, &frontier, cosh_radius);
        let mut next = Vec::new();
        for c in candidates {
            match ball.index.lookup(&c.matrix) {
                Lookup::Found(_) => continue,
                Lookup::Ambiguous(..) => ball.ambiguous += 1,
                Lookup::Missing => {}
            }
            if depth > cfg.max_word_length {
                ball.truncation = Truncation::Depth;
                break;
            }
            if ball.elements.len() >= cfg.element_cap {
                ball.truncation = Truncation::ElementCap;
                break;
            }
            let tr = c.matrix.trace().abs();
            if tr < 2.0 - TRACE_TOL || tr <= 2.0 + TRACE_TOL {
                let mut w = ball.word(c.parent);
                w.0.push(c.letter);
                if tr < 2.0 - TRACE_TOL {
                    return Err(Error::Torsion {
                        word: w.to_string(),
                        trace: tr,
                    });
                }
                return Err(Error::Group(format!(
                    "parabolic element {w} (|trace| = {tr}); a cocompact group has none"
                )));
            }
            let id = ball.index.insert(c.matrix);
            ball.elements.push(Element {
                matrix: c.matrix,
                cosh_displacement: c.matrix.cosh_displacement(),
                parent: c.parent,
                letter: c.letter,
                depth: depth as u16,
            });
            next.push(id);
        }
        if ball.truncation != Truncation::None {
            break;
        }
        if !next.is_empty() {
            ball.depth_reached = depth;
        }
        frontier = next;
    }
    Ok(ball)
}

/// Every element of word length `1..=max_word_length` with `|trace| ≤ trace_cap`,
/// deduplicated up to sign, with a shortest word for each.
pub fn enumerate_ball(
    group: &Group,
    max_word_length: usize,
    trace_cap: f64,
    element_cap: usize,
) -> Result<(Vec<(Word, Mat2)>, Truncation)> {
    let ball = enumerate_ball_with(
        group,
        &BallConfig {
            radius: f64::INFINITY,
            max_word_length,
            element_cap,
        },
    )?;
    let out = (1..ball.len() as u32)
        .filter(|&i| ball.elements[i as usize].matrix.trace().abs() <= trace_cap)
        .map(|i| (ball.word(i), ball.elements[i as usize].matrix))
        .collect();
    Ok((out, ball.truncation))
}

#[cfg(test)]
mod tests {
    use super::super::group::load_group;
    use super::super::group::tests::bolza_spec;
    use super::*;

    #[test]
    fn depth_one_gives_generators_and_inverses() {
        let g = load_group(&bolza_spec()).unwrap();
        let (els, t) = enumerate_ball(&g, 1, f64::INFINITY, 1_000_000).unwrap();
        assert_eq!(els.len(), 8);
        assert_eq!(t, Truncation::Depth);
        for (w, m) in &els {
            assert_eq!(w.len(), 1);
            assert!(g.eval(w).distance_pm(*m) < 1e-15);
        }
    }

    #[test]
    fn free_group_counts_without_relations_below_half_relator() {
        // a surface relator of length 8 only identifies words of length >= 4
        let g = load_group(&bolza_spec()).unwrap();
        let (els, _) = enumerate_ball(&g, 3, f64::INFINITY, 1_000_000).unwrap();
        assert_eq!(els.len(), 8 + 8 * 7 + 8 * 49);
        for (w, m) in &els {
            assert!(w.is_reduced());
            assert!(g.eval(w).distance_pm(*m) < 1e-12);
        }
    }

    #[test]
    fn relator_halves_are_merged() {
        // each rotation of the length-8 relator equates two words of length 4;
        // the depth-5 count comes from a brute-force evaluation of all 22408 reduced words
        let g = load_group(&bolza_spec()).unwrap();
        let (els, _) = enumerate_ball(&g, 4, f64::INFINITY, 1_000_000).unwrap();
        assert_eq!(els.len(), 8 + 8 * 7 + 8 * 49 + 8 * 343 - 8);
        let (els, _) = enumerate_ball(&g, 5, f64::INFINITY, 1_000_000).unwrap();
        assert_eq!(els.len(), 22288);
    }

    #[test]
    fn trace_cap_filters() {
        let g = load_group(&bolza_spec()).unwrap();
        let (all, _) = enumerate_ball(&g, 3, f64::INFINITY, 1_000_000).unwrap();
        let (capped, _) = enumerate_ball(&g, 3, 12.0, 1_000_000).unwrap();
        assert!(capped.len() < all.len());
        assert_eq!(
            capped.len(),
            all.iter().filter(|(_, m)| m.trace().abs() <= 12.0).count()
        );
    }

    #[test]
    fn element_cap_truncates() {
        let g = load_group(&bolza_spec()).unwrap();
        let (els, t) = enumerate_ball(&g, 6, f64::INFINITY, 100).unwrap();
        assert_eq!(t, Truncation::ElementCap);
        assert_eq!(els.len(), 99);
    }

    #[test]
    fn torsion_is_detected() {
        let spec = super::super::group::GroupSpec {
            label: "torsion".into(),
            // two hyperbolic elements whose product is a rotation
            generators: vec![[2.0, 0.0, 0.0, 0.5], [0.0, -2.0, 0.5, 3.0]],
            relators: vec![],
            volume: None,
        };
        let g = load_group(&spec).unwrap();
        let e = enumerate_ball(&g, 3, f64::INFINITY, 10_000).unwrap_err();
        assert!(matches!(e, Error::Torsion { .. }), "{e}");
    }
}
