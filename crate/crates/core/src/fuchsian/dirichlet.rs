//! The Dirichlet polygon at `i`, computed in the Klein model where
//! perpendicular bisectors are straight lines.

use serde::Serialize;

use super::enumerate::{enumerate_ball_with, BallConfig};
use super::group::{Group, Word};
use crate::error::{Error, Result};

/// Klein-model edges shorter than this are dropped.
const EDGE_EPS: f64 = 1e-9;
const MAX_SEARCH: f64 = 18.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletPolygon {
    /// Vertices in the Klein disk, counter-clockwise.
    pub vertices: Vec<[f64; 2]>,
    /// For each edge `vertices[k] → vertices[k+1]`, the element whose
    /// orbit point it bisects against.
    pub side_words: Vec<Word>,
    /// `max_x d(i, x)` over the polygon.
    pub covering_radius: f64,
    /// Gauss–Bonnet area `(k − 2)π − Σ angles`.
    pub area: f64,
    /// Every side belongs to a generator or its inverse.
    pub generated_by_side_pairings: bool,
    /// Orbit points within this distance were used.
    pub search_radius: f64,
}

#[derive(Clone, Copy)]
struct Edge {
    from: [f64; 2],
    label: Option<usize>,
}

/// Hyperboloid coordinates of `M·i`.
fn hyperboloid(m: super::mat2::Mat2) -> [f64; 3] {
    let (x, y) = m.orbit_point();
    let r2 = x * x + y * y;
    [(1.0 + r2) / (2.0 * y), (r2 - 1.0) / (2.0 * y), x / y]
}

fn clip(poly: &[Edge], normal: [f64; 2], offset: f64, label: usize) -> Vec<Edge> {
    let side = |p: [f64; 2]| normal[0] * p[0] + normal[1] * p[1] - offset;
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let e = poly[k];
        let p = e.from;
        let q = poly[(k + 1) % n].from;
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(e);
            if sq > 0.0 {
                let t = sp / (sp - sq);
                out.push(Edge {
                    from: [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])],
                    label: Some(label),
                });
            }
        } else if sq <= 0.0 {
            let t = sp / (sp - sq);
            out.push(Edge {
                from: [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])],
                label: e.label,
            });
        }
    }
    out
}

fn drop_short_edges(poly: Vec<Edge>) -> Vec<Edge> {
    let mut out: Vec<Edge> = Vec::with_capacity(poly.len());
    let n = poly.len();
    for k in 0..n {
        let p = poly[k].from;
        let q = poly[(k + 1) % n].from;
        if (p[0] - q[0]).hypot(p[1] - q[1]) > EDGE_EPS {
            out.push(poly[k]);
        }
    }
    out
}

fn klein_to_hyperboloid(u: [f64; 2]) -> [f64; 3] {
    let s = 1.0 / (1.0 - u[0] * u[0] - u[1] * u[1]).sqrt();
    [s, s * u[0], s * u[1]]
}

fn minkowski(x: [f64; 3], y: [f64; 3]) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn interior_angle(prev: [f64; 2], v: [f64; 2], next: [f64; 2]) -> f64 {
    let v = klein_to_hyperboloid(v);
    let tangent = |p: [f64; 2]| {
        let p = klein_to_hyperboloid(p);
        let k = minkowski(p, v);
        [p[0] + k * v[0], p[1] + k * v[1], p[2] + k * v[2]]
    };
    let (a, b) = (tangent(prev), tangent(next));
    (minkowski(a, b) / (minkowski(a, a) * minkowski(b, b)).sqrt())
        .clamp(-1.0, 1.0)
        .acos()
}

/// Intersect the half-planes `{x : d(x, i) ≤ d(x, g·i)}` for all orbit points
/// within a search radius `T`, growing `T` until the polygon is compact with
/// covering radius `R ≤ T/2` (no farther orbit point can then cut it).
pub fn dirichlet_polygon(group: &Group, max_word_length: usize, element_cap: usize) -> Result<DirichletPolygon> {
    let reach = group.generators.iter().map(|m| m.displacement()).fold(0.0, f64::max);
    let mut t = 2.0 * reach + 0.5;
    while t <= MAX_SEARCH {
        let ball = enumerate_ball_with(
            group,
            &BallConfig {
                radius: 1.5 * t,
                max_word_length,
                element_cap,
            },
        )?;
        let big = 2.0;
        let mut poly: Vec<Edge> = [[-big, -big], [big, -big], [big, big], [-big, big]]
            .iter()
            .map(|&p| Edge { from: p, label: None })
            .collect();
        let cosh_t = t.cosh();
        let mut order: Vec<u32> = (1..ball.len() as u32)
            .filter(|&i| ball.elements[i as usize].cosh_displacement <= cosh_t)
            .collect();
        order.sort_by(|&a, &b| {
            ball.elements[a as usize]
                .cosh_displacement
                .total_cmp(&ball.elements[b as usize].cosh_displacement)
        });
        for &i in &order {
            let x = hyperboloid(ball.elements[i as usize].matrix);
            poly = drop_short_edges(clip(&poly, [x[1], x[2]], x[0] - 1.0, i as usize));
            if poly.len() < 3 {
                return Err(Error::Group(
                    "Dirichlet polygon collapsed; generators may not be discrete".into(),
                ));
            }
        }
        let compact = poly
            .iter()
            .all(|e| e.label.is_some() && e.from[0].hypot(e.from[1]) < 1.0 - 1e-12);
        if !compact {
            t *= 1.5;
            continue;
        }
        let radius = poly
            .iter()
            .map(|e| {
                let r2 = e.from[0] * e.from[0] + e.from[1] * e.from[1];
                (1.0 / (1.0 - r2).sqrt()).acosh()
            })
            .fold(0.0, f64::max);
        if radius > t / 2.0 {
            t = 2.0 * radius + 0.5;
            continue;
        }
        let k = poly.len();
        let angles: f64 = (0..k)
            .map(|j| interior_angle(poly[(j + k - 1) % k].from, poly[j].from, poly[(j + 1) % k].from))
            .sum();
        let side_words: Vec<Word> = poly.iter().map(|e| ball.word(e.label.unwrap_or(0) as u32)).collect();
        return Ok(DirichletPolygon {
            vertices: poly.iter().map(|e| e.from).collect(),
            generated_by_side_pairings: side_words.iter().all(|w| w.len() == 1),
            side_words,
            covering_radius: radius,
            area: (k as f64 - 2.0) * std::f64::consts::PI - angles,
            search_radius: t,
        });
    }
    Err(Error::Group(format!(
        "no compact Dirichlet polygon found with orbit points up to distance {MAX_SEARCH}; the group may not be cocompact"
    )))
}

#[cfg(test)]
mod tests {
    use super::super::group::load_group;
    use super::super::group::tests::bolza_spec;
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bolza_octagon() {
        let g = load_group(&bolza_spec()).unwrap();
        let p = dirichlet_polygon(&g, 30, 1_000_000).unwrap();
        assert_eq!(p.vertices.len(), 8);
        assert!(p.generated_by_side_pairings);
        // regular octagon with angles π/4: cosh R = cot²(π/8)
        let expected = (1.0 / (PI / 8.0).tan().powi(2)).acosh();
        assert!((p.covering_radius - expected).abs() < 1e-9, "{}", p.covering_radius);
        assert!((p.covering_radius - 2.44845244767808).abs() < 1e-9);
        assert!((p.area - 4.0 * PI).abs() < 1e-9, "{}", p.area);
    }

    #[test]
    fn conjugated_group_has_same_area() {
        let g = load_group(&bolza_spec()).unwrap();
        let h = super::super::mat2::Mat2::new(1.3, 0.4, 0.2, (1.0 + 0.4 * 0.2) / 1.3);
        let p = dirichlet_polygon(&g.conjugated(h), 30, 1_000_000).unwrap();
        assert!((p.area - 4.0 * PI).abs() < 1e-8, "{}", p.area);
    }
}
