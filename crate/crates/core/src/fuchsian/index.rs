//! Approximate lookup of matrices up to sign.

use std::collections::HashMap;

use super::mat2::Mat2;

/// Entrywise distance under which two matrices are the same element.
pub const MATCH_TOL: f64 = 1e-8;
/// Up to this distance a near match is reported as ambiguous.
pub const AMBIGUOUS_TOL: f64 = 1e-6;

const CELL: f64 = 1e-4;
const SIGN_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lookup {
    Found(u32),
    Ambiguous(u32, f64),
    Missing,
}

/// Matrices keyed by a quantised sign-normalised form. A matrix whose key is
/// within `AMBIGUOUS_TOL` of a cell boundary (or whose sign choice is
/// borderline) is filed under every key it could round to, so a single cell
/// probe finds every stored matrix within `AMBIGUOUS_TOL` of the query.
#[derive(Debug, Default)]
pub struct MatrixIndex {
    heads: HashMap<[i64; 4], u32>,
    // (matrix id, next slot) chains; u32::MAX ends a chain
    slots: Vec<(u32, u32)>,
    mats: Vec<Mat2>,
}

fn query_sign(m: &Mat2) -> f64 {
    for x in m.to_row_major() {
        if x.abs() > SIGN_FLOOR {
            return x.signum();
        }
    }
    1.0
}

fn storage_signs(m: &Mat2) -> Vec<f64> {
    let mut out = Vec::with_capacity(1);
    for x in m.to_row_major() {
        if x.abs() > SIGN_FLOOR + AMBIGUOUS_TOL {
            out.push(x.signum());
            break;
        }
        if x.abs() > SIGN_FLOOR - AMBIGUOUS_TOL {
            out.push(x.signum());
        }
    }
    if out.is_empty() {
        out.push(1.0);
    }
    out.dedup();
    out
}

fn cell(x: f64) -> i64 {
    (x / CELL).floor() as i64
}

fn query_key(m: &Mat2) -> [i64; 4] {
    let s = query_sign(m);
    m.to_row_major().map(|x| cell(s * x))
}

fn storage_keys(m: &Mat2) -> Vec<[i64; 4]> {
    let mut keys = Vec::new();
    for s in storage_signs(m) {
        let options: Vec<Vec<i64>> = m
            .to_row_major()
            .iter()
            .map(|&x| {
                let v = s * x;
                let k = cell(v);
                let mut o = vec![k];
                if cell(v - AMBIGUOUS_TOL) != k {
                    o.push(k - 1);
                }
                if cell(v + AMBIGUOUS_TOL) != k {
                    o.push(k + 1);
                }
                o
            })
            .collect();
        for &k0 in &options[0] {
            for &k1 in &options[1] {
                for &k2 in &options[2] {
                    for &k3 in &options[3] {
                        keys.push([k0, k1, k2, k3]);
                    }
                }
            }
        }
    }
    keys.sort_unstable();
    keys.dedup();
    keys
}

impl MatrixIndex {
    pub fn new() -> Self {
        MatrixIndex::default()
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn get(&self, id: u32) -> Mat2 {
        self.mats[id as usize]
    }

    /// Store `m` unconditionally and return its id.
    pub fn insert(&mut self, m: Mat2) -> u32 {
        let id = self.mats.len() as u32;
        self.mats.push(m);
        for key in storage_keys(&m) {
            let slot = self.slots.len() as u32;
            let head = self.heads.entry(key).or_insert(u32::MAX);
            self.slots.push((id, *head));
            *head = slot;
        }
        id
    }

    /// The stored matrix closest to `±m`, classified by distance.
    pub fn lookup(&self, m: &Mat2) -> Lookup {
        let Some(&head) = self.heads.get(&query_key(m)) else {
            return Lookup::Missing;
        };
        let mut best: Option<(u32, f64)> = None;
        let mut slot = head;
        while slot != u32::MAX {
            let (id, next) = self.slots[slot as usize];
            let d = m.distance_pm(self.mats[id as usize]);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((id, d));
            }
            slot = next;
        }
        match best {
            Some((id, d)) if d <= MATCH_TOL => Lookup::Found(id),
            Some((id, d)) if d < AMBIGUOUS_TOL => Lookup::Ambiguous(id, d),
            _ => Lookup::Missing,
        }
    }
}
