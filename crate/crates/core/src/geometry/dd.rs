//! Double description: conversion between `{x : Ax ≤ 0}` and generators.
//!
//! The incremental algorithm keeps a basis of the lineality space together
//! with the extreme rays of the pointed part. Adjacency of two rays is decided
//! by the algebraic rank test on their common tight rows.

use num_traits::{Signed, Zero};

use super::linalg::{dot, is_zero, lex_cmp, primitive, rank, scale, sub, unit};
use super::rat::Rat;

/// Generators of a polyhedral cone: `cone(rays) + span(lines)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<Rat>>,
    pub lines: Vec<Vec<Rat>>,
}

impl ConeGenerators {
    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }
}

fn orient_line(l: Vec<Rat>) -> Vec<Rat> {
    let l = primitive(&l);
    match l.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => l.iter().map(|v| -v).collect(),
        _ => l,
    }
}

/// Generators of `{x ∈ Rⁿ : a·x ≤ 0 for every row a}`. Works in any
/// dimension; callers are responsible for size limits.
pub fn cone_generators(n: usize, rows: &[Vec<Rat>]) -> ConeGenerators {
    let mut lines: Vec<Vec<Rat>> = (0..n).map(|i| unit(n, i)).collect();
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    let mut processed: Vec<&Vec<Rat>> = Vec::new();

    for a in rows {
        if is_zero(a) {
            continue;
        }
        if let Some(k) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lines.remove(k);
            let mut al0 = dot(a, &l0);
            if al0.is_positive() {
                l0 = l0.iter().map(|v| -v).collect();
                al0 = -al0;
            }
            for l in lines.iter_mut() {
                let f = dot(a, l) / &al0;
                if !f.is_zero() {
                    *l = sub(l, &scale(&f, &l0));
                }
            }
            for r in rays.iter_mut() {
                let f = dot(a, r) / &al0;
                if !f.is_zero() {
                    *r = primitive(&sub(r, &scale(&f, &l0)));
                }
            }
            rays.push(primitive(&l0));
            processed.push(a);
            continue;
        }

        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next: Vec<Vec<Rat>> = Vec::new();
        let (mut pos, mut negs) = (Vec::new(), Vec::new());
        for (i, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(i);
            } else {
                if v.is_negative() {
                    negs.push(i);
                }
                next.push(rays[i].clone());
            }
        }
        if !pos.is_empty() && !negs.is_empty() {
            let target_rank = n.saturating_sub(lines.len() + 2);
            let tight: Vec<Vec<usize>> = rays
                .iter()
                .map(|r| {
                    (0..processed.len())
                        .filter(|&k| dot(processed[k], r).is_zero())
                        .collect()
                })
                .collect();
            for &p in &pos {
                for &q in &negs {
                    let common: Vec<Vec<Rat>> = tight[p]
                        .iter()
                        .filter(|k| tight[q].contains(k))
                        .map(|&k| processed[k].clone())
                        .collect();
                    if common.len() < target_rank || rank(&common) != target_rank {
                        continue;
                    }
                    let combo = sub(&scale(&vals[p], &rays[q]), &scale(&vals[q], &rays[p]));
                    next.push(primitive(&combo));
                }
            }
        }
        rays = next;
        processed.push(a);
    }

    let mut rays: Vec<Vec<Rat>> = rays.into_iter().filter(|r| !is_zero(r)).collect();
    rays.sort_by(|a, b| lex_cmp(a, b));
    rays.dedup();
    let lines = lines.into_iter().map(orient_line).collect();
    ConeGenerators { rays, lines }
}

/// Rows `a` with `{x : a·x ≤ 0 ∀a} = cone(rays) + span(lines)`.
pub fn cone_halfspaces(n: usize, gens: &ConeGenerators) -> Vec<Vec<Rat>> {
    let mut rows: Vec<Vec<Rat>> = gens.rays.clone();
    for l in &gens.lines {
        rows.push(l.clone());
        rows.push(l.iter().map(|v| -v).collect());
    }
    let polar = cone_generators(n, &rows);
    let mut out: Vec<Vec<Rat>> = polar.rays;
    for l in polar.lines {
        out.push(l.iter().map(|v| -v).collect());
        out.push(l);
    }
    out.sort_by(|a, b| lex_cmp(a, b));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::ivec;

    #[test]
    fn quadrant() {
        let g = cone_generators(2, &[ivec(&[1, 0]), ivec(&[0, 1])]);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays, vec![ivec(&[-1, 0]), ivec(&[0, -1])]);
    }

    #[test]
    fn halfplane_has_a_line() {
        let g = cone_generators(2, &[ivec(&[1, 0])]);
        assert_eq!(g.rays, vec![ivec(&[-1, 0])]);
        assert_eq!(g.lines, vec![ivec(&[0, 1])]);
    }

    #[test]
    fn pointed_3d_cone_from_four_facets() {
        // Square pyramid with apex at the origin opening downwards in z.
        let rows = vec![
            ivec(&[1, 0, 1]),
            ivec(&[-1, 0, 1]),
            ivec(&[0, 1, 1]),
            ivec(&[0, -1, 1]),
        ];
        let g = cone_generators(3, &rows);
        assert!(g.lines.is_empty());
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            let tight = rows.iter().filter(|a| dot(a, r).is_zero()).count();
            assert_eq!(tight, 2);
        }
        let back = cone_halfspaces(3, &g);
        let mut expected = rows.clone();
        expected.sort_by(|a, b| lex_cmp(a, b));
        assert_eq!(back, expected);
    }

    #[test]
    fn redundant_rows_and_zero_cone() {
        let g = cone_generators(
            2,
            &[ivec(&[1, 0]), ivec(&[-1, 0]), ivec(&[0, 1]), ivec(&[0, -1]), ivec(&[1, 1])],
        );
        assert!(g.is_trivial());
        let whole = cone_generators(2, &[]);
        assert_eq!(whole.lines.len(), 2);
    }
}
