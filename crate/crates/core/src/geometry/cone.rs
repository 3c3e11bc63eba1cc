//! Polyhedral cones `{x : ⟨a, x⟩ ≤ 0}` with optional generators.

use num_traits::Zero;

use super::dd::{cone_generators, cone_halfspaces, ConeGenerators};
use super::linalg::{dedup_sorted, dot, is_zero, neg, unit};
use super::polyhedron::{HPolyhedron, Halfspace, MAX_ENUM_DIM};
use super::rat::{ExtRat, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PolyhedralCone {
    dim: usize,
    h_rep: Vec<Vec<Rat>>,
    v_rep: Option<ConeGenerators>,
}

impl PolyhedralCone {
    pub fn from_halfspaces(dim: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        for r in &rows {
            Error::dims(dim, r.len())?;
        }
        let rows = dedup_sorted(rows.into_iter().filter(|r| !is_zero(r)).collect());
        Ok(PolyhedralCone {
            dim,
            h_rep: rows,
            v_rep: None,
        })
    }

    /// `cone(rays) + span(lines)`; the halfspace description is computed by
    /// double description.
    pub fn from_generators(dim: usize, rays: Vec<Vec<Rat>>, lines: Vec<Vec<Rat>>) -> Result<Self> {
        for g in rays.iter().chain(&lines) {
            Error::dims(dim, g.len())?;
        }
        let gens = ConeGenerators { rays, lines };
        let h_rep = cone_halfspaces(dim, &gens);
        // Re-derive canonical generators from the facets.
        let canonical = cone_generators(dim, &h_rep);
        Ok(PolyhedralCone {
            dim,
            h_rep,
            v_rep: Some(canonical),
        })
    }

    /// The cone generated by the given vectors.
    pub fn generated_by(dim: usize, rays: Vec<Vec<Rat>>) -> Result<Self> {
        Self::from_generators(dim, rays, Vec::new())
    }

    pub fn zero(dim: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            rows.push(unit(dim, i));
            rows.push(neg(&unit(dim, i)));
        }
        PolyhedralCone {
            dim,
            h_rep: dedup_sorted(rows),
            v_rep: Some(ConeGenerators::default()),
        }
    }

    pub fn whole(dim: usize) -> Self {
        PolyhedralCone {
            dim,
            h_rep: Vec::new(),
            v_rep: Some(ConeGenerators {
                rays: Vec::new(),
                lines: (0..dim).map(|i| unit(dim, i)).collect(),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_rep(&self) -> &[Vec<Rat>] {
        &self.h_rep
    }

    pub fn v_rep(&self) -> Option<&ConeGenerators> {
        self.v_rep.as_ref()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim && self.h_rep.iter().all(|a| dot(a, x) <= Rat::zero())
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Error::dims(self.dim, other.dim)?;
        let mut rows = self.h_rep.clone();
        rows.extend(other.h_rep.iter().cloned());
        Self::from_halfspaces(self.dim, rows)
    }

    pub fn negate(&self) -> Self {
        PolyhedralCone {
            dim: self.dim,
            h_rep: dedup_sorted(self.h_rep.iter().map(|a| neg(a)).collect()),
            v_rep: self.v_rep.as_ref().map(|g| ConeGenerators {
                rays: g.rays.iter().map(|r| neg(r)).collect(),
                lines: g.lines.clone(),
            }),
        }
    }

    /// Generators, computed on demand (dimension ≤ 3).
    pub fn generators(&self) -> Result<ConeGenerators> {
        if let Some(g) = &self.v_rep {
            return Ok(g.clone());
        }
        if self.dim > MAX_ENUM_DIM {
            return Err(Error::UnsupportedDimension {
                operation: "cone generator enumeration",
                dim: self.dim,
                limit: MAX_ENUM_DIM,
            });
        }
        Ok(cone_generators(self.dim, &self.h_rep))
    }

    pub fn with_generators(mut self) -> Result<Self> {
        if self.v_rep.is_none() {
            self.v_rep = Some(self.generators()?);
        }
        Ok(self)
    }

    /// `self ⊆ other`, decided on the generators of `self`.
    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Error::dims(self.dim, other.dim)?;
        let g = self.generators()?;
        Ok(g.rays.iter().all(|r| other.contains(r))
            && g.lines.iter().all(|l| other.contains(l) && other.contains(&neg(l))))
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    /// `true` iff the cone is `{0}` (decided by linear programming in any
    /// dimension).
    pub fn is_zero(&self) -> bool {
        let p = self.to_polyhedron();
        (0..self.dim).all(|i| {
            let e = unit(self.dim, i);
            p.maximize(&e) == ExtRat::zero() && p.maximize(&neg(&e)) == ExtRat::zero()
        })
    }

    pub fn to_polyhedron(&self) -> HPolyhedron {
        HPolyhedron::from_trusted(
            self.dim,
            self.h_rep
                .iter()
                .map(|a| Halfspace::new(a.clone(), Rat::zero()))
                .collect(),
        )
    }

    /// Mutual-membership check between the two descriptions.
    pub fn is_consistent(&self) -> bool {
        let Some(g) = &self.v_rep else {
            return true;
        };
        let gens_ok = g.rays.iter().all(|r| self.contains(r))
            && g.lines.iter().all(|l| self.contains(l) && self.contains(&neg(l)));
        let facets = cone_halfspaces(self.dim, g);
        let back = PolyhedralCone {
            dim: self.dim,
            h_rep: facets,
            v_rep: None,
        };
        let from_h = cone_generators(self.dim, &self.h_rep);
        gens_ok
            && from_h.rays.iter().all(|r| back.contains(r))
            && from_h
                .lines
                .iter()
                .all(|l| back.contains(l) && back.contains(&neg(l)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec};

    #[test]
    fn quadrant_intersection() {
        let c1 = PolyhedralCone::from_halfspaces(2, vec![ivec(&[1, 0])]).unwrap();
        let c2 = PolyhedralCone::from_halfspaces(2, vec![ivec(&[0, 1])]).unwrap();
        let q = c1.intersect(&c2).unwrap();
        assert!(q.contains(&ivec(&[-1, -3])));
        assert!(!q.contains(&ivec(&[1, -3])));
        let g = q.generators().unwrap();
        assert_eq!(g.rays, vec![ivec(&[-1, 0]), ivec(&[0, -1])]);
    }

    #[test]
    fn everything_is_inside_the_whole_space() {
        let c = PolyhedralCone::from_halfspaces(2, vec![ivec(&[1, 2])]).unwrap();
        assert!(c.is_subset(&PolyhedralCone::whole(2)).unwrap());
        assert!(!PolyhedralCone::whole(2).is_subset(&c).unwrap());
    }

    #[test]
    fn generated_cone_round_trip() {
        let c = PolyhedralCone::generated_by(2, vec![ivec(&[1, 0]), ivec(&[1, 1])]).unwrap();
        assert!(c.is_consistent());
        assert!(c.contains(&ivec(&[3, 1])));
        assert!(!c.contains(&ivec(&[-1, 0])));
        let h = PolyhedralCone::from_halfspaces(2, c.h_rep().to_vec()).unwrap();
        assert!(h.equals(&c).unwrap());
    }

    #[test]
    fn zero_detection() {
        assert!(PolyhedralCone::zero(3).is_zero());
        let ray = PolyhedralCone::generated_by(2, vec![ivec(&[0, -1])]).unwrap();
        assert!(!ray.is_zero());
        assert!(ray.contains(&[int(0), int(-4)]));
    }

    #[test]
    fn high_dimension_subset_needs_generators() {
        let c = PolyhedralCone::from_halfspaces(4, vec![ivec(&[1, 0, 0, 0])]).unwrap();
        assert!(matches!(
            c.is_subset(&PolyhedralCone::whole(4)),
            Err(Error::UnsupportedDimension { .. })
        ));
    }
}
