//! Vertex descriptions of convex polytopes.

use num_traits::{One, Signed, Zero};

use super::linalg::{add, dot, lex_cmp, norm_sq, scale, zeros};
use super::lp::{LinearProgram, Relation, Sense};
use super::polyhedron::{HPolyhedron, Halfspace, VRep, MAX_ENUM_DIM};
use super::rat::Rat;
use crate::error::{Error, Result};

/// `conv(vertices)`; redundant points are allowed until [`VPolytope::canonical`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if vertices.is_empty() {
            return Err(Error::EmptySet("polytope needs at least one vertex".into()));
        }
        for v in &vertices {
            Error::dims(dim, v.len())?;
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn from_points(vertices: Vec<Vec<Rat>>) -> Result<Self> {
        let dim = vertices.first().map(Vec::len).unwrap_or(0);
        Self::new(dim, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// `max_v ⟨c, v⟩`.
    pub fn support(&self, c: &[Rat]) -> Rat {
        self.vertices
            .iter()
            .map(|v| dot(c, v))
            .max()
            .expect("nonempty vertex list")
    }

    pub fn max_norm_sq(&self) -> Rat {
        self.vertices.iter().map(|v| norm_sq(v)).max().expect("nonempty vertex list")
    }

    /// Convex-combination feasibility test.
    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim && in_hull(&self.vertices, x)
    }

    /// Removes duplicates and points inside the hull of the others; sorts
    /// vertices lexicographically.
    pub fn canonical(&self) -> Self {
        let mut vs = self.vertices.clone();
        vs.sort_by(|a, b| lex_cmp(a, b));
        vs.dedup();
        let mut i = 0;
        while i < vs.len() && vs.len() > 1 {
            let v = vs.remove(i);
            if in_hull(&vs, &v) {
                continue;
            }
            vs.insert(i, v);
            i += 1;
        }
        VPolytope {
            dim: self.dim,
            vertices: vs,
        }
    }

    pub fn translate(&self, t: &[Rat]) -> Self {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| add(v, t)).collect(),
        }
    }

    /// `s·P` for `s ≥ 0`.
    pub fn scale(&self, s: &Rat) -> Self {
        assert!(!s.is_negative());
        if s.is_zero() {
            return VPolytope {
                dim: self.dim,
                vertices: vec![zeros(self.dim)],
            };
        }
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| scale(s, v)).collect(),
        }
    }

    pub fn negate(&self) -> Self {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| scale(&-Rat::one(), v)).collect(),
        }
    }

    /// `conv(P ∪ {0})`.
    pub fn with_origin(&self) -> Self {
        let mut vs = self.vertices.clone();
        vs.push(zeros(self.dim));
        VPolytope { dim: self.dim, vertices: vs }.canonical()
    }

    pub fn to_vrep(&self) -> VRep {
        VRep {
            dim: self.dim,
            vertices: self.vertices.clone(),
            rays: Vec::new(),
            lines: Vec::new(),
        }
    }

    /// Facet description (dimension ≤ 3).
    pub fn to_hpolyhedron(&self) -> Result<HPolyhedron> {
        if self.dim > MAX_ENUM_DIM {
            return Err(Error::UnsupportedDimension {
                operation: "facet enumeration",
                dim: self.dim,
                limit: MAX_ENUM_DIM,
            });
        }
        Ok(self.facets())
    }

    pub(crate) fn facets(&self) -> HPolyhedron {
        let hs: Vec<Halfspace> = self.to_vrep().to_halfspaces();
        HPolyhedron::from_trusted(self.dim, hs)
    }
}

/// `x ∈ conv(points)` by an exact feasibility program.
pub(crate) fn in_hull(points: &[Vec<Rat>], x: &[Rat]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let mut lp = LinearProgram::new(n, Sense::Minimize);
    lp.add(vec![Rat::one(); n], Relation::Eq, Rat::one()).expect("dims");
    for i in 0..x.len() {
        let row = points.iter().map(|p| p[i].clone()).collect();
        lp.add(row, Relation::Eq, x[i].clone()).expect("dims");
    }
    lp.solve().is_optimal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    #[test]
    fn support_examples() {
        let seg = VPolytope::from_points(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        assert_eq!(seg.support(&ivec(&[2, 5])), int(2));
        assert_eq!(seg.support(&ivec(&[0, 0])), int(0));
        let tri = VPolytope::from_points(vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        assert_eq!(tri.support(&ivec(&[1, 1])), int(1));
        let seg = VPolytope::from_points(vec![ivec(&[3, 4]), ivec(&[0, 0])]).unwrap();
        assert_eq!(seg.max_norm_sq(), int(25));
    }

    #[test]
    fn canonical_drops_interior_points() {
        let p = VPolytope::from_points(vec![
            ivec(&[0, 0]),
            ivec(&[2, 0]),
            ivec(&[0, 2]),
            ivec(&[1, 1]),
            vec![rat(1, 2), rat(1, 2)],
            ivec(&[2, 0]),
        ])
        .unwrap()
        .canonical();
        assert_eq!(p.vertices(), &[ivec(&[0, 0]), ivec(&[0, 2]), ivec(&[2, 0])]);
    }

    #[test]
    fn segment_facets_include_an_equality() {
        let seg = VPolytope::from_points(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let h = seg.to_hpolyhedron().unwrap();
        assert!(h.contains(&ivec(&[0, 0])));
        assert!(!h.contains(&[int(0), rat(1, 100)]));
        assert!(!h.contains(&ivec(&[2, 0])));
        assert!(h.is_bounded());
    }

    #[test]
    fn empty_polytope_rejected() {
        assert!(VPolytope::new(2, vec![]).is_err());
        assert!(VPolytope::new(2, vec![ivec(&[1])]).is_err());
    }
}
