use crate::error::{Error, Result};
use crate::geometry::{HPolyhedron, PolyhedralUnion, Rat};

/// A closed target set given as a nonempty finite union of polyhedra.
#[derive(Clone, Debug)]
pub struct Target {
    union: PolyhedralUnion,
}

impl Target {
    pub fn new(union: PolyhedralUnion) -> Result<Self> {
        if union.is_empty() {
            return Err(Error::EmptySet("target has no pieces".into()));
        }
        Ok(Target { union })
    }

    pub fn convex(piece: HPolyhedron) -> Self {
        Target {
            union: PolyhedralUnion::from_piece(piece),
        }
    }

    pub fn from_pieces(dim: usize, pieces: Vec<HPolyhedron>) -> Result<Self> {
        Self::new(PolyhedralUnion::from_pieces(dim, pieces)?)
    }

    pub fn dim(&self) -> usize {
        self.union.dim()
    }

    pub fn pieces(&self) -> &[HPolyhedron] {
        self.union.pieces()
    }

    pub fn union(&self) -> &PolyhedralUnion {
        &self.union
    }

    /// Single-piece targets are treated as convex.
    pub fn is_convex(&self) -> bool {
        self.union.pieces().len() == 1
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.union.contains(x)
    }
}
