//! Finite unions of closed convex polyhedra with exact set relations.

use super::nnc::{violated, NncSystem};
use super::polyhedron::HPolyhedron;
use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PolyhedralUnion {
    dim: usize,
    pieces: Vec<HPolyhedron>,
}

impl PolyhedralUnion {
    pub fn empty(dim: usize) -> Self {
        PolyhedralUnion {
            dim,
            pieces: Vec::new(),
        }
    }

    pub fn from_piece(p: HPolyhedron) -> Self {
        PolyhedralUnion {
            dim: p.dim(),
            pieces: vec![p],
        }
    }

    pub fn from_pieces(dim: usize, pieces: Vec<HPolyhedron>) -> Result<Self> {
        for p in &pieces {
            Error::dims(dim, p.dim())?;
        }
        Ok(PolyhedralUnion { dim, pieces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[HPolyhedron] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn push(&mut self, p: HPolyhedron) {
        debug_assert_eq!(p.dim(), self.dim);
        self.pieces.push(p);
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Indices of the pieces containing `x`.
    pub fn pieces_containing(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.pieces.len())
            .filter(|&i| self.pieces[i].contains(x))
            .collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        PolyhedralUnion {
            dim: self.dim,
            pieces,
        }
    }

    /// Piecewise intersection with a convex polyhedron; empty pieces vanish.
    pub fn intersect_polyhedron(&self, q: &HPolyhedron) -> Self {
        PolyhedralUnion {
            dim: self.dim,
            pieces: self.pieces.iter().filter_map(|p| p.intersect(q)).collect(),
        }
    }

    /// Pairwise intersection of two unions.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                if let Some(r) = p.intersect(q) {
                    pieces.push(r);
                }
            }
        }
        PolyhedralUnion {
            dim: self.dim,
            pieces,
        }
    }

    /// A point of `a ∖ ∪ b`, if one exists.
    fn uncovered_point(&self, a: &HPolyhedron) -> Option<Vec<Rat>> {
        let mut open: Vec<NncSystem> = vec![NncSystem::closed(a.halfspaces().to_vec())];
        for b in &self.pieces {
            let mut next = Vec::new();
            for sys in open {
                // Pieces disjoint from b are untouched.
                let mut meet = sys.clone();
                meet.closed.extend(b.halfspaces().iter().cloned());
                if !meet.is_feasible(self.dim) {
                    next.push(sys);
                    continue;
                }
                // Disjoint split of sys ∖ b by the first violated constraint.
                let mut prefix = sys.clone();
                for h in b.halfspaces() {
                    let part = prefix.and_strict(violated(h));
                    if part.is_feasible(self.dim) {
                        next.push(part);
                    }
                    prefix = prefix.and_closed(h.clone());
                }
            }
            open = next;
            if open.is_empty() {
                return None;
            }
        }
        open.iter().find_map(|s| s.point(self.dim))
    }

    /// `self ⊆ other` as point sets; returns an uncovered witness if not.
    pub fn subset_witness(&self, other: &Self) -> Option<Vec<Rat>> {
        self.pieces.iter().find_map(|p| other.uncovered_point(p))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.subset_witness(other).is_none()
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Drops pieces covered by a single other piece and duplicates.
    pub fn simplified(&self) -> Self {
        let mut keep: Vec<HPolyhedron> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let covered = self.pieces.iter().enumerate().any(|(j, q)| {
                j != i && p.is_subset_of(q) && (!q.is_subset_of(p) || j < i)
            });
            if !covered {
                keep.push(p.reduced());
            }
        }
        PolyhedralUnion {
            dim: self.dim,
            pieces: keep,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        PolyhedralUnion {
            dim: self.dim,
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn negate(&self) -> Self {
        PolyhedralUnion {
            dim: self.dim,
            pieces: self.pieces.iter().map(HPolyhedron::negate).collect(),
        }
    }

    /// The unique point when the union is a singleton.
    pub fn as_point(&self) -> Option<Vec<Rat>> {
        let first = self.pieces.first()?.as_point()?;
        self.pieces
            .iter()
            .all(|p| p.as_point().as_ref() == Some(&first))
            .then_some(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    fn bx(lo: &[i64], hi: &[i64]) -> HPolyhedron {
        HPolyhedron::boxed(&ivec(lo), &ivec(hi)).unwrap()
    }

    #[test]
    fn two_halves_cover_the_square() {
        let square = PolyhedralUnion::from_piece(bx(&[-1, -1], &[1, 1]));
        let halves =
            PolyhedralUnion::from_pieces(2, vec![bx(&[-1, -1], &[0, 1]), bx(&[0, -1], &[1, 1])])
                .unwrap();
        assert!(square.set_eq(&halves));
    }

    #[test]
    fn a_gap_is_detected_with_witness() {
        let square = PolyhedralUnion::from_piece(bx(&[0, 0], &[4, 4]));
        let parts =
            PolyhedralUnion::from_pieces(2, vec![bx(&[0, 0], &[1, 4]), bx(&[2, 0], &[4, 4])])
                .unwrap();
        let w = square.subset_witness(&parts).unwrap();
        assert!(w[0] > int(1) && w[0] < int(2));
        assert!(parts.is_subset_of(&square));
    }

    #[test]
    fn segment_subset_of_boundary() {
        let seg = PolyhedralUnion::from_piece(
            HPolyhedron::boxed(&[int(-1), int(0)], &[int(0), int(0)]).unwrap(),
        );
        let strip = PolyhedralUnion::from_piece(
            HPolyhedron::boxed(&[rat(-3, 2), int(0)], &[int(0), int(1)]).unwrap(),
        );
        assert!(seg.is_subset_of(&strip));
        assert!(!strip.is_subset_of(&seg));
    }

    #[test]
    fn simplification_keeps_one_of_equal_pieces() {
        let u = PolyhedralUnion::from_pieces(
            1,
            vec![bx(&[0], &[1]), bx(&[0], &[1]), bx(&[0], &[3])],
        )
        .unwrap()
        .simplified();
        assert_eq!(u.pieces().len(), 1);
        assert_eq!(PolyhedralUnion::empty(1).subset_witness(&u), None);
    }
}
