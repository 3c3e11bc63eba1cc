//! Cells of a hyperplane arrangement restricted to a convex region.

use super::nnc::{violated, NncSystem};
use super::polyhedron::Halfspace;
use super::rat::Rat;

/// Position of a cell relative to one hyperplane `⟨a, x⟩ = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Below,
    On,
    Above,
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub sides: Vec<Side>,
    /// A point in the relative interior of the cell.
    pub point: Vec<Rat>,
}

/// Enumerates every nonempty cell of the arrangement of `hyperplanes`
/// (given as halfspaces, read as equations) inside `base`. Cells are listed
/// in lexicographic order of their side vectors.
pub fn arrangement_cells(dim: usize, base: &[Halfspace], hyperplanes: &[Halfspace]) -> Vec<Cell> {
    let mut out = Vec::new();
    let root = NncSystem::closed(base.to_vec());
    if root.is_feasible(dim) {
        descend(dim, hyperplanes, root, Vec::new(), &mut out);
    }
    out
}

fn descend(dim: usize, hyperplanes: &[Halfspace], sys: NncSystem, sides: Vec<Side>, out: &mut Vec<Cell>) {
    let k = sides.len();
    if k == hyperplanes.len() {
        if let Some(point) = sys.point(dim) {
            out.push(Cell { sides, point });
        }
        return;
    }
    let h = &hyperplanes[k];
    for side in [Side::Below, Side::On, Side::Above] {
        let next = match side {
            Side::Below => sys.and_strict(h.clone()),
            Side::On => sys.and_equal(h.clone()),
            Side::Above => sys.and_strict(violated(h)),
        };
        if next.is_feasible(dim) {
            let mut s = sides.clone();
            s.push(side);
            descend(dim, hyperplanes, next, s, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec};

    #[test]
    fn two_lines_through_origin_make_nine_cells() {
        let hs = vec![
            Halfspace::new(ivec(&[1, 0]), int(0)),
            Halfspace::new(ivec(&[0, 1]), int(0)),
        ];
        let cells = arrangement_cells(2, &[], &hs);
        assert_eq!(cells.len(), 9);
        assert!(cells.iter().any(|c| c.sides == vec![Side::On, Side::On]));
    }

    #[test]
    fn base_region_prunes_cells() {
        let base = vec![Halfspace::new(ivec(&[-1, 0]), int(0))]; // x >= 0
        let hs = vec![Halfspace::new(ivec(&[1, 0]), int(0))];
        let cells = arrangement_cells(2, &base, &hs);
        let sides: Vec<Side> = cells.iter().map(|c| c.sides[0]).collect();
        assert_eq!(sides, vec![Side::On, Side::Above]);
    }
}
