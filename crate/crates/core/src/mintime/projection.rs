//! The minimal-time projection `Π(x̄) = (x̄ + T(x̄)·F) ∩ Ω`.

use num_traits::Zero;

use super::dynamics::{Dynamics, Shape};
use super::eval::{minimal_time, minimal_time_sq, TimeWitness};
use super::target::Target;
use crate::error::{Error, Result};
use crate::geometry::linalg::lex_cmp;
use crate::geometry::rat::{Rat, Value};
use crate::geometry::{nearest_point, HPolyhedron, PolyhedralUnion};

#[derive(Clone, Debug)]
pub struct ProjectionSet {
    /// One polytope per target piece that is reached at the optimal time.
    pub pieces: PolyhedralUnion,
    /// Optimal witness from the evaluator (absent only for irrational times
    /// under ball dynamics).
    pub witness: Option<TimeWitness>,
    /// Lexicographically smallest vertex of the projection.
    pub canonical: Vec<Rat>,
    /// Indices of target pieces attaining the minimal time.
    pub active_pieces: Vec<usize>,
}

impl ProjectionSet {
    /// All vertices of the projection pieces, sorted and deduplicated.
    pub fn vertices(&self) -> Result<Vec<Vec<Rat>>> {
        let mut out = Vec::new();
        for p in self.pieces.pieces() {
            out.extend(p.vrep()?.vertices);
        }
        out.sort_by(|a, b| lex_cmp(a, b));
        out.dedup();
        Ok(out)
    }
}

pub fn projection_set(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<ProjectionSet> {
    let eval = minimal_time(f, omega, xbar)?;
    if eval.value == Value::Infinite {
        return Err(Error::InfiniteTime);
    }
    let dim = f.dim();
    let mut pieces = Vec::new();
    let mut active = Vec::new();
    match f.shape() {
        Shape::Polytope(p) => {
            let t = eval.value.exact().expect("polytope times are rational").clone();
            let reach = if t.is_zero() {
                HPolyhedron::singleton(xbar)
            } else {
                p.scale(&t).translate(xbar).to_hpolyhedron()?
            };
            for (i, piece) in omega.pieces().iter().enumerate() {
                if let Some(meet) = piece.intersect(&reach) {
                    pieces.push(meet.reduced());
                    active.push(i);
                }
            }
        }
        Shape::Ball { radius } => {
            let t2 = minimal_time_sq(f, omega, xbar)?.expect("finite time");
            for (i, piece) in omega.pieces().iter().enumerate() {
                let (w, d2) = nearest_point(piece, xbar);
                if d2 / (radius * radius) == t2 {
                    pieces.push(HPolyhedron::singleton(&w));
                    active.push(i);
                }
            }
        }
    }
    let union = PolyhedralUnion::from_pieces(dim, pieces)?;
    let mut canonical: Option<Vec<Rat>> = None;
    for p in union.pieces() {
        for v in p.vrep()?.vertices {
            if canonical.as_ref().is_none_or(|c| lex_cmp(&v, c).is_lt()) {
                canonical = Some(v);
            }
        }
    }
    Ok(ProjectionSet {
        pieces: union,
        witness: eval.witness,
        canonical: canonical.expect("projection of a finite-time point is nonempty"),
        active_pieces: active,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};
    use crate::geometry::Halfspace;

    fn seg() -> Dynamics {
        Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap()
    }

    #[test]
    fn box_complement_projection_is_a_point() {
        let pieces = vec![
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[-1, 0]), int(-1))]).unwrap(),
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[1, 0]), int(-1))]).unwrap(),
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[0, -1]), int(-1))]).unwrap(),
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[0, 1]), int(-1))]).unwrap(),
        ];
        let o = Target::from_pieces(2, pieces).unwrap();
        let pr = projection_set(&seg(), &o, &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(pr.pieces.as_point(), Some(vec![int(1), rat(1, 2)]));
        assert_eq!(pr.canonical, vec![int(1), rat(1, 2)]);
    }

    #[test]
    fn inside_projects_to_itself() {
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        let x = vec![rat(1, 5), int(0)];
        let pr = projection_set(&seg(), &o, &x).unwrap();
        assert_eq!(pr.pieces.as_point(), Some(x));
    }

    #[test]
    fn projection_can_be_a_segment() {
        // Reaching the square from below with F = {(t, 1) : |t| ≤ 1}.
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 1]), ivec(&[1, 1])]).unwrap();
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[-1, 0]), &ivec(&[1, 2])).unwrap());
        let pr = projection_set(&f, &o, &ivec(&[0, -1])).unwrap();
        assert!(pr.pieces.as_point().is_none());
        assert_eq!(pr.vertices().unwrap(), vec![ivec(&[-1, 0]), ivec(&[1, 0])]);
        assert_eq!(pr.canonical, ivec(&[-1, 0]));
    }

    #[test]
    fn infinite_time_is_an_error() {
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        assert_eq!(
            projection_set(&seg(), &o, &ivec(&[0, 5])).unwrap_err(),
            Error::InfiniteTime
        );
    }
}
