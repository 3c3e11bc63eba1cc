//! Evaluation of `T(x) = inf{t ≥ 0 : Ω ∩ (x + tF) ≠ ∅}`.
//!
//! For polytope dynamics each convex piece `P = {Aw ≤ b}` gives the program
//! `min Σλᵢ` subject to `A(x + Σλᵢvᵢ) ≤ b`, `λ ≥ 0`, whose optimum is the
//! time to reach `P`. For ball dynamics of radius `r` the time to reach `P`
//! is `dist(x, P)/r`, computed exactly through its square.

use num_traits::{One, Signed, Zero};

use super::dynamics::{Dynamics, Shape};
use super::target::Target;
use crate::error::{Error, Result};
use crate::geometry::linalg::{add, dot, scale, sub, zeros};
use crate::geometry::lp::{LinearProgram, Relation, Sense};
use crate::geometry::rat::{ExtRat, Rat, Value};
use crate::geometry::{nearest_point, HPolyhedron};

/// Optimal data certifying `T(x) = t`: `w = x + t·q ∈ Ω`, `q ∈ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeWitness {
    pub t: Rat,
    pub w: Vec<Rat>,
    /// Index of the target piece containing `w`.
    pub piece: usize,
    pub q: Vec<Rat>,
    /// Weights on the vertices of `F` with `Σλ = t` and `Σλᵢvᵢ = t·q`
    /// (empty for ball dynamics).
    pub lambda: Vec<Rat>,
}

impl TimeWitness {
    /// Re-verifies every algebraic claim of the witness exactly.
    pub fn verify(&self, f: &Dynamics, omega: &Target, x: &[Rat]) -> bool {
        let Some(piece) = omega.pieces().get(self.piece) else {
            return false;
        };
        if self.t.is_negative() || add(x, &scale(&self.t, &self.q)) != self.w {
            return false;
        }
        if !piece.contains(&self.w) || !f.contains(&self.q) {
            return false;
        }
        match f.vertices() {
            Some(vs) => {
                if self.lambda.len() != vs.len() || self.lambda.iter().any(Signed::is_negative) {
                    return false;
                }
                let sum: Rat = self.lambda.iter().sum();
                let mut comb = zeros(f.dim());
                for (l, v) in self.lambda.iter().zip(vs) {
                    comb = add(&comb, &scale(l, v));
                }
                sum == self.t && comb == scale(&self.t, &self.q)
            }
            None => self.lambda.is_empty(),
        }
    }
}

/// Result of a minimal-time evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeEval {
    pub value: Value,
    /// Present whenever the value is finite and rational.
    pub witness: Option<TimeWitness>,
}

/// Time to reach one convex piece under polytope dynamics, with weights.
pub(crate) fn piece_time(vertices: &[Vec<Rat>], piece: &HPolyhedron, x: &[Rat]) -> Option<(Rat, Vec<Rat>)> {
    if piece.contains(x) {
        return Some((Rat::zero(), vec![Rat::zero(); vertices.len()]));
    }
    let k = vertices.len();
    let mut lp = LinearProgram::new(k, Sense::Minimize);
    lp.set_objective(vec![Rat::one(); k]).ok()?;
    for h in piece.halfspaces() {
        let row = vertices.iter().map(|v| dot(&h.normal, v)).collect();
        lp.add(row, Relation::Le, &h.offset - dot(&h.normal, x)).ok()?;
    }
    let r = lp.solve();
    r.value.map(|v| (v, r.point))
}

fn polytope_witness(vertices: &[Vec<Rat>], x: &[Rat], t: Rat, lambda: Vec<Rat>, piece: usize) -> TimeWitness {
    let dim = x.len();
    let mut shift = zeros(dim);
    for (l, v) in lambda.iter().zip(vertices) {
        if !l.is_zero() {
            shift = add(&shift, &scale(l, v));
        }
    }
    let w = add(x, &shift);
    let q = if t.is_zero() {
        vertices[0].clone()
    } else {
        scale(&(Rat::one() / &t), &shift)
    };
    TimeWitness {
        t,
        w,
        piece,
        q,
        lambda,
    }
}

/// Squared Euclidean distances to each piece and the nearest points.
fn ball_piece_data(omega: &Target, x: &[Rat]) -> Vec<(Rat, Vec<Rat>)> {
    omega
        .pieces()
        .iter()
        .map(|p| {
            let (w, d2) = nearest_point(p, x);
            (d2, w)
        })
        .collect()
}

/// `T^F_Ω(x)` with an optimal witness when the value is finite and exact.
pub fn minimal_time(f: &Dynamics, omega: &Target, x: &[Rat]) -> Result<TimeEval> {
    Error::dims(f.dim(), omega.dim())?;
    Error::dims(f.dim(), x.len())?;
    match f.shape() {
        Shape::Polytope(p) => {
            let vs = p.vertices();
            let mut best: Option<(usize, Rat, Vec<Rat>)> = None;
            for (i, piece) in omega.pieces().iter().enumerate() {
                if let Some((t, lambda)) = piece_time(vs, piece, x) {
                    if best.as_ref().is_none_or(|(_, bt, _)| &t < bt) {
                        best = Some((i, t, lambda));
                    }
                }
            }
            Ok(match best {
                None => TimeEval {
                    value: Value::Infinite,
                    witness: None,
                },
                Some((i, t, lambda)) => TimeEval {
                    value: Value::Exact(t.clone()),
                    witness: Some(polytope_witness(vs, x, t, lambda, i)),
                },
            })
        }
        Shape::Ball { radius } => {
            let data = ball_piece_data(omega, x);
            let (i, (d2, w)) = data
                .into_iter()
                .enumerate()
                .min_by(|a, b| a.1 .0.cmp(&b.1 .0).then(a.0.cmp(&b.0)))
                .expect("target is nonempty");
            let t_sq = &d2 / (radius * radius);
            let value = Value::sqrt_of(&t_sq);
            let witness = value.exact().map(|t| {
                let q = if t.is_zero() {
                    zeros(x.len())
                } else {
                    scale(&(Rat::one() / t), &sub(&w, x))
                };
                TimeWitness {
                    t: t.clone(),
                    w,
                    piece: i,
                    q,
                    lambda: Vec::new(),
                }
            });
            Ok(TimeEval { value, witness })
        }
    }
}

/// Exact `T(x)`; errors when the value is irrational (ball dynamics).
pub fn minimal_time_exact(f: &Dynamics, omega: &Target, x: &[Rat]) -> Result<ExtRat> {
    match minimal_time(f, omega, x)?.value {
        Value::Exact(t) => Ok(ExtRat::Finite(t)),
        Value::Infinite => Ok(ExtRat::Infinite),
        Value::Enclosed(iv) => Err(Error::Unsupported(format!(
            "minimal time is irrational here (enclosed by {iv})"
        ))),
    }
}

/// Exact square of the minimal time (finite values only).
pub fn minimal_time_sq(f: &Dynamics, omega: &Target, x: &[Rat]) -> Result<Option<Rat>> {
    Error::dims(f.dim(), x.len())?;
    match f.shape() {
        Shape::Ball { radius } => Ok(ball_piece_data(omega, x)
            .into_iter()
            .map(|(d2, _)| d2 / (radius * radius))
            .min()),
        Shape::Polytope(_) => Ok(minimal_time_exact(f, omega, x)?
            .finite()
            .map(|t| t * t)),
    }
}

/// Decides `T(x) ≤ r` exactly for either kind of dynamics.
pub fn time_at_most(f: &Dynamics, omega: &Target, x: &[Rat], r: &Rat) -> Result<bool> {
    if r.is_negative() {
        return Ok(false);
    }
    Ok(match minimal_time_sq(f, omega, x)? {
        Some(t2) => t2 <= r * r,
        None => false,
    })
}

/// Per-piece exact times (polytope dynamics).
pub fn piece_times(f: &Dynamics, omega: &Target, x: &[Rat]) -> Result<Vec<ExtRat>> {
    let p = f.require_polytope("per-piece times")?;
    Error::dims(f.dim(), x.len())?;
    Ok(omega
        .pieces()
        .iter()
        .map(|piece| match piece_time(p.vertices(), piece, x) {
            Some((t, _)) => ExtRat::Finite(t),
            None => ExtRat::Infinite,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};
    use crate::geometry::Halfspace;

    fn strip_box() -> (Dynamics, Target) {
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        (f, o)
    }

    #[test]
    fn halfline_scene_is_infinite() {
        let f = Dynamics::from_vertices(vec![ivec(&[0]), ivec(&[1])]).unwrap();
        let o = Target::convex(HPolyhedron::new(1, vec![Halfspace::new(ivec(&[1]), int(0))]).unwrap());
        let r = minimal_time(&f, &o, &ivec(&[1])).unwrap();
        assert_eq!(r.value, Value::Infinite);
        assert!(r.witness.is_none());
        assert_eq!(minimal_time(&f, &o, &ivec(&[-1])).unwrap().value, Value::Exact(int(0)));
        assert_eq!(minimal_time(&f, &o, &ivec(&[-1])).unwrap().witness.unwrap().t, int(0));
    }

    #[test]
    fn strip_box_value_and_witness() {
        let (f, o) = strip_box();
        let x = vec![int(2), rat(1, 2)];
        let r = minimal_time(&f, &o, &x).unwrap();
        assert_eq!(r.value, Value::Exact(int(1)));
        let w = r.witness.unwrap();
        assert_eq!(w.w, vec![int(1), rat(1, 2)]);
        assert!(w.verify(&f, &o, &x));
    }

    #[test]
    fn inside_is_zero_with_trivial_witness() {
        let (f, o) = strip_box();
        let x = vec![rat(1, 3), int(0)];
        let r = minimal_time(&f, &o, &x).unwrap();
        assert_eq!(r.value, Value::Exact(int(0)));
        let w = r.witness.unwrap();
        assert_eq!(w.w, x);
        assert!(w.verify(&f, &o, &x));
    }

    #[test]
    fn box_complement_inside_value() {
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let pieces = vec![
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[-1, 0]), int(-1))]).unwrap(),
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[1, 0]), int(-1))]).unwrap(),
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[0, -1]), int(-1))]).unwrap(),
            HPolyhedron::new(2, vec![Halfspace::new(ivec(&[0, 1]), int(-1))]).unwrap(),
        ];
        let o = Target::from_pieces(2, pieces).unwrap();
        let x = vec![rat(1, 2), rat(1, 2)];
        let r = minimal_time(&f, &o, &x).unwrap();
        assert_eq!(r.value, Value::Exact(rat(1, 2)));
        assert!(r.witness.unwrap().verify(&f, &o, &x));
    }

    #[test]
    fn ball_dynamics_exact_and_enclosed() {
        let f = Dynamics::ball(2, int(2)).unwrap();
        let o = Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap());
        let x = ivec(&[4, 5]);
        let r = minimal_time(&f, &o, &x).unwrap();
        assert_eq!(r.value, Value::Exact(rat(5, 2)));
        assert!(r.witness.unwrap().verify(&f, &o, &x));
        let r = minimal_time(&f, &o, &ivec(&[2, 2])).unwrap();
        assert!(matches!(r.value, Value::Enclosed(_)));
        assert!(time_at_most(&f, &o, &ivec(&[2, 2]), &rat(3, 4)).unwrap());
        assert!(!time_at_most(&f, &o, &ivec(&[2, 2]), &rat(7, 10)).unwrap());
    }
}
