//! The definitional test for convex minimal time functions: `x* ∈ ∂T(x̄)`
//! iff `⟨x*, x − x̄⟩ ≤ T(x) − T(x̄)` for every `x`, checked exactly at a finite
//! set of rational test points.
//!
//! The test points include every structural direction at several small
//! scales. Near `x̄`, the directional derivative of the piecewise-linear `T`
//! is linear between consecutive structural directions, so a violation
//! always shows at one of them; for convex `T` the local inequality implies
//! the global one. Rational points on circles, target vertices and the
//! projection complete the set.

use num_traits::{One, Zero};

use super::structural_directions;
use crate::error::{Error, Result};
use crate::geometry::linalg::{add, dot, scale, sub};
use crate::geometry::rat::{int, rat, to_f64, vec_to_f64, ExtRat};
use crate::geometry::Rat;
use crate::mintime::{minimal_time_exact, projection_set, Dynamics, Target};

/// Exact values of `T − T(x̄)` at the test points around `x̄`.
#[derive(Clone, Debug)]
pub struct DefinitionalProbe {
    xbar: Vec<Rat>,
    /// `(x − x̄, T(x) − T(x̄))`, with `None` where `T(x) = ∞`.
    samples: Vec<(Vec<Rat>, Option<Rat>)>,
    /// Floating-point copies of the samples, used to settle clear cases
    /// before falling back to exact arithmetic.
    approx: Vec<(Vec<f64>, f64)>,
}

/// Relative gap beyond which the floating-point sign of
/// `⟨x*, x − x̄⟩ − (T(x) − T(x̄))` is trusted.
const FILTER_GAP: f64 = 1e-9;

/// Sign of `⟨x*, d⟩ − δ` when floating point settles it.
fn filtered_sign(xstar: &[f64], d: &[f64], delta: f64) -> Option<std::cmp::Ordering> {
    let lhs: f64 = xstar.iter().zip(d).map(|(a, b)| a * b).sum();
    let scale = 1.0 + delta.abs() + xstar.iter().zip(d).map(|(a, b)| (a * b).abs()).sum::<f64>();
    let gap = lhs - delta;
    if gap > FILTER_GAP * scale {
        Some(std::cmp::Ordering::Greater)
    } else if gap < -FILTER_GAP * scale {
        Some(std::cmp::Ordering::Less)
    } else {
        None
    }
}

fn test_points(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let dim = xbar.len();
    let mut offsets: Vec<Vec<Rat>> = Vec::new();
    let scales = [rat(1, 1024), rat(1, 64), rat(1, 8), rat(1, 2), int(2)];
    for d in structural_directions(f, omega) {
        for s in &scales {
            offsets.push(scale(s, &d));
        }
    }
    if dim == 2 {
        // Rational points ((1 − t²), 2t)/(1 + t²) on the unit circle.
        for k in -8i64..=8 {
            let t = rat(k, 8);
            let den = Rat::one() + &t * &t;
            let u = vec![(Rat::one() - &t * &t) / &den, (int(2) * &t) / &den];
            for s in [rat(1, 64), rat(1, 4), int(1)] {
                offsets.push(scale(&s, &u));
                offsets.push(scale(&(-s), &u));
            }
        }
    } else {
        for i in 0..dim {
            for k in -6i64..=6 {
                let mut e = vec![Rat::zero(); dim];
                e[i] = rat(k, 2);
                offsets.push(e);
            }
        }
    }
    let mut points: Vec<Vec<Rat>> = offsets.iter().map(|o| add(xbar, o)).collect();
    for piece in omega.pieces() {
        if let Ok(v) = piece.vrep() {
            points.extend(v.vertices);
        }
    }
    if let Ok(p) = projection_set(f, omega, xbar) {
        if let Ok(vs) = p.vertices() {
            points.extend(vs);
        }
    }
    Ok(points)
}

impl DefinitionalProbe {
    pub fn new(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<Self> {
        Error::dims(f.dim(), xbar.len())?;
        if !omega.is_convex() {
            return Err(Error::WrongRegime(
                "the definitional subgradient test needs a convex target".into(),
            ));
        }
        let tbar = match minimal_time_exact(f, omega, xbar)? {
            ExtRat::Finite(t) => t,
            ExtRat::Infinite => return Err(Error::InfiniteTime),
        };
        let mut samples = Vec::new();
        for x in test_points(f, omega, xbar)? {
            let delta = minimal_time_exact(f, omega, &x)?.finite().map(|t| t - &tbar);
            samples.push((sub(&x, xbar), delta));
        }
        let approx = samples
            .iter()
            .map(|(d, delta)| (vec_to_f64(d), delta.as_ref().map_or(f64::INFINITY, to_f64)))
            .collect();
        Ok(DefinitionalProbe {
            xbar: xbar.to_vec(),
            samples,
            approx,
        })
    }

    pub fn xbar(&self) -> &[Rat] {
        &self.xbar
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `⟨x*, x − x̄⟩ ≤ T(x) − T(x̄)` at every test point.
    pub fn is_subgradient(&self, xstar: &[Rat]) -> bool {
        self.violation(xstar).is_none()
    }

    /// A test point violating the subgradient inequality.
    pub fn violation(&self, xstar: &[Rat]) -> Option<Vec<Rat>> {
        let xf = vec_to_f64(xstar);
        self.samples.iter().zip(&self.approx).find_map(|((d, delta), (df, deltaf))| {
            let delta = delta.as_ref()?;
            let violated = match filtered_sign(&xf, df, *deltaf) {
                Some(o) => o == std::cmp::Ordering::Greater,
                None => &dot(xstar, d) > delta,
            };
            violated.then(|| add(&self.xbar, d))
        })
    }

    /// `⟨x*, x − x̄⟩ ≤ 0` at every test point of the domain: the normal cone
    /// to `dom T`, which is the singular subdifferential of a convex `T`.
    pub fn is_horizon_subgradient(&self, xstar: &[Rat]) -> bool {
        let xf = vec_to_f64(xstar);
        self.samples.iter().zip(&self.approx).all(|((d, delta), (df, _))| {
            delta.is_none()
                || match filtered_sign(&xf, df, 0.0) {
                    Some(o) => o != std::cmp::Ordering::Greater,
                    None => !(dot(xstar, d) > Rat::zero()),
                }
        })
    }
}

pub fn definitional_convex_subgradient_check(
    f: &Dynamics,
    omega: &Target,
    xbar: &[Rat],
    xstar: &[Rat],
) -> Result<bool> {
    Error::dims(f.dim(), xstar.len())?;
    Ok(DefinitionalProbe::new(f, omega, xbar)?.is_subgradient(xstar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::ivec;
    use crate::geometry::HPolyhedron;

    fn strip_box() -> (Dynamics, Target) {
        (
            Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap(),
            Target::convex(HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap()),
        )
    }

    #[test]
    fn strip_box_side_point() {
        let (f, omega) = strip_box();
        let x = ivec(&[1, 0]);
        assert!(definitional_convex_subgradient_check(&f, &omega, &x, &ivec(&[1, 0])).unwrap());
        assert!(definitional_convex_subgradient_check(&f, &omega, &x, &ivec(&[0, 0])).unwrap());
        assert!(!definitional_convex_subgradient_check(&f, &omega, &x, &ivec(&[0, 1])).unwrap());
        assert!(!definitional_convex_subgradient_check(&f, &omega, &x, &[rat(1, 2), rat(1, 100)]).unwrap());
        let p = DefinitionalProbe::new(&f, &omega, &x).unwrap();
        assert!(p.is_horizon_subgradient(&ivec(&[0, 0])));
        assert!(!p.is_horizon_subgradient(&ivec(&[1, 0])));
    }

    #[test]
    fn top_point_has_vertical_horizon_normals() {
        let (f, omega) = strip_box();
        let p = DefinitionalProbe::new(&f, &omega, &ivec(&[0, 1])).unwrap();
        assert!(p.is_horizon_subgradient(&ivec(&[0, 5])));
        assert!(!p.is_horizon_subgradient(&ivec(&[1, 5])));
        assert!(p.is_subgradient(&ivec(&[0, 3])));
    }

    #[test]
    fn nonconvex_target_is_rejected() {
        let f = Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap();
        let a = HPolyhedron::boxed(&ivec(&[0, 0]), &ivec(&[1, 1])).unwrap();
        let b = HPolyhedron::boxed(&ivec(&[2, 0]), &ivec(&[3, 1])).unwrap();
        let omega = Target::from_pieces(2, vec![a, b]).unwrap();
        assert!(matches!(
            DefinitionalProbe::new(&f, &omega, &ivec(&[0, 0])),
            Err(Error::WrongRegime(_))
        ));
    }
}
