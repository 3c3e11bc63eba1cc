//! The constant velocity set `F`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{neg, norm_sq, unit, zeros};
use crate::geometry::lp::{LinearProgram, Relation, Sense};
use crate::geometry::polytope::in_hull;
use crate::geometry::rat::{ExtRat, Rat, RatInterval, Value};
use crate::geometry::{PolyhedralCone, VPolytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Polytope(VPolytope),
    /// Euclidean ball of the given radius centred at the origin.
    Ball { radius: Rat },
}

/// A compact convex velocity set with cached derived data.
#[derive(Clone, Debug)]
pub struct Dynamics {
    dim: usize,
    shape: Shape,
    /// `conv(F ∪ {0})`, the unit sublevel set of the gauge (polytopes only).
    sublevel: Option<VPolytope>,
    bound_sq: Rat,
    contains_origin: bool,
    origin_interior: bool,
}

/// Optimal gauge representation `u = Σ λᵢ vᵢ` with `Σ λᵢ` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSolution {
    pub value: Rat,
    pub lambda: Vec<Rat>,
}

impl Dynamics {
    pub fn polytope(p: VPolytope) -> Self {
        let p = p.canonical();
        let dim = p.dim();
        let bound_sq = p.max_norm_sq();
        let contains_origin = in_hull(p.vertices(), &zeros(dim));
        let sublevel = p.with_origin();
        let mut d = Dynamics {
            dim,
            shape: Shape::Polytope(p),
            sublevel: Some(sublevel),
            bound_sq,
            contains_origin,
            origin_interior: false,
        };
        // 0 ∈ int F iff every ±eᵢ has a finite gauge: the 2n scaled axis
        // points then span a neighbourhood of the origin inside F.
        d.origin_interior = contains_origin
            && (0..dim).all(|i| {
                let e = unit(dim, i);
                d.gauge_lp(&e).is_some() && d.gauge_lp(&neg(&e)).is_some()
            });
        d
    }

    pub fn from_vertices(vertices: Vec<Vec<Rat>>) -> Result<Self> {
        Ok(Self::polytope(VPolytope::from_points(vertices)?))
    }

    pub fn ball(dim: usize, radius: Rat) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !radius.is_positive() {
            return Err(Error::InvalidInput("ball radius must be positive".into()));
        }
        Ok(Dynamics {
            dim,
            bound_sq: &radius * &radius,
            shape: Shape::Ball { radius },
            sublevel: None,
            contains_origin: true,
            origin_interior: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn as_polytope(&self) -> Option<&VPolytope> {
        match &self.shape {
            Shape::Polytope(p) => Some(p),
            Shape::Ball { .. } => None,
        }
    }

    /// Polytope view or a typed error for ball dynamics.
    pub fn require_polytope(&self, operation: &str) -> Result<&VPolytope> {
        self.as_polytope().ok_or_else(|| {
            Error::Unsupported(format!("{operation} needs polytope dynamics"))
        })
    }

    pub fn vertices(&self) -> Option<&[Vec<Rat>]> {
        self.as_polytope().map(VPolytope::vertices)
    }

    pub fn ball_radius(&self) -> Option<&Rat> {
        match &self.shape {
            Shape::Ball { radius } => Some(radius),
            Shape::Polytope(_) => None,
        }
    }

    /// `G = conv(F ∪ {0})`.
    pub fn sublevel_body(&self) -> Option<&VPolytope> {
        self.sublevel.as_ref()
    }

    /// `‖F‖²`, exact.
    pub fn bound_sq(&self) -> &Rat {
        &self.bound_sq
    }

    /// Certified enclosure of `‖F‖`.
    pub fn bound(&self) -> RatInterval {
        crate::geometry::rat::sqrt_interval(&self.bound_sq)
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_origin
    }

    pub fn origin_interior(&self) -> bool {
        self.origin_interior
    }

    pub fn contains(&self, q: &[Rat]) -> bool {
        if q.len() != self.dim {
            return false;
        }
        match &self.shape {
            Shape::Polytope(p) => p.contains(q),
            Shape::Ball { radius } => norm_sq(q) <= radius * radius,
        }
    }

    /// `σ_F(x*) = sup_{v∈F} ⟨x*, v⟩`.
    pub fn support(&self, xstar: &[Rat]) -> Result<Value> {
        Error::dims(self.dim, xstar.len())?;
        Ok(match &self.shape {
            Shape::Polytope(p) => Value::Exact(p.support(xstar)),
            Shape::Ball { radius } => Value::sqrt_of(&(radius * radius * norm_sq(xstar))),
        })
    }

    /// `σ_F(x*)` for polytope dynamics.
    pub fn support_exact(&self, xstar: &[Rat]) -> Result<Rat> {
        Error::dims(self.dim, xstar.len())?;
        Ok(self.require_polytope("exact support evaluation")?.support(xstar))
    }

    /// Minimal `Σλ` with `Σλᵢvᵢ = u`, `λ ≥ 0`; `None` when `u ∉ cone(F)`.
    pub fn gauge_lp(&self, u: &[Rat]) -> Option<GaugeSolution> {
        let p = self.as_polytope()?;
        let vs = p.vertices();
        let k = vs.len();
        let mut lp = LinearProgram::new(k, Sense::Minimize);
        lp.set_objective(vec![Rat::one(); k]).ok()?;
        for i in 0..self.dim {
            lp.add(vs.iter().map(|v| v[i].clone()).collect(), Relation::Eq, u[i].clone())
                .ok()?;
        }
        let r = lp.solve();
        r.value.map(|value| GaugeSolution {
            value,
            lambda: r.point,
        })
    }

    /// `ρ_F(u) = inf{t ≥ 0 : u ∈ tF}`.
    pub fn gauge(&self, u: &[Rat]) -> Result<Value> {
        Error::dims(self.dim, u.len())?;
        if u.iter().all(Zero::is_zero) {
            return Ok(Value::Exact(Rat::zero()));
        }
        Ok(match &self.shape {
            Shape::Polytope(_) => match self.gauge_lp(u) {
                Some(s) => Value::Exact(s.value),
                None => Value::Infinite,
            },
            Shape::Ball { radius } => Value::sqrt_of(&(norm_sq(u) / (radius * radius))),
        })
    }

    /// Exact gauge for polytope dynamics.
    pub fn gauge_exact(&self, u: &[Rat]) -> Result<ExtRat> {
        self.require_polytope("exact gauge evaluation")?;
        match self.gauge(u)? {
            Value::Exact(r) => Ok(ExtRat::Finite(r)),
            Value::Infinite => Ok(ExtRat::Infinite),
            Value::Enclosed(_) => unreachable!("polytope gauges are rational"),
        }
    }

    /// `s·F` for `s > 0`.
    pub fn scaled(&self, s: &Rat) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::InvalidInput("scale factor must be positive".into()));
        }
        match &self.shape {
            Shape::Polytope(p) => Ok(Self::polytope(p.scale(s))),
            Shape::Ball { radius } => Self::ball(self.dim, radius * s),
        }
    }

    /// `F*₊ = {x* : ⟨x*, v⟩ ≥ 0 ∀ v ∈ F}`.
    pub fn positive_dual_cone(&self) -> PolyhedralCone {
        match &self.shape {
            Shape::Polytope(p) => {
                PolyhedralCone::from_halfspaces(self.dim, p.vertices().iter().map(|v| neg(v)).collect())
                    .expect("vertex dimensions match")
            }
            // A ball around the origin pairs negatively with every nonzero x*.
            Shape::Ball { .. } => PolyhedralCone::zero(self.dim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    fn segment() -> Dynamics {
        Dynamics::from_vertices(vec![ivec(&[-1, 0]), ivec(&[1, 0])]).unwrap()
    }

    #[test]
    fn gauge_examples() {
        let f = segment();
        assert_eq!(f.gauge(&ivec(&[3, 0])).unwrap(), Value::Exact(int(3)));
        assert_eq!(f.gauge(&ivec(&[1, 1])).unwrap(), Value::Infinite);
        assert_eq!(f.gauge(&ivec(&[0, 0])).unwrap(), Value::Exact(int(0)));
    }

    #[test]
    fn bounds_and_flags() {
        let f = segment();
        assert_eq!(f.bound_sq(), &int(1));
        assert!(f.contains_origin());
        assert!(!f.origin_interior());
        let b = Dynamics::ball(2, int(1)).unwrap();
        assert_eq!(b.bound_sq(), &int(1));
        assert!(b.origin_interior());
        let g = Dynamics::from_vertices(vec![ivec(&[3, 4]), ivec(&[0, 0])]).unwrap();
        assert_eq!(g.bound_sq(), &int(25));
        let square = Dynamics::from_vertices(vec![
            ivec(&[-1, -1]),
            ivec(&[-1, 1]),
            ivec(&[1, -1]),
            ivec(&[1, 1]),
        ])
        .unwrap();
        assert!(square.origin_interior());
    }

    #[test]
    fn ball_support_interval() {
        let b = Dynamics::ball(2, int(2)).unwrap();
        assert_eq!(b.support(&ivec(&[3, 4])).unwrap(), Value::Exact(int(10)));
        match b.support(&ivec(&[1, 1])).unwrap() {
            Value::Enclosed(iv) => {
                assert!(&iv.lo * &iv.lo < int(8) && &iv.hi * &iv.hi > int(8));
            }
            other => panic!("expected an enclosure, got {other:?}"),
        }
        assert_eq!(b.gauge(&ivec(&[0, 3])).unwrap(), Value::Exact(rat(3, 2)));
    }

    #[test]
    fn positive_dual_cone_of_segment() {
        let c = segment().positive_dual_cone();
        assert!(c.contains(&ivec(&[0, 7])));
        assert!(!c.contains(&ivec(&[1, 0])));
    }
}
