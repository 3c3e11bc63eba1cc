//! Halfspace descriptions of closed convex polyhedra.

use num_traits::{One, Signed, Zero};

use super::dd::{cone_generators, cone_halfspaces, ConeGenerators};
use super::linalg::{dot, is_zero, lex_cmp, scale, unit, zeros};
use super::lp::{LinearProgram, LpResult, LpStatus, Relation, Sense};
use super::rat::{fmt_rat, ExtRat, Rat};
use crate::error::{Error, Result};

/// Dimension limit for generator enumeration exposed through public APIs.
pub const MAX_ENUM_DIM: usize = 3;

/// The closed halfspace `⟨normal, x⟩ ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    /// `⟨normal, x⟩ − offset`: nonpositive exactly on the halfspace.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot(&self.normal, x) - &self.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.slack(x).is_positive()
    }

    pub fn is_tight(&self, x: &[Rat]) -> bool {
        self.slack(x).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Same halfspace scaled to a canonical positive multiple.
    pub fn normalized(&self) -> Self {
        let Some(lead) = self.normal.iter().find(|v| !v.is_zero()).map(|v| v.abs()) else {
            return self.clone();
        };
        let inv = Rat::one() / lead;
        Halfspace {
            normal: scale(&inv, &self.normal),
            offset: &self.offset * inv,
        }
    }

    pub fn describe(&self) -> String {
        let terms: Vec<String> = self.normal.iter().map(fmt_rat).collect();
        format!("[{}]·x <= {}", terms.join(", "), fmt_rat(&self.offset))
    }
}

/// Builds and solves `opt c·x` over `x` free subject to halfspaces and
/// equalities. Emptiness is not pre-checked.
pub(crate) fn solve_over(
    dim: usize,
    halfspaces: &[Halfspace],
    equalities: &[Halfspace],
    objective: &[Rat],
    sense: Sense,
) -> LpResult<Rat> {
    let mut lp = LinearProgram::new(dim, sense);
    lp.all_free();
    lp.set_objective(objective.to_vec()).expect("objective dimension");
    for h in halfspaces {
        lp.add(h.normal.clone(), Relation::Le, h.offset.clone())
            .expect("halfspace dimension");
    }
    for e in equalities {
        lp.add(e.normal.clone(), Relation::Eq, e.offset.clone())
            .expect("equality dimension");
    }
    lp.solve()
}

/// A feasible point of the system, if any.
pub(crate) fn feasible_point(dim: usize, halfspaces: &[Halfspace]) -> Option<Vec<Rat>> {
    let r = solve_over(dim, halfspaces, &[], &zeros(dim), Sense::Minimize);
    r.is_optimal().then_some(r.point)
}

/// Solves an LP over a polyhedron intersected with equality constraints
/// `⟨a, x⟩ = b` (given as halfspaces read with equality).
pub fn lp_solve(
    objective: &[Rat],
    sense: Sense,
    poly: &HPolyhedron,
    equalities: &[Halfspace],
) -> Result<LpResult<Rat>> {
    Error::dims(poly.dim, objective.len())?;
    for e in equalities {
        Error::dims(poly.dim, e.dim())?;
    }
    Ok(solve_over(poly.dim, &poly.halfspaces, equalities, objective, sense))
}

/// Generator description `conv(vertices) + cone(rays) + span(lines)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub dim: usize,
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
    pub lines: Vec<Vec<Rat>>,
}

impl VRep {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    /// Facet description of the generated polyhedron.
    pub fn to_halfspaces(&self) -> Vec<Halfspace> {
        let n = self.dim + 1;
        let mut rays: Vec<Vec<Rat>> = Vec::new();
        for v in &self.vertices {
            let mut g = vec![Rat::one()];
            g.extend(v.iter().cloned());
            rays.push(g);
        }
        for r in &self.rays {
            let mut g = vec![Rat::zero()];
            g.extend(r.iter().cloned());
            rays.push(g);
        }
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let mut g = vec![Rat::zero()];
                g.extend(l.iter().cloned());
                g
            })
            .collect();
        let rows = cone_halfspaces(n, &ConeGenerators { rays, lines });
        rows.into_iter()
            .filter(|row| !is_zero(&row[1..]))
            .map(|row| Halfspace::new(row[1..].to_vec(), -row[0].clone()))
            .collect()
    }
}

/// A nonempty closed convex polyhedron `{x : Ax ≤ b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl HPolyhedron {
    /// Validates dimensions and nonemptiness.
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        Self::try_new(dim, halfspaces)?
            .ok_or_else(|| Error::EmptySet("polyhedron has no feasible point".into()))
    }

    /// Like [`HPolyhedron::new`] but reports emptiness as `Ok(None)`.
    pub fn try_new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Option<Self>> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for h in &halfspaces {
            Error::dims(dim, h.dim())?;
        }
        Ok(feasible_point(dim, &halfspaces).map(|_| HPolyhedron { dim, halfspaces }))
    }

    /// Caller guarantees nonemptiness and consistent dimensions.
    pub(crate) fn from_trusted(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        debug_assert!(halfspaces.iter().all(|h| h.dim() == dim));
        HPolyhedron { dim, halfspaces }
    }

    pub fn whole_space(dim: usize) -> Self {
        HPolyhedron {
            dim,
            halfspaces: Vec::new(),
        }
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn boxed(lo: &[Rat], hi: &[Rat]) -> Result<Self> {
        Error::dims(lo.len(), hi.len())?;
        let n = lo.len();
        let mut hs = Vec::with_capacity(2 * n);
        for i in 0..n {
            hs.push(Halfspace::new(unit(n, i), hi[i].clone()));
            hs.push(Halfspace::new(scale(&-Rat::one(), &unit(n, i)), -lo[i].clone()));
        }
        Self::new(n, hs)
    }

    pub fn singleton(x: &[Rat]) -> Self {
        let lo = x.to_vec();
        Self::boxed(&lo, &lo).expect("a point is a nonempty box")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Indices of constraints tight at `x`.
    pub fn active(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.halfspaces.len())
            .filter(|&i| self.halfspaces[i].is_tight(x))
            .collect()
    }

    pub fn some_point(&self) -> Vec<Rat> {
        feasible_point(self.dim, &self.halfspaces).expect("polyhedron is nonempty")
    }

    /// `sup ⟨c, x⟩` over the polyhedron.
    pub fn maximize(&self, c: &[Rat]) -> ExtRat {
        let r = solve_over(self.dim, &self.halfspaces, &[], c, Sense::Maximize);
        match r.status {
            LpStatus::Optimal => ExtRat::Finite(r.value.expect("optimal value")),
            LpStatus::Unbounded => ExtRat::Infinite,
            LpStatus::Infeasible => unreachable!("polyhedron is nonempty"),
        }
    }

    /// Adds constraints; `None` if the result is empty.
    pub fn with(&self, extra: impl IntoIterator<Item = Halfspace>) -> Option<Self> {
        let mut hs = self.halfspaces.clone();
        hs.extend(extra);
        feasible_point(self.dim, &hs).map(|_| HPolyhedron {
            dim: self.dim,
            halfspaces: hs,
        })
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim, other.dim);
        self.with(other.halfspaces.iter().cloned())
    }

    /// `true` iff every point satisfies `h`.
    pub fn implies(&self, h: &Halfspace) -> bool {
        match self.maximize(&h.normal) {
            ExtRat::Finite(v) => v <= h.offset,
            ExtRat::Infinite => false,
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.halfspaces.iter().all(|h| self.implies(h))
    }

    pub fn set_eq(&self, other: &Self) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    pub fn is_bounded(&self) -> bool {
        (0..self.dim).all(|i| {
            let e = unit(self.dim, i);
            self.maximize(&e).is_finite() && self.maximize(&scale(&-Rat::one(), &e)).is_finite()
        })
    }

    /// Drops constraints implied by the others and normalizes the rest.
    pub fn reduced(&self) -> Self {
        let mut hs: Vec<Halfspace> = self.halfspaces.iter().map(Halfspace::normalized).collect();
        hs.sort_by(|a, b| lex_cmp(&a.normal, &b.normal).then(a.offset.cmp(&b.offset)));
        hs.dedup_by(|b, a| a.normal == b.normal);
        let mut i = 0;
        while i < hs.len() {
            let h = hs.remove(i);
            let others = HPolyhedron {
                dim: self.dim,
                halfspaces: hs.clone(),
            };
            if is_zero(&h.normal) || others.implies(&h) {
                continue;
            }
            hs.insert(i, h);
            i += 1;
        }
        HPolyhedron {
            dim: self.dim,
            halfspaces: hs,
        }
    }

    /// Generators of the polyhedron (any dimension; exponential in the
    /// worst case).
    pub(crate) fn generators(&self) -> VRep {
        let n = self.dim + 1;
        let mut rows: Vec<Vec<Rat>> = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut r = vec![-h.offset.clone()];
                r.extend(h.normal.iter().cloned());
                r
            })
            .collect();
        let mut t_nonneg = zeros(n);
        t_nonneg[0] = -Rat::one();
        rows.push(t_nonneg);
        let g = cone_generators(n, &rows);
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in g.rays {
            if r[0].is_zero() {
                rays.push(r[1..].to_vec());
            } else {
                let inv = Rat::one() / &r[0];
                vertices.push(scale(&inv, &r[1..]));
            }
        }
        vertices.sort_by(|a, b| lex_cmp(a, b));
        vertices.dedup();
        let lines = g.lines.into_iter().map(|l| l[1..].to_vec()).collect();
        VRep {
            dim: self.dim,
            vertices,
            rays,
            lines,
        }
    }

    /// Generator description, restricted to dimension ≤ 3.
    pub fn vrep(&self) -> Result<VRep> {
        if self.dim > MAX_ENUM_DIM {
            return Err(Error::UnsupportedDimension {
                operation: "vertex enumeration",
                dim: self.dim,
                limit: MAX_ENUM_DIM,
            });
        }
        Ok(self.generators())
    }

    pub fn translate(&self, v: &[Rat]) -> Self {
        HPolyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.clone(), &h.offset + dot(&h.normal, v)))
                .collect(),
        }
    }

    /// Image under `x ↦ s·x`, `s > 0`.
    pub fn scale(&self, s: &Rat) -> Self {
        assert!(s.is_positive());
        HPolyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.clone(), &h.offset * s))
                .collect(),
        }
    }

    /// Image under `x ↦ −x`.
    pub fn negate(&self) -> Self {
        HPolyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| Halfspace::new(h.normal.iter().map(|v| -v).collect(), h.offset.clone()))
                .collect(),
        }
    }

    /// Unique point when the polyhedron is a singleton.
    pub fn as_point(&self) -> Option<Vec<Rat>> {
        let p = self.some_point();
        (0..self.dim)
            .all(|i| {
                let e = unit(self.dim, i);
                self.maximize(&e) == ExtRat::Finite(p[i].clone())
                    && self.maximize(&scale(&-Rat::one(), &e)) == ExtRat::Finite(-p[i].clone())
            })
            .then_some(p)
    }

    pub fn describe(&self) -> Vec<String> {
        self.halfspaces.iter().map(Halfspace::describe).collect()
    }
}

/// Compares two point lists as sets.
pub fn same_points(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| lex_cmp(x, y));
    b.sort_by(|x, y| lex_cmp(x, y));
    a.dedup();
    b.dedup();
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat::{int, ivec, rat};

    fn square() -> HPolyhedron {
        HPolyhedron::boxed(&ivec(&[-1, -1]), &ivec(&[1, 1])).unwrap()
    }

    #[test]
    fn square_vertices() {
        let v = square().vrep().unwrap();
        assert!(v.is_bounded());
        assert!(same_points(
            &v.vertices,
            &[ivec(&[-1, -1]), ivec(&[-1, 1]), ivec(&[1, -1]), ivec(&[1, 1])]
        ));
        let back = HPolyhedron::new(2, v.to_halfspaces()).unwrap();
        assert!(back.set_eq(&square()));
    }

    #[test]
    fn halfplane_generators() {
        let h = HPolyhedron::new(2, vec![Halfspace::new(ivec(&[1, 0]), int(2))]).unwrap();
        let v = h.vrep().unwrap();
        assert_eq!(v.vertices.len(), 1);
        assert_eq!(v.vertices[0][0], int(2));
        assert_eq!(v.rays, vec![ivec(&[-1, 0])]);
        assert_eq!(v.lines, vec![ivec(&[0, 1])]);
        let back = HPolyhedron::new(2, v.to_halfspaces()).unwrap();
        assert!(back.set_eq(&h));
    }

    #[test]
    fn empty_is_rejected() {
        let hs = vec![
            Halfspace::new(ivec(&[1]), int(-1)),
            Halfspace::new(ivec(&[-1]), int(-1)),
        ];
        assert!(matches!(HPolyhedron::new(1, hs), Err(Error::EmptySet(_))));
    }

    #[test]
    fn reduction_and_singletons() {
        let mut hs = square().halfspaces().to_vec();
        hs.push(Halfspace::new(ivec(&[1, 1]), int(5)));
        hs.push(Halfspace::new(ivec(&[2, 0]), int(2)));
        let p = HPolyhedron::new(2, hs).unwrap().reduced();
        assert_eq!(p.halfspaces().len(), 4);
        let pt = HPolyhedron::singleton(&[rat(1, 3), int(2)]);
        assert_eq!(pt.as_point(), Some(vec![rat(1, 3), int(2)]));
        assert_eq!(square().as_point(), None);
    }

    #[test]
    fn lp_solve_with_equality() {
        let eq = Halfspace::new(ivec(&[1, -1]), int(0));
        let r = lp_solve(&ivec(&[1, 2]), Sense::Maximize, &square(), &[eq]).unwrap();
        assert_eq!(r.value, Some(int(3)));
    }
}
