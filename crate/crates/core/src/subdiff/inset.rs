//! Subdifferentials at points of the target, where `T(x̄) = 0`:
//!
//! * `∂T(x̄) = N(x̄; Ω) ∩ C*`
//! * `∂^∞T(x̄) ⊆ N(x̄; Ω) ∩ F*₊`, with equality when `0 ∈ F`.

use super::level::SupportLevelSet;
use super::normal::limiting_normal_cone;
use super::result::{Exactness, Hypotheses, Source, SubdiffResult};
use crate::error::{Error, Result};
use crate::geometry::linalg::is_zero;
use crate::geometry::{PolyhedralCone, PolyhedralUnion, Rat};
use crate::mintime::identities::Check;
use crate::mintime::{Dynamics, Target};

pub(crate) fn base_hypotheses(f: &Dynamics, omega: &Target) -> Hypotheses {
    Hypotheses {
        convex_target: omega.is_convex(),
        origin_in_dynamics: f.contains_origin(),
        origin_interior: f.origin_interior(),
        locally_lipschitz: f.origin_interior().then_some(true),
    }
}

/// Records Lipschitz continuity once a singular set is known: `{0}` exactly
/// (from an exact set or an upper estimate) certifies it, and a nonzero exact
/// set refutes it.
pub(crate) fn certify_lipschitz(h: &mut Hypotheses, singular: &SubdiffResult) {
    if h.locally_lipschitz.is_some() {
        return;
    }
    if singular.is_origin_only() {
        h.locally_lipschitz = Some(true);
    } else if singular.exactness == Exactness::Exact {
        h.locally_lipschitz = Some(false);
    }
}

fn require_inside(omega: &Target, xbar: &[Rat]) -> Result<()> {
    Error::dims(omega.dim(), xbar.len())?;
    if !omega.contains(xbar) {
        return Err(Error::WrongRegime("point is outside the target".into()));
    }
    Ok(())
}

/// `N(x̄; Ω) ∩ C*` at `x̄ ∈ Ω` (exact).
pub fn basic_subdiff_inset(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<SubdiffResult> {
    Error::dims(f.dim(), omega.dim())?;
    require_inside(omega, xbar)?;
    let n = limiting_normal_cone(omega, xbar)?;
    let c = SupportLevelSet::lower(f, Rat::from_integer(0.into()))?.realize()?;
    let mut hypotheses = base_hypotheses(f, omega);
    let singular = singular_subdiff_inset(f, omega, xbar)?;
    certify_lipschitz(&mut hypotheses, &singular);
    Ok(SubdiffResult {
        set: n.intersect(&c).simplified(),
        exactness: Exactness::Exact,
        source: Source::InSetBasic,
        hypotheses,
    })
}

/// `N(x̄; Ω) ∩ F*₊` at `x̄ ∈ Ω`; exact when `0 ∈ F`.
pub fn singular_subdiff_inset(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<SubdiffResult> {
    Error::dims(f.dim(), omega.dim())?;
    require_inside(omega, xbar)?;
    let n = limiting_normal_cone(omega, xbar)?;
    let cone = f.positive_dual_cone().to_polyhedron();
    let mut result = SubdiffResult {
        set: n.intersect_polyhedron(&cone).simplified(),
        exactness: if f.contains_origin() {
            Exactness::Exact
        } else {
            Exactness::UpperEstimate
        },
        source: Source::InSetSingular,
        hypotheses: base_hypotheses(f, omega),
    };
    let snapshot = result.clone();
    certify_lipschitz(&mut result.hypotheses, &snapshot);
    Ok(result)
}

/// Checks `N(x̄; Ω) = ∪_{λ>0} λ·∂T(x̄) ∪ ∂^∞T(x̄)` for `0 ∈ F` by comparing the
/// cone generated by each piece of `∂T(x̄)` (together with the singular set)
/// with the normal cone.
pub fn normal_cone_representation_check(f: &Dynamics, omega: &Target, xbar: &[Rat]) -> Result<Check> {
    if !f.contains_origin() {
        return Ok(Check::Vacuous("dynamics does not contain the origin".into()));
    }
    let n = limiting_normal_cone(omega, xbar)?;
    let basic = basic_subdiff_inset(f, omega, xbar)?;
    let singular = singular_subdiff_inset(f, omega, xbar)?;
    let dim = f.dim();
    let mut cones = Vec::new();
    for piece in basic.set.pieces() {
        let gens = piece.generators();
        let mut rays = gens.vertices.clone();
        rays.extend(gens.rays.iter().cloned());
        let mut lines = gens.lines.clone();
        lines.retain(|l| !is_zero(l));
        let cone = PolyhedralCone::from_generators(dim, rays, lines)?;
        cones.push(cone.to_polyhedron());
    }
    let rebuilt = PolyhedralUnion::from_pieces(dim, cones)?.union(&singular.set);
    if let Some(w) = n.subset_witness(&rebuilt) {
        return Ok(Check::Violated(format!(
            "normal {w:?} is not a multiple of a subgradient"
        )));
    }
    if let Some(w) = rebuilt.subset_witness(&n) {
        return Ok(Check::Violated(format!("{w:?} lies outside the normal cone")));
    }
    Ok(Check::Holds)
}
