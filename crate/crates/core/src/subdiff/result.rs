use std::fmt;

use crate::geometry::{PolyhedralUnion, Rat};

/// How a computed set relates to the true subdifferential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    UpperEstimate,
    LowerEstimate,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::UpperEstimate => "upper_estimate",
            Exactness::LowerEstimate => "lower_estimate",
        })
    }
}

/// Which formula produced a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    /// `N(x̄; Ω) ∩ C*` at a target point.
    InSetBasic,
    /// `N(x̄; Ω) ∩ F*₊` at a target point.
    InSetSingular,
    /// `∪_{w̄ ∈ Π(x̄)} −∂ρ_F(w̄ − x̄) ∩ N(w̄; Ω)`.
    ProjectionBasic,
    /// `∪_{w̄ ∈ Π(x̄)} N(w̄; Ω) ∩ F*₊`.
    ProjectionSingular,
    /// `N(x̄; Ω_r) ∩ C*`, bounding the one-sided subdifferential.
    EnlargementOneSided,
    /// `N(x̄; Ω_r) ∩ S*`.
    EnlargementTwoSided,
    /// `N(x̄; Ω_r) ∩ F*₊`.
    EnlargementSingular,
    /// Closed-form scene handled without linear programming.
    ClosedForm,
}

impl Source {
    pub fn tag(&self) -> &'static str {
        match self {
            Source::InSetBasic => "in-set: N(x;Omega) ∩ C*",
            Source::InSetSingular => "in-set: N(x;Omega) ∩ F+*",
            Source::ProjectionBasic => "projection: U -d rho(w-x) ∩ N(w;Omega)",
            Source::ProjectionSingular => "projection: U N(w;Omega) ∩ F+*",
            Source::EnlargementOneSided => "enlargement: N(x;Omega_r) ∩ C*",
            Source::EnlargementTwoSided => "enlargement: N(x;Omega_r) ∩ S*",
            Source::EnlargementSingular => "enlargement: N(x;Omega_r) ∩ F+*",
            Source::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Hypotheses that were checked when deciding exactness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hypotheses {
    pub convex_target: bool,
    pub origin_in_dynamics: bool,
    pub origin_interior: bool,
    /// Local Lipschitz continuity, certified without sampling: either
    /// `0 ∈ int F` or an exact singular set equal to `{0}`.
    pub locally_lipschitz: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct SubdiffResult {
    pub set: PolyhedralUnion,
    pub exactness: Exactness,
    pub source: Source,
    pub hypotheses: Hypotheses,
}

impl SubdiffResult {
    pub fn contains(&self, xstar: &[Rat]) -> bool {
        self.set.contains(xstar)
    }

    /// `true` iff the set is exactly `{0}`.
    pub fn is_origin_only(&self) -> bool {
        self.set
            .as_point()
            .is_some_and(|p| p.iter().all(num_traits::Zero::is_zero))
    }
}
