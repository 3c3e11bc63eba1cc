//! Verification suites. Each suite runs one family of identities, estimates
//! or set formulas on a scene and produces one record per check; a report
//! passes when no record failed.

mod concordance;
mod convex;
mod eps;
mod goldens;
mod identities;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Rat;
use crate::mintime::identities::show_point;
use crate::mintime::Check;
use crate::oracle::SamplingPlan;
use crate::scene::Scene;
use crate::subdiff::{
    basic_subdiff_inset, singular_subdiff_inset, subdiff_outset_via_enlargement, subdiff_outset_via_projection,
    SubdiffResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Published values and sets of the built-in scenes.
    Goldens,
    /// `T_Ω(x) = r + T_{Ω_r}(x)` for `x ∉ Ω_r`.
    EnlargementIdentity,
    /// `T(x − tq) ≤ r + t` for `x ∈ Ω_r`, `q ∈ F`.
    ShiftedArgument,
    /// `T(x) = inf_{w ∈ Ω} ρ_F(w − x)` recomputed by a second linear program.
    GaugeRepresentation,
    /// `T(λw̄ + (1 − λ)x̄) = (1 − λ)T(x̄)` for `w̄ ∈ Π(x̄)`.
    ProjectionLinearity,
    /// `liminf T(x) ≥ T(x̄)` along sampled spheres.
    LowerSemicontinuity,
    /// `T` is convex iff `Ω` is.
    Convexity,
    /// `T` is concave on a convex complement of `Ω`.
    Concavity,
    /// ε-subgradient estimates at target points.
    EpsInset,
    /// ε-subgradient estimates off the target.
    EpsOutset,
    /// Convex-case formulas against the definitional subgradient test.
    ConvexEquivalence,
    /// Sampled limiting and singular subgradients inside the formula sets.
    OracleConcordance,
    /// Trivial singular set iff the sampled Lipschitz verdict.
    Lipschitz,
    /// The ball-complement scene where the enlargement normal cone is blind.
    Counterexample,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Goldens,
        Suite::EnlargementIdentity,
        Suite::ShiftedArgument,
        Suite::GaugeRepresentation,
        Suite::ProjectionLinearity,
        Suite::LowerSemicontinuity,
        Suite::Convexity,
        Suite::Concavity,
        Suite::EpsInset,
        Suite::EpsOutset,
        Suite::ConvexEquivalence,
        Suite::OracleConcordance,
        Suite::Lipschitz,
        Suite::Counterexample,
    ];

    /// The structural identities of the minimal time function.
    pub const IDENTITIES: [Suite; 7] = [
        Suite::EnlargementIdentity,
        Suite::ShiftedArgument,
        Suite::GaugeRepresentation,
        Suite::ProjectionLinearity,
        Suite::LowerSemicontinuity,
        Suite::Convexity,
        Suite::Concavity,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Suite::Goldens => "goldens",
            Suite::EnlargementIdentity => "enlargement-identity",
            Suite::ShiftedArgument => "shifted-argument",
            Suite::GaugeRepresentation => "gauge-representation",
            Suite::ProjectionLinearity => "projection-linearity",
            Suite::LowerSemicontinuity => "lower-semicontinuity",
            Suite::Convexity => "convexity",
            Suite::Concavity => "concavity",
            Suite::EpsInset => "eps-inset",
            Suite::EpsOutset => "eps-outset",
            Suite::ConvexEquivalence => "convex-equivalence",
            Suite::OracleConcordance => "oracle-concordance",
            Suite::Lipschitz => "lipschitz",
            Suite::Counterexample => "counterexample",
        }
    }

    /// Parses a comma-separated selector. `all` selects every suite,
    /// `identities` the structural identities, `eps` both ε suites; an empty
    /// selector selects nothing.
    pub fn parse_selector(selector: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for tag in selector.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tag {
                "all" => out.extend(Suite::ALL),
                "identities" => out.extend(Suite::IDENTITIES),
                "eps" => out.extend([Suite::EpsInset, Suite::EpsOutset]),
                _ => out.push(
                    Suite::ALL
                        .into_iter()
                        .find(|s| s.tag() == tag)
                        .ok_or_else(|| Error::InvalidInput(format!("unknown suite `{tag}`")))?,
                ),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub scene: String,
    /// The point and parameters the check ran at.
    pub subject: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub records: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn extend(&mut self, other: VerifyReport) {
        self.records.extend(other.records);
    }

    /// Records of one suite.
    pub fn suite(&self, suite: Suite) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(move |r| r.suite == suite)
    }

    pub fn summary(&self) -> BTreeMap<Suite, SuiteSummary> {
        let mut out: BTreeMap<Suite, SuiteSummary> = BTreeMap::new();
        for r in &self.records {
            let s = out.entry(r.suite).or_default();
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skip => s.skip += 1,
            }
        }
        out
    }
}

/// Collects the records of one suite on one scene.
pub(crate) struct Recorder {
    suite: Suite,
    scene: String,
    records: Vec<CheckRecord>,
}

impl Recorder {
    fn new(suite: Suite, scene: &Scene) -> Self {
        Recorder {
            suite,
            scene: scene.name.clone(),
            records: Vec::new(),
        }
    }

    fn push(&mut self, subject: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.records.push(CheckRecord {
            suite: self.suite,
            scene: self.scene.clone(),
            subject: subject.into(),
            status,
            detail: detail.into(),
        });
    }

    fn pass(&mut self, subject: impl Into<String>, detail: impl Into<String>) {
        self.push(subject, Status::Pass, detail);
    }

    fn fail(&mut self, subject: impl Into<String>, detail: impl Into<String>) {
        self.push(subject, Status::Fail, detail);
    }

    fn skip(&mut self, subject: impl Into<String>, detail: impl Into<String>) {
        self.push(subject, Status::Skip, detail);
    }

    fn outcome(&mut self, subject: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(subject, status, detail);
    }

    fn check(&mut self, subject: impl Into<String>, check: Check) {
        match check {
            Check::Holds => self.pass(subject, ""),
            Check::Violated(d) => self.fail(subject, d),
            Check::Vacuous(d) => self.skip(subject, d),
        }
    }

    fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}

pub(crate) fn at(x: &[Rat]) -> String {
    format!("x={}", show_point(x))
}

/// ε values of the ε suites: `0`, the scene's ε (default `1/10`) and `1/2`.
pub(crate) fn eps_values(scene: &Scene) -> Vec<Rat> {
    let mut v = vec![
        Rat::from_integer(0.into()),
        scene.options.eps.clone().unwrap_or_else(|| Rat::new(1.into(), 10.into())),
        Rat::new(1.into(), 2.into()),
    ];
    v.sort();
    v.dedup();
    v
}

/// The formula sets `(∂T(x̄), ∂^∞T(x̄))` used throughout the suites: the
/// target-point formulas on `Ω`, the enlargement formulas off a convex
/// target and the projection formulas otherwise.
pub fn formula_subdiffs(scene: &Scene, xbar: &[Rat]) -> Result<(SubdiffResult, SubdiffResult)> {
    let f = &scene.dynamics;
    let omega = scene.require_polyhedral("the subdifferential formulas")?;
    if omega.contains(xbar) {
        return Ok((basic_subdiff_inset(f, omega, xbar)?, singular_subdiff_inset(f, omega, xbar)?));
    }
    if omega.is_convex() {
        let e = subdiff_outset_via_enlargement(f, omega, xbar)?;
        if let (Some(b), Some(s)) = (e.convex_exact_basic, e.convex_exact_singular) {
            return Ok((b, s));
        }
    }
    let p = subdiff_outset_via_projection(f, omega, xbar)?;
    Ok((p.basic, p.singular))
}

fn run_suite(scene: &Scene, suite: Suite, plan: &SamplingPlan) -> Result<Vec<CheckRecord>> {
    match suite {
        Suite::Goldens => goldens::run(scene),
        Suite::EnlargementIdentity
        | Suite::ShiftedArgument
        | Suite::GaugeRepresentation
        | Suite::ProjectionLinearity
        | Suite::LowerSemicontinuity
        | Suite::Convexity
        | Suite::Concavity => identities::run(scene, suite, plan),
        Suite::EpsInset => eps::run_inset(scene, plan),
        Suite::EpsOutset => eps::run_outset(scene, plan),
        Suite::ConvexEquivalence => convex::run(scene, plan),
        Suite::OracleConcordance => concordance::run_concordance(scene, plan),
        Suite::Lipschitz => concordance::run_lipschitz(scene, plan),
        Suite::Counterexample => concordance::run_counterexample(scene, plan),
    }
}

/// Runs the selected suites on a scene. An error inside a suite becomes a
/// failed record rather than aborting the report.
pub fn verify_scene(scene: &Scene, suites: &[Suite], plan: &SamplingPlan) -> VerifyReport {
    let mut report = VerifyReport::default();
    for &suite in suites {
        match run_suite(scene, suite, plan) {
            Ok(records) => report.records.extend(records),
            Err(e) => {
                let mut r = Recorder::new(suite, scene);
                r.fail("suite", format!("could not run: {e}"));
                report.records.extend(r.finish());
            }
        }
    }
    report
}

/// [`verify_scene`] over several scenes, each with its own sampling plan.
pub fn verify_scenes(scenes: &[Scene], suites: &[Suite]) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for scene in scenes {
        let plan = scene.sampling_plan()?;
        report.extend(verify_scene(scene, suites, &plan));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::fixtures::all_fixtures;

    #[test]
    fn selector_parsing() {
        assert!(Suite::parse_selector("").unwrap().is_empty());
        assert_eq!(Suite::parse_selector("all").unwrap().len(), Suite::ALL.len());
        assert_eq!(
            Suite::parse_selector("convexity, goldens").unwrap(),
            vec![Suite::Goldens, Suite::Convexity]
        );
        assert!(Suite::parse_selector("nope").is_err());
    }

    #[test]
    fn fixtures_pass_every_suite() {
        let r = verify_scenes(&all_fixtures(), &Suite::ALL).unwrap();
        for f in r.failures() {
            eprintln!("{} {} {}: {}", f.suite, f.scene, f.subject, f.detail);
        }
        assert!(r.passed());
        let summary = r.summary();
        for suite in [Suite::Goldens, Suite::Counterexample, Suite::Convexity, Suite::Concavity] {
            assert!(summary[&suite].pass > 0, "{suite}");
        }
    }

    #[test]
    fn empty_selection_passes_trivially() {
        let r = verify_scenes(&all_fixtures(), &[]).unwrap();
        assert!(r.passed() && r.records.is_empty());
    }
}
