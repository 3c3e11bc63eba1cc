//! End-to-end acceptance run. Each criterion runs its verification suites on
//! the built-in and random scenes and prints one line; the process fails when
//! any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use mintime_core::geometry::rat::{int, ivec, rat, vec_to_f64};
use mintime_core::geometry::Rat;
use mintime_core::oracle::calmness_probe;
use mintime_core::scene::fixtures::{all_fixtures, fixture};
use mintime_core::scene::random::{random_convex_scene, random_polyhedral_scene, random_two_box_scene};
use mintime_core::scene::Scene;
use mintime_core::verify::{verify_scenes, Status, Suite, VerifyReport};
use mintime_core::Result;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

fn first_failure(report: &VerifyReport) -> Option<String> {
    report
        .failures()
        .next()
        .map(|r| format!("{} / {} / {}: {}", r.suite, r.scene, r.subject, r.detail))
}

/// Passes when nothing failed and each listed suite passed at least once.
fn judge(report: &VerifyReport, must_pass: &[Suite]) -> Outcome {
    if let Some(f) = first_failure(report) {
        return Outcome::new(false, format!("{} failures, first: {f}", report.count(Status::Fail)));
    }
    let summary = report.summary();
    for s in must_pass {
        if summary.get(s).map_or(0, |c| c.pass) == 0 {
            return Outcome::new(false, format!("suite {s} recorded no passing check"));
        }
    }
    Outcome::new(
        true,
        format!("{} passed, {} skipped", report.count(Status::Pass), report.count(Status::Skip)),
    )
}

/// The passing records of `suite` on `scene` whose subject mentions `needle`.
fn passes_on(report: &VerifyReport, suite: Suite, scene: &str, needle: &str) -> usize {
    report
        .suite(suite)
        .filter(|r| r.scene == scene && r.subject.contains(needle) && r.status == Status::Pass)
        .count()
}

fn named(name: &str) -> Scene {
    fixture(name).expect("built-in scene")
}

fn goldens(name: &str, expected_checks: usize) -> Result<Outcome> {
    let report = verify_scenes(&[named(name)], &[Suite::Goldens])?;
    let mut out = judge(&report, &[Suite::Goldens]);
    let passed = report.count(Status::Pass);
    if out.ok && passed < expected_checks {
        out = Outcome::new(false, format!("only {passed} of {expected_checks} golden checks ran"));
    }
    Ok(out)
}

fn criterion_1() -> Result<Outcome> {
    // T(1/2,1/2) plus basic and singular sets at two points.
    goldens("box-complement", 5)
}

fn criterion_2() -> Result<Outcome> {
    // T, the projection, and the basic and singular sets.
    goldens("box-complement-hole", 4)
}

fn criterion_3() -> Result<Outcome> {
    // Two values and basic and singular sets at three points.
    goldens("strip-box", 8)
}

fn criterion_4() -> Result<Outcome> {
    let report = verify_scenes(&[named("ball-complement")], &[Suite::Counterexample])?;
    let out = judge(&report, &[Suite::Counterexample]);
    let passed = report.count(Status::Pass);
    if out.ok && passed < 4 {
        return Ok(Outcome::new(false, format!("only {passed} of 4 counterexample checks ran")));
    }
    let detail = report
        .records
        .iter()
        .find(|r| r.subject.contains("sphere"))
        .map_or(String::new(), |r| r.detail.clone());
    Ok(Outcome::new(out.ok, format!("{}; {detail}", out.detail)))
}

fn criterion_5() -> Result<Outcome> {
    let mut scenes = all_fixtures();
    scenes.extend((0..100).map(random_polyhedral_scene));
    let report = verify_scenes(&scenes, &Suite::IDENTITIES)?;
    let out = judge(&report, &Suite::IDENTITIES);
    if !out.ok {
        return Ok(out);
    }
    if passes_on(&report, Suite::Convexity, "box-complement", "") == 0 {
        return Ok(Outcome::new(false, "no convexity violation witnessed on box-complement"));
    }
    if passes_on(&report, Suite::Concavity, "box-complement", "") == 0 {
        return Ok(Outcome::new(false, "concavity was not confirmed on box-complement"));
    }
    Ok(out)
}

fn criterion_6() -> Result<Outcome> {
    let report = verify_scenes(&all_fixtures(), &[Suite::EpsInset, Suite::EpsOutset])?;
    let out = judge(&report, &[Suite::EpsInset, Suite::EpsOutset]);
    if !out.ok {
        return Ok(out);
    }
    for check in ["witness", "support-bound", "projection-inclusion", "enlargement-inclusion"] {
        if report.suite(Suite::EpsOutset).all(|r| !(r.subject.ends_with(check) && r.status == Status::Pass)) {
            return Ok(Outcome::new(false, format!("the {check} check never ran")));
        }
    }
    Ok(out)
}

fn criterion_7() -> Result<Outcome> {
    let scenes: Vec<Scene> = (0..50).map(random_convex_scene).collect();
    let report = verify_scenes(&scenes, &[Suite::ConvexEquivalence])?;
    let out = judge(&report, &[Suite::ConvexEquivalence]);
    if out.ok && report.suite(Suite::ConvexEquivalence).all(|r| !r.subject.contains("w=") || r.status != Status::Pass) {
        return Ok(Outcome::new(false, "the chain of inclusions never ran"));
    }
    Ok(out)
}

fn criterion_8() -> Result<Outcome> {
    let mut scenes = vec![named("box-complement")];
    scenes.extend((0..20).map(random_two_box_scene));
    let report = verify_scenes(&scenes, &[Suite::OracleConcordance])?;
    let out = judge(&report, &[Suite::OracleConcordance]);
    if out.ok {
        let points = named("box-complement").points.len();
        let reverse = passes_on(&report, Suite::OracleConcordance, "box-complement", "formula ⊆ cloud");
        if reverse < points {
            return Ok(Outcome::new(
                false,
                format!("the formula-in-cloud check passed at {reverse} of {points} box-complement points"),
            ));
        }
    }
    Ok(out)
}

fn criterion_9() -> Result<Outcome> {
    let half = rat(1, 2);
    // (scene, point, expected Lipschitz verdict)
    let cases: Vec<(&str, Vec<Rat>, bool)> = vec![
        ("box-complement", ivec(&[1, 0]), true),
        ("box-complement", ivec(&[0, 1]), false),
        ("box-complement-hole", vec![half.clone(), half.clone()], true),
        ("strip-box", ivec(&[1, 0]), true),
        ("strip-box", ivec(&[0, 1]), false),
        ("strip-box", vec![int(2), half], true),
    ];
    let mut scenes = Vec::new();
    for (name, x, lipschitz) in &cases {
        let mut scene = named(name);
        scene.points = vec![x.clone()];
        let t = scene.time_function()?;
        let plan = scene.sampling_plan()?;
        let est = calmness_probe(t.as_ref(), &vec_to_f64(x), plan.calm_window, &plan, &scene.structural_directions())?;
        if est.lipschitz != *lipschitz {
            return Ok(Outcome::new(
                false,
                format!("{name} at {x:?}: sampled verdict {} but expected {lipschitz}", est.lipschitz),
            ));
        }
        scenes.push(scene);
    }
    let report = verify_scenes(&scenes, &[Suite::Lipschitz])?;
    let out = judge(&report, &[Suite::Lipschitz]);
    let passed = report.count(Status::Pass);
    if out.ok && passed != cases.len() {
        return Ok(Outcome::new(false, format!("{passed} of {} points decided", cases.len())));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 9] = [
        ("box-complement goldens", criterion_1),
        ("hole goldens", criterion_2),
        ("strip-box goldens", criterion_3),
        ("ball-complement counterexample", criterion_4),
        ("identity suite", criterion_5),
        ("epsilon-bound suite", criterion_6),
        ("convex equivalence", criterion_7),
        ("oracle concordance", criterion_8),
        ("Lipschitz characterization", criterion_9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        failed += usize::from(!out.ok);
        println!(
            "criterion {} {:<32} {} ({:.1}s) {}",
            i + 1,
            name,
            if out.ok { "pass" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} of 9 criteria passed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
