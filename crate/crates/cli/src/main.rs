//! `mintime`: evaluate minimal time functions, their projections and
//! subdifferentials, run the verification suites and plot scenes.

mod plot;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use thiserror::Error;

use mintime_core::geometry::rat::{fmt_rat, parse_rat};
use mintime_core::geometry::Rat;
use mintime_core::mintime::{enlargement, projection_set};
use mintime_core::oracle::SamplingPlan;
use mintime_core::scene::fixtures::{all_fixtures, fixture, FIXTURE_NAMES};
use mintime_core::scene::Scene;
use mintime_core::subdiff::{
    dual_candidates, one_sided_subdiff_sampled, subdiff_ball_complement_enlargement, EpsSubgradientTest, Membership,
};
use mintime_core::verify::{formula_subdiffs, verify_scenes, Status, Suite};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] mintime_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "mintime", version, about = "Exact minimal time functions for polyhedral targets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene JSON file.
    #[arg(long, conflicts_with = "fixture")]
    scene: Option<PathBuf>,
    /// Built-in scene name (see `mintime fixture list`).
    #[arg(long)]
    fixture: Option<String>,
    /// Query point as comma-separated rationals, e.g. `1/2,-1`. Repeatable;
    /// defaults to the points stored in the scene.
    #[arg(long = "point", value_name = "X1,X2,..")]
    points: Vec<String>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal time at the query points.
    Eval(SceneArgs),
    /// Projection sets `Π(x)` at the query points.
    Project(SceneArgs),
    /// Subdifferential sets or sampled subgradients at the query points.
    Subdiff {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, value_enum, default_value = "basic")]
        which: Which,
        /// ε for `frechet-eps`; defaults to the scene option or 1/10.
        #[arg(long)]
        eps: Option<String>,
    },
    /// The enlargement `Ω_r = {x : T(x) ≤ r}`.
    Enlarge {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        r: String,
    },
    /// Run verification suites; exits with status 1 when a check fails.
    Verify {
        #[command(flatten)]
        scene: SceneArgs,
        /// Comma-separated suites, or `all`, `identities`, `eps`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Override ε of the scene options.
        #[arg(long)]
        eps: Option<String>,
        /// Override η of the scene options.
        #[arg(long)]
        eta: Option<String>,
        /// Print only the summary and the failed records.
        #[arg(long)]
        brief: bool,
    },
    /// SVG heat map of a planar scene.
    Plot {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = 2.0)]
        half_width: f64,
        #[arg(long, default_value_t = 96)]
        resolution: usize,
    },
    /// Built-in scenes.
    Fixture {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// `∂T(x)` from the exact formulas.
    Basic,
    /// `∂^∞T(x)` from the exact formulas.
    Singular,
    /// Dual grid points that are Fréchet ε-subgradients.
    FrechetEps,
    /// Sampled one-sided subgradients.
    OneSided,
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Names of the built-in scenes.
    List,
    /// Write every built-in scene as `<name>.json` into a directory.
    Export {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

fn parse_point(text: &str) -> CliResult<Vec<Rat>> {
    text.split(',')
        .map(|s| parse_rat(s.trim()).map_err(CliError::from))
        .collect()
}

fn parse_opt_rat(text: &Option<String>) -> CliResult<Option<Rat>> {
    text.as_deref().map(|s| parse_rat(s).map_err(CliError::from)).transpose()
}

impl SceneArgs {
    /// The scene with the requested points; without `--scene` or
    /// `--fixture`, `None`.
    fn load_optional(&self) -> CliResult<Option<Scene>> {
        let mut scene = match (&self.scene, &self.fixture) {
            (Some(path), _) => Scene::load(path)?,
            (None, Some(name)) => fixture(name).ok_or_else(|| {
                CliError::Usage(format!("unknown fixture `{name}`; known: {}", FIXTURE_NAMES.join(", ")))
            })?,
            (None, None) => return Ok(None),
        };
        if !self.points.is_empty() {
            let points = self.points.iter().map(|p| parse_point(p)).collect::<CliResult<Vec<_>>>()?;
            for p in &points {
                if p.len() != scene.dim() {
                    return Err(CliError::Usage(format!(
                        "point has {} coordinates but the scene lives in dimension {}",
                        p.len(),
                        scene.dim()
                    )));
                }
            }
            scene.points = points;
        }
        Ok(Some(scene))
    }

    fn load(&self) -> CliResult<Scene> {
        self.load_optional()?
            .ok_or_else(|| CliError::Usage("pass --scene FILE or --fixture NAME".into()))
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn eval(scene: &Scene) -> CliResult<Json> {
    let mut rows = Vec::new();
    for x in &scene.points {
        rows.push(json!({
            "point": report::point(x),
            "in_target": scene.contains(x),
            "time": report::value(&scene.time(x)?),
        }));
    }
    Ok(json!({ "scene": scene.name, "results": rows }))
}

fn project(scene: &Scene) -> CliResult<Json> {
    let omega = scene.require_polyhedral("the projection")?;
    let mut rows = Vec::new();
    for x in &scene.points {
        let time = scene.time(x)?;
        let row = if time.is_finite() {
            let proj = projection_set(&scene.dynamics, omega, x)?;
            json!({
                "point": report::point(x),
                "time": report::value(&time),
                "vertices": report::points(&proj.vertices()?),
                "set": report::set(&proj.pieces),
            })
        } else {
            json!({ "point": report::point(x), "time": report::value(&time), "set": null })
        };
        rows.push(row);
    }
    Ok(json!({ "scene": scene.name, "results": rows }))
}

fn subdiff(scene: &Scene, which: Which, eps: Option<Rat>) -> CliResult<Json> {
    let plan = scene.sampling_plan()?;
    let eps = eps
        .or_else(|| scene.options.eps.clone())
        .unwrap_or_else(|| mintime_core::geometry::rat(1, 10));
    let mut rows = Vec::new();
    for x in &scene.points {
        let mut row = json!({ "point": report::point(x), "time": report::value(&scene.time(x)?) });
        match which {
            Which::Basic | Which::Singular => {
                let result = match scene.ball_complement() {
                    Some(b) => {
                        let e = subdiff_ball_complement_enlargement(&b, x)?;
                        if matches!(which, Which::Basic) {
                            e.one_sided_basic
                        } else {
                            e.one_sided_singular
                        }
                    }
                    None => {
                        let (b, s) = formula_subdiffs(scene, x)?;
                        if matches!(which, Which::Basic) {
                            b
                        } else {
                            s
                        }
                    }
                };
                row["subdifferential"] = report::subdiff(&result);
            }
            Which::FrechetEps => {
                let test = EpsSubgradientTest::for_scene(scene, x, &plan)?;
                let (mut members, mut uncertain) = (Vec::new(), Vec::new());
                for c in dual_candidates(&plan, scene.dim()) {
                    match test.membership(&c, &eps)? {
                        Membership::Member => members.push(c),
                        Membership::Uncertain => uncertain.push(c),
                        Membership::NonMember => {}
                    }
                }
                row["eps"] = json!(fmt_rat(&eps));
                row["exact_decision"] = json!(test.is_exact());
                row["members"] = report::points(&members);
                row["uncertain"] = report::points(&uncertain);
            }
            Which::OneSided => {
                let cloud = one_sided_subdiff_sampled(scene, x, &plan)?;
                let pts = |c: &mintime_core::oracle::DualCloud| -> Vec<Vec<f64>> {
                    c.points.iter().map(|p| p.xstar.clone()).collect()
                };
                row["basic"] = json!(pts(&cloud.basic));
                row["singular"] = json!(pts(&cloud.singular));
                row["continuity_gap"] = json!(cloud.continuity_gap);
            }
        }
        rows.push(row);
    }
    Ok(json!({ "scene": scene.name, "results": rows }))
}

fn verify(
    scene: Option<Scene>,
    selector: &str,
    eps: Option<Rat>,
    eta: Option<Rat>,
    brief: bool,
) -> CliResult<(Json, bool)> {
    let suites = Suite::parse_selector(selector)?;
    let mut scenes = match scene {
        Some(s) => vec![s],
        None => all_fixtures(),
    };
    for s in &mut scenes {
        if let Some(e) = &eps {
            s.options.eps = Some(e.clone());
        }
        if let Some(e) = &eta {
            s.options.eta = Some(e.clone());
        }
    }
    let report = verify_scenes(&scenes, &suites)?;
    let passed = report.passed();
    let records: Vec<_> = if brief {
        report.failures().cloned().collect()
    } else {
        report.records.clone()
    };
    let doc = json!({
        "passed": passed,
        "scenes": scenes.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
        "suites": suites.iter().map(|s| s.tag()).collect::<Vec<_>>(),
        "counts": {
            "pass": report.count(Status::Pass),
            "fail": report.count(Status::Fail),
            "skip": report.count(Status::Skip),
        },
        "summary": report
            .summary()
            .into_iter()
            .map(|(s, c)| (s.tag().to_string(), json!(c)))
            .collect::<serde_json::Map<_, _>>(),
        "records": records,
    });
    Ok((doc, passed))
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Eval(args) => args.emit(&report::render(&eval(&args.load()?)?)?)?,
        Command::Project(args) => args.emit(&report::render(&project(&args.load()?)?)?)?,
        Command::Subdiff { scene, which, eps } => {
            let doc = subdiff(&scene.load()?, which, parse_opt_rat(&eps)?)?;
            scene.emit(&report::render(&doc)?)?
        }
        Command::Enlarge { scene: args, r } => {
            let scene = args.load()?;
            let r = parse_rat(&r)?;
            let omega = scene.require_polyhedral("the enlargement")?;
            let grown = enlargement(&scene.dynamics, omega, &r)?;
            let doc = json!({ "scene": scene.name, "r": fmt_rat(&r), "enlargement": report::set(grown.union()) });
            args.emit(&report::render(&doc)?)?
        }
        Command::Verify {
            scene: args,
            suite,
            eps,
            eta,
            brief,
        } => {
            let (doc, passed) = verify(
                args.load_optional()?,
                &suite,
                parse_opt_rat(&eps)?,
                parse_opt_rat(&eta)?,
                brief,
            )?;
            args.emit(&report::render(&doc)?)?;
            if !passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Plot {
            scene: args,
            half_width,
            resolution,
        } => {
            let scene = args.load()?;
            let svg = plot::svg(
                &scene,
                &plot::PlotOptions {
                    half_width,
                    resolution,
                },
            )?;
            args.emit(&svg)?
        }
        Command::Fixture { action } => match action {
            FixtureAction::List => {
                for name in FIXTURE_NAMES {
                    println!("{name}");
                }
            }
            FixtureAction::Export { dir } => {
                std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                for scene in all_fixtures() {
                    let path = dir.join(format!("{}.json", scene.name));
                    write_file(&path, &scene.to_json())?;
                    println!("{}", path.display());
                }
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // The sampling plan honours the environment override; validate it early
    // so a bad value is reported once instead of per scene.
    if let Err(e) = SamplingPlan::from_env() {
        eprintln!("mintime: {e}");
        return ExitCode::from(2);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mintime: {e}");
            ExitCode::from(2)
        }
    }
}
