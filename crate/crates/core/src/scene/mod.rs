//! Scenes: dynamics, a target (polyhedral or the closed-form ball
//! complement), query points and per-scene options, with a lossless JSON
//! encoding and a set of built-in fixtures.

pub mod fixtures;
mod json;
pub mod random;

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::rat::Value;
use crate::geometry::Rat;
use crate::mintime::{minimal_time, BallComplement, Dynamics, Target};
use crate::oracle::{self, SamplingPlan, TimeFunction};

pub use json::SCENE_VERSION;

#[derive(Clone, Debug)]
pub enum SceneTarget {
    Polyhedral(Target),
    /// `{‖x‖ ≥ R}`; requires ball dynamics.
    BallComplement { radius: Rat },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SceneOptions {
    pub eps: Option<Rat>,
    pub eta: Option<Rat>,
    pub r: Option<Rat>,
    pub lambda: Option<Rat>,
    pub sampling: Option<SamplingPlan>,
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub name: String,
    pub dynamics: Dynamics,
    pub target: SceneTarget,
    pub points: Vec<Vec<Rat>>,
    pub options: SceneOptions,
}

impl Scene {
    /// Builds and validates a scene.
    pub fn new(
        name: impl Into<String>,
        dynamics: Dynamics,
        target: SceneTarget,
        points: Vec<Vec<Rat>>,
        options: SceneOptions,
    ) -> Result<Self> {
        let scene = Scene {
            name: name.into(),
            dynamics,
            target,
            points,
            options,
        };
        scene.validate()?;
        Ok(scene)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.dynamics.dim();
        match &self.target {
            SceneTarget::Polyhedral(t) => {
                if t.dim() != dim {
                    return Err(Error::scene(
                        "target",
                        format!("target has dimension {}, dynamics {dim}", t.dim()),
                    ));
                }
            }
            SceneTarget::BallComplement { radius } => {
                if self.dynamics.ball_radius().is_none() {
                    return Err(Error::scene("target", "the ball complement needs ball dynamics"));
                }
                BallComplement::new(dim, radius.clone(), Rat::from_integer(1.into()))
                    .map_err(|e| Error::scene("target.radius", e.to_string()))?;
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::scene(
                    format!("points[{i}]"),
                    format!("expected {dim} coordinates, found {}", p.len()),
                ));
            }
        }
        if let Some(plan) = &self.options.sampling {
            plan.validate()
                .map_err(|e| Error::scene("options.sampling", e.to_string()))?;
        }
        for (field, v) in [("eps", &self.options.eps), ("r", &self.options.r)] {
            if v.as_ref().is_some_and(|v| v < &Rat::from_integer(0.into())) {
                return Err(Error::scene(format!("options.{field}"), "must be nonnegative"));
            }
        }
        for (field, v) in [("eta", &self.options.eta), ("lambda", &self.options.lambda)] {
            if v.as_ref().is_some_and(|v| v <= &Rat::from_integer(0.into())) {
                return Err(Error::scene(format!("options.{field}"), "must be positive"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dynamics.dim()
    }

    /// The polyhedral target, if the scene has one.
    pub fn polyhedral(&self) -> Option<&Target> {
        match &self.target {
            SceneTarget::Polyhedral(t) => Some(t),
            SceneTarget::BallComplement { .. } => None,
        }
    }

    /// The polyhedral target or a typed error naming the operation.
    pub fn require_polyhedral(&self, operation: &str) -> Result<&Target> {
        self.polyhedral().ok_or_else(|| {
            Error::Unsupported(format!("{operation} needs a polyhedral target"))
        })
    }

    /// The closed form of a ball-complement scene.
    pub fn ball_complement(&self) -> Option<BallComplement> {
        match &self.target {
            SceneTarget::BallComplement { radius } => {
                let speed = self.dynamics.ball_radius()?.clone();
                BallComplement::new(self.dim(), radius.clone(), speed).ok()
            }
            SceneTarget::Polyhedral(_) => None,
        }
    }

    pub fn is_convex(&self) -> bool {
        self.polyhedral().is_some_and(Target::is_convex)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        match (&self.target, self.ball_complement()) {
            (SceneTarget::Polyhedral(t), _) => t.contains(x),
            (_, Some(b)) => b.contains(x),
            _ => false,
        }
    }

    /// `T(x)`, exact whenever it is rational.
    pub fn time(&self, x: &[Rat]) -> Result<Value> {
        Error::dims(self.dim(), x.len())?;
        match &self.target {
            SceneTarget::Polyhedral(t) => Ok(minimal_time(&self.dynamics, t, x)?.value),
            SceneTarget::BallComplement { .. } => self
                .ball_complement()
                .expect("validated at construction")
                .time(x),
        }
    }

    /// A floating-point evaluator of `T` for the oracles.
    pub fn time_function(&self) -> Result<Box<dyn TimeFunction>> {
        match &self.target {
            SceneTarget::Polyhedral(t) => oracle::time_function(&self.dynamics, t),
            SceneTarget::BallComplement { .. } => {
                Ok(Box::new(self.ball_complement().expect("validated at construction")))
            }
        }
    }

    /// Kink directions of `T` (none for the smooth closed form).
    pub fn structural_directions(&self) -> Vec<Vec<f64>> {
        match &self.target {
            SceneTarget::Polyhedral(t) => oracle::structural_directions_f64(&self.dynamics, t),
            SceneTarget::BallComplement { .. } => Vec::new(),
        }
    }

    /// The scene's sampling plan, or the default with environment overrides.
    pub fn sampling_plan(&self) -> Result<SamplingPlan> {
        match &self.options.sampling {
            Some(p) => Ok(p.clone()),
            None => SamplingPlan::from_env(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        json::parse(text)
    }

    pub fn to_json(&self) -> String {
        json::render(self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::scene(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    /// Whether two scenes hold identical exact data.
    pub fn same_data(&self, other: &Scene) -> bool {
        self.to_json() == other.to_json()
    }
}
