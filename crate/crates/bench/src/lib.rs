//! Inputs shared by the kernel benchmarks.

use mintime_core::geometry::rat::{int, rat};
use mintime_core::geometry::{LinearProgram, Rat, Relation, Sense};
use mintime_core::scene::fixtures::fixture;
use mintime_core::scene::random::random_polyhedral_scene;
use mintime_core::scene::Scene;

/// `max Σ xᵢ` over a slanted box in dimension `n`.
pub fn sample_lp(n: usize) -> LinearProgram<Rat> {
    let mut lp = LinearProgram::new(n, Sense::Maximize);
    lp.set_objective(vec![int(1); n]).expect("objective");
    for i in 0..n {
        let mut row = vec![int(0); n];
        row[i] = int(2);
        row[(i + 1) % n] = rat(1, 3);
        lp.add(row, Relation::Le, int(i as i64 + 3)).expect("row");
    }
    lp
}

/// Rows of the cone `{x : a·x ≤ 0}` over the cyclic polytope normals.
pub fn sample_cone_rows(n: usize, m: usize) -> Vec<Vec<Rat>> {
    (1..=m as i64)
        .map(|t| (0..n as i64).map(|k| int((t + k).pow(k as u32 + 1) % 7 - 3)).collect())
        .collect()
}

/// Built-in and random scenes with their query points.
pub fn sample_scenes() -> Vec<Scene> {
    let mut out: Vec<Scene> = ["box-complement", "strip-box"]
        .iter()
        .map(|n| fixture(n).expect("built-in scene"))
        .collect();
    out.extend((0..4).map(random_polyhedral_scene));
    out
}
