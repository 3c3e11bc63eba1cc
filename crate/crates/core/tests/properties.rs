//! Property tests for the exact kernels and the minimal time function.

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mintime_core::geometry::dd::{cone_generators, cone_halfspaces};
use mintime_core::geometry::linalg::{add, dot, norm_sq, scale, sub};
use mintime_core::geometry::{rat, ExtRat, LinearProgram, Rat, Relation, Sense};
use mintime_core::mintime::{minimal_time_exact, Dynamics, Target};
use mintime_core::scene::random::{random_dynamics, random_polyhedral_scene};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-16i64..=16).prop_map(|n| rat(n, 4))
}

fn point2() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), 2)
}

fn dynamics(seed: u64) -> Dynamics {
    random_dynamics(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn time(f: &Dynamics, omega: &Target, x: &[Rat]) -> ExtRat {
    minimal_time_exact(f, omega, x).expect("polytope dynamics")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Boxed maximization: the optimum is attained, certified, and equals
    /// the dual objective `b·y`.
    #[test]
    fn lp_strong_duality(
        c in prop::collection::vec(-5i64..=5, 3),
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), 0i64..=6), 1..5),
    ) {
        let mut lp = LinearProgram::<Rat>::new(3, Sense::Maximize);
        lp.set_objective(c.iter().map(|v| rat(*v, 1)).collect()).unwrap();
        let mut b = Vec::new();
        for (a, rhs) in &rows {
            lp.add(a.iter().map(|v| rat(*v, 1)).collect(), Relation::Le, rat(*rhs, 1)).unwrap();
            b.push(rat(*rhs, 1));
        }
        for j in 0..3 {
            let mut e = vec![Rat::zero(); 3];
            e[j] = rat(1, 1);
            lp.add(e, Relation::Le, rat(4, 1)).unwrap();
            b.push(rat(4, 1));
        }
        let res = lp.solve();
        prop_assert!(res.is_optimal());
        prop_assert!(lp.certify(&res));
        prop_assert_eq!(res.value.clone().unwrap(), dot(&b, &res.dual));
    }

    #[test]
    fn gauge_is_positively_homogeneous(seed in 0u64..500, u in point2(), t in 1i64..=12) {
        let f = dynamics(seed);
        let t = rat(t, 3);
        let lhs = f.gauge_exact(&scale(&t, &u)).unwrap();
        let rhs = match f.gauge_exact(&u).unwrap() {
            ExtRat::Finite(g) => ExtRat::Finite(g * &t),
            ExtRat::Infinite => ExtRat::Infinite,
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauge_is_subadditive(seed in 0u64..500, u in point2(), v in point2()) {
        let f = dynamics(seed);
        let sum = f.gauge_exact(&add(&u, &v)).unwrap();
        let bound = match (f.gauge_exact(&u).unwrap(), f.gauge_exact(&v).unwrap()) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinite,
        };
        prop_assert!(sum <= bound);
    }

    /// `(σ_F(a) − σ_F(b))² ≤ ‖F‖² ‖a − b‖²`.
    #[test]
    fn support_function_is_lipschitz(seed in 0u64..500, a in point2(), b in point2()) {
        let f = dynamics(seed);
        let d = f.support_exact(&a).unwrap() - f.support_exact(&b).unwrap();
        prop_assert!(&d * &d <= f.bound_sq() * norm_sq(&sub(&a, &b)));
    }

    /// Generators of `{x : Ax ≤ 0}` satisfy the rows, and converting them
    /// back yields rows that describe the same cone.
    #[test]
    fn double_description_round_trip(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 0..6),
        probes in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 8),
    ) {
        let rows: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|v| rat(*v, 1)).collect()).collect();
        let gens = cone_generators(3, &rows);
        for a in &rows {
            for r in &gens.rays {
                prop_assert!(dot(a, r) <= Rat::zero());
            }
            for l in &gens.lines {
                prop_assert!(dot(a, l).is_zero());
            }
        }
        let back = cone_halfspaces(3, &gens);
        let inside = |rs: &[Vec<Rat>], x: &[Rat]| rs.iter().all(|a| dot(a, x) <= Rat::zero());
        for p in &probes {
            let x: Vec<Rat> = p.iter().map(|v| rat(*v, 1)).collect();
            prop_assert_eq!(inside(&rows, &x), inside(&back, &x));
        }
    }

    #[test]
    fn time_vanishes_exactly_on_the_target(seed in 0u64..500, x in point2()) {
        let scene = random_polyhedral_scene(seed);
        let omega = scene.polyhedral().unwrap();
        let t = time(&scene.dynamics, omega, &x);
        prop_assert_eq!(t == ExtRat::zero(), omega.contains(&x));
    }

    /// A larger target can only be reached sooner.
    #[test]
    fn time_decreases_as_the_target_grows(seed in 0u64..500, x in point2()) {
        let scene = random_polyhedral_scene(seed);
        let omega = scene.polyhedral().unwrap();
        let first = Target::from_pieces(2, omega.pieces()[..1].to_vec()).unwrap();
        prop_assert!(time(&scene.dynamics, omega, &x) <= time(&scene.dynamics, &first, &x));
    }

    /// `T_{sF} = T_F / s` for `s > 0`.
    #[test]
    fn time_scales_inversely_with_the_dynamics(seed in 0u64..500, x in point2(), s in 1i64..=8) {
        let scene = random_polyhedral_scene(seed);
        let omega = scene.polyhedral().unwrap();
        let s = rat(s, 2);
        let fast = scene.dynamics.scaled(&s).unwrap();
        let expected = match time(&scene.dynamics, omega, &x) {
            ExtRat::Finite(t) => ExtRat::Finite(t / &s),
            ExtRat::Infinite => ExtRat::Infinite,
        };
        prop_assert_eq!(time(&fast, omega, &x), expected);
    }
}
