mod common;

use common::{random_points, z_rank, Scene};
use epicube::degeneracy::{random_combinatorial_cube, veronese_rank};
use epicube::estimators::eight_point;
use epicube::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constraint_rank_is_bounded_by_veronese_rank(seed in any::<u64>(), n in 8usize..=12, from_cube in 0usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cube = random_combinatorial_cube(&mut rng, 2.0).unwrap();
        let mut world: Vec<_> = cube.vertices()[..from_cube.min(n)].to_vec();
        world.extend(random_points(&mut rng, n - world.len()));
        world.shuffle(&mut rng);
        let scene = Scene::new(&mut rng, world);
        let rz = z_rank(&scene.x, &scene.y, 1e-10);
        let rv = veronese_rank(&scene.world, 1e-10);
        prop_assert!(rz <= rv, "rank Z {} > rank ν {}", rz, rv);
    }
}

#[test]
fn cube_images_always_defeat_the_eight_point_algorithm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trials = 200;
    let mut degenerate = 0;
    for _ in 0..trials {
        let scene = Scene::cube(&mut rng);
        assert_eq!(veronese_rank(&scene.world, 1e-10), 7);
        assert!(z_rank(&scene.x, &scene.y, 1e-10) <= 7);
        if matches!(eight_point(&scene.x, &scene.y), Err(Error::DegenerateInput { .. })) {
            degenerate += 1;
        }
    }
    assert!(degenerate * 100 >= 99 * trials, "{degenerate}/{trials}");
}

#[test]
fn generic_points_never_defeat_the_eight_point_algorithm() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..1000 {
        let world = random_points(&mut rng, 8);
        let scene = Scene::new(&mut rng, world);
        let result = eight_point(&scene.x, &scene.y);
        assert!(!matches!(result, Err(Error::DegenerateInput { .. })), "trial {trial}: {result:?}");
    }
}
