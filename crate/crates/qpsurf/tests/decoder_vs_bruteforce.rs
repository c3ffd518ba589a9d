//! Matching exactness: the production matcher (both the exhaustive and the
//! blossom path) must attain the brute-force minimum weight on every small
//! instance.

use qpsurf::code::build_layout;
use qpsurf::decoder::{DetectionEvent, MatchingInstance};
use qpsurf_oracle::brute_force_matching;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_instance(rng: &mut StdRng, d: usize, max_events: usize) -> MatchingInstance {
    let layout = build_layout(d).unwrap();
    let n_events = rng.gen_range(0..=max_events);
    let mut events = Vec::with_capacity(n_events);
    for _ in 0..n_events {
        let check = rng.gen_range(0..layout.num_z_checks());
        let (row_idx, col_idx) = layout.check_grid_coord(check);
        events.push(DetectionEvent { check, row_idx, col_idx, round: rng.gen_range(1..=d) });
    }
    MatchingInstance::new(&layout, events)
}

#[test]
fn mwpm_attains_brute_force_minimum() {
    let mut rng = StdRng::seed_from_u64(404);
    for trial in 0..200 {
        let d = *[3usize, 5, 7].iter().nth(trial % 3).unwrap();
        let instance = random_instance(&mut rng, d, 12);
        let fast = qpsurf::decoder::mwpm(&instance);
        let slow = brute_force_matching(&instance);
        assert_eq!(fast.total_weight, slow.total_weight, "trial {trial}");
    }
}

#[test]
fn blossom_path_attains_brute_force_minimum() {
    // force the blossom solver even on small instances
    let mut rng = StdRng::seed_from_u64(405);
    for trial in 0..120 {
        let instance = random_instance(&mut rng, 5, 10);
        if instance.events.is_empty() {
            continue;
        }
        let fast = qpsurf::decoder::mwpm_with_limit(&instance, 0);
        let slow = brute_force_matching(&instance);
        assert_eq!(fast.total_weight, slow.total_weight, "trial {trial}");
    }
}
