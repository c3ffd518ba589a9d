//! Exhaustive minimum-weight perfect matching over small instances,
//! including the per-event boundary option. Certifies the production
//! matcher; exponential by construction.

use qpsurf::decoder::{MatchPartner, MatchingInstance, MatchingResult};

pub const MAX_EVENTS: usize = 12;

/// Minimum over every perfect matching of the events, where each event may
/// pair with any other unmatched event or retire to the boundary at its own
/// boundary weight.
pub fn brute_force_matching(instance: &MatchingInstance) -> MatchingResult {
    let n = instance.events.len();
    assert!(n <= MAX_EVENTS, "brute-force matching capped at {MAX_EVENTS} events");

    let mut best_weight = i64::MAX;
    let mut best_pairs = Vec::new();
    let mut matched = vec![false; n];
    let mut pairs = Vec::new();
    explore(instance, &mut matched, &mut pairs, 0, &mut best_weight, &mut best_pairs);
    MatchingResult { pairs: best_pairs, total_weight: best_weight.max(0) }
}

fn explore(
    instance: &MatchingInstance,
    matched: &mut [bool],
    pairs: &mut Vec<(usize, MatchPartner)>,
    weight: i64,
    best_weight: &mut i64,
    best_pairs: &mut Vec<(usize, MatchPartner)>,
) {
    let first = match matched.iter().position(|&m| !m) {
        None => {
            if weight < *best_weight {
                *best_weight = weight;
                best_pairs.clone_from(pairs);
            }
            return;
        }
        Some(i) => i,
    };

    matched[first] = true;
    for other in first + 1..matched.len() {
        if matched[other] {
            continue;
        }
        matched[other] = true;
        pairs.push((first, MatchPartner::Event(other)));
        explore(
            instance,
            matched,
            pairs,
            weight + instance.pair_weight(first, other),
            best_weight,
            best_pairs,
        );
        pairs.pop();
        matched[other] = false;
    }

    pairs.push((first, MatchPartner::Boundary));
    explore(
        instance,
        matched,
        pairs,
        weight + instance.boundary_weights[first],
        best_weight,
        best_pairs,
    );
    pairs.pop();
    matched[first] = false;
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpsurf::code::build_layout;
    use qpsurf::decoder::DetectionEvent;

    fn instance_with(events: Vec<DetectionEvent>, boundary: Vec<i64>) -> MatchingInstance {
        MatchingInstance { events, boundary_weights: boundary }
    }

    #[test]
    fn empty_instance() {
        let layout = build_layout(3).unwrap();
        let instance = MatchingInstance::new(&layout, Vec::new());
        let result = brute_force_matching(&instance);
        assert_eq!(result.total_weight, 0);
        assert!(result.pairs.is_empty());
    }

    #[test]
    fn prefers_cheap_pairing_over_boundaries() {
        let a = DetectionEvent { check: 0, row_idx: 1, col_idx: 1, round: 1 };
        let b = DetectionEvent { check: 0, row_idx: 1, col_idx: 1, round: 2 };
        let instance = instance_with(vec![a, b], vec![2, 2]);
        let result = brute_force_matching(&instance);
        assert_eq!(result.total_weight, 1);
        assert_eq!(result.pairs, vec![(0, MatchPartner::Event(1))]);
    }

    #[test]
    fn prefers_boundaries_when_events_are_distant() {
        let a = DetectionEvent { check: 0, row_idx: 0, col_idx: 0, round: 1 };
        let b = DetectionEvent { check: 0, row_idx: 0, col_idx: 6, round: 1 };
        let instance = instance_with(vec![a, b], vec![1, 1]);
        let result = brute_force_matching(&instance);
        assert_eq!(result.total_weight, 2);
    }
}
