//! Syndrome decoding: detection events, exact minimum-weight perfect
//! matching against the space-time fault graph, and recovery synthesis.
//!
//! Every detection event gets one virtual boundary partner so the matching
//! is always perfect: events pair either with each other (Manhattan weight
//! in check-grid + round coordinates) or with their own partner (weight =
//! distance to the nearer top/bottom boundary). Partners left over pair up
//! among themselves at zero cost. Small instances are solved by exhaustive
//! search, larger ones by the blossom algorithm; both are exact.

mod blossom;

use crate::code::CodeLayout;

/// Recorded Z-check outcomes over one run: `rounds` rows of
/// `d(d-1)` bits, bit set = check measured `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeHistory {
    d: usize,
    rounds: usize,
    checks: usize,
    bits: Vec<bool>,
}

impl SyndromeHistory {
    pub fn new(d: usize, rounds: usize) -> Self {
        assert!(rounds >= 1);
        let checks = d * (d - 1);
        Self { d, rounds, checks, bits: vec![false; rounds * checks] }
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn num_checks(&self) -> usize {
        self.checks
    }

    /// Bit for `round` (1-based) and check index.
    pub fn get(&self, round: usize, check: usize) -> bool {
        assert!(round >= 1 && round <= self.rounds && check < self.checks);
        self.bits[(round - 1) * self.checks + check]
    }

    pub fn set(&mut self, round: usize, check: usize, value: bool) {
        assert!(round >= 1 && round <= self.rounds && check < self.checks);
        self.bits[(round - 1) * self.checks + check] = value;
    }

    pub fn clear(&mut self) {
        self.bits.fill(false);
    }

    /// The final (perfect) round as a plain syndrome vector.
    pub fn final_round(&self) -> Vec<bool> {
        self.bits[(self.rounds - 1) * self.checks..].to_vec()
    }
}

/// A space-time location where consecutive rounds of one check disagreed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DetectionEvent {
    pub check: usize,
    pub row_idx: usize,
    pub col_idx: usize,
    /// Round in `1..=rounds`.
    pub round: usize,
}

/// Difference syndrome: an event wherever a check outcome changed between
/// consecutive rounds, with the round-0 reference being all zeros.
pub fn detection_events(history: &SyndromeHistory, layout: &CodeLayout) -> Vec<DetectionEvent> {
    assert_eq!(history.num_checks(), layout.num_z_checks());
    let mut events = Vec::new();
    for check in 0..history.num_checks() {
        let mut prev = false;
        for round in 1..=history.rounds() {
            let cur = history.get(round, check);
            if cur != prev {
                let (row_idx, col_idx) = layout.check_grid_coord(check);
                events.push(DetectionEvent { check, row_idx, col_idx, round });
            }
            prev = cur;
        }
    }
    events
}

/// Manhattan distance between two events in check-grid + round coordinates.
pub fn event_weight(a: &DetectionEvent, b: &DetectionEvent) -> i64 {
    (a.row_idx.abs_diff(b.row_idx) + a.col_idx.abs_diff(b.col_idx) + a.round.abs_diff(b.round))
        as i64
}

/// Weight of matching an event to the boundary: the minimum number of data
/// flips connecting its check to the top or bottom edge.
pub fn boundary_weight(layout: &CodeLayout, e: &DetectionEvent) -> i64 {
    layout.boundary_distance(e.check) as i64
}

/// A matching problem: detection events plus one precomputed boundary
/// weight per event. Pairwise weights are the Manhattan metric.
#[derive(Clone, Debug)]
pub struct MatchingInstance {
    pub events: Vec<DetectionEvent>,
    pub boundary_weights: Vec<i64>,
}

impl MatchingInstance {
    pub fn new(layout: &CodeLayout, events: Vec<DetectionEvent>) -> Self {
        let boundary_weights = events.iter().map(|e| boundary_weight(layout, e)).collect();
        Self { events, boundary_weights }
    }

    pub fn pair_weight(&self, i: usize, j: usize) -> i64 {
        event_weight(&self.events[i], &self.events[j])
    }
}

/// How one event was matched.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MatchPartner {
    Event(usize),
    Boundary,
}

/// A perfect matching over the events; event-event pairs are listed once
/// with the smaller index first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingResult {
    pub pairs: Vec<(usize, MatchPartner)>,
    pub total_weight: i64,
}

// Exhaustive search stays cheap up to this many events and avoids the
// blossom solver's per-call allocations on the Monte Carlo hot path.
const EXHAUSTIVE_LIMIT: usize = 8;

/// Exact minimum-weight perfect matching over the events and their
/// boundary partners.
pub fn mwpm(instance: &MatchingInstance) -> MatchingResult {
    mwpm_with_limit(instance, EXHAUSTIVE_LIMIT)
}

/// Like [`mwpm`] but with an explicit exhaustive/blossom crossover, so both
/// paths can be exercised directly by exactness tests.
pub fn mwpm_with_limit(instance: &MatchingInstance, limit: usize) -> MatchingResult {
    if instance.events.is_empty() {
        return MatchingResult { pairs: Vec::new(), total_weight: 0 };
    }
    if instance.events.len() <= limit {
        mwpm_exhaustive(instance)
    } else {
        mwpm_blossom(instance)
    }
}

fn mwpm_exhaustive(instance: &MatchingInstance) -> MatchingResult {
    let n = instance.events.len();
    debug_assert!(n <= 16);
    let mut best_weight = i64::MAX;
    let mut best: Vec<(usize, MatchPartner)> = Vec::new();
    let mut current: Vec<(usize, MatchPartner)> = Vec::new();

    fn search(
        instance: &MatchingInstance,
        unmatched: u32,
        weight: i64,
        current: &mut Vec<(usize, MatchPartner)>,
        best_weight: &mut i64,
        best: &mut Vec<(usize, MatchPartner)>,
    ) {
        if weight >= *best_weight {
            return;
        }
        if unmatched == 0 {
            *best_weight = weight;
            best.clone_from(current);
            return;
        }
        let i = unmatched.trailing_zeros() as usize;
        let rest = unmatched & !(1 << i);

        // pair with another unmatched event
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            current.push((i, MatchPartner::Event(j)));
            search(
                instance,
                rest & !(1 << j),
                weight + instance.pair_weight(i, j),
                current,
                best_weight,
                best,
            );
            current.pop();
        }

        // or send it to the boundary
        current.push((i, MatchPartner::Boundary));
        search(instance, rest, weight + instance.boundary_weights[i], current, best_weight, best);
        current.pop();
    }

    search(instance, (1u32 << n) - 1, 0, &mut current, &mut best_weight, &mut best);
    MatchingResult { pairs: best, total_weight: best_weight }
}

fn mwpm_blossom(instance: &MatchingInstance) -> MatchingResult {
    let n = instance.events.len();
    // Vertices 0..n are events, n..2n their boundary partners. Minimizing
    // total weight equals maximizing sum of (cap - w) over perfect
    // matchings, since every perfect matching here has exactly n edges.
    let mut cap = 0i64;
    for i in 0..n {
        cap = cap.max(instance.boundary_weights[i]);
        for j in i + 1..n {
            cap = cap.max(instance.pair_weight(i, j));
        }
    }
    let mut edges: blossom::Edges = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, (cap - instance.pair_weight(i, j)) as i32));
            edges.push((n + i, n + j, cap as i32));
        }
        edges.push((i, n + i, (cap - instance.boundary_weights[i]) as i32));
    }
    let mate = blossom::Matching::new(edges).max_cardinality().solve();

    let mut pairs = Vec::new();
    let mut total_weight = 0i64;
    for i in 0..n {
        let m = mate[i];
        assert_ne!(m, blossom::SENTINEL, "matching must be perfect");
        if m == n + i {
            pairs.push((i, MatchPartner::Boundary));
            total_weight += instance.boundary_weights[i];
        } else {
            debug_assert!(m < n, "events may only match events or their own partner");
            if i < m {
                pairs.push((i, MatchPartner::Event(m)));
                total_weight += instance.pair_weight(i, m);
            }
        }
    }
    MatchingResult { pairs, total_weight }
}

/// X flips to apply to the data qubits.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Recovery {
    /// Sorted, deduplicated data-qubit indices.
    pub flips: Vec<usize>,
}

/// Turn a matching into data flips: each matched pair contributes a
/// canonical shortest path (vertical segment first, then horizontal);
/// boundary pairs walk straight to the nearer of top/bottom. Purely
/// temporal pairs contribute nothing, and overlaps cancel mod 2.
pub fn recovery_from_matching(
    result: &MatchingResult,
    instance: &MatchingInstance,
    layout: &CodeLayout,
) -> Recovery {
    let mut toggles = vec![false; layout.num_data_qubits()];
    let mut toggle = |q: usize| toggles[q] = !toggles[q];

    for &(i, partner) in &result.pairs {
        let a = &instance.events[i];
        match partner {
            MatchPartner::Event(j) => {
                let b = &instance.events[j];
                walk_path(layout, a.row_idx, a.col_idx, b.row_idx, b.col_idx, &mut toggle);
            }
            MatchPartner::Boundary => {
                walk_to_boundary(layout, a.row_idx, a.col_idx, &mut toggle);
            }
        }
    }

    Recovery { flips: (0..toggles.len()).filter(|&q| toggles[q]).collect() }
}

// Data qubits crossed moving between two checks: first along the column,
// then along the destination row.
fn walk_path(
    layout: &CodeLayout,
    r1: usize,
    c1: usize,
    r2: usize,
    c2: usize,
    toggle: &mut impl FnMut(usize),
) {
    for a in r1.min(r2)..r1.max(r2) {
        let q = layout.data_index_at(2 * a + 2, 2 * c1).expect("vertical path step");
        toggle(q);
    }
    for b in c1.min(c2)..c1.max(c2) {
        let q = layout.data_index_at(2 * r2 + 1, 2 * b + 1).expect("horizontal path step");
        toggle(q);
    }
}

// Straight vertical run from a check to the nearer horizontal boundary.
fn walk_to_boundary(layout: &CodeLayout, row_idx: usize, col_idx: usize, toggle: &mut impl FnMut(usize)) {
    let d = layout.distance();
    if row_idx + 1 <= (d - 1) - row_idx {
        for a in 0..=row_idx {
            let q = layout.data_index_at(2 * a, 2 * col_idx).expect("boundary path step");
            toggle(q);
        }
    } else {
        for a in row_idx..d - 1 {
            let q = layout.data_index_at(2 * a + 2, 2 * col_idx).expect("boundary path step");
            toggle(q);
        }
    }
}

/// Full pipeline: detection events, matching, recovery. The recovery's
/// syndrome always equals the final-round syndrome of the history.
pub fn decode(history: &SyndromeHistory, layout: &CodeLayout) -> Recovery {
    let events = detection_events(history, layout);
    let instance = MatchingInstance::new(layout, events);
    let result = mwpm(&instance);
    let recovery = recovery_from_matching(&result, &instance, layout);
    debug_assert_eq!(
        layout.syndrome_of_x_pattern(&recovery.flips),
        history.final_round(),
        "recovery must clear the final-round syndrome"
    );
    recovery
}
