//! Pure-V2V recovery: pass the message back along its trace to the fastest
//! recent relay, then carry it (store-carry-forward) until vehicle motion
//! opens a forward hop beyond the stalled frontier.

use super::greedy::{greedy_next_hop, NextHop, Route};
use super::outcome::EventKind;
use super::strategy::{Recovery, RecoveryResult};

#[derive(Debug, Clone, Copy)]
pub struct BacktrackRecovery {
    pub max_back_hops: usize,
    /// Carry time allowed per dead-end before giving up (s).
    pub budget: f64,
}

impl Recovery for BacktrackRecovery {
    fn name(&self) -> &'static str {
        "backtrack"
    }

    fn needs_mobility(&self) -> bool {
        true
    }

    fn recover(&self, route: &mut Route<'_>, stuck: usize) -> RecoveryResult {
        recover_backtrack(route, stuck, self.max_back_hops, self.budget)
    }
}

/// Distinct earlier holders, most recent first, excluding `stuck_id`.
fn previous_holders(route: &Route<'_>, stuck_id: u64, limit: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(limit);
    for e in route.outcome.trace.iter().rev() {
        if out.len() == limit {
            break;
        }
        if e.holder != stuck_id && !out.contains(&e.holder) {
            out.push(e.holder);
        }
    }
    out
}

/// A forward hop from the current holder that lands beyond the frontier.
fn forward_beyond_frontier(route: &Route<'_>, holder: usize, stuck_id: u64) -> bool {
    let own = route.snap.positions[holder];
    let frontier = route
        .snap
        .index_of(stuck_id)
        .map_or(own, |i| route.snap.positions[i].max(own));
    match greedy_next_hop(&route.snap, holder, route.range) {
        NextHop::Relay(j) => route.snap.positions[j] > frontier,
        NextHop::DeadEnd => false,
    }
}

pub fn recover_backtrack(route: &mut Route<'_>, stuck: usize, max_back_hops: usize, budget: f64) -> RecoveryResult {
    let stuck_id = route.snap.ids[stuck];

    // Backward phase: walk the trace while each step stays in V2V range and
    // hand the message to the fastest vehicle met on the way.
    let mut path = vec![stuck];
    for id in previous_holders(route, stuck_id, max_back_hops) {
        let Some(i) = route.snap.index_of(id) else { break };
        let cur = *path.last().expect("non-empty");
        if (route.snap.positions[cur] - route.snap.positions[i]).abs() > route.range {
            break;
        }
        path.push(i);
    }
    let best = (0..path.len())
        .max_by(|&a, &b| {
            route.snap.speeds[path[a]]
                .total_cmp(&route.snap.speeds[path[b]])
                .then(b.cmp(&a))
        })
        .unwrap_or(0);
    for w in path[..=best].windows(2) {
        route.outcome.backward_hops += 1;
        route.transmit(w[0], w[1], EventKind::BackwardHop);
        if forward_beyond_frontier(route, w[1], stuck_id) {
            return RecoveryResult::Resume;
        }
    }

    // Carry phase.
    let Some((model, rng)) = route.mobility.take() else {
        return RecoveryResult::Failed;
    };
    let dt = route.delay.carry_step;
    let mut waited = 0.0;
    let result = loop {
        if waited + 0.5 * dt > budget {
            break RecoveryResult::Failed;
        }
        model.advance(&mut route.snap, dt, &mut *rng);
        waited += dt;
        route.outcome.carry_time += dt;
        let holder_id = route.outcome.holder();
        let Some(h) = route.snap.index_of(holder_id) else {
            break RecoveryResult::Failed;
        };
        let p = route.snap.positions[h];
        route.outcome.record(EventKind::Carry, holder_id, p, dt);
        if route.rsu_in_reach(h) || forward_beyond_frontier(route, h, stuck_id) {
            break RecoveryResult::Resume;
        }
    };
    route.mobility = Some((model, rng));
    result
}
