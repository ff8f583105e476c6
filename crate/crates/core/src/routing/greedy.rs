//! Greedy farthest-in-range forwarding toward increasing position.

use rand::Rng;

use super::delay::DelayModel;
use super::outcome::{DeliveryMode, EventKind, RoutingOutcome};
use super::strategy::Recovery;
use crate::traffic::{RoadSnapshot, TrafficModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NextHop {
    Relay(usize),
    DeadEnd,
}

/// The vehicle with the largest position in `(p_current, p_current + range]`.
pub fn greedy_next_hop(snap: &RoadSnapshot, current: usize, range: f64) -> NextHop {
    let p = snap.positions[current];
    let last = snap.positions.partition_point(|&x| x <= p + range);
    if last > current + 1 {
        NextHop::Relay(last - 1)
    } else {
        NextHop::DeadEnd
    }
}

/// Mutable state of one message on one road.
pub struct Route<'a> {
    pub snap: RoadSnapshot,
    pub range: f64,
    pub delay: &'a DelayModel,
    /// Traffic model and random stream for strategies that let time pass.
    pub mobility: Option<(&'a TrafficModel, &'a mut dyn Rng)>,
    pub outcome: RoutingOutcome,
}

impl<'a> Route<'a> {
    pub fn new(snap: RoadSnapshot, source: usize, range: f64, delay: &'a DelayModel) -> Self {
        let outcome = RoutingOutcome::start(snap.ids[source], snap.positions[source]);
        Self {
            snap,
            range,
            delay,
            mobility: None,
            outcome,
        }
    }

    pub fn with_mobility(mut self, model: &'a TrafficModel, rng: &'a mut dyn Rng) -> Self {
        self.mobility = Some((model, rng));
        self
    }

    pub fn holder_index(&self) -> Option<usize> {
        self.snap.index_of(self.outcome.holder())
    }

    /// The RSU hears a holder strictly closer than the range.
    pub fn rsu_in_reach(&self, index: usize) -> bool {
        self.snap.rsu_position - self.snap.positions[index] < self.range
    }

    pub fn hop_cost(&self, sender: usize) -> f64 {
        self.delay.hop(self.snap.neighbor_count(sender, self.range))
    }

    /// Transfers the message from `from` to `to` with an ordinary V2V cost.
    pub fn transmit(&mut self, from: usize, to: usize, kind: EventKind) {
        let cost = self.hop_cost(from);
        self.outcome
            .record(kind, self.snap.ids[to], self.snap.positions[to], cost);
    }

    fn finish(&mut self, mode: DeliveryMode) {
        self.outcome.delivered = true;
        self.outcome.delivery_mode = Some(mode);
    }

    pub fn run(mut self, recovery: Option<&dyn Recovery>) -> RoutingOutcome {
        loop {
            let Some(i) = self.holder_index() else {
                let o = &mut self.outcome;
                let (h, p) = (o.holder(), o.trace.last().map_or(0.0, |e| e.position));
                o.record(EventKind::Failure, h, p, 0.0);
                break;
            };
            if self.rsu_in_reach(i) {
                let (id, p) = (self.snap.ids[i], self.snap.positions[i]);
                self.outcome.record(EventKind::RsuDelivery, id, p, 0.0);
                let mode = if self.outcome.d2d_links > 0 {
                    DeliveryMode::D2dBridgeThenV2v
                } else {
                    DeliveryMode::V2vToRsu
                };
                self.finish(mode);
                break;
            }
            match greedy_next_hop(&self.snap, i, self.range) {
                NextHop::Relay(j) => {
                    self.outcome.forward_hops += 1;
                    self.transmit(i, j, EventKind::V2vHop);
                }
                NextHop::DeadEnd => {
                    self.outcome.dead_ends += 1;
                    let (id, p) = (self.snap.ids[i], self.snap.positions[i]);
                    self.outcome.record(EventKind::DeadEnd, id, p, 0.0);
                    let Some(strategy) = recovery else {
                        self.outcome.stuck_at = Some(i);
                        break;
                    };
                    match strategy.recover(&mut self, i) {
                        super::strategy::RecoveryResult::Resume => {}
                        super::strategy::RecoveryResult::Delivered(mode) => {
                            self.finish(mode);
                            break;
                        }
                        super::strategy::RecoveryResult::Failed => {
                            let o = &mut self.outcome;
                            let (h, p) = (o.holder(), o.trace.last().map_or(0.0, |e| e.position));
                            o.record(EventKind::Failure, h, p, 0.0);
                            break;
                        }
                    }
                }
            }
        }
        self.outcome
    }
}

/// Plain V2V routing from `source` until the RSU is in reach or a dead-end.
pub fn route_v2v(snap: &RoadSnapshot, source: usize, rsu: f64, range: f64, delay: &DelayModel) -> RoutingOutcome {
    let mut snap = snap.clone();
    snap.rsu_position = rsu;
    Route::new(snap, source, range, delay).run(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn road(pos: &[f64], len: f64) -> RoadSnapshot {
        let v: Vec<(f64, f64)> = pos.iter().map(|&p| (p, 25.0)).collect();
        RoadSnapshot::from_vehicles(len, &v).unwrap()
    }

    #[test]
    fn farthest_in_range() {
        let s = road(&[0.0, 50.0, 120.0, 190.0, 420.0], 500.0);
        assert_eq!(greedy_next_hop(&s, 0, 200.0), NextHop::Relay(3));
        assert_eq!(greedy_next_hop(&s, 3, 200.0), NextHop::DeadEnd);
        assert_eq!(greedy_next_hop(&s, 4, 200.0), NextHop::DeadEnd);
        // boundary inclusive
        assert_eq!(greedy_next_hop(&s, 1, 140.0), NextHop::Relay(3));
    }

    #[test]
    fn source_in_reach_is_free() {
        let s = road(&[400.0], 500.0);
        let o = route_v2v(&s, 0, 500.0, 200.0, &DelayModel::default());
        assert!(o.delivered);
        assert_eq!(o.forward_hops, 0);
        assert_eq!(o.total_delay, 0.0);
        assert_eq!(o.delivery_mode, Some(DeliveryMode::V2vToRsu));
    }

    #[test]
    fn hand_checked_chain() {
        let s = road(&[0.0, 150.0, 300.0, 450.0], 500.0);
        let d = DelayModel::default();
        let o = route_v2v(&s, 0, 500.0, 200.0, &d);
        assert!(o.delivered);
        assert_eq!(o.forward_hops, 3);
        let holders: Vec<u64> = o
            .trace
            .iter()
            .filter(|e| e.kind == EventKind::V2vHop)
            .map(|e| e.holder)
            .collect();
        assert_eq!(holders, vec![1, 2, 3]);
        // neighbours within 200 m: 0 -> {150}, 150 -> {0, 300}, 300 -> {150, 450}
        let expected = d.hop(1) + d.hop(2) + d.hop(2);
        assert!((o.total_delay - expected).abs() < 1e-15);
    }

    #[test]
    fn dead_end_stops_plain_route() {
        let s = road(&[0.0, 50.0, 120.0, 190.0, 420.0], 500.0);
        let o = route_v2v(&s, 0, 500.0, 200.0, &DelayModel::default());
        assert!(!o.delivered);
        assert_eq!(o.stuck_at, Some(3));
        assert_eq!(o.dead_ends, 1);
    }
}
