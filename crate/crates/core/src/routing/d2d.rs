//! eNodeB-assisted D2D bridging across a V2V gap, with cellular uplink to
//! the TCC when no vehicle is within D2D range.

use super::delay::DelayModel;
use super::greedy::Route;
use super::outcome::{DeliveryMode, EventKind};
use super::strategy::{Recovery, RecoveryResult};
use crate::traffic::RoadSnapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discovery {
    /// Peer discovery runs only once the dead-end is detected.
    OnDemand,
    /// Peers were discovered in advance.
    Proactive,
}

impl Discovery {
    pub fn latency(self, delay: &DelayModel) -> f64 {
        match self {
            Discovery::OnDemand => delay.t_d2d_discovery_on_demand,
            Discovery::Proactive => delay.t_d2d_discovery_proactive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum D2dDecision {
    Bridge(usize),
    CellularDelivery,
}

/// Farthest vehicle within `range_factor * range` ahead of `stuck`, or the
/// cellular uplink; returns the decision and the delay it adds.
pub fn recover_d2d(
    snap: &RoadSnapshot,
    stuck: usize,
    range_factor: f64,
    discovery: Discovery,
    range: f64,
    delay: &DelayModel,
) -> (D2dDecision, f64) {
    let p = snap.positions[stuck];
    let last = snap.positions.partition_point(|&x| x <= p + range_factor * range);
    if last > stuck + 1 {
        let added = discovery.latency(delay) + delay.t_d2d_setup + delay.t_d2d_tx;
        (D2dDecision::Bridge(last - 1), added)
    } else {
        (D2dDecision::CellularDelivery, delay.t_cellular_fallback)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct D2dRecovery {
    pub range_factor: f64,
    pub discovery: Discovery,
}

impl Recovery for D2dRecovery {
    fn name(&self) -> &'static str {
        match self.discovery {
            Discovery::OnDemand => "d2d_on_demand",
            Discovery::Proactive => "d2d_proactive",
        }
    }

    fn d2d_range_factor(&self) -> Option<f64> {
        Some(self.range_factor)
    }

    fn recover(&self, route: &mut Route<'_>, stuck: usize) -> RecoveryResult {
        let (decision, added) = recover_d2d(
            &route.snap,
            stuck,
            self.range_factor,
            self.discovery,
            route.range,
            route.delay,
        );
        match decision {
            D2dDecision::Bridge(j) => {
                route.outcome.d2d_links += 1;
                let (id, p) = (route.snap.ids[j], route.snap.positions[j]);
                route.outcome.record(EventKind::D2dBridge, id, p, added);
                RecoveryResult::Resume
            }
            D2dDecision::CellularDelivery => {
                let (id, p) = (route.snap.ids[stuck], route.snap.positions[stuck]);
                route.outcome.record(EventKind::CellularUplink, id, p, added);
                RecoveryResult::Delivered(DeliveryMode::CellularDirect)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn road(pos: &[f64]) -> RoadSnapshot {
        let v: Vec<(f64, f64)> = pos.iter().map(|&p| (p, 25.0)).collect();
        RoadSnapshot::from_vehicles(500.0, &v).unwrap()
    }

    #[test]
    fn bridges_gap_within_factor() {
        let s = road(&[0.0, 50.0, 120.0, 190.0, 420.0]);
        let d = DelayModel::default();
        let (dec, added) = recover_d2d(&s, 3, 3.0, Discovery::OnDemand, 200.0, &d);
        assert_eq!(dec, D2dDecision::Bridge(4));
        assert!((added - (0.200 + 0.050 + 0.010)).abs() < 1e-15);
        let (_, proactive) = recover_d2d(&s, 3, 3.0, Discovery::Proactive, 200.0, &d);
        assert_eq!(
            added - proactive,
            d.t_d2d_discovery_on_demand - d.t_d2d_discovery_proactive
        );
    }

    #[test]
    fn falls_back_to_cellular() {
        let s = road(&[0.0, 50.0, 120.0, 190.0, 420.0]);
        let d = DelayModel::default();
        let (dec, added) = recover_d2d(&s, 4, 3.0, Discovery::OnDemand, 200.0, &d);
        assert_eq!(dec, D2dDecision::CellularDelivery);
        assert_eq!(added, d.t_cellular_fallback);
        // gap 230 > 1.1 * 200
        let (dec, _) = recover_d2d(&s, 3, 1.1, Discovery::OnDemand, 200.0, &d);
        assert_eq!(dec, D2dDecision::CellularDelivery);
    }
}
