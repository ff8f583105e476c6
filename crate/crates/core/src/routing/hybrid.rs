//! One complete message life: road generation, V2V forwarding and the
//! configured recovery at every dead-end.

use rand::Rng;

use super::delay::DelayModel;
use super::greedy::Route;
use super::outcome::RoutingOutcome;
use super::strategy::Recovery;
use crate::analytics::ConnectivityParams;
use crate::error::{Error, Result};
use crate::seed::SimRng;
use crate::traffic::{RoadSnapshot, TrafficModel, TrafficParams};

#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub traffic: TrafficModel,
    /// V2V range (m).
    pub range: f64,
    pub road_length: f64,
    pub delay: DelayModel,
}

impl Scenario {
    pub fn new(traffic: TrafficParams, range: f64, road_length: f64, delay: DelayModel) -> Result<Self> {
        if !(range > 0.0) {
            return Err(Error::invalid("range", "must be > 0"));
        }
        if !(road_length > 0.0) {
            return Err(Error::invalid("road_length", "must be > 0"));
        }
        delay.validate()?;
        Ok(Self {
            traffic: TrafficModel::new(traffic)?,
            range,
            road_length,
            delay,
        })
    }

    pub fn connectivity(&self, margin: f64) -> Result<ConnectivityParams> {
        ConnectivityParams::with_margin(self.traffic.lambda, self.range, margin)
    }

    /// Poisson road with the alerting vehicle placed at position 0.
    pub fn road<R: Rng + ?Sized>(&self, rng: &mut R) -> RoadSnapshot {
        let mut snap = self.traffic.snapshot(self.road_length, rng);
        let speed = self.traffic.dist.sample(rng);
        snap.positions.insert(0, 0.0);
        snap.speeds.insert(0, speed);
        snap.ids.insert(0, snap.next_id);
        snap.next_id += 1;
        snap
    }

    pub fn route(&self, snap: RoadSnapshot, strategy: &dyn Recovery, rng: &mut SimRng) -> RoutingOutcome {
        Route::new(snap, 0, self.range, &self.delay)
            .with_mobility(&self.traffic, rng)
            .run(Some(strategy))
    }
}

/// Generates a road from `rng` and routes an alert from its first vehicle.
/// Deterministic in the stream: strategies given equal streams see the same road.
pub fn run_hybrid(scenario: &Scenario, strategy: &dyn Recovery, rng: &mut SimRng) -> RoutingOutcome {
    let snap = scenario.road(rng);
    scenario.route(snap, strategy, rng)
}
