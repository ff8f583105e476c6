use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Timing constants of the routing simulator (seconds).
///
/// None of these values come from measurements; they are illustrative
/// defaults and every one is configurable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayModel {
    /// Per-hop processing delay.
    pub t_proc: f64,
    /// Channel-access delay per neighbour of the sender (s/neighbour).
    pub t_access: f64,
    pub t_d2d_discovery_on_demand: f64,
    pub t_d2d_discovery_proactive: f64,
    pub t_d2d_setup: f64,
    pub t_d2d_tx: f64,
    pub t_cellular_fallback: f64,
    /// Mobility step while a vehicle carries the message.
    pub carry_step: f64,
}

impl Default for DelayModel {
    fn default() -> Self {
        Self {
            t_proc: 0.002,
            t_access: 0.0005,
            t_d2d_discovery_on_demand: 0.200,
            t_d2d_discovery_proactive: 0.0,
            t_d2d_setup: 0.050,
            t_d2d_tx: 0.010,
            t_cellular_fallback: 0.100,
            carry_step: 0.5,
        }
    }
}

impl DelayModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("t_proc", self.t_proc),
            ("t_access", self.t_access),
            ("t_d2d_discovery_on_demand", self.t_d2d_discovery_on_demand),
            ("t_d2d_discovery_proactive", self.t_d2d_discovery_proactive),
            ("t_d2d_setup", self.t_d2d_setup),
            ("t_d2d_tx", self.t_d2d_tx),
            ("t_cellular_fallback", self.t_cellular_fallback),
        ];
        for (name, v) in fields {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be finite and >= 0"));
            }
        }
        if !(self.carry_step > 0.0 && self.carry_step.is_finite()) {
            return Err(Error::invalid("carry_step", "must be finite and > 0"));
        }
        Ok(())
    }

    /// Cost of one V2V transmission by a sender with `neighbors` vehicles in range.
    pub fn hop(&self, neighbors: usize) -> f64 {
        self.t_proc + self.t_access * neighbors as f64
    }
}
