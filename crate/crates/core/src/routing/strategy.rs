//! Recovery strategies behind a common trait, registered by name.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::backtrack::BacktrackRecovery;
use super::d2d::{D2dRecovery, Discovery};
use super::greedy::Route;
use super::outcome::{DeliveryMode, EventKind};
use crate::error::{Error, Result};

/// What a strategy did about a dead-end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryResult {
    /// A new holder was found; greedy forwarding continues from it.
    Resume,
    Delivered(DeliveryMode),
    Failed,
}

/// A dead-end recovery procedure.
pub trait Recovery: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// D2D range as a multiple of the V2V range, for strategies that use one.
    fn d2d_range_factor(&self) -> Option<f64> {
        None
    }

    /// Whether the strategy lets simulated time pass (needs mobility).
    fn needs_mobility(&self) -> bool {
        false
    }

    /// Handles a dead-end at snapshot index `stuck`.
    fn recover(&self, route: &mut Route<'_>, stuck: usize) -> RecoveryResult;
}

/// Configuration-level description of a strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub name: String,
    pub max_back_hops: usize,
    pub d2d_range_factor: f64,
    /// Accept a D2D range factor outside `[3, 5]` (with a warning).
    pub allow_factor_override: bool,
    /// Simulated time a carrying vehicle may hold the message per dead-end (s).
    pub recovery_budget: f64,
}

impl Default for StrategySpec {
    fn default() -> Self {
        Self {
            name: "d2d_on_demand".into(),
            max_back_hops: 1,
            d2d_range_factor: 4.0,
            allow_factor_override: false,
            recovery_budget: 60.0,
        }
    }
}

impl StrategySpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn with_factor(mut self, factor: f64) -> Self {
        self.d2d_range_factor = factor;
        self
    }
}

pub const D2D_FACTOR_RANGE: (f64, f64) = (3.0, 5.0);

type Builder = fn(&StrategySpec) -> Result<Box<dyn Recovery>>;

/// Name-indexed table of strategy constructors.
pub struct StrategyRegistry {
    builders: BTreeMap<&'static str, Builder>,
}

/// Alias kept for the spelling used in configuration docs.
pub type RecoveryStrategy = dyn Recovery;

fn check_factor(spec: &StrategySpec) -> Result<()> {
    let f = spec.d2d_range_factor;
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::invalid("d2d_range_factor", "must be finite and > 0"));
    }
    let (lo, hi) = D2D_FACTOR_RANGE;
    if !(lo..=hi).contains(&f) {
        if !spec.allow_factor_override {
            return Err(Error::invalid(
                "d2d_range_factor",
                format!("{f} outside [{lo}, {hi}]; set allow_factor_override to use it"),
            ));
        }
        log::warn!("D2D range factor {f} outside [{lo}, {hi}]");
    }
    Ok(())
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, builder: Builder) {
        self.builders.insert(name, builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.keys().copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.builders.contains_key(name)
    }

    pub fn build(&self, spec: &StrategySpec) -> Result<Box<dyn Recovery>> {
        let builder = self
            .builders
            .get(spec.name.as_str())
            .ok_or_else(|| Error::UnknownStrategy(spec.name.clone()))?;
        builder(spec)
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("backtrack", |s| {
            if !(s.recovery_budget > 0.0) {
                return Err(Error::invalid("recovery_budget", "must be > 0"));
            }
            Ok(Box::new(BacktrackRecovery {
                max_back_hops: s.max_back_hops,
                budget: s.recovery_budget,
            }))
        });
        r.register("d2d_on_demand", |s| {
            check_factor(s)?;
            Ok(Box::new(D2dRecovery {
                range_factor: s.d2d_range_factor,
                discovery: Discovery::OnDemand,
            }))
        });
        r.register("d2d_proactive", |s| {
            check_factor(s)?;
            Ok(Box::new(D2dRecovery {
                range_factor: s.d2d_range_factor,
                discovery: Discovery::Proactive,
            }))
        });
        r.register("ideal_bridge", |_| Ok(Box::new(IdealBridge)));
        r
    }
}

/// Hands the message across the gap to the next vehicle (or the RSU) at the
/// cost of an ordinary hop, counted as a forward hop. Every component then
/// contributes exactly its retransmitters, which is the road-level quantity
/// the connected-set analysis predicts.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealBridge;

impl Recovery for IdealBridge {
    fn name(&self) -> &'static str {
        "ideal_bridge"
    }

    fn recover(&self, route: &mut Route<'_>, stuck: usize) -> RecoveryResult {
        route.outcome.forward_hops += 1;
        if stuck + 1 < route.snap.len() {
            route.transmit(stuck, stuck + 1, EventKind::IdealBridge);
            RecoveryResult::Resume
        } else {
            let cost = route.hop_cost(stuck);
            let (id, p) = (route.snap.ids[stuck], route.snap.positions[stuck]);
            route.outcome.record(EventKind::IdealBridge, id, p, cost);
            route.outcome.record(EventKind::RsuDelivery, id, p, 0.0);
            RecoveryResult::Delivered(DeliveryMode::V2vToRsu)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_registry_names() {
        let r = StrategyRegistry::default();
        let names: Vec<_> = r.names().collect();
        assert_eq!(
            names,
            vec!["backtrack", "d2d_on_demand", "d2d_proactive", "ideal_bridge"]
        );
        for n in names {
            assert_eq!(r.build(&StrategySpec::named(n)).unwrap().name(), n);
        }
    }

    #[test]
    fn unknown_name() {
        let r = StrategyRegistry::default();
        assert!(matches!(
            r.build(&StrategySpec::named("flood")),
            Err(Error::UnknownStrategy(_))
        ));
    }

    #[test]
    fn factor_bounds() {
        let r = StrategyRegistry::default();
        let spec = StrategySpec::named("d2d_proactive").with_factor(6.0);
        assert!(r.build(&spec).is_err());
        let spec = StrategySpec {
            allow_factor_override: true,
            ..spec
        };
        assert_eq!(r.build(&spec).unwrap().d2d_range_factor(), Some(6.0));
        assert!(r.build(&StrategySpec::named("d2d_on_demand").with_factor(3.0)).is_ok());
    }

    #[test]
    fn custom_registration() {
        let mut r = StrategyRegistry::empty();
        r.register("bridge", |_| Ok(Box::new(IdealBridge)));
        assert!(r.contains("bridge"));
        assert!(!r.contains("backtrack"));
    }
}
