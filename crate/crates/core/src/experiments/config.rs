use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analytics::DEFAULT_MARGIN;
use crate::error::{Error, Result};
use crate::routing::strategy::D2D_FACTOR_RANGE;
use crate::routing::{DelayModel, StrategyRegistry, StrategySpec};
use crate::traffic::TrafficParams;

/// Fully resolved description of an experiment run. Everything a rerun
/// needs is in here; the worker count is deliberately absent because results
/// do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub traffic: TrafficParams,
    /// V2V ranges for the analytic, simulate and fig3 sweeps (m).
    pub ranges: Vec<f64>,
    /// Road lengths, source to RSU (m).
    pub road_lengths: Vec<f64>,
    /// Closed-form validity margin above ln 4.
    pub margin: f64,
    /// D2D range factors (multiples of the V2V range).
    pub d2d_factors: Vec<f64>,
    pub allow_factor_override: bool,
    /// Ranges for the strategy comparison (m).
    pub fig4_ranges: Vec<f64>,
    pub fig4_road_length: f64,
    pub strategies: Vec<String>,
    /// Strategy used for the analytic-vs-simulation comparison.
    pub fig3_strategy: String,
    pub max_back_hops: usize,
    /// Carry time allowed per dead-end before backtracking gives up (s).
    pub recovery_budget: f64,
    pub replications: u64,
    pub master_seed: u64,
    /// Number of `P(N_b = k)` terms in the analytic table.
    pub k_max: usize,
    /// Intervals of the kernel oracle grid.
    pub grid_size: usize,
    /// Minimum fraction of roads with a dead-end in the strategy comparison.
    pub deadend_floor: f64,
    pub delay: DelayModel,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            traffic: TrafficParams::default(),
            ranges: vec![100.0, 150.0],
            road_lengths: vec![5_000.0, 10_000.0, 20_000.0],
            margin: DEFAULT_MARGIN,
            d2d_factors: vec![3.0, 4.0, 5.0],
            allow_factor_override: false,
            fig4_ranges: vec![200.0, 250.0],
            fig4_road_length: 10_000.0,
            strategies: vec!["backtrack".into(), "d2d_on_demand".into(), "d2d_proactive".into()],
            fig3_strategy: "ideal_bridge".into(),
            max_back_hops: 1,
            recovery_budget: 60.0,
            replications: 10_000,
            master_seed: 1,
            k_max: 10,
            grid_size: 2000,
            deadend_floor: 0.5,
            delay: DelayModel::default(),
            output_dir: PathBuf::from("results"),
        }
    }
}

fn bad(key: &str, value: impl ToString, reason: impl Into<String>) -> Error {
    Error::ConfigValue {
        key: key.into(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn positive_list(key: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(bad(key, "", "legal range: at least one value"));
    }
    if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(bad(key, list(v), "legal range: every value finite and > 0"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.traffic;
        if !(t.lambda_a > 0.0 && t.lambda_a.is_finite()) {
            return Err(bad("traffic.lambda_a", t.lambda_a, "legal range: lambda_a > 0"));
        }
        if !(t.sigma > 0.0 && t.sigma.is_finite()) {
            return Err(bad("traffic.sigma", t.sigma, "legal range: sigma > 0"));
        }
        if !(t.v_min > 0.0 && t.v_min.is_finite()) {
            return Err(bad("traffic.v_min", t.v_min, "legal range: v_min > 0"));
        }
        if !(t.v_max > t.v_min && t.v_max.is_finite()) {
            return Err(bad(
                "traffic.v_max",
                t.v_max,
                format!("legal range: v_max > v_min = {}", t.v_min),
            ));
        }
        if !t.mu.is_finite() {
            return Err(bad("traffic.mu", t.mu, "legal range: finite"));
        }
        positive_list("link.ranges", &self.ranges)?;
        positive_list("experiment.road_lengths", &self.road_lengths)?;
        positive_list("link.fig4_ranges", &self.fig4_ranges)?;
        positive_list("link.d2d_factors", &self.d2d_factors)?;
        if !self.allow_factor_override {
            let (lo, hi) = D2D_FACTOR_RANGE;
            if let Some(f) = self.d2d_factors.iter().find(|f| !(lo..=hi).contains(*f)) {
                return Err(bad(
                    "link.d2d_factors",
                    f,
                    format!("legal range: [{lo}, {hi}] unless allow_factor_override = true"),
                ));
            }
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return Err(bad("link.margin", self.margin, "legal range: margin >= 0"));
        }
        if !(self.fig4_road_length > 0.0 && self.fig4_road_length.is_finite()) {
            return Err(bad(
                "experiment.fig4_road_length",
                self.fig4_road_length,
                "legal range: > 0",
            ));
        }
        if self.replications < 1 {
            return Err(bad(
                "experiment.replications",
                self.replications,
                "legal range: replications >= 1",
            ));
        }
        if !(self.recovery_budget > 0.0 && self.recovery_budget.is_finite()) {
            return Err(bad(
                "experiment.recovery_budget",
                self.recovery_budget,
                "legal range: > 0",
            ));
        }
        if !(1..=200).contains(&self.k_max) {
            return Err(bad("experiment.k_max", self.k_max, "legal range: 1..=200"));
        }
        if self.grid_size < 100 {
            return Err(bad(
                "experiment.grid_size",
                self.grid_size,
                "legal range: grid_size >= 100",
            ));
        }
        if !(0.0..=1.0).contains(&self.deadend_floor) {
            return Err(bad(
                "experiment.deadend_floor",
                self.deadend_floor,
                "legal range: [0, 1]",
            ));
        }
        let registry = StrategyRegistry::default();
        let known = registry.names().collect::<Vec<_>>().join(", ");
        if self.strategies.is_empty() {
            return Err(bad(
                "experiment.strategies",
                "",
                format!("legal values: one or more of {known}"),
            ));
        }
        for s in self.strategies.iter().chain(std::iter::once(&self.fig3_strategy)) {
            if !registry.contains(s) {
                return Err(bad("experiment.strategies", s, format!("legal values: {known}")));
            }
        }
        let d = &self.delay;
        let delays = [
            ("delay.t_proc", d.t_proc),
            ("delay.t_access", d.t_access),
            ("delay.t_d2d_discovery_on_demand", d.t_d2d_discovery_on_demand),
            ("delay.t_d2d_discovery_proactive", d.t_d2d_discovery_proactive),
            ("delay.t_d2d_setup", d.t_d2d_setup),
            ("delay.t_d2d_tx", d.t_d2d_tx),
            ("delay.t_cellular_fallback", d.t_cellular_fallback),
        ];
        for (key, v) in delays {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(bad(key, v, "legal range: >= 0"));
            }
        }
        if !(d.carry_step > 0.0 && d.carry_step.is_finite()) {
            return Err(bad("delay.carry_step", d.carry_step, "legal range: > 0"));
        }
        Ok(())
    }

    /// Strategy instances to compare: one per name, D2D strategies once per
    /// range factor. Returns `(spec, factor column)` pairs.
    pub fn strategy_specs(&self) -> Vec<(StrategySpec, f64)> {
        let registry = StrategyRegistry::default();
        let mut out = Vec::new();
        for name in &self.strategies {
            let base = self.spec(name);
            let uses_factor = registry
                .build(&base.clone().with_factor(D2D_FACTOR_RANGE.0))
                .map(|s| s.d2d_range_factor().is_some())
                .unwrap_or(false);
            if uses_factor {
                for &f in &self.d2d_factors {
                    out.push((base.clone().with_factor(f), f));
                }
            } else {
                out.push((base, 1.0));
            }
        }
        out
    }

    pub fn spec(&self, name: &str) -> StrategySpec {
        StrategySpec {
            name: name.into(),
            max_back_hops: self.max_back_hops,
            d2d_range_factor: self.d2d_factors.first().copied().unwrap_or(4.0),
            allow_factor_override: self.allow_factor_override,
            recovery_budget: self.recovery_budget,
        }
    }
}
