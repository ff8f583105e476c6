//! Every configured strategy over every `(R, L)` cell.

use super::config::ExperimentConfig;
use super::fig3::cell_seed;
use super::mc::{monte_carlo, Executor};
use super::table::{Cell, Table};
use crate::error::Result;
use crate::routing::{Scenario, StrategyRegistry};

pub const COLUMNS: [&str; 14] = [
    "strategy",
    "cr_factor",
    "R_m",
    "L_m",
    "forward_hops_mean",
    "forward_hops_ci95",
    "backward_hops_mean",
    "d2d_links_mean",
    "delay_mean_s",
    "delay_ci95_s",
    "delay_ci99_s",
    "delivery_rate",
    "delivery_rate_ci95",
    "deadend_rate",
];

pub fn run_sweep(cfg: &ExperimentConfig, exec: &Executor) -> Result<Table> {
    let registry = StrategyRegistry::default();
    let mut table = Table::new("simulate", &COLUMNS);
    for &range in &cfg.ranges {
        for &road_length in &cfg.road_lengths {
            let scenario = Scenario::new(cfg.traffic, range, road_length, cfg.delay)?;
            let seed = cell_seed(cfg.master_seed, 1, range, road_length);
            for (spec, factor) in cfg.strategy_specs() {
                let strategy = registry.build(&spec)?;
                let s = monte_carlo(exec, &scenario, strategy.as_ref(), cfg.replications, seed)?;
                table.push(vec![
                    Cell::text(&spec.name),
                    Cell::Num(factor),
                    Cell::Num(range),
                    Cell::Num(road_length),
                    Cell::Num(s.forward_hops.mean),
                    Cell::opt(s.forward_hops.ci95),
                    Cell::Num(s.backward_hops.mean),
                    Cell::Num(s.d2d_links.mean),
                    Cell::Num(s.total_delay.mean),
                    Cell::opt(s.total_delay.ci95),
                    Cell::opt(s.total_delay.ci99),
                    Cell::Num(s.delivery_rate.mean),
                    Cell::opt(s.delivery_rate.ci95),
                    Cell::Num(s.deadend_rate),
                ]);
            }
        }
    }
    Ok(table)
}
