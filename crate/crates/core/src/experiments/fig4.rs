//! Recovery strategies compared on paired seeds: every strategy sees the same
//! road realisations, replication by replication.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::fig3::cell_seed;
use super::mc::{run_replications, Executor};
use super::stats::{one_sided_critical, AggregateStats, MetricStats, ReplicationRecord};
use super::table::{Cell, Table};
use crate::error::{Error, Result};
use crate::routing::{Scenario, StrategyRegistry, StrategySpec};

pub const COLUMNS: [&str; 10] = [
    "strategy",
    "cr_factor",
    "R_m",
    "forward_hops_mean",
    "backward_hops_mean",
    "d2d_links_mean",
    "delay_mean_s",
    "delay_ci95_s",
    "delivery_rate",
    "deadend_rate",
];

pub const HEADLINE_COLUMNS: [&str; 9] = [
    "strategy",
    "cr_factor",
    "R_m",
    "paired_n",
    "delay_gain_mean_s",
    "delay_gain_lower99_s",
    "faster_at_99",
    "delivery_dominates",
    "proactive_le_on_demand",
];

/// Minimum number of roads with a dead-end behind the conditioned metrics.
pub const MIN_DEAD_ENDS: u64 = 100;
pub const BASELINE: &str = "backtrack";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Report {
    pub unconditional: Table,
    /// Metrics over replications with at least one dead-end.
    pub dead_end: Table,
    /// Each strategy against backtracking on the dead-end replications.
    pub headline: Table,
    pub notes: Vec<String>,
}

struct Arm {
    spec: StrategySpec,
    factor: f64,
    records: Vec<ReplicationRecord>,
}

fn row(arm: &Arm, range: f64, s: &AggregateStats) -> Vec<Cell> {
    vec![
        Cell::text(&arm.spec.name),
        Cell::Num(arm.factor),
        Cell::Num(range),
        Cell::Num(s.forward_hops.mean),
        Cell::Num(s.backward_hops.mean),
        Cell::Num(s.d2d_links.mean),
        Cell::Num(s.total_delay.mean),
        Cell::opt(s.total_delay.ci95),
        Cell::Num(s.delivery_rate.mean),
        Cell::Num(s.deadend_rate),
    ]
}

fn yes_no(b: bool) -> Cell {
    Cell::text(if b { "yes" } else { "no" })
}

/// One-sided lower 99% confidence bound on the mean of `xs`.
pub fn lower_bound_99(xs: &[f64]) -> Option<f64> {
    let s = MetricStats::from_samples(xs);
    if s.n < 2 {
        return None;
    }
    Some(s.mean - one_sided_critical(0.99, s.n) * s.sd / (s.n as f64).sqrt())
}

pub fn run_fig4(cfg: &ExperimentConfig, exec: &Executor) -> Result<Fig4Report> {
    let registry = StrategyRegistry::default();
    let mut report = Fig4Report {
        unconditional: Table::new("fig4", &COLUMNS),
        dead_end: Table::new("fig4_deadend", &COLUMNS),
        headline: Table::new("fig4_headline", &HEADLINE_COLUMNS),
        notes: Vec::new(),
    };
    for &range in &cfg.fig4_ranges {
        let scenario = Scenario::new(cfg.traffic, range, cfg.fig4_road_length, cfg.delay)?;
        let seed = cell_seed(cfg.master_seed, 4, range, cfg.fig4_road_length);
        let mut arms = Vec::new();
        for (spec, factor) in cfg.strategy_specs() {
            let strategy = registry.build(&spec)?;
            let records = run_replications(exec, &scenario, strategy.as_ref(), cfg.replications, seed);
            arms.push(Arm { spec, factor, records });
        }

        // The first dead-end is met on the static road before any strategy
        // acts, so the conditioning set is the same for every arm.
        let mask: Vec<bool> = arms[0].records.iter().map(|r| r.dead_ends > 0).collect();
        let hits = mask.iter().filter(|&&m| m).count() as u64;
        if hits < MIN_DEAD_ENDS {
            return Err(Error::InsufficientDeadEnds {
                observed: hits,
                required: MIN_DEAD_ENDS,
            });
        }
        let rate = hits as f64 / mask.len() as f64;
        if rate < cfg.deadend_floor {
            let note = format!(
                "R = {range}: dead-end rate {rate:.4} below the configured floor {}",
                cfg.deadend_floor
            );
            log::warn!("{note}");
            report.notes.push(note);
        }

        for arm in &arms {
            let all = AggregateStats::from_records(&arm.records);
            report.unconditional.push(row(arm, range, &all));
            let cond: Vec<ReplicationRecord> = arm
                .records
                .iter()
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(r, _)| *r)
                .collect();
            report
                .dead_end
                .push(row(arm, range, &AggregateStats::from_records(&cond)));
        }

        let Some(base) = arms.iter().find(|a| a.spec.name == BASELINE) else {
            continue;
        };
        for arm in arms.iter().filter(|a| a.spec.name != BASELINE) {
            let gains: Vec<f64> = base
                .records
                .iter()
                .zip(&arm.records)
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|((b, a), _)| b.total_delay - a.total_delay)
                .collect();
            let gain = MetricStats::from_samples(&gains);
            let lower = lower_bound_99(&gains);
            let dominates = base
                .records
                .iter()
                .zip(&arm.records)
                .all(|(b, a)| a.delivered >= b.delivered);
            let pro_vs_od = if arm.spec.name == "d2d_proactive" {
                arms.iter()
                    .find(|o| o.spec.name == "d2d_on_demand" && o.factor == arm.factor)
                    .map(|od| {
                        yes_no(
                            arm.records
                                .iter()
                                .zip(&od.records)
                                .all(|(p, o)| p.total_delay <= o.total_delay),
                        )
                    })
                    .unwrap_or(Cell::Na)
            } else {
                Cell::Na
            };
            report.headline.push(vec![
                Cell::text(&arm.spec.name),
                Cell::Num(arm.factor),
                Cell::Num(range),
                Cell::Int(gains.len() as u64),
                Cell::Num(gain.mean),
                Cell::opt(lower),
                yes_no(lower.is_some_and(|l| l > 0.0)),
                yes_no(dominates),
                pro_vs_od,
            ]);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            fig4_ranges: vec![200.0],
            fig4_road_length: 4_000.0,
            d2d_factors: vec![3.0, 5.0],
            replications: 300,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn tables_have_one_row_per_arm() {
        let r = run_fig4(&small(), &Executor::new(2).unwrap()).unwrap();
        assert_eq!(r.unconditional.rows.len(), 5);
        assert_eq!(r.dead_end.rows.len(), 5);
        assert_eq!(r.headline.rows.len(), 4);
        for i in 0..4 {
            assert_eq!(r.headline.get(i, "delivery_dominates"), Some(&Cell::text("yes")));
        }
        let pro = r
            .headline
            .rows
            .iter()
            .position(|row| row[0] == Cell::text("d2d_proactive"))
            .unwrap();
        assert_eq!(r.headline.get(pro, "proactive_le_on_demand"), Some(&Cell::text("yes")));
    }

    #[test]
    fn too_few_dead_ends_is_an_error() {
        let cfg = ExperimentConfig {
            replications: 20,
            ..small()
        };
        assert!(matches!(
            run_fig4(&cfg, &Executor::new(1).unwrap()),
            Err(Error::InsufficientDeadEnds { .. })
        ));
    }

    #[test]
    fn lower_bound() {
        assert_eq!(lower_bound_99(&[1.0]), None);
        let lb = lower_bound_99(&[1.0, 2.0, 3.0]).unwrap();
        // t_{0.99, 2} = 6.964557
        assert!((lb - (2.0 - 6.964_557 / 3f64.sqrt())).abs() < 1e-5);
    }
}
