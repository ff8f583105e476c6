//! Every configuration key with its unit, accessor and documentation. The
//! parser, the `--help` text and the defaults all come from this table.

use std::path::PathBuf;

use crate::experiments::ExperimentConfig;

type Getter = fn(&ExperimentConfig) -> String;
type Setter = fn(&mut ExperimentConfig, &str) -> Result<(), String>;

pub struct KeySpec {
    pub section: &'static str,
    pub key: &'static str,
    /// Path of the field in the serialized config.
    pub field: &'static str,
    pub unit: &'static str,
    pub doc: &'static str,
    pub get: Getter,
    pub set: Setter,
}

pub const SECTIONS: [&str; 4] = ["traffic", "link", "delay", "experiment"];

fn num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse::<T>()
        .map_err(|_| format!("expected a {}, found `{s}`", std::any::type_name::<T>()))
}

fn nums(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|p| num::<f64>(p.trim())).collect()
}

fn names(s: &str) -> Result<Vec<String>, String> {
    let v: Vec<String> = s
        .split(',')
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect();
    if v.is_empty() {
        Err("expected a comma-separated list of names".into())
    } else {
        Ok(v)
    }
}

fn boolean(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected `true` or `false`, found `{s}`")),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

macro_rules! key {
    ($section:literal, $key:literal, $field:literal, $unit:literal, $doc:literal,
     |$c:ident| $get:expr, |$m:ident, $s:ident| $set:expr) => {
        KeySpec {
            section: $section,
            key: $key,
            field: $field,
            unit: $unit,
            doc: $doc,
            get: |$c| $get,
            set: |$m, $s| {
                $set;
                Ok(())
            },
        }
    };
}

pub static KEYS: &[KeySpec] = &[
    key!(
        "traffic",
        "lambda_a",
        "traffic.lambda_a",
        "veh/s",
        "arrival rate at the road entrance",
        |c| c.traffic.lambda_a.to_string(),
        |c, s| c.traffic.lambda_a = num(s)?
    ),
    key!(
        "traffic",
        "mu",
        "traffic.mu",
        "m/s",
        "mean of the untruncated speed law",
        |c| c.traffic.mu.to_string(),
        |c, s| c.traffic.mu = num(s)?
    ),
    key!(
        "traffic",
        "sigma",
        "traffic.sigma",
        "m/s",
        "standard deviation of the untruncated speed law",
        |c| c.traffic.sigma.to_string(),
        |c, s| c.traffic.sigma = num(s)?
    ),
    key!(
        "traffic",
        "v_min",
        "traffic.v_min",
        "m/s",
        "lower speed bound",
        |c| c.traffic.v_min.to_string(),
        |c, s| c.traffic.v_min = num(s)?
    ),
    key!(
        "traffic",
        "v_max",
        "traffic.v_max",
        "m/s",
        "upper speed bound",
        |c| c.traffic.v_max.to_string(),
        |c, s| c.traffic.v_max = num(s)?
    ),
    key!(
        "link",
        "ranges",
        "ranges",
        "m",
        "V2V ranges for analytic, simulate and fig3",
        |c| join(&c.ranges),
        |c, s| c.ranges = nums(s)?
    ),
    key!(
        "link",
        "margin",
        "margin",
        "-",
        "closed-form validity margin above ln 4",
        |c| c.margin.to_string(),
        |c, s| c.margin = num(s)?
    ),
    key!(
        "link",
        "d2d_factors",
        "d2d_factors",
        "x range",
        "D2D range factors, legal [3, 5]",
        |c| join(&c.d2d_factors),
        |c, s| c.d2d_factors = nums(s)?
    ),
    key!(
        "link",
        "allow_factor_override",
        "allow_factor_override",
        "bool",
        "accept D2D factors outside [3, 5]",
        |c| c.allow_factor_override.to_string(),
        |c, s| c.allow_factor_override = boolean(s)?
    ),
    key!(
        "link",
        "fig4_ranges",
        "fig4_ranges",
        "m",
        "V2V ranges for the strategy comparison",
        |c| join(&c.fig4_ranges),
        |c, s| c.fig4_ranges = nums(s)?
    ),
    key!(
        "delay",
        "t_proc",
        "delay.t_proc",
        "s",
        "processing delay per hop",
        |c| c.delay.t_proc.to_string(),
        |c, s| c.delay.t_proc = num(s)?
    ),
    key!(
        "delay",
        "t_access",
        "delay.t_access",
        "s/neighbour",
        "channel access delay per sender neighbour",
        |c| c.delay.t_access.to_string(),
        |c, s| c.delay.t_access = num(s)?
    ),
    key!(
        "delay",
        "t_d2d_discovery_on_demand",
        "delay.t_d2d_discovery_on_demand",
        "s",
        "D2D discovery, on demand",
        |c| c.delay.t_d2d_discovery_on_demand.to_string(),
        |c, s| c.delay.t_d2d_discovery_on_demand = num(s)?
    ),
    key!(
        "delay",
        "t_d2d_discovery_proactive",
        "delay.t_d2d_discovery_proactive",
        "s",
        "D2D discovery, proactive",
        |c| c.delay.t_d2d_discovery_proactive.to_string(),
        |c, s| c.delay.t_d2d_discovery_proactive = num(s)?
    ),
    key!(
        "delay",
        "t_d2d_setup",
        "delay.t_d2d_setup",
        "s",
        "D2D link setup",
        |c| c.delay.t_d2d_setup.to_string(),
        |c, s| c.delay.t_d2d_setup = num(s)?
    ),
    key!(
        "delay",
        "t_d2d_tx",
        "delay.t_d2d_tx",
        "s",
        "D2D transmission",
        |c| c.delay.t_d2d_tx.to_string(),
        |c, s| c.delay.t_d2d_tx = num(s)?
    ),
    key!(
        "delay",
        "t_cellular_fallback",
        "delay.t_cellular_fallback",
        "s",
        "cellular uplink when no D2D peer is in reach",
        |c| c.delay.t_cellular_fallback.to_string(),
        |c, s| c.delay.t_cellular_fallback = num(s)?
    ),
    key!(
        "delay",
        "carry_step",
        "delay.carry_step",
        "s",
        "mobility step while carrying",
        |c| c.delay.carry_step.to_string(),
        |c, s| c.delay.carry_step = num(s)?
    ),
    key!(
        "experiment",
        "road_lengths",
        "road_lengths",
        "m",
        "road lengths, source to RSU",
        |c| join(&c.road_lengths),
        |c, s| c.road_lengths = nums(s)?
    ),
    key!(
        "experiment",
        "fig4_road_length",
        "fig4_road_length",
        "m",
        "road length of the strategy comparison",
        |c| c.fig4_road_length.to_string(),
        |c, s| c.fig4_road_length = num(s)?
    ),
    key!(
        "experiment",
        "strategies",
        "strategies",
        "names",
        "recovery strategies to compare",
        |c| c.strategies.join(", "),
        |c, s| c.strategies = names(s)?
    ),
    key!(
        "experiment",
        "fig3_strategy",
        "fig3_strategy",
        "name",
        "strategy for the analytic comparison",
        |c| c.fig3_strategy.clone(),
        |c, s| c.fig3_strategy = s.to_string()
    ),
    key!(
        "experiment",
        "max_back_hops",
        "max_back_hops",
        "hops",
        "backward hops allowed per dead-end",
        |c| c.max_back_hops.to_string(),
        |c, s| c.max_back_hops = num(s)?
    ),
    key!(
        "experiment",
        "recovery_budget",
        "recovery_budget",
        "s",
        "carry time per dead-end before backtracking fails",
        |c| c.recovery_budget.to_string(),
        |c, s| c.recovery_budget = num(s)?
    ),
    key!(
        "experiment",
        "replications",
        "replications",
        "count",
        "Monte Carlo replications per cell",
        |c| c.replications.to_string(),
        |c, s| c.replications = num(s)?
    ),
    key!(
        "experiment",
        "master_seed",
        "master_seed",
        "u64",
        "master seed of every random stream",
        |c| c.master_seed.to_string(),
        |c, s| c.master_seed = num(s)?
    ),
    key!(
        "experiment",
        "k_max",
        "k_max",
        "terms",
        "P(N_b = k) terms in the analytic table",
        |c| c.k_max.to_string(),
        |c, s| c.k_max = num(s)?
    ),
    key!(
        "experiment",
        "grid_size",
        "grid_size",
        "intervals",
        "kernel oracle grid",
        |c| c.grid_size.to_string(),
        |c, s| c.grid_size = num(s)?
    ),
    key!(
        "experiment",
        "deadend_floor",
        "deadend_floor",
        "fraction",
        "minimum share of roads with a dead-end in fig4",
        |c| c.deadend_floor.to_string(),
        |c, s| c.deadend_floor = num(s)?
    ),
    key!(
        "experiment",
        "output_dir",
        "output_dir",
        "path",
        "output directory",
        |c| c.output_dir.display().to_string(),
        |c, s| c.output_dir = PathBuf::from(s)
    ),
];

pub fn lookup(section: &str, key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.section == section && k.key == key)
}

/// Nearest known key, qualified with its section when it lives elsewhere.
pub fn suggest(section: &str, key: &str) -> Option<String> {
    let (best, dist) = KEYS
        .iter()
        .map(|k| (k, strsim::levenshtein(key, k.key)))
        .min_by_key(|&(k, d)| (d, k.section != section))?;
    if dist > (key.len() / 3).max(2) {
        return None;
    }
    Some(if best.section == section {
        best.key.to_string()
    } else {
        format!("[{}] {}", best.section, best.key)
    })
}

/// Key reference for `--help`, defaults taken from `ExperimentConfig::default()`.
pub fn keys_help() -> String {
    let d = ExperimentConfig::default();
    let mut out = String::from("CONFIGURATION KEYS (file format: [section] then key = value, # comments)\n");
    for section in SECTIONS {
        out.push_str(&format!("\n  [{section}]\n"));
        for k in KEYS.iter().filter(|k| k.section == section) {
            out.push_str(&format!(
                "    {:<27} {:<14} default {}\n        {}\n",
                k.key,
                format!("({})", k.unit),
                (k.get)(&d),
                k.doc
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_setters() {
        let d = ExperimentConfig::default();
        let mut c = ExperimentConfig {
            ranges: vec![],
            ..ExperimentConfig::default()
        };
        c.traffic.sigma = 0.0;
        for k in KEYS {
            (k.set)(&mut c, &(k.get)(&d)).unwrap();
        }
        assert_eq!(c, d);
    }

    #[test]
    fn keys_are_unique() {
        for (i, a) in KEYS.iter().enumerate() {
            assert!(SECTIONS.contains(&a.section));
            assert!(KEYS[i + 1..]
                .iter()
                .all(|b| b.field != a.field && (b.section, b.key) != (a.section, a.key)));
        }
    }

    #[test]
    fn suggestions() {
        assert_eq!(suggest("traffic", "lamda_a").as_deref(), Some("lambda_a"));
        assert_eq!(suggest("traffic", "t_proc").as_deref(), Some("[delay] t_proc"));
        assert_eq!(suggest("traffic", "completely_unrelated"), None);
    }
}
