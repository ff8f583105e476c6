//! Closed-form connectivity quantities per `(R, L)` cell.

use super::config::ExperimentConfig;
use super::table::{Cell, Table};
use crate::analytics::{
    expected_component_size, expected_hops_over_road, expected_retransmitters, pmf_from_transform, ConnectivityParams,
};
use crate::error::Result;

pub fn columns(k_max: usize) -> Vec<String> {
    let mut c: Vec<String> = ["R_m", "L_m", "lambda_per_m", "lambda_prime", "rho", "rho_prime"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    c.extend((1..=k_max).map(|k| format!("p_{k}")));
    c.extend(["e_retransmitters", "e_size_m", "e_hops_L", "status"].map(String::from));
    c
}

/// Analytic table at spatial rate `lambda` over the configured ranges and
/// road lengths.
pub fn analytic_table(cfg: &ExperimentConfig, lambda: f64) -> Table {
    let cols = columns(cfg.k_max);
    let mut table = Table {
        name: "analytic".into(),
        columns: cols,
        rows: Vec::new(),
    };
    for &range in &cfg.ranges {
        for &road_length in &cfg.road_lengths {
            table.push(analytic_row(cfg.k_max, cfg.margin, lambda, range, road_length));
        }
    }
    table
}

struct Values {
    pmf: Vec<f64>,
    retransmitters: f64,
    size: f64,
    hops: f64,
}

fn values(k_max: usize, p: &ConnectivityParams, road_length: f64) -> Result<Values> {
    Ok(Values {
        pmf: pmf_from_transform(k_max, p)?.pmf,
        retransmitters: expected_retransmitters(p)?.value,
        size: expected_component_size(p)?,
        hops: expected_hops_over_road(p, road_length)?,
    })
}

pub fn analytic_row(k_max: usize, margin: f64, lambda: f64, range: f64, road_length: f64) -> Vec<Cell> {
    let mut row = vec![Cell::Num(range), Cell::Num(road_length), Cell::Num(lambda)];
    let params = ConnectivityParams::with_margin(lambda, range, margin);
    let Ok(p) = params else {
        let e = params.unwrap_err();
        row.extend(std::iter::repeat_n(Cell::Na, k_max + 6));
        row.push(Cell::Text(format!("error: {e}")));
        return row;
    };
    row.extend([
        Cell::Num(p.lambda_prime()),
        Cell::Num(p.rho()),
        Cell::Num(p.rho_prime()),
    ]);
    match values(k_max, &p, road_length) {
        Ok(v) => {
            row.extend(v.pmf.into_iter().map(Cell::Num));
            row.extend([
                Cell::Num(v.retransmitters),
                Cell::Num(v.size),
                Cell::Num(v.hops),
                Cell::text("ok"),
            ]);
        }
        Err(e) => {
            row.extend(std::iter::repeat_n(Cell::Na, k_max + 3));
            row.push(Cell::Text(format!("error: {e}")));
        }
    }
    row
}
