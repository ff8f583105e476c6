//! Fast cross-checks of the analytic pipeline at the configured densities.

use std::fmt;

use num_complex::Complex64;

use crate::analytics::oracle::oracle_until_tail;
use crate::analytics::{
    component_pmf_oracle, expected_retransmitters, pmf_from_transform, q_transform, ConnectivityParams, HopKernel,
};
use crate::error::Result;
use crate::experiments::ExperimentConfig;
use crate::quad::{integrate, QuadOptions};
use crate::traffic::spatial_rate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub lambda_prime: f64,
    pub status: Status,
    /// Measured deviation, when one was computed.
    pub deviation: Option<f64>,
    pub tolerance: f64,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        let dev = self.deviation.map_or("-".to_string(), |d| format!("{d:.3e}"));
        write!(
            f,
            "{tag}  lambda'={:.4}  {:<34} deviation {dev:>10}  tol {:.0e}  {}",
            self.lambda_prime, self.name, self.tolerance, self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

struct Ctx<'a> {
    report: &'a mut Report,
    lambda_prime: f64,
}

impl Ctx<'_> {
    fn measure(&mut self, name: &str, tolerance: f64, r: Result<f64>) {
        let (status, deviation, detail) = match r {
            Ok(d) if d <= tolerance => (Status::Pass, Some(d), String::new()),
            Ok(d) => (Status::Fail, Some(d), String::new()),
            Err(e) => (Status::Fail, None, e.to_string()),
        };
        self.push(name, tolerance, status, deviation, detail);
    }

    fn skip(&mut self, name: &str, tolerance: f64, why: String) {
        self.push(name, tolerance, Status::Skip, None, why);
    }

    fn push(&mut self, name: &str, tolerance: f64, status: Status, deviation: Option<f64>, detail: String) {
        self.report.checks.push(Check {
            name: name.into(),
            lambda_prime: self.lambda_prime,
            status,
            deviation,
            tolerance,
            detail,
        });
    }
}

fn termination_identity(p: &ConnectivityParams) -> Result<f64> {
    let k = HopKernel::new(*p);
    let r = p.range;
    let mut worst: f64 = 0.0;
    for x_prev in [0.1 * r, 0.5 * r, r] {
        let mass = integrate(
            |x| k.density(x, x_prev).unwrap_or(0.0),
            r - x_prev,
            r,
            &[],
            QuadOptions::default(),
        )?;
        worst = worst.max((mass.value + k.termination(x_prev)? - 1.0).abs());
    }
    Ok(worst)
}

pub fn validate_params(report: &mut Report, p: &ConnectivityParams, grid: usize) {
    let mut ctx = Ctx {
        report,
        lambda_prime: p.lambda_prime(),
    };
    ctx.measure("kernel termination identity", 1e-9, termination_identity(p));
    ctx.measure(
        "oracle normalisation",
        1e-8,
        oracle_until_tail(p, grid, 1e-8, 1 << 16).map(|d| d.tail_mass.abs()),
    );
    ctx.measure(
        "oracle P(N_b=1) = rho'",
        1e-12,
        component_pmf_oracle(1, p, grid).map(|d| (d.pmf[0] - p.rho_prime()).abs()),
    );

    let closed = [
        ("Q(1) = 1", 1e-6),
        ("oracle vs transform, k <= 6", 1e-4),
        ("extracted P(1) = rho', P(2) = rho", 1e-6),
        ("E[N_b] closed form vs oracle mean", 1e-3),
    ];
    if !p.closed_form_valid() {
        for (name, tol) in closed {
            let why = format!("below closed-form threshold {:.4}", p.closed_form_threshold());
            ctx.skip(name, tol, why);
        }
        return;
    }
    ctx.measure(
        closed[0].0,
        closed[0].1,
        q_transform(Complex64::new(1.0, 0.0), p).map(|q| (q - 1.0).norm()),
    );
    ctx.measure(
        closed[1].0,
        closed[1].1,
        (|| {
            let o = component_pmf_oracle(6, p, grid)?;
            let t = pmf_from_transform(6, p)?;
            Ok(o.pmf.iter().zip(&t.pmf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        })(),
    );
    ctx.measure(
        closed[2].0,
        closed[2].1,
        pmf_from_transform(2, p).map(|t| (t.pmf[0] - p.rho_prime()).abs().max((t.pmf[1] - p.rho()).abs())),
    );
    ctx.measure(
        closed[3].0,
        closed[3].1,
        (|| {
            let est = expected_retransmitters(p)?.value;
            let series = oracle_until_tail(p, grid, 1e-8, 1 << 16)?.truncated_mean();
            Ok(((est - series) / series).abs())
        })(),
    );
}

/// Runs every check for each configured range at the traffic's spatial rate.
pub fn validate_config(cfg: &ExperimentConfig) -> Result<Report> {
    let lambda = spatial_rate(&cfg.traffic)?;
    let mut report = Report::default();
    for &range in &cfg.ranges {
        let p = ConnectivityParams::with_margin(lambda, range, cfg.margin)?;
        validate_params(&mut report, &p, cfg.grid_size);
    }
    Ok(report)
}
