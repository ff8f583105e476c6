//! Expected retransmitters per component, mean component extent, hops over a
//! road of given length, and the analytic delay built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::oracle::oracle_until_tail;
use super::transform::m1_closed;
use super::ConnectivityParams;
use crate::error::{Error, Result};
use crate::routing::DelayModel;

/// Initial step of the one-sided difference stencil at `z = 1`.
pub const DERIVATIVE_STEP: f64 = 1e-3;
/// Smallest step tried when dense traffic puts a singularity of `M1` close to 1.
const MIN_DERIVATIVE_STEP: f64 = 1e-6;
const DERIVATIVE_TOL: f64 = 1e-3;
const CROSS_CHECK_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetransmitterEstimate {
    /// `E[N_b] = rho' + 2 rho + 2 rho M1(1) + rho M1'(1)`.
    pub value: f64,
    pub m1_at_one: f64,
    pub m1_slope_at_one: f64,
    /// Relative disagreement of the two Richardson-extrapolated slopes.
    pub slope_rel_diff: f64,
}

fn m1_real(z: f64, params: &ConnectivityParams) -> Result<f64> {
    Ok(m1_closed(Complex64::new(z, 0.0), params)?.re)
}

/// Second-order backward difference `(3 f(1) - 4 f(1-h) + f(1-2h)) / 2h`.
fn backward_slope(f1: f64, params: &ConnectivityParams, h: f64) -> Result<f64> {
    let a = m1_real(1.0 - h, params)?;
    let b = m1_real(1.0 - 2.0 * h, params)?;
    Ok((3.0 * f1 - 4.0 * a + b) / (2.0 * h))
}

/// `M1'(1)` from backward stencils at `h`, `h/2`, `h/4`, Richardson-combined
/// pairwise; returns the finer estimate and the relative gap between the two.
pub fn m1_slope_at_one(params: &ConnectivityParams, h: f64) -> Result<(f64, f64)> {
    let f1 = m1_real(1.0, params)?;
    let d1 = backward_slope(f1, params, h)?;
    let d2 = backward_slope(f1, params, 0.5 * h)?;
    let d3 = backward_slope(f1, params, 0.25 * h)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let rel = ((r2 - r1) / r2).abs();
    Ok((r2, rel))
}

/// Expected number of retransmitters in a connected component on an
/// unbounded road. This is also the expected hop count per component.
pub fn expected_retransmitters(params: &ConnectivityParams) -> Result<RetransmitterEstimate> {
    params.require_closed_form()?;
    let m1 = m1_real(1.0, params)?;
    let mut h = DERIVATIVE_STEP;
    let (slope, rel) = loop {
        let (slope, rel) = m1_slope_at_one(params, h)?;
        if rel <= DERIVATIVE_TOL {
            break (slope, rel);
        }
        h *= 0.1;
        if h < MIN_DERIVATIVE_STEP {
            return Err(Error::DerivativeInstability { rel_diff: rel });
        }
    };
    let (rho, rho_p) = (params.rho(), params.rho_prime());
    Ok(RetransmitterEstimate {
        value: rho_p + 2.0 * rho + 2.0 * rho * m1 + rho * slope,
        m1_at_one: m1,
        m1_slope_at_one: slope,
        slope_rel_diff: rel,
    })
}

/// `sum k P(N_b = k)` over the kernel oracle, truncated once the tail mass is
/// below `tail_tol`.
pub fn retransmitters_from_oracle(params: &ConnectivityParams, grid_size: usize, tail_tol: f64) -> Result<f64> {
    Ok(oracle_until_tail(params, grid_size, tail_tol, 1 << 20)?.truncated_mean())
}

/// Closed-form estimate checked against the oracle series (0.1 %).
pub fn expected_retransmitters_checked(params: &ConnectivityParams, grid_size: usize) -> Result<RetransmitterEstimate> {
    let est = expected_retransmitters(params)?;
    let series = retransmitters_from_oracle(params, grid_size, 1e-8)?;
    let rel = ((est.value - series) / series).abs();
    if rel > CROSS_CHECK_TOL {
        return Err(Error::CrossCheck {
            what: "expected retransmitters",
            a: est.value,
            b: series,
            rel,
        });
    }
    Ok(est)
}

/// Mean extent of a connected component, `(e^{lambda R} - 1) / lambda`:
/// first vehicle to last vehicle plus the final range `R`, i.e. the stretch
/// of road the component covers.
pub fn expected_component_size(params: &ConnectivityParams) -> Result<f64> {
    let lp = params.lambda_prime();
    if lp > 700.0 {
        return Err(Error::OutOfRange(format!("lambda' = {lp} overflows exp(lambda')")));
    }
    Ok(lp.exp_m1() / params.lambda)
}

/// `E[N_b] / E[size] * L`.
pub fn expected_hops_over_road(params: &ConnectivityParams, road_length: f64) -> Result<f64> {
    if !(road_length > 0.0) {
        return Err(Error::invalid("road_length", "must be > 0"));
    }
    let hops = expected_retransmitters(params)?.value;
    Ok(hops / expected_component_size(params)? * road_length)
}

/// Hops over the road times the per-hop cost `t_proc + t_access * 2 lambda R`
/// (2 lambda R is the mean neighbour count of a relay).
pub fn analytic_delay(params: &ConnectivityParams, road_length: f64, delay: &DelayModel) -> Result<f64> {
    let hops = expected_hops_over_road(params, road_length)?;
    Ok(hops * (delay.t_proc + delay.t_access * 2.0 * params.lambda_prime()))
}
