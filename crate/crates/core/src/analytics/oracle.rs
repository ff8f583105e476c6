//! Component-size distribution by iterating the discretised hop kernel.
//!
//! In units of the range (`u = x / R`) the first hop has density
//! `lambda' exp(-lambda' (1 - u))` on `[0, 1]`. The joint density of the
//! k-th hop length, with the component still alive, obeys
//!
//! ```text
//! f_{k+1}(u) = lambda' exp(-lambda' (1 - u)) * integral_{1-u}^{1} f_k(v) dv
//! P(N_b = k + 1) = integral_0^1 f_k(u) exp(-lambda' u) du
//! ```
//!
//! with `P(N_b = 1) = exp(-lambda')`. The inner integrals use the trapezoid
//! rule on a uniform grid; because `1 - u_j` is itself a grid node, each kernel
//! application reduces to a cumulative sum, `O(n)` per step. The grid is
//! then doubled and the two results combined by Richardson extrapolation.

use serde::{Deserialize, Serialize};

use super::ConnectivityParams;
use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 2000;
pub const DEFAULT_K_MAX: usize = 64;
const REFINEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PmfMethod {
    Oracle,
    ClosedForm,
    Baseline,
    MonteCarlo,
}

/// `P(N_b = k)` for `k = 1..=k_max`; `pmf[0]` is `P(N_b = 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDistribution {
    pub pmf: Vec<f64>,
    /// `1 - sum(pmf)`: mass of components larger than `k_max`.
    pub tail_mass: f64,
    pub method: PmfMethod,
}

impl ComponentDistribution {
    pub fn new(pmf: Vec<f64>, method: PmfMethod) -> Self {
        let tail_mass = 1.0 - pmf.iter().sum::<f64>();
        Self { pmf, tail_mass, method }
    }

    pub fn k_max(&self) -> usize {
        self.pmf.len()
    }

    /// `P(N_b = k)`, zero outside `1..=k_max`.
    pub fn prob(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.pmf.get(k - 1).copied().unwrap_or(0.0)
        }
    }

    /// Mean of the truncated series `sum k P(N_b = k)`.
    pub fn truncated_mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p).sum()
    }
}

/// Raw trapezoid iteration on an `n`-interval grid.
fn iterate_kernel(k_max: usize, lambda_prime: f64, n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let u = |j: usize| j as f64 * h;
    let entry: Vec<f64> = (0..=n)
        .map(|j| lambda_prime * (-lambda_prime * (1.0 - u(j))).exp())
        .collect();
    let stop: Vec<f64> = (0..=n).map(|j| (-lambda_prime * u(j)).exp()).collect();

    let mut pmf = Vec::with_capacity(k_max);
    pmf.push((-lambda_prime).exp());
    let mut f = entry.clone();
    let mut cum = vec![0.0; n + 1];
    for _ in 1..k_max {
        let mut acc = 0.0;
        for j in 0..=n {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            acc += w * f[j] * stop[j];
        }
        pmf.push(acc * h);

        for j in 1..=n {
            cum[j] = cum[j - 1] + 0.5 * h * (f[j] + f[j - 1]);
        }
        let total = cum[n];
        for j in 0..=n {
            f[j] = entry[j] * (total - cum[n - j]);
        }
    }
    pmf
}

/// `P(N_b = k)` for `k <= k_max` by kernel iteration on grids of `grid_size`
/// and `2 * grid_size` intervals. Fails with [`Error::NonConvergence`] when
/// the refinement moves any probability by more than 1e-6.
pub fn component_pmf_oracle(
    k_max: usize,
    params: &ConnectivityParams,
    grid_size: usize,
) -> Result<ComponentDistribution> {
    if k_max == 0 {
        return Err(Error::invalid("k_max", "must be >= 1"));
    }
    if grid_size < 100 {
        return Err(Error::invalid("grid_size", "must be >= 100"));
    }
    let lp = params.lambda_prime();
    let coarse = iterate_kernel(k_max, lp, grid_size);
    let fine = iterate_kernel(k_max, lp, 2 * grid_size);
    let mut pmf = Vec::with_capacity(k_max);
    for (k, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        let change = (f - c).abs();
        if change > REFINEMENT_TOL {
            return Err(Error::NonConvergence {
                what: "kernel oracle",
                detail: format!(
                    "P(N_b={}) moved by {change:e} when the grid doubled from {grid_size}",
                    k + 1
                ),
            });
        }
        pmf.push((4.0 * f - c) / 3.0);
    }
    Ok(ComponentDistribution::new(pmf, PmfMethod::Oracle))
}

/// Oracle distribution extended until the tail mass drops below `tail_tol`
/// (or `k_limit` terms).
pub fn oracle_until_tail(
    params: &ConnectivityParams,
    grid_size: usize,
    tail_tol: f64,
    k_limit: usize,
) -> Result<ComponentDistribution> {
    let mut k = DEFAULT_K_MAX;
    loop {
        let d = component_pmf_oracle(k, params, grid_size)?;
        if d.tail_mass < tail_tol {
            return Ok(d);
        }
        if k >= k_limit {
            return Err(Error::NonConvergence {
                what: "kernel oracle tail",
                detail: format!("tail mass {:e} after {k} terms", d.tail_mass),
            });
        }
        k = (2 * k).min(k_limit);
    }
}

/// Coefficients `M_{1,k} = P(N_b = k + 2) / rho` for `k = 0..=k_max`
/// (`M_{1,0} = 1`).
pub fn m1_series(k_max: usize, params: &ConnectivityParams, grid_size: usize) -> Result<Vec<f64>> {
    let d = component_pmf_oracle(k_max + 2, params, grid_size)?;
    let rho = params.rho();
    Ok(d.pmf[1..].iter().map(|p| p / rho).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(lp: f64) -> ConnectivityParams {
        ConnectivityParams::from_lambda_prime(lp, 200.0).unwrap()
    }

    #[test]
    fn first_two_terms_are_rho_prime_and_rho() {
        for lp in [1.0, 2.0, 3.0] {
            let p = at(lp);
            let d = component_pmf_oracle(4, &p, DEFAULT_GRID).unwrap();
            assert_eq!(d.pmf[0], p.rho_prime());
            assert!((d.pmf[1] - p.rho()).abs() < 1e-9, "{} vs {}", d.pmf[1], p.rho());
        }
        let d = component_pmf_oracle(2, &at(2.0), DEFAULT_GRID).unwrap();
        assert!((d.pmf[0] - 0.135_335).abs() < 1e-6);
        assert!((d.pmf[1] - 0.270_671).abs() < 1e-6);
    }

    #[test]
    fn third_term_matches_direct_integral() {
        // P(N_b=3) = rho^2 * int_0^1 u e^{lambda' u} du = rho^2 ((lambda'-1) e^{lambda'} + 1) / lambda'^2
        let p = at(2.0);
        let lp = 2.0f64;
        let exact = p.rho().powi(2) * ((lp - 1.0) * lp.exp() + 1.0) / (lp * lp);
        let d = component_pmf_oracle(3, &p, DEFAULT_GRID).unwrap();
        assert!((d.pmf[2] - exact).abs() < 1e-10);
    }

    #[test]
    fn refinement_self_consistent() {
        let p = at(2.0);
        let a = component_pmf_oracle(8, &p, 2000).unwrap();
        let b = component_pmf_oracle(8, &p, 4000).unwrap();
        for (x, y) in a.pmf.iter().zip(&b.pmf) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn normalisation_and_tail() {
        for lp in [1.0, 2.0, 4.0] {
            let d = component_pmf_oracle(64, &at(lp), DEFAULT_GRID).unwrap();
            let s: f64 = d.pmf.iter().sum();
            assert!((s + d.tail_mass - 1.0).abs() < 1e-12);
            assert!(d.tail_mass > -1e-9);
            assert!(d.pmf.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
    }

    #[test]
    fn m1_coefficients() {
        let m = m1_series(10, &at(2.0), DEFAULT_GRID).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-9);
        assert!(m.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn argument_checks() {
        assert!(component_pmf_oracle(0, &at(2.0), 2000).is_err());
        assert!(component_pmf_oracle(5, &at(2.0), 99).is_err());
    }

    #[test]
    fn coarse_grid_fails_refinement() {
        let err = component_pmf_oracle(10, &at(2.0), 100).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
