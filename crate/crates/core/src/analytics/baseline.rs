//! Geometric component-size law obtained if successive gaps were independent
//! (the deterministic-service special case of the batch-arrival infinite
//! server queue). Shortest-path sampling makes hop lengths Markov-dependent,
//! so this law is only a comparison baseline; it coincides with the Markov
//! model at `k = 1`.

use super::oracle::{ComponentDistribution, PmfMethod};
use super::ConnectivityParams;

/// `F(R)^{k-1} (1 - F(R))` with `F(R) = 1 - exp(-lambda R)`; zero for `k = 0`.
pub fn baseline_pmf_independent(k: usize, params: &ConnectivityParams) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let stop = params.rho_prime();
    let go = -(-params.lambda_prime()).exp_m1();
    go.powi(k as i32 - 1) * stop
}

pub fn baseline_distribution(k_max: usize, params: &ConnectivityParams) -> ComponentDistribution {
    let pmf = (1..=k_max).map(|k| baseline_pmf_independent(k, params)).collect();
    ComponentDistribution::new(pmf, PmfMethod::Baseline)
}
