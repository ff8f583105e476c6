//! Analytical model of the connected set of retransmitting vehicles.
//!
//! Retransmitters are chosen by shortest-path sampling: each relay hands the
//! message to the farthest vehicle within range `R`. Successive hop lengths
//! form a Markov chain ([`kernel`]). The number `N_b` of retransmitters in a
//! connected component is computed three ways:
//!
//! * [`oracle`] iterates the discretised kernel (valid for every `lambda'`);
//! * [`transform`] evaluates the z-transform in closed form and extracts the
//!   coefficients on a circle (requires `lambda' >= ln 4 + margin`);
//! * [`baseline`] is the geometric law obtained if hop lengths were
//!   independent. The Markov model replaces it; it is kept for comparison.
//!
//! [`moments`] turns the transform into expected retransmitters, component
//! span, hops over a road and delay.

pub mod baseline;
pub mod kernel;
pub mod moments;
pub mod oracle;
pub mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use baseline::baseline_pmf_independent;
pub use kernel::{hop_distance_cdf, HopKernel};
pub use moments::{
    analytic_delay, expected_component_size, expected_hops_over_road, expected_retransmitters,
    retransmitters_from_oracle, RetransmitterEstimate,
};
pub use oracle::{component_pmf_oracle, m1_series, ComponentDistribution, PmfMethod};
pub use transform::{m1_closed, m1_printed, pmf_from_transform, q_transform, TransformValue};

pub const DEFAULT_MARGIN: f64 = 0.05;

/// Spatial rate and V2V range, plus the safety margin applied to the
/// closed-form validity threshold `lambda' >= ln 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityParams {
    /// Vehicles per metre.
    pub lambda: f64,
    /// V2V transmission range (m).
    pub range: f64,
    pub margin: f64,
}

impl ConnectivityParams {
    pub fn new(lambda: f64, range: f64) -> Result<Self> {
        Self::with_margin(lambda, range, DEFAULT_MARGIN)
    }

    pub fn with_margin(lambda: f64, range: f64, margin: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid("lambda", "must be finite and > 0"));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::invalid("range", "must be finite and > 0"));
        }
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(Error::invalid("margin", "must be finite and >= 0"));
        }
        Ok(Self { lambda, range, margin })
    }

    /// Parameters with a given `lambda' = lambda * R` at range `R`.
    pub fn from_lambda_prime(lambda_prime: f64, range: f64) -> Result<Self> {
        Self::new(lambda_prime / range, range)
    }

    pub fn lambda_prime(&self) -> f64 {
        self.lambda * self.range
    }

    pub fn rho_prime(&self) -> f64 {
        (-self.lambda_prime()).exp()
    }

    pub fn rho(&self) -> f64 {
        self.lambda_prime() * self.rho_prime()
    }

    pub fn closed_form_threshold(&self) -> f64 {
        4f64.ln() + self.margin
    }

    pub fn closed_form_valid(&self) -> bool {
        self.lambda_prime() >= self.closed_form_threshold()
    }

    pub(crate) fn require_closed_form(&self) -> Result<()> {
        if self.closed_form_valid() {
            Ok(())
        } else {
            Err(Error::Validity {
                lambda_prime: self.lambda_prime(),
                threshold: self.closed_form_threshold(),
            })
        }
    }

    /// Branch point `1 / (2 sqrt(rho'))` of `sqrt(1 - 4 rho' z^2)`.
    pub fn branch_point(&self) -> f64 {
        0.5 / self.rho_prime().sqrt()
    }
}
