//! Markov kernel of successive hop lengths under farthest-neighbour
//! forwarding on a Poisson road.
//!
//! Given the previous hop had length `x_prev`, the stretch
//! `(X_n, X_n + R - x_prev]` is known to be empty, so the next hop length has
//! the defective CDF `exp(-lambda (R - x)) - exp(-lambda x_prev)` on
//! `[R - x_prev, R]`. The missing mass `exp(-lambda x_prev)` is the
//! probability that the component ends at `X_n`. The first hop uses
//! `x_prev = R` (nothing is known ahead of the first vehicle).

use super::ConnectivityParams;
use crate::error::{Error, Result};

pub fn hop_distance_cdf(x: f64, x_prev: f64, params: &ConnectivityParams) -> Result<f64> {
    HopKernel::new(*params).cdf(x, x_prev)
}

#[derive(Debug, Clone, Copy)]
pub struct HopKernel {
    pub params: ConnectivityParams,
}

impl HopKernel {
    pub fn new(params: ConnectivityParams) -> Self {
        Self { params }
    }

    fn check(&self, x_prev: f64) -> Result<()> {
        let r = self.params.range;
        if !(0.0..=r).contains(&x_prev) {
            return Err(Error::Domain(format!("previous hop length {x_prev} outside [0, {r}]")));
        }
        Ok(())
    }

    pub fn cdf(&self, x: f64, x_prev: f64) -> Result<f64> {
        self.check(x_prev)?;
        let (lambda, r) = (self.params.lambda, self.params.range);
        if x < r - x_prev {
            return Ok(0.0);
        }
        let x = x.min(r);
        let total = 1.0 - (-lambda * x_prev).exp();
        let v = (-lambda * (r - x)).exp() - (-lambda * x_prev).exp();
        Ok(v.clamp(0.0, total))
    }

    /// Density of the next hop length on its support.
    pub fn density(&self, x: f64, x_prev: f64) -> Result<f64> {
        self.check(x_prev)?;
        let (lambda, r) = (self.params.lambda, self.params.range);
        if x < r - x_prev || x > r {
            return Ok(0.0);
        }
        Ok(lambda * (-lambda * (r - x)).exp())
    }

    /// Probability that no vehicle follows within range: the component ends.
    pub fn termination(&self, x_prev: f64) -> Result<f64> {
        self.check(x_prev)?;
        Ok((-self.params.lambda * x_prev).exp())
    }

    /// Inverse-CDF draw of the next hop length; `None` when the component
    /// terminates. `u` is uniform on `[0, 1)`.
    pub fn sample_next(&self, x_prev: f64, u: f64) -> Option<f64> {
        let (lambda, r) = (self.params.lambda, self.params.range);
        let stop = (-lambda * x_prev).exp();
        // CDF at R is 1 - stop; mass above that is termination
        if u >= 1.0 - stop {
            return None;
        }
        let x = r + (u + stop).ln() / lambda;
        Some(x.clamp(r - x_prev, r))
    }
}
