//! z-transforms of the component size.
//!
//! `Q(z) = sum_k P(N_b = k) z^k = rho' z + rho z^2 (1 + M1(z))`.
//!
//! [`m1_closed`] evaluates `M1` exactly. Writing `H(u) = 1 + integral` of the
//! generating function of hop densities, the kernel recursion becomes
//! `H'(u) = z rho e^{lambda'(1-u)} H(1-u)`, hence
//! `H'' + lambda' H' + lambda'^2 rho' z^2 H = 0` with `H(0) = 1`,
//! `H'(0) = z lambda' H(1)`, and `1 + M1(z) = integral_0^1 H(u) du`. With
//! `s = sqrt(1 - 4 rho' z^2)` and roots `r_{1,2} = lambda' (-1 +/- s) / 2`:
//!
//! ```text
//! a_i = r_i - z lambda' e^{r_i},   phi(x) = (e^x - 1) / x
//! 1 + M1(z) = (a_2 phi(r_1) - a_1 phi(r_2)) / (a_2 - a_1)
//! ```
//!
//! [`m1_printed`] evaluates the `h1 + h2 + h3` representation in its
//! published form. It agrees with [`m1_closed`] in value and slope at `z = 1`
//! (and therefore yields the same expected retransmitter count) but not as a
//! power series, so coefficient extraction always uses [`m1_closed`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::oracle::{ComponentDistribution, PmfMethod};
use super::ConnectivityParams;
use crate::error::{Error, Result};

const SINGULAR_TOL: f64 = 1e-12;
const ALIAS_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformValue {
    pub z: Complex64,
    pub value: Complex64,
}

/// `exp(x) - 1` without cancellation for small `|x|`.
fn expm1(x: Complex64) -> Complex64 {
    let (a, b) = (x.re, x.im);
    let half_sin = (0.5 * b).sin();
    Complex64::new(a.exp_m1() * b.cos() - 2.0 * half_sin * half_sin, a.exp() * b.sin())
}

fn phi(x: Complex64) -> Complex64 {
    if x.norm() < 1e-8 {
        Complex64::new(1.0, 0.0) + x * 0.5
    } else {
        expm1(x) / x
    }
}

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
    }
    Ok(())
}

/// Exact `M1(z)` for `|z| <= 1`; needs `lambda' >= ln 4 + margin`.
pub fn m1_closed(z: Complex64, params: &ConnectivityParams) -> Result<Complex64> {
    params.require_closed_form()?;
    check_disk(z)?;
    m1_exact_unchecked(z, params)
}

pub(crate) fn m1_exact_unchecked(z: Complex64, params: &ConnectivityParams) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    let lp = params.lambda_prime();
    let s = (Complex64::new(1.0, 0.0) - 4.0 * params.rho_prime() * z * z).sqrt();
    let r1 = 0.5 * lp * (s - 1.0);
    let r2 = -0.5 * lp * (s + 1.0);
    let a1 = r1 - z * lp * r1.exp();
    let a2 = r2 - z * lp * r2.exp();
    let den = a2 - a1;
    if den.norm() < SINGULAR_TOL {
        return Err(Error::Singularity {
            re: z.re,
            im: z.im,
            magnitude: den.norm(),
        });
    }
    // (a2 phi(r1) - a1 phi(r2)) / (a2 - a1) - 1, arranged to keep the small-z
    // cancellation inside phi(r1) - 1
    let phi1 = phi(r1);
    let phi2 = phi(r2);
    Ok((a2 * (phi1 - 1.0) - a1 * (phi2 - 1.0)) / den)
}

/// `M1(z)` from the `h1 + h2 + h3` expression as published.
pub fn m1_printed(z: Complex64, params: &ConnectivityParams) -> Result<Complex64> {
    params.require_closed_form()?;
    check_disk(z)?;
    let lp = params.lambda_prime();
    let (rho, rho_p) = (params.rho(), params.rho_prime());
    let one = Complex64::new(1.0, 0.0);
    let s = (one - 4.0 * rho_p * z * z).sqrt();
    let e = (0.5 * lp * (s - 1.0)).exp();
    let (z2, z3) = (z * z, z * z * z);

    let h1 = s * ((1.0 - rho_p - rho) * z3 - (1.0 - rho_p) * z2 - z * (1.0 - rho) + (2.0 - rho_p - rho));
    let h2 = e * (2.0 * rho * z3 + 2.0 * rho_p * z2 - z - 1.0 + (z - 1.0) * s);
    let h3 = z3 * (rho_p + rho - 1.0) + z2 * (1.0 - 3.0 * rho_p - 2.0 * rho) + z * (1.0 - rho) + rho_p + rho;
    let bracket = one + s - 2.0 * z * e;
    let den = rho * z2 * bracket;
    if den.norm() < SINGULAR_TOL {
        if z.norm() < 1e-6 {
            // the numerator vanishes to second order as well; use the limit
            return Ok(Complex64::new((lp + 1.0 - lp.exp()) * rho_p / lp, 0.0));
        }
        return Err(Error::Singularity {
            re: z.re,
            im: z.im,
            magnitude: den.norm(),
        });
    }
    Ok((h1 + h2 + h3) / den)
}

/// Probability generating function of `N_b`.
pub fn q_transform(z: Complex64, params: &ConnectivityParams) -> Result<Complex64> {
    let m1 = m1_closed(z, params)?;
    Ok(params.rho_prime() * z + params.rho() * z * z * (1.0 + m1))
}

pub fn q_value(z: Complex64, params: &ConnectivityParams) -> Result<TransformValue> {
    Ok(TransformValue {
        z,
        value: q_transform(z, params)?,
    })
}

/// Radius of the extraction circle: at most 0.95 and 0.05 inside the branch
/// point of `sqrt(1 - 4 rho' z^2)`.
pub fn extraction_radius(params: &ConnectivityParams) -> f64 {
    0.95f64.min(params.branch_point() - 0.05)
}

/// `P(N_b = k)` for `k <= k_max` by inverse DFT of `Q` on a circle.
pub fn pmf_from_transform(k_max: usize, params: &ConnectivityParams) -> Result<ComponentDistribution> {
    params.require_closed_form()?;
    if k_max == 0 {
        return Err(Error::invalid("k_max", "must be >= 1"));
    }
    let r = extraction_radius(params);
    let m = (4 * k_max).max(1024).next_power_of_two();
    // coefficient k picks up sum_{j>=1} p_{k+jm} r^{jm} <= r^m / (1 - r^m)
    let rm = r.powi(m as i32);
    let bound = rm / (1.0 - rm);
    if bound > ALIAS_LIMIT {
        return Err(Error::Aliasing {
            bound,
            limit: ALIAS_LIMIT,
        });
    }
    let samples: Vec<Complex64> = (0..m)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            q_transform(Complex64::from_polar(r, theta), params)
        })
        .collect::<Result<_>>()?;

    let mut pmf = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, q) in samples.iter().enumerate() {
            let theta = -2.0 * std::f64::consts::PI * ((j * k) % m) as f64 / m as f64;
            acc += q * Complex64::from_polar(1.0, theta);
        }
        pmf.push(acc.re / (m as f64 * r.powi(k as i32)));
    }
    Ok(ComponentDistribution::new(pmf, PmfMethod::ClosedForm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::oracle::{component_pmf_oracle, DEFAULT_GRID};

    fn at(lp: f64) -> ConnectivityParams {
        ConnectivityParams::from_lambda_prime(lp, 200.0).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn m1_vanishes_at_origin() {
        assert_eq!(m1_closed(c(0.0), &at(2.0)).unwrap(), c(0.0));
        // and continuously so
        assert!(m1_closed(c(1e-7), &at(2.0)).unwrap().norm() < 1e-6);
    }

    #[test]
    fn q_normalised_and_vanishing_at_zero() {
        for lp in [1.5, 2.0, 3.0, 4.0] {
            let q = q_transform(c(1.0), &at(lp)).unwrap();
            assert!((q.re - 1.0).abs() < 1e-10 && q.im.abs() < 1e-12, "{lp}: {q}");
        }
        assert_eq!(q_transform(c(0.0), &at(2.0)).unwrap(), c(0.0));
    }

    #[test]
    fn real_axis_stays_real() {
        let p = at(2.5);
        for i in 0..=20 {
            let z = c(i as f64 / 20.0);
            assert!(q_transform(z, &p).unwrap().im.abs() < 1e-12);
            assert!(m1_printed(z, &p).unwrap().im.abs() < 1e-12);
        }
    }

    #[test]
    fn printed_form_agrees_only_at_one() {
        for lp in [1.5, 2.0, 3.0, 4.0] {
            let p = at(lp);
            let exact = m1_closed(c(1.0), &p).unwrap().re;
            let printed = m1_printed(c(1.0), &p).unwrap().re;
            assert!(((exact - printed) / exact).abs() < 1e-9, "{lp}: {exact} vs {printed}");
            let gap = (m1_closed(c(0.5), &p).unwrap() - m1_printed(c(0.5), &p).unwrap()).norm();
            assert!(gap > 1e-2);
        }
    }

    #[test]
    fn closed_form_matches_oracle_series_inside_disk() {
        let p = at(2.0);
        let d = component_pmf_oracle(80, &p, DEFAULT_GRID).unwrap();
        let rho = p.rho();
        // M1(z) = sum_{k>=1} P(N_b = k+2)/rho z^k
        let series: f64 = d.pmf[2..]
            .iter()
            .enumerate()
            .map(|(i, pk)| pk / rho * 0.5f64.powi(i as i32 + 1))
            .sum();
        let closed = m1_closed(c(0.5), &p).unwrap().re;
        assert!((series - closed).abs() < 1e-6, "{series} vs {closed}");
    }

    #[test]
    fn validity_guard() {
        let p = at(1.3);
        assert!(matches!(m1_closed(c(0.5), &p), Err(Error::Validity { .. })));
        assert!(matches!(m1_printed(c(0.5), &p), Err(Error::Validity { .. })));
        assert!(matches!(q_transform(c(0.5), &p), Err(Error::Validity { .. })));
        assert!(matches!(pmf_from_transform(5, &p), Err(Error::Validity { .. })));
        assert!(m1_closed(c(1.1), &at(2.0)).is_err());
    }

    #[test]
    fn extraction_matches_known_terms() {
        let p = at(2.0);
        let d = pmf_from_transform(6, &p).unwrap();
        assert!((d.pmf[0] - p.rho_prime()).abs() < 1e-12);
        assert!((d.pmf[1] - p.rho()).abs() < 1e-12);
        assert!(d.pmf.iter().all(|&x| x > -1e-9));
        assert_eq!(d.method, PmfMethod::ClosedForm);
    }

    #[test]
    fn radius_respects_branch_point() {
        let p = ConnectivityParams::with_margin(4f64.ln() + 0.01, 1.0, 0.0).unwrap();
        let r = extraction_radius(&p);
        assert!(r < p.branch_point() - 0.049);
        assert_eq!(extraction_radius(&at(4.0)), 0.95);
    }
}
