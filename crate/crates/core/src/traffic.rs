//! Free-flow traffic on a straight road: truncated-normal speeds, Poisson
//! arrivals at the road entrance, the resulting spatial vehicle rate, road
//! snapshots and time-step mobility.

use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, RngExt};
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erfc, erfc_inv};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// Arrival and speed parameters of the free-flow traffic stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficParams {
    /// Arrival rate at the road entrance (vehicles/s).
    pub lambda_a: f64,
    /// Speed bounds (m/s).
    pub v_min: f64,
    pub v_max: f64,
    /// Mean and standard deviation of the untruncated speed law (m/s).
    pub mu: f64,
    pub sigma: f64,
}

impl Default for TrafficParams {
    fn default() -> Self {
        Self {
            lambda_a: 0.5,
            v_min: 20.0,
            v_max: 30.0,
            mu: 25.0,
            sigma: 5.0,
        }
    }
}

impl TrafficParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_a > 0.0 && self.lambda_a.is_finite()) {
            return Err(Error::invalid("lambda_a", "must be finite and > 0"));
        }
        if !(self.v_min > 0.0 && self.v_min < self.v_max && self.v_max.is_finite()) {
            return Err(Error::invalid("v_min/v_max", "need 0 < v_min < v_max"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid("sigma", "must be finite and > 0"));
        }
        if !self.mu.is_finite() {
            return Err(Error::invalid("mu", "must be finite"));
        }
        Ok(())
    }

    /// Non-fatal remarks about the parameter set.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.mu < self.v_min || self.mu > self.v_max {
            out.push(format!(
                "mean speed mu = {} lies outside [v_min, v_max] = [{}, {}]",
                self.mu, self.v_min, self.v_max
            ));
        }
        out
    }

    pub fn speed_distribution(&self) -> Result<TruncatedNormal> {
        TruncatedNormal::new(self.mu, self.sigma, self.v_min, self.v_max)
    }
}

/// Normal law restricted to `[v_min, v_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedNormal {
    pub mu: f64,
    pub sigma: f64,
    pub v_min: f64,
    pub v_max: f64,
    /// `erf((v_max-mu)/(sigma*sqrt2)) - erf((v_min-mu)/(sigma*sqrt2))`
    pub normalizer: f64,
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

fn std_normal_quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

impl TruncatedNormal {
    pub fn new(mu: f64, sigma: f64, v_min: f64, v_max: f64) -> Result<Self> {
        if !(sigma > 0.0) || !(v_min < v_max) || !mu.is_finite() {
            return Err(Error::invalid(
                "truncated normal",
                format!("mu={mu}, sigma={sigma}, bounds=[{v_min}, {v_max}]"),
            ));
        }
        let s = sigma * SQRT_2;
        let normalizer = erf((v_max - mu) / s) - erf((v_min - mu) / s);
        if !(normalizer > 0.0) {
            return Err(Error::invalid(
                "truncated normal",
                "bounds carry no probability mass under the untruncated law",
            ));
        }
        Ok(Self {
            mu,
            sigma,
            v_min,
            v_max,
            normalizer,
        })
    }

    fn alpha(&self) -> f64 {
        (self.v_min - self.mu) / self.sigma
    }

    fn beta(&self) -> f64 {
        (self.v_max - self.mu) / self.sigma
    }

    /// Speed density (s/m). The numerator carries the factor 2 that pairs
    /// with the erf-difference denominator, so the density integrates to 1.
    pub fn pdf(&self, v: f64) -> f64 {
        if v < self.v_min || v > self.v_max {
            return 0.0;
        }
        let z = (v - self.mu) / self.sigma;
        2.0 / (self.sigma * (2.0 * PI).sqrt()) * (-0.5 * z * z).exp() / self.normalizer
    }

    pub fn mean(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        let z = 0.5 * self.normalizer;
        self.mu + self.sigma * (std_normal_pdf(a) - std_normal_pdf(b)) / z
    }

    pub fn variance(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        let z = 0.5 * self.normalizer;
        let (pa, pb) = (std_normal_pdf(a), std_normal_pdf(b));
        let shift = (pa - pb) / z;
        self.sigma * self.sigma * (1.0 + (a * pa - b * pb) / z - shift * shift)
    }

    /// Inverse-CDF draw on the truncated range. Upper-tail windows are
    /// mirrored so the uniform is mapped through the better-conditioned tail.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let (a, b) = (self.alpha(), self.beta());
        let z = if a > 0.0 {
            -unit_window_quantile(-b, -a, u)
        } else {
            unit_window_quantile(a, b, u)
        };
        (self.mu + self.sigma * z).clamp(self.v_min, self.v_max)
    }
}

fn unit_window_quantile(a: f64, b: f64, u: f64) -> f64 {
    let (pa, pb) = (std_normal_cdf(a), std_normal_cdf(b));
    std_normal_quantile(pa + u * (pb - pa)).clamp(a, b)
}

pub fn truncated_normal_pdf(v: f64, dist: &TruncatedNormal) -> f64 {
    dist.pdf(v)
}

pub fn sample_speed<R: Rng + ?Sized>(dist: &TruncatedNormal, rng: &mut R) -> f64 {
    dist.sample(rng)
}

/// Spatial vehicle rate (vehicles/m): `lambda_a * E[1/V]` by adaptive
/// quadrature at relative tolerance 1e-10.
pub fn spatial_rate(params: &TrafficParams) -> Result<f64> {
    spatial_rate_with(params, QuadOptions::default())
}

pub fn spatial_rate_with(params: &TrafficParams, opts: QuadOptions) -> Result<f64> {
    params.validate()?;
    let dist = params.speed_distribution()?;
    let breaks: Vec<f64> = [-8.0, -1.0, 0.0, 1.0, 8.0]
        .iter()
        .map(|k| dist.mu + k * dist.sigma)
        .collect();
    let r = quad::integrate(|v| dist.pdf(v) / v, dist.v_min, dist.v_max, &breaks, opts)?;
    let lambda = params.lambda_a * r.value;
    if !(lambda > 0.0) {
        return Err(Error::NonConvergence {
            what: "spatial rate",
            detail: format!("non-positive result {lambda}"),
        });
    }
    Ok(lambda)
}

/// Vehicles on `[0, road_length]` at one instant, sorted by position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadSnapshot {
    pub positions: Vec<f64>,
    pub speeds: Vec<f64>,
    /// Stable vehicle identities; survive re-sorting in [`TrafficModel::advance`].
    pub ids: Vec<u64>,
    pub road_length: f64,
    pub rsu_position: f64,
    pub next_id: u64,
}

impl RoadSnapshot {
    pub fn new(road_length: f64) -> Self {
        Self {
            positions: Vec::new(),
            speeds: Vec::new(),
            ids: Vec::new(),
            road_length,
            rsu_position: road_length,
            next_id: 0,
        }
    }

    /// Builds a snapshot from explicit positions and speeds (sorted on entry).
    pub fn from_vehicles(road_length: f64, vehicles: &[(f64, f64)]) -> Result<Self> {
        let mut v = vehicles.to_vec();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        if v.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("positions", "must be distinct"));
        }
        if v.iter().any(|&(p, s)| !(0.0..=road_length).contains(&p) || !(s >= 0.0)) {
            return Err(Error::invalid("positions", "must lie in [0, L] with speed >= 0"));
        }
        let mut snap = Self::new(road_length);
        for (p, s) in v {
            snap.push(p, s);
        }
        Ok(snap)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    fn push(&mut self, position: f64, speed: f64) {
        self.positions.push(position);
        self.speeds.push(speed);
        self.ids.push(self.next_id);
        self.next_id += 1;
    }

    /// Number of other vehicles within `range` of vehicle `i`, either side.
    pub fn neighbor_count(&self, i: usize, range: f64) -> usize {
        let p = self.positions[i];
        let lo = self.positions.partition_point(|&x| x < p - range);
        let hi = self.positions.partition_point(|&x| x <= p + range);
        hi - lo - 1
    }
}

/// Traffic parameters together with the derived speed law and spatial rate.
#[derive(Debug, Clone, Copy)]
pub struct TrafficModel {
    pub params: TrafficParams,
    pub dist: TruncatedNormal,
    pub lambda: f64,
}

impl TrafficModel {
    pub fn new(params: TrafficParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            dist: params.speed_distribution()?,
            lambda: spatial_rate(&params)?,
        })
    }

    pub fn snapshot<R: Rng + ?Sized>(&self, road_length: f64, rng: &mut R) -> RoadSnapshot {
        generate_snapshot(self.lambda, road_length, &self.dist, rng)
    }

    /// Moves every vehicle by `speed * dt`, drops vehicles past the road end
    /// and injects the arrivals of the entrance Poisson stream during `dt`.
    pub fn advance<R: Rng + ?Sized>(&self, snap: &mut RoadSnapshot, dt: f64, rng: &mut R) {
        assert!(dt > 0.0, "advance requires dt > 0");
        let mut vehicles: Vec<(f64, f64, u64)> = snap
            .positions
            .iter()
            .zip(&snap.speeds)
            .zip(&snap.ids)
            .map(|((&p, &s), &id)| (p + s * dt, s, id))
            .filter(|v| v.0 <= snap.road_length)
            .collect();

        let gaps = Exp::new(self.params.lambda_a).expect("lambda_a > 0");
        let mut t = gaps.sample(rng);
        while t < dt {
            let speed = self.dist.sample(rng);
            let p = speed * (dt - t);
            if p <= snap.road_length {
                vehicles.push((p, speed, snap.next_id));
            }
            snap.next_id += 1;
            t += gaps.sample(rng);
        }

        vehicles.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        for i in 1..vehicles.len() {
            if vehicles[i].0 <= vehicles[i - 1].0 {
                vehicles[i].0 = vehicles[i - 1].0.next_up();
            }
        }
        snap.positions = vehicles.iter().map(|v| v.0).collect();
        snap.speeds = vehicles.iter().map(|v| v.1).collect();
        snap.ids = vehicles.iter().map(|v| v.2).collect();
    }
}

/// One Poisson realisation on `[0, road_length]`: cumulative i.i.d.
/// exponential gaps starting from an exponential offset, each vehicle with an
/// i.i.d. speed.
pub fn generate_snapshot<R: Rng + ?Sized>(
    lambda: f64,
    road_length: f64,
    dist: &TruncatedNormal,
    rng: &mut R,
) -> RoadSnapshot {
    assert!(lambda > 0.0 && road_length > 0.0);
    let gaps = Exp::new(lambda).expect("lambda > 0");
    let mut snap = RoadSnapshot::new(road_length);
    let mut pos = 0.0;
    loop {
        let next = pos + gaps.sample(rng);
        if next <= pos {
            // zero gap (or one lost to rounding): re-draw
            continue;
        }
        if next > road_length {
            break;
        }
        pos = next;
        let speed = dist.sample(rng);
        snap.push(pos, speed);
    }
    snap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn tn() -> TruncatedNormal {
        TruncatedNormal::new(25.0, 5.0, 20.0, 30.0).unwrap()
    }

    #[test]
    fn pdf_support_and_peak() {
        let d = tn();
        assert_eq!(d.pdf(19.999), 0.0);
        assert_eq!(d.pdf(30.001), 0.0);
        assert_eq!(d.pdf(-5.0), 0.0);
        let peak = d.pdf(25.0);
        for v in [20.0, 22.0, 24.9, 25.1, 28.0, 30.0] {
            assert!(d.pdf(v) < peak);
        }
    }

    #[test]
    fn pdf_normalises() {
        let d = tn();
        let r = quad::integrate(|v| d.pdf(v), 20.0, 30.0, &[25.0], QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);

        // off-centre window, mean outside the bounds
        let d = TruncatedNormal::new(10.0, 3.0, 14.0, 40.0).unwrap();
        let r = quad::integrate(|v| d.pdf(v), 14.0, 40.0, &[], QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn degenerate_sigma_rate() {
        let p = TrafficParams {
            lambda_a: 0.5,
            mu: 25.0,
            sigma: 1e-4,
            v_min: 24.9,
            v_max: 25.1,
        };
        let lambda = spatial_rate(&p).unwrap();
        assert!((lambda - 0.02).abs() < 1e-6, "{lambda}");
    }

    #[test]
    fn rate_linear_in_arrivals() {
        let p = TrafficParams::default();
        let q = TrafficParams {
            lambda_a: 2.0 * p.lambda_a,
            ..p
        };
        assert_eq!(spatial_rate(&q).unwrap(), 2.0 * spatial_rate(&p).unwrap());
    }

    #[test]
    fn rate_decreasing_in_mean_speed() {
        let mut last = f64::INFINITY;
        for mu in [10.0, 15.0, 20.0, 25.0, 30.0, 35.0] {
            let p = TrafficParams {
                lambda_a: 0.5,
                mu,
                sigma: 1e-3,
                v_min: mu - 1.0,
                v_max: mu + 1.0,
            };
            let l = spatial_rate(&p).unwrap();
            assert!(l < last);
            last = l;
        }
    }

    #[test]
    fn mean_outside_bounds_warns() {
        let p = TrafficParams {
            mu: 40.0,
            ..TrafficParams::default()
        };
        assert!(p.validate().is_ok());
        assert_eq!(p.warnings().len(), 1);
        assert!(TrafficParams::default().warnings().is_empty());
    }

    #[test]
    fn invalid_params_rejected() {
        let base = TrafficParams::default();
        for p in [
            TrafficParams { sigma: -1.0, ..base },
            TrafficParams { lambda_a: 0.0, ..base },
            TrafficParams { v_min: 0.0, ..base },
            TrafficParams {
                v_min: 30.0,
                v_max: 20.0,
                ..base
            },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn samples_respect_support() {
        let mut rng = seed::stream(1, 0);
        for d in [
            tn(),
            TruncatedNormal::new(25.0, 5.0, 34.0, 36.0).unwrap(),
            TruncatedNormal::new(25.0, 5.0, 2.0, 4.0).unwrap(),
        ] {
            for _ in 0..10_000 {
                let s = d.sample(&mut rng);
                assert!(s >= d.v_min && s <= d.v_max);
            }
        }
        let d = TruncatedNormal::new(25.0, 1e-4, 24.999, 25.001).unwrap();
        for _ in 0..1000 {
            assert!((d.sample(&mut rng) - 25.0).abs() < 1e-3);
        }
    }

    #[test]
    fn sample_moments_match_analytic() {
        let d = tn();
        let mut rng = seed::stream(2, 0);
        let n = 1_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let x = d.sample(&mut rng);
            s += x;
            s2 += x * x;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        let se = (d.variance() / n as f64).sqrt();
        assert!((mean - d.mean()).abs() < 3.0 * se, "{mean} vs {}", d.mean());
        // variance SE for a bounded law, fourth moment bounded by (width/2)^4
        let se_var = (25f64.powi(2) / n as f64).sqrt();
        assert!((var - d.variance()).abs() < 3.0 * se_var);
    }

    #[test]
    fn snapshot_positions_sorted_and_bounded() {
        let d = tn();
        let mut rng = seed::stream(3, 0);
        for _ in 0..200 {
            let s = generate_snapshot(0.02, 10_000.0, &d, &mut rng);
            assert!(s.positions.windows(2).all(|w| w[0] < w[1]));
            assert!(s.positions.iter().all(|&p| (0.0..=10_000.0).contains(&p)));
            assert!(s.speeds.iter().all(|&v| (20.0..=30.0).contains(&v)));
            assert_eq!(s.rsu_position, 10_000.0);
        }
    }

    #[test]
    fn tiny_road_can_be_empty() {
        let d = tn();
        let mut rng = seed::stream(4, 0);
        let empties = (0..1000)
            .filter(|_| generate_snapshot(0.02, 1.0, &d, &mut rng).is_empty())
            .count();
        // P(empty) = exp(-0.02)
        assert!(empties > 950);
    }

    #[test]
    fn neighbor_count_both_sides() {
        let s = RoadSnapshot::from_vehicles(
            1000.0,
            &[(0.0, 1.0), (50.0, 1.0), (120.0, 1.0), (190.0, 1.0), (420.0, 1.0)],
        )
        .unwrap();
        assert_eq!(s.neighbor_count(0, 200.0), 3);
        assert_eq!(s.neighbor_count(2, 100.0), 2);
        assert_eq!(s.neighbor_count(4, 200.0), 0);
    }

    #[test]
    fn advance_kinematics_and_exit() {
        let model = TrafficModel::new(TrafficParams {
            lambda_a: 1e-9,
            ..TrafficParams::default()
        })
        .unwrap();
        let mut rng = seed::stream(5, 0);
        let mut s = RoadSnapshot::from_vehicles(1000.0, &[(100.0, 25.0), (999.0, 25.0)]).unwrap();
        model.advance(&mut s, 1.0, &mut rng);
        assert_eq!(s.positions, vec![125.0]);
        assert_eq!(s.ids, vec![0]);
    }

    #[test]
    fn advance_keeps_order_under_overtaking() {
        let model = TrafficModel::new(TrafficParams::default()).unwrap();
        let mut rng = seed::stream(6, 0);
        let mut s = RoadSnapshot::from_vehicles(1000.0, &[(100.0, 30.0), (110.0, 20.0)]).unwrap();
        model.advance(&mut s, 2.0, &mut rng);
        let fast = s.index_of(0).unwrap();
        let slow = s.index_of(1).unwrap();
        assert!(fast > slow);
        assert!(s.positions.windows(2).all(|w| w[0] < w[1]));
    }
}
