use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::routing::RoutingOutcome;

/// Below this many replications the Student-t quantile is used.
pub const T_THRESHOLD: usize = 30;

/// Two-sided critical value at `confidence` for a mean over `n` samples.
pub fn critical_value(confidence: f64, n: usize) -> f64 {
    one_sided_critical(0.5 + confidence / 2.0, n)
}

/// Quantile `p` of the sampling law of a standardised mean over `n` samples.
pub fn one_sided_critical(p: f64, n: usize) -> f64 {
    if n < T_THRESHOLD {
        StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("n >= 2").inverse_cdf(p)
    } else {
        Normal::standard().inverse_cdf(p)
    }
}

/// Mean, spread and confidence half-widths of one metric. Half-widths are
/// `None` (not applicable) for a single replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
    pub ci95: Option<f64>,
    pub ci99: Option<f64>,
}

impl MetricStats {
    /// Two passes in slice order, so the result is bit-reproducible.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                sd: f64::NAN,
                n,
                ci95: None,
                ci99: None,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self {
                mean,
                sd: 0.0,
                n,
                ci95: None,
                ci99: None,
            };
        }
        let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
        let sd = (ss / (n - 1) as f64).sqrt();
        let se = sd / (n as f64).sqrt();
        Self {
            mean,
            sd,
            n,
            ci95: Some(critical_value(0.95, n) * se),
            ci99: Some(critical_value(0.99, n) * se),
        }
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci95.is_some_and(|h| (self.mean - value).abs() <= h)
    }
}

/// Per-replication numbers kept after the trace is dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub forward_hops: u32,
    pub backward_hops: u32,
    pub d2d_links: u32,
    pub dead_ends: u32,
    pub total_delay: f64,
    pub delivered: bool,
}

impl From<&RoutingOutcome> for ReplicationRecord {
    fn from(o: &RoutingOutcome) -> Self {
        Self {
            forward_hops: o.forward_hops,
            backward_hops: o.backward_hops,
            d2d_links: o.d2d_links,
            dead_ends: o.dead_ends,
            total_delay: o.total_delay,
            delivered: o.delivered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub replications: usize,
    pub forward_hops: MetricStats,
    pub backward_hops: MetricStats,
    pub d2d_links: MetricStats,
    pub total_delay: MetricStats,
    pub delivery_rate: MetricStats,
    /// Fraction of replications that met at least one dead-end.
    pub deadend_rate: f64,
}

impl AggregateStats {
    pub fn from_records(records: &[ReplicationRecord]) -> Self {
        let col =
            |f: fn(&ReplicationRecord) -> f64| MetricStats::from_samples(&records.iter().map(f).collect::<Vec<_>>());
        let with_dead_end = records.iter().filter(|r| r.dead_ends > 0).count();
        Self {
            replications: records.len(),
            forward_hops: col(|r| r.forward_hops as f64),
            backward_hops: col(|r| r.backward_hops as f64),
            d2d_links: col(|r| r.d2d_links as f64),
            total_delay: col(|r| r.total_delay),
            delivery_rate: col(|r| if r.delivered { 1.0 } else { 0.0 }),
            deadend_rate: with_dead_end as f64 / records.len().max(1) as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_has_no_interval() {
        let s = MetricStats::from_samples(&[3.5]);
        assert_eq!(s.mean, 3.5);
        assert_eq!(s.ci95, None);
        assert_eq!(s.ci99, None);
    }

    #[test]
    fn t_and_normal_quantiles() {
        assert!((critical_value(0.95, 10) - 2.262_157).abs() < 1e-5);
        assert!((critical_value(0.95, 29) - 2.048_407).abs() < 1e-5);
        assert!((critical_value(0.95, 30) - 1.959_964).abs() < 1e-5);
        assert!((critical_value(0.99, 1000) - 2.575_829).abs() < 1e-5);
    }

    #[test]
    fn known_sample() {
        let s = MetricStats::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.sd - 1.290_994_448_7).abs() < 1e-9);
        let h = s.ci95.unwrap();
        assert!((h - 3.182_446 * s.sd / 2.0).abs() < 1e-5);
        assert!(s.ci99.unwrap() > h && h >= 0.0);
    }

    #[test]
    fn aggregate_rates() {
        let r = |d: u32, ok: bool| ReplicationRecord {
            forward_hops: 2,
            backward_hops: 0,
            d2d_links: 0,
            dead_ends: d,
            total_delay: 1.0,
            delivered: ok,
        };
        let a = AggregateStats::from_records(&[r(0, true), r(1, false), r(2, true), r(0, true)]);
        assert_eq!(a.deadend_rate, 0.5);
        assert_eq!(a.delivery_rate.mean, 0.75);
        assert_eq!(a.total_delay.sd, 0.0);
    }
}
