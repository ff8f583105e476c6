//! Direct sampling of single connected components on a Poisson road.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::traffic::RoadSnapshot;

use super::greedy::{greedy_next_hop, NextHop};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentSample {
    pub vehicles: usize,
    /// Nodes on the farthest-neighbour chain, first and last vehicle included.
    pub retransmitters: usize,
    /// Last vehicle minus first vehicle (m).
    pub span: f64,
    /// Stretch of road the component covers: `span + range`.
    pub extent: f64,
}

/// Grows a component from a vehicle at 0 with i.i.d. exponential gaps until
/// a gap exceeds the range.
pub fn sample_component<R: Rng + ?Sized>(lambda: f64, range: f64, rng: &mut R) -> ComponentSample {
    let gaps = Exp::new(lambda).expect("lambda > 0");
    let mut positions = vec![0.0];
    loop {
        let g = gaps.sample(rng);
        if g > range {
            break;
        }
        let last = *positions.last().expect("non-empty");
        positions.push(last + g);
    }
    let span = *positions.last().expect("non-empty");
    let n = positions.len();
    let snap = RoadSnapshot {
        speeds: vec![0.0; n],
        ids: (0..n as u64).collect(),
        road_length: span,
        rsu_position: span,
        next_id: n as u64,
        positions,
    };
    let mut retransmitters = 1;
    let mut at = 0;
    while let NextHop::Relay(j) = greedy_next_hop(&snap, at, range) {
        retransmitters += 1;
        at = j;
    }
    ComponentSample {
        vehicles: n,
        retransmitters,
        span,
        extent: span + range,
    }
}
