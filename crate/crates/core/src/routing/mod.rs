//! Monte Carlo road-and-routing simulator.
//!
//! An alert travels toward the RSU at the road end by greedy farthest-in-range
//! V2V forwarding. When a relay has no vehicle ahead within range (a
//! dead-end) the configured [`RecoveryStrategy`] takes over. Strategies are
//! looked up by name in a [`StrategyRegistry`]:
//!
//! | name            | behaviour at a dead-end                                        |
//! |-----------------|----------------------------------------------------------------|
//! | `backtrack`     | pass back along the trace, then store-carry-forward            |
//! | `d2d_on_demand` | eNodeB-assisted D2D bridge, discovery run on failure           |
//! | `d2d_proactive` | D2D bridge with discovery already done                         |
//! | `ideal_bridge`  | hand to the next vehicle at ordinary hop cost (analytic check) |
//!
//! On a straight road the previous relays never reach past the stuck relay,
//! so backtracking alone cannot find an alternative spatial path. The
//! pure-V2V baseline therefore carries the message until vehicle motion
//! closes the gap.

pub mod backtrack;
pub mod component;
pub mod d2d;
pub mod delay;
pub mod greedy;
pub mod hybrid;
pub mod outcome;
pub mod strategy;

pub use backtrack::{recover_backtrack, BacktrackRecovery};
pub use component::{sample_component, ComponentSample};
pub use d2d::{recover_d2d, D2dDecision, D2dRecovery, Discovery};
pub use delay::DelayModel;
pub use greedy::{greedy_next_hop, route_v2v, NextHop, Route};
pub use hybrid::{run_hybrid, Scenario};
pub use outcome::{DeliveryMode, EventKind, RoutingOutcome, TraceEvent};
pub use strategy::{IdealBridge, Recovery, RecoveryStrategy, StrategyRegistry, StrategySpec};
