use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeliveryMode {
    V2vToRsu,
    D2dBridgeThenV2v,
    CellularDirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Source,
    V2vHop,
    DeadEnd,
    BackwardHop,
    Carry,
    D2dBridge,
    IdealBridge,
    CellularUplink,
    RsuDelivery,
    Failure,
}

impl EventKind {
    pub fn code(self) -> &'static str {
        match self {
            EventKind::Source => "SRC",
            EventKind::V2vHop => "HOP",
            EventKind::DeadEnd => "DEAD",
            EventKind::BackwardHop => "BACK",
            EventKind::Carry => "CARRY",
            EventKind::D2dBridge => "D2D",
            EventKind::IdealBridge => "BRIDGE",
            EventKind::CellularUplink => "CELL",
            EventKind::RsuDelivery => "RSU",
            EventKind::Failure => "FAIL",
        }
    }
}

/// One step of the message's life. `holder` is the vehicle holding the
/// message once the event completes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub holder: u64,
    pub position: f64,
    pub kind: EventKind,
    pub delay: f64,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingOutcome {
    pub forward_hops: u32,
    pub backward_hops: u32,
    pub d2d_links: u32,
    pub dead_ends: u32,
    pub carry_time: f64,
    pub total_delay: f64,
    pub delivered: bool,
    pub delivery_mode: Option<DeliveryMode>,
    /// Index (in the snapshot the route ended on) of the relay that stalled,
    /// for plain V2V routes that hit a dead-end.
    pub stuck_at: Option<usize>,
    pub trace: Vec<TraceEvent>,
}

impl RoutingOutcome {
    pub fn start(holder: u64, position: f64) -> Self {
        let mut o = Self {
            forward_hops: 0,
            backward_hops: 0,
            d2d_links: 0,
            dead_ends: 0,
            carry_time: 0.0,
            total_delay: 0.0,
            delivered: false,
            delivery_mode: None,
            stuck_at: None,
            trace: Vec::new(),
        };
        o.record(EventKind::Source, holder, position, 0.0);
        o
    }

    /// Appends an event; the running delay is the sum of event delays in
    /// trace order.
    pub fn record(&mut self, kind: EventKind, holder: u64, position: f64, delay: f64) {
        self.total_delay += delay;
        self.trace.push(TraceEvent {
            holder,
            position,
            kind,
            delay,
            time: self.total_delay,
        });
    }

    pub fn now(&self) -> f64 {
        self.total_delay
    }

    pub fn holder(&self) -> u64 {
        self.trace
            .last()
            .map(|e| e.holder)
            .expect("trace starts with the source")
    }

    /// Line-oriented trace: `timestamp_s position_m event holder`.
    pub fn export_trace(&self) -> String {
        let mut out = String::new();
        for e in &self.trace {
            let _ = writeln!(out, "{:.9} {:.3} {} {}", e.time, e.position, e.kind.code(), e.holder);
        }
        out
    }
}
