//! Clocks and compute throttling.
//!
//! Two clock modes exist. The real clock reads `Instant` around each pipeline
//! step and emulates a weak node by busy-spinning after each compute step.
//! The virtual clock never looks at the wall: every step advances a per-party
//! counter by a fixed cost per gate, and each exchange is resolved by the
//! barrier rule in [`virtual_exchange_stall`].

use std::fmt;
use std::str::FromStr;
use std::sync::mpsc::{channel, Receiver, Sender};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Virtual cost of each kind of work, in abstract units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub local_arith_gate: f64,
    /// Boolean local gates are charged per 64-gate word.
    pub local_bool_word: f64,
    pub interactive_prepare: f64,
    pub layer_finish: f64,
    pub unit_ms: f64,
}

impl Default for CostTable {
    fn default() -> Self {
        Self {
            local_arith_gate: 1.0,
            local_bool_word: 0.25,
            interactive_prepare: 2.0,
            layer_finish: 3.0,
            unit_ms: 0.001,
        }
    }
}

/// Compute slowdown of one party. `factor == 1.0` is native speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrottleConfig {
    factor: f64,
    pub calibration: CostTable,
}

impl Default for ThrottleConfig {
    fn default() -> Self {
        Self {
            factor: 1.0,
            calibration: CostTable::default(),
        }
    }
}

impl ThrottleConfig {
    pub fn new(factor: f64) -> Result<Self> {
        Self::with_costs(factor, CostTable::default())
    }

    pub fn with_costs(factor: f64, calibration: CostTable) -> Result<Self> {
        if !(factor >= 1.0 && factor.is_finite()) {
            return Err(Error::Config(format!("throttle factor {factor} must be a finite value >= 1")));
        }
        Ok(Self { factor, calibration })
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockKind {
    #[default]
    Real,
    Virtual,
}

impl fmt::Display for ClockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClockKind::Real => "real",
            ClockKind::Virtual => "virtual",
        })
    }
}

impl FromStr for ClockKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Self::Real),
            "virtual" => Ok(Self::Virtual),
            other => Err(Error::Usage(format!("unknown clock mode `{other}`"))),
        }
    }
}

/// Clock selection for an experiment. `latency_ms` only affects the virtual clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockMode {
    pub kind: ClockKind,
    pub latency_ms: f64,
}

impl Default for ClockMode {
    fn default() -> Self {
        Self::real()
    }
}

impl ClockMode {
    pub const DEFAULT_LATENCY_MS: f64 = 0.1;

    pub fn real() -> Self {
        Self {
            kind: ClockKind::Real,
            latency_ms: Self::DEFAULT_LATENCY_MS,
        }
    }

    pub fn virtual_with_latency(latency_ms: f64) -> Self {
        Self {
            kind: ClockKind::Virtual,
            latency_ms,
        }
    }
}

/// Stall of the receiving party in one symmetric exchange.
///
/// The exchange completes for both parties at `max(sender_ready, receiver_ready) + latency`,
/// so the receiver waits `max(0, sender_ready - receiver_ready) + latency`.
pub fn virtual_exchange_stall(sender_ready_ms: f64, receiver_ready_ms: f64, latency_ms: f64) -> f64 {
    (sender_ready_ms - receiver_ready_ms).max(0.0) + latency_ms
}

/// Busy-waits for `d` without yielding the core.
pub fn spin_for(d: Duration) {
    let start = Instant::now();
    while start.elapsed() < d {
        std::hint::spin_loop();
    }
}

/// Charges `base_cost_units` of work under `cfg` and returns the elapsed milliseconds.
///
/// Virtual: `base * factor * unit_ms`, nothing executes. Real: spins for the
/// `base * (factor - 1) * unit_ms` of extra work a slower node would need and
/// returns the measured spin time.
pub fn apply_throttle(base_cost_units: f64, cfg: &ThrottleConfig, clock: ClockKind) -> f64 {
    let unit = cfg.calibration.unit_ms;
    match clock {
        ClockKind::Virtual => base_cost_units * cfg.factor * unit,
        ClockKind::Real => {
            let extra_ms = base_cost_units * (cfg.factor - 1.0) * unit;
            let start = Instant::now();
            spin_for(Duration::from_secs_f64(extra_ms.max(0.0) / 1e3));
            start.elapsed().as_secs_f64() * 1e3
        }
    }
}

/// One endpoint of the side channel that carries virtual ready times between
/// two loopback parties. Frames themselves never carry timing data.
#[derive(Debug)]
pub struct VirtualLink {
    tx: Sender<f64>,
    rx: Receiver<f64>,
}

impl VirtualLink {
    pub fn pair() -> (VirtualLink, VirtualLink) {
        let (t0, r1) = channel();
        let (t1, r0) = channel();
        (VirtualLink { tx: t0, rx: r0 }, VirtualLink { tx: t1, rx: r1 })
    }

    /// Publishes our ready time and returns the peer's.
    pub fn swap(&self, ready_ms: f64) -> Result<f64> {
        self.tx
            .send(ready_ms)
            .map_err(|_| Error::Connection(std::io::ErrorKind::BrokenPipe.into()))?;
        self.rx
            .recv()
            .map_err(|_| Error::Connection(std::io::ErrorKind::UnexpectedEof.into()))
    }
}

/// One endpoint of the side channel two in-process parties use to agree on
/// a common real-clock start: the instant the later of them had its input
/// shares on the link.
#[derive(Debug)]
pub struct StartLink {
    tx: Sender<Instant>,
    rx: Receiver<Instant>,
}

impl StartLink {
    pub fn pair() -> (StartLink, StartLink) {
        let (t0, r1) = channel();
        let (t1, r0) = channel();
        (StartLink { tx: t0, rx: r0 }, StartLink { tx: t1, rx: r1 })
    }

    pub(crate) fn publish(&self, ready: Instant) -> Result<()> {
        self.tx
            .send(ready)
            .map_err(|_| Error::Connection(std::io::ErrorKind::BrokenPipe.into()))
    }

    pub(crate) fn peer_ready(&self) -> Result<Instant> {
        self.rx
            .recv()
            .map_err(|_| Error::Connection(std::io::ErrorKind::UnexpectedEof.into()))
    }
}
