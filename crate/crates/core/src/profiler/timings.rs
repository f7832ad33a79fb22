use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::clock::{spin_for, ClockKind, StartLink, ThrottleConfig, VirtualLink};
use crate::error::Result;
use crate::sharing::PartyId;

/// Per-party time attribution across the four online-phase steps, in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepTimings {
    pub party: PartyId,
    pub local_gates_ms: f64,
    pub interactive_gate_ms: f64,
    pub layer_finish_ms: f64,
    pub communication_ms: f64,
    pub online_phase_ms: f64,
}

impl StepTimings {
    pub fn zero(party: PartyId) -> Self {
        Self {
            party,
            local_gates_ms: 0.0,
            interactive_gate_ms: 0.0,
            layer_finish_ms: 0.0,
            communication_ms: 0.0,
            online_phase_ms: 0.0,
        }
    }

    pub fn component_sum(&self) -> f64 {
        self.local_gates_ms + self.interactive_gate_ms + self.layer_finish_ms + self.communication_ms
    }

    /// Share of the online phase spent stalled on the peer.
    pub fn stall_fraction(&self) -> f64 {
        if self.online_phase_ms > 0.0 {
            self.communication_ms / self.online_phase_ms
        } else {
            0.0
        }
    }
}

/// Compute steps of the per-layer pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Local,
    Interactive,
    Finish,
}

// virtual time is kept in integer picoseconds so sums are exact
const PS_PER_MS: f64 = 1e9;

fn to_ps(ms: f64) -> u64 {
    (ms * PS_PER_MS).round() as u64
}

fn ps_to_ms(ps: u64) -> f64 {
    ps as f64 / PS_PER_MS
}

#[derive(Debug)]
enum Mode {
    Real {
        started: Option<Instant>,
        acc: [Duration; 4],
        total: Duration,
        sync: Option<StartLink>,
        ready: Option<Instant>,
    },
    Virtual {
        latency_ps: u64,
        link: VirtualLink,
        now_ps: u64,
        acc: [u64; 4],
    },
}

/// Per-session accumulator. Single-threaded; one per party per execution.
#[derive(Debug)]
pub struct PartyClock {
    party: PartyId,
    throttle: ThrottleConfig,
    mode: Mode,
    running: bool,
}

const COMM: usize = 3;

fn slot(step: Step) -> usize {
    match step {
        Step::Local => 0,
        Step::Interactive => 1,
        Step::Finish => 2,
    }
}

impl PartyClock {
    pub fn real(party: PartyId, throttle: ThrottleConfig) -> Self {
        Self {
            party,
            throttle,
            mode: Mode::Real {
                started: None,
                acc: [Duration::ZERO; 4],
                total: Duration::ZERO,
                sync: None,
                ready: None,
            },
            running: false,
        }
    }

    /// Real clock whose online phase starts at the same instant as the peer's.
    ///
    /// Both parties call [`mark_ready`](Self::mark_ready) before sending their
    /// input shares; [`start`](Self::start) then begins at the later of the two
    /// marks and charges any delay between that instant and the call to
    /// communication. Without this, whichever thread the scheduler resumes
    /// second on a shared core would start late and report a shorter phase.
    pub fn real_synced(party: PartyId, throttle: ThrottleConfig, link: StartLink) -> Self {
        let mut c = Self::real(party, throttle);
        if let Mode::Real { sync, .. } = &mut c.mode {
            *sync = Some(link);
        }
        c
    }

    /// `link` connects to the peer's virtual clock.
    pub fn virtual_clock(party: PartyId, throttle: ThrottleConfig, latency_ms: f64, link: VirtualLink) -> Self {
        Self {
            party,
            throttle,
            mode: Mode::Virtual {
                latency_ps: to_ps(latency_ms),
                link,
                now_ps: 0,
                acc: [0; 4],
            },
            running: false,
        }
    }

    pub fn kind(&self) -> ClockKind {
        match self.mode {
            Mode::Real { .. } => ClockKind::Real,
            Mode::Virtual { .. } => ClockKind::Virtual,
        }
    }

    pub fn throttle(&self) -> &ThrottleConfig {
        &self.throttle
    }

    /// Starts (or resumes) attribution. Work outside start/stop is not charged.
    pub fn start(&mut self) -> Result<()> {
        if self.running {
            return Ok(());
        }
        self.running = true;
        if let Mode::Real {
            started,
            acc,
            sync,
            ready,
            ..
        } = &mut self.mode
        {
            let now = Instant::now();
            let mut begin = now;
            if let (Some(link), Some(own)) = (sync.as_ref(), ready.take()) {
                begin = own.max(link.peer_ready()?).min(now);
                acc[COMM] += now - begin;
            }
            *started = Some(begin);
        }
        Ok(())
    }

    /// Records that this party's input shares are about to leave. Only a
    /// synced real clock uses the mark.
    pub fn mark_ready(&mut self) -> Result<()> {
        if let Mode::Real {
            sync: Some(link),
            ready,
            ..
        } = &mut self.mode
        {
            let now = Instant::now();
            link.publish(now)?;
            *ready = Some(now);
        }
        Ok(())
    }

    pub fn stop(&mut self) {
        if let Mode::Real { started, total, .. } = &mut self.mode {
            if let Some(t) = started.take() {
                *total += t.elapsed();
            }
        }
        self.running = false;
    }

    /// Runs a compute step. Real clock: measures `f`, then spins for `(factor - 1)`
    /// times the measured time. Virtual clock: charges `cost_units * factor`.
    pub fn compute<R>(&mut self, step: Step, cost_units: f64, f: impl FnOnce() -> R) -> R {
        let factor = self.throttle.factor();
        let unit_ms = self.throttle.calibration.unit_ms;
        let running = self.running;
        match &mut self.mode {
            Mode::Real { acc, .. } => {
                let t0 = Instant::now();
                let r = f();
                if factor > 1.0 {
                    spin_for(t0.elapsed().mul_f64(factor - 1.0));
                }
                if running {
                    acc[slot(step)] += t0.elapsed();
                }
                r
            }
            Mode::Virtual { now_ps, acc, .. } => {
                let r = f();
                if running {
                    let d = to_ps(cost_units * factor * unit_ms);
                    acc[slot(step)] += d;
                    *now_ps += d;
                }
                r
            }
        }
    }

    /// Blocking wait for the peer. Real clock: the wait inside `recv` is the
    /// communication time. Virtual clock: `recv` is not timed; the barrier rule
    /// decides the stall from both parties' ready times.
    pub fn exchange<R>(&mut self, recv: impl FnOnce() -> Result<R>) -> Result<R> {
        let running = self.running;
        match &mut self.mode {
            Mode::Real { acc, .. } => {
                let t0 = Instant::now();
                let r = recv()?;
                if running {
                    acc[COMM] += t0.elapsed();
                }
                Ok(r)
            }
            Mode::Virtual {
                latency_ps,
                link,
                now_ps,
                acc,
            } => {
                let r = recv()?;
                // ready times travel as integral picoseconds; exact in f64 below 2^53
                let peer = link.swap(*now_ps as f64)? as u64;
                let stall = peer.saturating_sub(*now_ps) + *latency_ps;
                if running {
                    acc[COMM] += stall;
                    *now_ps += stall;
                } else {
                    *now_ps = (*now_ps).max(peer);
                }
                Ok(r)
            }
        }
    }

    pub fn timings(&self) -> StepTimings {
        let mut t = StepTimings::zero(self.party);
        let cells: [f64; 4] = match &self.mode {
            Mode::Real { acc, total, started, .. } => {
                let live = started.map(|s| s.elapsed()).unwrap_or_default();
                t.online_phase_ms = (*total + live).as_secs_f64() * 1e3;
                acc.map(|d| d.as_secs_f64() * 1e3)
            }
            Mode::Virtual { acc, .. } => acc.map(ps_to_ms),
        };
        t.local_gates_ms = cells[0];
        t.interactive_gate_ms = cells[1];
        t.layer_finish_ms = cells[2];
        t.communication_ms = cells[3];
        if self.kind() == ClockKind::Virtual {
            // the virtual online phase is, by definition, the sum of its steps
            t.online_phase_ms = t.component_sum();
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn virtual_accounting_is_exact() {
        let (a, b) = VirtualLink::pair();
        let slow = ThrottleConfig::new(3.0).unwrap();
        let h = std::thread::spawn(move || {
            let mut c = PartyClock::virtual_clock(PartyId::P1, slow, 0.1, b);
            c.start().unwrap();
            c.compute(Step::Interactive, 1000.0, || ());
            c.exchange(|| Ok(())).unwrap();
            c.compute(Step::Finish, 10.0, || ());
            c.timings()
        });
        let mut c = PartyClock::virtual_clock(PartyId::P0, ThrottleConfig::default(), 0.1, a);
        c.start().unwrap();
        c.compute(Step::Interactive, 1000.0, || ());
        c.exchange(|| Ok(())).unwrap();
        c.compute(Step::Finish, 10.0, || ());
        let fast = c.timings();
        let slow = h.join().unwrap();
        // fast: 1 ms work, waits until 3 ms + 0.1 latency
        assert_eq!(fast.interactive_gate_ms, 1.0);
        assert!((fast.communication_ms - 2.1).abs() < 1e-12);
        assert!((slow.communication_ms - 0.1).abs() < 1e-12);
        assert_eq!(fast.online_phase_ms, fast.component_sum());
        assert_eq!(slow.online_phase_ms, slow.component_sum());
    }

    #[test]
    fn real_clock_throttles_compute_only() {
        let mut c = PartyClock::real(PartyId::P0, ThrottleConfig::new(3.0).unwrap());
        c.start().unwrap();
        c.compute(Step::Local, 0.0, || spin_for(Duration::from_millis(2)));
        c.exchange(|| Ok(())).unwrap();
        c.stop();
        let t = c.timings();
        assert!(t.local_gates_ms >= 6.0);
        assert!(t.communication_ms < 1.0);
        assert!(t.online_phase_ms >= t.component_sum() * 0.99);
    }

    #[test]
    fn synced_start_charges_late_resume_to_communication() {
        let (a, b) = StartLink::pair();
        let mut early = PartyClock::real_synced(PartyId::P0, ThrottleConfig::default(), a);
        let mut late = PartyClock::real_synced(PartyId::P1, ThrottleConfig::default(), b);
        early.mark_ready().unwrap();
        late.mark_ready().unwrap();
        early.start().unwrap();
        std::thread::sleep(Duration::from_millis(5));
        late.start().unwrap();
        early.stop();
        late.stop();
        let (e, l) = (early.timings(), late.timings());
        assert!(l.communication_ms >= 5.0, "{l:?}");
        assert!(l.online_phase_ms >= 5.0 && e.online_phase_ms >= 5.0);
        assert!((l.online_phase_ms - l.component_sum()).abs() < 0.5);
    }

    #[test]
    fn nothing_charged_before_start() {
        let mut c = PartyClock::real(PartyId::P1, ThrottleConfig::default());
        c.compute(Step::Local, 5.0, || spin_for(Duration::from_millis(1)));
        assert_eq!(c.timings().local_gates_ms, 0.0);
    }
}
