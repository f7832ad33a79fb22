//! Both parties in one process, each on its own thread, over an in-memory link.

use std::thread;

use super::session::{HelloParams, Session, SessionOptions};
use super::transport::{MemTransport, Recording, Transcript};
use crate::circuit::{assign_layers, Circuit};
use crate::error::Result;
use crate::preprocessing::TriplePool;
use crate::profiler::{ClockKind, ClockMode, PartyClock, StartLink, StepTimings, ThrottleConfig, VirtualLink};
use crate::rng::SeededRng;
use crate::sharing::PartyId;

#[derive(Debug, Clone, Copy)]
pub struct LoopbackConfig {
    pub throttles: [ThrottleConfig; 2],
    pub clock: ClockMode,
    pub options: SessionOptions,
    /// Root seed for the input-sharing masks.
    pub seed: u64,
    /// Repetition index, mixed into the mask stream.
    pub rep: usize,
    /// When set, both sides exchange HELLO first.
    pub hello: Option<HelloParams>,
}

impl Default for LoopbackConfig {
    fn default() -> Self {
        Self {
            throttles: [ThrottleConfig::default(); 2],
            clock: ClockMode::real(),
            options: SessionOptions::default(),
            seed: 0,
            rep: 0,
            hello: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoopbackRun {
    pub outputs: [Vec<u64>; 2],
    pub timings: [StepTimings; 2],
    pub transcripts: [Transcript; 2],
}

enum Link {
    Virtual(VirtualLink),
    Start(StartLink),
}

/// Label of the mask stream used for input sharing.
pub fn mask_rng(seed: u64, rep: usize, party: PartyId) -> SeededRng {
    SeededRng::derive(seed, &format!("masks/{rep}"), party.index() as u64)
}

/// Runs one execution with party `i` holding `inputs[i]` and `pools[i]`.
pub fn run_loopback(
    circuit: &Circuit,
    inputs: [&[u64]; 2],
    pools: [&mut TriplePool; 2],
    cfg: &LoopbackConfig,
) -> Result<LoopbackRun> {
    let plan = assign_layers(circuit)?;
    let (t0, t1) = MemTransport::pair();
    let mut links = match cfg.clock.kind {
        ClockKind::Virtual => {
            let (a, b) = VirtualLink::pair();
            [Some(Link::Virtual(a)), Some(Link::Virtual(b))]
        }
        ClockKind::Real => {
            let (a, b) = StartLink::pair();
            [Some(Link::Start(a)), Some(Link::Start(b))]
        }
    };
    let [pool0, pool1] = pools;
    let party = |id: PartyId, transport: MemTransport, pool: &mut TriplePool, link: Option<Link>| {
        let throttle = cfg.throttles[id.index()];
        let clock = match link {
            Some(Link::Virtual(link)) => PartyClock::virtual_clock(id, throttle, cfg.clock.latency_ms, link),
            Some(Link::Start(link)) => PartyClock::real_synced(id, throttle, link),
            None => PartyClock::real(id, throttle),
        };
        let mut transport = Recording::new(transport);
        let outcome = {
            let mut s = Session::new(id, &mut transport, circuit, &plan, pool, clock, mask_rng(cfg.seed, cfg.rep, id))
                .with_options(cfg.options);
            if let Some(h) = &cfg.hello {
                s.handshake(h)?;
            }
            s.run_online(inputs[id.index()])?
        };
        let (_, transcript) = transport.into_parts();
        Ok::<_, crate::Error>((outcome, transcript))
    };
    let link1 = links[1].take();
    let link0 = links[0].take();
    let (r0, r1) = thread::scope(|scope| {
        let h1 = scope.spawn(|| party(PartyId::P1, t1, pool1, link1));
        let r0 = party(PartyId::P0, t0, pool0, link0);
        let r1 = h1.join().expect("party 1 thread panicked");
        (r0, r1)
    });
    let ((o0, tr0), (o1, tr1)) = (r0?, r1?);
    Ok(LoopbackRun {
        outputs: [o0.outputs, o1.outputs],
        timings: [o0.timings, o1.timings],
        transcripts: [tr0, tr1],
    })
}
