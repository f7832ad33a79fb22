use super::frame::{Frame, MsgType};
use super::payload::{decode_values, encode_values, LayerPayload};
use super::transport::Transport;
use crate::circuit::{Circuit, GateId, GateKind, LayerPlan, World};
use crate::error::{domain, protocol, Error, Result};
use crate::preprocessing::{budget_for, TriplePool};
use crate::profiler::{CostTable, PartyClock, Step, StepTimings};
use crate::ring::RingSpec;
use crate::rng::SeededRng;
use crate::sharing::{arith_share, bool_share, BitVector, PartyId};

/// HELLO payload: `version u16 | app u8 | world u8 | l u16 | size u64 | variant u8 | seed u64`,
/// all little-endian, 23 bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HelloParams {
    pub version: u16,
    pub app: u8,
    pub world: u8,
    pub l: u16,
    pub size: u64,
    pub variant: u8,
    pub seed_commitment: u64,
}

impl HelloParams {
    pub const VERSION: u16 = 1;
    pub const LEN: usize = 23;

    pub fn encode(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(Self::LEN);
        v.extend_from_slice(&self.version.to_le_bytes());
        v.push(self.app);
        v.push(self.world);
        v.extend_from_slice(&self.l.to_le_bytes());
        v.extend_from_slice(&self.size.to_le_bytes());
        v.push(self.variant);
        v.extend_from_slice(&self.seed_commitment.to_le_bytes());
        v
    }

    pub fn decode(b: &[u8]) -> Result<Self> {
        if b.len() != Self::LEN {
            return Err(protocol(format!("HELLO payload is {} bytes, expected {}", b.len(), Self::LEN)));
        }
        let u16_at = |i: usize| u16::from_le_bytes([b[i], b[i + 1]]);
        let u64_at = |i: usize| u64::from_le_bytes(b[i..i + 8].try_into().expect("8 bytes"));
        Ok(Self {
            version: u16_at(0),
            app: b[2],
            world: b[3],
            l: u16_at(4),
            size: u64_at(6),
            variant: b[14],
            seed_commitment: u64_at(15),
        })
    }

    /// First field that differs, as `(name, ours, theirs)`.
    fn first_mismatch(&self, peer: &Self) -> Option<(&'static str, String, String)> {
        let fields: [(&'static str, u64, u64); 7] = [
            ("version", self.version.into(), peer.version.into()),
            ("app", self.app.into(), peer.app.into()),
            ("world", self.world.into(), peer.world.into()),
            ("l", self.l.into(), peer.l.into()),
            ("size", self.size, peer.size),
            ("variant", self.variant.into(), peer.variant.into()),
            ("seed", self.seed_commitment, peer.seed_commitment),
        ];
        fields
            .into_iter()
            .find(|(_, a, b)| a != b)
            .map(|(n, a, b)| (n, a.to_string(), b.to_string()))
    }
}

/// Exchanges HELLO frames and aborts on the first mismatching field.
pub fn handshake(transport: &mut dyn Transport, local: &HelloParams) -> Result<HelloParams> {
    transport.send(&Frame::new(MsgType::Hello, 0, local.encode()))?;
    let f = transport.recv()?;
    if f.msg_type != MsgType::Hello {
        return Err(protocol(format!("expected HELLO, got {:?}", f.msg_type)));
    }
    let peer = HelloParams::decode(&f.payload)?;
    if let Some((field, local, peer)) = local.first_mismatch(&peer) {
        return Err(Error::Handshake { field, local, peer });
    }
    Ok(peer)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SessionOptions {
    /// Charge input-share distribution to the online phase.
    pub time_input_sharing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnlineOutcome {
    pub outputs: Vec<u64>,
    pub timings: StepTimings,
}

/// One party's view of one circuit evaluation.
///
/// Each round runs four steps: local gates of the previous layer, masking and
/// serialization of this layer's interactive gates, the blocking exchange, and
/// finishing the layer from the opened values.
pub struct Session<'a> {
    party: PartyId,
    transport: &'a mut dyn Transport,
    circuit: &'a Circuit,
    plan: &'a LayerPlan,
    pool: &'a mut TriplePool,
    clock: PartyClock,
    mask_rng: SeededRng,
    options: SessionOptions,
    wires: Vec<u64>,
    evaluated: Vec<bool>,
}

impl<'a> Session<'a> {
    pub fn new(
        party: PartyId,
        transport: &'a mut dyn Transport,
        circuit: &'a Circuit,
        plan: &'a LayerPlan,
        pool: &'a mut TriplePool,
        clock: PartyClock,
        mask_rng: SeededRng,
    ) -> Self {
        Self {
            party,
            transport,
            circuit,
            plan,
            pool,
            clock,
            mask_rng,
            options: SessionOptions::default(),
            wires: vec![0; circuit.len()],
            evaluated: vec![false; circuit.len()],
        }
    }

    pub fn with_options(mut self, options: SessionOptions) -> Self {
        self.options = options;
        self
    }

    pub fn party(&self) -> PartyId {
        self.party
    }

    /// This party's share on `g` (the plaintext for reconstructed OUTPUT gates).
    pub fn wire(&self, g: GateId) -> Option<u64> {
        self.evaluated[g.index()].then(|| self.wires[g.index()])
    }

    pub fn handshake(&mut self, params: &HelloParams) -> Result<HelloParams> {
        handshake(self.transport, params)
    }

    /// Shares this party's inputs and installs both sides' input shares.
    pub fn distribute_inputs(&mut self, plain: &[u64]) -> Result<()> {
        let ring = self.circuit.ring();
        let want = self.circuit.inputs_of(self.party).len();
        if plain.len() != want {
            return Err(domain(format!(
                "{} supplied {} inputs, circuit expects {want}",
                self.party,
                plain.len()
            )));
        }
        let cost = local_cost(self.circuit.world(), plain.len(), &self.clock.throttle().calibration);
        let rng = &mut self.mask_rng;
        let world = self.circuit.world();
        let (keep, send) = self.clock.compute(Step::Local, cost, || -> Result<(Vec<u64>, Vec<u64>)> {
            match world {
                World::Arithmetic => {
                    let mut keep = Vec::with_capacity(plain.len());
                    let mut send = Vec::with_capacity(plain.len());
                    for &x in plain {
                        let (h, p) = arith_share(x, ring, rng)?;
                        keep.push(h.value);
                        send.push(p.value);
                    }
                    Ok((keep, send))
                }
                World::Boolean => {
                    if plain.iter().any(|&b| b > 1) {
                        return Err(domain("Boolean inputs must be 0 or 1"));
                    }
                    let x = BitVector::from_bools(plain.iter().map(|&b| b == 1));
                    let (h, p) = bool_share(&x, rng);
                    Ok((h.bits.iter().map(u64::from).collect(), p.bits.iter().map(u64::from).collect()))
                }
            }
        })?;
        self.distribute_shares(&keep, &send)
    }

    /// Installs `keep` on our input gates, sends `send` to the peer in one
    /// INPUT_SHARE frame, and installs what the peer sends on its input gates.
    pub fn distribute_shares(&mut self, keep: &[u64], send: &[u64]) -> Result<()> {
        let (world, ring) = (self.circuit.world(), self.circuit.ring());
        let own = self.circuit.inputs_of(self.party);
        if keep.len() != own.len() || send.len() != own.len() {
            return Err(domain("share vectors do not match this party's input gates"));
        }
        for (g, &v) in own.iter().zip(keep) {
            self.wires[g.index()] = ring.check(v)?;
            self.evaluated[g.index()] = true;
        }
        let payload = self
            .clock
            .compute(Step::Interactive, 0.0, || encode_values(send.iter().copied(), world, ring));
        self.clock.mark_ready()?;
        self.transport.send(&Frame::new(MsgType::InputShare, 0, payload))?;
        let transport = &mut self.transport;
        let f = self.clock.exchange(|| transport.recv())?;
        if f.msg_type != MsgType::InputShare || f.layer_id != 0 {
            return Err(protocol(format!(
                "expected INPUT_SHARE for layer 0, got {:?} for layer {}",
                f.msg_type, f.layer_id
            )));
        }
        let theirs = self.circuit.inputs_of(self.party.peer());
        let vals = decode_values(&f.payload, world, ring, theirs.len())?;
        for (g, v) in theirs.iter().zip(vals) {
            self.wires[g.index()] = v;
            self.evaluated[g.index()] = true;
        }
        Ok(())
    }

    /// Shares inputs, then evaluates every layer. Input sharing is timed only
    /// when [`SessionOptions::time_input_sharing`] is set.
    pub fn run_online(&mut self, plain_inputs: &[u64]) -> Result<OnlineOutcome> {
        if self.options.time_input_sharing {
            self.clock.start()?;
        }
        self.distribute_inputs(plain_inputs)?;
        self.execute()
    }

    /// Evaluates all layers on already distributed input shares.
    pub fn execute(&mut self) -> Result<OnlineOutcome> {
        let budget = budget_for(self.circuit);
        let needed = match self.circuit.world() {
            World::Arithmetic => budget.arith,
            World::Boolean => budget.bool,
        };
        self.pool.reserve(needed)?;
        if let Some(g) = self.circuit.gates().iter().find(|g| g.kind.is_input() && !self.evaluated[g.id.index()]) {
            return Err(domain(format!("input gate {} has no share; distribute inputs first", g.id)));
        }

        let Session {
            party,
            transport,
            circuit,
            plan,
            pool,
            clock,
            wires,
            evaluated,
            ..
        } = self;
        let (party, circuit, plan) = (*party, *circuit, *plan);
        let (world, ring) = (circuit.world(), circuit.ring());
        let costs = clock.throttle().calibration;

        let last = plan.layers.len() - 1;
        // per-layer bookkeeping happens before the clock starts
        let locals: Vec<Vec<GateId>> = plan.layers.iter().map(|l| non_input(circuit, &l.local)).collect();
        let n_outputs: Vec<usize> = plan
            .layers
            .iter()
            .map(|l| l.interactive.iter().filter(|g| circuit.gate(**g).kind == GateKind::Output).count())
            .collect();
        clock.start()?;

        for layer_idx in 1..=last {
            let layer = &plan.layers[layer_idx];

            // step 1: local gates of the previous layer
            let locals = &locals[layer_idx - 1];
            clock.compute(Step::Local, local_cost(world, locals.len(), &costs), || {
                eval_local(circuit, party, ring, locals, wires, evaluated)
            });
            if layer.interactive.is_empty() {
                continue;
            }

            // step 2: mask operands, stage output shares, serialize, send
            let n_out = n_outputs[layer_idx];
            let n_mul = layer.interactive.len() - n_out;
            let prepare = costs.interactive_prepare * layer.interactive.len() as f64;
            let triples = clock.compute(Step::Interactive, prepare, || -> Result<Vec<(u64, u64, u64)>> {
                let mut mine = LayerPayload {
                    masked: Vec::with_capacity(n_mul),
                    outputs: Vec::with_capacity(n_out),
                };
                let mut triples = Vec::with_capacity(n_mul);
                for &g in &layer.interactive {
                    let gate = circuit.gate(g);
                    let x = wires[gate.inputs[0].index()];
                    if gate.kind == GateKind::Output {
                        mine.outputs.push(x);
                        continue;
                    }
                    let y = wires[gate.inputs[1].index()];
                    let t = take_triple(pool, world)?;
                    mine.masked.push((ring.sub(x, t.0), ring.sub(y, t.1)));
                    triples.push(t);
                }
                let frame = Frame::new(MsgType::LayerData, layer_idx as u32, mine.encode(world, ring));
                transport.send(&frame)?;
                Ok(triples)
            })?;

            // step 3: wait for the peer's layer data
            let frame = clock.exchange(|| transport.recv())?;
            if frame.msg_type != MsgType::LayerData || frame.layer_id != layer_idx as u32 {
                return Err(protocol(format!(
                    "expected LAYER_DATA for layer {layer_idx}, got {:?} for layer {}",
                    frame.msg_type, frame.layer_id
                )));
            }

            // step 4: open masked values, finish multiplications, reconstruct outputs
            let finish = costs.layer_finish * layer.interactive.len() as f64;
            clock.compute(Step::Finish, finish, || -> Result<()> {
                let theirs = LayerPayload::decode(&frame.payload, world, ring, n_mul, n_out)?;
                let mut masked = theirs.masked.iter().zip(&triples);
                let mut outs = theirs.outputs.iter();
                for &g in &layer.interactive {
                    let gate = circuit.gate(g);
                    let v = if gate.kind == GateKind::Output {
                        ring.add(wires[gate.inputs[0].index()], *outs.next().expect("decoded count"))
                    } else {
                        let (&(pd, pe), &(a, b, c)) = masked.next().expect("decoded count");
                        let x = wires[gate.inputs[0].index()];
                        let y = wires[gate.inputs[1].index()];
                        let d = ring.add(ring.sub(x, a), pd);
                        let e = ring.add(ring.sub(y, b), pe);
                        beaver_finish(party, ring, d, e, a, b, c)
                    };
                    wires[g.index()] = v;
                    evaluated[g.index()] = true;
                }
                Ok(())
            })?;
        }

        // local gates hanging off the final layer, if any
        let tail = &locals[last];
        if !tail.is_empty() {
            clock.compute(Step::Local, local_cost(world, tail.len(), &costs), || {
                eval_local(circuit, party, ring, tail, wires, evaluated)
            });
        }
        clock.stop();

        transport.send(&Frame::new(MsgType::Done, 0, Vec::new()))?;
        let done = transport.recv()?;
        if done.msg_type != MsgType::Done {
            return Err(protocol(format!("expected DONE, got {:?}", done.msg_type)));
        }
        let outputs = circuit.outputs().iter().map(|o| wires[o.index()]).collect();
        Ok(OnlineOutcome {
            outputs,
            timings: clock.timings(),
        })
    }
}

/// Share of `x * y` from opened `d = x - a`, `e = y - b` and a triple share.
///
/// `z_i = i*d*e + d*b_i + e*a_i + c_i`; in the one-bit ring this is the AND gate.
pub fn beaver_finish(party: PartyId, ring: RingSpec, d: u64, e: u64, a: u64, b: u64, c: u64) -> u64 {
    let mut z = ring.add(ring.add(ring.mul(d, b), ring.mul(e, a)), c);
    if party == PartyId::P1 {
        z = ring.add(z, ring.mul(d, e));
    }
    z
}

fn take_triple(pool: &mut TriplePool, world: World) -> Result<(u64, u64, u64)> {
    match world {
        World::Arithmetic => pool.take_arith().map(|t| (t.a, t.b, t.c)),
        World::Boolean => pool.take_bool().map(|(a, b, c)| (u64::from(a), u64::from(b), u64::from(c))),
    }
}

fn non_input(c: &Circuit, ids: &[GateId]) -> Vec<GateId> {
    ids.iter().copied().filter(|g| !c.gate(*g).kind.is_input()).collect()
}

fn local_cost(world: World, n: usize, costs: &CostTable) -> f64 {
    match world {
        World::Arithmetic => costs.local_arith_gate * n as f64,
        World::Boolean => costs.local_bool_word * n.div_ceil(64) as f64,
    }
}

fn eval_local(
    c: &Circuit,
    party: PartyId,
    ring: RingSpec,
    ids: &[GateId],
    wires: &mut [u64],
    evaluated: &mut [bool],
) {
    // constants: P0 holds the plaintext, P1 holds zero
    let is_p0 = u64::from(party == PartyId::P0);
    for &g in ids {
        let gate = c.gate(g);
        let arg = |k: usize| wires[gate.inputs[k].index()];
        let v = match gate.kind {
            GateKind::Add | GateKind::Xor => ring.add(arg(0), arg(1)),
            GateKind::Not => arg(0) ^ is_p0,
            GateKind::ConstZero => 0,
            GateKind::ConstOne => is_p0,
            other => unreachable!("{other} is not a local gate"),
        };
        wires[g.index()] = v;
        evaluated[g.index()] = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hello_layout() {
        let h = HelloParams {
            version: 1,
            app: 2,
            world: 1,
            l: 16,
            size: 0x0102,
            variant: 1,
            seed_commitment: 0xAABB,
        };
        let b = h.encode();
        assert_eq!(b.len(), 23);
        assert_eq!(&b[..8], &[1, 0, 2, 1, 16, 0, 0x02, 0x01]);
        assert_eq!(b[14], 1);
        assert_eq!(&b[15..17], &[0xBB, 0xAA]);
        assert_eq!(HelloParams::decode(&b).unwrap(), h);
        assert!(HelloParams::decode(&b[..22]).is_err());
    }

    #[test]
    fn beaver_worked_example() {
        // x=3, y=5, a=2, b=7, c=14 in Z_2^16: d=1, e=65534, product 15
        let ring = RingSpec::new(16).unwrap();
        let (d, e) = (ring.sub(3, 2), ring.sub(5, 7));
        assert_eq!((d, e), (1, 65534));
        // split the triple as a=(2,0), b=(3,4), c=(10,4)
        let z0 = beaver_finish(PartyId::P0, ring, d, e, 2, 3, 10);
        let z1 = beaver_finish(PartyId::P1, ring, d, e, 0, 4, 4);
        assert_eq!(ring.add(z0, z1), 15);
        assert_eq!(ring.mul(3, 5), 15);
    }

    #[test]
    fn beaver_and_truth_table() {
        let ring = RingSpec::new(1).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                    let c = a & b;
                    let (d, e) = (x ^ a, y ^ b);
                    // party 0 holds the whole triple, party 1 zero shares
                    let z = beaver_finish(PartyId::P0, ring, d, e, a, b, c)
                        ^ beaver_finish(PartyId::P1, ring, d, e, 0, 0, 0);
                    assert_eq!(z, x & y);
                }
            }
        }
    }
}
