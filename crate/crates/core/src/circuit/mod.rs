//! Layered circuits over a single share world.
//!
//! Gates are numbered topologically: every input of gate `g` has an id below `g`.
//! Arithmetic circuits use `ADD`/`MUL`; Boolean circuits use `XOR`/`AND`/`NOT` and
//! the two constants. Plaintext wire values are ring elements in both worlds
//! (Boolean circuits use the one-bit ring, so XOR is addition and AND is multiplication).

mod builders;
mod layers;
mod plaintext;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use builders::{build_inner_product, build_millionaire, millionaire_inputs, MillionaireVariant};
pub use layers::{assign_layers, Layer, LayerPlan};
pub use plaintext::eval_plaintext;

use crate::error::{Error, Result};
use crate::ring::RingSpec;
use crate::sharing::PartyId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GateId(pub u32);

impl GateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum World {
    #[serde(rename = "A")]
    Arithmetic,
    #[serde(rename = "B")]
    Boolean,
}

impl World {
    pub fn code(self) -> u8 {
        match self {
            World::Arithmetic => 0,
            World::Boolean => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            World::Arithmetic => 'A',
            World::Boolean => 'B',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    InputP0,
    InputP1,
    ConstZero,
    ConstOne,
    Add,
    Mul,
    Xor,
    And,
    Not,
    Output,
}

impl GateKind {
    pub fn arity(self) -> usize {
        use GateKind::*;
        match self {
            InputP0 | InputP1 | ConstZero | ConstOne => 0,
            Not | Output => 1,
            Add | Mul | Xor | And => 2,
        }
    }

    /// MUL, AND and OUTPUT need a communication round.
    pub fn is_interactive(self) -> bool {
        matches!(self, GateKind::Mul | GateKind::And | GateKind::Output)
    }

    pub fn is_input(self) -> bool {
        matches!(self, GateKind::InputP0 | GateKind::InputP1)
    }

    /// Whether the kind may appear in a circuit of `world`.
    pub fn allowed_in(self, world: World) -> bool {
        use GateKind::*;
        match self {
            InputP0 | InputP1 | Output => true,
            Add | Mul => world == World::Arithmetic,
            Xor | And | Not | ConstZero | ConstOne => world == World::Boolean,
        }
    }

    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            InputP0 => "INPUT_P0",
            InputP1 => "INPUT_P1",
            ConstZero => "CONST_ZERO",
            ConstOne => "CONST_ONE",
            Add => "ADD",
            Mul => "MUL",
            Xor => "XOR",
            And => "AND",
            Not => "NOT",
            Output => "OUTPUT",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GateKind::*;
        Ok(match s {
            "INPUT_P0" => InputP0,
            "INPUT_P1" => InputP1,
            "CONST_ZERO" => ConstZero,
            "CONST_ONE" => ConstOne,
            "ADD" => Add,
            "MUL" => Mul,
            "XOR" => Xor,
            "AND" => And,
            "NOT" => Not,
            "OUTPUT" => Output,
            other => return Err(Error::Structural(format!("unknown gate kind {other}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub inputs: Vec<GateId>,
    pub world: World,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InteractiveCounts {
    pub mul: usize,
    pub and: usize,
    pub output: usize,
}

/// A validated circuit. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    inputs: [Vec<GateId>; 2],
    outputs: Vec<GateId>,
    world: World,
    ring: RingSpec,
}

impl Circuit {
    /// Validates and assembles a circuit. For Boolean circuits `ring` is forced to one bit.
    pub fn new(
        world: World,
        ring: RingSpec,
        gates: Vec<Gate>,
        inputs: [Vec<GateId>; 2],
        outputs: Vec<GateId>,
    ) -> Result<Self> {
        let ring = match world {
            World::Arithmetic => ring,
            World::Boolean => RingSpec::new(1)?,
        };
        let c = Self {
            gates,
            inputs,
            outputs,
            world,
            ring,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inputs_of(&self, party: PartyId) -> &[GateId] {
        &self.inputs[party.index()]
    }

    pub fn outputs(&self) -> &[GateId] {
        &self.outputs
    }

    pub fn world(&self) -> World {
        self.world
    }

    /// Ring of plaintext wire values (one bit for Boolean circuits).
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn count_interactive(&self) -> InteractiveCounts {
        let mut n = InteractiveCounts::default();
        for g in &self.gates {
            match g.kind {
                GateKind::Mul => n.mul += 1,
                GateKind::And => n.and += 1,
                GateKind::Output => n.output += 1,
                _ => {}
            }
        }
        n
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Structural(m));
        let mut seen_input = [Vec::new(), Vec::new()];
        for (pos, g) in self.gates.iter().enumerate() {
            if g.id.index() != pos {
                return err(format!("gate at position {pos} carries id {}", g.id));
            }
            if g.world != self.world {
                return err(format!("gate {} is in the wrong share world", g.id));
            }
            if !g.kind.allowed_in(self.world) {
                return err(format!("{} gate {} not allowed in world {}", g.kind, g.id, self.world.letter()));
            }
            if g.inputs.len() != g.kind.arity() {
                return err(format!("{} gate {} has {} inputs", g.kind, g.id, g.inputs.len()));
            }
            if let Some(bad) = g.inputs.iter().find(|i| i.0 >= g.id.0) {
                return err(format!("gate {} reads gate {bad}, which is not earlier", g.id));
            }
            if g.inputs.iter().any(|i| self.gates[i.index()].kind == GateKind::Output) {
                return err(format!("gate {} consumes an OUTPUT gate", g.id));
            }
            match g.kind {
                GateKind::InputP0 => seen_input[0].push(g.id),
                GateKind::InputP1 => seen_input[1].push(g.id),
                _ => {}
            }
        }
        for p in 0..2 {
            let mut declared = self.inputs[p].clone();
            declared.sort();
            if declared != seen_input[p] {
                return err(format!("input map for party {p} does not match INPUT_P{p} gates"));
            }
        }
        let outputs: Vec<GateId> = self
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Output)
            .map(|g| g.id)
            .collect();
        let mut declared = self.outputs.clone();
        declared.sort();
        if declared != outputs {
            return err("output list does not match OUTPUT gates".into());
        }
        // every output must depend on at least one input
        let mut from_input = vec![false; self.gates.len()];
        for g in &self.gates {
            from_input[g.id.index()] =
                g.kind.is_input() || g.inputs.iter().any(|i| from_input[i.index()]);
        }
        if let Some(o) = self.outputs.iter().find(|o| !from_input[o.index()]) {
            return err(format!("output {o} is not reachable from any input"));
        }
        Ok(())
    }

    /// Diagnostic text dump: header line, then `<id> <KIND> [<in1> [<in2>]]` per gate.
    pub fn dump(&self) -> String {
        let mut s = format!(
            "world={} l={} inputs0={} inputs1={} outputs={}\n",
            self.world.letter(),
            self.ring.bit_length(),
            self.inputs[0].len(),
            self.inputs[1].len(),
            self.outputs.len()
        );
        for g in &self.gates {
            write!(s, "{} {}", g.id, g.kind).unwrap();
            for i in &g.inputs {
                write!(s, " {i}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Incremental construction with per-gate checks. Inputs are recorded in creation order.
#[derive(Debug)]
pub struct CircuitBuilder {
    world: World,
    ring: RingSpec,
    gates: Vec<Gate>,
    inputs: [Vec<GateId>; 2],
    outputs: Vec<GateId>,
}

impl CircuitBuilder {
    pub fn new(world: World, ring: RingSpec) -> Self {
        Self {
            world,
            ring,
            gates: Vec::new(),
            inputs: [Vec::new(), Vec::new()],
            outputs: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: GateKind, inputs: &[GateId]) -> Result<GateId> {
        if !kind.allowed_in(self.world) {
            return Err(Error::Structural(format!(
                "{kind} not allowed in world {}",
                self.world.letter()
            )));
        }
        if inputs.len() != kind.arity() {
            return Err(Error::Structural(format!("{kind} takes {} inputs", kind.arity())));
        }
        let id = GateId(self.gates.len() as u32);
        if let Some(bad) = inputs.iter().find(|i| i.0 >= id.0) {
            return Err(Error::Structural(format!("input {bad} does not exist yet")));
        }
        self.gates.push(Gate {
            id,
            kind,
            inputs: inputs.to_vec(),
            world: self.world,
        });
        match kind {
            GateKind::InputP0 => self.inputs[0].push(id),
            GateKind::InputP1 => self.inputs[1].push(id),
            GateKind::Output => self.outputs.push(id),
            _ => {}
        }
        Ok(id)
    }

    pub fn input(&mut self, party: PartyId) -> Result<GateId> {
        let kind = if party == PartyId::P0 {
            GateKind::InputP0
        } else {
            GateKind::InputP1
        };
        self.push(kind, &[])
    }

    pub fn add(&mut self, a: GateId, b: GateId) -> Result<GateId> {
        self.push(GateKind::Add, &[a, b])
    }

    pub fn mul(&mut self, a: GateId, b: GateId) -> Result<GateId> {
        self.push(GateKind::Mul, &[a, b])
    }

    pub fn xor(&mut self, a: GateId, b: GateId) -> Result<GateId> {
        self.push(GateKind::Xor, &[a, b])
    }

    pub fn and(&mut self, a: GateId, b: GateId) -> Result<GateId> {
        self.push(GateKind::And, &[a, b])
    }

    pub fn not(&mut self, a: GateId) -> Result<GateId> {
        self.push(GateKind::Not, &[a])
    }

    pub fn constant(&mut self, one: bool) -> Result<GateId> {
        self.push(if one { GateKind::ConstOne } else { GateKind::ConstZero }, &[])
    }

    pub fn output(&mut self, a: GateId) -> Result<GateId> {
        self.push(GateKind::Output, &[a])
    }

    pub fn finish(self) -> Result<Circuit> {
        Circuit::new(self.world, self.ring, self.gates, self.inputs, self.outputs)
    }
}

pub fn count_interactive(c: &Circuit) -> InteractiveCounts {
    c.count_interactive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_mixed_worlds() {
        let mut b = CircuitBuilder::new(World::Arithmetic, RingSpec::default());
        let x = b.input(PartyId::P0).unwrap();
        let y = b.input(PartyId::P1).unwrap();
        assert!(b.xor(x, y).is_err());
        assert!(b.constant(true).is_err());
        assert!(b.add(x, GateId(7)).is_err());
        let s = b.add(x, y).unwrap();
        b.output(s).unwrap();
        let c = b.finish().unwrap();
        assert_eq!(c.count_interactive(), InteractiveCounts { mul: 0, and: 0, output: 1 });
    }

    #[test]
    fn validate_catches_forward_reference() {
        let gates = vec![
            Gate { id: GateId(0), kind: GateKind::InputP0, inputs: vec![], world: World::Boolean },
            Gate { id: GateId(1), kind: GateKind::Not, inputs: vec![GateId(2)], world: World::Boolean },
            Gate { id: GateId(2), kind: GateKind::Output, inputs: vec![GateId(1)], world: World::Boolean },
        ];
        let r = Circuit::new(
            World::Boolean,
            RingSpec::default(),
            gates,
            [vec![GateId(0)], vec![]],
            vec![GateId(2)],
        );
        assert!(matches!(r, Err(Error::Structural(_))));
    }

    #[test]
    fn unreachable_output_rejected() {
        let mut b = CircuitBuilder::new(World::Boolean, RingSpec::default());
        b.input(PartyId::P0).unwrap();
        let k = b.constant(true).unwrap();
        b.output(k).unwrap();
        assert!(b.finish().is_err());
    }

    #[test]
    fn dump_format() {
        let c = build_inner_product(2, RingSpec::default()).unwrap();
        let d = c.dump();
        let mut lines = d.lines();
        assert_eq!(lines.next(), Some("world=A l=16 inputs0=2 inputs1=2 outputs=1"));
        assert_eq!(lines.next(), Some("0 INPUT_P0"));
        assert!(d.contains("\n4 MUL 0 2\n"));
        assert!(d.ends_with("OUTPUT 6\n"));
        for line in d.lines().skip(1) {
            let kind: GateKind = line.split(' ').nth(1).unwrap().parse().unwrap();
            assert_eq!(line.split(' ').count(), 2 + kind.arity());
        }
    }
}
