use super::{Circuit, GateId};
use crate::error::{Error, Result};

/// Gates of one layer, each list in ascending id order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layer {
    pub local: Vec<GateId>,
    pub interactive: Vec<GateId>,
}

/// Round structure of a circuit.
///
/// Inputs and constants sit in layer 0. A local gate joins the layer of its
/// latest producer; an interactive gate opens the layer after it. Every layer
/// holding an interactive gate costs one synchronization barrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPlan {
    pub layer_of: Vec<u32>,
    pub layers: Vec<Layer>,
    pub round_count: usize,
}

impl LayerPlan {
    pub fn layer(&self, g: GateId) -> u32 {
        self.layer_of[g.index()]
    }

    /// Indices of layers that carry interactive gates, ascending.
    pub fn rounds(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.interactive.is_empty())
            .map(|(i, _)| i)
    }
}

pub fn assign_layers(c: &Circuit) -> Result<LayerPlan> {
    let mut layer_of = vec![0u32; c.len()];
    let mut layers: Vec<Layer> = vec![Layer::default()];
    for g in c.gates() {
        let mut base = 0u32;
        for i in &g.inputs {
            if i.0 >= g.id.0 {
                return Err(Error::Structural(format!(
                    "cycle or forward edge: gate {} reads {i}",
                    g.id
                )));
            }
            base = base.max(layer_of[i.index()]);
        }
        let l = if g.kind.is_interactive() { base + 1 } else { base };
        layer_of[g.id.index()] = l;
        let l = l as usize;
        if layers.len() <= l {
            layers.resize_with(l + 1, Layer::default);
        }
        if g.kind.is_interactive() {
            layers[l].interactive.push(g.id);
        } else {
            layers[l].local.push(g.id);
        }
    }
    let round_count = layers.iter().filter(|l| !l.interactive.is_empty()).count();
    Ok(LayerPlan {
        layer_of,
        layers,
        round_count,
    })
}
