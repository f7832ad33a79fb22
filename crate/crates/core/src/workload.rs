//! The two benchmark applications and their seeded inputs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{build_inner_product, build_millionaire, millionaire_inputs, Circuit, MillionaireVariant, World};
use crate::error::{Error, Result};
use crate::ring::RingSpec;
use crate::rng::{sub_seed, SeededRng};
use crate::runtime::HelloParams;
use crate::sharing::PartyId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum App {
    /// Dot product of two `l`-bit vectors, arithmetic sharing.
    InnerProduct,
    /// `x > y` on `n`-bit integers, Boolean sharing.
    Millionaire,
}

impl App {
    pub fn code(self) -> u8 {
        match self {
            App::InnerProduct => 1,
            App::Millionaire => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            App::InnerProduct => "innerproduct",
            App::Millionaire => "millionaire",
        }
    }

    pub fn world(self) -> World {
        match self {
            App::InnerProduct => World::Arithmetic,
            App::Millionaire => World::Boolean,
        }
    }
}

impl fmt::Display for App {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for App {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "innerproduct" => Ok(App::InnerProduct),
            "millionaire" => Ok(App::Millionaire),
            other => Err(Error::Usage(format!("unknown app `{other}`"))),
        }
    }
}

/// An application instance: element count (inner product) or bit length (millionaire).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workload {
    pub app: App,
    pub size: usize,
    pub ring: RingSpec,
    pub variant: MillionaireVariant,
}

impl Workload {
    pub fn inner_product(n: usize, ring: RingSpec) -> Self {
        Self {
            app: App::InnerProduct,
            size: n,
            ring,
            variant: MillionaireVariant::default(),
        }
    }

    pub fn millionaire(n_bits: usize, variant: MillionaireVariant) -> Self {
        Self {
            app: App::Millionaire,
            size: n_bits,
            ring: RingSpec::new(1).expect("one-bit ring"),
            variant,
        }
    }

    pub fn with_size(self, size: usize) -> Self {
        Self { size, ..self }
    }

    pub fn build(&self) -> Result<Circuit> {
        match self.app {
            App::InnerProduct => build_inner_product(self.size, self.ring),
            App::Millionaire => build_millionaire(self.size, self.variant),
        }
    }

    /// Uniformly random plaintext inputs of `party` for repetition `rep`.
    pub fn random_inputs(&self, seed: u64, rep: usize, party: PartyId) -> Vec<u64> {
        let mut rng = SeededRng::derive(seed, &format!("inputs/{rep}"), party.index() as u64);
        match self.app {
            App::InnerProduct => (0..self.size).map(|_| rng.ring_element(self.ring)).collect(),
            App::Millionaire => millionaire_inputs(&rng.bits(self.size)),
        }
    }

    /// Parameters both parties must agree on before the online phase.
    pub fn hello(&self, seed: u64) -> HelloParams {
        HelloParams {
            version: HelloParams::VERSION,
            app: self.app.code(),
            world: self.app.world().code(),
            l: self.ring.bit_length() as u16,
            size: self.size as u64,
            variant: match self.app {
                App::InnerProduct => 0,
                App::Millionaire => self.variant.code(),
            },
            seed_commitment: sub_seed(seed, "commit", 0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::eval_plaintext;

    #[test]
    fn inputs_are_seeded_and_in_range() {
        let w = Workload::inner_product(50, RingSpec::default());
        let a = w.random_inputs(1, 0, PartyId::P0);
        assert_eq!(a, w.random_inputs(1, 0, PartyId::P0));
        assert_ne!(a, w.random_inputs(1, 0, PartyId::P1));
        assert_ne!(a, w.random_inputs(1, 1, PartyId::P0));
        assert!(a.iter().all(|&v| v < 65536));
        let m = Workload::millionaire(40, MillionaireVariant::Tree);
        let x = m.random_inputs(3, 0, PartyId::P0);
        assert_eq!(x.len(), 40);
        assert!(x.iter().all(|&b| b <= 1));
        let c = m.build().unwrap();
        assert_eq!(eval_plaintext(&c, &x, &x).unwrap(), vec![0]);
    }

    #[test]
    fn app_names() {
        assert_eq!("millionaire".parse::<App>().unwrap(), App::Millionaire);
        assert!("psi".parse::<App>().is_err());
    }
}
