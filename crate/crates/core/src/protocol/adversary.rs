//! Classical man-in-the-middle strategies.
//!
//! An adversary sees its side information `e`, a coin drawn from
//! `[0, coin_space())`, and a private memory that persists from the first
//! message to the second. Seeds and tags are the packed integers of
//! [`super::RunOutcome`]. Given the same inputs an adversary must return the
//! same outputs; all randomness comes through the coin so exhaustive
//! experiments can enumerate it.

use std::collections::HashMap;
use std::fmt::Debug;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ProtocolKind, ProtocolParams};
use crate::error::{domain, Error, Result};

pub struct AdversaryView<'a> {
    pub e: u64,
    pub coin: u64,
    pub memory: &'a mut Vec<u64>,
}

pub trait Adversary: Debug + Send + Sync {
    fn name(&self) -> String;

    fn coin_space(&self) -> u64 {
        1
    }

    /// Tampering with Alice's seed in Protocol DW.
    fn tamper_seed(&self, ya: u64, _view: &mut AdversaryView<'_>) -> u64 {
        ya
    }

    /// Tampering with the tagged message: `(Y_B, W)` in Protocol DW, `(Y, W)`
    /// in the one-round protocol. `key` is the already-fixed output (`R_B`
    /// for DW, `R_A` for one-round) in post-application experiments.
    fn tamper_tagged(&self, seed: u64, tag: u64, _key: Option<u64>, _view: &mut AdversaryView<'_>) -> (u64, u64) {
        (seed, tag)
    }
}

/// Passes every message through.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Adversary for Identity {
    fn name(&self) -> String {
        "identity".into()
    }
}

/// Replaces the DW seed by `(ya + delta) mod modulus`, leaving the tagged
/// message untouched; fixed-point-free whenever `delta` is not a multiple of
/// `modulus`.
#[derive(Debug, Clone, Copy)]
pub struct ShiftSeed {
    pub delta: u64,
    pub modulus: u64,
}

impl Adversary for ShiftSeed {
    fn name(&self) -> String {
        format!("shift-seed:{}", self.delta)
    }

    fn tamper_seed(&self, ya: u64, _view: &mut AdversaryView<'_>) -> u64 {
        (ya + self.delta) % self.modulus
    }
}

/// XORs fixed masks into the tagged message.
#[derive(Debug, Clone, Copy)]
pub struct XorTagged {
    pub seed_mask: u64,
    pub tag_mask: u64,
}

impl Adversary for XorTagged {
    fn name(&self) -> String {
        format!("xor:{}:{}", self.seed_mask, self.tag_mask)
    }

    fn tamper_tagged(&self, seed: u64, tag: u64, _key: Option<u64>, _view: &mut AdversaryView<'_>) -> (u64, u64) {
        (seed ^ self.seed_mask, tag ^ self.tag_mask)
    }
}

/// Replaces the tagged message by a uniformly random one taken from the coin.
#[derive(Debug, Clone, Copy)]
pub struct Garbage {
    pub seed_bits: u32,
    pub tag_bits: u32,
}

impl Adversary for Garbage {
    fn name(&self) -> String {
        "garbage".into()
    }

    fn coin_space(&self) -> u64 {
        1u64 << (self.seed_bits + self.tag_bits)
    }

    fn tamper_tagged(&self, _seed: u64, _tag: u64, _key: Option<u64>, view: &mut AdversaryView<'_>) -> (u64, u64) {
        let seed = view.coin & crate::extractors::low_mask(self.seed_bits as usize);
        (seed, view.coin >> self.seed_bits)
    }
}

/// Emits a value outside the message space; exercises the abort path.
#[derive(Debug, Clone, Copy)]
pub struct Malformed;

impl Adversary for Malformed {
    fn name(&self) -> String {
        "malformed".into()
    }

    fn tamper_tagged(&self, _seed: u64, tag: u64, _key: Option<u64>, _view: &mut AdversaryView<'_>) -> (u64, u64) {
        (u64::MAX, tag)
    }
}

/// Deterministic lookup-table strategy. The seed map is indexed by
/// `e·seed_count + ya`; the tagged map is keyed by `(e, ya, seed, tag)`, with
/// `ya` recalled from memory. Missing entries pass the message through.
#[derive(Debug, Clone, Default)]
pub struct TableAdversary {
    pub label: String,
    pub seed_count: u64,
    pub seed_map: Vec<u64>,
    pub tagged_map: HashMap<(u64, u64, u64, u64), (u64, u64)>,
}

impl Adversary for TableAdversary {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn tamper_seed(&self, ya: u64, view: &mut AdversaryView<'_>) -> u64 {
        view.memory.push(ya);
        let idx = (view.e * self.seed_count + ya) as usize;
        self.seed_map.get(idx).copied().unwrap_or(ya)
    }

    fn tamper_tagged(&self, seed: u64, tag: u64, _key: Option<u64>, view: &mut AdversaryView<'_>) -> (u64, u64) {
        let ya = view.memory.first().copied().unwrap_or(0);
        self.tagged_map.get(&(view.e, ya, seed, tag)).copied().unwrap_or((seed, tag))
    }
}

/// Textual adversary selector used by configs and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdversarySpec {
    Identity,
    ShiftSeed(u64),
    Xor(u64, u64),
    FlipTag(u32),
    Garbage,
    Malformed,
}

impl FromStr for AdversarySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64> {
            parts
                .get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Domain(format!("adversary `{s}` needs a numeric argument {i}")))
        };
        Ok(match parts[0] {
            "identity" => AdversarySpec::Identity,
            "shift-seed" => AdversarySpec::ShiftSeed(num(1)?),
            "xor" => AdversarySpec::Xor(num(1)?, num(2)?),
            "flip-tag" => AdversarySpec::FlipTag(num(1)? as u32),
            "garbage" => AdversarySpec::Garbage,
            "malformed" => AdversarySpec::Malformed,
            other => return domain(format!("unknown adversary `{other}`")),
        })
    }
}

impl AdversarySpec {
    pub fn build(&self, params: &ProtocolParams) -> Result<Box<dyn Adversary>> {
        let seed_bits = params.d2;
        let tag_bits = match params.kind {
            ProtocolKind::Dw => params.t,
            ProtocolKind::OneRound => params.v,
        };
        Ok(match *self {
            AdversarySpec::Identity => Box::new(Identity),
            AdversarySpec::ShiftSeed(delta) => match params.kind {
                ProtocolKind::Dw => Box::new(ShiftSeed { delta, modulus: params.seed_count() as u64 }),
                ProtocolKind::OneRound => Box::new(XorTagged { seed_mask: delta, tag_mask: 0 }),
            },
            AdversarySpec::Xor(seed_mask, tag_mask) => Box::new(XorTagged { seed_mask, tag_mask }),
            AdversarySpec::FlipTag(bit) => {
                if bit >= tag_bits {
                    return domain(format!("tag has only {tag_bits} bits"));
                }
                Box::new(XorTagged { seed_mask: 0, tag_mask: 1 << bit })
            }
            AdversarySpec::Garbage => Box::new(Garbage { seed_bits, tag_bits }),
            AdversarySpec::Malformed => Box::new(Malformed),
        })
    }
}
