use rand::Rng;

use super::adversary::{Adversary, AdversaryView};
use super::rng::{stream, ROLE_ADVERSARY, ROLE_ALICE, ROLE_BOB, ROLE_SOURCE};
use super::wire;
use super::{ProtocolKind, ProtocolParams, RunOutcome};
use crate::error::{domain, Error, Result};
use crate::extractors::{seed_encodings, StrongExtParams};
use crate::field::{BinaryField, FieldSpec, FpVector};
use crate::mac::{mac_key_derive, mac_tag_packed, MacKey, MacParams};
use crate::source::Source;

/// Precomputed tables for Protocol DW.
///
/// The strong extractor reads the source index `x ∈ [0, p^n)` as a bit string:
/// `x1` is its low `d2` bits and `x2` the next `d2` bits, both elements of
/// `F_{2^d2}`, and `R = [Y_B·x1 + x2]_1^m`.
#[derive(Debug, Clone)]
pub struct DwContext {
    params: ProtocolParams,
    field: FieldSpec,
    encodings: Vec<Vec<u32>>,
    mac: MacParams,
    ext: StrongExtParams,
    ext_field: BinaryField,
}

impl DwContext {
    pub fn new(params: ProtocolParams) -> Result<Self> {
        if params.kind != ProtocolKind::Dw {
            return domain("DW context needs DW parameters");
        }
        let nm = params.nm()?;
        let encodings = seed_encodings(&nm)?.into_iter().map(FpVector::into_coeffs).collect();
        let ext = params.ext()?;
        Ok(DwContext {
            params,
            field: nm.field(),
            encodings,
            mac: params.mac()?,
            ext,
            ext_field: ext.field()?,
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn mac(&self) -> &MacParams {
        &self.mac
    }

    pub fn seed_count(&self) -> u64 {
        self.encodings.len() as u64
    }

    pub fn source_count(&self) -> u64 {
        self.params.source_count() as u64
    }

    pub fn yb_count(&self) -> u64 {
        1 << self.params.d2
    }

    /// `nmExt(x, ya)` on indices.
    pub fn z(&self, x: u64, ya: u64) -> u32 {
        let p = self.field.p() as u64;
        let enc = &self.encodings[ya as usize];
        let mut rest = x;
        let mut acc = 0u64;
        for &c in enc {
            acc = (acc + (rest % p) * c as u64) % p;
            rest /= p;
        }
        acc as u32
    }

    /// `Ext(x, yb)`.
    pub fn ext_output(&self, x: u64, yb: u64) -> u64 {
        let half = self.params.d2 as usize;
        let mask = crate::extractors::low_mask(half);
        let z = self.ext.eval_packed(&self.ext_field, x & mask, (x >> half) & mask, yb);
        self.ext.key_of(z)
    }

    pub fn key(&self, z: u32) -> MacKey {
        mac_key_derive(z as u64, &self.mac).expect("z < p")
    }

    /// `MAC(z, yb)`.
    pub fn tag(&self, z: u32, yb: u64) -> u64 {
        mac_tag_packed(&self.mac, self.key(z), yb).expect("yb has d2 bits")
    }

    fn x_index(&self, x: &FpVector) -> Result<u64> {
        if x.field() != self.field || x.len() != self.params.n {
            return domain(format!("source must lie in F_{}^{}", self.field.p(), self.params.n));
        }
        Ok(x.index())
    }

    fn seed_index(&self, y: &FpVector) -> Result<u64> {
        if y.field() != self.field || y.len() != self.params.n / 2 {
            return domain(format!("seed must lie in F_{}^{}", self.field.p(), self.params.n / 2));
        }
        Ok(y.index())
    }

    pub fn seed_vector(&self, ya: u64) -> FpVector {
        FpVector::from_index(self.field, self.params.n / 2, ya)
    }

    /// One execution with every random choice fixed. `post` hands `R_B` to
    /// the adversary's second tampering step.
    #[allow(clippy::too_many_arguments)]
    pub fn execute(
        &self,
        x: u64,
        e: u64,
        ya: u64,
        yb: u64,
        coin: u64,
        adversary: &dyn Adversary,
        post: bool,
    ) -> Result<RunOutcome> {
        let d2 = self.params.d2;
        let t = self.params.t;
        let mut memory = Vec::new();
        let mut view = AdversaryView { e, coin, memory: &mut memory };

        // step 1
        let alice = AliceState { x, ya, z: self.z(x, ya) };
        let msg1 = wire::encode_seed_message(&self.seed_vector(ya));
        let sent = wire::decode_seed_message(self.field, self.params.n / 2, &msg1)?.index();
        let forged = adversary.tamper_seed(sent, &mut view);
        if forged >= self.seed_count() {
            return Err(Error::Adversary(format!("seed index {forged} out of range")));
        }
        let msg1 = wire::encode_seed_message(&self.seed_vector(forged));
        let ya_prime = wire::decode_seed_message(self.field, self.params.n / 2, &msg1)?.index();

        // step 2
        let bob = bob_step(self, x, ya_prime, yb);
        let msg2 = wire::encode_tagged_message(yb, d2, bob.1, t)?;
        let (yb_sent, w_sent) = wire::decode_tagged_message(d2, t, &msg2)?;
        let key = post.then_some(bob.0.r_b);
        let (yb_forged, w_forged) = adversary.tamper_tagged(yb_sent, w_sent, key, &mut view);
        let msg2 = wire::encode_tagged_message(yb_forged, d2, w_forged, t)?;
        let (yb_prime, w_prime) = wire::decode_tagged_message(d2, t, &msg2)?;

        // step 3
        let r_a = finish(self, &alice, yb_prime, w_prime);
        Ok(RunOutcome {
            ya,
            ya_prime,
            yb: Some(yb),
            yb_prime: Some(yb_prime),
            w: bob.1,
            w_prime,
            r_a,
            r_b: Some(bob.0.r_b),
            key_derived: bob.0.key_derived,
            key_confirmed: r_a.is_some(),
        })
    }
}

/// Alice's state between steps 1 and 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliceState {
    x: u64,
    ya: u64,
    z: u32,
}

impl AliceState {
    pub fn ya(&self) -> u64 {
        self.ya
    }

    /// `Z = nmExt(X, Y_A)`.
    pub fn z(&self) -> u32 {
        self.z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BobOutput {
    pub r_b: u64,
    pub key_derived: bool,
}

pub fn alice_round1_with_seed(ctx: &DwContext, x: &FpVector, ya: &FpVector) -> Result<(AliceState, FpVector)> {
    let xi = ctx.x_index(x)?;
    let yi = ctx.seed_index(ya)?;
    Ok((AliceState { x: xi, ya: yi, z: ctx.z(xi, yi) }, ya.clone()))
}

/// Step 1: sample `Y_A` uniformly and cache `Z = nmExt(X, Y_A)`.
pub fn alice_round1<R: Rng + ?Sized>(ctx: &DwContext, x: &FpVector, rng: &mut R) -> Result<(AliceState, FpVector)> {
    let ya = ctx.seed_vector(rng.random_range(0..ctx.seed_count()));
    alice_round1_with_seed(ctx, x, &ya)
}

fn bob_step(ctx: &DwContext, x: u64, ya_prime: u64, yb: u64) -> (BobOutput, u64) {
    let z_prime = ctx.z(x, ya_prime);
    let w = ctx.tag(z_prime, yb);
    (BobOutput { r_b: ctx.ext_output(x, yb), key_derived: true }, w)
}

pub fn bob_respond_with_seed(ctx: &DwContext, x: &FpVector, ya_prime: &FpVector, yb: u64) -> Result<(BobOutput, (u64, u64))> {
    let xi = ctx.x_index(x)?;
    let yi = ctx.seed_index(ya_prime)?;
    if yb >= ctx.yb_count() {
        return domain(format!("Y_B must have {} bits", ctx.params.d2));
    }
    let (out, w) = bob_step(ctx, xi, yi, yb);
    Ok((out, (yb, w)))
}

/// Step 2: sample `Y_B`, answer with `(Y_B, MAC(nmExt(X, Y'_A), Y_B))` and
/// output `R_B = Ext(X, Y_B)`.
pub fn bob_respond<R: Rng + ?Sized>(
    ctx: &DwContext,
    x: &FpVector,
    ya_prime: &FpVector,
    rng: &mut R,
) -> Result<(BobOutput, (u64, u64))> {
    let yb = rng.random_range(0..ctx.yb_count());
    bob_respond_with_seed(ctx, x, ya_prime, yb)
}

fn finish(ctx: &DwContext, state: &AliceState, yb_prime: u64, w_prime: u64) -> Option<u64> {
    (ctx.tag(state.z, yb_prime) == w_prime).then(|| ctx.ext_output(state.x, yb_prime))
}

/// Step 3: `R_A = Ext(X, Y'_B)` if `W'` verifies under `Z`, else ⊥.
pub fn alice_finish(ctx: &DwContext, state: &AliceState, received: (u64, u64)) -> Option<u64> {
    if received.0 >= ctx.yb_count() {
        return None;
    }
    finish(ctx, state, received.0, received.1)
}

/// One randomized run: `(x, e)` from the source stream, seeds from the Alice
/// and Bob streams, and the adversary coin from its own stream, all keyed by
/// `(master_seed, trial)`.
pub fn run_dw(
    ctx: &DwContext,
    source: &Source,
    adversary: &dyn Adversary,
    master_seed: u64,
    trial: u64,
    post: bool,
) -> Result<RunOutcome> {
    if source.x_count() != ctx.source_count() {
        return domain(format!("source has {} values, protocol expects {}", source.x_count(), ctx.source_count()));
    }
    let (x, e) = source.sample(&mut stream(master_seed, ROLE_SOURCE, trial));
    let ya = stream(master_seed, ROLE_ALICE, trial).random_range(0..ctx.seed_count());
    let yb = stream(master_seed, ROLE_BOB, trial).random_range(0..ctx.yb_count());
    let coin = stream(master_seed, ROLE_ADVERSARY, trial).random_range(0..adversary.coin_space());
    ctx.execute(x, e, ya, yb, coin, adversary, post)
}
