use rand::Rng;

use super::adversary::{Adversary, AdversaryView};
use super::wire;
use super::{ProtocolKind, ProtocolParams, RunOutcome};
use crate::error::{domain, Error, Result};
use crate::extractors::StrongExtParams;
use crate::field::BinaryField;

/// The one-round protocol over `F_{2^(n/2)}`. A source value `x ∈ [0, 2^n)`
/// splits as `x1 = x mod 2^(n/2)`, `x2 = x >> n/2`.
#[derive(Debug, Clone)]
pub struct OneRoundContext {
    params: ProtocolParams,
    ext: StrongExtParams,
    field: BinaryField,
}

impl OneRoundContext {
    pub fn new(params: ProtocolParams) -> Result<Self> {
        if params.kind != ProtocolKind::OneRound {
            return domain("one-round context needs one-round parameters");
        }
        let ext = params.ext()?;
        Ok(OneRoundContext { params, ext, field: ext.field()? })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn half(&self) -> u32 {
        (self.params.n / 2) as u32
    }

    pub fn seed_count(&self) -> u64 {
        1 << self.half()
    }

    pub fn source_count(&self) -> u64 {
        1 << self.params.n
    }

    pub fn split(&self, x: u64) -> (u64, u64) {
        let mask = self.seed_count() - 1;
        (x & mask, (x >> self.half()) & mask)
    }

    /// `Z = y·x1 + x2`.
    pub fn z(&self, x: u64, y: u64) -> u64 {
        let (x1, x2) = self.split(x);
        self.ext.eval_packed(&self.field, x1, x2, y)
    }

    pub fn tag(&self, z: u64) -> u64 {
        self.ext.tag_of(z)
    }

    pub fn key(&self, z: u64) -> u64 {
        self.ext.key_of(z)
    }

    pub fn execute(&self, x: u64, e: u64, y: u64, coin: u64, adversary: &dyn Adversary, post: bool) -> Result<RunOutcome> {
        let (half, v) = (self.half(), self.params.v);
        let z = self.z(x, y);
        let (w, r_a) = (self.tag(z), self.key(z));
        let msg = wire::encode_tagged_message(y, half, w, v)?;
        let (y_sent, w_sent) = wire::decode_tagged_message(half, v, &msg)?;
        let mut memory = Vec::new();
        let mut view = AdversaryView { e, coin, memory: &mut memory };
        let (yf, wf) = adversary.tamper_tagged(y_sent, w_sent, post.then_some(r_a), &mut view);
        let msg = wire::encode_tagged_message(yf, half, wf, v)
            .map_err(|e| Error::Adversary(format!("forged message rejected by the channel: {e}")))?;
        let (y_prime, w_prime) = wire::decode_tagged_message(half, v, &msg)?;
        let z_prime = self.z(x, y_prime);
        let accepted = self.tag(z_prime) == w_prime;
        Ok(RunOutcome {
            ya: y,
            ya_prime: y_prime,
            yb: None,
            yb_prime: None,
            w,
            w_prime,
            r_a: Some(r_a),
            r_b: accepted.then(|| self.key(z_prime)),
            key_derived: true,
            key_confirmed: accepted,
        })
    }
}

pub fn run_one_round_with_seed(
    ctx: &OneRoundContext,
    x1: u64,
    x2: u64,
    y: u64,
    adversary: &dyn Adversary,
    coin: u64,
    post: bool,
) -> Result<RunOutcome> {
    let n = ctx.seed_count();
    if x1 >= n || x2 >= n || y >= n {
        return domain(format!("x1, x2, y must lie in F_2^{}", ctx.half()));
    }
    ctx.execute(x1 | (x2 << ctx.half()), 0, y, coin, adversary, post)
}

/// Alice draws `Y` from `rng`; the adversary coin comes from the same stream.
pub fn run_one_round<R: Rng + ?Sized>(
    ctx: &OneRoundContext,
    x1: u64,
    x2: u64,
    adversary: &dyn Adversary,
    rng: &mut R,
    post: bool,
) -> Result<RunOutcome> {
    let y = rng.random_range(0..ctx.seed_count());
    let coin = rng.random_range(0..adversary.coin_space());
    run_one_round_with_seed(ctx, x1, x2, y, adversary, coin, post)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::adversary::{Identity, XorTagged};

    #[test]
    fn honest_and_tampered() {
        let ctx = OneRoundContext::new(ProtocolParams::one_round_with(4, 1).unwrap()).unwrap();
        for x in 0..16 {
            for y in 0..4 {
                let o = ctx.execute(x, 0, y, 0, &Identity, false).unwrap();
                assert!(o.key_confirmed);
                assert_eq!(o.r_a, o.r_b);
            }
        }
        // x1 = x, x2 = 1, y = x: z = x² + 1 = x (x² = x + 1 in F_4) -> w = 0, r = 1
        let o = run_one_round_with_seed(&ctx, 2, 1, 2, &Identity, 0, false).unwrap();
        assert_eq!((o.w, o.r_a), (0, Some(1)));
        let flip = XorTagged { seed_mask: 0, tag_mask: 1 };
        assert!(!run_one_round_with_seed(&ctx, 2, 1, 2, &flip, 0, false).unwrap().key_confirmed);
        assert!(run_one_round_with_seed(&ctx, 4, 1, 2, &Identity, 0, false).is_err());
    }

    #[test]
    fn empty_tag_always_accepts() {
        let ctx = OneRoundContext::new(ProtocolParams::one_round_with(4, 0).unwrap()).unwrap();
        let shift = XorTagged { seed_mask: 1, tag_mask: 0 };
        for x in 0..16 {
            for y in 0..4 {
                assert!(ctx.execute(x, 0, y, 0, &shift, false).unwrap().key_confirmed);
            }
        }
    }
}
