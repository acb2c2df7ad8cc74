//! Protocol DW (non-malleable extractor + MAC + strong extractor) and the
//! one-round universal-hash protocol, run over an in-process channel that a
//! pluggable [`adversary::Adversary`] controls.

pub mod adversary;
mod dw;
pub mod experiment;
mod one_round;
pub mod rng;
pub mod wire;

pub use dw::{alice_finish, alice_round1, alice_round1_with_seed, bob_respond, bob_respond_with_seed, run_dw, AliceState, BobOutput, DwContext};
pub use one_round::{run_one_round, run_one_round_with_seed, OneRoundContext};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::extractors::{NmExtParams, StrongExtParams};
use crate::field::{FieldSpec, FpVector};
use crate::mac::MacParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    Dw,
    OneRound,
}

/// Every constant of one protocol instance.
///
/// DW: `p`, `n` shape the source `F_p^n` and seed `F_p^(n/2)`; `d2` is the bit
/// length of Bob's seed; the MAC key space is `d_Z = p`; `m <= d2` output bits.
/// One-round: `n` is the source bit length, `v` the tag bits, `m = n/2 - v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub kind: ProtocolKind,
    pub p: u32,
    pub n: usize,
    pub d2: u32,
    pub t: u32,
    pub m: u32,
    pub v: u32,
    /// Claimed min-entropy in bits, reported only.
    pub k: u32,
    pub eps_mac: Ratio<u64>,
    pub eps_ext: Ratio<u64>,
    pub eps_nmext: Ratio<u64>,
}

fn bit_length(x: u128) -> u32 {
    128 - x.leading_zeros()
}

impl ProtocolParams {
    pub fn dw(p: u32, n: usize, d2: u32, t: u32, m: u32) -> Result<Self> {
        let nm = NmExtParams::new(p, n)?;
        if d2 == 0 || d2 > crate::field::BinaryField::MAX_DEGREE {
            return domain(format!("d2 = {d2} outside 1..={}", crate::field::BinaryField::MAX_DEGREE));
        }
        let dx = nm.source_count();
        if bit_length(dx - 1) > 2 * d2 {
            return domain(format!("source index of {} bits does not fit two {d2}-bit halves", bit_length(dx - 1)));
        }
        if m > d2 {
            return domain(format!("m = {m} exceeds d2 = {d2}"));
        }
        let mac = MacParams::for_message_bits(t, d2, p as u64)?;
        let k = (n as f64 * (p as f64).log2()).floor() as u32;
        Ok(ProtocolParams {
            kind: ProtocolKind::Dw,
            p,
            n,
            d2,
            t,
            m,
            v: 0,
            k,
            eps_mac: Ratio::new(mac.blocks() as u64, 1u64 << t),
            eps_ext: Ratio::new(1, 1u64 << m.min(63)),
            eps_nmext: Ratio::new(1, p as u64),
        })
    }

    /// One-round parameters from the entropy claim: `v = n - k + ⌈log2(1/ε)⌉`.
    pub fn one_round(n: usize, k: u32, eps: Ratio<u64>) -> Result<Self> {
        if *eps.numer() == 0 || eps > Ratio::from_integer(1) {
            return domain("ε must lie in (0, 1]");
        }
        if k as usize > n {
            return domain(format!("k = {k} exceeds n = {n}"));
        }
        let log_inv = (*eps.denom() as f64 / *eps.numer() as f64).log2().ceil() as usize;
        let v = n - k as usize + log_inv;
        let mut params = ProtocolParams::one_round_with(n, v as u32)?;
        params.k = k;
        params.eps_ext = eps;
        Ok(params)
    }

    /// One-round parameters with an explicit tag length `v`.
    pub fn one_round_with(n: usize, v: u32) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return domain(format!("source bit length n = {n} must be even and positive"));
        }
        if v as usize > n / 2 {
            return domain(format!("v = {v} exceeds n/2 = {}, leaving no output", n / 2));
        }
        let m = (n / 2) as u32 - v;
        StrongExtParams::new(n, m as usize, v as usize)?;
        Ok(ProtocolParams {
            kind: ProtocolKind::OneRound,
            p: 2,
            n,
            d2: (n / 2) as u32,
            t: v,
            m,
            v,
            k: (n as u32).saturating_sub(v),
            eps_mac: Ratio::new(1, 1u64 << v.min(63)),
            eps_ext: Ratio::from_integer(1),
            eps_nmext: Ratio::from_integer(0),
        })
    }

    pub fn with_eps(mut self, eps_mac: Ratio<u64>, eps_ext: Ratio<u64>, eps_nmext: Ratio<u64>) -> Self {
        self.eps_mac = eps_mac;
        self.eps_ext = eps_ext;
        self.eps_nmext = eps_nmext;
        self
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn nm(&self) -> Result<NmExtParams> {
        NmExtParams::new(self.p, self.n)
    }

    pub fn field(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.p)
    }

    /// MAC keyed by the non-malleable extractor output, `d_Z = p`.
    pub fn mac(&self) -> Result<MacParams> {
        MacParams::for_message_bits(self.t, self.d2, self.p as u64)
    }

    /// Strong extractor: `F_{2^d2}` for DW, `F_{2^(n/2)}` for one-round.
    pub fn ext(&self) -> Result<StrongExtParams> {
        match self.kind {
            ProtocolKind::Dw => StrongExtParams::new(2 * self.d2 as usize, self.m as usize, 0),
            ProtocolKind::OneRound => StrongExtParams::new(self.n, self.m as usize, self.v as usize),
        }
    }

    /// Number of source values: `p^n` (DW) or `2^n` (one-round).
    pub fn source_count(&self) -> u128 {
        match self.kind {
            ProtocolKind::Dw => crate::extractors::pow_sat(self.p, self.n),
            ProtocolKind::OneRound => 1u128 << self.n,
        }
    }

    /// Size of the seed Alice sends.
    pub fn seed_count(&self) -> u128 {
        match self.kind {
            ProtocolKind::Dw => crate::extractors::pow_sat(self.p, self.n / 2),
            ProtocolKind::OneRound => 1u128 << (self.n / 2),
        }
    }

    /// The interpretation `ℓ = log d_Z` used for the strong extractor's
    /// entropy requirement `k - ℓ - log(1/ε_Ext)`.
    pub fn ell(&self) -> f64 {
        (self.p as f64).log2()
    }

    /// `ε_Ext + ε_nmExt + ε_MAC`.
    pub fn eps_sum(&self) -> Ratio<u64> {
        self.eps_ext + self.eps_nmext + self.eps_mac
    }
}

/// Compact outcome of one execution. Seeds and tags are packed integers:
/// DW `ya` is an [`FpVector::index`], every other value is a little-endian
/// bit string. One-round runs leave `yb`/`yb_prime` empty, store `(Y, W)` in
/// `ya`/`w`, set `key_derived` when Alice outputs and `key_confirmed` when Bob
/// accepts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunOutcome {
    pub ya: u64,
    pub ya_prime: u64,
    pub yb: Option<u64>,
    pub yb_prime: Option<u64>,
    pub w: u64,
    pub w_prime: u64,
    pub r_a: Option<u64>,
    pub r_b: Option<u64>,
    pub key_derived: bool,
    pub key_confirmed: bool,
}

impl RunOutcome {
    /// True when the second (tagged) message reached its receiver modified.
    pub fn tagged_changed(&self) -> bool {
        match self.yb {
            Some(yb) => (Some(yb), self.w) != (self.yb_prime, self.w_prime),
            None => (self.ya, self.w) != (self.ya_prime, self.w_prime),
        }
    }

    pub fn to_record(&self, params: &ProtocolParams) -> Result<TranscriptRecord> {
        let bits = |v: u64, len: u32| -> Vec<u32> { (0..len).map(|i| ((v >> i) & 1) as u32).collect() };
        let r = |v: Option<u64>| v.map(|v| bits(v, params.m));
        Ok(match params.kind {
            ProtocolKind::Dw => {
                let f = params.field()?;
                let seed = |i: u64| FpVector::from_index(f, params.n / 2, i).into_coeffs();
                TranscriptRecord {
                    ya: Some(seed(self.ya)),
                    ya_prime: Some(seed(self.ya_prime)),
                    yb: self.yb.map(|v| bits(v, params.d2)),
                    w: Some(bits(self.w, params.t)),
                    yb_prime: self.yb_prime.map(|v| bits(v, params.d2)),
                    w_prime: Some(bits(self.w_prime, params.t)),
                    r_a: r(self.r_a),
                    r_b: r(self.r_b),
                    key_derived: self.key_derived,
                    key_confirmed: self.key_confirmed,
                }
            }
            ProtocolKind::OneRound => TranscriptRecord {
                ya: Some(bits(self.ya, params.d2)),
                ya_prime: Some(bits(self.ya_prime, params.d2)),
                yb: None,
                w: Some(bits(self.w, params.v)),
                yb_prime: None,
                w_prime: Some(bits(self.w_prime, params.v)),
                r_a: r(self.r_a),
                r_b: r(self.r_b),
                key_derived: self.key_derived,
                key_confirmed: self.key_confirmed,
            },
        })
    }
}

/// JSON transcript of one run; `null` outputs stand for ⊥.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub ya: Option<Vec<u32>>,
    pub ya_prime: Option<Vec<u32>>,
    pub yb: Option<Vec<u32>>,
    pub w: Option<Vec<u32>>,
    pub yb_prime: Option<Vec<u32>>,
    pub w_prime: Option<Vec<u32>>,
    pub r_a: Option<Vec<u32>>,
    pub r_b: Option<Vec<u32>>,
    pub key_derived: bool,
    pub key_confirmed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dw_params() {
        let p = ProtocolParams::dw(3, 2, 2, 2, 2).unwrap();
        assert_eq!(p.mac().unwrap().blocks(), 1);
        assert!(p.mac().unwrap().key_space_deficient());
        assert!(ProtocolParams::dw(3, 4, 3, 2, 2).is_err()); // 81 values need 7 bits
        assert!(ProtocolParams::dw(3, 4, 4, 2, 2).is_ok());
        assert!(ProtocolParams::dw(3, 2, 2, 2, 3).is_err());
        assert!(ProtocolParams::dw(2, 2, 2, 2, 1).is_err());
    }

    #[test]
    fn one_round_params() {
        let p = ProtocolParams::one_round(8, 6, Ratio::new(1, 4)).unwrap();
        assert_eq!((p.v, p.m), (4, 0));
        let p = ProtocolParams::one_round(8, 8, Ratio::new(1, 2)).unwrap();
        assert_eq!((p.v, p.m), (1, 3));
        assert!(ProtocolParams::one_round(4, 1, Ratio::new(1, 2)).is_err());
        assert_eq!(ProtocolParams::one_round_with(4, 0).unwrap().m, 2);
    }
}
