//! One-time polynomial-evaluation MAC over `F_{2^t}`:
//! `tag = k2 + Σ_{i=1..L} m_i·k1^i`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_budget, domain, Result};
use crate::extractors::low_mask;
use crate::field::BinaryField;
use crate::scalar::{ratio, Exact};

/// Cap on `messages² · keys` for the exhaustive forgery search.
pub const FORGERY_SCAN_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacParams {
    t: u32,
    blocks: u32,
    key_space: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MacKey {
    pub k1: u64,
    pub k2: u64,
}

impl MacParams {
    /// `t`-bit tags over `blocks` message blocks, keyed from `{0..key_space-1}`.
    ///
    /// A key space smaller than `2^(2t)` is accepted; see
    /// [`MacParams::key_space_deficient`].
    pub fn new(t: u32, blocks: u32, key_space: u64) -> Result<Self> {
        if t == 0 || t > 16 {
            return domain(format!("tag length t = {t} outside 1..=16"));
        }
        if blocks == 0 || (t * blocks) > 63 {
            return domain(format!("message of {blocks} blocks of {t} bits is unsupported"));
        }
        if key_space == 0 {
            return domain("key space must be non-empty");
        }
        Ok(MacParams { t, blocks, key_space })
    }

    /// Full key space `2^(2t)`.
    pub fn uniform(t: u32, blocks: u32) -> Result<Self> {
        MacParams::new(t, blocks, 1u64 << (2 * t.min(31)))
    }

    /// Smallest block count covering `bits` message bits.
    pub fn for_message_bits(t: u32, bits: u32, key_space: u64) -> Result<Self> {
        MacParams::new(t, bits.div_ceil(t.max(1)).max(1), key_space)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn blocks(&self) -> u32 {
        self.blocks
    }

    pub fn key_space(&self) -> u64 {
        self.key_space
    }

    /// Message bit length `d = L·t`.
    pub fn message_bits(&self) -> u32 {
        self.t * self.blocks
    }

    pub fn field(&self) -> Result<BinaryField> {
        BinaryField::canonical(self.t)
    }

    /// Number of distinct `(k1, k2)` pairs, `2^(2t)`.
    pub fn full_keys(&self) -> u64 {
        1u64 << (2 * self.t)
    }

    /// True when `d_Z < 2^(2t)`, so some key pairs are unreachable.
    pub fn key_space_deficient(&self) -> bool {
        self.key_space < self.full_keys()
    }

    /// Splits a packed message into `L` blocks, lowest block first.
    pub fn blocks_of(&self, packed: u64) -> Vec<u64> {
        (0..self.blocks).map(|i| (packed >> (i * self.t)) & low_mask(self.t as usize)).collect()
    }

    pub fn message_count(&self) -> u64 {
        1u64 << self.message_bits()
    }

    /// Tag-length condition `t <= log d + log(1/ε)` with `ε = L·2^(-t)`.
    pub fn tag_length_consistent(&self) -> bool {
        let d = self.message_bits() as f64;
        let eps = self.blocks as f64 * (-(self.t as f64)).exp2();
        self.t as f64 <= d.log2() - eps.log2() + 1e-12
    }
}

/// `z mod 2^(2t)` split into low half `k1` and high half `k2`.
pub fn mac_key_derive(z: u64, params: &MacParams) -> Result<MacKey> {
    if z >= params.key_space {
        return domain(format!("key index {z} outside [0, {})", params.key_space));
    }
    let zr = z % params.full_keys();
    let mask = low_mask(params.t as usize);
    Ok(MacKey { k1: zr & mask, k2: (zr >> params.t) & mask })
}

fn tag_unchecked(field: &BinaryField, key: MacKey, m: &[u64]) -> u64 {
    let acc = m.iter().rev().fold(0u64, |acc, &mi| field.mul(acc ^ mi, key.k1));
    acc ^ key.k2
}

pub fn mac_tag(params: &MacParams, key: MacKey, m: &[u64]) -> Result<u64> {
    if m.len() != params.blocks as usize {
        return domain(format!("expected {} message blocks, got {}", params.blocks, m.len()));
    }
    let field = params.field()?;
    field.check(key.k1)?;
    field.check(key.k2)?;
    for &b in m {
        field.check(b)?;
    }
    Ok(tag_unchecked(&field, key, m))
}

pub fn mac_verify(params: &MacParams, key: MacKey, m: &[u64], tag: u64) -> Result<bool> {
    Ok(mac_tag(params, key, m)? == tag)
}

/// Tag of a packed message, see [`MacParams::blocks_of`].
pub fn mac_tag_packed(params: &MacParams, key: MacKey, packed: u64) -> Result<u64> {
    if packed >= params.message_count() {
        return domain(format!("message {packed} exceeds {} bits", params.message_bits()));
    }
    mac_tag(params, key, &params.blocks_of(packed))
}

/// Multiset of keys induced by `mac_key_derive` on a uniform `z`, as
/// `(key, multiplicity)`.
pub fn derived_key_weights(params: &MacParams) -> Result<Vec<(MacKey, u64)>> {
    check_budget(params.key_space as u128, FORGERY_SCAN_LIMIT)?;
    let mut w = std::collections::BTreeMap::new();
    for z in 0..params.key_space {
        let k = mac_key_derive(z, params)?;
        *w.entry((k.k2, k.k1)).or_insert(0u64) += 1;
    }
    Ok(w.into_iter().map(|((k2, k1), c)| (MacKey { k1, k2 }, c)).collect())
}

/// Best forgery probability against keys drawn from `weights`, maximizing
/// over the observed message and every deterministic forger.
pub fn forgery_advantage_weighted(params: &MacParams, weights: &[(MacKey, u64)]) -> Result<Exact> {
    let msgs = params.message_count();
    check_budget(
        (msgs as u128) * (msgs as u128) * (weights.len() as u128),
        FORGERY_SCAN_LIMIT,
    )?;
    let field = params.field()?;
    let total: u64 = weights.iter().map(|w| w.1).sum();
    if total == 0 {
        return domain("empty key distribution");
    }
    let tags = 1usize << params.t;
    let block_table: Vec<Vec<u64>> = (0..msgs).map(|m| params.blocks_of(m)).collect();
    let tag_table: Vec<Vec<u64>> = weights
        .iter()
        .map(|(k, _)| block_table.iter().map(|b| tag_unchecked(&field, *k, b)).collect())
        .collect();
    let mut best = 0u64;
    for m in 0..msgs as usize {
        // best[σ] = max over (m', σ') of the key mass consistent with both tags
        let mut best_per_tag = vec![0u64; tags];
        let mut counts = vec![0u64; tags * tags];
        for mp in 0..msgs as usize {
            if mp == m {
                continue;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for (ki, (_, w)) in weights.iter().enumerate() {
                let row = &tag_table[ki];
                counts[row[m] as usize * tags + row[mp] as usize] += w;
            }
            for s in 0..tags {
                let mx = counts[s * tags..(s + 1) * tags].iter().copied().max().unwrap_or(0);
                best_per_tag[s] = best_per_tag[s].max(mx);
            }
        }
        best = best.max(best_per_tag.iter().sum());
    }
    Ok(ratio(best as u128, total as u128))
}

/// Forgery advantage over uniformly random `(k1, k2)`.
pub fn mac_forgery_advantage(params: &MacParams) -> Result<Exact> {
    let field = params.field()?;
    let keys: Vec<(MacKey, u64)> = (0..field.size())
        .flat_map(|k2| (0..field.size()).map(move |k1| (MacKey { k1, k2 }, 1)))
        .collect();
    forgery_advantage_weighted(params, &keys)
}

/// Success of a fixed forger `adv(m, tag) -> (m', tag')` on message `m` under
/// uniformly random `(k1, k2)`. Forgeries with `m' = m` never count.
pub fn adversary_success<F>(params: &MacParams, m: u64, mut adv: F) -> Result<Exact>
where
    F: FnMut(u64, u64) -> (u64, u64),
{
    let field = params.field()?;
    let mut wins = 0u128;
    for k2 in 0..field.size() {
        for k1 in 0..field.size() {
            let key = MacKey { k1, k2 };
            let (mp, sp) = adv(m, mac_tag_packed(params, key, m)?);
            if mp != m && mp < params.message_count() && mac_tag_packed(params, key, mp)? == sp {
                wins += 1;
            }
        }
    }
    Ok(ratio(wins, params.full_keys() as u128))
}

/// Statistical distance of the derived key from uniform over `2^(2t)` pairs
/// when `z` is uniform on the key space.
pub fn key_bias(params: &MacParams) -> Result<Exact> {
    let full = params.full_keys() as u128;
    let d = params.key_space as u128;
    let weights = derived_key_weights(params)?;
    let mut dist = Exact::zero();
    for (_, c) in &weights {
        let diff = ratio(*c as u128, d) - ratio(1, full);
        dist += if diff < Exact::zero() { -diff } else { diff };
    }
    // keys never hit contribute 1/full each
    dist += ratio(full - weights.len() as u128, full);
    Ok(dist / Exact::from_integer(2.into()))
}

/// `L·2^(-t)`.
pub fn forgery_bound(params: &MacParams) -> Exact {
    ratio(params.blocks as u128, 1u128 << params.t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_derivation_examples() {
        let p = MacParams::new(2, 1, 17).unwrap();
        assert_eq!(mac_key_derive(0, &p).unwrap(), MacKey { k1: 0, k2: 0 });
        assert_eq!(mac_key_derive(9, &p).unwrap(), MacKey { k1: 1, k2: 2 });
        assert_eq!(mac_key_derive(16, &p).unwrap(), MacKey { k1: 0, k2: 0 });
        assert!(mac_key_derive(17, &p).is_err());
    }

    #[test]
    fn tag_examples() {
        let p = MacParams::uniform(2, 1).unwrap();
        assert_eq!(mac_tag(&p, MacKey { k1: 2, k2: 1 }, &[3]).unwrap(), 0);
        assert_eq!(mac_tag(&p, MacKey { k1: 3, k2: 2 }, &[0]).unwrap(), 2);
        let p2 = MacParams::uniform(2, 2).unwrap();
        for m in 0..16 {
            assert_eq!(mac_tag_packed(&p2, MacKey { k1: 0, k2: 3 }, m).unwrap(), 3);
        }
        assert!(mac_tag(&p2, MacKey { k1: 0, k2: 3 }, &[1]).is_err());
        assert!(mac_tag(&p, MacKey { k1: 4, k2: 0 }, &[1]).is_err());
    }

    // Direct evaluation of Σ m_i k1^i via repeated powers.
    #[test]
    fn horner_matches_power_sum() {
        let p = MacParams::uniform(3, 2).unwrap();
        let f = p.field().unwrap();
        for k1 in 0..8 {
            for k2 in 0..8 {
                for m in 0..64u64 {
                    let b = p.blocks_of(m);
                    let direct = b.iter().enumerate().fold(k2, |acc, (i, &mi)| acc ^ f.mul(mi, f.pow(k1, i as u64 + 1)));
                    assert_eq!(mac_tag_packed(&p, MacKey { k1, k2 }, m).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn forgery_examples() {
        let a = |t, l| mac_forgery_advantage(&MacParams::uniform(t, l).unwrap()).unwrap();
        assert_eq!(a(2, 1), ratio(1, 4));
        assert_eq!(a(3, 1), ratio(1, 8));
        assert!(a(2, 2) <= ratio(1, 2));
    }

    #[test]
    fn fixed_forger() {
        let p = MacParams::uniform(2, 1).unwrap();
        // replaying the tag on another message wins iff (m - m')·k1 = 0
        assert_eq!(adversary_success(&p, 1, |_, s| (2, s)).unwrap(), ratio(1, 4));
        assert_eq!(adversary_success(&p, 1, |m, s| (m, s)).unwrap(), ratio(0, 1));
    }

    #[test]
    fn bias_and_deficiency() {
        let exact = MacParams::new(2, 1, 32).unwrap();
        assert!(!exact.key_space_deficient());
        assert_eq!(key_bias(&exact).unwrap(), ratio(0, 1));
        let small = MacParams::new(2, 1, 3).unwrap();
        assert!(small.key_space_deficient());
        assert_eq!(key_bias(&small).unwrap(), ratio(13, 16));
        let odd = MacParams::new(2, 1, 17).unwrap();
        assert!(key_bias(&odd).unwrap() <= ratio(16, 17));
        assert!(MacParams::uniform(2, 2).unwrap().tag_length_consistent());
    }
}
