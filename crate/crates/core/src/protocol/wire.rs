//! Bit-exact message encodings, each prefixed by a version byte.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FpVector};

pub const WIRE_VERSION: u8 = 0x01;

fn wire_err(msg: impl Into<String>) -> Error {
    Error::Adversary(format!("malformed message: {}", msg.into()))
}

/// Message 1: header, then the seed as a length-prefixed vector.
pub fn encode_seed_message(ya: &FpVector) -> Vec<u8> {
    let mut out = vec![WIRE_VERSION];
    out.extend(ya.to_bytes());
    out
}

pub fn decode_seed_message(field: FieldSpec, len: usize, bytes: &[u8]) -> Result<FpVector> {
    match bytes.split_first() {
        Some((&WIRE_VERSION, rest)) => {
            let (v, used) = FpVector::from_bytes(field, rest).map_err(|e| wire_err(e.to_string()))?;
            if used != rest.len() || v.len() != len {
                return Err(wire_err(format!("expected a seed of length {len}")));
            }
            Ok(v)
        }
        _ => Err(wire_err("missing or unknown version byte")),
    }
}

/// Message 2: header, then `seed_bits` bits of the seed followed by
/// `tag_bits` bits of the tag, little-endian, zero-padded to a byte boundary.
pub fn encode_tagged_message(seed: u64, seed_bits: u32, tag: u64, tag_bits: u32) -> Result<Vec<u8>> {
    if seed_bits + tag_bits > 64 {
        return Err(Error::Domain("tagged message wider than 64 bits".into()));
    }
    if (seed_bits < 64 && seed >> seed_bits != 0) || (tag_bits < 64 && tag >> tag_bits != 0) {
        return Err(wire_err(format!("seed {seed} or tag {tag} exceeds its field width")));
    }
    let packed = if seed_bits == 64 { seed } else { seed | (tag << seed_bits) };
    let nbytes = (seed_bits + tag_bits).div_ceil(8) as usize;
    let mut out = vec![WIRE_VERSION];
    out.extend_from_slice(&packed.to_le_bytes()[..nbytes]);
    Ok(out)
}

pub fn decode_tagged_message(seed_bits: u32, tag_bits: u32, bytes: &[u8]) -> Result<(u64, u64)> {
    let nbytes = (seed_bits + tag_bits).div_ceil(8) as usize;
    match bytes.split_first() {
        Some((&WIRE_VERSION, rest)) if rest.len() == nbytes => {
            let mut buf = [0u8; 8];
            buf[..nbytes].copy_from_slice(rest);
            let packed = u64::from_le_bytes(buf);
            let total = seed_bits + tag_bits;
            if total < 64 && packed >> total != 0 {
                return Err(wire_err("nonzero padding bits"));
            }
            let seed = packed & crate::extractors::low_mask(seed_bits as usize);
            let tag = if seed_bits >= 64 { 0 } else { packed >> seed_bits };
            Ok((seed, tag))
        }
        Some((&WIRE_VERSION, _)) => Err(wire_err(format!("expected {nbytes} payload bytes"))),
        _ => Err(wire_err("missing or unknown version byte")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagged_layout() {
        // 2 seed bits 0b10, 2 tag bits 0b01 -> 0b0110
        assert_eq!(encode_tagged_message(2, 2, 1, 2).unwrap(), vec![1, 0b0110]);
        assert_eq!(decode_tagged_message(2, 2, &[1, 0b0110]).unwrap(), (2, 1));
        assert_eq!(encode_tagged_message(0x1ff, 9, 3, 2).unwrap(), vec![1, 0xff, 0x07]);
        assert!(decode_tagged_message(2, 2, &[1, 0x10]).is_err());
        assert!(decode_tagged_message(2, 2, &[2, 0]).is_err());
        assert!(encode_tagged_message(4, 2, 0, 2).is_err());
    }

    #[test]
    fn tagged_round_trip() {
        for seed in 0..32 {
            for tag in 0..8 {
                let b = encode_tagged_message(seed, 5, tag, 3).unwrap();
                assert_eq!(b.len(), 2);
                assert_eq!(decode_tagged_message(5, 3, &b).unwrap(), (seed, tag));
            }
        }
    }

    #[test]
    fn seed_round_trip() {
        let f = FieldSpec::new(3).unwrap();
        let v = FpVector::new(f, vec![2, 1]).unwrap();
        let b = encode_seed_message(&v);
        assert_eq!(b, vec![1, 2, 0, 2, 0, 1, 0]);
        assert_eq!(decode_seed_message(f, 2, &b).unwrap(), v);
        assert!(decode_seed_message(f, 3, &b).is_err());
        assert!(decode_seed_message(f, 2, &[1, 2, 0, 3, 0, 1, 0]).is_err());
    }
}
