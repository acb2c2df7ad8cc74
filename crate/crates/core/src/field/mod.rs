//! Exact arithmetic in prime fields and their extensions.
//!
//! Elements of `F_p` are `u32` values in `[0, p)`. Elements of `F_{p^k}` are
//! coefficient sequences of length `k`, constant term first, reduced modulo the
//! canonical irreducible returned by [`find_irreducible`]. The map between
//! `F_p^k` and `F_{p^k}` is the identity on this representation.

mod ext;
mod poly;
mod vector;

pub use ext::{ext_mul, BinaryField, ExtFieldSpec};
pub use poly::{find_irreducible, is_irreducible, IRREDUCIBLE_SCAN_LIMIT};
pub use vector::{inner_product, vec_square, FpVector};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest supported modulus (exclusive). Coefficients serialize as `u16`.
pub const MAX_MODULUS: u32 = 1 << 16;

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u32) -> Result<Self> {
        if p >= MAX_MODULUS {
            return domain(format!("modulus {p} must be below 2^16"));
        }
        if !is_prime(p) {
            return domain(format!("modulus {p} is not prime"));
        }
        Ok(FieldSpec { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.p {
            Ok(a)
        } else {
            domain(format!("{a} is not an element of F_{}", self.p))
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = self.check(a)?;
        if a == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }
}

/// Operation selector for [`fp_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpOp {
    Add,
    Sub,
    Mul,
    Inv,
}

/// Single checked operation in `F_p`. `b` is required for the binary
/// operations and ignored by `Inv`.
pub fn fp_arith(spec: FieldSpec, op: FpOp, a: u32, b: Option<u32>) -> Result<u32> {
    let a = spec.check(a)?;
    let second = || match b {
        Some(b) => spec.check(b),
        None => domain(format!("{op:?} needs two operands")),
    };
    match op {
        FpOp::Add => Ok(spec.add(a, second()?)),
        FpOp::Sub => Ok(spec.sub(a, second()?)),
        FpOp::Mul => Ok(spec.mul(a, second()?)),
        FpOp::Inv => spec.inv(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(fp_arith(f(3), FpOp::Mul, 2, Some(2)), Ok(1));
        assert_eq!(fp_arith(f(5), FpOp::Add, 0, Some(4)), Ok(4));
        // exhaustive search for the inverse of 3 mod 7
        let brute = (1..7).find(|x| (3 * x) % 7 == 1).unwrap();
        assert_eq!(fp_arith(f(7), FpOp::Inv, 3, None), Ok(brute));
        assert_eq!(brute, 5);
    }

    #[test]
    fn errors() {
        assert_eq!(fp_arith(f(7), FpOp::Inv, 0, None), Err(Error::DivisionByZero(7)));
        assert!(matches!(fp_arith(f(7), FpOp::Add, 7, Some(1)), Err(Error::Domain(_))));
        assert!(matches!(fp_arith(f(7), FpOp::Mul, 1, None), Err(Error::Domain(_))));
        assert!(FieldSpec::new(9).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(65537).is_err());
        assert!(FieldSpec::new(65521).is_ok());
    }

    #[test]
    fn primality_matches_sieve() {
        let n = 2000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &s) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u32), s, "{i}");
        }
    }
}
