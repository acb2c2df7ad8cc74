//! The extension field `F_{p^k}` over its canonical irreducible.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::poly::{self, find_irreducible};
use super::FieldSpec;
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtFieldSpec {
    base: FieldSpec,
    k: usize,
    irreducible: Vec<u32>,
}

type Cache = Mutex<HashMap<(u32, usize), Arc<ExtFieldSpec>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl ExtFieldSpec {
    /// `F_p[x]/(m)` for the canonical `m` of [`find_irreducible`]. Results are
    /// memoized per `(p, k)`.
    pub fn canonical(p: u32, k: usize) -> Result<Arc<ExtFieldSpec>> {
        if let Some(s) = cache().lock().unwrap().get(&(p, k)) {
            return Ok(s.clone());
        }
        let irreducible = find_irreducible(p, k)?;
        let spec = Arc::new(ExtFieldSpec { base: FieldSpec::new(p)?, k, irreducible });
        cache().lock().unwrap().insert((p, k), spec.clone());
        Ok(spec)
    }

    /// Extension over a caller-supplied modulus, checked for irreducibility.
    pub fn with_modulus(base: FieldSpec, irreducible: Vec<u32>) -> Result<ExtFieldSpec> {
        if !poly::is_irreducible(base, &irreducible)? {
            return domain(format!("{irreducible:?} is reducible over F_{}", base.p()));
        }
        let mut irreducible = irreducible;
        poly::trim(&mut irreducible);
        Ok(ExtFieldSpec { base, k: irreducible.len() - 1, irreducible })
    }

    pub fn base(&self) -> FieldSpec {
        self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn irreducible(&self) -> &[u32] {
        &self.irreducible
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> u128 {
        (self.base.p() as u128).pow(self.k as u32)
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.k];
        v[0] = 1;
        v
    }

    fn check(&self, a: &[u32]) -> Result<()> {
        if a.len() != self.k {
            return domain(format!("expected {} coefficients, got {}", self.k, a.len()));
        }
        for &c in a {
            self.base.check(c)?;
        }
        Ok(())
    }

    fn pad(&self, mut r: Vec<u32>) -> Vec<u32> {
        r.resize(self.k, 0);
        r
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect())
    }

    pub fn scale(&self, c: u32, a: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        let c = self.base.check(c)?;
        Ok(a.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        self.check(b)?;
        let prod = poly::mul(self.base, a, b);
        Ok(self.pad(poly::rem_monic(self.base, &prod, &self.irreducible)))
    }

    pub fn pow(&self, a: &[u32], mut e: u128) -> Result<Vec<u32>> {
        self.check(a)?;
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Inverse via `a^(p^k - 2)`.
    pub fn inv(&self, a: &[u32]) -> Result<Vec<u32>> {
        self.check(a)?;
        if a.iter().all(|&c| c == 0) {
            return Err(crate::error::Error::DivisionByZero(self.base.p()));
        }
        self.pow(a, self.order() - 2)
    }
}

/// Product of `a` and `b` in the given extension.
pub fn ext_mul(spec: &ExtFieldSpec, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
    spec.mul(a, b)
}

/// `F_{2^k}` with elements packed into a `u64`, bit `i` holding the
/// coefficient of `x^i`. Uses the same canonical modulus as [`ExtFieldSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryField {
    k: u32,
    modulus: u64,
}

impl BinaryField {
    pub const MAX_DEGREE: u32 = 20;

    pub fn canonical(k: u32) -> Result<BinaryField> {
        if k == 0 || k > Self::MAX_DEGREE {
            return domain(format!("binary extension degree {k} outside 1..={}", Self::MAX_DEGREE));
        }
        let spec = ExtFieldSpec::canonical(2, k as usize)?;
        let modulus = spec
            .irreducible()
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i));
        Ok(BinaryField { k, modulus })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        1 << self.k
    }

    pub fn check(&self, a: u64) -> Result<u64> {
        if a < self.size() {
            Ok(a)
        } else {
            domain(format!("{a} is not an element of F_2^{}", self.k))
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let mut prod = 0u64;
        for i in 0..self.k {
            if (b >> i) & 1 == 1 {
                prod ^= a << i;
            }
        }
        for i in (self.k..2 * self.k).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= self.modulus << (i - self.k);
            }
        }
        prod
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let (mut base, mut acc) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn to_coeffs(&self, a: u64) -> Vec<u32> {
        (0..self.k).map(|i| ((a >> i) & 1) as u32).collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<u64> {
        if c.len() != self.k as usize || c.iter().any(|&b| b > 1) {
            return domain(format!("expected {} bits, got {c:?}", self.k));
        }
        Ok(c.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u64) << i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f9 = ExtFieldSpec::canonical(3, 2).unwrap();
        assert_eq!(ext_mul(&f9, &[1, 1], &[1, 1]).unwrap(), vec![0, 2]);
        let f4 = ExtFieldSpec::canonical(2, 2).unwrap();
        assert_eq!(ext_mul(&f4, &[1, 1], &[0, 1]).unwrap(), vec![1, 0]);
        for a in [[0u32, 0], [2, 1], [1, 2]] {
            assert_eq!(ext_mul(&f9, &a, &f9.one()).unwrap(), a.to_vec());
        }
        assert!(ext_mul(&f9, &[1], &[1, 1]).is_err());
        assert!(ext_mul(&f9, &[3, 0], &[1, 1]).is_err());
    }

    #[test]
    fn inverses_exhaustive_f27() {
        let f = ExtFieldSpec::canonical(3, 3).unwrap();
        for idx in 1..27u32 {
            let a = vec![idx % 3, (idx / 3) % 3, idx / 9];
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv).unwrap(), f.one());
        }
        assert!(f.inv(&[0, 0, 0]).is_err());
    }

    #[test]
    fn binary_matches_generic() {
        for k in 1..=6u32 {
            let bf = BinaryField::canonical(k).unwrap();
            let ext = ExtFieldSpec::canonical(2, k as usize).unwrap();
            for a in 0..bf.size() {
                for b in 0..bf.size() {
                    let generic = ext.mul(&bf.to_coeffs(a), &bf.to_coeffs(b)).unwrap();
                    assert_eq!(bf.to_coeffs(bf.mul(a, b)), generic);
                }
            }
        }
    }

    #[test]
    fn modulus_check() {
        let f3 = FieldSpec::new(3).unwrap();
        assert!(ExtFieldSpec::with_modulus(f3, vec![2, 0, 1]).is_err());
        assert!(ExtFieldSpec::with_modulus(f3, vec![2, 1, 1]).is_ok());
    }
}
