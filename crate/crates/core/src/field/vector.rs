use serde::{Deserialize, Serialize};

use super::{ExtFieldSpec, FieldSpec};
use crate::error::{domain, Result};

/// An element of `F_p^n`, equivalently of `F_{p^n}` under the identity map on
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpVector {
    p: FieldSpec,
    coeffs: Vec<u32>,
}

impl FpVector {
    pub fn new(p: FieldSpec, coeffs: Vec<u32>) -> Result<Self> {
        for &c in &coeffs {
            p.check(c)?;
        }
        Ok(FpVector { p, coeffs })
    }

    pub fn zeros(p: FieldSpec, n: usize) -> Self {
        FpVector { p, coeffs: vec![0; n] }
    }

    /// Vector whose coefficients are the base-p digits of `idx`, least
    /// significant first.
    pub fn from_index(p: FieldSpec, n: usize, mut idx: u64) -> Self {
        let q = p.p() as u64;
        let coeffs = (0..n)
            .map(|_| {
                let d = (idx % q) as u32;
                idx /= q;
                d
            })
            .collect();
        FpVector { p, coeffs }
    }

    /// Inverse of [`FpVector::from_index`]. Saturates for vectors beyond `u64`.
    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.saturating_mul(self.p.p() as u64).saturating_add(c as u64))
    }

    pub fn field(&self) -> FieldSpec {
        self.p
    }

    pub fn p(&self) -> u32 {
        self.p.p()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    fn same_shape(&self, other: &FpVector) -> Result<()> {
        if self.p != other.p {
            return domain(format!("field mismatch: F_{} vs F_{}", self.p(), other.p()));
        }
        if self.len() != other.len() {
            return domain(format!("length mismatch: {} vs {}", self.len(), other.len()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.same_shape(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.p.add(a, b)).collect();
        Ok(FpVector { p: self.p, coeffs })
    }

    pub fn scale(&self, c: u32) -> Result<FpVector> {
        let c = self.p.check(c)?;
        Ok(FpVector { p: self.p, coeffs: self.coeffs.iter().map(|&a| self.p.mul(c, a)).collect() })
    }

    pub fn concat(&self, other: &FpVector) -> Result<FpVector> {
        if self.p != other.p {
            return domain("cannot concatenate vectors over different fields");
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(&other.coeffs);
        Ok(FpVector { p: self.p, coeffs })
    }

    /// Length-prefixed little-endian `u16` encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + 2 * self.len());
        out.extend_from_slice(&(self.len() as u16).to_le_bytes());
        for &c in &self.coeffs {
            out.extend_from_slice(&(c as u16).to_le_bytes());
        }
        out
    }

    /// Decodes [`FpVector::to_bytes`] output, returning the vector and the
    /// number of bytes consumed.
    pub fn from_bytes(p: FieldSpec, bytes: &[u8]) -> Result<(FpVector, usize)> {
        if bytes.len() < 2 {
            return domain("truncated vector length prefix");
        }
        let n = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        let end = 2 + 2 * n;
        if bytes.len() < end {
            return domain(format!("vector of length {n} needs {end} bytes, got {}", bytes.len()));
        }
        let coeffs = bytes[2..end]
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]) as u32)
            .collect();
        Ok((FpVector::new(p, coeffs)?, end))
    }
}

/// `Σ x_i y_i mod p`.
pub fn inner_product(x: &FpVector, y: &FpVector) -> Result<u32> {
    x.same_shape(y)?;
    let p = x.p() as u64;
    Ok((x.coeffs.iter().zip(&y.coeffs).fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p)) as u32)
}

/// Square of `y` in the canonical `F_{p^k}`, `k = y.len()`.
pub fn vec_square(y: &FpVector) -> Result<FpVector> {
    if y.is_empty() {
        return domain("cannot square an empty vector");
    }
    let ext = ExtFieldSpec::canonical(y.p(), y.len())?;
    Ok(FpVector { p: y.p, coeffs: ext.mul(&y.coeffs, &y.coeffs)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, c: &[u32]) -> FpVector {
        FpVector::new(FieldSpec::new(p).unwrap(), c.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(vec_square(&v(3, &[1, 1])).unwrap(), v(3, &[0, 2]));
        assert_eq!(vec_square(&v(3, &[0, 0])).unwrap(), v(3, &[0, 0]));
        assert_eq!(vec_square(&v(5, &[2])).unwrap(), v(5, &[4]));
        assert_eq!(inner_product(&v(3, &[1, 2, 0, 1]), &v(3, &[1, 1, 0, 2])).unwrap(), 2);
        assert_eq!(inner_product(&v(3, &[0, 0, 0, 0]), &v(3, &[2, 1, 0, 2])).unwrap(), 0);
        assert_eq!(inner_product(&v(7, &[1, 0]), &v(7, &[0, 1])).unwrap(), 0);
        assert!(inner_product(&v(7, &[1, 0]), &v(7, &[0])).is_err());
        assert!(inner_product(&v(7, &[1]), &v(5, &[1])).is_err());
    }

    #[test]
    fn index_round_trip() {
        let f = FieldSpec::new(5).unwrap();
        for idx in 0..625 {
            assert_eq!(FpVector::from_index(f, 4, idx).index(), idx);
        }
    }

    #[test]
    fn bytes_round_trip() {
        let x = v(65521, &[0, 65520, 17]);
        let b = x.to_bytes();
        assert_eq!(b, vec![3, 0, 0, 0, 0xf0, 0xff, 17, 0]);
        assert_eq!(FpVector::from_bytes(x.field(), &b).unwrap(), (x, 8));
        assert!(FpVector::from_bytes(FieldSpec::new(3).unwrap(), &[1, 0, 3, 0]).is_err());
        assert!(FpVector::from_bytes(FieldSpec::new(3).unwrap(), &[2, 0, 1, 0]).is_err());
    }
}
