//! The inner-product non-malleable extractor `⟨X, Y‖Y²⟩`, its collision
//! function `g_a`, and the universal-hash strong extractor `Y·X1 + X2`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_budget, domain, Result};
use crate::field::{inner_product, vec_square, BinaryField, FieldSpec, FpVector};

/// Largest seed space `p^(n/2)` enumerated by [`g_a_max_preimages`].
pub const PREIMAGE_SCAN_LIMIT: u128 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NmExtParams {
    p: FieldSpec,
    n: usize,
}

impl NmExtParams {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        let field = FieldSpec::new(p)?;
        if p == 2 {
            return domain("the non-malleable extractor needs an odd prime");
        }
        if n == 0 || n % 2 == 1 {
            return domain(format!("source length n = {n} must be even and positive"));
        }
        Ok(NmExtParams { p: field, n })
    }

    pub fn field(&self) -> FieldSpec {
        self.p
    }

    pub fn p(&self) -> u32 {
        self.p.p()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed_len(&self) -> usize {
        self.n / 2
    }

    /// `p^(n/2)`, saturating.
    pub fn seed_count(&self) -> u128 {
        pow_sat(self.p(), self.seed_len())
    }

    /// `p^n`, saturating.
    pub fn source_count(&self) -> u128 {
        pow_sat(self.p(), self.n)
    }

    fn check_seed(&self, y: &FpVector) -> Result<()> {
        if y.field() != self.p || y.len() != self.seed_len() {
            return domain(format!("seed must lie in F_{}^{}", self.p(), self.seed_len()));
        }
        Ok(())
    }

    fn check_source(&self, x: &FpVector) -> Result<()> {
        if x.field() != self.p || x.len() != self.n {
            return domain(format!("source must lie in F_{}^{}", self.p(), self.n));
        }
        Ok(())
    }
}

pub(crate) fn pow_sat(p: u32, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(p as u128))
}

/// `y ‖ y²`.
pub fn encode_seed(params: &NmExtParams, y: &FpVector) -> Result<FpVector> {
    params.check_seed(y)?;
    y.concat(&vec_square(y)?)
}

/// `⟨x, y ‖ y²⟩`.
pub fn nmext_eval(params: &NmExtParams, x: &FpVector, y: &FpVector) -> Result<u32> {
    params.check_source(x)?;
    inner_product(x, &encode_seed(params, y)?)
}

/// `g_a(y, y') = (y + a·y') ‖ (y² + a·y'²)` for `a ≠ 0`.
pub fn g_a_eval(params: &NmExtParams, a: u32, y: &FpVector, y_prime: &FpVector) -> Result<FpVector> {
    let a = params.p.check(a)?;
    if a == 0 {
        return domain("g_a is only defined for a != 0");
    }
    encode_seed(params, y)?.add(&encode_seed(params, y_prime)?.scale(a)?)
}

/// Encodings `y ‖ y²` of every seed, indexed by [`FpVector::index`].
pub fn seed_encodings(params: &NmExtParams) -> Result<Vec<FpVector>> {
    check_budget(params.seed_count(), PREIMAGE_SCAN_LIMIT)?;
    (0..params.seed_count() as u64)
        .map(|i| encode_seed(params, &FpVector::from_index(params.p, params.seed_len(), i)))
        .collect()
}

/// Largest number of ordered pairs `(y, y')` with `y ≠ y'` sharing one image
/// under `g_a`.
pub fn g_a_max_preimages(params: &NmExtParams, a: u32) -> Result<usize> {
    let a = params.p.check(a)?;
    if a == 0 {
        return domain("g_a is only defined for a != 0");
    }
    let enc = seed_encodings(params)?;
    let scaled: Vec<FpVector> = enc.iter().map(|e| e.scale(a)).collect::<Result<_>>()?;
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for (i, e) in enc.iter().enumerate() {
        for (j, s) in scaled.iter().enumerate() {
            if i != j {
                *counts.entry(e.add(s)?.index()).or_default() += 1;
            }
        }
    }
    Ok(counts.into_values().max().unwrap_or(0))
}

/// Shape of the strong extractor `Z = Y·X1 + X2` over `F_{2^(n/2)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongExtParams {
    n: usize,
    m: usize,
    v: usize,
}

impl StrongExtParams {
    pub fn new(n: usize, m: usize, v: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return domain(format!("source bit length n = {n} must be even and positive"));
        }
        if n / 2 > BinaryField::MAX_DEGREE as usize {
            return domain(format!("n/2 = {} exceeds the supported binary degree", n / 2));
        }
        if v + m > n / 2 {
            return domain(format!("v + m = {} exceeds n/2 = {}", v + m, n / 2));
        }
        Ok(StrongExtParams { n, m, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn field(&self) -> Result<BinaryField> {
        BinaryField::canonical(self.half() as u32)
    }

    /// Packed evaluation; bit `i` of each operand is the coefficient of `x^i`.
    pub fn eval_packed(&self, field: &BinaryField, x1: u64, x2: u64, y: u64) -> u64 {
        field.mul(y, x1) ^ x2
    }

    /// `[z]_1^v` of a packed hash value.
    pub fn tag_of(&self, z: u64) -> u64 {
        z & low_mask(self.v)
    }

    /// `m` bits of `z` following the first `v`.
    pub fn key_of(&self, z: u64) -> u64 {
        (z >> self.v) & low_mask(self.m)
    }
}

pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Hash value with its two truncations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongExtOutput {
    pub z: Vec<u32>,
    v: usize,
    m: usize,
}

impl StrongExtOutput {
    /// The first `v` coefficients of `z`, constant term first.
    pub fn tag_bits(&self) -> &[u32] {
        &self.z[..self.v]
    }

    /// The `m` coefficients after the tag.
    pub fn key_bits(&self) -> &[u32] {
        &self.z[self.v..self.v + self.m]
    }
}

/// `z = y·x1 + x2` in the canonical `F_{2^(n/2)}`, inputs and output as
/// coefficient sequences.
pub fn strong_ext_eval(params: &StrongExtParams, x1: &[u32], x2: &[u32], y: &[u32]) -> Result<StrongExtOutput> {
    let field = params.field()?;
    let z = params.eval_packed(&field, field.from_coeffs(x1)?, field.from_coeffs(x2)?, field.from_coeffs(y)?);
    Ok(StrongExtOutput { z: field.to_coeffs(z), v: params.v, m: params.m })
}
