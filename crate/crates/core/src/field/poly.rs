//! Dense polynomials over `F_p`, coefficients constant term first.

use super::FieldSpec;
use crate::error::{check_budget, domain, Result};

/// Upper bound on `p^k` for the exhaustive irreducible scan.
pub const IRREDUCIBLE_SCAN_LIMIT: u128 = 1 << 20;

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn mul(f: FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = f.p() as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    out.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub(crate) fn rem_monic(f: FieldSpec, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(lead, mi));
        }
        trim(&mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `idx`, most significant digit on the constant term. Walking `idx`
/// upward therefore visits candidates in constant-term-first lexicographic order.
fn monic_from_lex_index(p: u32, deg: usize, mut idx: u64) -> Vec<u32> {
    let mut c = vec![0u32; deg + 1];
    c[deg] = 1;
    for i in (0..deg).rev() {
        c[i] = (idx % p as u64) as u32;
        idx /= p as u64;
    }
    c
}

fn pow_u128(p: u32, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(p as u128);
    }
    acc
}

/// True iff the monic polynomial `poly` (degree >= 1) has no monic factor of
/// degree between 1 and deg/2.
pub fn is_irreducible(f: FieldSpec, poly: &[u32]) -> Result<bool> {
    let mut poly = poly.to_vec();
    trim(&mut poly);
    if poly.len() < 2 || *poly.last().unwrap() != 1 {
        return domain("irreducibility test needs a monic polynomial of degree >= 1");
    }
    for &c in &poly {
        f.check(c)?;
    }
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        check_budget(pow_u128(f.p(), d), IRREDUCIBLE_SCAN_LIMIT)?;
        let count = (f.p() as u64).pow(d as u32);
        for idx in 0..count {
            let cand = monic_from_lex_index(f.p(), d, idx);
            if rem_monic(f, &poly, &cand).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lexicographically smallest monic irreducible polynomial of degree `k` over
/// `F_p`, comparing coefficients constant term first. Returned with length
/// `k + 1`.
pub fn find_irreducible(p: u32, k: usize) -> Result<Vec<u32>> {
    let f = FieldSpec::new(p)?;
    if k == 0 {
        return domain("extension degree must be at least 1");
    }
    check_budget(pow_u128(p, k), IRREDUCIBLE_SCAN_LIMIT)?;
    let count = (p as u64).pow(k as u32);
    for idx in 0..count {
        let cand = monic_from_lex_index(p, k, idx);
        if is_irreducible(f, &cand)? {
            return Ok(cand);
        }
    }
    // Irreducibles exist in every degree, so the scan always finds one.
    unreachable!("no irreducible polynomial of degree {k} over F_{p}")
}
