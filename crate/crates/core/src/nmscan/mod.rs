//! Exhaustive non-malleability scans on the classical slice.
//!
//! The adversary sees `e` and the seed `y` and substitutes `y' = f_e(y)`
//! with `f_e(y) ≠ y`. Distance is convex in the strategy, so scanning the
//! deterministic fixed-point-free maps gives the worst case.

pub mod oracle;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_budget, domain, Result};
use crate::extractors::{nmext_eval, NmExtParams};
use crate::field::FpVector;
use crate::protocol::experiment::ser_exact;
use crate::scalar::{ratio, to_f64, Exact};
use crate::source::Source;

/// Exhaustive scans refuse more strategies than this.
pub const STRATEGY_LIMIT: u128 = 1 << 20;
/// Cap on `d_X · d_Y · |E|` for the evaluation tables.
pub const TABLE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct NmScanRow {
    pub index: u128,
    /// `strategy[e][y] = y'`.
    pub strategy: Vec<Vec<usize>>,
    #[serde(serialize_with = "ser_exact")]
    pub distance: Exact,
    #[serde(serialize_with = "ser_exact")]
    pub oracle: Exact,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NmScanReport {
    pub p: u32,
    pub n: usize,
    pub e_count: u64,
    pub strategies_total: u128,
    pub mode: ScanMode,
    pub rows: Vec<NmScanRow>,
    #[serde(serialize_with = "ser_exact")]
    pub max: Exact,
    #[serde(serialize_with = "ser_exact")]
    pub mean: Exact,
    pub all_agree: bool,
    pub source_min_entropy: f64,
    /// Min-entropy at which the extractor theorem guarantees distance
    /// `max`; informational only.
    pub theorem_threshold: Option<f64>,
}

/// `(d_Y − 1)^{d_Y·|E|}`, saturating.
pub fn strategy_count(d_y: u64, e_count: u64) -> u128 {
    let digits = d_y.saturating_mul(e_count);
    (0..digits).try_fold(1u128, |acc, _| acc.checked_mul(d_y as u128 - 1)).unwrap_or(u128::MAX)
}

/// Mixed-radix decoding: digit `(e, y)` picks among the `d_Y − 1` seeds
/// other than `y`, in increasing order.
pub fn decode_strategy(mut index: u128, d_y: usize, e_count: usize) -> Vec<Vec<usize>> {
    let base = (d_y - 1) as u128;
    (0..e_count)
        .map(|_| {
            (0..d_y)
                .map(|y| {
                    let d = (index % base) as usize;
                    index /= base;
                    if d < y { d } else { d + 1 }
                })
                .collect()
        })
        .collect()
}

/// Builds `σ_{ZZ'YY'E}` and `U_Z ⊗ σ_{Z'YY'E}` as count arrays and returns
/// half their `ℓ₁` distance.
pub fn structured_distance(p: usize, d_y: usize, ext: &[u32], source: &Source, strategy: &[Vec<usize>]) -> Exact {
    let e_count = strategy.len();
    let d_x = source.x_count() as usize;
    // index ((((z·p + z')·d_y + y)·d_y + y')·e_count + e)
    let mut sigma = vec![0u64; p * p * d_y * d_y * e_count];
    for x in 0..d_x {
        for (e, fe) in strategy.iter().enumerate() {
            let w = source.weight(x as u64, e as u64);
            if w == 0 {
                continue;
            }
            for (y, &y2) in fe.iter().enumerate() {
                let z = ext[x * d_y + y] as usize;
                let z2 = ext[x * d_y + y2] as usize;
                sigma[(((z * p + z2) * d_y + y) * d_y + y2) * e_count + e] += w;
            }
        }
    }
    let rest = p * d_y * d_y * e_count;
    let mut marginal = vec![0u64; rest];
    for z in 0..p {
        for (m, s) in marginal.iter_mut().zip(&sigma[z * rest..(z + 1) * rest]) {
            *m += s;
        }
    }
    let mut num: u128 = 0;
    for z in 0..p {
        for (i, &m) in marginal.iter().enumerate() {
            num += (p as u128 * sigma[z * rest + i] as u128).abs_diff(m as u128);
        }
    }
    ratio(num, 2 * p as u128 * d_y as u128 * source.total() as u128)
}

/// `nmExt(x, y)` for every pair, row-major in `x`.
pub fn ext_table(params: &NmExtParams) -> Result<Vec<u32>> {
    let field = params.field();
    let d_x = params.source_count() as u64;
    let d_y = params.seed_count() as u64;
    let ys: Vec<FpVector> = (0..d_y).map(|y| FpVector::from_index(field, params.seed_len(), y)).collect();
    let mut out = Vec::with_capacity((d_x * d_y) as usize);
    for x in 0..d_x {
        let xv = FpVector::from_index(field, params.n(), x);
        for y in &ys {
            out.push(nmext_eval(params, &xv, y)?);
        }
    }
    Ok(out)
}

/// `(n/2 + 6)·log p − 1 + 4·log(1/ε)` in bits.
pub fn theorem_threshold(p: u32, n: usize, eps: f64) -> Option<f64> {
    (eps > 0.0).then(|| (n as f64 / 2.0 + 6.0) * (p as f64).log2() - 1.0 + 4.0 * (1.0 / eps).log2())
}

pub fn nm_distance_scan(params: &NmExtParams, source: &Source, mode: ScanMode) -> Result<NmScanReport> {
    if source.x_count() as u128 != params.source_count() {
        return domain(format!("source has {} values, expected {}", source.x_count(), params.source_count()));
    }
    let d_y = params.seed_count() as usize;
    let e_count = source.e_count();
    check_budget(params.source_count() * d_y as u128 * e_count as u128, TABLE_LIMIT)?;
    let total = strategy_count(d_y as u64, e_count);
    // a sample at least as large as the space is replaced by the full scan
    let mode = match mode {
        ScanMode::Sampled { count, .. } if count as u128 >= total => ScanMode::Exhaustive,
        m => m,
    };
    let indices: Vec<u128> = match mode {
        ScanMode::Exhaustive => {
            check_budget(total, STRATEGY_LIMIT)?;
            (0..total).collect()
        }
        ScanMode::Sampled { count, seed } => {
            check_budget(count as u128, STRATEGY_LIMIT)?;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            // uniform over strategies, drawn digit by digit so huge counts work
            (0..count)
                .map(|_| {
                    (0..d_y as u64 * e_count).fold(0u128, |acc, _| {
                        acc.wrapping_mul(d_y as u128 - 1).wrapping_add(rng.random_range(0..d_y as u128 - 1))
                    })
                })
                .collect()
        }
    };
    let ext = ext_table(params)?;
    let oracle_ext = oracle::ext_table(params.p() as u64, params.n());
    let p = params.p() as usize;
    let rows: Vec<NmScanRow> = indices
        .par_iter()
        .map(|&index| {
            let strategy = decode_strategy(index, d_y, e_count as usize);
            let distance = structured_distance(p, d_y, &ext, source, &strategy);
            let oracle = oracle::oracle_distance(p as u64, params.n(), &oracle_ext, source, &strategy);
            let agree = distance == oracle;
            NmScanRow { index, strategy, distance, oracle, agree }
        })
        .collect();
    let max = rows.iter().map(|r| r.distance.clone()).max().unwrap_or_else(Exact::zero);
    let sum: Exact = rows.iter().map(|r| r.distance.clone()).sum();
    let mean = if rows.is_empty() { Exact::zero() } else { sum / ratio(rows.len() as u128, 1) };
    Ok(NmScanReport {
        p: params.p(),
        n: params.n(),
        e_count,
        strategies_total: total,
        mode,
        all_agree: rows.iter().all(|r| r.agree),
        source_min_entropy: source.min_entropy(),
        theorem_threshold: theorem_threshold(params.p(), params.n(), to_f64(&max)),
        rows,
        max,
        mean,
    })
}
