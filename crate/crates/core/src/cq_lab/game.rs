//! The classical slice of the guessing game behind the extractor bound.
//!
//! Eve sees `e = leak(x)` and a uniform seed `y`, picks `y' ≠ y` and a bit
//! `b ∈ F_p`, and wins when `b = ⟨x, g(y, y')⟩`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{check_budget, domain, Result};
use crate::extractors::{g_a_eval, pow_sat, seed_encodings, NmExtParams};
use crate::field::{FieldSpec, FpVector};
use crate::scalar::{exact_string, ratio, to_f64, Exact, Scalar};

pub const GAME_LIMIT: u128 = 1 << 24;
/// Leak functions are enumerated outright up to this many.
pub const LEAK_ENUM_LIMIT: u128 = 1 << 24;

/// `⟨x, g(y, y')⟩` for every seed pair and every source value.
#[derive(Debug, Clone)]
pub struct GameTable {
    p: u32,
    n: usize,
    d_y: usize,
    d_x: usize,
    /// `ip[(y·d_y + y')·d_x + x]`; rows with `y = y'` are unused.
    ip: Vec<u32>,
}

impl GameTable {
    pub fn from_fn(p: u32, n: usize, mut g: impl FnMut(usize, usize) -> Result<FpVector>) -> Result<Self> {
        let field = FieldSpec::new(p)?;
        if n == 0 || !n.is_multiple_of(2) {
            return domain("n must be positive and even");
        }
        let d_x = pow_sat(p, n);
        let d_y = pow_sat(p, n / 2);
        check_budget(d_x.saturating_mul(d_y).saturating_mul(d_y), GAME_LIMIT)?;
        let (d_x, d_y) = (d_x as usize, d_y as usize);
        let xs: Vec<FpVector> = (0..d_x).map(|x| FpVector::from_index(field, n, x as u64)).collect();
        let mut ip = vec![0; d_y * d_y * d_x];
        for y in 0..d_y {
            for y2 in (0..d_y).filter(|&y2| y2 != y) {
                let v = g(y, y2)?;
                if v.len() != n || v.p() != p {
                    return domain("g must return vectors in F_p^n");
                }
                for (x, xv) in xs.iter().enumerate() {
                    ip[(y * d_y + y2) * d_x + x] = crate::field::inner_product(xv, &v)?;
                }
            }
        }
        Ok(GameTable { p, n, d_y, d_x, ip })
    }

    /// `g = g_a`, with seeds indexed as in [`seed_encodings`].
    pub fn from_g_a(params: &NmExtParams, a: u32) -> Result<Self> {
        let seeds = seed_encodings(params)?;
        let field = params.field();
        let half = params.seed_len();
        let ys: Vec<FpVector> = (0..seeds.len()).map(|i| FpVector::from_index(field, half, i as u64)).collect();
        GameTable::from_fn(params.p(), params.n(), |y, y2| g_a_eval(params, a, &ys[y], &ys[y2]))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn d_y(&self) -> usize {
        self.d_y
    }

    pub fn inner(&self, y: usize, y2: usize, x: usize) -> u32 {
        self.ip[(y * self.d_y + y2) * self.d_x + x]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameOutcome<S> {
    pub win: S,
    /// `2^{-H_min(X|E)}`.
    pub p_guess: S,
    pub bound_holds: bool,
}

impl<S: Scalar> GameOutcome<S> {
    /// `√(2·d_Y·p_guess) − (win − 1/p)` in floating point.
    pub fn margin(&self, p: u32, d_y: usize) -> f64 {
        let win = self.win.to_f64().unwrap_or(f64::NAN);
        let pg = self.p_guess.to_f64().unwrap_or(f64::NAN);
        (2.0 * d_y as f64 * pg).sqrt() - (win - 1.0 / p as f64)
    }
}

fn bound_holds<S: Scalar>(win: &S, p_guess: &S, p: u32, d_y: usize) -> bool {
    let excess = win.clone() - S::from_ratio(1, p as u64);
    !excess.is_positive() || excess.clone() * excess <= S::from_ratio(2 * d_y as u64, 1) * p_guess.clone()
}

/// Exact optimum by best response per `(e, y)`.
pub fn game_best_classical<S: Scalar>(table: &GameTable, leak: &[usize], e_count: usize, pmf: &[S]) -> Result<GameOutcome<S>> {
    if leak.len() != table.d_x || pmf.len() != table.d_x {
        return domain("leak and pmf must cover every source value");
    }
    if leak.iter().any(|&e| e >= e_count) {
        return domain("leak value outside the side-information alphabet");
    }
    let p = table.p as usize;
    let d_y = table.d_y;
    let mut win = S::zero();
    let mut p_guess = S::zero();
    for e in 0..e_count {
        let xs: Vec<usize> = (0..table.d_x).filter(|&x| leak[x] == e).collect();
        let mut best_x = S::zero();
        for &x in &xs {
            if pmf[x] > best_x {
                best_x = pmf[x].clone();
            }
        }
        p_guess = p_guess + best_x;
        for y in 0..d_y {
            let mut best = S::zero();
            for y2 in (0..d_y).filter(|&y2| y2 != y) {
                let mut mass = vec![S::zero(); p];
                for &x in &xs {
                    let b = table.inner(y, y2, x) as usize;
                    mass[b] = mass[b].clone() + pmf[x].clone();
                }
                for m in mass {
                    if m > best {
                        best = m;
                    }
                }
            }
            win = win + best;
        }
    }
    win = win / S::from_ratio(d_y as u64, 1);
    let holds = bound_holds(&win, &p_guess, table.p, d_y);
    Ok(GameOutcome { win, p_guess, bound_holds: holds })
}

/// How a [`leak_scan`] covered the leak functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakCoverage {
    /// Every function `x → [0, p)` was checked.
    Exhaustive,
    /// Partitions with fewer than `min_certified_classes` classes were
    /// checked; the rest satisfy the bound for any strategy.
    Certified,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeakScanReport {
    pub p: u32,
    pub n: usize,
    pub coverage: LeakCoverage,
    /// `p^{p^n}`, saturating.
    pub functions_total: u128,
    /// Leak functions whose bound does not follow from the class count alone.
    pub min_certified_classes: u64,
    pub enumerated: u64,
    pub sampled: u64,
    pub linear: u64,
    pub violations: u64,
    pub worst_margin: f64,
    #[serde(serialize_with = "crate::protocol::experiment::ser_exact")]
    pub max_win: Exact,
}

/// Uniform-source win probability numerator: `Σ_{e,y} max count`, over
/// `d_Y·p^n`.
fn uniform_win_count(table: &GameTable, leak: &[usize], e_count: usize, counts: &mut Vec<u32>) -> u64 {
    let p = table.p as usize;
    let d_y = table.d_y;
    let stride = d_y * d_y * p;
    counts.clear();
    counts.resize(e_count * stride, 0);
    for y in 0..d_y {
        for y2 in (0..d_y).filter(|&y2| y2 != y) {
            let row = &table.ip[(y * d_y + y2) * table.d_x..][..table.d_x];
            for (x, &b) in row.iter().enumerate() {
                counts[leak[x] * stride + (y * d_y + y2) * p + b as usize] += 1;
            }
        }
    }
    let mut total = 0u64;
    for e in 0..e_count {
        for y in 0..d_y {
            let slice = &counts[e * stride + y * d_y * p..][..d_y * p];
            total += *slice.iter().max().unwrap() as u64;
        }
    }
    total
}

struct ScanState<'a> {
    table: &'a GameTable,
    counts: Vec<u32>,
    checked: u64,
    violations: u64,
    worst_margin: f64,
    max_win: u64,
}

impl ScanState<'_> {
    fn check(&mut self, leak: &[usize], e_count: usize) {
        let t = self.table;
        let classes = {
            let mut seen = vec![false; e_count];
            leak.iter().for_each(|&e| seen[e] = true);
            seen.iter().filter(|&&s| s).count()
        };
        let num = uniform_win_count(t, leak, e_count, &mut self.counts);
        let denom = (t.d_y * t.d_x) as u128;
        let win = ratio(num as u128, denom);
        let p_guess = ratio(classes as u128, t.d_x as u128);
        if !bound_holds(&win, &p_guess, t.p, t.d_y) {
            self.violations += 1;
        }
        let margin = (2.0 * t.d_y as f64 * to_f64(&p_guess)).sqrt() - (to_f64(&win) - 1.0 / t.p as f64);
        self.worst_margin = self.worst_margin.min(margin);
        // win numerators share the denominator, so compare them directly
        self.max_win = self.max_win.max(num);
        self.checked += 1;
    }
}

/// Restricted growth strings of length `len` with at most `max_blocks` blocks.
fn for_each_partition(len: usize, max_blocks: usize, limit: u128, f: &mut impl FnMut(&[usize])) -> Result<u128> {
    fn rec(s: &mut Vec<usize>, len: usize, used: usize, max_blocks: usize, count: &mut u128, limit: u128, f: &mut impl FnMut(&[usize])) -> Result<()> {
        if s.len() == len {
            *count += 1;
            check_budget(*count, limit)?;
            f(s);
            return Ok(());
        }
        let top = (used + 1).min(max_blocks);
        for b in 0..top {
            s.push(b);
            rec(s, len, used.max(b + 1), max_blocks, count, limit, f)?;
            s.pop();
        }
        Ok(())
    }
    let mut count = 0;
    if max_blocks > 0 {
        rec(&mut Vec::with_capacity(len), len, 0, max_blocks, &mut count, limit, f)?;
    }
    Ok(count)
}

/// Checks the game bound for a uniform source against every leak function
/// with at most `p` outputs.
///
/// For a uniform source `p_guess = k/p^n` where `k` is the number of
/// distinct leak values, and `win − 1/p ≤ 1 − 1/p` always. So any leak with
/// `(p−1)²·p^n ≤ 2·d_Y·k·p²` satisfies the bound whatever the strategy; when
/// the full function space is too large only the leaks below that class
/// count are enumerated (as set partitions, since relabelling `e` changes
/// nothing). `samples` random leaks and all linear leaks `⟨c, x⟩` are
/// checked on top.
pub fn leak_scan(table: &GameTable, samples: u64, seed: u64) -> Result<LeakScanReport> {
    let p = table.p as u128;
    let d_x = table.d_x;
    let functions_total = (0..d_x).try_fold(1u128, |acc, _| acc.checked_mul(p)).unwrap_or(u128::MAX);
    let denom = (2 * table.d_y as u128) * p * p;
    let min_certified = ((p - 1) * (p - 1) * d_x as u128).div_ceil(denom).max(1) as u64;
    let mut st = ScanState { table, counts: Vec::new(), checked: 0, violations: 0, worst_margin: f64::INFINITY, max_win: 0 };
    let e_count = table.p as usize;
    let coverage;
    if functions_total <= LEAK_ENUM_LIMIT {
        coverage = LeakCoverage::Exhaustive;
        let mut leak = vec![0usize; d_x];
        for _ in 0..functions_total {
            st.check(&leak, e_count);
            for v in leak.iter_mut() {
                *v += 1;
                if *v < e_count {
                    break;
                }
                *v = 0;
            }
        }
    } else {
        coverage = LeakCoverage::Certified;
        let blocks = (min_certified as usize - 1).min(e_count);
        for_each_partition(d_x, blocks, LEAK_ENUM_LIMIT, &mut |leak| st.check(leak, e_count))?;
    }
    let enumerated = st.checked;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut leak = vec![0usize; d_x];
    for _ in 0..samples {
        leak.iter_mut().for_each(|v| *v = rng.random_range(0..e_count));
        st.check(&leak, e_count);
    }
    let field = FieldSpec::new(table.p)?;
    for c in 0..d_x {
        let cv = FpVector::from_index(field, table.n, c as u64);
        for (x, v) in leak.iter_mut().enumerate() {
            *v = crate::field::inner_product(&FpVector::from_index(field, table.n, x as u64), &cv)? as usize;
        }
        st.check(&leak, e_count);
    }
    Ok(LeakScanReport {
        p: table.p,
        n: table.n,
        coverage,
        functions_total,
        min_certified_classes: min_certified,
        enumerated,
        sampled: samples,
        linear: d_x as u64,
        violations: st.violations,
        worst_margin: st.worst_margin,
        max_win: ratio(st.max_win as u128, (table.d_y * d_x) as u128),
    })
}

impl LeakScanReport {
    pub fn max_win_string(&self) -> String {
        exact_string(&self.max_win)
    }
}
