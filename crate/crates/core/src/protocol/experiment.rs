//! Exhaustive and Monte Carlo security experiments.

use std::collections::HashMap;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::adversary::{Adversary, TableAdversary};
use super::rng::{stream, ROLE_ADVERSARY, ROLE_ALICE, ROLE_BOB, ROLE_SOURCE};
use super::{DwContext, OneRoundContext, ProtocolKind, ProtocolParams, RunOutcome};
use crate::error::{check_budget, domain, Error, Result};
use crate::mac::{key_bias, mac_key_derive, mac_verify};
use crate::scalar::{exact_string, ratio, to_f64, Exact};
use crate::source::Source;

/// Cap on `|support| · seeds · coins` for exhaustive experiments.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    MonteCarlo { trials: u64 },
}

pub(crate) fn ser_exact<S: Serializer>(x: &Exact, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Repr {
        exact: String,
        approx: f64,
    }
    Repr { exact: exact_string(x), approx: to_f64(x) }.serialize(s)
}

pub(crate) fn ser_opt_exact<S: Serializer>(x: &Option<Exact>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => ser_exact(x, s),
        None => s.serialize_none(),
    }
}

/// Exact outcome of [`security_experiment`]. Rates are over the enumerated
/// (or sampled) executions; in Monte Carlo mode they are empirical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecurityReport {
    pub protocol: ProtocolKind,
    pub adversary: String,
    pub mode: String,
    /// Executions enumerated or sampled.
    pub executions: u128,
    #[serde(serialize_with = "ser_exact")]
    pub correctness: Exact,
    /// `Pr[R_A ≠ R_B, both ≠ ⊥]` with the adversary blind to the output key.
    #[serde(serialize_with = "ser_exact")]
    pub robustness_pre: Exact,
    /// Same event when the second tampering step sees the first output key.
    #[serde(serialize_with = "ser_exact")]
    pub robustness_post: Exact,
    #[serde(serialize_with = "ser_exact")]
    pub key_confirmed_rate: Exact,
    #[serde(serialize_with = "ser_opt_exact")]
    pub extraction_distance_a: Option<Exact>,
    #[serde(serialize_with = "ser_opt_exact")]
    pub extraction_distance_b: Option<Exact>,
    /// Confirmations on a modified tagged message.
    #[serde(serialize_with = "ser_exact")]
    pub tampered_confirmations: Exact,
    /// The same event recomputed through the MAC (DW) or hash (one-round).
    #[serde(serialize_with = "ser_exact")]
    pub mac_forgeries: Exact,
    /// Mass of executions where the two counts above disagree.
    #[serde(serialize_with = "ser_exact")]
    pub ledger_discrepancy: Exact,
    #[serde(serialize_with = "ser_exact")]
    pub adversary_errors: Exact,
    /// `ε_Ext + ε_nmExt + ε_MAC`, printed next to the measured rates.
    #[serde(serialize_with = "ser_exact")]
    pub eps_sum: Exact,
    #[serde(serialize_with = "ser_opt_exact")]
    pub key_bias: Option<Exact>,
    pub key_space_deficient: bool,
    pub source_min_entropy: f64,
    pub claimed_k: u32,
}

#[derive(Debug, Clone)]
pub enum Context {
    Dw(DwContext),
    OneRound(OneRoundContext),
}

impl Context {
    pub fn new(params: ProtocolParams) -> Result<Self> {
        Ok(match params.kind {
            ProtocolKind::Dw => Context::Dw(DwContext::new(params)?),
            ProtocolKind::OneRound => Context::OneRound(OneRoundContext::new(params)?),
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        match self {
            Context::Dw(c) => c.params(),
            Context::OneRound(c) => c.params(),
        }
    }

    pub fn seed_count(&self) -> u64 {
        match self {
            Context::Dw(c) => c.seed_count(),
            Context::OneRound(c) => c.seed_count(),
        }
    }

    /// Bob's seed space; 1 for the one-round protocol.
    pub fn yb_count(&self) -> u64 {
        match self {
            Context::Dw(c) => c.yb_count(),
            Context::OneRound(_) => 1,
        }
    }

    pub fn source_count(&self) -> u64 {
        match self {
            Context::Dw(c) => c.source_count(),
            Context::OneRound(c) => c.source_count(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn execute(&self, x: u64, e: u64, ya: u64, yb: u64, coin: u64, adv: &dyn Adversary, post: bool) -> Result<RunOutcome> {
        match self {
            Context::Dw(c) => c.execute(x, e, ya, yb, coin, adv, post),
            Context::OneRound(c) => c.execute(x, e, ya, coin, adv, post),
        }
    }

    /// Whether a changed tagged message is valid, recomputed from the MAC
    /// or hash definition rather than the receiver's decision.
    fn is_forgery(&self, x: u64, o: &RunOutcome) -> Result<bool> {
        if !o.tagged_changed() {
            return Ok(false);
        }
        match self {
            Context::Dw(c) => {
                let key = mac_key_derive(c.z(x, o.ya) as u64, c.mac())?;
                let yb = o.yb_prime.unwrap_or(0);
                mac_verify(c.mac(), key, &c.mac().blocks_of(yb), o.w_prime)
            }
            Context::OneRound(c) => {
                let (x1, x2) = c.split(x);
                let bits = |v: u64| (0..c.half()).map(|i| ((v >> i) & 1) as u32).collect::<Vec<_>>();
                let ext = c.params().ext()?;
                let out = crate::extractors::strong_ext_eval(&ext, &bits(x1), &bits(x2), &bits(o.ya_prime))?;
                let w = out.tag_bits().iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
                Ok(w == o.w_prime)
            }
        }
    }

    /// Runs `execute` and returns `None` for adversary aborts.
    #[allow(clippy::too_many_arguments)]
    fn execute_or_abort(&self, x: u64, e: u64, ya: u64, yb: u64, coin: u64, adv: &dyn Adversary, post: bool) -> Result<Option<RunOutcome>> {
        match self.execute(x, e, ya, yb, coin, adv, post) {
            Ok(o) => Ok(Some(o)),
            Err(Error::Adversary(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

fn opt(v: Option<u64>) -> u64 {
    v.unwrap_or(u64::MAX)
}

type ViewKey = [u64; 8];

#[derive(Default)]
struct Tally {
    total: u128,
    correct: u128,
    robust_pre: u128,
    robust_post: u128,
    confirmed: u128,
    tampered_confirmed: u128,
    forgeries: u128,
    discrepancy: u128,
    aborts: u128,
    // (transcript, e, coin) -> weights per output value, ⊥ last
    views_a: HashMap<ViewKey, Vec<u128>>,
    views_b: HashMap<ViewKey, Vec<u128>>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.correct += other.correct;
        self.robust_pre += other.robust_pre;
        self.robust_post += other.robust_post;
        self.confirmed += other.confirmed;
        self.tampered_confirmed += other.tampered_confirmed;
        self.forgeries += other.forgeries;
        self.discrepancy += other.discrepancy;
        self.aborts += other.aborts;
        for (dst, src) in [(&mut self.views_a, other.views_a), (&mut self.views_b, other.views_b)] {
            for (k, v) in src {
                match dst.get_mut(&k) {
                    Some(d) => d.iter_mut().zip(v).for_each(|(a, b)| *a += b),
                    None => {
                        dst.insert(k, v);
                    }
                }
            }
        }
        self
    }
}

fn fails_robustness(o: &RunOutcome) -> bool {
    matches!((o.r_a, o.r_b), (Some(a), Some(b)) if a != b)
}

#[allow(clippy::too_many_arguments)]
fn tally_one(
    ctx: &Context,
    adv: &dyn Adversary,
    x: u64,
    e: u64,
    ya: u64,
    yb: u64,
    coin: u64,
    w: u128,
    track_views: bool,
    t: &mut Tally,
) -> Result<()> {
    t.total += w;
    let pre = match ctx.execute_or_abort(x, e, ya, yb, coin, adv, false)? {
        Some(o) => o,
        None => {
            t.aborts += w;
            return Ok(());
        }
    };
    if pre.r_a.is_some() && pre.r_a == pre.r_b {
        t.correct += w;
    }
    if fails_robustness(&pre) {
        t.robust_pre += w;
    }
    if pre.key_confirmed {
        t.confirmed += w;
    }
    let changed_confirm = pre.key_confirmed && pre.tagged_changed();
    let forged = ctx.is_forgery(x, &pre)?;
    t.tampered_confirmed += changed_confirm as u128 * w;
    t.forgeries += forged as u128 * w;
    t.discrepancy += (changed_confirm != forged) as u128 * w;
    match ctx.execute_or_abort(x, e, ya, yb, coin, adv, true)? {
        Some(post) if fails_robustness(&post) => t.robust_post += w,
        Some(_) => {}
        None => t.aborts += w,
    }
    if track_views {
        let m = ctx.params().m;
        let slots = (1usize << m) + 1;
        let key = [pre.ya, pre.ya_prime, opt(pre.yb), opt(pre.yb_prime), pre.w, pre.w_prime, e, coin];
        for (map, r) in [(&mut t.views_a, pre.r_a), (&mut t.views_b, pre.r_b)] {
            let slot = r.map(|v| v as usize).unwrap_or(slots - 1);
            map.entry(key).or_insert_with(|| vec![0; slots])[slot] += w;
        }
    }
    Ok(())
}

/// `½ Σ |P(r, view) - P_purify(r, view)|` where `purify` keeps ⊥ and
/// replaces any other key by a uniform one.
fn purify_distance(views: &HashMap<ViewKey, Vec<u128>>, m: u32, total: u128) -> Exact {
    let scale = 1u128 << m;
    let mut acc: u128 = 0;
    for weights in views.values() {
        let keys = &weights[..weights.len() - 1];
        let live: u128 = keys.iter().sum();
        acc += keys.iter().map(|&w| (w * scale).abs_diff(live)).sum::<u128>();
    }
    ratio(acc, 2 * scale * total)
}

pub fn security_experiment(
    params: &ProtocolParams,
    source: &Source,
    adversary: &dyn Adversary,
    mode: Mode,
    master_seed: u64,
) -> Result<SecurityReport> {
    let ctx = Context::new(*params)?;
    if source.x_count() != ctx.source_count() {
        return domain(format!("source has {} values, protocol expects {}", source.x_count(), ctx.source_count()));
    }
    let coins = adversary.coin_space().max(1);
    let (tally, norm, executions) = match mode {
        Mode::Exhaustive => {
            let atoms: Vec<(u64, u64, u64)> = source.atoms().collect();
            let size = atoms.len() as u128 * ctx.seed_count() as u128 * ctx.yb_count() as u128 * coins as u128;
            check_budget(size, EXHAUSTIVE_LIMIT)?;
            let tally = atoms
                .par_iter()
                .map(|&(x, e, w)| {
                    let mut t = Tally::default();
                    for ya in 0..ctx.seed_count() {
                        for yb in 0..ctx.yb_count() {
                            for coin in 0..coins {
                                tally_one(&ctx, adversary, x, e, ya, yb, coin, w as u128, true, &mut t)?;
                            }
                        }
                    }
                    Ok(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            let norm = tally.total;
            (tally, norm, size)
        }
        Mode::MonteCarlo { trials } => {
            if trials == 0 {
                return domain("Monte Carlo mode needs at least one trial");
            }
            let tally = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut t = Tally::default();
                    let (x, e) = source.sample(&mut stream(master_seed, ROLE_SOURCE, i));
                    let ya = stream(master_seed, ROLE_ALICE, i).random_range(0..ctx.seed_count());
                    let yb = stream(master_seed, ROLE_BOB, i).random_range(0..ctx.yb_count());
                    let coin = stream(master_seed, ROLE_ADVERSARY, i).random_range(0..coins);
                    tally_one(&ctx, adversary, x, e, ya, yb, coin, 1, false, &mut t)?;
                    Ok(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
            (tally, trials as u128, trials as u128)
        }
    };
    let rate = |c: u128| ratio(c, norm);
    let exhaustive = matches!(mode, Mode::Exhaustive);
    let (key_bias_value, deficient) = match params.kind {
        ProtocolKind::Dw => {
            let mac = params.mac()?;
            (Some(key_bias(&mac)?), mac.key_space_deficient())
        }
        ProtocolKind::OneRound => (None, false),
    };
    let eps = params.eps_sum();
    Ok(SecurityReport {
        protocol: params.kind,
        adversary: adversary.name(),
        mode: if exhaustive { "exhaustive".into() } else { "monte-carlo".into() },
        executions,
        correctness: rate(tally.correct),
        robustness_pre: rate(tally.robust_pre),
        robustness_post: rate(tally.robust_post),
        key_confirmed_rate: rate(tally.confirmed),
        extraction_distance_a: exhaustive.then(|| purify_distance(&tally.views_a, params.m, norm)),
        extraction_distance_b: exhaustive.then(|| purify_distance(&tally.views_b, params.m, norm)),
        tampered_confirmations: rate(tally.tampered_confirmed),
        mac_forgeries: rate(tally.forgeries),
        ledger_discrepancy: rate(tally.discrepancy),
        adversary_errors: rate(tally.aborts),
        eps_sum: ratio(*eps.numer() as u128, *eps.denom() as u128),
        key_bias: key_bias_value,
        key_space_deficient: deficient,
        source_min_entropy: source.min_entropy(),
        claimed_k: params.k,
    })
}

/// Statistical distance of the honest one-round message-and-key triple
/// `(Y, W, R_A)` from uniform over `2^(n/2) · 2^v · 2^m` values.
pub fn one_round_output_distance(params: &ProtocolParams, source: &Source) -> Result<Exact> {
    let ctx = OneRoundContext::new(*params)?;
    if source.x_count() != ctx.source_count() {
        return domain("source size does not match 2^n");
    }
    check_budget(source.x_count() as u128 * ctx.seed_count() as u128, EXHAUSTIVE_LIMIT)?;
    let cells = ctx.seed_count() * (1u64 << params.v) * (1u64 << params.m);
    let mut counts = vec![0u128; cells as usize];
    for (x, _, w) in source.atoms() {
        for y in 0..ctx.seed_count() {
            let z = ctx.z(x, y);
            let cell = (y << (params.v + params.m)) | (ctx.tag(z) << params.m) | ctx.key(z);
            counts[cell as usize] += w as u128;
        }
    }
    // compare counts / (total·seeds) with 1 / cells
    let mass = source.total() as u128 * ctx.seed_count() as u128;
    let num: u128 = counts.iter().map(|&c| (c * cells as u128).abs_diff(mass)).sum();
    Ok(ratio(num, 2 * mass * cells as u128))
}

/// Best second-step tampering for Protocol DW against a fixed seed map
/// (indexed by `e·seed_count + ya`): for each view `(e, ya, yb, w)` pick the
/// `(yb', w')` maximizing the posterior mass of `R_A ∉ {R_B, ⊥}`. Ties go
/// to the smallest `(yb', w')`.
pub fn optimal_dw_tamper(params: &ProtocolParams, source: &Source, seed_map: &[u64]) -> Result<TableAdversary> {
    let ctx = DwContext::new(*params)?;
    let seeds = ctx.seed_count();
    if seed_map.len() as u64 != seeds * source.e_count() || seed_map.iter().any(|&s| s >= seeds) {
        return domain("seed map must send every (e, ya) to a seed");
    }
    let tags = 1u64 << params.t;
    let yb_count = ctx.yb_count();
    check_budget(
        source.e_count() as u128 * seeds as u128 * (yb_count * tags) as u128 * (yb_count * tags) as u128 * source.x_count() as u128,
        EXHAUSTIVE_LIMIT * 16,
    )?;
    let mut table = TableAdversary {
        label: "optimal-table".into(),
        seed_count: seeds,
        seed_map: seed_map.to_vec(),
        tagged_map: HashMap::new(),
    };
    for e in 0..source.e_count() {
        for ya in 0..seeds {
            let ya_p = seed_map[(e * seeds + ya) as usize];
            for yb in 0..yb_count {
                let mut scores: HashMap<u64, Vec<u128>> = HashMap::new();
                for x in 0..source.x_count() {
                    let w = source.weight(x, e) as u128;
                    if w.is_zero() {
                        continue;
                    }
                    let sent_w = ctx.tag(ctx.z(x, ya_p), yb);
                    let row = scores.entry(sent_w).or_insert_with(|| vec![0; (yb_count * tags) as usize]);
                    let z = ctx.z(x, ya);
                    let r_b = ctx.ext_output(x, yb);
                    for ybp in 0..yb_count {
                        if ctx.ext_output(x, ybp) != r_b {
                            row[(ybp * tags + ctx.tag(z, ybp)) as usize] += w;
                        }
                    }
                }
                for (w_sent, row) in scores {
                    let (best, _) = row
                        .iter()
                        .enumerate()
                        .fold((0usize, 0u128), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
                    let best = best as u64;
                    table.tagged_map.insert((e, ya, yb, w_sent), (best / tags, best % tags));
                }
            }
        }
    }
    Ok(table)
}
