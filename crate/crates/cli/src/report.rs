//! The `report` battery: every exactly checkable property at desk scale,
//! one pass/fail entry each.

use nmext_core::cq_lab::{leak_scan, GameTable};
use nmext_core::extractors::{g_a_max_preimages, NmExtParams};
use nmext_core::mac::{forgery_bound, mac_forgery_advantage, MacParams};
use nmext_core::nmscan::{nm_distance_scan, ScanMode};
use nmext_core::protocol::adversary::AdversarySpec;
use nmext_core::protocol::experiment::{one_round_output_distance, security_experiment, Mode};
use nmext_core::protocol::ProtocolParams;
use nmext_core::scalar::exact_string;
use nmext_core::source::Source;
use nmext_core::{Exact, Result};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::sweeps;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check { name: name.into(), pass, detail }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn preimage_check() -> Result<Check> {
    let mut worst = 0;
    let mut count = 0;
    for p in [3u32, 5, 7] {
        for n in [2usize, 4] {
            let params = NmExtParams::new(p, n)?;
            for a in 1..p {
                worst = worst.max(g_a_max_preimages(&params, a)?);
                count += 1;
            }
        }
    }
    Ok(Check::new("collision-preimages", worst <= 2, format!("{count} maps, largest fibre {worst}")))
}

fn sweep_check(name: &str, cases: u64, seed: u64, f: fn(&sweeps::LabCase) -> Result<Vec<sweeps::SweepRow>>) -> Result<Check> {
    let rows = sweeps::sweep(cases, |id| f(&sweeps::lab_case(seed, id)?))?;
    let bad = rows.iter().filter(|r| r.violated()).count();
    let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(Check::new(name, bad == 0, format!("{} rows, {bad} violations, worst margin {worst:e}", rows.len())))
}

pub fn guess_check(cases: u64, seed: u64) -> Result<Check> {
    let rows = sweeps::sweep(cases, |id| sweeps::guess_rows(id, &sweeps::guess_case(seed, id)?))?;
    let bad = rows.iter().filter(|r| r.violated()).count();
    Ok(Check::new("guess-measurement", bad == 0, format!("{} rows, {bad} violations", rows.len())))
}

pub fn game_check(seed: u64) -> Result<Check> {
    let mut detail = Vec::new();
    let mut violations = 0;
    for p in [3u32, 5] {
        let params = NmExtParams::new(p, 2)?;
        for a in 1..p {
            let r = leak_scan(&GameTable::from_g_a(&params, a)?, 200, seed ^ a as u64)?;
            violations += r.violations;
            detail.push(format!("p={p} a={a}: {:?} {} leaks", r.coverage, r.enumerated + r.sampled + r.linear));
        }
    }
    Ok(Check::new("game-bound", violations == 0, format!("{violations} violations; {}", detail.join("; "))))
}

pub fn mac_check() -> Result<Check> {
    let mut pass = true;
    let mut detail = Vec::new();
    for (t, blocks) in [(2u32, 1u32), (3, 1), (2, 2), (3, 2)] {
        let params = MacParams::uniform(t, blocks)?;
        let adv = mac_forgery_advantage(&params)?;
        let bound = forgery_bound(&params);
        pass &= if blocks == 1 { adv == bound } else { adv <= bound };
        detail.push(format!("t={t} L={blocks}: {}", exact_string(&adv)));
    }
    Ok(Check::new("mac-forgery", pass, detail.join(", ")))
}

pub fn nm_scan_check() -> Result<Check> {
    let params = NmExtParams::new(3, 2)?;
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, source) in [("uniform", Source::uniform(9)?), ("constant", Source::constant(9, 0)?), ("half", Source::prefix(9, 5)?)] {
        let r = nm_distance_scan(&params, &source, ScanMode::Exhaustive)?;
        pass &= r.all_agree && r.rows.len() == 8;
        detail.push(format!("{name}: max {}", exact_string(&r.max)));
    }
    Ok(Check::new("nm-scan-oracle", pass, detail.join(", ")))
}

pub fn correctness_check() -> Result<Check> {
    let dw = ProtocolParams::dw(3, 2, 2, 2, 2)?;
    let identity = AdversarySpec::Identity.build(&dw)?;
    let a = security_experiment(&dw, &Source::uniform(9)?, identity.as_ref(), Mode::Exhaustive, 0)?;
    let one = ProtocolParams::one_round_with(4, 1)?;
    let identity = AdversarySpec::Identity.build(&one)?;
    let b = security_experiment(&one, &Source::uniform(16)?, identity.as_ref(), Mode::Exhaustive, 0)?;
    let d = one_round_output_distance(&one, &Source::uniform(16)?)?;
    let pass = a.correctness == Exact::one() && b.correctness == Exact::one() && d.is_zero();
    Ok(Check::new(
        "protocol-correctness",
        pass,
        format!("dw {}, one-round {}, output distance {}", exact_string(&a.correctness), exact_string(&b.correctness), exact_string(&d)),
    ))
}

pub fn ledger_check() -> Result<Check> {
    let params = ProtocolParams::dw(3, 2, 2, 2, 2)?;
    let source = Source::uniform(9)?;
    let mut pass = true;
    let mut detail = Vec::new();
    for spec in ["identity", "shift-seed:1", "xor:1:0", "xor:0:1", "xor:3:2", "garbage"] {
        let adv = spec.parse::<AdversarySpec>()?.build(&params)?;
        let r = security_experiment(&params, &source, adv.as_ref(), Mode::Exhaustive, 0)?;
        pass &= r.ledger_discrepancy.is_zero();
        detail.push(format!("{spec}: {}", exact_string(&r.robustness_pre)));
    }
    Ok(Check::new("mac-ledger", pass, detail.join(", ")))
}

/// Runs every check; `cases` random states per sweep.
pub fn battery(cases: u64, guess_cases: u64, seed: u64) -> Result<Vec<Check>> {
    Ok(vec![
        preimage_check()?,
        sweep_check("xor-lemmas", cases, seed, sweeps::xor_rows)?,
        sweep_check("collision-sandwich", cases, seed, sweeps::sandwich_rows)?,
        guess_check(guess_cases, seed)?,
        game_check(seed)?,
        mac_check()?,
        nm_scan_check()?,
        correctness_check()?,
        ledger_check()?,
    ])
}
