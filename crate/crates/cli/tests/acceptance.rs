//! Acceptance criteria 1 to 10, one PASS/FAIL line each. Runs as a plain
//! binary (`harness = false`) and exits nonzero if any criterion fails.

mod support;

use std::time::Instant;

use nmext_cli::sweeps;
use nmext_core::cq_lab::{leak_scan, GameTable, LeakCoverage};
use nmext_core::extractors::{g_a_max_preimages, NmExtParams};
use nmext_core::mac::{forgery_bound, mac_forgery_advantage, MacParams};
use nmext_core::nmscan::{nm_distance_scan, ScanMode};
use nmext_core::protocol::adversary::{Adversary, AdversaryView, Garbage, XorTagged};
use nmext_core::protocol::experiment::{one_round_output_distance, optimal_dw_tamper, security_experiment, Mode, SecurityReport};
use nmext_core::protocol::ProtocolParams;
use nmext_core::scalar::{exact_string, ratio};
use nmext_core::source::Source;
use nmext_core::{Exact, Result};
use num_traits::{One, Zero};

/// Margin tolerance for floating-point lemma checks.
const MARGIN_TOL: f64 = 1e-9;

type Outcome = Result<(bool, String)>;

fn criterion(n: u32, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    println!(
        "criterion {n:>2} {name}: {} ({detail}; {:.2}s)",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    pass
}

/// Largest fibre of `g_a` over pairs `y ≠ y'` for n = 2, counted straight
/// from `(y + a·y', y² + a·y'²)`.
fn brute_preimages(p: u64, a: u64) -> usize {
    let mut counts = vec![0usize; (p * p) as usize];
    for y in 0..p {
        for y2 in (0..p).filter(|&y2| y2 != y) {
            let c0 = (y + a * y2) % p;
            let c1 = (y * y + a * y2 * y2) % p;
            counts[(c0 + p * c1) as usize] += 1;
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

fn c1() -> Outcome {
    let mut worst = 0;
    let mut maps = 0;
    let mut disagreements = 0;
    for p in [3u32, 5, 7] {
        for n in [2usize, 4] {
            let params = NmExtParams::new(p, n)?;
            for a in 1..p {
                let m = g_a_max_preimages(&params, a)?;
                if n == 2 && m != brute_preimages(p as u64, a as u64) {
                    disagreements += 1;
                }
                worst = worst.max(m);
                maps += 1;
            }
        }
    }
    Ok((worst <= 2 && disagreements == 0, format!("{maps} maps, largest fibre {worst}, {disagreements} oracle disagreements")))
}

fn sweep_outcome(rows: &[sweeps::SweepRow], states: u64) -> (bool, String) {
    let bad = rows.iter().filter(|r| r.violated()).count();
    let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let exact_rows = rows.iter().filter(|r| r.exact_violation.is_some()).count();
    (
        bad == 0 && worst >= -MARGIN_TOL,
        format!("{states} states, {} rows ({exact_rows} exact), {bad} violations, worst margin {worst:.3e}", rows.len()),
    )
}

fn c2() -> Outcome {
    let rows = sweeps::sweep(1000, |id| sweeps::xor_rows(&sweeps::lab_case(7, id)?))?;
    let agree = rows.iter().filter(|r| r.variant.ends_with("-agree")).count();
    let (pass, detail) = sweep_outcome(&rows, 1000);
    Ok((pass && agree > 0, format!("{detail}, {agree} exact-vs-matrix comparisons")))
}

fn c3() -> Outcome {
    let rows = sweeps::sweep(1000, |id| sweeps::sandwich_rows(&sweeps::lab_case(11, id)?))?;
    let identity_worst = rows.iter().filter(|r| r.variant.ends_with("-identity")).map(|r| r.lhs.abs()).fold(0.0, f64::max);
    let gamma_max = rows.iter().filter(|r| r.variant.ends_with("-gamma")).map(|r| r.lhs).fold(0.0, f64::max);
    let (pass, detail) = sweep_outcome(&rows, 1000);
    Ok((
        pass && identity_worst <= MARGIN_TOL && gamma_max <= 1.0 + MARGIN_TOL,
        format!("{detail}, identity residual {identity_worst:.3e}, max collision probability {gamma_max:.6}"),
    ))
}

fn c4() -> Outcome {
    let rows = sweeps::sweep(200, |id| sweeps::guess_rows(id, &sweeps::guess_case(13, id)?))?;
    let worst = |v: &str| rows.iter().filter(|r| r.variant == v).map(|r| r.margin).fold(0.0, f64::min);
    let (pass, detail) = sweep_outcome(&rows, 200);
    Ok((
        pass,
        format!(
            "{detail}; success gap {:.3e}, negative eigenvalue {:.3e}, completeness {:.3e}",
            -worst("guess-success"),
            -worst("guess-psd"),
            -worst("guess-completeness")
        ),
    ))
}

fn c5() -> Outcome {
    let mut violations = 0;
    let mut parts = Vec::new();
    let mut exhaustive_p3 = true;
    for p in [3u32, 5] {
        let params = NmExtParams::new(p, 2)?;
        let mut leaks = 0;
        let mut coverage = LeakCoverage::Exhaustive;
        for a in 1..p {
            let r = leak_scan(&GameTable::from_g_a(&params, a)?, 500, 17 + a as u64)?;
            violations += r.violations;
            leaks += r.enumerated + r.sampled + r.linear;
            coverage = r.coverage;
            if p == 3 {
                exhaustive_p3 &= r.coverage == LeakCoverage::Exhaustive && r.enumerated == 19683;
            }
        }
        parts.push(format!("p={p}: {coverage:?}, {leaks} leaks"));
    }
    Ok((violations == 0 && exhaustive_p3, format!("{violations} violations; {}", parts.join("; "))))
}

fn c6() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (t, blocks) in [(2u32, 1u32), (3, 1), (2, 2), (3, 2)] {
        let params = MacParams::uniform(t, blocks)?;
        let adv = mac_forgery_advantage(&params)?;
        let bound = ratio(blocks as u128, 1u128 << t);
        pass &= forgery_bound(&params) == bound && if blocks == 1 { adv == bound } else { adv <= bound };
        parts.push(format!("t={t} L={blocks}: {}", exact_string(&adv)));
    }
    Ok((pass, parts.join(", ")))
}

fn c7() -> Outcome {
    let params = NmExtParams::new(3, 2)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, source) in
        [("uniform", Source::uniform(9)?), ("constant", Source::constant(9, 4)?), ("half-support", Source::prefix(9, 5)?)]
    {
        let r = nm_distance_scan(&params, &source, ScanMode::Exhaustive)?;
        let exact = r.rows.iter().all(|row| row.distance == row.oracle);
        pass &= exact && r.all_agree && r.rows.len() == 8;
        parts.push(format!("{name}: {} rows, max {}", r.rows.len(), exact_string(&r.max)));
    }
    Ok((pass, parts.join("; ")))
}

fn honest(params: &ProtocolParams, source: &Source) -> Result<SecurityReport> {
    security_experiment(params, source, &nmext_core::protocol::adversary::Identity, Mode::Exhaustive, 0)
}

fn c8() -> Outcome {
    let dw = honest(&ProtocolParams::dw(3, 2, 2, 2, 2)?, &Source::uniform(9)?)?;
    let mut pass = dw.correctness == Exact::one();
    let mut parts = vec![format!("dw {}", exact_string(&dw.correctness))];
    for v in [0u32, 1, 2] {
        let params = ProtocolParams::one_round_with(4, v)?;
        let r = honest(&params, &Source::uniform(16)?)?;
        let d = one_round_output_distance(&params, &Source::uniform(16)?)?;
        pass &= r.correctness == Exact::one() && d.is_zero();
        parts.push(format!("one-round v={v}: {} / distance {}", exact_string(&r.correctness), exact_string(&d)));
    }
    Ok((pass, parts.join(", ")))
}

/// Fixed first-step seed map followed by any second-step strategy.
#[derive(Debug)]
struct Composite<A> {
    seed_map: [u64; 3],
    then: A,
}

impl<A: Adversary> Adversary for Composite<A> {
    fn name(&self) -> String {
        format!("{:?}+{}", self.seed_map, self.then.name())
    }

    fn coin_space(&self) -> u64 {
        self.then.coin_space()
    }

    fn tamper_seed(&self, ya: u64, _view: &mut AdversaryView<'_>) -> u64 {
        self.seed_map[ya as usize]
    }

    fn tamper_tagged(&self, seed: u64, tag: u64, key: Option<u64>, view: &mut AdversaryView<'_>) -> (u64, u64) {
        self.then.tamper_tagged(seed, tag, key, view)
    }
}

fn matches(report: &SecurityReport, counts: support::Counts) -> bool {
    let r = |c: u64| ratio(c as u128, counts.total as u128);
    report.correctness == r(counts.correct)
        && report.robustness_pre == r(counts.robustness_failures)
        && report.mac_forgeries == r(counts.forgeries)
        && report.tampered_confirmations == r(counts.forgeries)
        && report.ledger_discrepancy.is_zero()
}

fn c9() -> Outcome {
    let params = ProtocolParams::dw(3, 2, 2, 2, 2)?;
    let source = Source::uniform(9)?;
    let mut runs = 0;
    let mut mismatches = 0;
    let mut worst = Exact::zero();
    for code in 0..27u64 {
        let seed_map = [code % 3, code / 3 % 3, code / 9];
        for mask in 0..16u64 {
            let (sm, tm) = (mask & 3, mask >> 2);
            let adv = Composite { seed_map, then: XorTagged { seed_mask: sm, tag_mask: tm } };
            let report = security_experiment(&params, &source, &adv, Mode::Exhaustive, 0)?;
            mismatches += !matches(&report, support::enumerate(&seed_map, 1, |_, yb, w, _| (yb ^ sm, w ^ tm))) as u32;
            runs += 1;
        }
        let adv = Composite { seed_map, then: Garbage { seed_bits: 2, tag_bits: 2 } };
        let report = security_experiment(&params, &source, &adv, Mode::Exhaustive, 0)?;
        mismatches += !matches(&report, support::enumerate(&seed_map, 16, |_, _, _, c| (c & 3, c >> 2))) as u32;

        let table = optimal_dw_tamper(&params, &source, &seed_map)?;
        let report = security_experiment(&params, &source, &table, Mode::Exhaustive, 0)?;
        let optimum = ratio(support::optimal_failures(&seed_map) as u128, 108);
        mismatches += (report.robustness_pre != optimum || !report.ledger_discrepancy.is_zero()) as u32;
        if report.robustness_pre > worst {
            worst = report.robustness_pre.clone();
        }
        runs += 2;
    }
    Ok((
        mismatches == 0,
        format!("{runs} adversaries, {mismatches} mismatches, largest robustness failure {}", exact_string(&worst)),
    ))
}

fn cli(args: &[&str], env_seed: Option<&str>) -> (i32, Vec<u8>) {
    let argv: Vec<String> = std::iter::once("nmext").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = nmext_cli::run_with_env(&argv, env_seed, &mut out, &mut err);
    (code, out)
}

fn c10() -> Outcome {
    let commands: [&[&str]; 6] = [
        &["dw-run", "--mode", "monte-carlo", "--trials", "3000", "--adversary", "garbage", "--seed", "5"],
        &["one-round-run", "--n", "6", "--v", "1", "--mode", "monte-carlo", "--trials", "3000", "--adversary", "flip-tag:0"],
        &["xor-sweep", "--cases", "100", "--seed", "3"],
        &["sandwich-sweep", "--cases", "100", "--seed", "3", "--format", "json"],
        &["nm-scan", "--p", "3", "--n", "2", "--leak", "mod:2", "--samples", "200", "--seed", "9"],
        &["game-scan", "--p", "5", "--samples", "50"],
    ];
    let mut identical = 0;
    for args in commands {
        let a = cli(args, None);
        let b = cli(args, None);
        identical += (a.0 == 0 && a == b) as u32;
    }
    // the environment seed must reach the report
    let env_a = cli(&["dw-run", "--mode", "monte-carlo", "--trials", "500", "--adversary", "garbage"], Some("21"));
    let env_b = cli(&["dw-run", "--mode", "monte-carlo", "--trials", "500", "--adversary", "garbage", "--seed", "21"], None);
    let env_ok = env_a == env_b;
    Ok((identical == 6 && env_ok, format!("{identical}/6 commands byte-identical on re-run, seed override honoured: {env_ok}")))
}

fn main() {
    let results = [
        criterion(1, "collision map is at most 2-to-1", c1),
        criterion(2, "XOR lemma sweeps", c2),
        criterion(3, "collision sandwich bounds and identities", c3),
        criterion(4, "guessing measurement", c4),
        criterion(5, "communication game bound", c5),
        criterion(6, "MAC forgery advantage", c6),
        criterion(7, "non-malleability scan vs brute force", c7),
        criterion(8, "protocol correctness and extraction", c8),
        criterion(9, "DW robustness vs reference enumeration", c9),
        criterion(10, "determinism", c10),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
