//! Seeded random lab cases and the per-check rows emitted by the sweeps.

use nmext_core::cq_lab::classical::ClassicalCcq;
use nmext_core::cq_lab::{
    check_collision_sandwich, check_xor_lemma, guess_measurement_from_distance, CcqState, CqState, XorVariant,
};
use nmext_core::protocol::rng::stream;
use nmext_core::scalar::{to_f64, Exact};
use nmext_core::{Ccq, Cq, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Floating-point inequality checks are allowed this much eigensolver error.
pub const SLACK: f64 = 1e-9;

/// One inequality `lhs ≤ rhs` (or identity `lhs = rhs`) from one case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub case_id: u64,
    pub variant: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Exact rows are judged with zero slack in rational arithmetic.
    #[serde(skip)]
    pub exact_violation: Option<bool>,
}

impl SweepRow {
    fn float(case_id: u64, variant: String, lhs: f64, rhs: f64) -> Self {
        SweepRow { case_id, variant, lhs, rhs, margin: rhs - lhs, exact_violation: None }
    }

    /// `|lhs − rhs|` must vanish; margin is minus the residual.
    fn identity(case_id: u64, variant: String, residual: f64) -> Self {
        SweepRow { case_id, variant, lhs: residual, rhs: 0.0, margin: -residual.abs(), exact_violation: None }
    }

    fn exact(case_id: u64, variant: String, lhs: &Exact, rhs: &Exact) -> Self {
        SweepRow {
            case_id,
            variant,
            lhs: to_f64(lhs),
            rhs: to_f64(rhs),
            margin: to_f64(&(rhs - lhs)),
            exact_violation: Some(lhs > rhs),
        }
    }

    pub fn violated(&self) -> bool {
        self.exact_violation.unwrap_or(self.margin < -SLACK || self.margin.is_nan())
    }

    pub fn csv(&self) -> String {
        format!("{},{},{},{},{}", self.case_id, self.variant, self.lhs, self.rhs, self.margin)
    }
}

pub const CSV_HEADER: &str = "case_id,variant,lhs,rhs,margin";

/// A random ccq state over `X0 ∈ F_p`, `X ∈ F_p^t`. Every fourth case is
/// classical, with integer weights kept for the exact re-check.
pub struct LabCase {
    pub id: u64,
    pub p: u32,
    pub t: usize,
    pub state: Ccq,
    pub classical: Option<ClassicalCcq<Exact>>,
}

pub fn lab_case(seed: u64, id: u64) -> Result<LabCase> {
    let mut rng = stream(seed, "lab", id);
    let p = [2u32, 3, 5][rng.random_range(0..3)];
    let t = rng.random_range(1..=2usize);
    let d_e = rng.random_range(1..=4usize);
    let d_x = (p as usize).pow(t as u32);
    if id % 4 == 3 {
        let mut w: Vec<u64> = (0..p as usize * d_x * d_e).map(|_| rng.random_range(0..16)).collect();
        if w.iter().all(|&v| v == 0) {
            w[0] = 1;
        }
        let exact = ClassicalCcq::from_weights(p as usize, d_x, d_e, &w)?;
        let state = exact.to_state()?;
        return Ok(LabCase { id, p, t, state, classical: Some(exact) });
    }
    let rank = rng.random_range(1..=d_e);
    let state = CcqState::random(p as usize, d_x, d_e, rank, &mut rng)?;
    Ok(LabCase { id, p, t, state, classical: None })
}

pub fn xor_rows(case: &LabCase) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for v in XorVariant::ALL {
        let r = check_xor_lemma(&case.state, case.p, case.t, v)?;
        rows.push(SweepRow::float(case.id, v.to_string(), r.lhs, r.rhs));
        if let Some(exact) = &case.classical {
            let c = exact.xor_check(case.p, case.t, v)?;
            let k = if v == XorVariant::Uniform { case.t } else { case.t + 1 };
            let two_lhs_sq = Exact::from_integer(2.into()) * &c.lhs * &c.lhs;
            let scaled_eps = Exact::from_integer((case.p as u64).pow(k as u32).into()) * &c.eps;
            rows.push(SweepRow::exact(case.id, format!("{v}-exact"), &two_lhs_sq, &scaled_eps));
            let gap = (to_f64(&c.lhs) - r.lhs).abs().max((to_f64(&c.eps) - r.eps).abs());
            rows.push(SweepRow::identity(case.id, format!("{v}-agree"), gap));
        }
    }
    Ok(rows)
}

pub fn sandwich_rows(case: &LabCase) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for v in XorVariant::ALL {
        let r = check_collision_sandwich(&case.state, v)?;
        rows.push(SweepRow::float(case.id, format!("{v}-lower"), r.lower, r.middle));
        rows.push(SweepRow::float(case.id, format!("{v}-upper"), r.middle, r.upper));
        rows.push(SweepRow::identity(case.id, format!("{v}-identity"), r.identity_residual));
        rows.push(SweepRow::float(case.id, format!("{v}-gamma"), r.gamma, 1.0));
        if let Some(exact) = &case.classical {
            let c = exact.sandwich(v);
            rows.push(SweepRow::exact(case.id, format!("{v}-exact-lower"), &c.lower, &c.middle));
            rows.push(SweepRow::exact(case.id, format!("{v}-exact-upper"), &c.middle, &c.upper));
            rows.push(SweepRow::identity(case.id, format!("{v}-agree"), (to_f64(&c.middle) - r.middle).abs()));
        }
    }
    Ok(rows)
}

/// Random cq state with `d_X ≤ 4`, `d_E ≤ 8` for the guessing measurement.
pub fn guess_case(seed: u64, id: u64) -> Result<Cq> {
    let mut rng = stream(seed, "guess", id);
    let d_x = rng.random_range(1..=4usize);
    let d_e = rng.random_range(1..=8usize);
    let rank = rng.random_range(1..=d_e);
    CqState::random(d_x, d_e, rank, &mut rng)
}

pub fn guess_rows(id: u64, state: &Cq) -> Result<Vec<SweepRow>> {
    let g = guess_measurement_from_distance(state)?;
    let (min_eig, defect) = g.validity_defect()?;
    Ok(vec![
        SweepRow::identity(id, "guess-success".into(), g.success - g.predicted()),
        SweepRow::float(id, "guess-psd".into(), -min_eig, 0.0),
        SweepRow::identity(id, "guess-completeness".into(), defect),
    ])
}

/// Runs `rows` over cases `0..cases` in parallel, keeping case order.
pub fn sweep<F>(cases: u64, f: F) -> Result<Vec<SweepRow>>
where
    F: Fn(u64) -> Result<Vec<SweepRow>> + Sync + Send,
{
    let chunks: Vec<Vec<SweepRow>> = (0..cases).into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}
