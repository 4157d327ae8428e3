use rayon::prelude::*;
use serde::Serialize;

use super::Scenario;
use crate::error::{Error, Result};
use crate::expansion::{residual, ResidualOptions};

/// Accepted range of the per-halving reduction of `|R(K=1)| / |R(K=0)|`.
pub const REDUCTION_RANGE: (f64, f64) = (1.5, 3.0);
/// Largest spread of `eps |d3 R| / |R|` across the ladder.
pub const DERIVATIVE_SPREAD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderRung {
    pub eps: f64,
    pub l2_order0: f64,
    pub l2_order1: f64,
    /// `l2_order1 / l2_order0`.
    pub ratio: f64,
    /// `eps |d3 R| / |R|` of the first-order residual.
    pub scaled_derivative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualLadder {
    pub t: f64,
    pub rungs: Vec<LadderRung>,
    /// `ratio(eps_k) / ratio(eps_{k+1})` for consecutive rungs.
    pub reductions: Vec<f64>,
    /// Largest over smallest `scaled_derivative`.
    pub derivative_spread: f64,
    pub passed: bool,
}

/// Residuals of the order 0 and order 1 expansions at time `t` for each
/// `eps` of a strictly decreasing `sweep`.
pub fn residual_ladder(sc: &Scenario, sweep: &[f64], t: f64) -> Result<ResidualLadder> {
    if sweep.len() < 2 || sweep.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter { name: "eps_sweep", reason: "needs two or more strictly decreasing values".into() });
    }
    let opts = ResidualOptions::default();
    let rungs = sweep
        .par_iter()
        .map(|&eps| {
            let r0 = residual(&sc.expansion(eps, 0)?, t, &opts)?;
            let r1 = residual(&sc.expansion(eps, 1)?, t, &opts)?;
            Ok(LadderRung {
                eps,
                l2_order0: r0.l2_total(),
                l2_order1: r1.l2_total(),
                ratio: r1.l2_total() / r0.l2_total(),
                scaled_derivative: eps * r1.d3_l2_total() / r1.l2_total(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let reductions: Vec<f64> = rungs.windows(2).map(|w| w[0].ratio / w[1].ratio).collect();
    let (lo, hi) = rungs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.scaled_derivative), hi.max(r.scaled_derivative)));
    let derivative_spread = hi / lo;
    let passed = reductions.iter().all(|r| (REDUCTION_RANGE.0..=REDUCTION_RANGE.1).contains(r)) && derivative_spread <= DERIVATIVE_SPREAD;
    Ok(ResidualLadder { t, rungs, reductions, derivative_spread, passed })
}
