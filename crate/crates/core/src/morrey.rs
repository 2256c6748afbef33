//! The variable Morrey quasinorm, by the direct supremum route and by the
//! interchanged single-bisection route.

use rayon::prelude::*;

use crate::balls::{BallSearchSet, NodeSet};
use crate::bisect::{bisect_threshold, BisectionConfig};
use crate::error::{Result, VexError};
use crate::exponent::VariableExponent;
use crate::grid::GridFunction;
use crate::lebesgue::restricted_modular;

pub(crate) fn check_ordering(pv: &[f64], uv: &[f64]) -> Result<()> {
    for (i, (&p, &u)) in pv.iter().zip(uv).enumerate() {
        if p > u * (1.0 + 1e-12) {
            return Err(VexError::Ordering(format!(
                "p = {p} exceeds u = {u} at node {i}"
            )));
        }
    }
    Ok(())
}

/// Per-set restricted quasinorms of `t` at unit scale; the shared cache for
/// every ball sweep. Sets are processed in parallel but collected in fixed
/// order.
pub(crate) fn set_norm_cache(
    pv: &[f64],
    tv: &[f64],
    sets: &[NodeSet],
    cell: f64,
    cfg: &BisectionConfig,
) -> Result<Vec<f64>> {
    sets.par_iter()
        .map(|set| crate::lebesgue::restricted_norm_self_seeded(pv, tv, set, cell, 1.0, cfg))
        .collect()
}

/// Direct route: the supremum over the search set of
/// `r^{n/u(x)-n/p(x)} * || f chi_B ||_p`.
pub fn morrey_norm_direct(
    p: &VariableExponent,
    u: &VariableExponent,
    f: &GridFunction,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let grid = f.grid();
    let pv = p.sample(grid);
    let uv = u.sample(grid);
    check_ordering(&pv, &uv)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let tv = f.abs_values();
    let norms = set_norm_cache(&pv, &tv, balls.sets(), grid.cell_volume(), cfg)?;
    let prefactors = balls.max_prefactors(&pv, &uv);
    let mut best = 0.0f64;
    for (&n, &c) in norms.iter().zip(&prefactors) {
        best = best.max(c * n);
    }
    Ok(best)
}

/// Interchanged route: a single bisection on the Morrey semimodular
/// `sup_{x,r} modular(r^{n/u(x)-n/p(x)} f chi_B / lambda)`.
pub fn morrey_norm_interchanged(
    p: &VariableExponent,
    u: &VariableExponent,
    f: &GridFunction,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let grid = f.grid();
    let pv = p.sample(grid);
    let uv = u.sample(grid);
    check_ordering(&pv, &uv)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let tv = f.abs_values();
    let cell = grid.cell_volume();
    let prefactors = balls.max_prefactors(&pv, &uv);
    let sets = balls.sets();
    let accept = |lambda: f64| {
        for (set, &c) in sets.iter().zip(&prefactors) {
            if c == 0.0 {
                continue;
            }
            if restricted_modular(&pv, &tv, set, cell, c, lambda, 1.0) > 1.0 {
                return false;
            }
        }
        true
    };
    bisect_threshold(accept, (1.0, 1.0), cfg)
}

/// Morrey semimodular at scale one (the supremum over the search set of the
/// plain restricted modulars).
pub fn morrey_semimodular(
    p: &VariableExponent,
    u: &VariableExponent,
    f: &GridFunction,
    balls: &BallSearchSet,
) -> Result<f64> {
    let grid = f.grid();
    let pv = p.sample(grid);
    let uv = u.sample(grid);
    check_ordering(&pv, &uv)?;
    let tv = f.abs_values();
    let cell = grid.cell_volume();
    let prefactors = balls.max_prefactors(&pv, &uv);
    let mut sup = 0.0f64;
    for (set, &c) in balls.sets().iter().zip(&prefactors) {
        let m = restricted_modular(&pv, &tv, set, cell, c, 1.0, f64::INFINITY);
        sup = sup.max(m);
        if sup == f64::INFINITY {
            break;
        }
    }
    Ok(sup)
}

/// Norm-vs-power ratios of ball indicators in the two radius regimes.
#[derive(Debug, Clone)]
pub struct CharBallReport {
    pub min_ratio_small: f64,
    pub max_ratio_small: f64,
    pub min_ratio_large: f64,
    pub max_ratio_large: f64,
}

impl CharBallReport {
    pub fn spread(&self) -> f64 {
        let lo = self.min_ratio_small.min(self.min_ratio_large);
        let hi = self.max_ratio_small.max(self.max_ratio_large);
        hi / lo
    }
}

/// Ratios `||chi_B(x,r)||_p / r^{n/p(x)}` for r <= 1 and `/ r^{n/p_inf}` for
/// r >= 1 over the whole search set.
pub fn char_ball_norm_ratio(
    p: &VariableExponent,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<CharBallReport> {
    if p.cached_min() < 1.0 {
        return Err(VexError::Domain("characteristic-ball ratios need p(x) >= 1".into()));
    }
    let grid = balls.grid();
    let pv = p.sample(grid);
    let ones = vec![1.0f64; grid.node_count()];
    let cell = grid.cell_volume();
    let norms = set_norm_cache(&pv, &ones, balls.sets(), cell, cfg)?;
    let n_dim = grid.dim() as f64;
    let p_inf = p
        .limit_at_infinity()
        .ok_or_else(|| VexError::Domain("exponent has no declared limit at infinity".into()))?;
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };

    let mut rep = CharBallReport {
        min_ratio_small: f64::INFINITY,
        max_ratio_small: 0.0,
        min_ratio_large: f64::INFINITY,
        max_ratio_large: 0.0,
    };
    for pair in balls.pairs() {
        let norm = norms[pair.set_id];
        if norm == 0.0 {
            continue;
        }
        if pair.radius <= 1.0 {
            let ratio = norm / pair.radius.powf(n_dim * inv(pv[pair.center_idx]));
            rep.min_ratio_small = rep.min_ratio_small.min(ratio);
            rep.max_ratio_small = rep.max_ratio_small.max(ratio);
        }
        if pair.radius >= 1.0 {
            let ratio = norm / pair.radius.powf(n_dim * inv(p_inf));
            rep.min_ratio_large = rep.min_ratio_large.min(ratio);
            rep.max_ratio_large = rep.max_ratio_large.max(ratio);
        }
    }
    Ok(rep)
}
