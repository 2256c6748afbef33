//! Monotone bisection for unit-ball style infima.

use crate::error::{Result, VexError};

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionConfig {
    pub relative_tolerance: f64,
    pub max_iterations: usize,
    pub bracket_growth_factor: f64,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        BisectionConfig {
            relative_tolerance: 1e-10,
            max_iterations: 200,
            bracket_growth_factor: 2.0,
        }
    }
}

impl BisectionConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        BisectionConfig { relative_tolerance: tol, ..Default::default() }
    }

    /// Inner infima run one decade tighter than the outer loop so outer
    /// bracket decisions stay stable.
    pub fn inner(&self) -> Self {
        BisectionConfig {
            relative_tolerance: self.relative_tolerance / 10.0,
            ..self.clone()
        }
    }
}

const LAMBDA_FLOOR: f64 = 1e-280;

/// Computes `inf { lambda > 0 : accept(lambda) }` for a monotone predicate
/// (false below the threshold, true above). Brackets by geometric
/// growth/shrink from the seed interval, then bisects; the returned value is
/// the upper bracket end, so `accept` is guaranteed to hold for it.
///
/// Returns Err when no accepting lambda is found within the iteration budget.
pub fn bisect_threshold(
    accept: impl Fn(f64) -> bool,
    seed: (f64, f64),
    cfg: &BisectionConfig,
) -> Result<f64> {
    let growth = cfg.bracket_growth_factor.max(1.0 + 1e-6);
    let (mut lo, mut hi) = seed;
    if !(lo > 0.0) || !lo.is_finite() {
        lo = 1.0;
    }
    if !(hi >= lo) || !hi.is_finite() {
        hi = lo;
    }

    if !accept(hi) {
        let mut found = false;
        for _ in 0..cfg.max_iterations {
            lo = hi;
            hi *= growth;
            if accept(hi) {
                found = true;
                break;
            }
        }
        if !found {
            return Err(VexError::Overflow(format!(
                "no accepting value up to {hi:.3e} after {} growth steps",
                cfg.max_iterations
            )));
        }
    } else {
        // shrink until the lower end rejects
        let mut steps = 0;
        while accept(lo) {
            hi = lo;
            lo /= growth;
            steps += 1;
            if lo < LAMBDA_FLOOR || steps >= cfg.max_iterations {
                // the infimum is numerically indistinguishable from zero
                return Ok(lo.max(LAMBDA_FLOOR));
            }
        }
    }

    // invariant: accept(hi), !accept(lo)
    let mut iters = 0;
    while hi - lo > cfg.relative_tolerance * hi && iters < cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        if accept(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
    }
    Ok(hi)
}
