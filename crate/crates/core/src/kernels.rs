//! Radial eta-kernels, their convolution inequality reports, the weight-shift
//! bound, and the discrete convolution over sequence levels.

use rayon::prelude::*;

use crate::balls::BallSearchSet;
use crate::bisect::BisectionConfig;
use crate::error::{Result, VexError};
use crate::exponent::{c_infinity_pu, VariableExponent};
use crate::fft::convolve;
use crate::grid::{Grid, GridFunction, GridFunctionSequence};
use crate::mixed::{norm_mixed_lebesgue, norm_mixed_morrey};
use crate::morrey::morrey_norm_direct;
use crate::trials::{random_bump_sequence, trial_rng};

/// `eta_{nu,m}(x) = 2^{n nu} (1 + 2^nu |x|)^{-m}`.
pub fn eta_value(level: u32, m: f64, x: &[f64]) -> f64 {
    assert!(m > 0.0, "eta decay must be positive");
    let n = x.len() as f64;
    let scale = (1u64 << level) as f64;
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    scale.powf(n) / (1.0 + scale * r).powf(m)
}

/// Analytic mass of `eta_{0,m}` over the whole space (independent of the
/// level).
pub fn eta_analytic_mass(n: usize, m: f64) -> f64 {
    match n {
        1 => 2.0 / (m - 1.0),
        _ => 2.0 * std::f64::consts::PI / ((m - 1.0) * (m - 2.0)),
    }
}

#[derive(Debug, Clone)]
pub struct EtaKernel {
    level: u32,
    decay: f64,
    function: GridFunction,
}

impl EtaKernel {
    /// Samples the kernel at the nodes, truncating values below
    /// `1e-14 * eta(0)` to zero. The box quadrature is validated against the
    /// analytic mass with an allowance for the midpoint overshoot of the
    /// kink cell, which scales like `m * 2^nu * h`.
    pub fn build(grid: &Grid, level: u32, decay: f64) -> Result<Self> {
        let n = grid.dim() as f64;
        if decay <= n {
            return Err(VexError::Domain(format!(
                "eta decay m = {decay} must exceed the dimension {n}"
            )));
        }
        let peak = eta_value(level, decay, &vec![0.0; grid.dim()]);
        let floor = 1e-14 * peak;
        let function = GridFunction::from_real_fn(grid, |x| {
            let v = eta_value(level, decay, x);
            if v < floor {
                0.0
            } else {
                v
            }
        })?;
        let mass = function.integrate().re;
        let analytic = eta_analytic_mass(grid.dim(), decay);
        let allowance = 1.0 + decay * (1u64 << level) as f64 * grid.spacing();
        if mass > analytic * allowance {
            return Err(VexError::Resolution(format!(
                "kernel mass {mass:.6} exceeds analytic bound {analytic:.6} beyond the \
                 discretization allowance; refine the grid for level {level}"
            )));
        }
        Ok(EtaKernel { level, decay, function })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn function(&self) -> &GridFunction {
        &self.function
    }

    pub fn mass(&self) -> f64 {
        self.function.integrate().re
    }

    pub fn convolve_with(&self, f: &GridFunction) -> Result<GridFunction> {
        convolve(f, &self.function)
    }
}

/// Threshold on the kernel decay for the mixed Morrey convolution inequality:
/// `n + c_log(1/q) + n * c_inf(1/p, 1/u)`.
pub fn convolution_threshold(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    budget: usize,
) -> Result<f64> {
    let n = p.dim() as f64;
    let c_log_q = q
        .declared_log_holder()
        .map(|(c, _)| c)
        .unwrap_or_else(|| crate::exponent::log_holder_constants(q, budget).0);
    Ok(n + c_log_q + n * c_infinity_pu(p, u, budget)?)
}

#[derive(Debug, Clone)]
pub struct RatioReport {
    pub per_trial: Vec<f64>,
    pub max_ratio: f64,
    pub threshold: f64,
    pub hypothesis_met: bool,
}

impl RatioReport {
    fn from_ratios(per_trial: Vec<f64>, threshold: f64, hypothesis_met: bool) -> Self {
        let max_ratio = per_trial.iter().cloned().fold(0.0f64, f64::max);
        RatioReport { per_trial, max_ratio, threshold, hypothesis_met }
    }

    pub fn all_finite(&self) -> bool {
        self.per_trial.iter().all(|r| r.is_finite())
    }
}

/// Ratios `||(eta_nu * f_nu)_nu|| / ||(f_nu)_nu||` in the mixed Morrey space
/// over random bump sequences. Zero sequences count as ratio 0.
pub fn convolution_inequality_report(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    m: f64,
    trials: usize,
    levels: usize,
    grid: &Grid,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
    seed: u64,
) -> Result<RatioReport> {
    let threshold = convolution_threshold(p, q, u, 128)?;
    let hypothesis_met = m > threshold;
    let kernels: Vec<EtaKernel> = (0..levels)
        .map(|nu| EtaKernel::build(grid, nu as u32, m))
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = trial_rng(seed, t as u64);
            let fs = random_bump_sequence(grid, levels, &mut rng);
            let denom = norm_mixed_morrey(p, q, u, &fs, balls, cfg)?;
            if denom == 0.0 {
                return Ok(0.0);
            }
            let conv_entries: Result<Vec<GridFunction>> = fs
                .entries()
                .iter()
                .zip(&kernels)
                .map(|(f, k)| k.convolve_with(f))
                .collect();
            let convolved = GridFunctionSequence::new(conv_entries?)?;
            let numer = norm_mixed_morrey(p, q, u, &convolved, balls, cfg)?;
            Ok(numer / denom)
        })
        .collect::<Result<_>>()?;
    Ok(RatioReport::from_ratios(ratios, threshold, hypothesis_met))
}

/// Same ratios at the mixed Lebesgue level (used for the u = p cross-check).
pub fn convolution_inequality_report_lebesgue(
    p: &VariableExponent,
    q: &VariableExponent,
    m: f64,
    trials: usize,
    levels: usize,
    grid: &Grid,
    cfg: &BisectionConfig,
    seed: u64,
) -> Result<RatioReport> {
    let threshold = convolution_threshold(p, q, p, 128)?;
    let hypothesis_met = m > threshold;
    let kernels: Vec<EtaKernel> = (0..levels)
        .map(|nu| EtaKernel::build(grid, nu as u32, m))
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = trial_rng(seed, t as u64);
            let fs = random_bump_sequence(grid, levels, &mut rng);
            let denom = norm_mixed_lebesgue(p, q, &fs, cfg)?;
            if denom == 0.0 {
                return Ok(0.0);
            }
            let conv_entries: Result<Vec<GridFunction>> = fs
                .entries()
                .iter()
                .zip(&kernels)
                .map(|(f, k)| k.convolve_with(f))
                .collect();
            let convolved = GridFunctionSequence::new(conv_entries?)?;
            let numer = norm_mixed_lebesgue(p, q, &convolved, cfg)?;
            Ok(numer / denom)
        })
        .collect::<Result<_>>()?;
    Ok(RatioReport::from_ratios(ratios, threshold, hypothesis_met))
}

/// Single-function Morrey variant.
pub fn morrey_convolution_report(
    p: &VariableExponent,
    u: &VariableExponent,
    m: f64,
    trials: usize,
    levels: usize,
    grid: &Grid,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
    seed: u64,
) -> Result<RatioReport> {
    let n = p.dim() as f64;
    let threshold = n + n * c_infinity_pu(p, u, 128)?;
    let hypothesis_met = m > threshold;
    let kernels: Vec<EtaKernel> = (0..levels)
        .map(|nu| EtaKernel::build(grid, nu as u32, m))
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = trial_rng(seed, t as u64);
            let f = crate::trials::random_bump(grid, &mut rng);
            let denom = morrey_norm_direct(p, u, &f, balls, cfg)?;
            if denom == 0.0 {
                return Ok(0.0);
            }
            let mut worst = 0.0f64;
            for k in kernels.iter() {
                let numer = morrey_norm_direct(p, u, &k.convolve_with(&f)?, balls, cfg)?;
                worst = worst.max(numer / denom);
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(RatioReport::from_ratios(ratios, threshold, hypothesis_met))
}

/// Worst constant in `2^{nu a(x)} eta_{nu,m+l}(x-y) <= C 2^{nu a(y)}
/// eta_{nu,m}(x-y)` over sampled levels and point pairs. The kernel decay m
/// cancels in the ratio; only the extra decay l enters.
pub fn weight_shift_check(
    alpha: &crate::exponent::ScalarField,
    l: f64,
    levels: usize,
    dim: usize,
    box_radius: f64,
    samples: usize,
) -> f64 {
    let pts = crate::exponent::sample_points(dim, box_radius, samples.max(2));
    let mut worst = 0.0f64;
    for nu in 0..levels {
        let scale = (1u64 << nu) as f64;
        for a in &pts {
            let ax = alpha.eval(&a[..dim]);
            for b in &pts {
                let ay = alpha.eval(&b[..dim]);
                let mut d2 = 0.0;
                for k in 0..dim {
                    d2 += (a[k] - b[k]) * (a[k] - b[k]);
                }
                let d = d2.sqrt();
                let ratio = (2.0f64).powf(nu as f64 * (ax - ay)) / (1.0 + scale * d).powf(l);
                worst = worst.max(ratio);
            }
        }
    }
    worst
}

/// `G_nu = sum_j 2^{-|nu-j| delta} g_j`, exact pointwise.
pub fn discrete_convolution_sum(
    gs: &GridFunctionSequence,
    delta: f64,
) -> Result<GridFunctionSequence> {
    if !(delta > 0.0) {
        return Err(VexError::Domain(format!("delta must be positive, got {delta}")));
    }
    for (j, g) in gs.entries().iter().enumerate() {
        if g.values().iter().any(|v| v.re < 0.0 || v.im != 0.0) {
            return Err(VexError::Domain(format!(
                "discrete convolution needs nonnegative entries, entry {j} is not"
            )));
        }
    }
    let len = gs.len();
    let mut out = Vec::with_capacity(len);
    for nu in 0..len {
        let mut acc = GridFunction::zeros(gs.grid());
        for (j, g) in gs.entries().iter().enumerate() {
            let w = (2.0f64).powf(-((nu as f64 - j as f64).abs()) * delta);
            acc = acc.add(&g.scale_real(w))?;
        }
        out.push(acc);
    }
    GridFunctionSequence::new(out)
}

/// Ratios `||(G_nu)|| / ||(g_j)||` over random nonnegative sequences.
pub fn discrete_convolution_report(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    delta: f64,
    trials: usize,
    levels: usize,
    grid: &Grid,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
    seed: u64,
) -> Result<RatioReport> {
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = trial_rng(seed, t as u64);
            let gs = crate::trials::random_nonnegative_sequence(grid, levels, &mut rng);
            let denom = norm_mixed_morrey(p, q, u, &gs, balls, cfg)?;
            if denom == 0.0 {
                return Ok(0.0);
            }
            let sum = discrete_convolution_sum(&gs, delta)?;
            let numer = norm_mixed_morrey(p, q, u, &sum, balls, cfg)?;
            Ok(numer / denom)
        })
        .collect::<Result<_>>()?;
    Ok(RatioReport::from_ratios(ratios, 0.0, true))
}
