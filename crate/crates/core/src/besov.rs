//! The Besov-Morrey quasinorm on grid functions, Peetre maximal functions,
//! and the maximal-function characterization report.

use rayon::prelude::*;

use crate::balls::BallSearchSet;
use crate::bisect::BisectionConfig;
use crate::error::{Result, VexError};
use crate::exponent::{c_infinity_pu, VariableExponent, WeightSequence};
use crate::fft::fourier_multiplier;
use crate::grid::{GridFunction, GridFunctionSequence};
use crate::mixed::norm_mixed_morrey;
use crate::trials::{band_limited_bump, trial_rng};
use crate::windows::{AdmissibleSystem, PeetreSystem};

/// Frequency decomposition of `f` by the admissible windows, levels 0..=J.
pub fn littlewood_paley_pieces(
    sys: &AdmissibleSystem,
    f: &GridFunction,
) -> Result<GridFunctionSequence> {
    let pieces: Vec<GridFunction> = (0..sys.levels())
        .map(|j| fourier_multiplier(f, |xi| sys.window(j, xi)))
        .collect();
    GridFunctionSequence::new(pieces)
}

/// Frequency pieces through a Peetre system's windows.
pub fn peetre_pieces(sys: &PeetreSystem, f: &GridFunction) -> Result<GridFunctionSequence> {
    let pieces: Vec<GridFunction> = (0..sys.levels())
        .map(|j| fourier_multiplier(f, |xi| sys.window(j, xi)))
        .collect();
    GridFunctionSequence::new(pieces)
}

/// Multiplies entry j by the weight `w_j(x)` pointwise.
pub fn weight_sequence_entries(
    fs: &GridFunctionSequence,
    w: &WeightSequence,
) -> Result<GridFunctionSequence> {
    if w.levels() < fs.len() {
        return Err(VexError::Domain(format!(
            "weight sequence has {} levels, pieces need {}",
            w.levels(),
            fs.len()
        )));
    }
    let entries: Result<Vec<GridFunction>> = fs
        .entries()
        .iter()
        .enumerate()
        .map(|(j, f)| f.mul_pointwise_real(&w.sample(j, f.grid())))
        .collect();
    GridFunctionSequence::new(entries?)
}

/// The Besov-Morrey quasinorm: mixed Morrey-sequence norm of the weighted
/// frequency pieces.
pub fn besov_morrey_norm(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    sys: &AdmissibleSystem,
    f: &GridFunction,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let pieces = littlewood_paley_pieces(sys, f)?;
    let weighted = weight_sequence_entries(&pieces, w)?;
    norm_mixed_morrey(p, q, u, &weighted, balls, cfg)
}

/// Peetre maximal function of the level-j piece:
/// `sup_y |g(y)| / (1 + 2^j |x-y|)^a`, with `g` the window-j piece of `f`.
/// The supremum runs over all nodes in one dimension and over a strided
/// subset in two (a lower approximation). This denominator form is pointwise
/// monotone in `a`, which the invariant checks rely on.
pub fn peetre_maximal(
    sys: &PeetreSystem,
    f: &GridFunction,
    j: usize,
    a: f64,
    y_stride: usize,
) -> Result<GridFunction> {
    if !(a > 0.0) {
        return Err(VexError::Domain(format!("peetre exponent a must be positive, got {a}")));
    }
    let g = fourier_multiplier(f, |xi| sys.window(j, xi));
    Ok(peetre_maximal_of_piece(&g, j, a, y_stride))
}

/// The maximal sweep itself, reusable for any already-computed piece.
pub fn peetre_maximal_of_piece(g: &GridFunction, j: usize, a: f64, y_stride: usize) -> GridFunction {
    let grid = g.grid();
    let n = grid.points_per_axis();
    let scale = (1u64 << j) as f64;
    let stride = y_stride.max(1);
    let mags: Vec<f64> = g.abs_values();
    let out: Vec<f64> = match grid.dim() {
        1 => (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = grid.axis_coord(i);
                let mut best = mags[i]; // y = x term
                for y in (0..n).step_by(stride) {
                    let d = (grid.axis_coord(y) - xi).abs();
                    let v = mags[y] / (1.0 + scale * d).powf(a);
                    if v > best {
                        best = v;
                    }
                }
                best
            })
            .collect(),
        _ => (0..grid.node_count())
            .into_par_iter()
            .map(|idx| {
                let x = grid.coord(idx);
                let mut best = mags[idx];
                for yi in (0..n).step_by(stride) {
                    for yj in (0..n).step_by(stride) {
                        let yidx = yi * n + yj;
                        let y = grid.coord(yidx);
                        let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
                        let v = mags[yidx] / (1.0 + scale * d2.sqrt()).powf(a);
                        if v > best {
                            best = v;
                        }
                    }
                }
                best
            })
            .collect(),
    };
    let values = out.into_iter().map(|v| num_complex::Complex64::new(v, 0.0)).collect();
    GridFunction::new(grid.clone(), values).expect("maximal values are finite")
}

/// Hypothesis bound on the Peetre parameter:
/// `a > alpha + c_log(1/q) + n (1/p^- + c_inf(1/p,1/u))`.
pub fn peetre_a_bound(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    budget: usize,
) -> Result<f64> {
    let n = p.dim() as f64;
    let c_log_q = q
        .declared_log_holder()
        .map(|(c, _)| c)
        .unwrap_or_else(|| crate::exponent::log_holder_constants(q, budget).0);
    Ok(w.alpha() + c_log_q + n * (1.0 / p.cached_min() + c_infinity_pu(p, u, budget)?))
}

#[derive(Debug, Clone)]
pub struct PeetreReport {
    /// besov-morrey norm over plain-convolution quasinorm, per trial.
    pub ratio_admissible_vs_plain: Vec<f64>,
    /// plain-convolution over peetre-maximal quasinorm, per trial.
    pub ratio_plain_vs_maximal: Vec<f64>,
    pub domination_holds: bool,
    pub a_bound: f64,
    pub a_used: f64,
    pub hypothesis_met: bool,
}

impl PeetreReport {
    pub fn max_spread(&self) -> f64 {
        let spread = |v: &[f64]| {
            let lo = v.iter().cloned().filter(|x| *x > 0.0).fold(f64::INFINITY, f64::min);
            let hi = v.iter().cloned().fold(0.0f64, f64::max);
            if lo.is_finite() && hi > 0.0 {
                (hi / lo).max(hi.max(1.0 / lo))
            } else {
                1.0
            }
        };
        spread(&self.ratio_admissible_vs_plain).max(spread(&self.ratio_plain_vs_maximal))
    }
}

/// Compares the three quasinorms of the maximal-function characterization on
/// random band-limited trials: (1) through the admissible system, (2) through
/// plain Peetre-window convolutions, (3) through Peetre maximal functions.
/// The domination (2) <= (3) is exact and asserted; the other ratios are
/// reported.
#[allow(clippy::too_many_arguments)]
pub fn peetre_characterization_report(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    sys_a: &AdmissibleSystem,
    sys_p: &PeetreSystem,
    a: f64,
    trials: usize,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
    seed: u64,
) -> Result<PeetreReport> {
    let grid = balls.grid();
    let a_bound = peetre_a_bound(p, q, u, w, 128)?;
    let y_stride = if grid.dim() == 1 { 1 } else { 4 };
    let results: Vec<(f64, f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64, bool)> {
            let mut rng = trial_rng(seed, t as u64);
            let f = band_limited_bump(grid, sys_a.max_level(), &mut rng);
            let besov = besov_morrey_norm(p, q, u, w, sys_a, &f, balls, cfg)?;
            let pieces = peetre_pieces(sys_p, &f)?;
            let plain = norm_mixed_morrey(p, q, u, &weight_sequence_entries(&pieces, w)?, balls, cfg)?;
            let maximal_entries: Vec<GridFunction> = pieces
                .entries()
                .iter()
                .enumerate()
                .map(|(j, g)| peetre_maximal_of_piece(g, j, a, y_stride))
                .collect();
            let maximal_seq = GridFunctionSequence::new(maximal_entries)?;
            let maximal =
                norm_mixed_morrey(p, q, u, &weight_sequence_entries(&maximal_seq, w)?, balls, cfg)?;
            let dominated = plain <= maximal * (1.0 + 1e-9) + 1e-12;
            let r12 = if plain > 0.0 { besov / plain } else { 0.0 };
            let r23 = if maximal > 0.0 { plain / maximal } else { 0.0 };
            Ok((r12, r23, dominated))
        })
        .collect::<Result<_>>()?;
    Ok(PeetreReport {
        ratio_admissible_vs_plain: results.iter().map(|r| r.0).collect(),
        ratio_plain_vs_maximal: results.iter().map(|r| r.1).collect(),
        domination_holds: results.iter().all(|r| r.2),
        a_bound,
        a_used: a,
        hypothesis_met: a > a_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::BallSearchOptions;
    use crate::grid::Grid;
    use crate::lebesgue::norm_lp;
    use num_complex::Complex64;

    fn grid512() -> Grid {
        Grid::new(1, 8.0, 512).unwrap()
    }

    #[test]
    fn constant_function_has_only_low_pass_piece() {
        let grid = grid512();
        let sys = AdmissibleSystem::build(&grid, 3, 1.0).unwrap();
        let f = GridFunction::from_real_fn(&grid, |_| 1.0).unwrap();
        let pieces = littlewood_paley_pieces(&sys, &f).unwrap();
        assert!((pieces.entries()[0].values()[0].re - 1.0).abs() < 1e-10);
        for j in 1..pieces.len() {
            assert!(pieces.entries()[j].sup_abs() < 1e-10, "level {j} should vanish");
        }
    }

    #[test]
    fn single_frequency_lands_in_matching_bands() {
        let grid = grid512();
        let sys = AdmissibleSystem::build(&grid, 4, 1.0).unwrap();
        // lattice frequency of magnitude close to 2 sits in the j=1 plateau
        let k0 = (std::f64::consts::PI / 8.0) * ((2.0 / (std::f64::consts::PI / 8.0)).round());
        let f = GridFunction::from_fn(&grid, |x| Complex64::new(0.0, k0 * x[0]).exp()).unwrap();
        let pieces = littlewood_paley_pieces(&sys, &f).unwrap();
        for (j, piece) in pieces.entries().iter().enumerate() {
            let expect = sys.window(j, &[k0]);
            let got = piece.sup_abs();
            assert!(
                (got - expect).abs() < 1e-8,
                "level {j}: sup {got} vs window {expect}"
            );
        }
    }

    #[test]
    fn piece_energy_bounded_by_overlap_count() {
        let grid = grid512();
        let sys = AdmissibleSystem::build(&grid, 4, 1.0).unwrap();
        let mut rng = trial_rng(11, 0);
        let f = band_limited_bump(&grid, 4, &mut rng);
        let pieces = littlewood_paley_pieces(&sys, &f).unwrap();
        let energy = |g: &GridFunction| {
            g.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.cell_volume()
        };
        let total: f64 = pieces.entries().iter().map(energy).sum();
        // at most three windows overlap at any frequency
        assert!(total <= 3.0 * energy(&f) + 1e-12, "total {total}");
    }

    #[test]
    fn besov_norm_constant_exponents_comparable_to_l2() {
        let grid = grid512();
        let p = VariableExponent::constant(2.0, 1, 8.0);
        let w = WeightSequence::constant_smoothness(0.0, 5, 1, 8.0);
        let sys = AdmissibleSystem::build(&grid, 4, 1.0).unwrap();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let cfg = BisectionConfig::default();
        let mut rng = trial_rng(3, 1);
        let f = band_limited_bump(&grid, 4, &mut rng);
        let besov = besov_morrey_norm(&p, &p, &p, &w, &sys, &f, &balls, &cfg).unwrap();
        let l2 = norm_lp(&p, &f, &cfg).unwrap();
        let ratio = besov / l2;
        assert!(ratio > 0.25 && ratio < 4.0, "ratio {ratio}");
    }

    #[test]
    fn besov_norm_zero_function() {
        let grid = grid512();
        let p = VariableExponent::constant(2.0, 1, 8.0);
        let w = WeightSequence::constant_smoothness(0.5, 4, 1, 8.0);
        let sys = AdmissibleSystem::build(&grid, 3, 1.0).unwrap();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let cfg = BisectionConfig::default();
        let z = GridFunction::zeros(&grid);
        assert_eq!(besov_morrey_norm(&p, &p, &p, &w, &sys, &z, &balls, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn besov_weight_scales_single_band_function() {
        // weights factor out of a single-entry sequence: s=1 vs s=0 on a
        // function living at level j0 changes the norm by 2^{j0}
        let grid = grid512();
        let p = VariableExponent::constant(2.0, 1, 8.0);
        let sys = AdmissibleSystem::build(&grid, 4, 1.0).unwrap();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let cfg = BisectionConfig::default();
        let j0 = 3usize;
        // plateau frequency of level 3: |xi| = 8
        let k0 = (std::f64::consts::PI / 8.0) * ((8.0 / (std::f64::consts::PI / 8.0)).round());
        let f = GridFunction::from_fn(&grid, |x| Complex64::new(0.0, k0 * x[0]).exp()).unwrap();
        let w0 = WeightSequence::constant_smoothness(0.0, 5, 1, 8.0);
        let w1 = WeightSequence::constant_smoothness(1.0, 5, 1, 8.0);
        let n0 = besov_morrey_norm(&p, &p, &p, &w0, &sys, &f, &balls, &cfg).unwrap();
        let n1 = besov_morrey_norm(&p, &p, &p, &w1, &sys, &f, &balls, &cfg).unwrap();
        let ratio = n1 / n0;
        let expect = (1u64 << j0) as f64;
        assert!((ratio - expect).abs() <= 1e-6 * expect, "ratio {ratio} vs {expect}");
    }

    #[test]
    fn single_band_besov_with_trivial_weights_reduces_to_lp() {
        // a frequency living in exactly one window: the weighted piece
        // sequence has one nonzero entry, so for w = 1, u = p and constant q
        // the besov norm is the Lp norm of that piece
        let grid = grid512();
        let p = VariableExponent::log_smooth(1.3, 0.6, 1, 8.0).unwrap();
        let q = VariableExponent::constant(1.7, 1, 8.0);
        let w = WeightSequence::constant_smoothness(0.0, 5, 1, 8.0);
        let sys = AdmissibleSystem::build(&grid, 4, 1.0).unwrap();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let cfg = BisectionConfig::default();
        // |xi| close to 2: the low-pass has fallen to zero and only the j=1
        // window is active
        let k0 = (std::f64::consts::PI / 8.0) * ((2.05 / (std::f64::consts::PI / 8.0)).round());
        let f = GridFunction::from_fn(&grid, |x| Complex64::new(0.0, k0 * x[0]).exp()).unwrap();
        let pieces = littlewood_paley_pieces(&sys, &f).unwrap();
        let active: Vec<usize> = (0..pieces.len())
            .filter(|&j| pieces.entries()[j].sup_abs() > 1e-12)
            .collect();
        assert_eq!(active, vec![1], "expected a single active band");
        let besov = besov_morrey_norm(&p, &q, &p, &w, &sys, &f, &balls, &cfg).unwrap();
        let lp = norm_lp(&p, &pieces.entries()[1], &cfg).unwrap();
        assert!((besov - lp).abs() <= 1e-8 * lp, "{besov} vs {lp}");
    }

    #[test]
    fn peetre_maximal_dominates_pointwise_and_shrinks_with_a() {
        let grid = Grid::new(1, 8.0, 256).unwrap();
        let sys = PeetreSystem::build(&grid, 3).unwrap();
        let mut rng = trial_rng(21, 0);
        let f = band_limited_bump(&grid, 3, &mut rng);
        let piece = fourier_multiplier(&f, |xi| sys.window(2, xi));
        let m_small = peetre_maximal(&sys, &f, 2, 1.5, 1).unwrap();
        let m_large = peetre_maximal(&sys, &f, 2, 3.0, 1).unwrap();
        for i in 0..grid.node_count() {
            let base = piece.values()[i].norm();
            assert!(m_small.values()[i].re >= base - 1e-12);
            assert!(m_large.values()[i].re >= base - 1e-12);
            assert!(m_large.values()[i].re <= m_small.values()[i].re + 1e-12);
        }
    }

    #[test]
    fn peetre_maximal_constant_piece_is_constant() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let g = GridFunction::from_real_fn(&grid, |_| 0.7).unwrap();
        let m = peetre_maximal_of_piece(&g, 1, 2.0, 1);
        for v in m.values() {
            assert!((v.re - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn peetre_maximal_large_a_collapses_to_absolute_value() {
        let grid = Grid::new(1, 8.0, 256).unwrap();
        let sys = PeetreSystem::build(&grid, 3).unwrap();
        let mut rng = trial_rng(22, 0);
        let f = band_limited_bump(&grid, 3, &mut rng);
        let piece = fourier_multiplier(&f, |xi| sys.window(1, xi));
        // at level 4 the spacing satisfies 2^j h = 1, so every off-diagonal
        // term is suppressed by at least 2^64
        let m = peetre_maximal_of_piece(&piece, 4, 64.0, 1);
        let mut worst = 0.0f64;
        for i in 0..grid.node_count() {
            worst = worst.max((m.values()[i].re - piece.values()[i].norm()).abs());
        }
        assert!(worst < 1e-6, "worst {worst}");
    }
}
