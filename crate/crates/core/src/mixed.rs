//! Mixed Lebesgue-sequence and Morrey-sequence semimodulars and quasinorms.
//!
//! The modulars sum, over the sequence index, inner unit-ball infima
//! `inf { lambda : modular(g / lambda^{1/q(.)}) <= 1 }`; the Morrey variant
//! additionally takes a supremum over the ball search set inside each term.
//! Norms are outer unit-ball infima of these modulars, computed by the same
//! bracketing bisection. When the bound `q` admits it, a second route through
//! pointwise q-powers and the `p/q` norm is available for cross-checking.

use rayon::prelude::*;

use crate::balls::{BallSearchSet, NodeSet};
use crate::bisect::{bisect_threshold, BisectionConfig};
use crate::error::{Result, VexError};
use crate::exponent::VariableExponent;
use crate::grid::GridFunctionSequence;
use crate::lebesgue::{inner_infimum, phi_p, restricted_norm};
use crate::morrey::check_ordering;

/// Which evaluation route the mixed modular takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedRoute {
    /// Literal inner-infimum bisection; always applicable.
    InfimumBisection,
    /// Pointwise q-power inside an L_{p/q} norm; applicable when q is bounded,
    /// or where q = infinity only at nodes with p = infinity.
    SimpleForm,
}

struct MixedData {
    pv: Vec<f64>,
    qv: Vec<f64>,
    tvs: Vec<Vec<f64>>,
    cell: f64,
}

fn gather(
    p: &VariableExponent,
    q: &VariableExponent,
    fs: &GridFunctionSequence,
) -> MixedData {
    let grid = fs.grid();
    MixedData {
        pv: p.sample(grid),
        qv: q.sample(grid),
        tvs: fs.entries().iter().map(|f| f.abs_values()).collect(),
        cell: grid.cell_volume(),
    }
}

/// Scenes: per sequence entry, the node sets swept by the supremum together
/// with their largest prefactor. The Lebesgue case is a single full-domain
/// scene with prefactor one.
struct SceneSet {
    sets: Vec<NodeSet>,
    prefactors: Vec<f64>,
}

impl SceneSet {
    fn lebesgue() -> Self {
        SceneSet { sets: vec![NodeSet::All], prefactors: vec![1.0] }
    }

    fn morrey(balls: &BallSearchSet, pv: &[f64], uv: &[f64]) -> Self {
        SceneSet {
            sets: balls.sets().to_vec(),
            prefactors: balls.max_prefactors(pv, uv),
        }
    }
}

/// Per-entry evaluation plan for the scene suprema: restricted norms of every
/// entry on every scene (bisection seeds), scenes ranked by descending
/// `prefactor * norm`, and the global range of the finite q values.
///
/// The ranking enables a sound skip: the inner infimum of a scene never
/// exceeds `max(base^{q_lo}, base^{q_hi})` with `base = c * norm` (unit-ball
/// property plus monotonicity of `lambda^{1/q}`), so scenes whose bound
/// cannot beat the current supremum need no bisection. The winning scene is
/// still evaluated by the literal inner bisection. Skipping is disabled when
/// q takes the value infinity anywhere (the infimum can then jump to
/// infinity, which no norm-based bound sees).
struct SupPlan {
    seeds: Vec<Vec<f64>>,
    order: Vec<Vec<usize>>,
    q_lo: f64,
    q_hi: f64,
    skippable: bool,
}

impl SupPlan {
    fn build(data: &MixedData, scenes: &SceneSet, cfg: &BisectionConfig) -> Result<SupPlan> {
        let seeds: Vec<Vec<f64>> = data
            .tvs
            .par_iter()
            .map(|tv| {
                scenes
                    .sets
                    .iter()
                    .map(|set| {
                        crate::lebesgue::restricted_norm_self_seeded(
                            &data.pv, tv, set, data.cell, 1.0, cfg,
                        )
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let order: Vec<Vec<usize>> = seeds
            .iter()
            .map(|per_set| {
                let mut idx: Vec<usize> = (0..per_set.len()).collect();
                idx.sort_by(|&a, &b| {
                    let va = per_set[a] * scenes.prefactors[a];
                    let vb = per_set[b] * scenes.prefactors[b];
                    vb.partial_cmp(&va).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
                });
                idx
            })
            .collect();
        let mut q_lo = f64::INFINITY;
        let mut q_hi = 0.0f64;
        let mut skippable = true;
        for &q in &data.qv {
            if q.is_infinite() {
                skippable = false;
            } else {
                q_lo = q_lo.min(q);
                q_hi = q_hi.max(q);
            }
        }
        if !q_lo.is_finite() {
            // q is infinite everywhere; the inner branch is cheap anyway
            skippable = false;
        }
        Ok(SupPlan { seeds, order, q_lo, q_hi, skippable })
    }

    /// Sound upper bound for the scene's inner infimum.
    fn upper_bound(&self, base: f64) -> f64 {
        if base <= 0.0 {
            return 0.0;
        }
        let padded = base * (1.0 + 1e-8);
        padded.powf(self.q_lo).max(padded.powf(self.q_hi))
    }
}

/// `sum_nu sup_scenes inner_inf(scale * prefactor * f_nu)`.
fn mixed_modular_impl(
    data: &MixedData,
    scenes: &SceneSet,
    scale: f64,
    cfg: &BisectionConfig,
    plan: Option<&SupPlan>,
) -> f64 {
    let inner_cfg = cfg.inner();
    let per_entry: Vec<f64> = data
        .tvs
        .par_iter()
        .enumerate()
        .map(|(nu, tv)| {
            let mut sup = 0.0f64;
            let indices: Box<dyn Iterator<Item = usize>> = match plan {
                Some(pl) => Box::new(pl.order[nu].iter().cloned()),
                None => Box::new(0..scenes.sets.len()),
            };
            for sid in indices {
                let pref = scenes.prefactors[sid];
                if pref == 0.0 {
                    continue;
                }
                let seed = plan.map(|pl| pl.seeds[nu][sid]);
                if let Some(pl) = plan {
                    if pl.skippable && pl.upper_bound(scale * pref * pl.seeds[nu][sid]) <= sup {
                        continue;
                    }
                }
                let v = inner_infimum(
                    &data.pv,
                    &data.qv,
                    tv,
                    &scenes.sets[sid],
                    data.cell,
                    scale * pref,
                    &inner_cfg,
                    seed,
                );
                sup = sup.max(v);
                if sup == f64::INFINITY {
                    break;
                }
            }
            sup
        })
        .collect();
    per_entry.iter().sum()
}

/// Simple-form route: per entry and scene, `|| phi_q(c |f|) ||_{L_{p/q}}`.
/// Errors where the route does not apply (q unbounded at a node with finite p).
fn mixed_modular_simple_impl(
    data: &MixedData,
    scenes: &SceneSet,
    scale: f64,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let n = data.pv.len();
    let mut ev = vec![0.0f64; n];
    for i in 0..n {
        let (p, q) = (data.pv[i], data.qv[i]);
        ev[i] = if q.is_infinite() {
            if p.is_finite() {
                return Err(VexError::Domain(
                    "simple form needs q bounded or p = infinity wherever q is".into(),
                ));
            }
            1.0
        } else if p.is_infinite() {
            f64::INFINITY
        } else {
            p / q
        };
    }
    let inner_cfg = cfg.inner();
    let per_entry: Vec<Result<f64>> = data
        .tvs
        .par_iter()
        .map(|tv| {
            let mut sup = 0.0f64;
            let mut gv = vec![0.0f64; n];
            for (set, &pref) in scenes.sets.iter().zip(&scenes.prefactors) {
                if pref == 0.0 {
                    continue;
                }
                let c = scale * pref;
                let mut infinite = false;
                for i in set.iter(n) {
                    let g = phi_p(data.qv[i], c * tv[i]);
                    if g == f64::INFINITY {
                        infinite = true;
                        break;
                    }
                    gv[i] = g;
                }
                if infinite {
                    return Ok(f64::INFINITY);
                }
                let v = restricted_norm(&ev, &gv, set, data.cell, 1.0, &inner_cfg, None)?;
                sup = sup.max(v);
            }
            Ok(sup)
        })
        .collect();
    let mut total = 0.0;
    for v in per_entry {
        total += v?;
    }
    Ok(total)
}

/// Mixed Lebesgue-sequence semimodular at scale one.
pub fn modular_mixed_lebesgue(
    p: &VariableExponent,
    q: &VariableExponent,
    fs: &GridFunctionSequence,
    cfg: &BisectionConfig,
) -> f64 {
    let data = gather(p, q, fs);
    mixed_modular_impl(&data, &SceneSet::lebesgue(), 1.0, cfg, None)
}

/// Scaled variant used by the inequality reports: the semimodular of
/// `scale * (f_nu)_nu`.
pub fn modular_mixed_lebesgue_scaled(
    p: &VariableExponent,
    q: &VariableExponent,
    fs: &GridFunctionSequence,
    scale: f64,
    cfg: &BisectionConfig,
) -> f64 {
    let data = gather(p, q, fs);
    mixed_modular_impl(&data, &SceneSet::lebesgue(), scale, cfg, None)
}

/// Same value through the simple-form route, where applicable.
pub fn modular_mixed_lebesgue_simple(
    p: &VariableExponent,
    q: &VariableExponent,
    fs: &GridFunctionSequence,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let data = gather(p, q, fs);
    mixed_modular_simple_impl(&data, &SceneSet::lebesgue(), 1.0, cfg)
}

/// Mixed Morrey-sequence semimodular at scale one.
pub fn modular_mixed_morrey(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    fs: &GridFunctionSequence,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let data = gather(p, q, fs);
    let uv = u.sample(fs.grid());
    check_ordering(&data.pv, &uv)?;
    let scenes = SceneSet::morrey(balls, &data.pv, &uv);
    let plan = SupPlan::build(&data, &scenes, cfg)?;
    Ok(mixed_modular_impl(&data, &scenes, 1.0, cfg, Some(&plan)))
}

/// Same value through the simple-form route, where applicable.
pub fn modular_mixed_morrey_simple(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    fs: &GridFunctionSequence,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let data = gather(p, q, fs);
    let uv = u.sample(fs.grid());
    check_ordering(&data.pv, &uv)?;
    let scenes = SceneSet::morrey(balls, &data.pv, &uv);
    mixed_modular_simple_impl(&data, &scenes, 1.0, cfg)
}

fn norm_from_scenes(
    data: &MixedData,
    scenes: &SceneSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    if data.tvs.iter().all(|tv| tv.iter().all(|&t| t == 0.0)) {
        return Ok(0.0);
    }
    let plan = SupPlan::build(data, scenes, cfg)?;
    // seed the outer bracket from the iterated-structure heuristic
    let q_floor = data
        .qv
        .iter()
        .fold(f64::INFINITY, |m, &q| m.min(q))
        .min(1.0)
        .max(0.05);
    let mut hi_seed = 0.0f64;
    let mut lo_seed = 0.0f64;
    for per_entry in &plan.seeds {
        let best = per_entry
            .iter()
            .zip(&scenes.prefactors)
            .map(|(&n, &c)| n * c)
            .fold(0.0f64, f64::max);
        hi_seed += best.powf(q_floor);
        lo_seed = lo_seed.max(best);
    }
    hi_seed = hi_seed.powf(1.0 / q_floor).max(lo_seed);
    let accept =
        |mu: f64| mixed_modular_impl(data, scenes, 1.0 / mu, cfg, Some(&plan)) <= 1.0;
    bisect_threshold(accept, (lo_seed * 0.99, hi_seed * 1.01), cfg)
}

/// Mixed Lebesgue-sequence quasinorm (outer unit-ball infimum).
pub fn norm_mixed_lebesgue(
    p: &VariableExponent,
    q: &VariableExponent,
    fs: &GridFunctionSequence,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let data = gather(p, q, fs);
    norm_from_scenes(&data, &SceneSet::lebesgue(), cfg)
}

/// Mixed Morrey-sequence quasinorm (outer unit-ball infimum).
pub fn norm_mixed_morrey(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    fs: &GridFunctionSequence,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let data = gather(p, q, fs);
    let uv = u.sample(fs.grid());
    check_ordering(&data.pv, &uv)?;
    let scenes = SceneSet::morrey(balls, &data.pv, &uv);
    norm_from_scenes(&data, &scenes, cfg)
}

/// Both sides of the norm-from-modular estimate
/// `norm <= max(modular^{1/q^-}, modular^{1/q^+})`.
#[derive(Debug, Clone)]
pub struct ModularBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub applicable: bool,
    pub pass: bool,
}

pub fn norm_from_modular_bound(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    fs: &GridFunctionSequence,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<ModularBoundReport> {
    let modular = modular_mixed_morrey(p, q, u, fs, balls, cfg)?;
    let q_min = q.cached_min();
    let q_max = q.cached_max();
    let applicable = q_min.is_finite() && (q_max.is_finite() || modular > 0.0);
    if !applicable {
        return Ok(ModularBoundReport { lhs: f64::NAN, rhs: f64::NAN, applicable, pass: false });
    }
    let lhs = norm_mixed_morrey(p, q, u, fs, balls, cfg)?;
    let hi = modular.powf(1.0 / q_min);
    let lo = if q_max.is_infinite() { 1.0 } else { modular.powf(1.0 / q_max) };
    let rhs = hi.max(lo);
    let pass = lhs <= rhs * (1.0 + 1e-8);
    Ok(ModularBoundReport { lhs, rhs, applicable, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::BallSearchOptions;
    use crate::grid::{Grid, GridFunction};
    use crate::lebesgue::norm_lp;
    use crate::morrey::morrey_norm_direct;

    fn grid128() -> Grid {
        Grid::new(1, 4.0, 128).unwrap()
    }

    fn bump(grid: &Grid, c: f64, w: f64, a: f64) -> GridFunction {
        GridFunction::from_real_fn(grid, |x| a * (-(x[0] - c) * (x[0] - c) / (w * w)).exp()).unwrap()
    }

    fn seq(entries: Vec<GridFunction>) -> GridFunctionSequence {
        GridFunctionSequence::new(entries).unwrap()
    }

    #[test]
    fn zero_sequence_has_zero_modular_and_norm() {
        let grid = grid128();
        let p = VariableExponent::constant(2.0, 1, 4.0);
        let q = VariableExponent::constant(1.5, 1, 4.0);
        let cfg = BisectionConfig::default();
        let fs = seq(vec![GridFunction::zeros(&grid), GridFunction::zeros(&grid)]);
        assert_eq!(modular_mixed_lebesgue(&p, &q, &fs, &cfg), 0.0);
        assert_eq!(norm_mixed_lebesgue(&p, &q, &fs, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn single_unit_norm_entry_gives_modular_one() {
        let grid = grid128();
        let p = VariableExponent::constant(2.0, 1, 4.0);
        let q = VariableExponent::log_smooth(1.0, 1.0, 1, 4.0).unwrap();
        let cfg = BisectionConfig::default();
        let f = bump(&grid, 0.2, 0.8, 1.0);
        let n = norm_lp(&p, &f, &cfg).unwrap();
        let f = f.scale_real(1.0 / n);
        let fs = seq(vec![GridFunction::zeros(&grid), f]);
        let m = modular_mixed_lebesgue(&p, &q, &fs, &cfg);
        assert!((m - 1.0).abs() < 1e-7, "modular {m}");
        // cross-check against the simple-form route
        let ms = modular_mixed_lebesgue_simple(&p, &q, &fs, &cfg).unwrap();
        assert!((m - ms).abs() < 1e-8, "{m} vs {ms}");
    }

    #[test]
    fn constant_q_modular_is_sum_of_norm_powers() {
        let grid = grid128();
        let p = VariableExponent::log_smooth(1.4, 0.7, 1, 4.0).unwrap();
        let q = VariableExponent::constant(2.5, 1, 4.0);
        let cfg = BisectionConfig::default();
        let f0 = bump(&grid, -0.5, 0.6, 0.9);
        let f1 = bump(&grid, 0.7, 0.4, 1.3);
        let fs = seq(vec![f0.clone(), f1.clone()]);
        let m = modular_mixed_lebesgue(&p, &q, &fs, &cfg);
        let n0 = norm_lp(&p, &f0, &cfg).unwrap();
        let n1 = norm_lp(&p, &f1, &cfg).unwrap();
        let expect = n0.powf(2.5) + n1.powf(2.5);
        assert!((m - expect).abs() < 1e-8 * expect.max(1.0), "{m} vs {expect}");
    }

    #[test]
    fn constant_q_norm_is_iterated() {
        let grid = grid128();
        let p = VariableExponent::log_smooth(1.4, 0.7, 1, 4.0).unwrap();
        let q = VariableExponent::constant(3.0, 1, 4.0);
        let cfg = BisectionConfig::default();
        let f0 = bump(&grid, -0.5, 0.6, 0.9);
        let f1 = bump(&grid, 0.7, 0.4, 1.3);
        let fs = seq(vec![f0.clone(), f1.clone()]);
        let norm = norm_mixed_lebesgue(&p, &q, &fs, &cfg).unwrap();
        let n0 = norm_lp(&p, &f0, &cfg).unwrap();
        let n1 = norm_lp(&p, &f1, &cfg).unwrap();
        let expect = (n0.powi(3) + n1.powi(3)).powf(1.0 / 3.0);
        assert!((norm - expect).abs() <= 1e-8 * expect, "{norm} vs {expect}");
    }

    #[test]
    fn single_entry_norm_ignores_q() {
        let grid = grid128();
        let p = VariableExponent::constant(1.7, 1, 4.0);
        let cfg = BisectionConfig::default();
        let f = bump(&grid, 0.1, 0.7, 1.1);
        let base = norm_lp(&p, &f, &cfg).unwrap();
        for q in [
            VariableExponent::constant(1.0, 1, 4.0),
            VariableExponent::constant(4.0, 1, 4.0),
            VariableExponent::log_smooth(0.7, 2.0, 1, 4.0).unwrap(),
            VariableExponent::constant(f64::INFINITY, 1, 4.0),
        ] {
            let fs = seq(vec![GridFunction::zeros(&grid), f.clone(), GridFunction::zeros(&grid)]);
            let n = norm_mixed_lebesgue(&p, &q, &fs, &cfg).unwrap();
            assert!((n - base).abs() <= 1e-8 * base, "q case: {n} vs {base}");
        }
    }

    #[test]
    fn homogeneity_of_mixed_norm() {
        let grid = grid128();
        let p = VariableExponent::constant(1.3, 1, 4.0);
        let q = VariableExponent::log_smooth(1.1, 1.4, 1, 4.0).unwrap();
        let cfg = BisectionConfig::default();
        let fs = seq(vec![bump(&grid, -0.3, 0.5, 0.8), bump(&grid, 0.4, 0.9, 1.2)]);
        let one = norm_mixed_lebesgue(&p, &q, &fs, &cfg).unwrap();
        let two = norm_mixed_lebesgue(&p, &q, &fs.scale_real(2.0), &cfg).unwrap();
        assert!((two - 2.0 * one).abs() <= 1e-9 * two, "{two} vs {}", 2.0 * one);
    }

    #[test]
    fn morrey_mixed_u_equals_p_matches_lebesgue_mixed() {
        let grid = grid128();
        let p = VariableExponent::log_smooth(1.2, 0.9, 1, 4.0).unwrap();
        let q = VariableExponent::log_smooth(1.3, 1.1, 1, 4.0).unwrap();
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let fs = seq(vec![bump(&grid, -0.4, 0.5, 0.7), bump(&grid, 0.5, 0.7, 1.1)]);
        let a = modular_mixed_morrey(&p, &q, &p, &fs, &balls, &cfg).unwrap();
        let b = modular_mixed_lebesgue(&p, &q, &fs, &cfg);
        assert!((a - b).abs() <= 1e-8 * b.max(1.0), "{a} vs {b}");
        let na = norm_mixed_morrey(&p, &q, &p, &fs, &balls, &cfg).unwrap();
        let nb = norm_mixed_lebesgue(&p, &q, &fs, &cfg).unwrap();
        assert!((na - nb).abs() <= 1e-8 * nb, "{na} vs {nb}");
    }

    #[test]
    fn morrey_mixed_single_entry_reduces_to_morrey() {
        let grid = grid128();
        let p = VariableExponent::constant(1.0, 1, 4.0);
        let u = VariableExponent::constant(2.0, 1, 4.0);
        let q = VariableExponent::log_smooth(0.9, 1.5, 1, 4.0).unwrap();
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::with_defaults(&grid).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 })
            .unwrap();
        let fs = seq(vec![GridFunction::zeros(&grid), f.clone()]);
        let mixed = norm_mixed_morrey(&p, &q, &u, &fs, &balls, &cfg).unwrap();
        let single = morrey_norm_direct(&p, &u, &f, &balls, &cfg).unwrap();
        assert!((mixed - single).abs() <= 1e-8 * single, "{mixed} vs {single}");
    }

    #[test]
    fn morrey_mixed_ordering_violation() {
        let grid = grid128();
        let p = VariableExponent::constant(3.0, 1, 4.0);
        let u = VariableExponent::constant(2.0, 1, 4.0);
        let q = VariableExponent::constant(1.0, 1, 4.0);
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let fs = seq(vec![bump(&grid, 0.0, 0.5, 1.0)]);
        assert!(matches!(
            modular_mixed_morrey(&p, &q, &u, &fs, &balls, &cfg),
            Err(VexError::Ordering(_))
        ));
    }

    #[test]
    fn mixed_t_power_identity() {
        let grid = grid128();
        let p = VariableExponent::log_smooth(1.1, 0.8, 1, 4.0).unwrap();
        let q = VariableExponent::log_smooth(1.4, 0.9, 1, 4.0).unwrap();
        let u = p.scaled(0.8).unwrap();
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let fs = seq(vec![bump(&grid, -0.6, 0.5, 0.9), bump(&grid, 0.3, 0.8, 1.4)]);
        let base = norm_mixed_morrey(&p, &q, &u, &fs, &balls, &cfg).unwrap();
        for &t in &[0.5, 2.0] {
            let (pt, qt, ut) = (p.scaled(t).unwrap(), q.scaled(t).unwrap(), u.scaled(t).unwrap());
            let powered = GridFunctionSequence::new(
                fs.entries().iter().map(|f| f.abs_power(t)).collect(),
            )
            .unwrap();
            let lhs = norm_mixed_morrey(&pt, &qt, &ut, &powered, &balls, &cfg).unwrap();
            let rhs = base.powf(t);
            assert!(
                (lhs - rhs).abs() <= 1e-7 * rhs.max(1e-12),
                "t = {t}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn q_infinity_embedding_constant_one() {
        let grid = grid128();
        let p = VariableExponent::constant(1.6, 1, 4.0);
        let u = VariableExponent::constant(2.2, 1, 4.0);
        let q_inf = VariableExponent::constant(f64::INFINITY, 1, 4.0);
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let fs = seq(vec![bump(&grid, -0.4, 0.6, 1.0), bump(&grid, 0.5, 0.4, 0.7)]);
        let with_inf = norm_mixed_morrey(&p, &q_inf, &u, &fs, &balls, &cfg).unwrap();
        for q in [
            VariableExponent::constant(1.0, 1, 4.0),
            VariableExponent::constant(2.0, 1, 4.0),
            VariableExponent::log_smooth(1.2, 1.3, 1, 4.0).unwrap(),
        ] {
            let with_q = norm_mixed_morrey(&p, &q, &u, &fs, &balls, &cfg).unwrap();
            assert!(
                with_inf <= with_q + 1e-9 + 2.0 * cfg.relative_tolerance * with_q,
                "{with_inf} > {with_q}"
            );
        }
    }

    #[test]
    fn modular_bound_report_passes() {
        let grid = grid128();
        let p = VariableExponent::constant(1.5, 1, 4.0);
        let u = VariableExponent::constant(2.0, 1, 4.0);
        let q = VariableExponent::log_smooth(1.0, 1.0, 1, 4.0).unwrap();
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let fs = seq(vec![bump(&grid, -0.2, 0.5, 1.1), bump(&grid, 0.6, 0.8, 0.6)]);
        let rep = norm_from_modular_bound(&p, &q, &u, &fs, &balls, &cfg).unwrap();
        assert!(rep.applicable);
        assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn morrey_simple_route_agrees_with_bisection_route() {
        let grid = grid128();
        let p = VariableExponent::log_smooth(1.3, 0.8, 1, 4.0).unwrap();
        let q = VariableExponent::log_smooth(1.1, 1.2, 1, 4.0).unwrap();
        let u = p.scaled(0.75).unwrap();
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let fs = seq(vec![bump(&grid, -0.5, 0.4, 0.9), bump(&grid, 0.2, 0.7, 1.2)]);
        let a = modular_mixed_morrey(&p, &q, &u, &fs, &balls, &cfg).unwrap();
        let b = modular_mixed_morrey_simple(&p, &q, &u, &fs, &balls, &cfg).unwrap();
        assert!(
            (a - b).abs() <= 10.0 * cfg.relative_tolerance * a.max(1.0),
            "{a} vs {b}"
        );
    }

    #[test]
    fn appendix_inner_infimum_forces_plain_modular_small() {
        // whenever the inner infimum is <= 1, the plain modular is <= 1 too
        let grid = grid128();
        let p = VariableExponent::constant(2.0, 1, 4.0);
        let q = VariableExponent::log_smooth(1.0, 2.0, 1, 4.0).unwrap();
        let cfg = BisectionConfig::default();
        for amp in [0.3, 0.55, 0.8] {
            let f = bump(&grid, 0.1, 0.6, amp);
            let fs = seq(vec![f.clone()]);
            let inner = modular_mixed_lebesgue(&p, &q, &fs, &cfg);
            if inner <= 1.0 {
                let plain = crate::lebesgue::modular_lp(&p, &f);
                assert!(plain <= 1.0 + 1e-9, "inner {inner} plain {plain}");
            }
        }
    }
}
