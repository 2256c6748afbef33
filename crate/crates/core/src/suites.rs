//! Named verification suites behind `vexspace verify`: randomized identity
//! batteries, inequality batteries, boundedness/stability reports, and
//! construction certification. Deterministic for a fixed (config, seed) and
//! independent of the thread count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::atoms::{
    build_atom, build_molecule, sequence_space_norm, synthesis_bound_report, synthesize,
    verify_derivative_bounds, verify_moments, verify_support, AtomFamily, Coefficient,
    CoefficientArray, DyadicCube,
};
use crate::balls::{BallSearchOptions, BallSearchSet};
use crate::besov::{
    besov_morrey_norm, peetre_a_bound, peetre_characterization_report, peetre_maximal_of_piece,
};
use crate::bisect::BisectionConfig;
use crate::config::RunConfig;
use crate::error::{Result, VexError};
use crate::exponent::{
    check_admissible_weights, conjugate_exponent, ScalarField, VariableExponent, WeightSequence,
};
use crate::fft::fourier_multiplier;
use crate::grid::{Grid, GridFunction, GridFunctionSequence};
use crate::kernels::{
    convolution_inequality_report, convolution_inequality_report_lebesgue,
    discrete_convolution_report, eta_analytic_mass, weight_shift_check, EtaKernel,
};
use crate::lebesgue::{modular_lp, norm_lp};
use crate::mixed::{
    modular_mixed_lebesgue, modular_mixed_lebesgue_simple, modular_mixed_morrey,
    modular_mixed_morrey_simple, norm_from_modular_bound, norm_mixed_lebesgue, norm_mixed_morrey,
};
use crate::morrey::{morrey_norm_direct, morrey_norm_interchanged};
use crate::report::SuiteResult;
use crate::trials::{random_bump, random_bump_sequence, trial_rng};
use crate::windows::{AdmissibleSystem, PeetreSystem};

pub const SUITE_NAMES: [&str; 7] = [
    "identities",
    "semimodular-axioms",
    "convolution",
    "peetre",
    "atoms",
    "embeddings",
    "all",
];

/// FNV-1a stream id so per-case randomness is independent of case order.
fn stream_of(case: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in case.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn rng_for(seed: u64, case: &str) -> ChaCha8Rng {
    trial_rng(seed, stream_of(case))
}

fn random_exponent(rng: &mut ChaCha8Rng, floor: f64, dim: usize, r: f64) -> VariableExponent {
    match rng.gen_range(0..3) {
        0 => VariableExponent::constant(rng.gen_range(floor..floor + 2.0), dim, r),
        1 => VariableExponent::log_smooth(
            rng.gen_range(floor..floor + 1.0),
            rng.gen_range(0.2..1.0),
            dim,
            r,
        )
        .expect("family parameters are positive"),
        _ => VariableExponent::canonical(
            rng.gen_range(floor..floor + 1.0),
            rng.gen_range(0.2..1.0),
            dim,
            r,
        )
        .expect("family parameters are positive"),
    }
}

fn random_u_above(rng: &mut ChaCha8Rng, p: &VariableExponent) -> VariableExponent {
    if rng.gen_bool(0.5) {
        p.scaled(rng.gen_range(0.5..0.95)).expect("positive divisor")
    } else {
        p.clone()
    }
}

fn rel_ok(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * rhs.abs().max(lhs.abs()).max(1e-12)
}

struct Ctx {
    grid: Grid,
    balls: BallSearchSet,
    cfg: BisectionConfig,
}

impl Ctx {
    fn battery(config: &RunConfig) -> Result<Ctx> {
        let grid = config.resolve_grid()?;
        // the identity batteries hold for any search set used consistently on
        // both sides; a strided set keeps the battery fast
        let balls = BallSearchSet::build(
            &grid,
            &BallSearchOptions { center_stride: Some(16), ladder_base: 2.0 },
        )?;
        Ok(Ctx { grid, balls, cfg: config.bisection.resolve() })
    }
}

type CaseFn = Box<dyn Fn() -> Result<Vec<SuiteResult>> + Send + Sync>;

fn run_cases(cases: Vec<(String, CaseFn)>) -> Result<Vec<SuiteResult>> {
    let outputs: Vec<Result<Vec<SuiteResult>>> = cases
        .par_iter()
        .map(|(case, f)| {
            let start = std::time::Instant::now();
            let mut rows = f().map_err(|e| VexError::Validity(format!("case {case}: {e}")))?;
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut rows {
                r.wall_ms = ms;
            }
            Ok(rows)
        })
        .collect();
    let mut all = Vec::new();
    for o in outputs {
        all.extend(o?);
    }
    Ok(all)
}

// ---------------------------------------------------------------- identities

fn identities_suite(config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let ctx = std::sync::Arc::new(Ctx::battery(config)?);
    let n_cases = 20;
    let mut cases: Vec<(String, CaseFn)> = Vec::new();

    for k in 0..n_cases {
        let case = format!("morrey-eq-lp/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.7, 1, ctx.grid.box_radius());
                let f = random_bump(&ctx.grid, &mut rng);
                let lhs = morrey_norm_direct(&p, &p, &f, &ctx.balls, &ctx.cfg)?;
                let rhs = norm_lp(&p, &f, &ctx.cfg)?;
                Ok(vec![SuiteResult::check(
                    "identities",
                    &case,
                    lhs,
                    rhs,
                    1e-8,
                    rel_ok(lhs, rhs, 1e-8),
                )])
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("two-route/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let f = random_bump(&ctx.grid, &mut rng);
                let lhs = morrey_norm_direct(&p, &u, &f, &ctx.balls, &ctx.cfg)?;
                let rhs = morrey_norm_interchanged(&p, &u, &f, &ctx.balls, &ctx.cfg)?;
                let tol = 2.0 * ctx.cfg.relative_tolerance;
                Ok(vec![SuiteResult::check(
                    "identities",
                    &case,
                    lhs,
                    rhs,
                    tol,
                    rel_ok(lhs, rhs, tol),
                )])
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("iterated-q/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let qv = [0.7, 1.0, 1.5, 2.0, 3.0, f64::INFINITY][rng.gen_range(0..6)];
                let q = VariableExponent::constant(qv, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 3, &mut rng);
                let lhs = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                let norms: Result<Vec<f64>> = fs
                    .entries()
                    .iter()
                    .map(|f| morrey_norm_direct(&p, &u, f, &ctx.balls, &ctx.cfg))
                    .collect();
                let norms = norms?;
                let rhs = if qv.is_finite() {
                    norms.iter().map(|n| n.powf(qv)).sum::<f64>().powf(1.0 / qv)
                } else {
                    norms.iter().cloned().fold(0.0f64, f64::max)
                };
                Ok(vec![SuiteResult::check(
                    "identities",
                    &case,
                    lhs,
                    rhs,
                    1e-8,
                    rel_ok(lhs, rhs, 1e-8),
                )])
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("single-entry/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.6, 1, ctx.grid.box_radius());
                let f = random_bump(&ctx.grid, &mut rng);
                let pos = rng.gen_range(0..3);
                let mut entries = vec![GridFunction::zeros(&ctx.grid); 3];
                entries[pos] = f.clone();
                let fs = GridFunctionSequence::new(entries)?;
                let lhs = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                let rhs = morrey_norm_direct(&p, &u, &f, &ctx.balls, &ctx.cfg)?;
                Ok(vec![SuiteResult::check(
                    "identities",
                    &case,
                    lhs,
                    rhs,
                    1e-8,
                    rel_ok(lhs, rhs, 1e-8),
                )])
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("u-eq-p/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let q = random_exponent(&mut rng, 0.6, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 3, &mut rng);
                let lhs = norm_mixed_morrey(&p, &q, &p, &fs, &ctx.balls, &ctx.cfg)?;
                let rhs = norm_mixed_lebesgue(&p, &q, &fs, &ctx.cfg)?;
                let m_lhs = modular_mixed_morrey(&p, &q, &p, &fs, &ctx.balls, &ctx.cfg)?;
                let m_rhs = modular_mixed_lebesgue(&p, &q, &fs, &ctx.cfg);
                Ok(vec![
                    SuiteResult::check("identities", &case, lhs, rhs, 1e-8, rel_ok(lhs, rhs, 1e-8)),
                    SuiteResult::check(
                        "identities",
                        &format!("{case}/modular"),
                        m_lhs,
                        m_rhs,
                        1e-8,
                        rel_ok(m_lhs, m_rhs, 1e-8),
                    ),
                ])
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("t-power/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.9, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 2, &mut rng);
                let base = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                let mut rows = Vec::new();
                for &t in &[0.5, 2.0] {
                    let (pt, qt, ut) = (p.scaled(t)?, q.scaled(t)?, u.scaled(t)?);
                    let powered = GridFunctionSequence::new(
                        fs.entries().iter().map(|f| f.abs_power(t)).collect(),
                    )?;
                    let lhs = norm_mixed_morrey(&pt, &qt, &ut, &powered, &ctx.balls, &ctx.cfg)?;
                    let rhs = base.powf(t);
                    rows.push(SuiteResult::check(
                        "identities",
                        &format!("{case}/t-{t}"),
                        lhs,
                        rhs,
                        1e-7,
                        rel_ok(lhs, rhs, 1e-7),
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    // concrete values: the sqrt(2) Morrey example on the default ball set and
    // the piecewise-exponent bisection example against a root-find oracle
    {
        let case = "concrete/morrey-sqrt2".to_string();
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = &ctx.grid;
                let p = VariableExponent::constant(1.0, 1, grid.box_radius());
                let u = VariableExponent::constant(2.0, 1, grid.box_radius());
                let f = GridFunction::from_real_fn(grid, |x| {
                    if (0.0..=1.0).contains(&x[0]) {
                        1.0
                    } else {
                        0.0
                    }
                })?;
                let default_balls = BallSearchSet::with_defaults(grid)?;
                let lhs = morrey_norm_direct(&p, &u, &f, &default_balls, &ctx.cfg)?;
                let rhs = std::f64::consts::SQRT_2;
                Ok(vec![SuiteResult::check(
                    "identities",
                    &case,
                    lhs,
                    rhs,
                    0.02,
                    (lhs - rhs).abs() <= 0.02 * rhs,
                )])
            }),
        ));
    }
    {
        let case = "concrete/bisection-lambda".to_string();
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = &ctx.grid;
                let n = grid.points_per_axis();
                let values: Vec<f64> = (0..n)
                    .map(|i| if grid.axis_coord(i) < 0.0 { 2.0 } else { 3.0 })
                    .collect();
                let p = VariableExponent::table(grid, values)?;
                let f = GridFunction::from_real_fn(grid, |x| {
                    if x[0].abs() <= 1.0 {
                        2.0
                    } else {
                        0.0
                    }
                })?;
                let lhs = norm_lp(&p, &f, &ctx.cfg)?;
                // scalar root-find oracle with the grid's quadrature masses
                let h = grid.spacing();
                let (mut m2, mut m3) = (0.0, 0.0);
                for i in 0..n {
                    let x = grid.axis_coord(i);
                    if x.abs() <= 1.0 {
                        if x < 0.0 {
                            m2 += h;
                        } else {
                            m3 += h;
                        }
                    }
                }
                let g = |l: f64| m2 * (2.0 / l).powi(2) + m3 * (2.0 / l).powi(3) - 1.0;
                let (mut lo, mut hi) = (1.0, 10.0);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if g(mid) > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let rhs = hi;
                Ok(vec![SuiteResult::check(
                    "identities",
                    &case,
                    lhs,
                    rhs,
                    1e-6,
                    (lhs - rhs).abs() <= 1e-6 * rhs,
                )])
            }),
        ));
    }

    run_cases(cases)
}

// ------------------------------------------------------- semimodular axioms

fn semimodular_suite(config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let ctx = std::sync::Arc::new(Ctx::battery(config)?);
    let n_cases = 20;
    let mut cases: Vec<(String, CaseFn)> = Vec::new();

    for k in 0..10 {
        let case = format!("axioms/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.7, 1, ctx.grid.box_radius());
                let f = random_bump(&ctx.grid, &mut rng);
                let mut rows = Vec::new();
                // zero element
                let zero = modular_lp(&p, &GridFunction::zeros(&ctx.grid));
                rows.push(SuiteResult::check("semimodular-axioms", &format!("{case}/zero"), zero, 0.0, 0.0, zero == 0.0));
                // phase invariance is exact
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                let rotated = f.scale(num_complex::Complex64::from_polar(1.0, theta));
                let (a, b) = (modular_lp(&p, &f), modular_lp(&p, &rotated));
                rows.push(SuiteResult::check(
                    "semimodular-axioms",
                    &format!("{case}/phase"),
                    a,
                    b,
                    1e-12,
                    rel_ok(a, b, 1e-12),
                ));
                // monotone in the scale on a ladder
                let mut prev = 0.0;
                let mut monotone = true;
                for step in 1..=8 {
                    let lam = step as f64 * 0.35;
                    let m = modular_lp(&p, &f.scale_real(lam));
                    if m + 1e-14 < prev {
                        monotone = false;
                    }
                    prev = m;
                }
                rows.push(SuiteResult::check(
                    "semimodular-axioms",
                    &format!("{case}/monotone"),
                    if monotone { 1.0 } else { 0.0 },
                    1.0,
                    0.0,
                    monotone,
                ));
                // left continuity at 1
                let target = modular_lp(&p, &f);
                let near = modular_lp(&p, &f.scale_real(1.0 - 1e-9));
                rows.push(SuiteResult::check(
                    "semimodular-axioms",
                    &format!("{case}/left-continuity"),
                    near,
                    target,
                    1e-6,
                    (near - target).abs() <= 1e-6 * target.max(1.0),
                ));
                // unit ball property for the returned norm
                let norm = norm_lp(&p, &f, &ctx.cfg)?;
                let at_norm = modular_lp(&p, &f.scale_real(1.0 / norm));
                let shrunk = norm * (1.0 - 10.0 * ctx.cfg.relative_tolerance);
                let below = modular_lp(&p, &f.scale_real(1.0 / shrunk));
                rows.push(SuiteResult::check(
                    "semimodular-axioms",
                    &format!("{case}/unit-ball"),
                    at_norm,
                    1.0,
                    0.0,
                    at_norm <= 1.0 && below > 1.0,
                ));
                Ok(rows)
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("norm-modular-bound/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.9, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 3, &mut rng)
                    .scale_real(rng.gen_range(0.3..3.0));
                let rep = norm_from_modular_bound(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                Ok(vec![SuiteResult::check(
                    "semimodular-axioms",
                    &case,
                    rep.lhs,
                    rep.rhs,
                    1e-8,
                    rep.applicable && rep.pass,
                )])
            }),
        ));
    }

    for k in 0..n_cases {
        let case = format!("hoelder/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, ctx.grid.box_radius());
                let pc = conjugate_exponent(&p)?;
                let f = random_bump(&ctx.grid, &mut rng);
                let g = random_bump(&ctx.grid, &mut rng);
                let prod = f.mul_pointwise_real(&g.abs_values())?;
                let lhs = prod.abs_values().iter().sum::<f64>() * ctx.grid.cell_volume();
                let rhs = 2.0 * norm_lp(&p, &f, &ctx.cfg)? * norm_lp(&pc, &g, &ctx.cfg)?;
                Ok(vec![SuiteResult::check(
                    "semimodular-axioms",
                    &case,
                    lhs,
                    rhs,
                    0.0,
                    lhs <= rhs * (1.0 + 1e-9),
                )])
            }),
        ));
    }

    for regime in 1..=3 {
        for k in 0..n_cases {
            let case = format!("triangle/regime{regime}-case-{k:02}");
            let ctx = ctx.clone();
            cases.push((
                case.clone(),
                Box::new(move || {
                    let mut rng = rng_for(seed, &case);
                    let r = ctx.grid.box_radius();
                    let (p, q) = match regime {
                        1 => {
                            let p = random_exponent(&mut rng, 1.0, 1, r);
                            let q = VariableExponent::constant(
                                [1.0, 1.5, 2.0, f64::INFINITY][rng.gen_range(0..4)],
                                1,
                                r,
                            );
                            (p, q)
                        }
                        2 => {
                            // 1 <= q <= p
                            let p = random_exponent(&mut rng, 1.4, 1, r);
                            let q = p.scaled(rng.gen_range(1.0..p.cached_min()))?;
                            (p, q)
                        }
                        _ => {
                            // 1/p + 1/q <= 1
                            let p = random_exponent(&mut rng, 2.0, 1, r);
                            let q = random_exponent(&mut rng, 2.0, 1, r);
                            (p, q)
                        }
                    };
                    let u = random_u_above(&mut rng, &p);
                    let fs = random_bump_sequence(&ctx.grid, 2, &mut rng);
                    let gs = random_bump_sequence(&ctx.grid, 2, &mut rng)
                        .scale_real(rng.gen_range(0.2..1.5));
                    let sum = fs.add(&gs)?;
                    let lhs = norm_mixed_morrey(&p, &q, &u, &sum, &ctx.balls, &ctx.cfg)?;
                    let rhs = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?
                        + norm_mixed_morrey(&p, &q, &u, &gs, &ctx.balls, &ctx.cfg)?;
                    Ok(vec![SuiteResult::check(
                        "semimodular-axioms",
                        &case,
                        lhs,
                        rhs,
                        1e-8,
                        lhs <= rhs * (1.0 + 1e-8),
                    )])
                }),
            ));
        }
    }

    for k in 0..10 {
        let case = format!("homogeneous-modular/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.7, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 2, &mut rng);
                let alpha = rng.gen_range(0.3..4.0);
                let base = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                let scaled = norm_mixed_morrey(&p, &q, &u, &fs.scale_real(alpha), &ctx.balls, &ctx.cfg)?;
                let mut rows = vec![SuiteResult::check(
                    "semimodular-axioms",
                    &format!("{case}/homogeneity"),
                    scaled,
                    alpha * base,
                    1e-9,
                    rel_ok(scaled, alpha * base, 1e-9),
                )];
                // definiteness: a visibly nonzero sequence has positive norm,
                // and the modular of a nonzero sequence is positive when q is
                // bounded
                rows.push(SuiteResult::check(
                    "semimodular-axioms",
                    &format!("{case}/definite"),
                    base,
                    0.0,
                    0.0,
                    base > 0.0,
                ));
                if q.cached_max().is_finite() {
                    let m = modular_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                    rows.push(SuiteResult::check(
                        "semimodular-axioms",
                        &format!("{case}/modular-definite"),
                        m,
                        0.0,
                        0.0,
                        m > 0.0,
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    for k in 0..10 {
        let case = format!("route-agreement/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.9, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.7, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 2, &mut rng)
                    .scale_real(rng.gen_range(0.5..2.0));
                let tol = 10.0 * ctx.cfg.relative_tolerance;
                let a = modular_mixed_lebesgue(&p, &q, &fs, &ctx.cfg);
                let b = modular_mixed_lebesgue_simple(&p, &q, &fs, &ctx.cfg)?;
                let ma = modular_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                let mb = modular_mixed_morrey_simple(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                Ok(vec![
                    SuiteResult::check(
                        "semimodular-axioms",
                        &format!("{case}/lebesgue"),
                        a,
                        b,
                        tol,
                        rel_ok(a, b, tol),
                    ),
                    SuiteResult::check(
                        "semimodular-axioms",
                        &format!("{case}/morrey"),
                        ma,
                        mb,
                        tol,
                        rel_ok(ma, mb, tol),
                    ),
                ])
            }),
        ));
    }

    for k in 0..10 {
        let case = format!("reduction/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                // a regime where the Lebesgue-level triangle inequality holds
                // with constants (A, t) = (1, 1)
                let p = random_exponent(&mut rng, 1.2, 1, ctx.grid.box_radius());
                let q = VariableExponent::constant(rng.gen_range(1.0..2.5), 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let fs = random_bump_sequence(&ctx.grid, 2, &mut rng);
                let gs = random_bump_sequence(&ctx.grid, 2, &mut rng);
                let sum = fs.add(&gs)?;
                let leb_lhs = norm_mixed_lebesgue(&p, &q, &sum, &ctx.cfg)?;
                let leb_rhs = norm_mixed_lebesgue(&p, &q, &fs, &ctx.cfg)?
                    + norm_mixed_lebesgue(&p, &q, &gs, &ctx.cfg)?;
                let mor_lhs = norm_mixed_morrey(&p, &q, &u, &sum, &ctx.balls, &ctx.cfg)?;
                let mor_rhs = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?
                    + norm_mixed_morrey(&p, &q, &u, &gs, &ctx.balls, &ctx.cfg)?;
                let leb_holds = leb_lhs <= leb_rhs * (1.0 + 1e-8);
                let mor_holds = mor_lhs <= mor_rhs * (1.0 + 1e-8);
                Ok(vec![SuiteResult::check(
                    "semimodular-axioms",
                    &case,
                    mor_lhs,
                    mor_rhs,
                    1e-8,
                    !leb_holds || mor_holds,
                )])
            }),
        ));
    }

    run_cases(cases)
}

// ------------------------------------------------------------- convolution

fn convolution_suite(config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let cfg = config.bisection.resolve();
    let mut cases: Vec<(String, CaseFn)> = Vec::new();

    // kernel mass is level independent on a fine grid
    {
        let case = "eta-mass/level-independence".to_string();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = Grid::new(1, 8.0, 4096)?;
                let m = 3.0;
                let analytic = eta_analytic_mass(1, m);
                let mut rows = Vec::new();
                for nu in 0..5u32 {
                    let mass = EtaKernel::build(&grid, nu, m)?.mass();
                    let scale = (1u64 << nu) as f64;
                    let tail = 2.0 * (1.0 + scale * 8.0).powf(1.0 - m) / (scale * (m - 1.0));
                    let kink = analytic * m * scale * grid.spacing();
                    rows.push(SuiteResult::check(
                        "convolution",
                        &format!("{case}/level-{nu}"),
                        mass,
                        analytic,
                        tail + kink,
                        (mass - analytic).abs() <= tail + kink + 1e-9,
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    // mixed Morrey convolution ratios at m = threshold + 1, with grid
    // refinement stability
    {
        let case = "mixed-ratio/threshold-plus-one".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, 8.0);
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.9, 1, 8.0);
                let mut rows = Vec::new();
                let mut maxima = Vec::new();
                for &n in &[256usize, 512] {
                    let grid = Grid::new(1, 8.0, n)?;
                    let balls = BallSearchSet::build(
                        &grid,
                        &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                    )?;
                    let threshold =
                        crate::kernels::convolution_threshold(&p, &q, &u, 128)?;
                    let rep = convolution_inequality_report(
                        &p,
                        &q,
                        &u,
                        threshold + 1.0,
                        50,
                        4,
                        &grid,
                        &balls,
                        &cfg,
                        seed,
                    )?;
                    rows.push(SuiteResult::check(
                        "convolution",
                        &format!("{case}/N-{n}-finite"),
                        rep.max_ratio,
                        0.0,
                        0.0,
                        rep.hypothesis_met && rep.all_finite() && rep.max_ratio > 0.0,
                    ));
                    maxima.push(rep.max_ratio);
                }
                rows.push(SuiteResult::check(
                    "convolution",
                    &format!("{case}/refinement-stable"),
                    maxima[1],
                    maxima[0],
                    2.0,
                    maxima[1] <= 2.0 * maxima[0] && maxima[0] <= 2.0 * maxima[1],
                ));
                Ok(rows)
            }),
        ));
    }

    // hypothesis gate: decay below the threshold still runs, but the rows are
    // informational and never affect the exit code
    {
        let case = "mixed-ratio/below-threshold".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, 8.0);
                let u = p.scaled(0.6).expect("positive divisor");
                let q = random_exponent(&mut rng, 0.9, 1, 8.0);
                let grid = Grid::new(1, 8.0, 256)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let threshold = crate::kernels::convolution_threshold(&p, &q, &u, 128)?;
                // above the dimension (so the kernel is integrable) but below
                // the theorem's hypothesis
                let m = (threshold - 0.2).max(1.1);
                let rep = convolution_inequality_report(
                    &p, &q, &u, m, 8, 4, &grid, &balls, &cfg, seed,
                )?;
                let mut rows = vec![SuiteResult::informational(
                    "convolution",
                    &format!("{case}/max-ratio"),
                    rep.max_ratio,
                    rep.threshold,
                )];
                rows.push(SuiteResult::informational(
                    "convolution",
                    &format!("{case}/hypothesis-met"),
                    if rep.hypothesis_met { 1.0 } else { 0.0 },
                    0.0,
                ));
                Ok(rows)
            }),
        ));
    }

    // u = p with constant q reduces to the Lebesgue-level ratios
    {
        let case = "lebesgue-crosscheck/u-eq-p".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, 8.0);
                let q = VariableExponent::constant(rng.gen_range(1.0..3.0), 1, 8.0);
                let grid = Grid::new(1, 8.0, 256)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let m = 3.0;
                let a = convolution_inequality_report(&p, &q, &p, m, 10, 4, &grid, &balls, &cfg, seed)?;
                let b = convolution_inequality_report_lebesgue(&p, &q, m, 10, 4, &grid, &cfg, seed)?;
                let mut rows = Vec::new();
                for (t, (x, y)) in a.per_trial.iter().zip(&b.per_trial).enumerate() {
                    rows.push(SuiteResult::check(
                        "convolution",
                        &format!("{case}/trial-{t:02}"),
                        *x,
                        *y,
                        1e-6,
                        rel_ok(*x, *y, 1e-6),
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    // single-function Morrey corollary
    {
        let case = "morrey-single/ratio".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, 8.0);
                let u = random_u_above(&mut rng, &p);
                let grid = Grid::new(1, 8.0, 256)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let n_dim = 1.0;
                let threshold = n_dim + n_dim * crate::exponent::c_infinity_pu(&p, &u, 128)?;
                let rep = crate::kernels::morrey_convolution_report(
                    &p,
                    &u,
                    threshold + 1.0,
                    12,
                    4,
                    &grid,
                    &balls,
                    &cfg,
                    seed,
                )?;
                Ok(vec![SuiteResult::check(
                    "convolution",
                    &case,
                    rep.max_ratio,
                    0.0,
                    0.0,
                    rep.hypothesis_met && rep.all_finite() && rep.max_ratio > 0.0,
                )])
            }),
        ));
    }

    // weight shift bound
    {
        let case = "weight-shift/report".to_string();
        cases.push((
            case.clone(),
            Box::new(move || {
                let constant = weight_shift_check(&ScalarField::Constant(0.9), 1.0, 5, 1, 8.0, 24);
                let s = ScalarField::LogSmooth { a: 0.0, b: 1.0, radius: 8.0 };
                let w1 = weight_shift_check(&s, 1.5, 5, 1, 8.0, 24);
                let w2 = weight_shift_check(&s, 3.0, 5, 1, 8.0, 24);
                Ok(vec![
                    SuiteResult::check(
                        "convolution",
                        &format!("{case}/constant-alpha"),
                        constant,
                        1.0,
                        1e-12,
                        (constant - 1.0).abs() < 1e-12,
                    ),
                    SuiteResult::check(
                        "convolution",
                        &format!("{case}/log-smooth-finite"),
                        w1,
                        0.0,
                        0.0,
                        w1.is_finite(),
                    ),
                    SuiteResult::check(
                        "convolution",
                        &format!("{case}/decay-helps"),
                        w2,
                        w1,
                        1e-12,
                        w2 <= w1 + 1e-12,
                    ),
                ])
            }),
        ));
    }

    // discrete convolution delta ladder
    {
        let case = "discrete/delta-ladder".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.9, 1, 8.0);
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.8, 1, 8.0);
                let grid = Grid::new(1, 8.0, 256)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let mut rows = Vec::new();
                let mut prev: Option<f64> = None;
                for &delta in &[0.5, 1.0, 2.0] {
                    let rep = discrete_convolution_report(
                        &p, &q, &u, delta, 10, 5, &grid, &balls, &cfg, seed,
                    )?;
                    rows.push(SuiteResult::check(
                        "convolution",
                        &format!("{case}/delta-{delta}"),
                        rep.max_ratio,
                        0.0,
                        0.0,
                        rep.all_finite(),
                    ));
                    if let Some(last) = prev {
                        rows.push(SuiteResult::check(
                            "convolution",
                            &format!("{case}/monotone-at-{delta}"),
                            rep.max_ratio,
                            last,
                            1e-9,
                            rep.max_ratio <= last + 1e-9,
                        ));
                    }
                    prev = Some(rep.max_ratio);
                }
                Ok(rows)
            }),
        ));
    }

    run_cases(cases)
}

// ------------------------------------------------------------------ peetre

fn peetre_suite(config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let cfg = config.bisection.resolve();
    let mut cases: Vec<(String, CaseFn)> = Vec::new();

    {
        let case = "characterization/report".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, 8.0);
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.9, 1, 8.0);
                let w = WeightSequence::constant_smoothness(rng.gen_range(0.0..1.0), 5, 1, 8.0);
                let mut rows = Vec::new();
                let mut spreads = Vec::new();
                for &n in &[256usize, 512] {
                    let grid = Grid::new(1, 8.0, n)?;
                    let balls = BallSearchSet::build(
                        &grid,
                        &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                    )?;
                    let sys_a = AdmissibleSystem::build(&grid, 4, 1.0)?;
                    let sys_p = PeetreSystem::build(&grid, 4)?;
                    let a = peetre_a_bound(&p, &q, &u, &w, 128)? + 1.0;
                    let rep = peetre_characterization_report(
                        &p, &q, &u, &w, &sys_a, &sys_p, a, 8, &balls, &cfg, seed,
                    )?;
                    rows.push(SuiteResult::check(
                        "peetre",
                        &format!("{case}/N-{n}-domination"),
                        if rep.domination_holds { 1.0 } else { 0.0 },
                        1.0,
                        0.0,
                        rep.domination_holds && rep.hypothesis_met,
                    ));
                    let spread = rep.max_spread();
                    rows.push(SuiteResult::check(
                        "peetre",
                        &format!("{case}/N-{n}-spread"),
                        spread,
                        10.0,
                        0.0,
                        spread <= 10.0,
                    ));
                    spreads.push(spread);
                }
                rows.push(SuiteResult::check(
                    "peetre",
                    &format!("{case}/refinement-stable"),
                    spreads[1],
                    spreads[0],
                    2.0,
                    spreads[1] <= 2.0 * spreads[0] && spreads[0] <= 2.0 * spreads[1],
                ));
                Ok(rows)
            }),
        ));
    }

    // two distinct admissible systems give comparable besov norms
    {
        let case = "system-independence/report".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 1.0, 1, 8.0);
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.9, 1, 8.0);
                let w = WeightSequence::constant_smoothness(0.5, 5, 1, 8.0);
                let grid = Grid::new(1, 8.0, 512)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let sys1 = AdmissibleSystem::build(&grid, 4, 1.0)?;
                let sys2 = AdmissibleSystem::build(&grid, 4, 0.55)?;
                let mut rows = Vec::new();
                for t in 0..8u64 {
                    let mut trng = trial_rng(seed, 1000 + t);
                    let f = crate::trials::band_limited_bump(&grid, 4, &mut trng);
                    let n1 = besov_morrey_norm(&p, &q, &u, &w, &sys1, &f, &balls, &cfg)?;
                    let n2 = besov_morrey_norm(&p, &q, &u, &w, &sys2, &f, &balls, &cfg)?;
                    let ratio = if n2 > 0.0 { n1 / n2 } else { 1.0 };
                    rows.push(SuiteResult::check(
                        "peetre",
                        &format!("{case}/trial-{t:02}"),
                        ratio,
                        10.0,
                        0.0,
                        ratio <= 10.0 && ratio >= 0.1,
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    // exact a-monotonicity of the maximal function
    {
        let case = "maximal/a-monotone".to_string();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = Grid::new(1, 8.0, 256)?;
                let sys = PeetreSystem::build(&grid, 3)?;
                let mut rng = rng_for(seed, &case);
                let f = crate::trials::band_limited_bump(&grid, 3, &mut rng);
                let piece = fourier_multiplier(&f, |xi| sys.window(2, xi));
                let m2 = peetre_maximal_of_piece(&piece, 2, 2.0, 1);
                let m4 = peetre_maximal_of_piece(&piece, 2, 4.0, 1);
                let ok = m2
                    .values()
                    .iter()
                    .zip(m4.values())
                    .all(|(lo_a, hi_a)| hi_a.re <= lo_a.re + 1e-12);
                let dominates = piece
                    .values()
                    .iter()
                    .zip(m4.values())
                    .all(|(g, m)| m.re >= g.norm() - 1e-12);
                Ok(vec![
                    SuiteResult::check(
                        "peetre",
                        &format!("{case}/monotone"),
                        if ok { 1.0 } else { 0.0 },
                        1.0,
                        0.0,
                        ok,
                    ),
                    SuiteResult::check(
                        "peetre",
                        &format!("{case}/dominates-piece"),
                        if dominates { 1.0 } else { 0.0 },
                        1.0,
                        0.0,
                        dominates,
                    ),
                ])
            }),
        ));
    }

    run_cases(cases)
}

// ------------------------------------------------------------------- atoms

fn atoms_suite(config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let cfg = config.bisection.resolve();
    let mut cases: Vec<(String, CaseFn)> = Vec::new();

    // construction certification across levels and parameter combos
    for (ci, (k_s, l_m, d, m_decay)) in
        [(2usize, 0usize, 3.0, 8.0), (2, 2, 3.0, 10.0), (1, 3, 1.5, 6.0), (3, 1, 2.0, 12.0)]
            .into_iter()
            .enumerate()
    {
        let case = format!("construction/combo-{ci}");
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = Grid::new(1, 4.0, 2048)?;
                let fam_atoms = AtomFamily::atoms(k_s, l_m, d)?;
                let fam_mols = AtomFamily::molecules(k_s, l_m, d, m_decay)?;
                let mut rows = Vec::new();
                for j in 0..=4u32 {
                    let cube = DyadicCube::new(j, vec![if j == 0 { 0 } else { 1 }]);
                    let atom = build_atom(&fam_atoms, &cube, &grid)?;
                    verify_support(&atom, &fam_atoms, &cube)?;
                    verify_moments(&atom, &cube, l_m, 1e-8)?;
                    verify_derivative_bounds(&atom, &fam_atoms, &cube)?;
                    let mol = build_molecule(&fam_mols, &cube, &grid)?;
                    verify_support(&mol, &fam_mols, &cube)?;
                    verify_moments(&mol, &cube, l_m, 1e-8)?;
                    verify_derivative_bounds(&mol, &fam_mols, &cube)?;
                    rows.push(SuiteResult::check(
                        "atoms",
                        &format!("{case}/level-{j}"),
                        1.0,
                        1.0,
                        1e-8,
                        true,
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    // shipped weight families pass the admissibility check
    {
        let case = "weights/shipped-families".to_string();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rows = Vec::new();
                let families: Vec<(&str, ScalarField)> = vec![
                    ("constant-0", ScalarField::Constant(0.0)),
                    ("constant-1", ScalarField::Constant(1.0)),
                    ("log-smooth", ScalarField::LogSmooth { a: 0.2, b: 0.8, radius: 8.0 }),
                    ("canonical", ScalarField::Canonical { a: 0.1, b: 0.6 }),
                ];
                for (name, s) in families {
                    let w = WeightSequence::power(s, 5, 1, 8.0)?;
                    let rep = check_admissible_weights(&w, 48)?;
                    rows.push(SuiteResult::check(
                        "atoms",
                        &format!("{case}/{name}"),
                        rep.worst_alpha_constant,
                        1.1,
                        0.0,
                        rep.pass(),
                    ));
                }
                Ok(rows)
            }),
        ));
    }

    // window systems verify their lattice invariants exactly
    {
        let case = "system/lattice-invariants".to_string();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = Grid::new(1, 8.0, 512)?;
                let mut ok = true;
                for softness in [1.0, 0.55] {
                    ok &= AdmissibleSystem::build(&grid, 4, softness)?
                        .verify_on_lattice(&grid)
                        .is_ok();
                }
                ok &= PeetreSystem::build(&grid, 4)?.verify_positivity().is_ok();
                Ok(vec![SuiteResult::check(
                    "atoms",
                    &case,
                    if ok { 1.0 } else { 0.0 },
                    1.0,
                    0.0,
                    ok,
                )])
            }),
        ));
    }

    // synthesis ratios: stable across single-atom levels and under refinement
    {
        let case = "synthesis/per-level".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = Grid::new(1, 4.0, 2048)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(16), ladder_base: 2.0 },
                )?;
                let p = VariableExponent::constant(1.5, 1, 4.0);
                let u = VariableExponent::constant(2.0, 1, 4.0);
                let q = VariableExponent::constant(1.5, 1, 4.0);
                let w = WeightSequence::constant_smoothness(0.5, 6, 1, 4.0);
                let sys = AdmissibleSystem::build(&grid, 5, 1.0)?;
                let fam = AtomFamily::molecules(2, 2, 3.0, 12.0)?;
                let mut ratios = Vec::new();
                let mut rows = Vec::new();
                for j in 1..=4u32 {
                    let lambda = CoefficientArray::new(vec![Coefficient {
                        level: j,
                        index: vec![1],
                        value: num_complex::Complex64::new(1.0, 0.0),
                    }]);
                    let f = synthesize(&fam, &lambda, &grid)?;
                    let numer = besov_morrey_norm(&p, &q, &u, &w, &sys, &f, &balls, &cfg)?;
                    let denom = sequence_space_norm(&p, &q, &u, &w, &lambda, &grid, &balls, &cfg)?;
                    let ratio = numer / denom;
                    rows.push(SuiteResult::check(
                        "atoms",
                        &format!("{case}/level-{j}"),
                        ratio,
                        0.0,
                        0.0,
                        ratio.is_finite() && ratio > 0.0,
                    ));
                    ratios.push(ratio);
                }
                let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
                rows.push(SuiteResult::check(
                    "atoms",
                    &format!("{case}/stable"),
                    hi,
                    lo,
                    4.0,
                    hi <= 4.0 * lo,
                ));
                Ok(rows)
            }),
        ));
    }

    {
        let case = "synthesis/random-report".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let p = VariableExponent::constant(1.5, 1, 4.0);
                let u = VariableExponent::constant(2.5, 1, 4.0);
                let q = VariableExponent::constant(2.0, 1, 4.0);
                let w = WeightSequence::constant_smoothness(0.3, 5, 1, 4.0);
                let fam = AtomFamily::molecules(2, 2, 3.0, 12.0)?;
                let mut rows = Vec::new();
                let mut maxima = Vec::new();
                for &n in &[1024usize, 2048] {
                    let grid = Grid::new(1, 4.0, n)?;
                    let balls = BallSearchSet::build(
                        &grid,
                        &BallSearchOptions { center_stride: Some(16), ladder_base: 2.0 },
                    )?;
                    let sys = AdmissibleSystem::build(&grid, 4, 1.0)?;
                    let rep = synthesis_bound_report(
                        &p, &q, &u, &w, &fam, &sys, 3, 2, 6, &grid, &balls, &cfg, seed,
                    )?;
                    rows.push(SuiteResult::check(
                        "atoms",
                        &format!("{case}/N-{n}-finite"),
                        rep.max_ratio,
                        0.0,
                        0.0,
                        rep.per_trial.iter().all(|r| r.is_finite()) && rep.max_ratio > 0.0,
                    ));
                    maxima.push(rep.max_ratio);
                }
                rows.push(SuiteResult::check(
                    "atoms",
                    &format!("{case}/refinement-stable"),
                    maxima[1],
                    maxima[0],
                    2.0,
                    maxima[1] <= 2.0 * maxima[0] && maxima[0] <= 2.0 * maxima[1],
                ));
                Ok(rows)
            }),
        ));
    }

    // ratio invariances: coefficient phase rotation and scaling
    {
        let case = "synthesis/invariances".to_string();
        let cfg = cfg.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let grid = Grid::new(1, 4.0, 1024)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(16), ladder_base: 2.0 },
                )?;
                let p = VariableExponent::constant(1.5, 1, 4.0);
                let u = VariableExponent::constant(2.0, 1, 4.0);
                let q = VariableExponent::constant(1.5, 1, 4.0);
                let w = WeightSequence::constant_smoothness(0.4, 5, 1, 4.0);
                let sys = AdmissibleSystem::build(&grid, 4, 1.0)?;
                let fam = AtomFamily::molecules(2, 2, 3.0, 12.0)?;
                let mut rng = rng_for(seed, &case);
                let lambda = CoefficientArray::random(3, &grid, 2, &mut rng);
                let ratio_of = |lam: &CoefficientArray| -> Result<f64> {
                    let f = synthesize(&fam, lam, &grid)?;
                    let numer = besov_morrey_norm(&p, &q, &u, &w, &sys, &f, &balls, &cfg)?;
                    let denom = sequence_space_norm(&p, &q, &u, &w, lam, &grid, &balls, &cfg)?;
                    Ok(numer / denom)
                };
                let base = ratio_of(&lambda)?;
                let rotated = ratio_of(
                    &lambda.scale(num_complex::Complex64::from_polar(1.0, 1.234)),
                )?;
                let scaled = ratio_of(&lambda.scale(num_complex::Complex64::new(5.0, 0.0)))?;
                Ok(vec![
                    SuiteResult::check(
                        "atoms",
                        &format!("{case}/phase"),
                        rotated,
                        base,
                        1e-10,
                        rel_ok(rotated, base, 1e-10),
                    ),
                    SuiteResult::check(
                        "atoms",
                        &format!("{case}/scale"),
                        scaled,
                        base,
                        1e-8,
                        rel_ok(scaled, base, 1e-8),
                    ),
                ])
            }),
        ));
    }

    run_cases(cases)
}

// -------------------------------------------------------------- embeddings

fn embeddings_suite(config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let ctx = std::sync::Arc::new(Ctx::battery(config)?);
    let mut cases: Vec<(String, CaseFn)> = Vec::new();

    for k in 0..20 {
        let case = format!("linf-mixed/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.7, 1, ctx.grid.box_radius());
                let q_inf = VariableExponent::constant(f64::INFINITY, 1, ctx.grid.box_radius());
                let fs = random_bump_sequence(&ctx.grid, 3, &mut rng)
                    .scale_real(rng.gen_range(0.3..2.0));
                let lhs = norm_mixed_morrey(&p, &q_inf, &u, &fs, &ctx.balls, &ctx.cfg)?;
                let rhs = norm_mixed_morrey(&p, &q, &u, &fs, &ctx.balls, &ctx.cfg)?;
                Ok(vec![SuiteResult::check(
                    "embeddings",
                    &case,
                    lhs,
                    rhs,
                    1e-9,
                    lhs <= rhs + 1e-9 + 2.0 * ctx.cfg.relative_tolerance * rhs,
                )])
            }),
        ));
    }

    for k in 0..10 {
        let case = format!("linf-seq/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let grid = Grid::new(1, 4.0, 512)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let p = random_exponent(&mut rng, 0.9, 1, 4.0);
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.7, 1, 4.0);
                let w = WeightSequence::constant_smoothness(rng.gen_range(0.0..0.8), 5, 1, 4.0);
                let lambda = CoefficientArray::random(3, &grid, 2, &mut rng);
                let pairs = crate::atoms::sequence_embedding_check(
                    &p,
                    &q,
                    &u,
                    &w,
                    std::slice::from_ref(&lambda),
                    &grid,
                    &balls,
                    &ctx.cfg,
                )?;
                let (lhs, rhs) = pairs[0];
                Ok(vec![SuiteResult::check(
                    "embeddings",
                    &case,
                    lhs,
                    rhs,
                    1e-9,
                    lhs <= rhs + 1e-9 + 2.0 * ctx.cfg.relative_tolerance * rhs,
                )])
            }),
        ));
    }

    // single-entry coefficient arrays: equality across q
    {
        let case = "linf-seq/single-entry-equality".to_string();
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let grid = Grid::new(1, 4.0, 512)?;
                let balls = BallSearchSet::build(
                    &grid,
                    &BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 },
                )?;
                let p = random_exponent(&mut rng, 0.9, 1, 4.0);
                let u = random_u_above(&mut rng, &p);
                let q = random_exponent(&mut rng, 0.7, 1, 4.0);
                let w = WeightSequence::constant_smoothness(0.5, 4, 1, 4.0);
                let lambda = CoefficientArray::new(vec![Coefficient {
                    level: 2,
                    index: vec![1],
                    value: num_complex::Complex64::new(0.7, 0.2),
                }]);
                let pairs = crate::atoms::sequence_embedding_check(
                    &p,
                    &q,
                    &u,
                    &w,
                    std::slice::from_ref(&lambda),
                    &grid,
                    &balls,
                    &ctx.cfg,
                )?;
                let (lhs, rhs) = pairs[0];
                Ok(vec![SuiteResult::check(
                    "embeddings",
                    &case,
                    lhs,
                    rhs,
                    1e-8,
                    rel_ok(lhs, rhs, 1e-8),
                )])
            }),
        ));
    }

    for k in 0..10 {
        let case = format!("appendix-lemma/case-{k:02}");
        let ctx = ctx.clone();
        cases.push((
            case.clone(),
            Box::new(move || {
                let mut rng = rng_for(seed, &case);
                let p = random_exponent(&mut rng, 0.8, 1, ctx.grid.box_radius());
                let q = random_exponent(&mut rng, 0.7, 1, ctx.grid.box_radius());
                let f = random_bump(&ctx.grid, &mut rng);
                // scale so the single-entry inner infimum is at most one
                let f = f.scale_real(0.5 / norm_lp(&p, &f, &ctx.cfg)?.max(1e-9));
                let fs = GridFunctionSequence::new(vec![f.clone()])?;
                let inner = modular_mixed_lebesgue(&p, &q, &fs, &ctx.cfg);
                let plain = modular_lp(&p, &f);
                Ok(vec![SuiteResult::check(
                    "embeddings",
                    &case,
                    plain,
                    1.0,
                    1e-9,
                    inner > 1.0 || plain <= 1.0 + 1e-9,
                )])
            }),
        ));
    }

    run_cases(cases)
}

/// Runs a named suite; `all` concatenates every suite in canonical order.
pub fn run_suite(name: &str, config: &RunConfig, seed: u64) -> Result<Vec<SuiteResult>> {
    let mut results = match name {
        "identities" => identities_suite(config, seed)?,
        "semimodular-axioms" => semimodular_suite(config, seed)?,
        "convolution" => convolution_suite(config, seed)?,
        "peetre" => peetre_suite(config, seed)?,
        "atoms" => atoms_suite(config, seed)?,
        "embeddings" => embeddings_suite(config, seed)?,
        "all" => {
            let mut all = Vec::new();
            for sub in &SUITE_NAMES[..6] {
                all.extend(run_suite(sub, config, seed)?);
            }
            all
        }
        other => {
            return Err(VexError::Parse(format!(
                "unknown suite {other:?}; expected one of {SUITE_NAMES:?}"
            )))
        }
    };
    results.sort_by(|a, b| (&a.suite, &a.case).cmp(&(&b.suite, &b.case)));
    Ok(results)
}

/// True when no case failed (informational rows never affect this).
pub fn all_passed(results: &[SuiteResult]) -> bool {
    results.iter().all(|r| r.verdict != crate::report::Verdict::Fail)
}
