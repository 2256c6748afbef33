//! Smooth building blocks on dyadic cubes: atoms, molecules, the coefficient
//! sequence norm, synthesis, and their verification.
//!
//! The 1-D generator profile is the L-th derivative of the standard bump
//! `exp(-1/(1-t^2))`, tensorized per axis in two dimensions. Moments are
//! projected out discretely per axis so grid quadrature moments vanish to
//! machine precision, and profiles are rescaled so the finite-difference
//! derivative ratios `|D^k| / 2^{kj}` peak at exactly one.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;

use crate::balls::BallSearchSet;
use crate::besov::besov_morrey_norm;
use crate::bisect::BisectionConfig;
use crate::error::{Result, VexError};
use crate::exponent::{
    c_infinity_pu, c_infinity_pu_r, sigma_t, VariableExponent, WeightSequence,
};
use crate::grid::{Grid, GridFunction, GridFunctionSequence};
use crate::mixed::norm_mixed_morrey;
use crate::trials::trial_rng;
use crate::windows::AdmissibleSystem;

/// Derivatives 0..=max_order of `exp(-1/(1-t^2))` at t, zero outside (-1,1).
///
/// Uses the recurrence `f^{(k+1)} = sum_i C(k,i) g^{(i+1)} f^{(k-i)}` with
/// `g = -1/(1-t^2)` expanded in partial fractions, so every order is exact.
pub fn bump_derivatives(t: f64, max_order: usize) -> Vec<f64> {
    if t.abs() >= 1.0 - 1e-9 {
        return vec![0.0; max_order + 1];
    }
    let (one_m, one_p) = (1.0 - t, 1.0 + t);
    // g^{(i)} = -1/2 * i! * ((1-t)^{-(i+1)} + (-1)^i (1+t)^{-(i+1)})
    let mut g = vec![0.0f64; max_order + 1];
    let mut fact = 1.0;
    for (i, gi) in g.iter_mut().enumerate() {
        if i > 0 {
            fact *= i as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        *gi = -0.5 * fact * (one_m.powi(-(i as i32 + 1)) + sign * one_p.powi(-(i as i32 + 1)));
    }
    let mut f = vec![0.0f64; max_order + 1];
    f[0] = g[0].exp();
    if f[0] == 0.0 {
        return vec![0.0; max_order + 1];
    }
    // binomial table
    let mut binom = vec![vec![0.0f64; max_order + 1]; max_order + 1];
    for k in 0..=max_order {
        binom[k][0] = 1.0;
        for i in 1..=k {
            binom[k][i] = binom[k - 1][i - 1] + if i <= k - 1 { binom[k - 1][i] } else { 0.0 };
        }
    }
    for k in 0..max_order {
        let mut s = 0.0;
        for i in 0..=k {
            s += binom[k][i] * g[i + 1] * f[k - i];
        }
        f[k + 1] = s;
    }
    f
}

/// Closed dyadic cube of level j and lattice index m: center `2^{-j} m`,
/// side `2^{-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicCube {
    pub level: u32,
    pub index: Vec<i64>,
}

impl DyadicCube {
    pub fn new(level: u32, index: Vec<i64>) -> Self {
        DyadicCube { level, index }
    }

    pub fn side(&self) -> f64 {
        (0.5f64).powi(self.level as i32)
    }

    pub fn center(&self) -> Vec<f64> {
        self.index.iter().map(|&m| m as f64 * self.side()).collect()
    }

    /// Membership in the dilated closed cube `d Q_{jm}`.
    pub fn contains_dilated(&self, d: f64, x: &[f64]) -> bool {
        let c = self.center();
        let half = d * self.side() / 2.0;
        x.iter().zip(&c).all(|(xi, ci)| (xi - ci).abs() <= half + 1e-12)
    }

    pub fn fits_in_box(&self, d: f64, box_radius: f64) -> bool {
        let c = self.center();
        let half = d * self.side() / 2.0;
        c.iter().all(|ci| ci.abs() + half <= box_radius + 1e-12)
    }
}

/// Family parameters of the building blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFamily {
    /// Derivative orders controlled by the size bound.
    pub smoothness: usize,
    /// Vanishing moment orders (for levels j >= 1).
    pub moments: usize,
    /// Support dilation factor (> 1).
    pub support_factor: f64,
    /// Molecule decay rate; blocks are plain atoms when absent.
    pub decay: Option<f64>,
}

impl AtomFamily {
    pub fn atoms(smoothness: usize, moments: usize, support_factor: f64) -> Result<Self> {
        if !(support_factor > 1.0) {
            return Err(VexError::Domain("support factor d must exceed 1".into()));
        }
        Ok(AtomFamily { smoothness, moments, support_factor, decay: None })
    }

    pub fn molecules(smoothness: usize, moments: usize, support_factor: f64, decay: f64) -> Result<Self> {
        if !(decay > 0.0) {
            return Err(VexError::Domain("molecule decay M must be positive".into()));
        }
        let mut fam = Self::atoms(smoothness, moments, support_factor)?;
        fam.decay = Some(decay);
        Ok(fam)
    }

    /// The atom-to-molecule scale factor `(1 + d sqrt(n)/2)^{-M}`.
    pub fn molecule_scale(&self, dim: usize) -> f64 {
        match self.decay {
            Some(m) => (1.0 + self.support_factor * (dim as f64).sqrt() / 2.0).powf(-m),
            None => 1.0,
        }
    }
}

/// Per-axis profile: node offsets and values on the support interval.
struct AxisProfile {
    first_node: usize,
    values: Vec<f64>,
}

fn axis_profile(
    grid: &Grid,
    center: f64,
    half_width: f64,
    derivative_order: usize,
) -> AxisProfile {
    let n = grid.points_per_axis();
    let mut first = n;
    let mut values = Vec::new();
    for i in 0..n {
        let t = (grid.axis_coord(i) - center) / half_width;
        if t.abs() < 1.0 {
            if first == n {
                first = i;
            }
            values.push(bump_derivatives(t, derivative_order)[derivative_order]);
        } else if first != n {
            break;
        }
    }
    AxisProfile { first_node: first, values }
}

/// Removes the discrete monomial moments `sum t^g v = 0` for g < orders via
/// Gram-Schmidt on the support nodes.
fn project_out_moments(profile: &mut AxisProfile, grid: &Grid, center: f64, half_width: f64, orders: usize) {
    if orders == 0 || profile.values.is_empty() {
        return;
    }
    let ts: Vec<f64> = (0..profile.values.len())
        .map(|k| (grid.axis_coord(profile.first_node + k) - center) / half_width)
        .collect();
    // orthonormal polynomial basis on the support nodes
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(orders);
    for g in 0..orders {
        let mut b: Vec<f64> = ts.iter().map(|t| t.powi(g as i32)).collect();
        for prev in &basis {
            let dot: f64 = b.iter().zip(prev).map(|(x, y)| x * y).sum();
            for (x, y) in b.iter_mut().zip(prev) {
                *x -= dot * y;
            }
        }
        let norm: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-14 {
            for x in &mut b {
                *x /= norm;
            }
            basis.push(b);
        }
    }
    for b in &basis {
        let dot: f64 = profile.values.iter().zip(b).map(|(x, y)| x * y).sum();
        for (x, y) in profile.values.iter_mut().zip(b) {
            *x -= dot * y;
        }
    }
}

/// k-fold central finite difference of an axis vector at grid spacing h.
fn finite_difference(values: &[f64], h: f64, order: usize) -> Vec<f64> {
    let mut cur = values.to_vec();
    for _ in 0..order {
        let prev = cur.clone();
        for i in 0..cur.len() {
            let up = if i + 1 < prev.len() { prev[i + 1] } else { 0.0 };
            let down = if i >= 1 { prev[i - 1] } else { 0.0 };
            cur[i] = (up - down) / (2.0 * h);
        }
    }
    cur
}

fn axis_fd_maxima(values: &[f64], h: f64, max_order: usize) -> Vec<f64> {
    (0..=max_order)
        .map(|k| {
            finite_difference(values, h, k)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect()
}

struct BuiltBlock {
    axes: Vec<AxisProfile>,
    scale: f64,
}

fn build_block_profiles(
    family: &AtomFamily,
    cube: &DyadicCube,
    grid: &Grid,
) -> Result<BuiltBlock> {
    if cube.index.len() != grid.dim() {
        return Err(VexError::Domain("cube dimension does not match grid".into()));
    }
    if !cube.fits_in_box(family.support_factor, grid.box_radius()) {
        return Err(VexError::Domain(format!(
            "dilated cube at level {} index {:?} does not fit in the box",
            cube.level, cube.index
        )));
    }
    let h = grid.spacing();
    if cube.side() < 8.0 * h - 1e-12 {
        return Err(VexError::Resolution(format!(
            "level {} cubes need side >= 8 spacings, have {:.4} vs h = {:.4}",
            cube.level,
            cube.side(),
            h
        )));
    }
    let half_width = family.support_factor * cube.side() / 2.0;
    let deriv_order = if cube.level >= 1 { family.moments } else { 0 };
    let center = cube.center();
    let mut axes = Vec::with_capacity(grid.dim());
    for axis in 0..grid.dim() {
        let mut prof = axis_profile(grid, center[axis], half_width, deriv_order);
        if cube.level >= 1 {
            project_out_moments(&mut prof, grid, center[axis], half_width, family.moments);
        }
        axes.push(prof);
    }
    // normalization: make max over orders of |D^k| / 2^{kj} equal one,
    // with the multi-index products in two dimensions
    let j_pow: Vec<f64> = (0..=family.smoothness)
        .map(|k| (2.0f64).powi((k as i32) * (cube.level as i32)))
        .collect();
    let maxima: Vec<Vec<f64>> = axes
        .iter()
        .map(|a| axis_fd_maxima(&a.values, h, family.smoothness))
        .collect();
    let mut worst = 0.0f64;
    match grid.dim() {
        1 => {
            for k in 0..=family.smoothness {
                worst = worst.max(maxima[0][k] / j_pow[k]);
            }
        }
        _ => {
            for k1 in 0..=family.smoothness {
                for k2 in 0..=(family.smoothness - k1) {
                    worst = worst.max(maxima[0][k1] * maxima[1][k2] / (j_pow[k1] * j_pow[k2]));
                }
            }
        }
    }
    if worst == 0.0 {
        return Err(VexError::Domain("block profile vanished after projection".into()));
    }
    // in 2-D the scale multiplies the tensor product once; split it evenly
    let scale = match grid.dim() {
        1 => 1.0 / worst,
        _ => 1.0 / worst,
    };
    Ok(BuiltBlock { axes, scale })
}

fn assemble(grid: &Grid, block: &BuiltBlock, overall: f64) -> GridFunction {
    let n = grid.points_per_axis();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    match grid.dim() {
        1 => {
            let a = &block.axes[0];
            for (k, v) in a.values.iter().enumerate() {
                values[a.first_node + k] = Complex64::new(v * block.scale * overall, 0.0);
            }
        }
        _ => {
            let (a, b) = (&block.axes[0], &block.axes[1]);
            for (ka, va) in a.values.iter().enumerate() {
                for (kb, vb) in b.values.iter().enumerate() {
                    let idx = (a.first_node + ka) * n + (b.first_node + kb);
                    values[idx] = Complex64::new(va * vb * block.scale * overall, 0.0);
                }
            }
        }
    }
    GridFunction::new(grid.clone(), values).expect("block values are finite")
}

/// Builds the atom supported near the cube, satisfying the size, support and
/// moment conditions on the grid.
pub fn build_atom(family: &AtomFamily, cube: &DyadicCube, grid: &Grid) -> Result<GridFunction> {
    let block = build_block_profiles(family, cube, grid)?;
    Ok(assemble(grid, &block, 1.0))
}

/// Builds the molecule: the atom scaled by `(1 + d sqrt(n)/2)^{-M}`, verified
/// against the decay bound at every node.
pub fn build_molecule(family: &AtomFamily, cube: &DyadicCube, grid: &Grid) -> Result<GridFunction> {
    let decay = family
        .decay
        .ok_or_else(|| VexError::Domain("family has no molecule decay exponent".into()))?;
    let block = build_block_profiles(family, cube, grid)?;
    let mol = assemble(grid, &block, family.molecule_scale(grid.dim()));
    let check = verify_molecule_decay(&mol, family, cube, decay);
    if let Err(e) = check {
        return Err(VexError::Domain(format!("molecule decay bound violated: {e}")));
    }
    Ok(mol)
}

/// Support check: nodes outside the dilated closed cube carry exactly zero.
pub fn verify_support(block: &GridFunction, family: &AtomFamily, cube: &DyadicCube) -> Result<()> {
    let grid = block.grid();
    let mut buf = [0.0f64; 2];
    for i in 0..grid.node_count() {
        let x = grid.coord_slice(i, &mut buf);
        if !cube.contains_dilated(family.support_factor, x) && block.values()[i].norm() != 0.0 {
            return Err(VexError::Validity(format!(
                "block value {} at node {:?} outside the dilated cube",
                block.values()[i].norm(),
                x
            )));
        }
    }
    Ok(())
}

/// Quadrature moment check: `|integral of x^g block| <= tol` for |g| < orders
/// when the level is at least one.
pub fn verify_moments(block: &GridFunction, cube: &DyadicCube, orders: usize, tol: f64) -> Result<()> {
    if cube.level == 0 || orders == 0 {
        return Ok(());
    }
    let grid = block.grid();
    let cell = grid.cell_volume();
    let mut buf = [0.0f64; 2];
    let combos: Vec<(usize, usize)> = match grid.dim() {
        1 => (0..orders).map(|g| (g, 0)).collect(),
        _ => {
            let mut v = Vec::new();
            for g1 in 0..orders {
                for g2 in 0..(orders - g1) {
                    v.push((g1, g2));
                }
            }
            v
        }
    };
    for (g1, g2) in combos {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..grid.node_count() {
            let x = grid.coord_slice(i, &mut buf);
            let mono = x[0].powi(g1 as i32) * if grid.dim() == 2 { x[1].powi(g2 as i32) } else { 1.0 };
            s += block.values()[i] * mono;
        }
        let m = (s * cell).norm();
        if m > tol {
            return Err(VexError::Validity(format!(
                "moment ({g1},{g2}) = {m:.3e} exceeds tolerance {tol:.1e}"
            )));
        }
    }
    Ok(())
}

/// Derivative-bound check via the shared finite-difference operator:
/// `|D^g block| <= 2^{|g| j} * (1 + 5 h 2^j)` at every node.
pub fn verify_derivative_bounds(
    block: &GridFunction,
    family: &AtomFamily,
    cube: &DyadicCube,
) -> Result<()> {
    let grid = block.grid();
    let h = grid.spacing();
    let slack = 1.0 + 5.0 * h * (1u64 << cube.level) as f64;
    let scale_bound = family.molecule_scale(grid.dim());
    let maxima = block_fd_maxima(block, family.smoothness)?;
    for (orders, m) in &maxima {
        let total: usize = orders.iter().sum();
        let bound = (2.0f64).powi((total as i32) * (cube.level as i32)) * scale_bound;
        if *m > bound * slack {
            return Err(VexError::Validity(format!(
                "derivative {orders:?} maximum {m:.4} exceeds bound {bound:.4} (slack {slack:.3})"
            )));
        }
    }
    Ok(())
}

/// Pointwise molecule decay check:
/// `|D^g mol(x)| <= 2^{|g| j} (1 + 2^j |x - c|)^{-M}`, exact at order zero
/// and with the finite-difference slack for higher orders.
pub fn verify_molecule_decay(
    mol: &GridFunction,
    family: &AtomFamily,
    cube: &DyadicCube,
    decay: f64,
) -> Result<()> {
    let grid = mol.grid();
    let h = grid.spacing();
    let jscale = (1u64 << cube.level) as f64;
    let center = cube.center();
    let mut buf = [0.0f64; 2];
    let fields = block_fd_fields(mol, family.smoothness)?;
    for (orders, field) in &fields {
        let total: usize = orders.iter().sum();
        let slack = if total == 0 { 1.0 + 1e-12 } else { 1.0 + 5.0 * h * jscale };
        let base = (2.0f64).powi((total as i32) * (cube.level as i32));
        for i in 0..grid.node_count() {
            let x = grid.coord_slice(i, &mut buf);
            let mut d2 = 0.0;
            for (xi, ci) in x.iter().zip(&center) {
                d2 += (xi - ci) * (xi - ci);
            }
            let bound = base * (1.0 + jscale * d2.sqrt()).powf(-decay) * slack;
            if field[i].abs() > bound {
                return Err(VexError::Validity(format!(
                    "decay bound violated at {x:?}: |D^{orders:?}| = {:.4e} > {bound:.4e}",
                    field[i].abs()
                )));
            }
        }
    }
    Ok(())
}

/// Finite-difference fields for every derivative multi-index up to the
/// smoothness order.
fn block_fd_fields(block: &GridFunction, smoothness: usize) -> Result<Vec<(Vec<usize>, Vec<f64>)>> {
    let grid = block.grid();
    let h = grid.spacing();
    let n = grid.points_per_axis();
    let real: Vec<f64> = block.values().iter().map(|v| v.re).collect();
    match grid.dim() {
        1 => Ok((0..=smoothness)
            .map(|k| (vec![k], finite_difference(&real, h, k)))
            .collect()),
        _ => {
            let mut out = Vec::new();
            for k1 in 0..=smoothness {
                for k2 in 0..=(smoothness - k1) {
                    // rows then columns
                    let mut field = real.clone();
                    for row in field.chunks_mut(n) {
                        let d = finite_difference(row, h, k2);
                        row.copy_from_slice(&d);
                    }
                    let mut col = vec![0.0f64; n];
                    for jcol in 0..n {
                        for irow in 0..n {
                            col[irow] = field[irow * n + jcol];
                        }
                        let d = finite_difference(&col, h, k1);
                        for irow in 0..n {
                            field[irow * n + jcol] = d[irow];
                        }
                    }
                    out.push((vec![k1, k2], field));
                }
            }
            Ok(out)
        }
    }
}

fn block_fd_maxima(block: &GridFunction, smoothness: usize) -> Result<Vec<(Vec<usize>, f64)>> {
    Ok(block_fd_fields(block, smoothness)?
        .into_iter()
        .map(|(orders, field)| {
            let m = field.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            (orders, m)
        })
        .collect())
}

/// One coefficient of the sparse array.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub level: u32,
    pub index: Vec<i64>,
    pub value: Complex64,
}

/// Sparse coefficients over dyadic cubes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientArray {
    pub entries: Vec<Coefficient>,
}

impl CoefficientArray {
    pub fn new(entries: Vec<Coefficient>) -> Self {
        CoefficientArray { entries }
    }

    pub fn max_level(&self) -> u32 {
        self.entries.iter().map(|e| e.level).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.value.norm() == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CoefficientArray {
            entries: self
                .entries
                .iter()
                .map(|e| Coefficient { level: e.level, index: e.index.clone(), value: e.value * c })
                .collect(),
        }
    }

    pub fn add(&self, other: &CoefficientArray) -> Self {
        let mut map: HashMap<(u32, Vec<i64>), Complex64> = HashMap::new();
        for e in self.entries.iter().chain(&other.entries) {
            *map.entry((e.level, e.index.clone())).or_insert(Complex64::new(0.0, 0.0)) += e.value;
        }
        let mut entries: Vec<Coefficient> = map
            .into_iter()
            .map(|((level, index), value)| Coefficient { level, index, value })
            .collect();
        entries.sort_by(|a, b| (a.level, &a.index).cmp(&(b.level, &b.index)));
        CoefficientArray { entries }
    }

    /// Random sparse coefficients: levels up to j_max, lattice indices within
    /// the box core, magnitudes log-uniform in [1e-2, 1].
    pub fn random(
        j_max: u32,
        grid: &Grid,
        per_level: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Self {
        use rand::Rng;
        let mut entries = Vec::new();
        for j in 0..=j_max {
            let span = ((1u64 << j) as f64 * grid.box_radius() / 2.0) as i64;
            for _ in 0..per_level {
                let index: Vec<i64> =
                    (0..grid.dim()).map(|_| rng.gen_range(-span..=span)).collect();
                let mag = (10.0f64).powf(rng.gen_range(-2.0..0.0));
                let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                entries.push(Coefficient {
                    level: j,
                    index,
                    value: Complex64::from_polar(mag, phase),
                });
            }
        }
        entries.sort_by(|a, b| (a.level, &a.index).cmp(&(b.level, &b.index)));
        entries.dedup_by(|a, b| a.level == b.level && a.index == b.index);
        CoefficientArray { entries }
    }
}

/// Per-level step functions `sum_m lambda_{jm} w_j(2^{-j} m) chi_{jm}`
/// assembled on the grid.
pub fn coefficient_step_functions(
    lambda: &CoefficientArray,
    w: &WeightSequence,
    grid: &Grid,
) -> Result<GridFunctionSequence> {
    let levels = lambda.max_level() as usize + 1;
    if w.levels() < levels {
        return Err(VexError::Domain(format!(
            "weight sequence has {} levels, coefficients reach {}",
            w.levels(),
            levels
        )));
    }
    let mut per_level = vec![vec![Complex64::new(0.0, 0.0); grid.node_count()]; levels];
    let mut buf = [0.0f64; 2];
    for e in &lambda.entries {
        let cube = DyadicCube::new(e.level, e.index.clone());
        if !cube.fits_in_box(1.0, grid.box_radius()) {
            return Err(VexError::Domain(format!(
                "cube at level {} index {:?} lies outside the box",
                e.level, e.index
            )));
        }
        let c = cube.center();
        let half = cube.side() / 2.0;
        let wj = w.eval(e.level as usize, &c);
        let add = e.value * wj;
        for i in 0..grid.node_count() {
            let x = grid.coord_slice(i, &mut buf);
            if x.iter().zip(&c).all(|(xi, ci)| (xi - ci).abs() <= half + 1e-12) {
                per_level[e.level as usize][i] += add;
            }
        }
    }
    let entries: Result<Vec<GridFunction>> = per_level
        .into_iter()
        .map(|v| GridFunction::new(grid.clone(), v))
        .collect();
    GridFunctionSequence::new(entries?)
}

/// The coefficient sequence-space quasinorm: mixed Morrey norm of the
/// per-level weighted cube indicators.
pub fn sequence_space_norm(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    lambda: &CoefficientArray,
    grid: &Grid,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<f64> {
    let steps = coefficient_step_functions(lambda, w, grid)?;
    norm_mixed_morrey(p, q, u, &steps, balls, cfg)
}

/// Finite synthesis `sum_{jm} lambda_{jm} block_{jm}`; blocks are molecules
/// when the family declares a decay, atoms otherwise.
pub fn synthesize(
    family: &AtomFamily,
    lambda: &CoefficientArray,
    grid: &Grid,
) -> Result<GridFunction> {
    let mut cache: HashMap<(u32, Vec<i64>), GridFunction> = HashMap::new();
    let mut acc = GridFunction::zeros(grid);
    for e in &lambda.entries {
        let key = (e.level, e.index.clone());
        if !cache.contains_key(&key) {
            let cube = DyadicCube::new(e.level, e.index.clone());
            let block = if family.decay.is_some() {
                build_molecule(family, &cube, grid)?
            } else {
                build_atom(family, &cube, grid)?
            };
            cache.insert(key.clone(), block);
        }
        acc = acc.add(&cache[&key].scale(e.value))?;
    }
    Ok(acc)
}

/// Threshold data of the synthesis bound, under the primary or the
/// alternative hypothesis set.
#[derive(Debug, Clone)]
pub struct SynthesisThresholds {
    pub l_bound: f64,
    pub m_bound_for: f64,
    pub used_alternative: bool,
    pub k_bound: f64,
}

pub fn synthesis_thresholds(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    l_chosen: usize,
    budget: usize,
) -> Result<SynthesisThresholds> {
    let n = p.dim() as f64;
    let sigma = sigma_t(p.cached_min(), p.dim());
    let c_log_q = q
        .declared_log_holder()
        .map(|(c, _)| c)
        .unwrap_or_else(|| crate::exponent::log_holder_constants(q, budget).0);
    let cinf = c_infinity_pu(p, u, budget)?;
    let primary_l = -w.alpha1() + (n / u.cached_min()).max(sigma + c_log_q + n * cinf);
    let primary_m =
        l_chosen as f64 + 2.0 * n + 2.0 * w.alpha() + sigma + c_log_q + n * cinf;
    // alternative set applies when sup(1 - p/u) < p^-
    let r = p.cached_min().min(1.0);
    let alt_applies = {
        let pts = crate::exponent::sample_points(p.dim(), p.box_radius(), budget.max(2));
        let mut sup = f64::NEG_INFINITY;
        for c in &pts {
            let pv = p.eval_unchecked(&c[..p.dim()]);
            let uv = u.eval_unchecked(&c[..p.dim()]);
            let ratio = if uv.is_infinite() { 0.0 } else { pv / uv };
            sup = sup.max(1.0 - ratio);
        }
        sup < p.cached_min()
    };
    if alt_applies {
        let cinf_r = c_infinity_pu_r(p, u, r, budget)?;
        let alt_l = -w.alpha1() + sigma + c_log_q + n * cinf_r;
        if alt_l < primary_l {
            let c_log_p = p
                .declared_log_holder()
                .map(|(c, _)| c)
                .unwrap_or_else(|| crate::exponent::log_holder_constants(p, budget).0);
            let alt_m = l_chosen as f64
                + 2.0 * n
                + 2.0 * w.alpha()
                + (1.0f64).max(2.0 * c_log_p) * sigma
                + c_log_q
                + n * cinf_r;
            return Ok(SynthesisThresholds {
                l_bound: alt_l,
                m_bound_for: alt_m,
                used_alternative: true,
                k_bound: w.alpha2(),
            });
        }
    }
    Ok(SynthesisThresholds {
        l_bound: primary_l,
        m_bound_for: primary_m,
        used_alternative: false,
        k_bound: w.alpha2(),
    })
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub per_trial: Vec<f64>,
    pub max_ratio: f64,
    pub thresholds: SynthesisThresholds,
    pub hypothesis_met: bool,
}

/// Ratios `||synthesize(lambda)||_besov / ||lambda||_sequence` over random
/// sparse coefficient arrays. Zero arrays are skipped (ratio 0 by convention).
#[allow(clippy::too_many_arguments)]
pub fn synthesis_bound_report(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    family: &AtomFamily,
    sys: &AdmissibleSystem,
    j_max: u32,
    per_level: usize,
    trials: usize,
    grid: &Grid,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
    seed: u64,
) -> Result<SynthesisReport> {
    let thresholds = synthesis_thresholds(p, q, u, w, family.moments, 128)?;
    let hypothesis_met = family.smoothness as f64 > thresholds.k_bound
        && family.moments as f64 > thresholds.l_bound
        && family.decay.map_or(false, |m| m > thresholds.m_bound_for);
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let mut rng = trial_rng(seed, t as u64);
            let lambda = CoefficientArray::random(j_max, grid, per_level, &mut rng);
            if lambda.is_zero() {
                return Ok(0.0);
            }
            let denom = sequence_space_norm(p, q, u, w, &lambda, grid, balls, cfg)?;
            if denom == 0.0 {
                return Ok(0.0);
            }
            let f = synthesize(family, &lambda, grid)?;
            let numer = besov_morrey_norm(p, q, u, w, sys, &f, balls, cfg)?;
            Ok(numer / denom)
        })
        .collect::<Result<_>>()?;
    let max_ratio = ratios.iter().cloned().fold(0.0f64, f64::max);
    Ok(SynthesisReport { per_trial: ratios, max_ratio, thresholds, hypothesis_met })
}

/// Asserts the sequence-space embedding with constant one: the norm with
/// q = infinity never exceeds the norm with the given q.
pub fn sequence_embedding_check(
    p: &VariableExponent,
    q: &VariableExponent,
    u: &VariableExponent,
    w: &WeightSequence,
    corpus: &[CoefficientArray],
    grid: &Grid,
    balls: &BallSearchSet,
    cfg: &BisectionConfig,
) -> Result<Vec<(f64, f64)>> {
    let q_inf = VariableExponent::constant(f64::INFINITY, p.dim(), p.box_radius());
    corpus
        .iter()
        .map(|lambda| {
            let with_inf = sequence_space_norm(p, &q_inf, u, w, lambda, grid, balls, cfg)?;
            let with_q = sequence_space_norm(p, q, u, w, lambda, grid, balls, cfg)?;
            Ok((with_inf, with_q))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::BallSearchOptions;
    use crate::morrey::morrey_norm_direct;

    fn atom_grid() -> Grid {
        Grid::new(1, 4.0, 1024).unwrap()
    }

    #[test]
    fn bump_derivatives_match_numeric_differentiation() {
        // derivative oracle: central differences of the closed form
        let eps = 1e-6;
        for &t in &[-0.7, -0.2, 0.0, 0.3, 0.8] {
            let f = |s: f64| bump_derivatives(s, 0)[0];
            let d1 = (f(t + eps) - f(t - eps)) / (2.0 * eps);
            let got = bump_derivatives(t, 1)[1];
            assert!((d1 - got).abs() < 1e-6 * (1.0 + got.abs()), "t = {t}: {d1} vs {got}");
            let d2 = (f(t + eps) - 2.0 * f(t) + f(t - eps)) / (eps * eps);
            let got2 = bump_derivatives(t, 2)[2];
            assert!((d2 - got2).abs() < 1e-3 * (1.0 + got2.abs()), "t = {t}: {d2} vs {got2}");
        }
        // compact support
        assert_eq!(bump_derivatives(1.0, 3), vec![0.0; 4]);
        assert_eq!(bump_derivatives(-1.2, 2), vec![0.0; 3]);
    }

    #[test]
    fn plain_bump_atom_level_zero() {
        let grid = atom_grid();
        let fam = AtomFamily::atoms(2, 0, 3.0).unwrap();
        let cube = DyadicCube::new(0, vec![0]);
        let atom = build_atom(&fam, &cube, &grid).unwrap();
        verify_support(&atom, &fam, &cube).unwrap();
        verify_derivative_bounds(&atom, &fam, &cube).unwrap();
        // a level-zero bump carries mass
        assert!(atom.integrate().norm() > 1e-3);
    }

    #[test]
    fn moments_vanish_for_derivative_profiles() {
        let grid = atom_grid();
        let fam = AtomFamily::atoms(2, 3, 3.0).unwrap();
        let cube = DyadicCube::new(1, vec![1]);
        let atom = build_atom(&fam, &cube, &grid).unwrap();
        verify_support(&atom, &fam, &cube).unwrap();
        verify_moments(&atom, &cube, 3, 1e-8).unwrap();
        verify_derivative_bounds(&atom, &fam, &cube).unwrap();
    }

    #[test]
    fn atom_resolution_error() {
        let grid = Grid::new(1, 4.0, 64).unwrap(); // h = 1/8
        let fam = AtomFamily::atoms(1, 1, 3.0).unwrap();
        // level 2 cubes have side 1/4 = 2h < 8h
        assert!(matches!(
            build_atom(&fam, &DyadicCube::new(2, vec![0]), &grid),
            Err(VexError::Resolution(_))
        ));
    }

    #[test]
    fn atom_outside_box_is_domain_error() {
        let grid = atom_grid();
        let fam = AtomFamily::atoms(1, 1, 3.0).unwrap();
        assert!(matches!(
            build_atom(&fam, &DyadicCube::new(0, vec![4]), &grid),
            Err(VexError::Domain(_))
        ));
    }

    #[test]
    fn molecule_scaling_and_decay() {
        let grid = atom_grid();
        let fam = AtomFamily::molecules(2, 2, 3.0, 10.0).unwrap();
        let cube = DyadicCube::new(1, vec![0]);
        let atom = build_atom(&fam, &cube, &grid).unwrap();
        let mol = build_molecule(&fam, &cube, &grid).unwrap();
        let factor = (1.0 + 3.0 * 1.0f64.sqrt() / 2.0).powf(-10.0);
        for (a, m) in atom.values().iter().zip(mol.values()) {
            assert!((a * factor - m).norm() < 1e-12);
        }
        // moments survive scalar multiplication
        verify_moments(&mol, &cube, 2, 1e-8).unwrap();
    }

    #[test]
    fn synthesize_is_linear_and_single_block() {
        let grid = atom_grid();
        let fam = AtomFamily::atoms(2, 2, 3.0).unwrap();
        let l1 = CoefficientArray::new(vec![Coefficient {
            level: 1,
            index: vec![0],
            value: Complex64::new(1.0, 0.0),
        }]);
        let l2 = CoefficientArray::new(vec![
            Coefficient { level: 1, index: vec![0], value: Complex64::new(0.5, 0.2) },
            Coefficient { level: 2, index: vec![3], value: Complex64::new(0.0, 1.0) },
        ]);
        let f1 = synthesize(&fam, &l1, &grid).unwrap();
        let block = build_atom(&fam, &DyadicCube::new(1, vec![0]), &grid).unwrap();
        assert_eq!(f1, block);
        let f2 = synthesize(&fam, &l2, &grid).unwrap();
        let sum = synthesize(&fam, &l1.add(&l2), &grid).unwrap();
        let direct = f1.add(&f2).unwrap();
        for (a, b) in sum.values().iter().zip(direct.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn disjoint_atoms_have_max_sup() {
        let grid = atom_grid();
        let fam = AtomFamily::atoms(1, 1, 1.5).unwrap();
        let a = CoefficientArray::new(vec![Coefficient {
            level: 2,
            index: vec![-8],
            value: Complex64::new(1.0, 0.0),
        }]);
        let b = CoefficientArray::new(vec![Coefficient {
            level: 2,
            index: vec![8],
            value: Complex64::new(0.0, 0.5),
        }]);
        let fa = synthesize(&fam, &a, &grid).unwrap();
        let fb = synthesize(&fam, &b, &grid).unwrap();
        let both = synthesize(&fam, &a.add(&b), &grid).unwrap();
        assert!((both.sup_abs() - fa.sup_abs().max(fb.sup_abs())).abs() < 1e-12);
    }

    #[test]
    fn sequence_norm_single_entry_matches_morrey_of_cube() {
        let grid = atom_grid();
        let p = VariableExponent::constant(1.5, 1, 4.0);
        let u = VariableExponent::constant(2.5, 1, 4.0);
        let q = VariableExponent::log_smooth(1.2, 0.9, 1, 4.0).unwrap();
        let w = WeightSequence::constant_smoothness(0.7, 4, 1, 4.0);
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let (j0, m0) = (2u32, vec![3i64]);
        let lam = 0.8;
        let lambda = CoefficientArray::new(vec![Coefficient {
            level: j0,
            index: m0.clone(),
            value: Complex64::new(lam, 0.0),
        }]);
        let got = sequence_space_norm(&p, &q, &u, &w, &lambda, &grid, &balls, &cfg).unwrap();
        let cube = DyadicCube::new(j0, m0);
        let c = cube.center();
        let half = cube.side() / 2.0;
        let chi = GridFunction::from_real_fn(&grid, |x| {
            if (x[0] - c[0]).abs() <= half + 1e-12 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let expect = lam * w.eval(j0 as usize, &c) * morrey_norm_direct(&p, &u, &chi, &balls, &cfg).unwrap();
        assert!((got - expect).abs() <= 1e-8 * expect, "{got} vs {expect}");
    }

    #[test]
    fn sequence_norm_zero_is_zero() {
        let grid = atom_grid();
        let p = VariableExponent::constant(2.0, 1, 4.0);
        let w = WeightSequence::constant_smoothness(0.0, 3, 1, 4.0);
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let lambda = CoefficientArray::default();
        let got = sequence_space_norm(&p, &p, &p, &w, &lambda, &grid, &balls, &cfg).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn cube_outside_box_is_domain_error() {
        let grid = atom_grid();
        let p = VariableExponent::constant(2.0, 1, 4.0);
        let w = WeightSequence::constant_smoothness(0.0, 3, 1, 4.0);
        let cfg = BisectionConfig::default();
        let balls = BallSearchSet::build(&grid, &BallSearchOptions::coarse()).unwrap();
        let lambda = CoefficientArray::new(vec![Coefficient {
            level: 0,
            index: vec![9],
            value: Complex64::new(1.0, 0.0),
        }]);
        assert!(matches!(
            sequence_space_norm(&p, &p, &p, &w, &lambda, &grid, &balls, &cfg),
            Err(VexError::Domain(_))
        ));
    }
}
