//! Variable exponents, admissible weight sequences, and the regularity
//! constants that gate the hypotheses of every inequality in the suite.

use crate::error::{Result, VexError};
use crate::grid::Grid;

/// Exponent values above this cap are normalized to infinity before any
/// modular evaluation.
pub const P_CAP: f64 = 1e6;

/// A scalar function of position. Shared by exponents (positive values) and
/// weight smoothness functions (arbitrary real values).
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Constant(f64),
    /// `a + b*(1 + cos(pi*x1/R))/2` — bounded, smooth, log-Hölder.
    LogSmooth { a: f64, b: f64, radius: f64 },
    /// `a + b/log(e + |x|)` — decays toward `a` at infinity.
    Canonical { a: f64, b: f64 },
    /// Nearest-node lookup in a table of per-node values.
    Table { grid: Grid, values: Vec<f64> },
    /// Pointwise conjugate `1/v(x) + 1/v'(x) = 1` of an inner field.
    Conjugate(Box<ScalarField>),
    /// Inner field divided by a positive constant.
    Scaled { base: Box<ScalarField>, divisor: f64 },
    /// `1/(c0 + c1/log(e + 1/|x|))` away from 0, `1/c0` at 0. A synthetic
    /// family whose reciprocal attains the local log-Hölder bound exactly.
    LocalLogBump { c0: f64, c1: f64 },
}

fn conjugate_value(v: f64) -> f64 {
    if v.is_infinite() {
        1.0
    } else if v <= 1.0 {
        f64::INFINITY
    } else {
        v / (v - 1.0)
    }
}

impl ScalarField {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ScalarField::Constant(v) => *v,
            ScalarField::LogSmooth { a, b, radius } => {
                a + b * (1.0 + (std::f64::consts::PI * x[0] / radius).cos()) / 2.0
            }
            ScalarField::Canonical { a, b } => {
                let r = norm2(x);
                a + b / (std::f64::consts::E + r).ln()
            }
            ScalarField::Table { grid, values } => {
                let idx = grid.nearest_node(x).unwrap_or(0);
                values[idx]
            }
            ScalarField::Conjugate(inner) => conjugate_value(inner.eval(x)),
            ScalarField::Scaled { base, divisor } => {
                let v = base.eval(x);
                if v.is_infinite() {
                    v
                } else {
                    v / divisor
                }
            }
            ScalarField::LocalLogBump { c0, c1 } => {
                let r = norm2(x);
                let inv = if r == 0.0 {
                    *c0
                } else {
                    c0 + c1 / (std::f64::consts::E + 1.0 / r).ln()
                };
                1.0 / inv
            }
        }
    }

    /// Analytic lower/upper bounds over the whole space (not just the box).
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            ScalarField::Constant(v) => (*v, *v),
            ScalarField::LogSmooth { a, b, .. } => {
                if *b >= 0.0 {
                    (*a, a + b)
                } else {
                    (a + b, *a)
                }
            }
            ScalarField::Canonical { a, b } => {
                if *b >= 0.0 {
                    (*a, a + b)
                } else {
                    (a + b, *a)
                }
            }
            ScalarField::Table { values, .. } => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &v in values {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                (lo, hi)
            }
            ScalarField::Conjugate(inner) => {
                let (lo, hi) = inner.bounds();
                let (a, b) = (conjugate_value(hi), conjugate_value(lo));
                (a.min(b), a.max(b))
            }
            ScalarField::Scaled { base, divisor } => {
                let (lo, hi) = base.bounds();
                (lo / divisor, if hi.is_infinite() { hi } else { hi / divisor })
            }
            ScalarField::LocalLogBump { c0, c1 } => {
                // 1/field ranges over [c0, c0+c1] for c1 >= 0
                if *c1 >= 0.0 {
                    (1.0 / (c0 + c1), 1.0 / c0)
                } else {
                    (1.0 / c0, 1.0 / (c0 + c1))
                }
            }
        }
    }

    /// Limit at infinity when the family has one.
    pub fn limit_at_infinity(&self) -> Option<f64> {
        match self {
            ScalarField::Constant(v) => Some(*v),
            // value on the largest-radius shell of the box (x1 = +-R)
            ScalarField::LogSmooth { a, .. } => Some(*a),
            ScalarField::Canonical { a, .. } => Some(*a),
            ScalarField::Table { grid, values } => {
                // mean over the largest-radius grid shell
                let mut rmax = 0.0f64;
                for i in 0..grid.node_count() {
                    let c = grid.coord(i);
                    rmax = rmax.max(norm2(&c[..grid.dim()]));
                }
                let mut sum = 0.0;
                let mut count = 0usize;
                for i in 0..grid.node_count() {
                    let c = grid.coord(i);
                    if norm2(&c[..grid.dim()]) >= rmax - grid.spacing() / 2.0 {
                        sum += values[i];
                        count += 1;
                    }
                }
                Some(sum / count as f64)
            }
            ScalarField::Conjugate(inner) => inner.limit_at_infinity().map(conjugate_value),
            ScalarField::Scaled { base, divisor } => base
                .limit_at_infinity()
                .map(|v| if v.is_infinite() { v } else { v / divisor }),
            ScalarField::LocalLogBump { c0, .. } => Some(1.0 / c0),
        }
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// A variable exponent `x -> p(x) in (0, +inf]` with cached extremal values
/// and family-declared regularity constants.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableExponent {
    field: ScalarField,
    cached_min: f64,
    cached_max: f64,
    limit_at_infinity: Option<f64>,
    dim: usize,
    box_radius: f64,
    /// Declared (c_local, c_infinity) log-Hölder constants of 1/p, fixed at
    /// construction. Analytic zeros for constants, dense-sample estimates
    /// with a safety margin for the other shipped families.
    declared_log_holder: Option<(f64, f64)>,
}

fn cap(v: f64) -> f64 {
    if v > P_CAP {
        f64::INFINITY
    } else {
        v
    }
}

impl VariableExponent {
    pub fn from_field(field: ScalarField, dim: usize, box_radius: f64) -> Result<Self> {
        let (lo, hi) = field.bounds();
        if !(lo > 0.0) {
            return Err(VexError::Domain(format!(
                "exponents must be bounded away from zero, family minimum is {lo}"
            )));
        }
        let limit = field.limit_at_infinity().map(cap);
        let mut e = VariableExponent {
            field,
            cached_min: cap(lo),
            cached_max: cap(hi),
            limit_at_infinity: limit,
            dim,
            box_radius,
            declared_log_holder: None,
        };
        e.declared_log_holder = Some(e.estimate_log_holder(256, 1.1));
        Ok(e)
    }

    pub fn constant(v: f64, dim: usize, box_radius: f64) -> Self {
        let mut e = Self::from_field(ScalarField::Constant(v), dim, box_radius)
            .expect("constant exponent must be positive");
        e.declared_log_holder = Some((0.0, 0.0));
        e
    }

    pub fn log_smooth(a: f64, b: f64, dim: usize, box_radius: f64) -> Result<Self> {
        Self::from_field(ScalarField::LogSmooth { a, b, radius: box_radius }, dim, box_radius)
    }

    pub fn canonical(a: f64, b: f64, dim: usize, box_radius: f64) -> Result<Self> {
        Self::from_field(ScalarField::Canonical { a, b }, dim, box_radius)
    }

    pub fn table(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(VexError::Domain("table length must equal node count".into()));
        }
        Self::from_field(
            ScalarField::Table { grid: grid.clone(), values },
            grid.dim(),
            grid.box_radius(),
        )
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_radius(&self) -> f64 {
        self.box_radius
    }

    pub fn cached_min(&self) -> f64 {
        self.cached_min
    }

    pub fn cached_max(&self) -> f64 {
        self.cached_max
    }

    pub fn limit_at_infinity(&self) -> Option<f64> {
        self.limit_at_infinity
    }

    pub fn declared_log_holder(&self) -> Option<(f64, f64)> {
        self.declared_log_holder
    }

    /// Value with the infinity cap applied; no domain check.
    #[inline]
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        cap(self.field.eval(x))
    }

    /// Value of the exponent at a point inside the box.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim || x.iter().any(|&c| c.abs() > self.box_radius) {
            return Err(VexError::Domain(format!("point {x:?} outside configured box")));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Per-node samples on a grid, cap applied.
    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        let mut out = Vec::with_capacity(grid.node_count());
        let mut buf = [0.0f64; 2];
        for i in 0..grid.node_count() {
            out.push(self.eval_unchecked(grid.coord_slice(i, &mut buf)));
        }
        out
    }

    /// `p(.)/t`, used by the t-power identities.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(VexError::Domain(format!("scaling divisor must be positive, got {t}")));
        }
        let mut e = Self::from_field(
            ScalarField::Scaled { base: Box::new(self.field.clone()), divisor: t },
            self.dim,
            self.box_radius,
        )?;
        // log-Hölder constants of t/p scale linearly in 1/p
        e.declared_log_holder = self.declared_log_holder.map(|(a, b)| (a * t, b * t));
        Ok(e)
    }

    fn estimate_log_holder(&self, budget: usize, margin: f64) -> (f64, f64) {
        let (local, inf) = log_holder_constants(self, budget);
        (local * margin, inf.unwrap_or(0.0) * margin)
    }
}

/// Pointwise conjugate exponent, `1 -> inf` and `inf -> 1`.
pub fn conjugate_exponent(p: &VariableExponent) -> Result<VariableExponent> {
    if p.cached_min() < 1.0 {
        return Err(VexError::Domain(format!(
            "conjugate requires p(x) >= 1 everywhere, family minimum is {}",
            p.cached_min()
        )));
    }
    VariableExponent::from_field(
        ScalarField::Conjugate(Box::new(p.field.clone())),
        p.dim,
        p.box_radius,
    )
}

/// `sigma_t = n*(1/min{1,t} - 1)`.
pub fn sigma_t(t: f64, n: usize) -> f64 {
    assert!(t > 0.0, "sigma_t requires t > 0");
    n as f64 * (1.0 / t.min(1.0) - 1.0)
}

/// Deterministic, nested sample points in the box: a van der Corput ladder
/// per axis, so enlarging the budget only appends points.
pub fn sample_points(dim: usize, box_radius: f64, budget: usize) -> Vec<[f64; 2]> {
    fn vdc(mut k: usize, base: usize) -> f64 {
        let mut q = 0.0;
        let mut denom = 1.0;
        while k > 0 {
            denom *= base as f64;
            q += (k % base) as f64 / denom;
            k /= base;
        }
        q
    }
    (0..budget)
        .map(|k| {
            let x = box_radius * (2.0 * vdc(k, 2) - 1.0);
            let y = if dim == 2 { box_radius * (2.0 * vdc(k, 3) - 1.0) } else { 0.0 };
            [x, y]
        })
        .collect()
}

/// Sampled lower estimates of the log-Hölder constants of `1/p`.
///
/// The second component is `None` when the family has no declared limit at
/// infinity.
pub fn log_holder_constants(p: &VariableExponent, budget: usize) -> (f64, Option<f64>) {
    assert!(budget >= 2, "log-Hölder sampling needs at least two points");
    let pts = sample_points(p.dim, p.box_radius, budget);
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
    let vals: Vec<f64> = pts
        .iter()
        .map(|c| inv(p.eval_unchecked(&c[..p.dim])))
        .collect();
    let mut c_local = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = dist(&pts[i], &pts[j], p.dim);
            if d == 0.0 {
                continue;
            }
            let c = (vals[i] - vals[j]).abs() * (std::f64::consts::E + 1.0 / d).ln();
            c_local = c_local.max(c);
        }
    }
    let c_inf = p.limit_at_infinity.map(|pinf| {
        let pinf_inv = inv(pinf);
        let mut c = 0.0f64;
        for (pt, v) in pts.iter().zip(&vals) {
            let r = norm2(&pt[..p.dim]);
            c = c.max((v - pinf_inv).abs() * (std::f64::consts::E + r).ln());
        }
        c
    });
    (c_local, c_inf)
}

fn dist(a: &[f64; 2], b: &[f64; 2], dim: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..dim {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    s.sqrt()
}

/// `c_inf(1/p, 1/u) = max{0, sup_x(1/p(x) - 1/u(x)) - 1/p_inf}`, with the
/// supremum replaced by a sampled maximum over the box.
pub fn c_infinity_pu(p: &VariableExponent, u: &VariableExponent, budget: usize) -> Result<f64> {
    c_infinity_pu_r(p, u, 1.0, budget)
}

/// Three-argument variant `c_inf(1/p, 1/u, r) = max{0, sup(1/p - 1/u) - r/p_inf}`.
pub fn c_infinity_pu_r(
    p: &VariableExponent,
    u: &VariableExponent,
    r: f64,
    budget: usize,
) -> Result<f64> {
    let pts = sample_points(p.dim, p.box_radius, budget.max(2));
    let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
    let mut sup = f64::NEG_INFINITY;
    for c in &pts {
        let pv = p.eval_unchecked(&c[..p.dim]);
        let uv = u.eval_unchecked(&c[..p.dim]);
        if pv > uv * (1.0 + 1e-12) {
            return Err(VexError::Ordering(format!(
                "p({:?}) = {pv} exceeds u = {uv}",
                &c[..p.dim]
            )));
        }
        sup = sup.max(inv(pv) - inv(uv));
    }
    let pinf = p
        .limit_at_infinity
        .ok_or_else(|| VexError::Domain("p has no declared limit at infinity".into()))?;
    Ok((sup - r * inv(pinf)).max(0.0))
}

/// An admissible weight sequence `w_j(x) = 2^{j s(x)}` with declared class
/// parameters.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    levels: usize,
    smoothness: ScalarField,
    alpha: f64,
    alpha1: f64,
    alpha2: f64,
    c_alpha: f64,
    dim: usize,
    box_radius: f64,
}

impl WeightSequence {
    /// Standard family `w_j(x) = 2^{j s(x)}`; declared constants are derived
    /// from the smoothness field (extremes analytically, alpha by a dense
    /// deterministic sweep with a 10% margin).
    pub fn power(smoothness: ScalarField, levels: usize, dim: usize, box_radius: f64) -> Result<Self> {
        if levels < 2 {
            return Err(VexError::Domain("weight sequences need at least two levels".into()));
        }
        let (s_min, s_max) = smoothness.bounds();
        if !s_min.is_finite() || !s_max.is_finite() {
            return Err(VexError::Domain("weight smoothness must be bounded".into()));
        }
        let mut w = WeightSequence {
            levels,
            smoothness,
            alpha: 0.0,
            alpha1: s_min,
            alpha2: s_max,
            c_alpha: 1.1,
            dim,
            box_radius,
        };
        // declared alpha: empirical requirement with c = 1, then 10% margin
        let pts = sample_points(dim, box_radius, 192);
        let mut alpha_req = 0.0f64;
        for j in 0..levels {
            let scale = (1u64 << j) as f64;
            for (i, a) in pts.iter().enumerate() {
                for b in pts.iter().skip(i + 1) {
                    let d = dist(a, b, dim);
                    if d == 0.0 {
                        continue;
                    }
                    let num = std::f64::consts::LN_2
                        * (j as f64)
                        * (w.smoothness.eval(&a[..dim]) - w.smoothness.eval(&b[..dim])).abs();
                    let den = (1.0 + scale * d).ln();
                    if den > 0.0 {
                        alpha_req = alpha_req.max(num / den);
                    }
                }
            }
        }
        w.alpha = alpha_req * 1.1 + 1e-9;
        Ok(w)
    }

    pub fn constant_smoothness(s: f64, levels: usize, dim: usize, box_radius: f64) -> Self {
        Self::power(ScalarField::Constant(s), levels, dim, box_radius)
            .expect("constant smoothness weights are always admissible")
    }

    /// Same evaluator but with caller-declared class constants (used to force
    /// violations in tests).
    pub fn with_declared(
        smoothness: ScalarField,
        levels: usize,
        dim: usize,
        box_radius: f64,
        alpha: f64,
        alpha1: f64,
        alpha2: f64,
        c_alpha: f64,
    ) -> Result<Self> {
        if levels < 2 {
            return Err(VexError::Domain("weight sequences need at least two levels".into()));
        }
        if alpha1 > alpha2 {
            return Err(VexError::Domain("alpha1 must not exceed alpha2".into()));
        }
        Ok(WeightSequence { levels, smoothness, alpha, alpha1, alpha2, c_alpha, dim, box_radius })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn smoothness(&self) -> &ScalarField {
        &self.smoothness
    }

    #[inline]
    pub fn eval(&self, j: usize, x: &[f64]) -> f64 {
        (2.0f64).powf(j as f64 * self.smoothness.eval(x))
    }

    pub fn sample(&self, j: usize, grid: &Grid) -> Vec<f64> {
        let mut out = Vec::with_capacity(grid.node_count());
        let mut buf = [0.0f64; 2];
        for i in 0..grid.node_count() {
            out.push(self.eval(j, grid.coord_slice(i, &mut buf)));
        }
        out
    }
}

/// Empirical verification report for the two admissible-weight conditions.
#[derive(Debug, Clone)]
pub struct WeightCheckReport {
    /// Tightest observed `w_{j+1}/w_j` from below; must be >= 2^alpha1.
    pub worst_ratio_low: f64,
    /// Largest observed `w_{j+1}/w_j`; must be <= 2^alpha2.
    pub worst_ratio_high: f64,
    /// Smallest constant c making `w_j(x) <= c w_j(y) (1+2^j|x-y|)^alpha`
    /// hold on the sample; must be <= the declared c.
    pub worst_alpha_constant: f64,
    pub pass_ratio: bool,
    pub pass_alpha: bool,
}

impl WeightCheckReport {
    pub fn pass(&self) -> bool {
        self.pass_ratio && self.pass_alpha
    }
}

pub fn check_admissible_weights(w: &WeightSequence, budget: usize) -> Result<WeightCheckReport> {
    let pts = sample_points(w.dim, w.box_radius, budget.max(2));
    let mut ratio_low = f64::INFINITY;
    let mut ratio_high = f64::NEG_INFINITY;
    let mut c_req = 0.0f64;
    for j in 0..w.levels {
        let scale = (1u64 << j) as f64;
        for a in &pts {
            let wa = w.eval(j, &a[..w.dim]);
            if !(wa > 0.0) || !wa.is_finite() {
                return Err(VexError::Validity(format!("non-positive weight value {wa} at level {j}")));
            }
            if j + 1 < w.levels {
                let ratio = w.eval(j + 1, &a[..w.dim]) / wa;
                ratio_low = ratio_low.min(ratio);
                ratio_high = ratio_high.max(ratio);
            }
            for b in &pts {
                let wb = w.eval(j, &b[..w.dim]);
                let d = dist(a, b, w.dim);
                c_req = c_req.max(wa / (wb * (1.0 + scale * d).powf(w.alpha)));
            }
        }
    }
    let tol = 1e-12;
    Ok(WeightCheckReport {
        worst_ratio_low: ratio_low,
        worst_ratio_high: ratio_high,
        worst_alpha_constant: c_req,
        pass_ratio: ratio_low >= (2.0f64).powf(w.alpha1) * (1.0 - tol)
            && ratio_high <= (2.0f64).powf(w.alpha2) * (1.0 + tol),
        pass_alpha: c_req <= w.c_alpha * (1.0 + tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_exponent_evaluates() {
        let p = VariableExponent::constant(2.0, 1, 8.0);
        assert_eq!(p.eval(&[0.3]).unwrap(), 2.0);
        assert!(p.eval(&[9.0]).is_err());
    }

    #[test]
    fn canonical_family_at_origin() {
        // p(x) = 2 + 1/log(e + |x|) evaluates to 3 at the origin
        let p = VariableExponent::canonical(2.0, 1.0, 1, 8.0).unwrap();
        assert!((p.eval(&[0.0]).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn table_uses_nearest_node() {
        let grid = Grid::new(1, 1.0, 8).unwrap();
        // nodes at -1, -0.75, ..., 0.75
        let values: Vec<f64> = (0..8).map(|i| 1.0 + i as f64).collect();
        let p = VariableExponent::table(&grid, values).unwrap();
        // oracle: nearest node of 0.1 is 0.0 (index 4), so value 5
        assert_eq!(p.eval(&[0.1]).unwrap(), 5.0);
        // halfway rounds deterministically; just check bounds hold
        let v = p.eval(&[0.6]).unwrap();
        assert!(v >= p.cached_min() && v <= p.cached_max());
    }

    #[test]
    fn cap_normalizes_to_infinity() {
        let grid = Grid::new(1, 1.0, 8).unwrap();
        let mut values = vec![2.0; 8];
        values[3] = 1e7;
        let p = VariableExponent::table(&grid, values).unwrap();
        assert!(p.eval(&[grid.axis_coord(3)]).unwrap().is_infinite());
        assert!(p.cached_max().is_infinite());
    }

    #[test]
    fn eval_stays_in_cached_bounds() {
        let p = VariableExponent::log_smooth(1.5, 1.0, 1, 8.0).unwrap();
        for i in 0..200 {
            let x = -8.0 + 16.0 * i as f64 / 199.0;
            let v = p.eval(&[x]).unwrap();
            assert!(v >= p.cached_min() - 1e-12 && v <= p.cached_max() + 1e-12);
        }
    }

    #[test]
    fn log_holder_constant_exponent_is_zero() {
        let p = VariableExponent::constant(3.0, 1, 8.0);
        let (cl, ci) = log_holder_constants(&p, 64);
        assert_eq!(cl, 0.0);
        assert_eq!(ci, Some(0.0));
    }

    #[test]
    fn log_holder_local_bump_attains_quarter() {
        // 1/p(x) = 1/2 + 1/(4 log(e + 1/|x|)): pairs straddling 0 give exactly 1/4
        let p = VariableExponent::from_field(
            ScalarField::LocalLogBump { c0: 0.5, c1: 0.25 },
            1,
            8.0,
        )
        .unwrap();
        let (cl, _) = log_holder_constants(&p, 64);
        assert!(cl >= 0.25 - 1e-12, "c_local = {cl}");
    }

    #[test]
    fn log_holder_monotone_in_budget() {
        let p = VariableExponent::canonical(1.5, 1.0, 1, 8.0).unwrap();
        let (a, ai) = log_holder_constants(&p, 32);
        let (b, bi) = log_holder_constants(&p, 64);
        assert!(b >= a);
        assert!(bi.unwrap() >= ai.unwrap());
    }

    #[test]
    fn sigma_t_formula() {
        assert_eq!(sigma_t(1.0, 5), 0.0);
        assert_eq!(sigma_t(0.5, 2), 2.0);
        assert_eq!(sigma_t(2.0, 3), 0.0);
    }

    #[test]
    fn c_infinity_pu_examples() {
        let p = VariableExponent::constant(2.0, 1, 8.0);
        // u = p -> 0
        assert_eq!(c_infinity_pu(&p, &p, 64).unwrap(), 0.0);
        // constant p=2, u=4: max{0, 1/4 - 1/2} = 0
        let u = VariableExponent::constant(4.0, 1, 8.0);
        assert_eq!(c_infinity_pu(&p, &u, 64).unwrap(), 0.0);
        // ordering violation detected
        let small = VariableExponent::constant(1.0, 1, 8.0);
        assert!(matches!(c_infinity_pu(&p, &small, 16), Err(VexError::Ordering(_))));
    }

    #[test]
    fn c_infinity_pu_positive_case() {
        // sup(1/p - 1/u) = 0.9, 1/p_inf = 0.5 -> 0.4
        let p = VariableExponent::constant(1.0 / 0.9, 1, 8.0);
        // force a different declared limit through a table: easier to build
        // the example with p constant 10/9 (1/p = 0.9), u = inf, p_inf via
        // canonical-style family is awkward; use the direct sampled-max oracle
        // against a handcrafted pair instead.
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let mut values = vec![10.0 / 9.0; 64];
        // make the limit shell value 2 so 1/p_inf = 0.5
        values[0] = 2.0;
        values[63] = 2.0;
        let p_tab = VariableExponent::table(&grid, values).unwrap();
        let u = VariableExponent::constant(1e9, 1, 8.0); // capped to infinity
        let c = c_infinity_pu(&p_tab, &u, 512).unwrap();
        assert!((c - 0.4).abs() < 1e-9, "c = {c}");
        drop(p);
    }

    #[test]
    fn conjugate_examples() {
        let p2 = VariableExponent::constant(2.0, 1, 8.0);
        let c2 = conjugate_exponent(&p2).unwrap();
        assert_eq!(c2.eval(&[0.1]).unwrap(), 2.0);

        let p1 = VariableExponent::constant(1.0, 1, 8.0);
        let c1 = conjugate_exponent(&p1).unwrap();
        assert!(c1.eval(&[0.1]).unwrap().is_infinite());

        let grid = Grid::new(1, 2.0, 8).unwrap();
        let values: Vec<f64> = (0..8).map(|i| if grid.axis_coord(i) < 0.0 { 3.0 } else { 1.5 }).collect();
        let p = VariableExponent::table(&grid, values).unwrap();
        let c = conjugate_exponent(&p).unwrap();
        assert!((c.eval(&[-1.0]).unwrap() - 1.5).abs() < 1e-12);
        assert!((c.eval(&[1.0]).unwrap() - 3.0).abs() < 1e-12);

        let sub = VariableExponent::constant(0.9, 1, 8.0);
        assert!(conjugate_exponent(&sub).is_err());
    }

    #[test]
    fn conjugate_is_involution_on_nodes() {
        let grid = Grid::new(1, 8.0, 64).unwrap();
        let p = VariableExponent::log_smooth(1.5, 1.0, 1, 8.0).unwrap();
        let back = conjugate_exponent(&conjugate_exponent(&p).unwrap()).unwrap();
        let a = p.sample(&grid);
        let b = back.sample(&grid);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-11, "{x} vs {y}");
        }
    }

    #[test]
    fn weights_constant_smoothness_ratios() {
        let w = WeightSequence::constant_smoothness(1.0, 5, 1, 8.0);
        let rep = check_admissible_weights(&w, 48).unwrap();
        assert!((rep.worst_ratio_low - 2.0).abs() < 1e-12);
        assert!((rep.worst_ratio_high - 2.0).abs() < 1e-12);
        assert!((rep.worst_alpha_constant - 1.0).abs() < 1e-12);
        assert!(rep.pass());
    }

    #[test]
    fn weights_log_smooth_pass() {
        let s = ScalarField::LogSmooth { a: 0.0, b: 1.0, radius: 8.0 };
        let w = WeightSequence::power(s, 5, 1, 8.0).unwrap();
        let rep = check_admissible_weights(&w, 48).unwrap();
        assert!(rep.pass(), "report: {rep:?}");
    }

    #[test]
    fn weights_forced_violation_fails() {
        // declare alpha1 too large for w_{j+1}/w_j = 2^{0.5}
        let w = WeightSequence::with_declared(
            ScalarField::Constant(0.5),
            4,
            1,
            8.0,
            0.0,
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        let rep = check_admissible_weights(&w, 32).unwrap();
        assert!(!rep.pass_ratio);
        assert!(rep.worst_ratio_low < 2.0f64.powf(w.alpha1()));
    }

    #[test]
    fn scaled_exponent_divides() {
        let p = VariableExponent::constant(3.0, 1, 8.0);
        let half = p.scaled(2.0).unwrap();
        assert!((half.eval(&[0.0]).unwrap() - 1.5).abs() < 1e-15);
        let pinf = VariableExponent::constant(f64::INFINITY, 1, 8.0);
        let s = pinf.scaled(2.0).unwrap();
        assert!(s.eval(&[0.0]).unwrap().is_infinite());
    }
}
