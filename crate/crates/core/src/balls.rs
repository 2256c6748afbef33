//! Finite search sets of balls standing in for the supremum over all centers
//! and radii.

use std::collections::HashMap;

use crate::error::{Result, VexError};
use crate::grid::Grid;

/// Subset of grid nodes a computation is restricted to.
#[derive(Debug, Clone, PartialEq)]
pub enum NodeSet {
    All,
    /// Contiguous inclusive index range (one dimension).
    Range(usize, usize),
    /// Explicit node indices (two dimensions).
    Indices(Vec<u32>),
}

impl NodeSet {
    pub fn len(&self, total: usize) -> usize {
        match self {
            NodeSet::All => total,
            NodeSet::Range(a, b) => b - a + 1,
            NodeSet::Indices(v) => v.len(),
        }
    }

    pub fn is_empty(&self, total: usize) -> bool {
        self.len(total) == 0
    }

    pub fn iter(&self, total: usize) -> NodeSetIter<'_> {
        match self {
            NodeSet::All => NodeSetIter::Range(0..total),
            NodeSet::Range(a, b) => NodeSetIter::Range(*a..b + 1),
            NodeSet::Indices(v) => NodeSetIter::Slice(v.iter()),
        }
    }
}

pub enum NodeSetIter<'a> {
    Range(std::ops::Range<usize>),
    Slice(std::slice::Iter<'a, u32>),
}

impl Iterator for NodeSetIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            NodeSetIter::Range(r) => r.next(),
            NodeSetIter::Slice(it) => it.next().map(|&i| i as usize),
        }
    }
}

/// Node indices of the open ball around a node center, truncated at the box.
pub fn ball_node_set(grid: &Grid, center_idx: usize, radius: f64) -> NodeSet {
    let n = grid.points_per_axis();
    let h = grid.spacing();
    match grid.dim() {
        1 => {
            let c = center_idx as f64;
            let w = radius / h;
            // strict inequality: i in (c - w, c + w)
            let lo = strict_lower(c - w).max(0);
            let hi = strict_upper(c + w).min(n as i64 - 1);
            if lo <= 0 && hi >= n as i64 - 1 {
                NodeSet::All
            } else if lo > hi {
                NodeSet::Indices(Vec::new())
            } else {
                NodeSet::Range(lo as usize, hi as usize)
            }
        }
        _ => {
            let (ci, cj) = ((center_idx / n) as i64, (center_idx % n) as i64);
            let w = radius / h;
            let w2 = w * w;
            let mut idx = Vec::new();
            let mut all = true;
            for i in 0..n as i64 {
                for j in 0..n as i64 {
                    let d2 = ((i - ci) * (i - ci) + (j - cj) * (j - cj)) as f64;
                    // strict inequality with a guard against ladder radii that
                    // drift off an exact integer by floating-point noise
                    if d2 < w2 && w2 - d2 > 1e-9 * (1.0 + w2) {
                        idx.push((i as usize * n + j as usize) as u32);
                    } else {
                        all = false;
                    }
                }
            }
            if all {
                NodeSet::All
            } else {
                NodeSet::Indices(idx)
            }
        }
    }
}

/// Smallest integer strictly greater than x, snapping near-integers first.
fn strict_lower(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as i64 + 1
    } else {
        x.floor() as i64 + 1
    }
}

/// Largest integer strictly less than x, snapping near-integers first.
fn strict_upper(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as i64 - 1
    } else {
        x.ceil() as i64 - 1
    }
}

/// One (center, radius) pair of the search set, pointing at its deduplicated
/// node set.
#[derive(Debug, Clone)]
pub struct BallPair {
    pub center_idx: usize,
    pub radius: f64,
    pub set_id: usize,
}

#[derive(Debug, Clone)]
pub struct BallSearchSet {
    grid: Grid,
    radii: Vec<f64>,
    pairs: Vec<BallPair>,
    sets: Vec<NodeSet>,
}

#[derive(Debug, Clone)]
pub struct BallSearchOptions {
    /// Stride between node centers per axis; defaults to 1 in one dimension,
    /// 4 in two.
    pub center_stride: Option<usize>,
    /// Radius ladder base step exponent: radii are `h * base^k`. The default
    /// base sqrt(2) balances cost against the supremum quality.
    pub ladder_base: f64,
}

impl Default for BallSearchOptions {
    fn default() -> Self {
        BallSearchOptions { center_stride: None, ladder_base: std::f64::consts::SQRT_2 }
    }
}

impl BallSearchOptions {
    pub fn coarse() -> Self {
        BallSearchOptions { center_stride: Some(8), ladder_base: 2.0 }
    }
}

impl BallSearchSet {
    pub fn build(grid: &Grid, opts: &BallSearchOptions) -> Result<Self> {
        let stride = opts.center_stride.unwrap_or(if grid.dim() == 1 { 1 } else { 4 });
        if stride == 0 {
            return Err(VexError::Domain("center stride must be positive".into()));
        }
        let n = grid.points_per_axis();
        let h = grid.spacing();
        let sqrt_n = (grid.dim() as f64).sqrt();
        let diameter = 2.0 * grid.box_radius() * sqrt_n;

        // Ladder radii sit half a spacing past the dyadic step so open balls
        // around node centers don't systematically lose both boundary nodes.
        let mut radii = Vec::new();
        for k in 0..64 {
            let r = h * (opts.ladder_base.powi(k) + 0.5);
            if r > 2.0 * diameter {
                break;
            }
            radii.push(r);
        }
        // whole-box radius: covers every node from any center
        if radii.last().map_or(true, |&last| last < diameter) {
            radii.push(diameter);
            radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }

        let centers: Vec<usize> = match grid.dim() {
            1 => (0..n).step_by(stride).collect(),
            _ => {
                let mut v = Vec::new();
                for i in (0..n).step_by(stride) {
                    for j in (0..n).step_by(stride) {
                        v.push(i * n + j);
                    }
                }
                v
            }
        };

        let mut sets: Vec<NodeSet> = vec![NodeSet::All];
        let mut range_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = Vec::with_capacity(centers.len() * radii.len());
        for &c in &centers {
            for &radius in &radii {
                let set = ball_node_set(grid, c, radius);
                let set_id = match &set {
                    NodeSet::All => 0,
                    NodeSet::Range(a, b) => *range_ids.entry((*a, *b)).or_insert_with(|| {
                        sets.push(set.clone());
                        sets.len() - 1
                    }),
                    NodeSet::Indices(v) if v.is_empty() => continue,
                    NodeSet::Indices(_) => {
                        sets.push(set.clone());
                        sets.len() - 1
                    }
                };
                pairs.push(BallPair { center_idx: c, radius, set_id });
            }
        }
        Ok(BallSearchSet { grid: grid.clone(), radii, pairs, sets })
    }

    pub fn with_defaults(grid: &Grid) -> Result<Self> {
        Self::build(grid, &BallSearchOptions::default())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn pairs(&self) -> &[BallPair] {
        &self.pairs
    }

    pub fn sets(&self) -> &[NodeSet] {
        &self.sets
    }

    /// Per-set maximum of the Morrey prefactor `r^{n/u(x)-n/p(x)}` over the
    /// pairs sharing that node set (the prefactor is evaluated at the pair's
    /// center). The inner infima are monotone in the prefactor, so only the
    /// per-set maximum matters for suprema.
    pub fn max_prefactors(&self, pv: &[f64], uv: &[f64]) -> Vec<f64> {
        let n_dim = self.grid.dim() as f64;
        let inv = |v: f64| if v.is_infinite() { 0.0 } else { 1.0 / v };
        let mut out = vec![0.0f64; self.sets.len()];
        for pair in &self.pairs {
            let e = n_dim * (inv(uv[pair.center_idx]) - inv(pv[pair.center_idx]));
            let pref = pair.radius.powf(e);
            if pref > out[pair.set_id] {
                out[pair.set_id] = pref;
            }
        }
        out
    }
}
