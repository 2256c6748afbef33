//! Uniform periodic grids over a box and complex-valued grid functions.
//!
//! The box is `[-R, R]^n` with `N` nodes per axis at spacing `h = 2R/N`;
//! node coordinates are `x_i = -R + i*h`. Values are stored row-major.

use num_complex::Complex64;
use std::io::{BufRead, Write};

use crate::error::{Result, VexError};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    box_radius: f64,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(dim: usize, box_radius: f64, points_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(VexError::Domain(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(box_radius > 0.0) || !box_radius.is_finite() {
            return Err(VexError::Domain(format!("box radius must be positive, got {box_radius}")));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(VexError::Domain(format!(
                "points per axis must be a power of two >= 8, got {points_per_axis}"
            )));
        }
        Ok(Grid { dim, box_radius, points_per_axis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_radius(&self) -> f64 {
        self.box_radius
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.box_radius / self.points_per_axis as f64
    }

    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Cell volume `h^n` used by the midpoint quadrature.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Largest frequency magnitude representable per axis, `pi*N/(2R)`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI * self.points_per_axis as f64 / (2.0 * self.box_radius)
    }

    #[inline]
    pub fn axis_coord(&self, i: usize) -> f64 {
        -self.box_radius + i as f64 * self.spacing()
    }

    /// Node coordinates; the second component is 0 in one dimension.
    #[inline]
    pub fn coord(&self, idx: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.axis_coord(idx), 0.0],
            _ => {
                let n = self.points_per_axis;
                [self.axis_coord(idx / n), self.axis_coord(idx % n)]
            }
        }
    }

    #[inline]
    pub fn coord_slice<'a>(&self, idx: usize, buf: &'a mut [f64; 2]) -> &'a [f64] {
        *buf = self.coord(idx);
        &buf[..self.dim]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim && x.iter().all(|&c| c.abs() <= self.box_radius)
    }

    pub fn nearest_node(&self, x: &[f64]) -> Result<usize> {
        if !self.contains(x) {
            return Err(VexError::Domain(format!("point {x:?} outside box of radius {}", self.box_radius)));
        }
        let n = self.points_per_axis;
        let mut idx = 0usize;
        for &c in x {
            let i = ((c + self.box_radius) / self.spacing()).round() as isize;
            let i = i.clamp(0, n as isize - 1) as usize;
            idx = idx * n + i;
        }
        Ok(idx)
    }

    pub fn node_coords(&self) -> Vec<[f64; 2]> {
        (0..self.node_count()).map(|i| self.coord(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(VexError::Domain(format!(
                "value count {} does not match node count {}",
                values.len(),
                grid.node_count()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(VexError::Domain("grid function values must be finite".into()));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        GridFunction { grid: grid.clone(), values: vec![Complex64::new(0.0, 0.0); grid.node_count()] }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.node_count());
        let mut buf = [0.0f64; 2];
        for idx in 0..grid.node_count() {
            values.push(f(grid.coord_slice(idx, &mut buf)));
        }
        GridFunction::new(grid.clone(), values)
    }

    pub fn from_real_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GridFunction { grid: self.grid.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(VexError::Domain("grid mismatch between grid functions".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GridFunction { grid: self.grid.clone(), values })
    }

    pub fn mul_pointwise_real(&self, w: &[f64]) -> Result<Self> {
        if w.len() != self.values.len() {
            return Err(VexError::Domain("pointwise weight length mismatch".into()));
        }
        let values = self.values.iter().zip(w).map(|(v, &c)| v * c).collect();
        Ok(GridFunction { grid: self.grid.clone(), values })
    }

    /// Pointwise `|f|^t`, discarding phase.
    pub fn abs_power(&self, t: f64) -> Self {
        let values = self.values.iter().map(|v| Complex64::new(v.norm().powf(t), 0.0)).collect();
        GridFunction { grid: self.grid.clone(), values }
    }

    /// Midpoint quadrature `h^n * sum(values)`.
    pub fn integrate(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for v in &self.values {
            s += v;
        }
        s * self.grid.cell_volume()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "{},{:.16e},{}",
            self.grid.dim, self.grid.box_radius, self.grid.points_per_axis
        )?;
        for v in &self.values {
            writeln!(out, "{:.16e},{:.16e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: &std::path::Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| VexError::Parse("empty grid function file".into()))??;
        let parts: Vec<&str> = header.trim().split(',').collect();
        if parts.len() != 3 {
            return Err(VexError::Parse(format!("header must be dim,R,N, got {header:?}")));
        }
        let dim: usize = parts[0]
            .parse()
            .map_err(|e| VexError::Parse(format!("header dim: {e}")))?;
        let r: f64 = parts[1]
            .parse()
            .map_err(|e| VexError::Parse(format!("header R: {e}")))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|e| VexError::Parse(format!("header N: {e}")))?;
        let grid = Grid::new(dim, r, n)?;
        let mut values = Vec::with_capacity(grid.node_count());
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (re, im) = line
                .trim()
                .split_once(',')
                .ok_or_else(|| VexError::Parse(format!("line {}: expected re,im", lineno + 2)))?;
            let re: f64 = re
                .parse()
                .map_err(|e| VexError::Parse(format!("line {}: {e}", lineno + 2)))?;
            let im: f64 = im
                .parse()
                .map_err(|e| VexError::Parse(format!("line {}: {e}", lineno + 2)))?;
            values.push(Complex64::new(re, im));
        }
        GridFunction::new(grid, values)
    }

    pub fn read_csv_file(path: &std::path::Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// Indicator of the open Euclidean ball `B(center, radius)`, truncated at the
/// box (balls never wrap around the periodic boundary).
pub fn ball_indicator(grid: &Grid, center: &[f64], radius: f64) -> Result<GridFunction> {
    if !(radius > 0.0) {
        return Err(VexError::Domain(format!("ball radius must be positive, got {radius}")));
    }
    if !grid.contains(center) {
        return Err(VexError::Domain(format!("ball center {center:?} outside box")));
    }
    let r2 = radius * radius;
    GridFunction::from_real_fn(grid, |x| {
        let mut d2 = 0.0;
        for (a, b) in x.iter().zip(center) {
            d2 += (a - b) * (a - b);
        }
        if d2 < r2 {
            1.0
        } else {
            0.0
        }
    })
}

#[derive(Debug, Clone)]
pub struct GridFunctionSequence {
    grid: Grid,
    entries: Vec<GridFunction>,
}

impl GridFunctionSequence {
    pub fn new(entries: Vec<GridFunction>) -> Result<Self> {
        let grid = entries
            .first()
            .ok_or_else(|| VexError::Domain("sequence must have at least one entry".into()))?
            .grid()
            .clone();
        for e in &entries {
            if e.grid() != &grid {
                return Err(VexError::Domain("sequence entries must share one grid".into()));
            }
        }
        Ok(GridFunctionSequence { grid, entries })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn entries(&self) -> &[GridFunction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        GridFunctionSequence {
            grid: self.grid.clone(),
            entries: self.entries.iter().map(|e| e.scale_real(c)).collect(),
        }
    }

    pub fn add(&self, other: &GridFunctionSequence) -> Result<Self> {
        if self.len() != other.len() {
            return Err(VexError::Domain("sequence length mismatch".into()));
        }
        let entries: Result<Vec<_>> =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(GridFunctionSequence { grid: self.grid.clone(), entries: entries? })
    }
}
