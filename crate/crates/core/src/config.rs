//! JSON configuration: exponent families, grid, ball search, bisection,
//! weights, window system, plus the atom-specification and sequence-manifest
//! file formats.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::atoms::{AtomFamily, Coefficient, CoefficientArray};
use crate::balls::{BallSearchOptions, BallSearchSet};
use crate::bisect::BisectionConfig;
use crate::error::{Result, VexError};
use crate::exponent::{ScalarField, VariableExponent, WeightSequence};
use crate::grid::{Grid, GridFunction, GridFunctionSequence};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum ExponentSpec {
    #[serde(rename = "constant")]
    Constant { value: f64 },
    #[serde(rename = "log-smooth")]
    LogSmooth { a: f64, b: f64 },
    #[serde(rename = "canonical")]
    Canonical { a: f64, b: f64 },
    #[serde(rename = "table")]
    Table { values: Vec<f64> },
}

impl ExponentSpec {
    pub fn resolve(&self, grid: &Grid) -> Result<VariableExponent> {
        match self {
            ExponentSpec::Constant { value } => {
                if !(*value > 0.0) {
                    return Err(VexError::Parse(format!("constant exponent must be positive, got {value}")));
                }
                Ok(VariableExponent::constant(*value, grid.dim(), grid.box_radius()))
            }
            ExponentSpec::LogSmooth { a, b } => {
                VariableExponent::log_smooth(*a, *b, grid.dim(), grid.box_radius())
            }
            ExponentSpec::Canonical { a, b } => {
                VariableExponent::canonical(*a, *b, grid.dim(), grid.box_radius())
            }
            ExponentSpec::Table { values } => VariableExponent::table(grid, values.clone()),
        }
    }

    pub fn resolve_field(&self, grid: &Grid) -> Result<ScalarField> {
        Ok(match self {
            ExponentSpec::Constant { value } => ScalarField::Constant(*value),
            ExponentSpec::LogSmooth { a, b } => {
                ScalarField::LogSmooth { a: *a, b: *b, radius: grid.box_radius() }
            }
            ExponentSpec::Canonical { a, b } => ScalarField::Canonical { a: *a, b: *b },
            ExponentSpec::Table { values } => {
                if values.len() != grid.node_count() {
                    return Err(VexError::Parse("table length must equal node count".into()));
                }
                ScalarField::Table { grid: grid.clone(), values: values.clone() }
            }
        })
    }
}

fn default_dim() -> usize {
    1
}
fn default_radius() -> f64 {
    8.0
}
fn default_points() -> usize {
    512
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_radius", rename = "box_radius")]
    pub box_radius: f64,
    #[serde(default = "default_points", rename = "points_per_axis")]
    pub points_per_axis: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { dim: 1, box_radius: 8.0, points_per_axis: 512 }
    }
}

impl GridSpec {
    pub fn resolve(&self) -> Result<Grid> {
        Grid::new(self.dim, self.box_radius, self.points_per_axis)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct BallSpec {
    /// Node stride between ball centers (defaults per dimension).
    #[serde(default)]
    pub center_stride: Option<usize>,
    /// Radius ladder base; "sqrt2" or a positive number as a string.
    #[serde(default)]
    pub ladder_base: Option<f64>,
}

impl BallSpec {
    pub fn options(&self) -> BallSearchOptions {
        BallSearchOptions {
            center_stride: self.center_stride,
            ladder_base: self.ladder_base.unwrap_or(std::f64::consts::SQRT_2),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BisectionSpec {
    #[serde(default = "default_tol")]
    pub relative_tolerance: f64,
    #[serde(default = "default_iters")]
    pub max_iterations: usize,
    #[serde(default = "default_growth")]
    pub bracket_growth_factor: f64,
}

fn default_tol() -> f64 {
    1e-10
}
fn default_iters() -> usize {
    200
}
fn default_growth() -> f64 {
    2.0
}

impl Default for BisectionSpec {
    fn default() -> Self {
        BisectionSpec {
            relative_tolerance: 1e-10,
            max_iterations: 200,
            bracket_growth_factor: 2.0,
        }
    }
}

impl BisectionSpec {
    pub fn resolve(&self) -> BisectionConfig {
        BisectionConfig {
            relative_tolerance: self.relative_tolerance,
            max_iterations: self.max_iterations,
            bracket_growth_factor: self.bracket_growth_factor,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WeightSpec {
    pub s: ExponentSpec,
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_levels() -> usize {
    5
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec { s: ExponentSpec::Constant { value: 0.0 }, levels: 5 }
    }
}

impl WeightSpec {
    pub fn resolve(&self, grid: &Grid) -> Result<WeightSequence> {
        WeightSequence::power(
            self.resolve_field(grid)?,
            self.levels,
            grid.dim(),
            grid.box_radius(),
        )
    }

    fn resolve_field(&self, grid: &Grid) -> Result<ScalarField> {
        self.s.resolve_field(grid)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemSpec {
    #[serde(default = "default_system_levels")]
    pub max_level: usize,
    #[serde(default = "default_softness")]
    pub softness: f64,
}

fn default_system_levels() -> usize {
    4
}
fn default_softness() -> f64 {
    1.0
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec { max_level: 4, softness: 1.0 }
    }
}

fn default_p() -> ExponentSpec {
    ExponentSpec::Constant { value: 2.0 }
}

/// Top-level configuration document shared by the CLI commands.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_p")]
    pub p: ExponentSpec,
    #[serde(default)]
    pub q: Option<ExponentSpec>,
    #[serde(default)]
    pub u: Option<ExponentSpec>,
    #[serde(default)]
    pub weights: WeightSpec,
    #[serde(default)]
    pub balls: BallSpec,
    #[serde(default)]
    pub bisection: BisectionSpec,
    #[serde(default)]
    pub system: SystemSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    20
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridSpec::default(),
            p: default_p(),
            q: None,
            u: None,
            weights: WeightSpec::default(),
            balls: BallSpec::default(),
            bisection: BisectionSpec::default(),
            system: SystemSpec::default(),
            trials: 20,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VexError::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn resolve_grid(&self) -> Result<Grid> {
        self.grid.resolve()
    }

    pub fn resolve_balls(&self, grid: &Grid) -> Result<BallSearchSet> {
        BallSearchSet::build(grid, &self.balls.options())
    }

    pub fn resolve_p(&self, grid: &Grid) -> Result<VariableExponent> {
        self.p.resolve(grid)
    }

    pub fn resolve_q(&self, grid: &Grid) -> Result<VariableExponent> {
        match &self.q {
            Some(spec) => spec.resolve(grid),
            None => self.p.resolve(grid),
        }
    }

    pub fn resolve_u(&self, grid: &Grid) -> Result<VariableExponent> {
        match &self.u {
            Some(spec) => spec.resolve(grid),
            None => self.p.resolve(grid),
        }
    }
}

/// Atom/coefficient specification file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AtomSpecFile {
    #[serde(rename = "K")]
    pub smoothness: usize,
    #[serde(rename = "L")]
    pub moments: usize,
    #[serde(rename = "d")]
    pub support_factor: f64,
    #[serde(rename = "M", default)]
    pub decay: Option<f64>,
    pub coefficients: Vec<CoefficientSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoefficientSpec {
    pub j: u32,
    pub m: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl AtomSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VexError::Parse(format!("atom spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn family(&self) -> Result<AtomFamily> {
        match self.decay {
            Some(m) => AtomFamily::molecules(self.smoothness, self.moments, self.support_factor, m),
            None => AtomFamily::atoms(self.smoothness, self.moments, self.support_factor),
        }
    }

    pub fn coefficients(&self) -> CoefficientArray {
        CoefficientArray::new(
            self.coefficients
                .iter()
                .map(|c| Coefficient {
                    level: c.j,
                    index: c.m.clone(),
                    value: Complex64::new(c.re, c.im),
                })
                .collect(),
        )
    }
}

/// Directory manifest listing per-entry grid function files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SequenceManifest {
    pub entries: Vec<String>,
}

impl SequenceManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| VexError::Parse(format!("manifest: {e}")))
    }

    /// Reads the listed grid functions, resolving paths relative to the
    /// manifest location.
    pub fn read_sequence(&self, manifest_path: &Path) -> Result<GridFunctionSequence> {
        let base = manifest_path.parent().unwrap_or(Path::new("."));
        let entries: Result<Vec<GridFunction>> = self
            .entries
            .iter()
            .map(|rel| GridFunction::read_csv_file(&base.join(rel)))
            .collect();
        GridFunctionSequence::new(entries?)
    }
}
