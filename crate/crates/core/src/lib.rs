//! Numerical laboratory for variable-exponent Lebesgue, Morrey,
//! mixed-sequence and Besov-Morrey quasinorms on periodic grids.
//!
//! Norms are evaluated as nested scalar root-finding problems (unit-ball
//! infima of semimodulars) combined with supremum searches over finite ball
//! sets; everything is deterministic for a fixed seed and independent of the
//! thread count.

pub mod atoms;
pub mod balls;
pub mod besov;
pub mod bisect;
pub mod config;
pub mod error;
pub mod exponent;
pub mod fft;
pub mod grid;
pub mod kernels;
pub mod lebesgue;
pub mod mixed;
pub mod morrey;
pub mod report;
pub mod suites;
pub mod trials;
pub mod windows;

pub use atoms::{build_atom, build_molecule, sequence_space_norm, synthesize, AtomFamily, CoefficientArray, DyadicCube};
pub use besov::{besov_morrey_norm, littlewood_paley_pieces, peetre_maximal};
pub use balls::{BallSearchOptions, BallSearchSet, NodeSet};
pub use bisect::BisectionConfig;
pub use config::{AtomSpecFile, ExponentSpec, GridSpec, RunConfig, SequenceManifest};
pub use error::{Result, VexError};
pub use exponent::{
    c_infinity_pu, c_infinity_pu_r, check_admissible_weights, conjugate_exponent,
    log_holder_constants, sigma_t, ScalarField, VariableExponent, WeightSequence, P_CAP,
};
pub use fft::{convolve, fourier_multiplier};
pub use kernels::{discrete_convolution_sum, eta_value, EtaKernel};
pub use grid::{ball_indicator, Grid, GridFunction, GridFunctionSequence};
pub use lebesgue::{modular_lp, norm_lp, phi_p};
pub use mixed::{
    modular_mixed_lebesgue, modular_mixed_morrey, norm_from_modular_bound, norm_mixed_lebesgue,
    norm_mixed_morrey, MixedRoute,
};
pub use report::{emit_report, ReportFormat, SuiteResult, Verdict};
pub use suites::{all_passed, run_suite, SUITE_NAMES};
pub use windows::{smooth_step, AdmissibleSystem, PeetreSystem};
pub use morrey::{char_ball_norm_ratio, morrey_norm_direct, morrey_norm_interchanged};
