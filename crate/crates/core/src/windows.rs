//! Frequency-side window systems: the dyadic admissible family generating
//! Littlewood-Paley pieces, and the Peetre starting windows.

use crate::error::{Result, VexError};
use crate::fft::frequency;
use crate::grid::Grid;

/// The standard smooth step: 0 for t <= 0, 1 for t >= 1, C^inf in between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial plateau window: ramps from 0 to 1 on [rise.0, rise.1], holds 1, and
/// falls back to 0 on [fall.0, fall.1]. Omitted ramps pin the window at 1 on
/// that side.
#[derive(Debug, Clone)]
pub struct RadialWindow {
    pub rise: Option<(f64, f64)>,
    pub fall: Option<(f64, f64)>,
}

impl RadialWindow {
    pub fn value(&self, rho: f64) -> f64 {
        let mut v = 1.0;
        if let Some((a, b)) = self.rise {
            v *= smooth_step((rho - a) / (b - a));
        }
        if let Some((a, b)) = self.fall {
            v *= 1.0 - smooth_step((rho - a) / (b - a));
        }
        v
    }
}

fn radius(xi: &[f64]) -> f64 {
    xi.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// A dyadic admissible system: windows `phi_j(xi) = phi(2^{-j} xi)` for
/// j >= 1 with `phi_0 = Phi`.
#[derive(Debug, Clone)]
pub struct AdmissibleSystem {
    levels: usize,
    base: RadialWindow,
    low_pass: RadialWindow,
}

impl AdmissibleSystem {
    /// Builds the system with `levels = J+1` windows. The softness parameter
    /// in (0, 1] shrinks the transition ramps; both extremes satisfy the
    /// support and positivity constraints, so two different values give two
    /// genuinely different admissible systems.
    pub fn build(grid: &Grid, max_level: usize, softness: f64) -> Result<Self> {
        if !(softness > 0.0 && softness <= 1.0) {
            return Err(VexError::Domain(format!("softness must lie in (0,1], got {softness}")));
        }
        let top = (1u64 << (max_level + 1)) as f64;
        if top > grid.nyquist() {
            return Err(VexError::Resolution(format!(
                "level {max_level} needs frequencies up to {top}, beyond the grid Nyquist {:.2}",
                grid.nyquist()
            )));
        }
        let base = RadialWindow {
            rise: Some((0.5, 0.5 + softness * 0.1)),
            fall: Some((5.0 / 3.0, 5.0 / 3.0 + softness / 3.0)),
        };
        let low_pass = RadialWindow {
            rise: None,
            fall: Some((5.0 / 3.0, 5.0 / 3.0 + softness / 3.0)),
        };
        Ok(AdmissibleSystem { levels: max_level + 1, base, low_pass })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn max_level(&self) -> usize {
        self.levels - 1
    }

    /// `phi_j(xi)`.
    pub fn window(&self, j: usize, xi: &[f64]) -> f64 {
        let rho = radius(xi);
        if j == 0 {
            self.low_pass.value(rho)
        } else {
            let scale = (1u64 << j) as f64;
            self.base.value(rho / scale)
        }
    }

    /// Checks the support and positivity constraints on the discrete
    /// frequency lattice of the grid.
    pub fn verify_on_lattice(&self, grid: &Grid) -> Result<()> {
        for idx in 0..grid.node_count() {
            let xi = frequency(grid, idx);
            let rho = radius(&xi[..grid.dim()]);
            let phi = self.base.value(rho);
            if phi != 0.0 && !(0.5..=2.0).contains(&rho) {
                return Err(VexError::Validity(format!(
                    "band window has support outside [1/2, 2] at |xi| = {rho}"
                )));
            }
            if (0.6..=5.0 / 3.0).contains(&rho) && phi < 1e-12 {
                return Err(VexError::Validity(format!(
                    "band window vanishes inside [3/5, 5/3] at |xi| = {rho}"
                )));
            }
            let low = self.low_pass.value(rho);
            if low != 0.0 && rho > 2.0 {
                return Err(VexError::Validity(format!(
                    "low-pass window has support outside [0, 2] at |xi| = {rho}"
                )));
            }
            if rho <= 5.0 / 3.0 && low < 1e-12 {
                return Err(VexError::Validity(format!(
                    "low-pass window vanishes inside [0, 5/3] at |xi| = {rho}"
                )));
            }
        }
        Ok(())
    }
}

/// Peetre starting windows with positivity radii eps and k: `psi_0` positive
/// on |xi| <= k*eps, `psi_1` positive on eps <= |xi| <= 2*k*eps and supported
/// away from the origin (so all derivatives vanish at 0).
#[derive(Debug, Clone)]
pub struct PeetreSystem {
    levels: usize,
    pub epsilon: f64,
    pub k: f64,
    head: RadialWindow,
    band: RadialWindow,
}

impl PeetreSystem {
    pub fn build(grid: &Grid, max_level: usize) -> Result<Self> {
        let epsilon = 0.6;
        let k = 1.5;
        let top = (2.0f64) * k * epsilon * (1u64 << max_level) as f64;
        if top > grid.nyquist() {
            return Err(VexError::Resolution(format!(
                "level {max_level} needs frequencies up to {top}, beyond the grid Nyquist {:.2}",
                grid.nyquist()
            )));
        }
        // head window positive past k*eps = 0.9; band window positive on
        // [0.58, 1.9] which covers [eps, 2 k eps] = [0.6, 1.8]
        let head = RadialWindow { rise: None, fall: Some((0.95, 1.1)) };
        let band = RadialWindow { rise: Some((0.5, 0.58)), fall: Some((1.9, 2.05)) };
        Ok(PeetreSystem { levels: max_level + 1, epsilon, k, head, band })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `psi_j(xi)`: the head window at j = 0, the band window dilated by
    /// `2^{-j+1}` for j >= 1.
    pub fn window(&self, j: usize, xi: &[f64]) -> f64 {
        let rho = radius(xi);
        if j == 0 {
            self.head.value(rho)
        } else {
            let scale = (1u64 << (j - 1)) as f64;
            self.band.value(rho / scale)
        }
    }

    pub fn verify_positivity(&self) -> Result<()> {
        let ke = self.k * self.epsilon;
        for i in 0..=100 {
            let rho = ke * i as f64 / 100.0;
            if self.head.value(rho) <= 0.0 {
                return Err(VexError::Validity(format!("head window vanishes at |xi| = {rho}")));
            }
        }
        for i in 0..=100 {
            let rho = self.epsilon + (2.0 * ke - self.epsilon) * i as f64 / 100.0;
            if self.band.value(rho) <= 0.0 {
                return Err(VexError::Validity(format!("band window vanishes at |xi| = {rho}")));
            }
        }
        // support excludes a neighborhood of the origin
        for i in 0..=100 {
            let rho = 0.5 * i as f64 / 100.0;
            if self.band.value(rho) != 0.0 {
                return Err(VexError::Validity(format!(
                    "band window does not vanish near the origin at |xi| = {rho}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_step_branches() {
        assert_eq!(smooth_step(-0.3), 0.0);
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        assert!(smooth_step(0.3) > 0.0 && smooth_step(0.3) < 1.0);
    }

    #[test]
    fn admissible_system_plateau_values() {
        let grid = Grid::new(1, 8.0, 512).unwrap();
        let sys = AdmissibleSystem::build(&grid, 4, 1.0).unwrap();
        assert_eq!(sys.window(0, &[0.0]), 1.0);
        assert_eq!(sys.window(1, &[2.0]), 1.0); // phi(1) = 1
        assert_eq!(sys.window(1, &[0.8]), 0.0); // phi(0.4) outside support
        sys.verify_on_lattice(&grid).unwrap();
    }

    #[test]
    fn admissible_system_respects_nyquist() {
        let grid = Grid::new(1, 8.0, 512).unwrap();
        // Nyquist is about 100.5: level 5 needs 64, level 6 needs 128
        assert!(AdmissibleSystem::build(&grid, 5, 1.0).is_ok());
        assert!(AdmissibleSystem::build(&grid, 6, 1.0).is_err());
    }

    #[test]
    fn two_softness_choices_both_verify() {
        let grid = Grid::new(1, 8.0, 512).unwrap();
        for softness in [1.0, 0.55] {
            let sys = AdmissibleSystem::build(&grid, 4, softness).unwrap();
            sys.verify_on_lattice(&grid).unwrap();
        }
    }

    #[test]
    fn peetre_system_positivity() {
        let grid = Grid::new(1, 8.0, 512).unwrap();
        let sys = PeetreSystem::build(&grid, 4).unwrap();
        sys.verify_positivity().unwrap();
        assert_eq!(sys.window(1, &[0.2]), 0.0);
        assert!(sys.window(1, &[1.0]) > 0.0);
        assert!(sys.window(2, &[2.0]) > 0.0);
        assert!(sys.window(0, &[0.5]) > 0.0);
    }
}
