//! Discrete Fourier transforms on the periodic grid: convolution and
//! frequency multipliers.
//!
//! Conventions: the forward transform is the unnormalized DFT, the inverse
//! carries the 1/N^n factor. Convolution is scaled by the cell volume so a
//! discrete delta of height 1/h^n acts as the identity kernel. The physical
//! frequency of axis index k is `(pi/R) * k'` with `k'` the signed index.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::grid::{Grid, GridFunction};

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        cell.borrow_mut()
            .entry((n, inverse))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if inverse {
                    planner.plan_fft_inverse(n)
                } else {
                    planner.plan_fft_forward(n)
                }
            })
            .clone()
    })
}

fn transform(grid: &Grid, values: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let mut data = values.to_vec();
    match grid.dim() {
        1 => {
            plan(n, inverse).process(&mut data);
        }
        _ => {
            let fft = plan(n, inverse);
            // rows
            for row in data.chunks_mut(n) {
                fft.process(row);
            }
            // columns
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = data[i * n + j];
                }
                fft.process(&mut col);
                for i in 0..n {
                    data[i * n + j] = col[i];
                }
            }
        }
    }
    data
}

pub fn forward(grid: &Grid, values: &[Complex64]) -> Vec<Complex64> {
    transform(grid, values, false)
}

pub fn inverse_normalized(grid: &Grid, values: &[Complex64]) -> Vec<Complex64> {
    let scale = 1.0 / grid.node_count() as f64;
    transform(grid, values, true).into_iter().map(|v| v * scale).collect()
}

/// Signed frequency index of axis position k.
#[inline]
fn signed_index(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Physical frequency vector of the flat index on the discrete lattice.
pub fn frequency(grid: &Grid, idx: usize) -> [f64; 2] {
    let n = grid.points_per_axis();
    let base = std::f64::consts::PI / grid.box_radius();
    match grid.dim() {
        1 => [base * signed_index(idx, n) as f64, 0.0],
        _ => [
            base * signed_index(idx / n, n) as f64,
            base * signed_index(idx % n, n) as f64,
        ],
    }
}

/// Rolls values by N/2 per axis so box position 0 moves to index 0 (the
/// displacement origin of the circular convolution).
fn shift_origin(grid: &Grid, values: &[Complex64]) -> Vec<Complex64> {
    let n = grid.points_per_axis();
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    match grid.dim() {
        1 => {
            for (m, o) in out.iter_mut().enumerate() {
                *o = values[(m + half) % n];
            }
        }
        _ => {
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] = values[((i + half) % n) * n + (j + half) % n];
                }
            }
        }
    }
    out
}

/// Periodic discrete convolution scaled by the cell volume. The kernel is
/// interpreted as a function on the box centered at 0.
pub fn convolve(f: &GridFunction, k: &GridFunction) -> Result<GridFunction> {
    f.check_same_grid(k)?;
    let grid = f.grid();
    let fa = forward(grid, f.values());
    let kb = forward(grid, &shift_origin(grid, k.values()));
    let prod: Vec<Complex64> = fa.iter().zip(&kb).map(|(a, b)| a * b).collect();
    let cell = grid.cell_volume();
    let vals = inverse_normalized(grid, &prod)
        .into_iter()
        .map(|v| v * cell)
        .collect();
    GridFunction::new(grid.clone(), vals)
}

/// Applies a frequency-side window: inverse transform of
/// `window(xi) * forward(f)`.
pub fn fourier_multiplier(f: &GridFunction, window: impl Fn(&[f64]) -> f64) -> GridFunction {
    let grid = f.grid();
    let mut spec = forward(grid, f.values());
    for (idx, v) in spec.iter_mut().enumerate() {
        let xi = frequency(grid, idx);
        let w = window(&xi[..grid.dim()]);
        *v *= w;
    }
    let vals = inverse_normalized(grid, &spec);
    GridFunction::new(grid.clone(), vals).expect("multiplier output stays finite")
}

/// Frequency-side energy `h^n / N^n * sum |F_k|^2`; equals `integrate(|f|^2)`
/// by Parseval.
pub fn spectral_energy(f: &GridFunction) -> f64 {
    let grid = f.grid();
    let spec = forward(grid, f.values());
    let sum: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    sum * grid.cell_volume() / grid.node_count() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ball_indicator;

    fn delta_kernel(grid: &Grid) -> GridFunction {
        let mut vals = vec![Complex64::new(0.0, 0.0); grid.node_count()];
        let origin = grid.nearest_node(&vec![0.0; grid.dim()]).unwrap();
        vals[origin] = Complex64::new(1.0 / grid.cell_volume(), 0.0);
        GridFunction::new(grid.clone(), vals).unwrap()
    }

    #[test]
    fn convolve_with_delta_is_identity() {
        let grid = Grid::new(1, 4.0, 128).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| (-x[0] * x[0]).exp()).unwrap();
        let d = delta_kernel(&grid);
        let g = convolve(&f, &d).unwrap();
        let err = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(err < 1e-10, "err = {err}");
    }

    #[test]
    fn constants_are_eigenfunctions() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let c = 0.7;
        let f = GridFunction::from_real_fn(&grid, |_| c).unwrap();
        let k = GridFunction::from_real_fn(&grid, |x| (-(x[0] * x[0])).exp()).unwrap();
        let mass = k.integrate().re;
        let g = convolve(&f, &k).unwrap();
        for v in g.values() {
            assert!((v.re - c * mass).abs() < 1e-10 && v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn indicator_convolution_matches_direct_oracle() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let a = ball_indicator(&grid, &[0.0], 0.9).unwrap();
        let b = ball_indicator(&grid, &[0.0], 0.4).unwrap();
        let fast = convolve(&a, &b).unwrap();
        // direct O(N^2) periodic convolution oracle
        let n = grid.points_per_axis();
        let h = grid.spacing();
        let av = a.values();
        let bv = b.values();
        let mut direct = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                // kernel value at displacement (i-j)h lives at index i-j+n/2
                let k = (i + n + n / 2 - j) % n;
                s += av[j] * bv[k];
            }
            direct[i] = s * h;
        }
        for (x, y) in fast.values().iter().zip(&direct) {
            assert!((x - y).norm() < 1e-10);
        }
        // triangle-shaped overlap: peak equals the smaller indicator's mass
        let peak = fast.sup_abs();
        assert!((peak - b.integrate().re).abs() < 1e-10);
    }

    #[test]
    fn convolve_is_commutative_and_bit_deterministic() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let a = GridFunction::from_real_fn(&grid, |x| (-(x[0] - 0.5) * (x[0] - 0.5)).exp()).unwrap();
        let b = GridFunction::from_real_fn(&grid, |x| (-(2.0 * x[0]) * (2.0 * x[0])).exp()).unwrap();
        let ab = convolve(&a, &b).unwrap();
        let ba = convolve(&b, &a).unwrap();
        for (x, y) in ab.values().iter().zip(ba.values()) {
            assert!((x - y).norm() < 1e-10 * (1.0 + x.norm()));
        }
        let again = convolve(&a, &b).unwrap();
        assert_eq!(ab, again);
    }

    #[test]
    fn convolve_is_bilinear() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let a = GridFunction::from_real_fn(&grid, |x| (-(x[0] + 0.3) * (x[0] + 0.3)).exp()).unwrap();
        let b = GridFunction::from_real_fn(&grid, |x| (-(x[0] - 0.4) * (x[0] - 0.4) * 2.0).exp()).unwrap();
        let k = ball_indicator(&grid, &[0.0], 0.7).unwrap();
        let lhs = convolve(&a.add(&b.scale_real(2.5)).unwrap(), &k).unwrap();
        let rhs = convolve(&a, &k)
            .unwrap()
            .add(&convolve(&b, &k).unwrap().scale_real(2.5))
            .unwrap();
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            assert!((x - y).norm() < 1e-10 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn multiplier_identity_and_zero() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| (x[0] * 0.3).cos()).unwrap();
        let same = fourier_multiplier(&f, |_| 1.0);
        for (x, y) in f.values().iter().zip(same.values()) {
            assert!((x - y).norm() < 1e-12);
        }
        let zero = fourier_multiplier(&f, |_| 0.0);
        assert!(zero.sup_abs() < 1e-14);
    }

    #[test]
    fn multiplier_picks_single_frequency() {
        // window = indicator of one lattice frequency applied to that
        // exponential leaves it unchanged; checked against a direct DFT oracle
        let grid = Grid::new(1, 8.0, 16).unwrap();
        let k0 = std::f64::consts::PI / 8.0 * 3.0; // lattice frequency, index 3
        let f = GridFunction::from_fn(&grid, |x| Complex64::new(0.0, k0 * x[0]).exp()).unwrap();
        // direct DFT oracle: coefficient at signed index 3 must carry all mass
        let spec = forward(&grid, f.values());
        for (idx, c) in spec.iter().enumerate() {
            if idx == 3 {
                assert!((c.norm() - 16.0).abs() < 1e-9);
            } else {
                assert!(c.norm() < 1e-9);
            }
        }
        let g = fourier_multiplier(&f, |xi| if (xi[0] - k0).abs() < 1e-9 { 1.0 } else { 0.0 });
        for (x, y) in f.values().iter().zip(g.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn multipliers_compose() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| (-(x[0] * x[0])).exp() * (3.0 * x[0]).sin()).unwrap();
        let w1 = |xi: &[f64]| 1.0 / (1.0 + xi[0] * xi[0]);
        let w2 = |xi: &[f64]| (0.2 * xi[0]).cos();
        let seq = fourier_multiplier(&fourier_multiplier(&f, w1), w2);
        let prod = fourier_multiplier(&f, |xi| w1(xi) * w2(xi));
        for (x, y) in seq.values().iter().zip(prod.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn parseval_identity() {
        let grid = Grid::new(2, 2.0, 16).unwrap();
        let f = GridFunction::from_fn(&grid, |x| {
            Complex64::new((x[0] * 1.3).sin(), (x[1] - 0.2).cos())
        })
        .unwrap();
        let space: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.cell_volume();
        let freq = spectral_energy(&f);
        assert!((space - freq).abs() < 1e-10 * (1.0 + space));
    }

    #[test]
    fn real_input_even_window_stays_real() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let f = GridFunction::from_real_fn(&grid, |x| (-(x[0] * x[0])).exp()).unwrap();
        let g = fourier_multiplier(&f, |xi| (-xi[0] * xi[0] / 4.0).exp());
        let imag = g.values().iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
        assert!(imag < 1e-10);
    }
}
