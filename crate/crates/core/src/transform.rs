//! Forward/inverse transforms between physical samples and coefficients.
//!
//! Conventions (fixed for the whole crate):
//!
//! * forward: `û(k) = (1/(n1 n2 n3)) Σ_x u(x) e^{-i k·x}` — the constant
//!   field `c` transforms to `c` at `k = 0`, `cos(x1)` to `1/2` at `±(1,0,0)`;
//! * inverse: `u(x) = Σ_k û(k) e^{i k·x}` — plain synthesis, no scaling;
//! * Parseval: `Σ_x |u(x)|² / (n1 n2 n3) = Σ_k |û(k)|²`.
//!
//! # Example
//! ```
//! use alp_core::{Grid, transform};
//! let grid = Grid::cubic(8).unwrap();
//! let samples: Vec<f64> = (0..grid.len()).map(|_| 1.0).collect();
//! let u = transform::forward(grid, &samples).unwrap();
//! assert!((u.mode([0, 0, 0]).unwrap().re - 1.0).abs() < 1e-15);
//! ```

use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::scalar::Scalar;

/// In-place 3-D FFT over a k3-fastest buffer, one axis at a time.
pub(crate) fn fft3<T: Scalar>(data: &mut [Complex<T>], n: [usize; 3], dir: FftDirection) {
    for axis in 0..3 {
        fft_axis(data, n, axis, dir);
    }
}

fn fft_axis<T: Scalar>(data: &mut [Complex<T>], n: [usize; 3], axis: usize, dir: FftDirection) {
    let len = n[axis];
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft(len, dir);
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    match axis {
        2 => {
            for chunk in data.chunks_exact_mut(len) {
                fft.process_with_scratch(chunk, &mut scratch);
            }
        }
        1 => {
            let mut row = vec![Complex::new(T::zero(), T::zero()); len];
            for i1 in 0..n[0] {
                for i3 in 0..n[2] {
                    let base = i1 * n[1] * n[2] + i3;
                    for (j, slot) in row.iter_mut().enumerate() {
                        *slot = data[base + j * n[2]];
                    }
                    fft.process_with_scratch(&mut row, &mut scratch);
                    for (j, slot) in row.iter().enumerate() {
                        data[base + j * n[2]] = *slot;
                    }
                }
            }
        }
        _ => {
            let stride = n[1] * n[2];
            let mut row = vec![Complex::new(T::zero(), T::zero()); len];
            for rest in 0..stride {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = data[rest + j * stride];
                }
                fft.process_with_scratch(&mut row, &mut scratch);
                for (j, slot) in row.iter().enumerate() {
                    data[rest + j * stride] = *slot;
                }
            }
        }
    }
}

/// Transform real physical samples (k3 fastest) to coefficients.
pub fn forward<T: Scalar>(grid: Grid, samples: &[T]) -> Result<SpectralField<T>> {
    if samples.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "sample buffer has {} entries, grid {} needs {}",
            samples.len(),
            grid,
            grid.len()
        )));
    }
    let buf: Vec<Complex<T>> = samples.iter().map(|&s| Complex::new(s, T::zero())).collect();
    forward_complex(grid, buf, true)
}

/// Transform complex physical samples to coefficients. `real` marks the
/// result as conjugate-symmetric (caller's claim about the samples).
pub fn forward_complex<T: Scalar>(
    grid: Grid,
    mut buf: Vec<Complex<T>>,
    real: bool,
) -> Result<SpectralField<T>> {
    if buf.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "sample buffer has {} entries, grid {} needs {}",
            buf.len(),
            grid,
            grid.len()
        )));
    }
    fft3(&mut buf, grid.n(), FftDirection::Forward);
    let scale = T::one() / T::of_i64(grid.len() as i64);
    for c in &mut buf {
        *c = Complex::new(c.re * scale, c.im * scale);
    }
    SpectralField::from_coeffs(grid, buf, real)
}

/// Synthesize complex physical samples from coefficients.
pub fn inverse<T: Scalar>(field: &SpectralField<T>) -> Vec<Complex<T>> {
    let mut buf = field.coeffs().to_vec();
    fft3(&mut buf, field.grid().n(), FftDirection::Inverse);
    buf
}

/// Synthesize real physical samples; imaginary parts are dropped.
///
/// Meaningful for conjugate-symmetric fields, where the imaginary residue is
/// rounding noise.
pub fn inverse_real<T: Scalar>(field: &SpectralField<T>) -> Vec<T> {
    inverse(field).into_iter().map(|c| c.re).collect()
}

/// Evaluate `f(x1, x2, x3)` on the grid and transform it.
pub fn project<T: Scalar>(grid: Grid, mut f: impl FnMut(T, T, T) -> T) -> SpectralField<T> {
    let [n1, n2, n3] = grid.n();
    let mut samples = Vec::with_capacity(grid.len());
    for i1 in 0..n1 {
        let x1 = grid.coord(0, i1);
        for i2 in 0..n2 {
            let x2 = grid.coord(1, i2);
            for i3 in 0..n3 {
                let x3 = grid.coord(2, i3);
                samples.push(f(x1, x2, x3));
            }
        }
    }
    forward(grid, &samples).expect("buffer sized by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_transforms_to_delta_at_zero() {
        let grid = Grid::cubic(8).unwrap();
        let samples = vec![3.25_f64; grid.len()];
        let u = forward(grid, &samples).unwrap();
        assert!((u.mode([0, 0, 0]).unwrap().re - 3.25).abs() < 1e-14);
        let off: f64 = u
            .coeffs()
            .iter()
            .skip(1)
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(off < 1e-14);
    }

    #[test]
    fn cosine_transforms_to_half_at_plus_minus_one() {
        let grid = Grid::cubic(8).unwrap();
        let u = project(grid, |x1: f64, _, _| x1.cos());
        let p = u.mode([1, 0, 0]).unwrap();
        let m = u.mode([-1, 0, 0]).unwrap();
        assert!((p.re - 0.5).abs() < 1e-14 && p.im.abs() < 1e-14);
        assert!((m.re - 0.5).abs() < 1e-14 && m.im.abs() < 1e-14);
    }

    #[test]
    fn inverse_of_single_mode_is_cosine() {
        let grid = Grid::cubic(8).unwrap();
        let mut u: SpectralField<f64> = SpectralField::zero(grid);
        u.set_mode_pair([0, 0, 1], num_complex::Complex::new(0.5, 0.0)).unwrap();
        let samples = inverse_real(&u);
        let [n1, n2, n3] = grid.n();
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                for i3 in 0..n3 {
                    let x3: f64 = grid.coord(2, i3);
                    let got = samples[grid.index(i1, i2, i3)];
                    assert!((got - x3.cos()).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn round_trip_on_random_samples() {
        let grid = Grid::new(16, 8, 12).unwrap();
        // Deterministic pseudo-random samples, no RNG dependency here.
        let samples: Vec<f64> = (0..grid.len())
            .map(|i| ((i as f64 * 12.9898).sin() * 43758.5453).fract())
            .collect();
        let u = forward(grid, &samples).unwrap();
        let back = inverse_real(&u);
        let scale: f64 = samples.iter().map(|s| s.abs()).fold(0.0, f64::max);
        let err = samples
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12 * scale.max(1.0), "round-trip error {err}");
    }

    #[test]
    fn parseval_identity_holds() {
        let grid = Grid::cubic(8).unwrap();
        let samples: Vec<f64> = (0..grid.len())
            .map(|i| (0.3 + i as f64 * 0.7134).sin())
            .collect();
        let u = forward(grid, &samples).unwrap();
        let lhs: f64 = samples.iter().map(|s| s * s).sum::<f64>() / grid.len() as f64;
        let rhs: f64 = u.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-13 * lhs.max(1.0));
    }

    #[test]
    fn forward_marks_reality_and_it_checks_out() {
        let grid = Grid::cubic(8).unwrap();
        let u = project(grid, |x1: f64, x2: f64, x3: f64| (x1 + 2.0 * x2).sin() + (3.0 * x3).cos());
        assert!(u.claims_real());
        assert!(u.is_conj_symmetric(1e-13));
    }
}
