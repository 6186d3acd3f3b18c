//! Closed-form reference flows used as initial data and solver oracles.

use num_complex::Complex;

use crate::field::{SpectralField, VectorField};
use crate::grid::Grid;
use crate::norms::{self, NormSpec};
use crate::scalar::Scalar;
use crate::transform;

/// Taylor-Green vortex
/// `(sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)`:
/// divergence-free with fully three-dimensional dependence, the classical
/// nonlinear test flow.
pub fn taylor_green<T: Scalar>(grid: Grid, amplitude: f64) -> VectorField<T> {
    let a = T::of(amplitude);
    let u1 = transform::project(grid, |x1: T, x2: T, x3: T| a * x1.sin() * x2.cos() * x3.cos());
    let u2 = transform::project(grid, |x1: T, x2: T, x3: T| -a * x1.cos() * x2.sin() * x3.cos());
    let u3 = SpectralField::zero(grid);
    let mut out = VectorField::from_components([u1, u2, u3], false).expect("same grid");
    out.set_divfree(true);
    out
}

/// Parallel shear `(0, a sin x1, 0)`: a steady solution of the unforced
/// inviscid equations — the transport term vanishes identically, so any
/// correct nonlinear discretization must keep it stationary to rounding
/// (up to the exact viscous decay of the `|k| = 1` mode).
pub fn shear<T: Scalar>(grid: Grid, amplitude: f64) -> VectorField<T> {
    let a = T::of(amplitude);
    let u2 = transform::project(grid, |x1: T, _, _| a * x1.sin());
    let mut out = VectorField::from_components(
        [SpectralField::zero(grid), u2, SpectralField::zero(grid)],
        false,
    )
    .expect("same grid");
    out.set_divfree(true);
    out
}

/// A single-mode divergence-free field: `u(x) = 2 a d cos(k·x)` with `d ⊥ k`
/// chosen deterministically. Its exact evolution under pure anisotropic
/// diffusion is `e^{-(ν_h |k_h|² + ν_v k3²) t}` times itself.
pub fn single_mode<T: Scalar>(grid: Grid, k: [i64; 3], amplitude: f64) -> VectorField<T> {
    assert!(k != [0, 0, 0], "single_mode needs a nonzero wavenumber");
    // Deterministic unit vector orthogonal to k: cross k with the axis least
    // aligned with it.
    let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
    let pick = if k[0].abs() <= k[1].abs() && k[0].abs() <= k[2].abs() {
        [1.0, 0.0, 0.0]
    } else if k[1].abs() <= k[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let d = [
        kf[1] * pick[2] - kf[2] * pick[1],
        kf[2] * pick[0] - kf[0] * pick[2],
        kf[0] * pick[1] - kf[1] * pick[0],
    ];
    let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    let mut comps = [
        SpectralField::zero(grid),
        SpectralField::zero(grid),
        SpectralField::zero(grid),
    ];
    for c in 0..3 {
        let coeff = amplitude * d[c] / dn;
        if coeff != 0.0 {
            comps[c]
                .set_mode_pair(k, Complex::new(T::of(coeff), T::zero()))
                .expect("representable mode");
        }
    }
    let mut out = VectorField::from_components(comps, false).expect("same grid");
    out.set_divfree(true);
    out
}

/// Spatially uniform velocity (pure mean flow).
pub fn uniform<T: Scalar>(grid: Grid, v: [f64; 3]) -> VectorField<T> {
    let mut out = VectorField::zero(grid);
    for c in 0..3 {
        if v[c] != 0.0 {
            out.comp_mut(c)
                .set_mode_pair([0, 0, 0], Complex::new(T::of(v[c]), T::zero()))
                .expect("mean mode");
        }
    }
    out
}

/// Rescale a field to a prescribed `H^{0,s}` norm (no-op on the zero field).
pub fn scale_to_h0s<T: Scalar>(u: &VectorField<T>, s: f64, target: f64) -> VectorField<T> {
    let current = norms::vec_norm_aniso(u, NormSpec::vertical(s));
    if current == T::zero() {
        return u.clone();
    }
    u.scaled(T::of(target) / current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{divergence, leray_project};

    #[test]
    fn reference_flows_are_divergence_free() {
        let grid = Grid::cubic(16).unwrap();
        for u in [
            taylor_green::<f64>(grid, 1.3),
            shear::<f64>(grid, 0.8),
            single_mode::<f64>(grid, [2, -1, 3], 0.5),
            uniform::<f64>(grid, [1.0, -2.0, 0.5]),
        ] {
            assert!(divergence(&u).l2_norm() <= 1e-13 * u.l2_norm().max(1.0));
            assert!(leray_project(&u).sub(&u).unwrap().l2_norm() <= 1e-13 * u.l2_norm().max(1.0));
            assert!(u.claims_real());
        }
    }

    #[test]
    fn taylor_green_samples_match_the_formula() {
        let grid = Grid::cubic(8).unwrap();
        let u = taylor_green::<f64>(grid, 2.0);
        let phys = transform::inverse_real(u.comp(0));
        let x1 = grid.coord::<f64>(0, 3);
        let x2 = grid.coord::<f64>(1, 1);
        let x3 = grid.coord::<f64>(2, 5);
        let want = 2.0 * x1.sin() * x2.cos() * x3.cos();
        assert!((phys[grid.index(3, 1, 5)] - want).abs() <= 1e-13);
    }

    #[test]
    fn single_mode_is_orthogonal_to_its_wavenumber() {
        let grid = Grid::cubic(16).unwrap();
        for k in [[1i64, 0, 0], [0, 0, 3], [2, -5, 1], [0, 4, 4]] {
            let u = single_mode::<f64>(grid, k, 1.0);
            let dot: f64 = (0..3)
                .map(|c| u.comp(c).mode(k).unwrap().re * k[c] as f64)
                .sum();
            assert!(dot.abs() <= 1e-14);
            assert!(u.l2_norm() > 0.0);
        }
    }

    #[test]
    fn scaling_hits_the_norm_target() {
        let grid = Grid::cubic(8).unwrap();
        let u = taylor_green::<f64>(grid, 3.7);
        let s = 2.0;
        let v = scale_to_h0s(&u, s, 0.25);
        let got = norms::vec_norm_aniso(&v, NormSpec::vertical(s));
        assert!((got - 0.25).abs() <= 1e-13);
    }
}
