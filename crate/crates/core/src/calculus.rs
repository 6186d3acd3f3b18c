//! Spectral differential operators: derivatives, gradients, divergence, and
//! the Leray projection onto divergence-free fields.
//!
//! Derivatives act as the multiplier `i·k_axis`, with the unpaired Nyquist
//! mode zeroed: on an even grid the `k = n/2` plane has no conjugate partner,
//! and `i·(n/2)` times a real coefficient would break conjugate symmetry.
//! Zeroing it keeps every derivative of a real field real and matches the
//! standard symmetric choice for the trigonometric interpolant.

use num_complex::Complex;

use crate::field::{SpectralField, VectorField};
use crate::scalar::Scalar;

/// `∂_axis u` as a Fourier multiplier (`axis ∈ {0, 1, 2}` for `x1, x2, x3`).
pub fn derivative<T: Scalar>(u: &SpectralField<T>, axis: usize) -> SpectralField<T> {
    assert!(axis < 3);
    let n_axis = u.grid().n()[axis];
    let nyquist = (n_axis / 2) as i64;
    u.map_modes(true, |k| {
        let ka = k[axis];
        if ka == -nyquist {
            Complex::new(T::zero(), T::zero())
        } else {
            Complex::new(T::zero(), T::of_i64(ka))
        }
    })
}

/// `(∂_1 u, ∂_2 u)`.
pub fn horizontal_gradient<T: Scalar>(u: &SpectralField<T>) -> [SpectralField<T>; 2] {
    [derivative(u, 0), derivative(u, 1)]
}

/// `Δ_h u = (∂_1² + ∂_2²) u`, multiplier `-(k1² + k2²)`.
pub fn horizontal_laplacian<T: Scalar>(u: &SpectralField<T>) -> SpectralField<T> {
    u.scale_modes(|k| -T::of_i64(k[0] * k[0] + k[1] * k[1]))
}

/// `div u = ∂_1 u_1 + ∂_2 u_2 + ∂_3 u_3`.
pub fn divergence<T: Scalar>(u: &VectorField<T>) -> SpectralField<T> {
    let mut d = derivative(u.comp(0), 0);
    d.add_assign(&derivative(u.comp(1), 1)).expect("same grid");
    d.add_assign(&derivative(u.comp(2), 2)).expect("same grid");
    d
}

/// Leray projection `P u = u - ∇Δ^{-1} div u`: per mode, subtract the
/// component of `û(k)` along `k`. The mean (`k = 0`) passes through
/// unchanged. Idempotent and norm-nonincreasing mode by mode.
///
/// Uses the same effective wavenumber as [`derivative`] (unpaired Nyquist
/// components treated as zero), so `div(P u) = 0` holds exactly for the
/// discrete operators.
pub fn leray_project<T: Scalar>(u: &VectorField<T>) -> VectorField<T> {
    let grid = u.grid();
    let nyq = [
        (grid.n()[0] / 2) as i64,
        (grid.n()[1] / 2) as i64,
        (grid.n()[2] / 2) as i64,
    ];
    let mut comps =
        [u.comp(0).coeffs().to_vec(), u.comp(1).coeffs().to_vec(), u.comp(2).coeffs().to_vec()];
    grid.for_each_k(|idx, k| {
        let k = [
            if k[0] == -nyq[0] { 0 } else { k[0] },
            if k[1] == -nyq[1] { 0 } else { k[1] },
            if k[2] == -nyq[2] { 0 } else { k[2] },
        ];
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0 {
            return;
        }
        let kt = [T::of_i64(k[0]), T::of_i64(k[1]), T::of_i64(k[2])];
        let dot = comps[0][idx].scale(kt[0]) + comps[1][idx].scale(kt[1]) + comps[2][idx].scale(kt[2]);
        let dot = dot.scale(T::of_i64(k2).recip());
        for (axis, comp) in comps.iter_mut().enumerate() {
            comp[idx] = comp[idx] - dot.scale(kt[axis]);
        }
    });
    let real = u.claims_real();
    let fields = comps.map(|c| {
        let mut f = SpectralField::from_coeffs(grid, c, false).expect("sized buffer");
        f.set_real(real);
        f
    });
    let mut out = VectorField::from_components(fields, false).expect("same grid");
    out.set_divfree(true);
    out
}
