//! Alias-free pointwise products via 3/2-rule zero padding.
//!
//! A product of two fields with modes `|k_axis| <= n/2` has true modes up to
//! `n`, which the original grid cannot hold; evaluating the product on the
//! same grid folds those modes back (aliasing). Padding each axis to
//! `m = 3n/2` before multiplying makes every retained mode `|k_axis| <= n/2 - 1`
//! exact: a fold-back from the padded transform lands at `c - m`, and with
//! `|c| <= n` that image has `|c - m| >= n/2`, i.e. only the retained Nyquist
//! plane `-n/2` can be polluted — so restriction clears it.

use num_complex::Complex;

use crate::error::Result;
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::scalar::Scalar;
use crate::transform;

/// Padded length for alias-free quadratic products.
pub fn pad_size(n: usize) -> usize {
    3 * n / 2
}

/// Padded companion grid (`3n/2` per axis).
pub fn padded_grid(grid: Grid) -> Grid {
    let n = grid.n();
    Grid::unchecked([pad_size(n[0]), pad_size(n[1]), pad_size(n[2])])
}

/// Copy modes into the larger grid, preserving signed wavenumbers. The
/// original Nyquist planes are representable on the padded grid and copied
/// as-is (`k = -n/2` stays `-n/2`).
pub fn embed<T: Scalar>(u: &SpectralField<T>, big: Grid) -> SpectralField<T> {
    let small = u.grid();
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); big.len()];
    small.for_each_k(|idx, k| {
        let i1 = Grid::index_of_wavenumber(big.n()[0], k[0]).expect("padded grid holds k");
        let i2 = Grid::index_of_wavenumber(big.n()[1], k[1]).expect("padded grid holds k");
        let i3 = Grid::index_of_wavenumber(big.n()[2], k[2]).expect("padded grid holds k");
        coeffs[big.index(i1, i2, i3)] = u.coeffs()[idx];
    });
    let mut out = SpectralField::from_coeffs(big, coeffs, false).expect("sized buffer");
    out.set_real(u.claims_real());
    out
}

/// Keep modes representable on the smaller grid, zeroing its Nyquist planes
/// (the only retained modes an alias image can reach).
pub fn restrict<T: Scalar>(u: &SpectralField<T>, small: Grid) -> SpectralField<T> {
    let big = u.grid();
    let n = small.n();
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); small.len()];
    small.for_each_k(|idx, k| {
        if k[0] == -((n[0] / 2) as i64)
            || k[1] == -((n[1] / 2) as i64)
            || k[2] == -((n[2] / 2) as i64)
        {
            return;
        }
        let i1 = Grid::index_of_wavenumber(big.n()[0], k[0]).expect("bigger grid holds k");
        let i2 = Grid::index_of_wavenumber(big.n()[1], k[1]).expect("bigger grid holds k");
        let i3 = Grid::index_of_wavenumber(big.n()[2], k[2]).expect("bigger grid holds k");
        coeffs[idx] = u.coeffs()[big.index(i1, i2, i3)];
    });
    let mut out = SpectralField::from_coeffs(small, coeffs, false).expect("sized buffer");
    out.set_real(u.claims_real());
    out
}

/// Physical samples of `u` on its padded grid.
pub fn to_padded_physical<T: Scalar>(u: &SpectralField<T>) -> (Grid, Vec<Complex<T>>) {
    let big = padded_grid(u.grid());
    let padded = embed(u, big);
    (big, transform::inverse(&padded))
}

/// Transform padded physical samples back and restrict to the original grid.
pub fn from_padded_physical<T: Scalar>(
    small: Grid,
    big: Grid,
    samples: Vec<Complex<T>>,
    real: bool,
) -> Result<SpectralField<T>> {
    let spec = transform::forward_complex(big, samples, real)?;
    Ok(restrict(&spec, small))
}

/// Alias-free product `uv` of two fields on the same grid.
pub fn product<T: Scalar>(u: &SpectralField<T>, v: &SpectralField<T>) -> Result<SpectralField<T>> {
    u.grid().check_same(&v.grid())?;
    let (big, mut a) = to_padded_physical(u);
    let (_, b) = to_padded_physical(v);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = *x * *y;
    }
    from_padded_physical(u.grid(), big, a, u.claims_real() && v.claims_real())
}
