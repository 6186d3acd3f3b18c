//! Spectral representation of scalar and vector fields on the periodic box.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::Scalar;

/// A scalar field stored as Fourier coefficients.
///
/// Normalization: `u(x) = Σ_k û(k) e^{i k·x}`, so the coefficient of the
/// constant field `c` is `c` at `k = 0` and `cos(x1)` has coefficients `1/2`
/// at `k = ±(1,0,0)`. The `real` flag records that the field was produced
/// from real samples (or by reality-preserving operators), which implies
/// conjugate symmetry `û(-k) = conj(û(k))` up to rounding.
#[derive(Clone, Debug)]
pub struct SpectralField<T: Scalar> {
    grid: Grid,
    coeffs: Vec<Complex<T>>,
    real: bool,
}

impl<T: Scalar> SpectralField<T> {
    pub fn zero(grid: Grid) -> Self {
        Self { grid, coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()], real: true }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex<T>>, real: bool) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "coefficient buffer has {} entries, grid {} needs {}",
                coeffs.len(),
                grid,
                grid.len()
            )));
        }
        Ok(Self { grid, coeffs, real })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn claims_real(&self) -> bool {
        self.real
    }

    pub(crate) fn set_real(&mut self, real: bool) {
        self.real = real;
    }

    /// Coefficient at signed mode `k`; `None` if `k` is not representable.
    pub fn mode(&self, k: [i64; 3]) -> Option<Complex<T>> {
        let n = self.grid.n();
        let i1 = Grid::index_of_wavenumber(n[0], k[0])?;
        let i2 = Grid::index_of_wavenumber(n[1], k[1])?;
        let i3 = Grid::index_of_wavenumber(n[2], k[2])?;
        Some(self.coeffs[self.grid.index(i1, i2, i3)])
    }

    /// Set the coefficient at signed mode `k`. Clears the reality flag; use
    /// [`set_mode_pair`](Self::set_mode_pair) to build real fields.
    pub fn set_mode(&mut self, k: [i64; 3], value: Complex<T>) -> Result<()> {
        let idx = self.mode_index(k)?;
        self.coeffs[idx] = value;
        self.real = false;
        Ok(())
    }

    /// Set `û(k) = value` and `û(-k) = conj(value)`, keeping the field real.
    /// `k = -k` (self-conjugate modes) require a real value.
    pub fn set_mode_pair(&mut self, k: [i64; 3], value: Complex<T>) -> Result<()> {
        let idx = self.mode_index(k)?;
        let neg = [-k[0], -k[1], -k[2]];
        match self.mode_index(neg) {
            Ok(nidx) if nidx != idx => {
                self.coeffs[idx] = value;
                self.coeffs[nidx] = value.conj();
            }
            _ => {
                // Self-conjugate (k = 0 or Nyquist per axis): must be real.
                if value.im != T::zero() {
                    return Err(Error::InvalidArgument(format!(
                        "mode {k:?} is self-conjugate; a real field needs a real coefficient"
                    )));
                }
                self.coeffs[idx] = value;
            }
        }
        Ok(())
    }

    fn mode_index(&self, k: [i64; 3]) -> Result<usize> {
        let n = self.grid.n();
        let idx = Grid::index_of_wavenumber(n[0], k[0])
            .zip(Grid::index_of_wavenumber(n[1], k[1]))
            .zip(Grid::index_of_wavenumber(n[2], k[2]))
            .map(|((i1, i2), i3)| self.grid.index(i1, i2, i3));
        idx.ok_or_else(|| Error::InvalidArgument(format!("mode {k:?} outside grid {}", self.grid)))
    }

    /// New field with coefficients `f(k) · û(k)`.
    ///
    /// `preserves_reality` must be set only when `f(-k) = conj(f(k))`, which
    /// holds for all real even multipliers and for `i·k_axis` derivatives.
    pub fn map_modes(
        &self,
        preserves_reality: bool,
        mut f: impl FnMut([i64; 3]) -> Complex<T>,
    ) -> Self {
        let mut out = self.coeffs.clone();
        self.grid.for_each_k(|idx, k| {
            out[idx] = out[idx] * f(k);
        });
        Self { grid: self.grid, coeffs: out, real: self.real && preserves_reality }
    }

    /// New field with coefficients scaled by a real multiplier per mode.
    pub fn scale_modes(&self, mut f: impl FnMut([i64; 3]) -> T) -> Self {
        let mut out = self.coeffs.clone();
        self.grid.for_each_k(|idx, k| {
            let s = f(k);
            out[idx] = Complex::new(out[idx].re * s, out[idx].im * s);
        });
        Self { grid: self.grid, coeffs: out, real: self.real }
    }

    /// Pointwise multiply coefficients by a precomputed real table.
    pub(crate) fn scale_by_table(&self, table: &[T]) -> Self {
        debug_assert_eq!(table.len(), self.coeffs.len());
        let coeffs = self
            .coeffs
            .iter()
            .zip(table)
            .map(|(c, &s)| Complex::new(c.re * s, c.im * s))
            .collect();
        Self { grid: self.grid, coeffs, real: self.real }
    }

    pub fn scaled(&self, s: T) -> Self {
        let coeffs = self.coeffs.iter().map(|c| Complex::new(c.re * s, c.im * s)).collect();
        Self { grid: self.grid, coeffs, real: self.real }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a + *b).collect();
        Ok(Self { grid: self.grid, coeffs, real: self.real && other.real })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a - *b).collect();
        Ok(Self { grid: self.grid, coeffs, real: self.real && other.real })
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = *a + *b;
        }
        self.real = self.real && other.real;
        Ok(())
    }

    /// `(Σ_k |û(k)|²)^{1/2}`; by Parseval this is the root mean square of the
    /// physical samples.
    pub fn l2_norm(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest violation of `û(-k) = conj(û(k))`, absolute. Negation is
    /// modulo the grid: `n/2 ≡ -n/2`, so a Nyquist component is its own
    /// negative and purely-self-conjugate modes must be real.
    pub fn conj_symmetry_defect(&self) -> T {
        let n = self.grid.n();
        let neg_mod = |na: usize, ka: i64| if ka == -((na / 2) as i64) { ka } else { -ka };
        let mut worst = T::zero();
        self.grid.for_each_k(|idx, k| {
            let i1 = Grid::index_of_wavenumber(n[0], neg_mod(n[0], k[0])).expect("aliased");
            let i2 = Grid::index_of_wavenumber(n[1], neg_mod(n[1], k[1])).expect("aliased");
            let i3 = Grid::index_of_wavenumber(n[2], neg_mod(n[2], k[2])).expect("aliased");
            let other = self.coeffs[self.grid.index(i1, i2, i3)];
            let d = (self.coeffs[idx] - other.conj()).norm();
            if d > worst {
                worst = d;
            }
        });
        worst
    }

    pub fn is_conj_symmetric(&self, tol: T) -> bool {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
        self.conj_symmetry_defect() <= tol * T::max(scale, T::one())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// A velocity field: three spectral components plus a divergence-free claim.
#[derive(Clone, Debug)]
pub struct VectorField<T: Scalar> {
    comps: [SpectralField<T>; 3],
    divfree: bool,
}

impl<T: Scalar> VectorField<T> {
    pub fn zero(grid: Grid) -> Self {
        Self {
            comps: [SpectralField::zero(grid), SpectralField::zero(grid), SpectralField::zero(grid)],
            divfree: true,
        }
    }

    pub fn from_components(comps: [SpectralField<T>; 3], divfree: bool) -> Result<Self> {
        comps[0].grid().check_same(&comps[1].grid())?;
        comps[0].grid().check_same(&comps[2].grid())?;
        Ok(Self { comps, divfree })
    }

    pub fn grid(&self) -> Grid {
        self.comps[0].grid()
    }

    pub fn comp(&self, i: usize) -> &SpectralField<T> {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut SpectralField<T> {
        &mut self.comps[i]
    }

    pub fn comps(&self) -> &[SpectralField<T>; 3] {
        &self.comps
    }

    pub fn claims_divfree(&self) -> bool {
        self.divfree
    }

    pub(crate) fn set_divfree(&mut self, divfree: bool) {
        self.divfree = divfree;
    }

    pub fn claims_real(&self) -> bool {
        self.comps.iter().all(|c| c.claims_real())
    }

    /// Apply `f` to each component, keeping the div-free claim only if the
    /// map is a scalar Fourier multiplier (`multiplier = true`).
    pub fn map_components(
        &self,
        multiplier: bool,
        mut f: impl FnMut(&SpectralField<T>) -> SpectralField<T>,
    ) -> Self {
        let comps = [f(&self.comps[0]), f(&self.comps[1]), f(&self.comps[2])];
        Self { comps, divfree: self.divfree && multiplier }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            comps: [
                self.comps[0].add(&other.comps[0])?,
                self.comps[1].add(&other.comps[1])?,
                self.comps[2].add(&other.comps[2])?,
            ],
            divfree: self.divfree && other.divfree,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            comps: [
                self.comps[0].sub(&other.comps[0])?,
                self.comps[1].sub(&other.comps[1])?,
                self.comps[2].sub(&other.comps[2])?,
            ],
            divfree: self.divfree && other.divfree,
        })
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            comps: [self.comps[0].scaled(s), self.comps[1].scaled(s), self.comps[2].scaled(s)],
            divfree: self.divfree,
        }
    }

    pub fn l2_norm(&self) -> T {
        self.comps.iter().map(|c| c.l2_norm().powi(2)).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::cubic(8).unwrap()
    }

    #[test]
    fn mode_accessors_round_trip() {
        let mut u: SpectralField<f64> = SpectralField::zero(grid());
        u.set_mode_pair([1, 0, 2], Complex::new(0.5, -0.25)).unwrap();
        assert_eq!(u.mode([1, 0, 2]).unwrap(), Complex::new(0.5, -0.25));
        assert_eq!(u.mode([-1, 0, -2]).unwrap(), Complex::new(0.5, 0.25));
        assert!(u.claims_real());
        assert!(u.is_conj_symmetric(1e-15));
        assert!(u.mode([5, 0, 0]).is_none());
    }

    #[test]
    fn self_conjugate_mode_must_be_real() {
        let mut u: SpectralField<f64> = SpectralField::zero(grid());
        assert!(u.set_mode_pair([0, 0, 0], Complex::new(0.0, 1.0)).is_err());
        assert!(u.set_mode_pair([-4, 0, 0], Complex::new(2.0, 0.0)).is_ok());
        assert!(u.is_conj_symmetric(1e-15));
    }

    #[test]
    fn l2_norm_sums_mode_energies() {
        let mut u: SpectralField<f64> = SpectralField::zero(grid());
        u.set_mode_pair([1, 0, 0], Complex::new(0.5, 0.0)).unwrap();
        // Two conjugate modes of modulus 1/2 -> norm sqrt(2)/2, i.e. rms of cos(x1).
        assert!((u.l2_norm() - 0.5 * 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a: SpectralField<f64> = SpectralField::zero(grid());
        let b: SpectralField<f64> = SpectralField::zero(Grid::cubic(16).unwrap());
        assert!(a.add(&b).is_err());
    }
}
