//! Uniform grid on the periodic box `[0, 2π)³`.
//!
//! Samples live at `x_i = 2π i / n` per axis. Spectral coefficients use the
//! standard FFT layout per axis: index `i` carries the integer wavenumber
//! `k = i` for `i < n/2` and `k = i - n` otherwise, so `k` ranges over
//! `[-n/2, n/2)`. Storage is row-major with the third axis fastest:
//! `idx = (i1*n2 + i2)*n3 + i3`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Grid {
    n: [usize; 3],
}

impl Grid {
    /// Grid with the given sizes; each must be even and at least 8.
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        let n = [n1, n2, n3];
        if n.iter().any(|&m| m < 8 || m % 2 != 0) {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    pub fn cubic(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    /// Internal constructor for padded work grids; skips the `>= 8 even` check.
    pub(crate) fn unchecked(n: [usize; 3]) -> Self {
        Self { n }
    }

    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    /// Total number of points / coefficients.
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Linear index of `(i1, i2, i3)`; third axis fastest.
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n[1] + i2) * self.n[2] + i3
    }

    /// Signed integer wavenumber carried by index `i` on an axis of size `n`.
    pub fn wavenumber(n: usize, i: usize) -> i64 {
        debug_assert!(i < n);
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Index carrying wavenumber `k` on an axis of size `n`, if representable.
    pub fn index_of_wavenumber(n: usize, k: i64) -> Option<usize> {
        let half = n as i64 / 2;
        if k >= -half && k < half {
            Some(if k >= 0 { k as usize } else { (k + n as i64) as usize })
        } else {
            None
        }
    }

    /// Signed wavenumbers along one axis, in storage order.
    pub fn wavenumbers(&self, axis: usize) -> Vec<i64> {
        let n = self.n[axis];
        (0..n).map(|i| Self::wavenumber(n, i)).collect()
    }

    /// Visit every coefficient as `(linear index, [k1, k2, k3])`.
    pub fn for_each_k(&self, mut f: impl FnMut(usize, [i64; 3])) {
        let [n1, n2, n3] = self.n;
        let mut idx = 0;
        for i1 in 0..n1 {
            let k1 = Self::wavenumber(n1, i1);
            for i2 in 0..n2 {
                let k2 = Self::wavenumber(n2, i2);
                for i3 in 0..n3 {
                    let k3 = Self::wavenumber(n3, i3);
                    f(idx, [k1, k2, k3]);
                    idx += 1;
                }
            }
        }
    }

    /// Largest |k|² over the grid.
    pub fn max_k_squared(&self) -> i64 {
        let h: i64 = self.n.iter().map(|&m| (m as i64 / 2) * (m as i64 / 2)).sum();
        h
    }

    /// Physical coordinate of sample `i` on `axis`.
    pub fn coord<T: Scalar>(&self, axis: usize, i: usize) -> T {
        T::of(2.0) * T::PI() * T::of_i64(i as i64) / T::of_i64(self.n[axis] as i64)
    }

    /// Smallest grid spacing `2π/max(n)`.
    pub fn min_spacing<T: Scalar>(&self) -> T {
        let nmax = *self.n.iter().max().unwrap();
        T::of(2.0) * T::PI() / T::of_i64(nmax as i64)
    }

    /// Quadrature weight of one sample, `(2π)³ / (n1 n2 n3)`.
    pub fn cell_volume<T: Scalar>(&self) -> T {
        let v = T::of(2.0) * T::PI();
        v * v * v / T::of_i64(self.len() as i64)
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch { expected: self.n, got: other.n })
        }
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.n[0], self.n[1], self.n[2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_tiny_axes() {
        assert!(Grid::new(8, 8, 8).is_ok());
        assert!(Grid::new(7, 8, 8).is_err());
        assert!(Grid::new(8, 9, 8).is_err());
        assert!(Grid::new(8, 8, 6).is_err());
    }

    #[test]
    fn wavenumber_layout_matches_fft_convention() {
        // n = 8: indices 0..8 carry k = 0,1,2,3,-4,-3,-2,-1.
        let ks: Vec<i64> = (0..8).map(|i| Grid::wavenumber(8, i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for i in 0..8 {
            let k = Grid::wavenumber(8, i);
            assert_eq!(Grid::index_of_wavenumber(8, k), Some(i));
        }
        assert_eq!(Grid::index_of_wavenumber(8, 4), None);
        assert_eq!(Grid::index_of_wavenumber(8, -5), None);
    }

    #[test]
    fn linear_index_is_k3_fastest() {
        let g = Grid::new(8, 10, 12).unwrap();
        assert_eq!(g.index(0, 0, 1), 1);
        assert_eq!(g.index(0, 1, 0), 12);
        assert_eq!(g.index(1, 0, 0), 120);
        let mut seen = 0usize;
        g.for_each_k(|idx, _| {
            assert_eq!(idx, seen);
            seen += 1;
        });
        assert_eq!(seen, g.len());
    }

    #[test]
    fn coords_and_volume() {
        let g = Grid::cubic(8).unwrap();
        let x: f64 = g.coord(0, 2);
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let v: f64 = g.cell_volume();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((v - two_pi.powi(3) / 512.0).abs() < 1e-15);
    }
}
