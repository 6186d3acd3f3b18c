//! Smooth dyadic filter bank: isotropic and vertical frequency blocks,
//! low-pass operators, and frequency localization in `(x2, x3)`.
//!
//! The radial profile is built from the classical `e^{-1/x}` bump:
//! `η(r) = ψ(2-r) / (ψ(2-r) + ψ(r-1))` with `ψ(x) = e^{-1/x}` for `x > 0`,
//! so `η = 1` on `[0,1]`, `η = 0` on `[2,∞)`, smooth and monotone between.
//! The cutoffs are `χ = η` and `φ(r) = η(r/2) - η(r)`, giving
//! `supp φ = (1, 4)`, `φ(2) = 1`, and the exact telescoping
//! `χ(r) + Σ_{j≥0} φ(2^{-j} r) = 1` (exact even in floating point, because
//! scaling by powers of two is exact and the partial sums collapse to a
//! single `η` evaluation).
//!
//! Block indices: `Δ_{-1}` is the `χ` low block, `Δ_j` for `j ≥ 0` carries
//! the multiplier `φ(2^{-j}·)`; blocks outside `[-1, jmax]` are zero.
//!
//! # Example
//! ```
//! use alp_core::{Grid, filter::FilterBank, transform};
//! let grid = Grid::cubic(16).unwrap();
//! let bank: FilterBank<f64> = FilterBank::new(grid);
//! assert_eq!(bank.n0(), 2);
//! let u = transform::project(grid, |x1: f64, _, _| (2.0 * x1).cos());
//! // |k| = 2 sits at the peak of block 0: φ(2) = 1 reproduces the mode.
//! let b = bank.block_iso(&u, 0);
//! assert!((b.mode([2, 0, 0]).unwrap().re - 0.5).abs() < 1e-14);
//! ```

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::scalar::Scalar;

/// The `e^{-1/x}` bump, zero for `x <= 0`.
fn bump<T: Scalar>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        (-x.recip()).exp()
    }
}

/// Smooth step: exactly 1 on `r <= 1`, exactly 0 on `r >= 2`, monotone.
pub fn eta<T: Scalar>(r: T) -> T {
    let one = T::one();
    let two = T::of(2.0);
    if r <= one {
        one
    } else if r >= two {
        T::zero()
    } else {
        let a = bump(two - r);
        a / (a + bump(r - one))
    }
}

/// Low cutoff `χ = η`.
pub fn chi<T: Scalar>(r: T) -> T {
    eta(r)
}

/// Ring cutoff `φ(r) = η(r/2) - η(r)`; support `(1, 4)`, `φ(2) = 1`.
pub fn phi<T: Scalar>(r: T) -> T {
    eta(r / T::of(2.0)) - eta(r)
}

/// Wide cutoff `χ̃(r) = η(r/2)`: equals 1 on the support of `χ`.
pub fn chi_wide<T: Scalar>(r: T) -> T {
    eta(r / T::of(2.0))
}

/// Dyadic filter bank bound to a grid, with tabulated block multipliers.
pub struct FilterBank<T: Scalar> {
    grid: Grid,
    n0: i32,
    jmax_iso: i32,
    jmax_vert: i32,
    para_window: i32,
    remainder_reach: i32,
    /// `iso_tables[j + 1]` is the multiplier of isotropic block `j`.
    iso_tables: Vec<Vec<T>>,
    /// `vert_tables[q + 1]` is the 1-D (in `k3`) multiplier of vertical block `q`.
    vert_tables: Vec<Vec<T>>,
}

impl<T: Scalar> FilterBank<T> {
    /// Build the bank for a grid. Panics if the realized profiles fail their
    /// construction checks (partition of unity, nonnegativity) — that would
    /// be a programming error, not a data error.
    pub fn new(grid: Grid) -> Self {
        let max_k2 = grid.max_k_squared();
        let rmax = (max_k2 as f64).sqrt();
        let jmax_iso = rmax.log2().ceil() as i32;
        let k3max = (grid.n()[2] / 2) as f64;
        let jmax_vert = k3max.log2().ceil() as i32;

        let mut iso_tables = Vec::with_capacity((jmax_iso + 2) as usize);
        for j in -1..=jmax_iso {
            let mut table = vec![T::zero(); grid.len()];
            grid.for_each_k(|idx, k| {
                let r = T::of_i64(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                table[idx] = if j < 0 { chi(r) } else { phi(r / T::of_i64(1 << j)) };
            });
            iso_tables.push(table);
        }

        let n3 = grid.n()[2];
        let mut vert_tables = Vec::with_capacity((jmax_vert + 2) as usize);
        for q in -1..=jmax_vert {
            let table: Vec<T> = (0..n3)
                .map(|i3| {
                    let r = T::of_i64(Grid::wavenumber(n3, i3).abs());
                    if q < 0 {
                        chi(r)
                    } else {
                        phi(r / T::of_i64(1 << q))
                    }
                })
                .collect();
            vert_tables.push(table);
        }

        let n0 = compute_n0::<T>(jmax_iso.max(jmax_vert));
        let (para_window, remainder_reach) = compute_product_windows::<T>(jmax_vert);

        let bank = Self {
            grid,
            n0,
            jmax_iso,
            jmax_vert,
            para_window,
            remainder_reach,
            iso_tables,
            vert_tables,
        };
        bank.verify_construction();
        bank
    }

    fn verify_construction(&self) {
        let tol = T::of(1e-13);
        // Partition of unity over every grid wavenumber, both banks.
        for idx in 0..self.grid.len() {
            let mut s = T::zero();
            for table in &self.iso_tables {
                let v = table[idx];
                assert!(v >= T::zero() && v <= T::one() + tol, "cutoff out of range");
                s = s + v;
            }
            assert!((s - T::one()).abs() <= tol, "isotropic partition defect {}", s - T::one());
        }
        for i3 in 0..self.grid.n()[2] {
            let mut s = T::zero();
            for table in &self.vert_tables {
                s = s + table[i3];
            }
            assert!((s - T::one()).abs() <= tol, "vertical partition defect {}", s - T::one());
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Smallest separation with disjoint ring supports:
    /// `supp φ(2^{-j}·) ∩ supp φ(2^{-j'}·) = ∅` whenever `|j - j'| >= n0`.
    pub fn n0(&self) -> i32 {
        self.n0
    }

    pub fn jmax_iso(&self) -> i32 {
        self.jmax_iso
    }

    pub fn jmax_vert(&self) -> i32 {
        self.jmax_vert
    }

    /// `Δ_q(S_{q'-1}u · Δ_{q'}v) = 0` whenever `q >= q' + para_window`
    /// (alias-free products). The supports of `χ` and `φ` touch, so no such
    /// identity holds in the opposite direction; see `paraproduct`.
    pub fn para_window(&self) -> i32 {
        self.para_window
    }

    /// `Δ_q(Δ_{q'}u · Δ_{q''}v) = 0` for `|q'' - q'| <= 1` whenever
    /// `q' <= q - remainder_reach` (alias-free products).
    pub fn remainder_reach(&self) -> i32 {
        self.remainder_reach
    }

    /// Isotropic block `Δ_j u`; zero outside `j ∈ [-1, jmax_iso]`.
    pub fn block_iso(&self, u: &SpectralField<T>, j: i32) -> SpectralField<T> {
        assert_eq!(u.grid(), self.grid, "field grid differs from bank grid");
        if j < -1 || j > self.jmax_iso {
            return SpectralField::zero(self.grid);
        }
        u.scale_by_table(&self.iso_tables[(j + 1) as usize])
    }

    /// Vertical block `Δ_q^v u` (multiplier in `|k3|` only); zero outside
    /// `q ∈ [-1, jmax_vert]`.
    pub fn block_vert(&self, u: &SpectralField<T>, q: i32) -> SpectralField<T> {
        assert_eq!(u.grid(), self.grid, "field grid differs from bank grid");
        if q < -1 || q > self.jmax_vert {
            return SpectralField::zero(self.grid);
        }
        let table = &self.vert_tables[(q + 1) as usize];
        let n3 = self.grid.n()[2];
        let mut out = u.clone();
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            let s = table[i % n3];
            *c = num_complex::Complex::new(c.re * s, c.im * s);
        }
        out
    }

    /// Isotropic low pass `S_N u`: multiplier `χ(2^{-N}|k|)` for any `N`.
    pub fn low_pass_iso(&self, u: &SpectralField<T>, n: i32) -> SpectralField<T> {
        assert_eq!(u.grid(), self.grid, "field grid differs from bank grid");
        let scale = T::of(2.0).powi(-n);
        u.scale_modes(|k| {
            let r = T::of_i64(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            chi(r * scale)
        })
    }

    /// Vertical low pass `S_q^v u = Σ_{q' <= q-1} Δ_{q'}^v u`.
    ///
    /// The block sum telescopes to the single multiplier `η(2^{-q}|k3|)` for
    /// `q >= 0`; for `q <= -1` the sum is empty, hence zero.
    pub fn low_pass_vert(&self, u: &SpectralField<T>, q: i32) -> SpectralField<T> {
        assert_eq!(u.grid(), self.grid, "field grid differs from bank grid");
        if q < 0 {
            return SpectralField::zero(self.grid);
        }
        let scale = T::of(2.0).powi(-q);
        u.scale_modes(|k| eta(T::of_i64(k[2].abs()) * scale))
    }

    /// Isotropic cumulative low pass `Σ_{j <= n-1} Δ_j u` (paraproduct
    /// convention: empty, hence zero, for `n <= 0`).
    pub fn low_pass_iso_cumulative(&self, u: &SpectralField<T>, n: i32) -> SpectralField<T> {
        assert_eq!(u.grid(), self.grid, "field grid differs from bank grid");
        if n < 0 {
            return SpectralField::zero(self.grid);
        }
        let scale = T::of(2.0).powi(-n);
        u.scale_modes(|k| {
            let r = T::of_i64(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
            eta(r * scale)
        })
    }

    /// Low pass in the `(ξ2, ξ3)` plane: multiplier `χ̃(2^{-N}|(k2,k3)|)`
    /// with `χ̃ = η(·/2)`, so it equals 1 on the support of `χ(2^{-N}|k|)`.
    pub fn low_pass_x2x3(&self, u: &SpectralField<T>, n: i32) -> SpectralField<T> {
        assert_eq!(u.grid(), self.grid, "field grid differs from bank grid");
        let scale = T::of(2.0).powi(-n);
        u.scale_modes(|k| {
            let r = T::of_i64(k[1] * k[1] + k[2] * k[2]).sqrt();
            chi_wide(r * scale)
        })
    }
}

/// Scan ring supports on a dense log grid for the smallest disjoint separation.
fn compute_n0<T: Scalar>(jmax: i32) -> i32 {
    let samples = 4096;
    let rtop = 2.0f64.powi(jmax + 3);
    let rs: Vec<f64> = (0..samples)
        .map(|i| (i as f64 / samples as f64) * rtop.ln())
        .map(f64::exp)
        .collect();
    'sep: for d in 1..=8 {
        for j in 0..=jmax {
            let sj = 2.0f64.powi(-j);
            let sk = 2.0f64.powi(-(j + d));
            for &r in &rs {
                let a: T = phi(T::of(r * sj));
                let b: T = phi(T::of(r * sk));
                if a > T::zero() && b > T::zero() {
                    continue 'sep;
                }
            }
        }
        return d;
    }
    panic!("ring supports never became disjoint; cutoff construction broken");
}

/// Derive from the realized supports, on integer wavenumbers:
/// * `para_window`: smallest `w` with `Δ_q(S_{q'-1}u Δ_{q'}v) = 0` for all
///   `q >= q' + w` (the product spectrum is capped by the support radii);
/// * `remainder_reach`: smallest `w` with `Δ_q(Δ_{q'}u Δ_{q''}v) = 0` for
///   `|q'' - q'| <= 1` and all `q' <= q - w`.
fn compute_product_windows<T: Scalar>(jmax: i32) -> (i32, i32) {
    // Largest integer wavenumber kept by the low pass S_{q'-1} (exclusive
    // support edge) resp. by ring q'.
    let low_max = |q: i32| -> i64 {
        let mut best = 0;
        let top = 1i64 << (q + 3).max(3);
        for a in 0..=top {
            if eta(T::of_i64(a) * T::of(2.0).powi(-(q - 1))) > T::zero() {
                best = a;
            }
        }
        best
    };
    let ring_max = |q: i32| -> i64 {
        let mut best = 0;
        let top = 1i64 << (q + 4).max(4);
        for b in 0..=top {
            if phi(T::of_i64(b) * T::of(2.0).powi(-q)) > T::zero() {
                best = b;
            }
        }
        best
    };
    // Block q only sees |k| > 2^q, so the product vanishes under Δ_q as soon
    // as 2^q >= (max frequency of the product).
    let mut para = 1;
    let mut reach = 1;
    for q in 0..=jmax {
        let cap_para = low_max(q) + ring_max(q);
        let cap_rem = ring_max(q) + ring_max(q + 1);
        let mut w = 1;
        while (1i64 << (q + w)) < cap_para {
            w += 1;
        }
        para = para.max(w);
        let mut w = 1;
        while (1i64 << (q + w)) < cap_rem {
            w += 1;
        }
        reach = reach.max(w);
    }
    (para as i32, reach as i32)
}
