//! Bony paraproduct decomposition and block commutators.
//!
//! For fields `u, v` the alias-free product splits exactly as
//! `uv = T_u v + T_v u + R(u, v)` where, over the chosen block family,
//!
//! * `T_u v = Σ_q (S_{q-1} u)(Δ_q v)` pairs each block of `v` with the
//!   strictly lower part of `u` (blocks `≤ q - 2`),
//! * `R(u, v) = Σ_{|q'-q| ≤ 1} (Δ_{q'} u)(Δ_q v)` collects comparable
//!   frequencies.
//!
//! The three-way split is a disjoint regrouping of the double block sum, so
//! reconstruction is exact up to rounding — there is no smallness hidden in
//! a tail. Every product is dealiased by the 3/2 rule.
//!
//! The implementation transforms each block to padded physical space once,
//! forms cumulative sums there, and assembles all three terms with pointwise
//! arithmetic, so a full split costs `2(jmax + 2) + 3` padded transforms
//! instead of a separate pair per summand.
//!
//! Localization: with this cutoff family the product `(S_{q-1}u)(Δ_q v)` has
//! vertical frequencies `|k3| < 2^q + 2^{q+2}`, hence is invisible to blocks
//! `p ≥ q + 3` ([`FilterBank::para_window`]); `(Δ_{q'}u)(Δ_{q'±0,1}v)`
//! reaches at most `|k3| < 2^{q'+2} + 2^{q'+3}`, invisible below from blocks
//! `q ≥ q' + 4` ([`FilterBank::remainder_reach`]). There is no two-sided
//! localization: the supports of `χ` and `φ` touch, so a paraproduct summand
//! can shed frequency all the way down to block `-1`.

use num_complex::Complex;

use crate::dealias;
use crate::error::Result;
use crate::field::SpectralField;
use crate::filter::FilterBank;
use crate::scalar::Scalar;

/// The three Bony pieces; `t_uv + t_vu + remainder` equals the dealiased
/// product to rounding accuracy.
pub struct BonySplit<T: Scalar> {
    /// `T_u v`: low frequencies of `u` times blocks of `v`.
    pub t_uv: SpectralField<T>,
    /// `T_v u`: low frequencies of `v` times blocks of `u`.
    pub t_vu: SpectralField<T>,
    /// `R(u, v)`: comparable-frequency interactions.
    pub remainder: SpectralField<T>,
}

#[derive(Clone, Copy)]
enum Family {
    Vert,
    Iso,
}

impl Family {
    fn jmax<T: Scalar>(self, bank: &FilterBank<T>) -> i32 {
        match self {
            Family::Vert => bank.jmax_vert(),
            Family::Iso => bank.jmax_iso(),
        }
    }

    fn block<T: Scalar>(
        self,
        bank: &FilterBank<T>,
        u: &SpectralField<T>,
        q: i32,
    ) -> SpectralField<T> {
        match self {
            Family::Vert => bank.block_vert(u, q),
            Family::Iso => bank.block_iso(u, q),
        }
    }
}

/// Padded physical samples of every block `q ∈ [-1, jmax]`, indexed `q + 1`.
fn block_physical<T: Scalar>(
    bank: &FilterBank<T>,
    u: &SpectralField<T>,
    family: Family,
) -> Vec<Vec<Complex<T>>> {
    (-1..=family.jmax(bank))
        .map(|q| dealias::to_padded_physical(&family.block(bank, u, q)).1)
        .collect()
}

fn bony_impl<T: Scalar>(
    bank: &FilterBank<T>,
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    family: Family,
) -> Result<BonySplit<T>> {
    u.grid().check_same(&v.grid())?;
    let grid = u.grid();
    let big = dealias::padded_grid(grid);
    let jmax = family.jmax(bank);
    let bu = block_physical(bank, u, family);
    let bv = block_physical(bank, v, family);
    let nblocks = bu.len();
    let len = big.len();
    let zero = Complex::new(T::zero(), T::zero());

    // cum[i] = Σ_{p ≤ i} block p (block index p = i - 1 in q-space).
    let mut cum_u = bu.clone();
    let mut cum_v = bv.clone();
    for i in 1..nblocks {
        for x in 0..len {
            cum_u[i][x] = cum_u[i][x] + cum_u[i - 1][x];
            cum_v[i][x] = cum_v[i][x] + cum_v[i - 1][x];
        }
    }

    let mut t_uv = vec![zero; len];
    let mut t_vu = vec![zero; len];
    let mut rem = vec![zero; len];
    for q in -1..=jmax {
        let qi = (q + 1) as usize;
        // S_{q-1} = blocks through q - 2, i.e. cumulative index q - 1.
        if q - 1 >= 0 {
            let si = (q - 1) as usize;
            for x in 0..len {
                t_uv[x] = t_uv[x] + cum_u[si][x] * bv[qi][x];
                t_vu[x] = t_vu[x] + cum_v[si][x] * bu[qi][x];
            }
        }
        for qp in (q - 1).max(-1)..=(q + 1).min(jmax) {
            let pi = (qp + 1) as usize;
            for x in 0..len {
                rem[x] = rem[x] + bu[pi][x] * bv[qi][x];
            }
        }
    }

    let real = u.claims_real() && v.claims_real();
    Ok(BonySplit {
        t_uv: dealias::from_padded_physical(grid, big, t_uv, real)?,
        t_vu: dealias::from_padded_physical(grid, big, t_vu, real)?,
        remainder: dealias::from_padded_physical(grid, big, rem, real)?,
    })
}

/// Bony split over the vertical block family.
pub fn bony_vert<T: Scalar>(
    bank: &FilterBank<T>,
    u: &SpectralField<T>,
    v: &SpectralField<T>,
) -> Result<BonySplit<T>> {
    bony_impl(bank, u, v, Family::Vert)
}

/// Bony split over the isotropic block family.
pub fn bony_iso<T: Scalar>(
    bank: &FilterBank<T>,
    u: &SpectralField<T>,
    v: &SpectralField<T>,
) -> Result<BonySplit<T>> {
    bony_impl(bank, u, v, Family::Iso)
}

/// Vertical block commutator `[Δ_q^v, a] b = Δ_q^v(ab) - a Δ_q^v b`, both
/// products dealiased.
pub fn commutator_vert<T: Scalar>(
    bank: &FilterBank<T>,
    a: &SpectralField<T>,
    b: &SpectralField<T>,
    q: i32,
) -> Result<SpectralField<T>> {
    let ab = dealias::product(a, b)?;
    let lhs = bank.block_vert(&ab, q);
    let rhs = dealias::product(a, &bank.block_vert(b, q))?;
    lhs.sub(&rhs)
}
