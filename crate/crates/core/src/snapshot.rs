//! Binary snapshot format for velocity fields.
//!
//! Layout (little-endian throughout):
//!
//! ```text
//! magic   4 bytes   "ALP1"
//! n1      u64
//! n2      u64
//! n3      u64
//! reality 1 byte    1 if the field claims real samples, else 0
//! data    3 · n1·n2·n3 · 2 · f64   components in order u1, u2, u3,
//!                                  coefficients in grid order (k3 fastest),
//!                                  each as (re, im)
//! ```
//!
//! The format stores spectral coefficients verbatim, so write/read is exact:
//! a round trip reproduces the field bit for bit.

use std::io::{Read, Write};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{SpectralField, VectorField};
use crate::grid::Grid;

const MAGIC: &[u8; 4] = b"ALP1";

/// Serialize a velocity field (f64 coefficients).
pub fn write_snapshot<W: Write>(mut w: W, u: &VectorField<f64>) -> Result<()> {
    let grid = u.grid();
    w.write_all(MAGIC)?;
    for &n in &grid.n() {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    w.write_all(&[u.claims_real() as u8])?;
    for c in 0..3 {
        for z in u.comp(c).coeffs() {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Deserialize a velocity field, validating magic, dimensions, and length.
pub fn read_snapshot<R: Read>(mut r: R) -> Result<VectorField<f64>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|_| Error::Format("file shorter than header".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&magic),
            String::from_utf8_lossy(MAGIC)
        )));
    }
    let mut dims = [0usize; 3];
    for d in &mut dims {
        let mut b = [0u8; 8];
        r.read_exact(&mut b).map_err(|_| Error::Format("truncated dimensions".into()))?;
        let v = u64::from_le_bytes(b);
        *d = usize::try_from(v)
            .map_err(|_| Error::Format(format!("dimension {v} does not fit in memory")))?;
    }
    let grid = Grid::new(dims[0], dims[1], dims[2])
        .map_err(|_| Error::Format(format!("invalid grid {}x{}x{}", dims[0], dims[1], dims[2])))?;
    let mut flag = [0u8; 1];
    r.read_exact(&mut flag).map_err(|_| Error::Format("missing reality flag".into()))?;
    let real = match flag[0] {
        0 => false,
        1 => true,
        other => return Err(Error::Format(format!("reality flag must be 0 or 1, got {other}"))),
    };
    let mut comps = Vec::with_capacity(3);
    let mut buf = vec![0u8; grid.len() * 16];
    for c in 0..3 {
        r.read_exact(&mut buf)
            .map_err(|_| Error::Format(format!("truncated coefficient data in component {c}")))?;
        let coeffs: Vec<Complex<f64>> = buf
            .chunks_exact(16)
            .map(|ch| {
                Complex::new(
                    f64::from_le_bytes(ch[0..8].try_into().unwrap()),
                    f64::from_le_bytes(ch[8..16].try_into().unwrap()),
                )
            })
            .collect();
        let mut f = SpectralField::from_coeffs(grid, coeffs, false)?;
        f.set_real(real);
        comps.push(f);
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after coefficient data".into()));
    }
    let comps: [SpectralField<f64>; 3] = comps.try_into().expect("three components");
    VectorField::from_components(comps, false)
}
