//! Flat binary matrix fixtures: an 8-byte little-endian `u64` dimension
//! followed by `n²` little-endian `f64` entries in row-major order.

use std::io::{Read, Write};

use super::matrix::SymMatrix;
use crate::error::{Error, Result};

pub fn write_matrix<W: Write>(mut w: W, a: &SymMatrix) -> Result<()> {
    w.write_all(&(a.n() as u64).to_le_bytes())?;
    for v in a.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix<R: Read>(mut r: R) -> Result<SymMatrix> {
    let mut header = [0u8; 8];
    r.read_exact(&mut header)?;
    let n = usize::try_from(u64::from_le_bytes(header))
        .map_err(|_| Error::Parse("matrix dimension overflows usize".into()))?;
    let len = n
        .checked_mul(n)
        .ok_or_else(|| Error::Parse(format!("matrix dimension {n} too large")))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != len * 8 {
        return Err(Error::Parse(format!(
            "expected {} bytes of entries for n = {n}, found {}",
            len * 8,
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    SymMatrix::from_row_major(n, data)
}
