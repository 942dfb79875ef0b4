//! Binary checkpoints: `MHDCKPT1`, then `nx, ny` as `u64` and `Ly, t, ν, κ, α` as `f64`, then
//! the coefficients of `v₁, v₂, b₁, b₂` as `(re, im)` pairs of `f64`, all little-endian.
//! A TOML sidecar with the same metadata sits next to the binary file.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::state::State;
use crate::error::{Error, Result};
use crate::linear::PhysParams;
use crate::scalar::Real;
use crate::spectral::{GridSpec, SpectralField};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"MHDCKPT1";
/// Magic, two `u64` sizes and five `f64` scalars.
const HEADER_BYTES: u64 = 8 + 2 * 8 + 5 * 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub format: String,
    pub nx: usize,
    pub ny: usize,
    pub ly: f64,
    pub t: f64,
    pub nu: f64,
    pub kappa: f64,
    pub alpha: f64,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".toml");
    PathBuf::from(p)
}

pub fn write_checkpoint<T: Real>(
    path: &Path,
    state: &State<T>,
    params: &PhysParams<T>,
) -> Result<CheckpointMeta> {
    let g = state.grid();
    let meta = CheckpointMeta {
        format: String::from_utf8_lossy(CHECKPOINT_MAGIC).into_owned(),
        nx: g.nx,
        ny: g.ny,
        ly: g.ly.to_f64_lossy(),
        t: state.t.to_f64_lossy(),
        nu: params.nu.to_f64_lossy(),
        kappa: params.kappa.to_f64_lossy(),
        alpha: params.alpha.to_f64_lossy(),
    };
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(CHECKPOINT_MAGIC)?;
    w.write_u64::<LittleEndian>(meta.nx as u64)?;
    w.write_u64::<LittleEndian>(meta.ny as u64)?;
    for x in [meta.ly, meta.t, meta.nu, meta.kappa, meta.alpha] {
        w.write_f64::<LittleEndian>(x)?;
    }
    for f in state.fields() {
        for c in f.coeffs() {
            w.write_f64::<LittleEndian>(c.re.to_f64_lossy())?;
            w.write_f64::<LittleEndian>(c.im.to_f64_lossy())?;
        }
    }
    w.flush()?;
    let text = toml::to_string(&meta).map_err(|e| Error::Checkpoint(e.to_string()))?;
    std::fs::write(sidecar(path), text)?;
    Ok(meta)
}

/// Reads a checkpoint; the sidecar, when present, must agree with the binary header.
pub fn read_checkpoint<T: Real>(path: &Path) -> Result<(State<T>, PhysParams<T>, CheckpointMeta)> {
    let file = File::open(path)?;
    let size = file.metadata()?.len();
    let mut r = BufReader::new(file);
    if size < HEADER_BYTES {
        return Err(Error::Checkpoint(format!("truncated header ({size} bytes)")));
    }
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let nx = r.read_u64::<LittleEndian>()? as usize;
    let ny = r.read_u64::<LittleEndian>()? as usize;
    let mut head = [0f64; 5];
    for x in head.iter_mut() {
        *x = r.read_f64::<LittleEndian>()?;
    }
    let [ly, t, nu, kappa, alpha] = head;
    let meta = CheckpointMeta {
        format: String::from_utf8_lossy(CHECKPOINT_MAGIC).into_owned(),
        nx,
        ny,
        ly,
        t,
        nu,
        kappa,
        alpha,
    };
    let car = sidecar(path);
    if car.exists() {
        let text = std::fs::read_to_string(&car)?;
        let side: CheckpointMeta = toml::from_str(&text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if side != meta {
            return Err(Error::Checkpoint(
                "sidecar metadata disagrees with the header".into(),
            ));
        }
    }
    let grid = GridSpec::new(nx, ny, T::lit(ly))?;
    let expected = HEADER_BYTES + 4 * 16 * grid.len() as u64;
    if size != expected {
        return Err(Error::Checkpoint(format!(
            "expected {expected} bytes, file has {size}"
        )));
    }
    let mut state = State::zeros(grid, T::lit(t));
    for f in state.fields_mut() {
        let mut coeffs = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            coeffs.push(Complex::new(T::lit(re), T::lit(im)));
        }
        *f = SpectralField::from_coeffs(grid, coeffs);
    }
    let params = PhysParams::new(T::lit(nu), T::lit(kappa), T::lit(alpha))?;
    Ok((state, params, meta))
}
