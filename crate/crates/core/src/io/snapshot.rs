//! `OBRG` snapshot frames.
//!
//! Layout (all integers `u32` little-endian, all floats `f64` little-endian):
//!
//! ```text
//! "OBRG" | version | dim | n | L | t | field_count
//! field_count × { name_len | name (UTF-8) | components }
//! payload: physical samples, fields in header order, component-major, x-fastest
//! ```

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::dynamics::SimState;
use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField, VectorField};

pub const MAGIC: [u8; 4] = *b"OBRG";
pub const VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum SnapshotError {
    #[error("bad magic {found:?}, expected \"OBRG\"")]
    BadMagic { found: Vec<u8> },
    #[error("unsupported snapshot version {found}, expected {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("truncated header: needed {needed} bytes at offset {offset}, file has {len}")]
    TruncatedHeader { offset: usize, needed: usize, len: usize },
    #[error("truncated payload: expected {expected} bytes, got {actual}")]
    TruncatedPayload { expected: usize, actual: usize },
    #[error("payload length mismatch: expected {expected} bytes, got {actual}")]
    TrailingBytes { expected: usize, actual: usize },
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("missing field `{0}`")]
    MissingField(String),
}

/// Named multi-component fields on one grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFrame {
    pub dim: u32,
    pub n: u32,
    pub length: f64,
    pub t: f64,
    /// `(name, components)`; each component holds `n^dim` samples.
    pub fields: Vec<(String, Vec<Vec<f64>>)>,
}

impl SnapshotFrame {
    pub fn from_state(state: &SimState) -> Self {
        let grid = state.grid();
        let comps = |f: &ScalarField| f.physical_values().into_owned();
        SnapshotFrame {
            dim: grid.dim() as u32,
            n: grid.n() as u32,
            length: grid.length(),
            t: state.t,
            fields: vec![
                ("u".to_string(), state.u.components().iter().map(comps).collect()),
                ("theta".to_string(), vec![comps(&state.theta)]),
                ("phi".to_string(), vec![comps(&state.phi)]),
            ],
        }
    }

    fn field(&self, name: &str) -> std::result::Result<&[Vec<f64>], SnapshotError> {
        self.fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_slice())
            .ok_or_else(|| SnapshotError::MissingField(name.to_string()))
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dim as usize, self.n as usize, self.length)
    }

    /// Rebuilds the state verbatim; fields are flagged zero-mean as every
    /// simulator state is.
    pub fn to_state(&self) -> Result<SimState> {
        let grid = self.grid()?;
        let scalar = |v: &Vec<f64>| -> Result<ScalarField> {
            Ok(ScalarField::from_physical(&grid, v.clone())?.set_zero_mean_flag(true))
        };
        let u = self.field("u")?;
        if u.len() != grid.dim() {
            return Err(SnapshotError::InvalidHeader(format!(
                "field `u` has {} components on a {}-D grid",
                u.len(),
                grid.dim()
            ))
            .into());
        }
        let u = VectorField::new(u.iter().map(scalar).collect::<Result<_>>()?)?;
        let theta = scalar(&self.field("theta")?[0])?;
        let phi = scalar(&self.field("phi")?[0])?;
        SimState::from_parts(u, theta, phi, self.t)
    }

    pub fn encode(&self) -> Vec<u8> {
        let samples = (self.n as usize).pow(self.dim);
        let mut out = Vec::new();
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.dim.to_le_bytes());
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&self.length.to_le_bytes());
        out.extend_from_slice(&self.t.to_le_bytes());
        out.extend_from_slice(&(self.fields.len() as u32).to_le_bytes());
        for (name, comps) in &self.fields {
            out.extend_from_slice(&(name.len() as u32).to_le_bytes());
            out.extend_from_slice(name.as_bytes());
            out.extend_from_slice(&(comps.len() as u32).to_le_bytes());
        }
        for (_, comps) in &self.fields {
            for c in comps {
                debug_assert_eq!(c.len(), samples);
                for v in c {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> std::result::Result<Self, SnapshotError> {
        let mut r = Reader { bytes, pos: 0 };
        let magic = r.take(4)?;
        if magic != MAGIC {
            return Err(SnapshotError::BadMagic { found: magic.to_vec() });
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(SnapshotError::VersionMismatch {
                found: version,
                expected: VERSION,
            });
        }
        let dim = r.u32()?;
        let n = r.u32()?;
        let length = r.f64()?;
        let t = r.f64()?;
        if dim != 2 && dim != 3 {
            return Err(SnapshotError::InvalidHeader(format!("dim {dim}")));
        }
        if n == 0 || n > 1 << 12 {
            return Err(SnapshotError::InvalidHeader(format!("n {n}")));
        }
        let field_count = r.u32()? as usize;
        let mut header = Vec::with_capacity(field_count.min(64));
        for _ in 0..field_count {
            let len = r.u32()? as usize;
            let name = std::str::from_utf8(r.take(len)?)
                .map_err(|e| SnapshotError::InvalidHeader(format!("field name: {e}")))?
                .to_string();
            let comps = r.u32()? as usize;
            header.push((name, comps));
        }

        let samples = (n as usize).pow(dim);
        let total_components: usize = header.iter().map(|(_, c)| c).sum();
        let expected = total_components * samples * 8;
        let actual = bytes.len() - r.pos;
        if actual < expected {
            return Err(SnapshotError::TruncatedPayload { expected, actual });
        }
        if actual > expected {
            return Err(SnapshotError::TrailingBytes { expected, actual });
        }

        let mut fields = Vec::with_capacity(header.len());
        for (name, comps) in header {
            let mut components = Vec::with_capacity(comps);
            for _ in 0..comps {
                let raw = r.take(samples * 8)?;
                components.push(
                    raw.chunks_exact(8)
                        .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
                        .collect(),
                );
            }
            fields.push((name, components));
        }
        Ok(SnapshotFrame {
            dim,
            n,
            length,
            t,
            fields,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> std::result::Result<&'a [u8], SnapshotError> {
        if self.bytes.len() - self.pos < k {
            return Err(SnapshotError::TruncatedHeader {
                offset: self.pos,
                needed: k,
                len: self.bytes.len(),
            });
        }
        let s = &self.bytes[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn u32(&mut self) -> std::result::Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> std::result::Result<f64, SnapshotError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn write_snapshot(state: &SimState, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, SnapshotFrame::from_state(state).encode()).map_err(|e| Error::io(path, e))
}

pub fn read_frame(path: impl AsRef<Path>) -> Result<SnapshotFrame> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(SnapshotFrame::decode(&bytes)?)
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<SimState> {
    read_frame(path)?.to_state()
}
