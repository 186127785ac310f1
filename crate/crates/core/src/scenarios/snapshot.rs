//! Binary snapshots.
//!
//! Layout, all little-endian:
//!
//! | bytes            | content                                   |
//! |------------------|-------------------------------------------|
//! | 4                | magic `MHDS`                              |
//! | 4                | `u32` format version (1)                  |
//! | 4                | `u32` dimension `d`                       |
//! | 4·d              | `u32` points per axis                     |
//! | 8                | `f64` time                                |
//! | 8·2·d·Nᵈ         | `f64` physical values, `u` then `h`,      |
//! |                  | component-major, each row-major           |

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::dynamics::MhdState;
use crate::spectral::{Grid, SpectralScalar, SpectralVector};

pub const MAGIC: [u8; 4] = *b"MHDS";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported snapshot version {0}")]
    VersionUnsupported(u32),
    #[error("truncated snapshot: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("invalid header: {0}")]
    InvalidHeader(String),
}

/// Decoded snapshot contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dim: usize,
    pub n: usize,
    pub t: f64,
    /// `2·dim·nᵈⁱᵐ` physical values.
    pub payload: Vec<f64>,
}

impl Snapshot {
    pub fn from_state(state: &MhdState) -> Self {
        let grid = state.grid();
        let mut payload = Vec::with_capacity(2 * grid.dim() * grid.len());
        for field in [&state.u, &state.h] {
            for c in field.components() {
                payload.extend(c.to_physical());
            }
        }
        Self { dim: grid.dim(), n: grid.n(), t: state.t, payload }
    }

    pub fn to_state(&self) -> Result<MhdState, SnapshotError> {
        let grid = Grid::new(self.dim, self.n).map_err(|e| SnapshotError::InvalidHeader(e.to_string()))?;
        let len = grid.len();
        let field = |offset: usize| -> SpectralVector {
            let comps = (0..self.dim)
                .map(|a| {
                    let start = (offset + a) * len;
                    SpectralScalar::from_physical(&grid, &self.payload[start..start + len])
                        .expect("length matches grid")
                })
                .collect();
            SpectralVector::from_components(comps).expect("shared grid")
        };
        Ok(MhdState::new(self.t, field(0), field(self.dim)).expect("shared grid"))
    }

    pub fn grid(&self) -> Result<Arc<Grid>, SnapshotError> {
        Grid::new(self.dim, self.n).map_err(|e| SnapshotError::InvalidHeader(e.to_string()))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 4 * self.dim + 8 * self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        for _ in 0..self.dim {
            out.extend_from_slice(&(self.n as u32).to_le_bytes());
        }
        out.extend_from_slice(&self.t.to_le_bytes());
        for v in &self.payload {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, SnapshotError> {
        let truncated = |expected: usize| SnapshotError::TruncatedPayload { expected, found: bytes.len() };
        if bytes.len() < 12 {
            return Err(truncated(12));
        }
        let magic: [u8; 4] = bytes[0..4].try_into().expect("4 bytes");
        if magic != MAGIC {
            return Err(SnapshotError::BadMagic(magic));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
        let version = u32_at(4);
        if version != VERSION {
            return Err(SnapshotError::VersionUnsupported(version));
        }
        let dim = u32_at(8) as usize;
        if dim != 2 && dim != 3 {
            return Err(SnapshotError::InvalidHeader(format!("dimension {dim}")));
        }
        let header = 12 + 4 * dim + 8;
        if bytes.len() < header {
            return Err(truncated(header));
        }
        let sizes: Vec<usize> = (0..dim).map(|a| u32_at(12 + 4 * a) as usize).collect();
        let n = sizes[0];
        if sizes.iter().any(|&s| s != n) {
            return Err(SnapshotError::InvalidHeader(format!("non-cubic grid {sizes:?}")));
        }
        let grid = Grid::new(dim, n).map_err(|e| SnapshotError::InvalidHeader(e.to_string()))?;
        let t = f64::from_le_bytes(bytes[header - 8..header].try_into().expect("8 bytes"));
        let values = 2 * dim * grid.len();
        let expected = header + 8 * values;
        if bytes.len() != expected {
            return Err(truncated(expected));
        }
        let payload =
            bytes[header..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        Ok(Self { dim, n, t, payload })
    }

    /// Writes to a temporary sibling and renames it into place.
    pub fn write(&self, path: &Path) -> Result<(), SnapshotError> {
        write_atomic(path, &self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, SnapshotError> {
        Self::from_bytes(&fs::read(path)?)
    }
}

/// Write-temp-then-rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

pub fn write_snapshot(state: &MhdState, path: &Path) -> Result<(), SnapshotError> {
    Snapshot::from_state(state).write(path)
}

pub fn read_snapshot(path: &Path) -> Result<MhdState, SnapshotError> {
    Snapshot::read(path)?.to_state()
}
