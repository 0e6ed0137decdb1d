//! `S3DT` binary tensors: magic, u32 version, u32 ndim, u32 dims, then
//! little-endian f32 payload in row-major order.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"S3DT";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub dims: Vec<usize>,
    pub data: Vec<f32>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, data: Vec<f32>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if n != data.len() {
            return Err(Error::ShapeMismatch(format!(
                "dims {dims:?} hold {n} values, payload has {}",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 4 * (self.dims.len() + self.data.len()));
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dims.len() as u32).to_le_bytes());
        for d in &self.dims {
            out.extend_from_slice(&(*d as u32).to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::TensorFormat(m.to_string());
        let mut words = bytes.get(4..).unwrap_or_default().chunks_exact(4);
        let mut next = || {
            words
                .next()
                .map(|w| u32::from_le_bytes([w[0], w[1], w[2], w[3]]))
                .ok_or_else(|| bad("truncated header"))
        };
        if bytes.len() < 4 || &bytes[..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = next()?;
        if version != VERSION {
            return Err(Error::TensorFormat(format!("unsupported version {version}")));
        }
        let ndim = next()? as usize;
        let dims = (0..ndim)
            .map(|_| next().map(|d| d as usize))
            .collect::<Result<Vec<_>>>()?;
        let offset = 12 + 4 * ndim;
        let n: usize = dims.iter().product();
        if bytes.len() != offset + 4 * n {
            return Err(Error::TensorFormat(format!(
                "payload is {} bytes, dims {dims:?} need {}",
                bytes.len().saturating_sub(offset),
                4 * n
            )));
        }
        let data = bytes[offset..]
            .chunks_exact(4)
            .map(|w| f32::from_le_bytes([w[0], w[1], w[2], w[3]]))
            .collect();
        Ok(Self { dims, data })
    }
}

pub fn write_tensor(t: &Tensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, t.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Tensor::from_bytes(&bytes)
}
