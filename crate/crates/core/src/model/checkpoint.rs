use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::network::Model;
use super::ModelConfig;

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"S3DC";
const VERSION: u32 = 1;

/// 64-bit FNV-1a of the config text.
pub fn config_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Position of a ChaCha8 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngState {
    pub seed: [u8; 32],
    pub stream: u64,
    pub word_pos: u128,
}

impl RngState {
    pub fn capture(rng: &ChaCha8Rng) -> Self {
        Self {
            seed: rng.get_seed(),
            stream: rng.get_stream(),
            word_pos: rng.get_word_pos(),
        }
    }

    pub fn restore(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(self.word_pos);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedArray {
    pub name: String,
    pub dims: Vec<usize>,
    pub data: Vec<f32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config: ModelConfig,
    pub epoch: usize,
    pub best_val_loss: f64,
    pub rng: RngState,
    pub params: Vec<NamedArray>,
}

impl Checkpoint {
    pub fn from_model(model: &Model<f32>, epoch: usize, best_val_loss: f64, rng: RngState) -> Self {
        Self {
            config: model.config.clone(),
            epoch,
            best_val_loss,
            rng,
            params: model
                .named_params()
                .into_iter()
                .map(|(name, dims, data)| NamedArray { name, dims, data })
                .collect(),
        }
    }

    pub fn model(&self) -> Result<Model<f32>> {
        let params: Vec<_> = self
            .params
            .iter()
            .map(|p| (p.name.clone(), p.dims.clone(), p.data.clone()))
            .collect();
        Model::from_named_params(&self.config, &params)
    }

    /// `S3DC`, version, config hash, config text, epoch, best validation
    /// loss, rng state, then named little-endian f32 arrays.
    pub fn to_bytes(&self) -> Vec<u8> {
        let text = self.config.to_text();
        let mut out = Vec::new();
        out.extend_from_slice(CHECKPOINT_MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&config_hash(&text).to_le_bytes());
        put_bytes(&mut out, text.as_bytes());
        out.extend_from_slice(&(self.epoch as u64).to_le_bytes());
        out.extend_from_slice(&self.best_val_loss.to_le_bytes());
        out.extend_from_slice(&self.rng.seed);
        out.extend_from_slice(&self.rng.stream.to_le_bytes());
        out.extend_from_slice(&self.rng.word_pos.to_le_bytes());
        out.extend_from_slice(&(self.params.len() as u32).to_le_bytes());
        for p in &self.params {
            put_bytes(&mut out, p.name.as_bytes());
            out.extend_from_slice(&(p.dims.len() as u32).to_le_bytes());
            for d in &p.dims {
                out.extend_from_slice(&(*d as u32).to_le_bytes());
            }
            for v in &p.data {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != CHECKPOINT_MAGIC {
            return Err(Error::Checkpoint("bad magic".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let hash = u64::from_le_bytes(r.array()?);
        let text = String::from_utf8(r.sized()?.to_vec()).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if config_hash(&text) != hash {
            return Err(Error::Checkpoint("config hash mismatch".into()));
        }
        let config = ModelConfig::from_text(&text)?;
        let epoch = u64::from_le_bytes(r.array()?) as usize;
        let best_val_loss = f64::from_le_bytes(r.array()?);
        let rng = RngState {
            seed: r.array()?,
            stream: u64::from_le_bytes(r.array()?),
            word_pos: u128::from_le_bytes(r.array()?),
        };
        let n = r.u32()? as usize;
        let mut params = Vec::with_capacity(n.min(64));
        for _ in 0..n {
            let name = String::from_utf8(r.sized()?.to_vec()).map_err(|e| Error::Checkpoint(e.to_string()))?;
            let ndim = r.u32()? as usize;
            let dims = (0..ndim).map(|_| r.u32().map(|d| d as usize)).collect::<Result<Vec<_>>>()?;
            let len: usize = dims.iter().product();
            let raw = r.take(len.checked_mul(4).ok_or_else(|| Error::Checkpoint("array too large".into()))?)?;
            let data = raw
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect();
            params.push(NamedArray { name, dims, data });
        }
        if r.pos != bytes.len() {
            return Err(Error::Checkpoint(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Self {
            config,
            epoch,
            best_val_loss,
            rng,
            params,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

fn put_bytes(out: &mut Vec<u8>, b: &[u8]) {
    out.extend_from_slice(&(b.len() as u32).to_le_bytes());
    out.extend_from_slice(b);
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|e| *e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Checkpoint("truncated".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn sized(&mut self) -> Result<&'a [u8]> {
        let n = self.u32()? as usize;
        self.take(n)
    }
}
