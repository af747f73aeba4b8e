//! Binary model format.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic        8 bytes  "NETRSEQ\0"
//! version      u32
//! payload_len  u64      bytes between the header and the checksum
//! payload:
//!   config     hidden u32, embed u32, max_decode_len u32,
//!              learning_rate f64, rho f64, eps f64, seed u64
//!   vocab x2   count u32, then count code points u32 (source, then target)
//!   tensors    count u32, then per tensor:
//!              name_len u16, name utf-8, rows u32, cols u32, rows*cols f64
//! checksum     u32      CRC-32 of everything before it
//! ```

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::model::Seq2SeqModel;
use super::params::Params;
use super::tensor::Tensor;
use super::vocab::CharVocab;
use super::{ModelConfig, NeuralError};

pub const MAGIC: &[u8; 8] = b"NETRSEQ\0";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("not a model file (bad magic)")]
    BadMagic,
    #[error("unsupported model format version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("model file truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },
    #[error("model checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("malformed model file: {0}")]
    Malformed(String),
}

pub fn to_bytes(model: &Seq2SeqModel) -> Vec<u8> {
    let mut payload = Vec::new();
    let c = &model.config;
    put_u32(&mut payload, c.hidden_size as u32);
    put_u32(&mut payload, c.embed_size as u32);
    put_u32(&mut payload, c.max_decode_len as u32);
    payload.extend_from_slice(&c.learning_rate.to_le_bytes());
    payload.extend_from_slice(&c.adadelta_rho.to_le_bytes());
    payload.extend_from_slice(&c.adadelta_eps.to_le_bytes());
    payload.extend_from_slice(&c.seed.to_le_bytes());
    for vocab in [&model.src_vocab, &model.tgt_vocab] {
        put_u32(&mut payload, vocab.chars().len() as u32);
        for &ch in vocab.chars() {
            put_u32(&mut payload, ch as u32);
        }
    }
    let tensors = model.params.tensors();
    put_u32(&mut payload, tensors.len() as u32);
    for (name, t) in Params::names().iter().zip(tensors) {
        payload.extend_from_slice(&(name.len() as u16).to_le_bytes());
        payload.extend_from_slice(name.as_bytes());
        put_u32(&mut payload, t.rows as u32);
        put_u32(&mut payload, t.cols as u32);
        for v in &t.data {
            payload.extend_from_slice(&v.to_le_bytes());
        }
    }

    let mut out = Vec::with_capacity(HEADER_LEN + payload.len() + 4);
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    let crc = crc32fast::hash(&out);
    put_u32(&mut out, crc);
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Seq2SeqModel, NeuralError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(FormatError::BadMagic.into());
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        }
        .into());
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(FormatError::Version { found: version }.into());
    }
    let payload_len = u64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    let expected = (HEADER_LEN as u64).saturating_add(payload_len).saturating_add(4);
    if (bytes.len() as u64) < expected {
        return Err(FormatError::Truncated {
            expected,
            found: bytes.len() as u64,
        }
        .into());
    }
    if (bytes.len() as u64) > expected {
        return Err(FormatError::Malformed("trailing bytes after checksum".into()).into());
    }
    let body_end = bytes.len() - 4;
    let stored = u32::from_le_bytes(bytes[body_end..].try_into().expect("4 bytes"));
    let computed = crc32fast::hash(&bytes[..body_end]);
    if stored != computed {
        return Err(FormatError::Checksum { stored, computed }.into());
    }

    let mut r = Reader {
        buf: &bytes[HEADER_LEN..body_end],
        pos: 0,
    };
    let config = ModelConfig {
        hidden_size: r.u32()? as usize,
        embed_size: r.u32()? as usize,
        max_decode_len: r.u32()? as usize,
        learning_rate: r.f64()?,
        adadelta_rho: r.f64()?,
        adadelta_eps: r.f64()?,
        seed: r.u64()?,
    };
    let src_vocab = r.vocab()?;
    let tgt_vocab = r.vocab()?;

    let count = r.u32()? as usize;
    let names = Params::names();
    if count != names.len() {
        return Err(malformed("unexpected tensor count"));
    }
    let mut params = Params::zeros(
        src_vocab.len(),
        tgt_vocab.len(),
        config.hidden_size,
        config.embed_size,
    );
    for (want, slot) in names.iter().zip(params.tensors_mut()) {
        let name_len = r.u16()? as usize;
        let name = core::str::from_utf8(r.take(name_len)?)
            .map_err(|_| malformed("tensor name is not utf-8"))?;
        if name != want {
            return Err(malformed("unexpected tensor name"));
        }
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let n = rows
            .checked_mul(cols)
            .ok_or_else(|| malformed("tensor too large"))?;
        let mut data = Vec::with_capacity(n.min(r.remaining() / 8));
        for _ in 0..n {
            data.push(r.f64()?);
        }
        *slot = Tensor { rows, cols, data };
    }
    if r.remaining() != 0 {
        return Err(malformed("trailing bytes in payload"));
    }
    Seq2SeqModel::from_parts(config, src_vocab, tgt_vocab, params)
}

fn malformed(msg: &str) -> NeuralError {
    FormatError::Malformed(msg.into()).into()
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], NeuralError> {
        if self.remaining() < n {
            return Err(malformed("payload ends early"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, NeuralError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> Result<u32, NeuralError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, NeuralError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64, NeuralError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn vocab(&mut self) -> Result<CharVocab, NeuralError> {
        let n = self.u32()? as usize;
        let mut chars = Vec::with_capacity(n.min(self.remaining() / 4));
        for _ in 0..n {
            let code = self.u32()?;
            chars.push(char::from_u32(code).ok_or_else(|| malformed("invalid code point"))?);
        }
        if chars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(malformed("vocabulary not in strictly increasing order"));
        }
        CharVocab::from_chars(chars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> Seq2SeqModel {
        let config = ModelConfig {
            hidden_size: 3,
            embed_size: 2,
            seed: 9,
            ..ModelConfig::default()
        };
        Seq2SeqModel::new(
            config,
            CharVocab::from_texts(["柏林"]).unwrap(),
            CharVocab::from_texts(["berlin"]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let bytes = to_bytes(&m);
        assert_eq!(&bytes[..8], MAGIC);
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(to_bytes(&back), bytes);
    }

    #[test]
    fn corrupted_tensor_byte_fails_checksum() {
        let mut bytes = to_bytes(&model());
        let i = bytes.len() - 20;
        bytes[i] ^= 0x40;
        assert!(matches!(
            from_bytes(&bytes),
            Err(NeuralError::Format(FormatError::Checksum { .. }))
        ));
    }

    #[test]
    fn version_and_truncation() {
        let mut bytes = to_bytes(&model());
        bytes[8..12].copy_from_slice(&999u32.to_le_bytes());
        assert!(matches!(
            from_bytes(&bytes),
            Err(NeuralError::Format(FormatError::Version { found: 999 }))
        ));
        let bytes = to_bytes(&model());
        assert!(matches!(
            from_bytes(&bytes[..bytes.len() - 9]),
            Err(NeuralError::Format(FormatError::Truncated { .. }))
        ));
        assert!(matches!(
            from_bytes(b"garbage!"),
            Err(NeuralError::Format(FormatError::BadMagic))
        ));
    }
}
