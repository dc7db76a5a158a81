//! Little-endian binary framing shared by the accumulator, key and proof files.

use sha2::{Digest, Sha256};

use super::Groth16Error;
use crate::algebra::{
    g1_from_bytes, g1_from_raw, g1_to_bytes, g1_to_raw, g2_from_bytes, g2_from_raw, g2_from_raw_on_curve, g2_to_bytes,
    g2_to_raw,
    G1Affine, G2Affine, G1_COMPRESSED_BYTES, G1_RAW_BYTES, G2_COMPRESSED_BYTES, G2_RAW_BYTES,
};

/// How points are laid out in a key file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointEncoding {
    Compressed = 0,
    Raw = 1,
}

impl PointEncoding {
    fn from_byte(b: u8) -> Result<Self, Groth16Error> {
        match b {
            0 => Ok(Self::Compressed),
            1 => Ok(Self::Raw),
            _ => Err(Groth16Error::Format(format!("unknown point encoding {b}"))),
        }
    }
}

#[derive(Default)]
pub(crate) struct Writer {
    pub buf: Vec<u8>,
}

impl Writer {
    pub fn header(magic: &[u8; 8], version: u32) -> Self {
        let mut w = Self::default();
        w.buf.extend_from_slice(magic);
        w.u32(version);
        w
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn g1(&mut self, p: &G1Affine, enc: PointEncoding) {
        match enc {
            PointEncoding::Compressed => self.bytes(&g1_to_bytes(p)),
            PointEncoding::Raw => {
                let mut out = [0u8; G1_RAW_BYTES];
                g1_to_raw(p, &mut out);
                self.bytes(&out);
            }
        }
    }

    pub fn g2(&mut self, p: &G2Affine, enc: PointEncoding) {
        match enc {
            PointEncoding::Compressed => self.bytes(&g2_to_bytes(p)),
            PointEncoding::Raw => {
                let mut out = [0u8; G2_RAW_BYTES];
                g2_to_raw(p, &mut out);
                self.bytes(&out);
            }
        }
    }

    pub fn g1_vec(&mut self, v: &[G1Affine], enc: PointEncoding) {
        self.u64(v.len() as u64);
        v.iter().for_each(|p| self.g1(p, enc));
    }

    pub fn g2_vec(&mut self, v: &[G2Affine], enc: PointEncoding) {
        self.u64(v.len() as u64);
        v.iter().for_each(|p| self.g2(p, enc));
    }
}

pub(crate) struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
    subgroup_checks: bool,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0, subgroup_checks: true }
    }

    /// Skips G2 subgroup checks on raw points; see [`read_file_with_digest`].
    pub fn trusted(mut self, trusted: bool) -> Self {
        self.subgroup_checks = !trusted;
        self
    }

    /// Checks magic and version, returning the reader positioned after them.
    pub fn with_header(data: &'a [u8], magic: &[u8; 8], version: u32) -> Result<Self, Groth16Error> {
        let mut r = Self::new(data);
        if r.take(8)? != magic {
            return Err(Groth16Error::Format(format!("bad magic, expected {}", String::from_utf8_lossy(magic))));
        }
        let v = r.u32()?;
        if v != version {
            return Err(Groth16Error::Format(format!("unsupported version {v}")));
        }
        Ok(r)
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], Groth16Error> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| Groth16Error::Format("truncated input".into()))?;
        let out = &self.data[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8, Groth16Error> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, Groth16Error> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64, Groth16Error> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub fn encoding(&mut self) -> Result<PointEncoding, Groth16Error> {
        PointEncoding::from_byte(self.u8()?)
    }

    pub fn g1(&mut self, enc: PointEncoding) -> Result<G1Affine, Groth16Error> {
        Ok(match enc {
            PointEncoding::Compressed => g1_from_bytes(self.take(G1_COMPRESSED_BYTES)?)?,
            PointEncoding::Raw => g1_from_raw(self.take(G1_RAW_BYTES)?)?,
        })
    }

    pub fn g2(&mut self, enc: PointEncoding) -> Result<G2Affine, Groth16Error> {
        Ok(match enc {
            PointEncoding::Compressed => g2_from_bytes(self.take(G2_COMPRESSED_BYTES)?)?,
            PointEncoding::Raw if self.subgroup_checks => g2_from_raw(self.take(G2_RAW_BYTES)?)?,
            PointEncoding::Raw => g2_from_raw_on_curve(self.take(G2_RAW_BYTES)?)?,
        })
    }

    fn len_prefix(&mut self, elem: usize) -> Result<usize, Groth16Error> {
        let n = self.u64()? as usize;
        if n.saturating_mul(elem) > self.data.len() - self.pos {
            return Err(Groth16Error::Format("vector length exceeds input".into()));
        }
        Ok(n)
    }

    pub fn g1_vec(&mut self, enc: PointEncoding) -> Result<Vec<G1Affine>, Groth16Error> {
        let n = self.len_prefix(if enc == PointEncoding::Raw { G1_RAW_BYTES } else { G1_COMPRESSED_BYTES })?;
        (0..n).map(|_| self.g1(enc)).collect()
    }

    pub fn g2_vec(&mut self, enc: PointEncoding) -> Result<Vec<G2Affine>, Groth16Error> {
        let n = self.len_prefix(if enc == PointEncoding::Raw { G2_RAW_BYTES } else { G2_COMPRESSED_BYTES })?;
        (0..n).map(|_| self.g2(enc)).collect()
    }

    pub fn finish(&self) -> Result<(), Groth16Error> {
        if self.pos != self.data.len() {
            return Err(Groth16Error::Format(format!("{} trailing bytes", self.data.len() - self.pos)));
        }
        Ok(())
    }
}

pub(crate) fn write_file(path: &std::path::Path, bytes: &[u8]) -> Result<(), Groth16Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Groth16Error::Io(format!("{}: {e}", dir.display())))?;
    }
    // write-then-rename so a crashed writer never leaves a truncated file behind
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(|e| Groth16Error::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| Groth16Error::Io(format!("{}: {e}", path.display())))
}

pub fn sha256(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

/// Reads a file and checks it against a SHA-256 digest recorded when it was
/// written. A match lets the caller skip per-point subgroup checks.
pub(crate) fn read_file_with_digest(path: &std::path::Path, digest: &[u8; 32]) -> Result<Vec<u8>, Groth16Error> {
    let data = read_file(path)?;
    if sha256(&data) != *digest {
        return Err(Groth16Error::Integrity(format!("{}: digest mismatch", path.display())));
    }
    Ok(data)
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<Vec<u8>, Groth16Error> {
    std::fs::read(path).map_err(|e| Groth16Error::Io(format!("{}: {e}", path.display())))
}
