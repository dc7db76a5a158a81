use ark_ff::{BigInteger, Field, PrimeField};

use super::AlgebraError;

/// Element of the BN254 scalar field (order `r`).
pub type Scalar = ark_bn254::Fr;

/// Width of the little-endian scalar encoding.
pub const SCALAR_BYTES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    /// Inverse of the left operand; the right operand is ignored.
    Inv,
    /// Left operand raised to the canonical integer value of the right operand.
    Pow,
}

pub fn field_arith(a: Scalar, b: Scalar, op: FieldOp) -> Result<Scalar, AlgebraError> {
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Inv => inverse(a)?,
        FieldOp::Pow => a.pow(b.into_bigint()),
    })
}

pub fn inverse(a: Scalar) -> Result<Scalar, AlgebraError> {
    a.inverse().ok_or(AlgebraError::InverseOfZero)
}

pub fn scalar_from_u128(v: u128) -> Scalar {
    Scalar::from(v)
}

pub fn scalar_to_bytes(s: &Scalar) -> [u8; SCALAR_BYTES] {
    let mut out = [0u8; SCALAR_BYTES];
    out.copy_from_slice(&s.into_bigint().to_bytes_le());
    out
}

/// Decodes a canonical little-endian scalar; values `>= r` are rejected.
pub fn scalar_from_bytes(bytes: &[u8]) -> Result<Scalar, AlgebraError> {
    if bytes.len() != SCALAR_BYTES {
        return Err(AlgebraError::Encoding("scalar must be 32 bytes"));
    }
    let mut limbs = [0u64; 4];
    for (i, chunk) in bytes.chunks_exact(8).enumerate() {
        limbs[i] = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
    }
    Scalar::from_bigint(ark_ff::BigInt::new(limbs))
        .ok_or(AlgebraError::Encoding("scalar not reduced modulo r"))
}

pub fn scalar_to_hex(s: &Scalar) -> String {
    hex::encode(scalar_to_bytes(s))
}

pub fn scalar_from_hex(s: &str) -> Result<Scalar, AlgebraError> {
    let bytes = hex::decode(s).map_err(|_| AlgebraError::Encoding("bad hex"))?;
    scalar_from_bytes(&bytes)
}

/// Serde adapter: a scalar as its lowercase little-endian hex string.
pub mod scalar_hex {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&scalar_to_hex(s))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(de)?;
        scalar_from_hex(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Scalar], ser: S) -> Result<S::Ok, S::Error> {
            let mut seq = ser.serialize_seq(Some(v.len()))?;
            for s in v {
                seq.serialize_element(&scalar_to_hex(s))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Scalar>, D::Error> {
            let v = Vec::<String>::deserialize(de)?;
            v.iter().map(|s| scalar_from_hex(s).map_err(D::Error::custom)).collect()
        }
    }
}
