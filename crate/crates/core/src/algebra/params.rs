//! Pinned curve parameters and a human-readable dump for auditing.
//!
//! Curve: BN254 (alt_bn128), `y^2 = x^3 + 3` over `Fq`, G2 on the sextic twist
//! `y^2 = x^3 + 3/(9 + u)` over `Fq2 = Fq[u]/(u^2 + 1)`. Embedding degree 12.

use std::fmt::Write;

use ark_ec::AffineRepr;
use ark_ff::{FftField, PrimeField};

use super::{Fq, G1Affine, G2Affine, Scalar};

pub const CURVE_NAME: &str = "BN254";
pub const EMBEDDING_DEGREE: u32 = 12;
pub const G1_COEFF_B: u64 = 3;

/// Decimal scalar-field modulus `r`.
pub fn scalar_modulus() -> String {
    Scalar::MODULUS.to_string()
}

pub fn base_modulus() -> String {
    Fq::MODULUS.to_string()
}

pub fn scalar_two_adicity() -> u32 {
    Scalar::TWO_ADICITY
}

pub fn dump() -> String {
    let g1 = G1Affine::generator();
    let g2 = G2Affine::generator();
    let (g1x, g1y) = g1.xy().expect("generator is not the identity");
    let (g2x, g2y) = g2.xy().expect("generator is not the identity");
    let mut s = String::new();
    let _ = writeln!(s, "curve = {CURVE_NAME}");
    let _ = writeln!(s, "embedding_degree = {EMBEDDING_DEGREE}");
    let _ = writeln!(s, "base_modulus_q = {}", base_modulus());
    let _ = writeln!(s, "base_modulus_bits = {}", Fq::MODULUS_BIT_SIZE);
    let _ = writeln!(s, "scalar_modulus_r = {}", scalar_modulus());
    let _ = writeln!(s, "scalar_modulus_bits = {}", Scalar::MODULUS_BIT_SIZE);
    let _ = writeln!(s, "scalar_two_adicity = {}", scalar_two_adicity());
    let _ = writeln!(s, "scalar_multiplicative_generator = {}", Scalar::GENERATOR);
    let _ = writeln!(s, "scalar_two_adic_root_of_unity = {}", Scalar::TWO_ADIC_ROOT_OF_UNITY);
    let _ = writeln!(s, "g1_equation = y^2 = x^3 + {G1_COEFF_B}");
    let _ = writeln!(s, "g1_generator_x = {g1x}");
    let _ = writeln!(s, "g1_generator_y = {g1y}");
    let _ = writeln!(s, "g2_equation = y^2 = x^3 + 3/(9+u)");
    let _ = writeln!(s, "g2_generator_x_c0 = {}", g2x.c0);
    let _ = writeln!(s, "g2_generator_x_c1 = {}", g2x.c1);
    let _ = writeln!(s, "g2_generator_y_c0 = {}", g2y.c0);
    let _ = writeln!(s, "g2_generator_y_c1 = {}", g2y.c1);
    let _ = writeln!(s, "scalar_encoding = 32-byte little-endian canonical");
    let _ = writeln!(s, "g1_encoding = 32-byte LE x + flag (0 smaller y, 1 larger y, 2 identity)");
    let _ = writeln!(s, "g2_encoding = 64-byte LE x (c0||c1) + flag (0 smaller y, 1 larger y, 2 identity)");
    s
}
