//! Circuit-specific key generation.
//!
//! The A and B queries are the monomial powers `[tau^k]` (in G1, and in G2 for B):
//! the prover interpolates the witness-weighted row evaluations into coefficient
//! form and runs one dense MSM per query, so no G2 Lagrange basis is ever needed.
//! Per-variable points exist only where Groth16 needs them: the input
//! consistency points `[(beta A_j + alpha B_j + C_j)(tau) / gamma] G1` for public
//! variables and the same divided by `delta` for private ones, both built from the
//! G1 Lagrange basis. The quotient query is `[tau^i (tau^N - 1) / delta] G1`.

use std::path::Path;

use rayon::prelude::*;
use zeroize::{Zeroize, Zeroizing};

use super::ceremony::TauAccumulator;
use super::io::{read_file, read_file_with_digest, write_file, PointEncoding, Reader, Writer};
use super::prepared::PreparedTau;
use super::Groth16Error;
use crate::algebra::{
    g1_generator, g2_generator, inverse, msm, CurveGroup, G1Affine, G1Projective, G2Affine, G2Projective, One,
    PrimeField, Scalar, Workers, Zero,
};
use ark_ff::AdditiveGroup;
use crate::entropy::Entropy;
use crate::r1cs::{ConstraintSystem, LinearCombination};

pub const PK_MAGIC: &[u8; 8] = b"ZKRBPKEY";
pub const VK_MAGIC: &[u8; 8] = b"ZKRBVKEY";
pub const KEY_VERSION: u32 = 1;

const A: u8 = 0;
const B: u8 = 1;
const C: u8 = 2;
const AB: u8 = 3;

/// Per-variable lists at least this long go through the bucket MSM.
const MSM_THRESHOLD: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyingKey {
    pub alpha_g1: G1Affine,
    pub beta_g2: G2Affine,
    pub gamma_g2: G2Affine,
    pub delta_g2: G2Affine,
    /// One point per public input, constant one first.
    pub ic: Vec<G1Affine>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvingKey {
    pub vk: VerifyingKey,
    pub beta_g1: G1Affine,
    pub delta_g1: G1Affine,
    pub domain_size: usize,
    pub num_public: usize,
    pub num_variables: usize,
    /// `[tau^k] G1`, `k < N`
    pub a_query: Vec<G1Affine>,
    /// `[tau^k] G2`, `k < N`
    pub b_g2_query: Vec<G2Affine>,
    /// `N - 1` quotient points
    pub h_query: Vec<G1Affine>,
    /// One point per private variable.
    pub l_query: Vec<G1Affine>,
}

/// Verifies `acc`, derives the prepared parameters for the circuit's domain and runs setup.
pub fn setup(acc: &TauAccumulator, cs: &ConstraintSystem, entropy: &Entropy) -> Result<(ProvingKey, VerifyingKey), Groth16Error> {
    let workers = Workers::available();
    let domain_size = cs.stats().ok_or(Groth16Error::R1cs(crate::r1cs::R1csError::NotFinalized))?.domain_size;
    super::prepared::check_capacity(acc, domain_size)?;
    let prepared = PreparedTau::new(acc, domain_size, workers)?;
    setup_with_prepared(&prepared, cs, entropy, workers)
}

/// Setup from already prepared parameters; `alpha, beta, gamma, delta` are drawn
/// from `entropy` and wiped before returning.
pub fn setup_with_prepared(
    prepared: &PreparedTau,
    cs: &ConstraintSystem,
    entropy: &Entropy,
    workers: Workers,
) -> Result<(ProvingKey, VerifyingKey), Groth16Error> {
    let stats = cs.stats().ok_or(Groth16Error::R1cs(crate::r1cs::R1csError::NotFinalized))?;
    let n = stats.domain_size;
    if prepared.domain_size() != n {
        return Err(Groth16Error::Shape(format!(
            "parameters prepared for domain {}, circuit needs {n}",
            prepared.domain_size()
        )));
    }
    let alpha = entropy.scalar("zkrb/setup/alpha");
    let beta = entropy.scalar("zkrb/setup/beta");
    let gamma = entropy.scalar("zkrb/setup/gamma");
    let delta = entropy.scalar("zkrb/setup/delta");
    let gamma_inv = Zeroizing::new(inverse(*gamma)?);
    let delta_inv = Zeroizing::new(inverse(*delta)?);

    let num_inputs = stats.num_public + 1;
    let nc = stats.num_constraints;
    let lagrange = prepared.lagrange();

    // Public variables: one combined scalar per (variable, row), scaled by 1/gamma.
    let mut public: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); num_inputs];
    // Private variables: small R1CS coefficients against per-row points
    // `[s L_row(tau)]` with s = beta/delta, alpha/delta, 1/delta for A, B, C and
    // (alpha + beta)/delta where the A and B sides of a row coincide.
    let mut private: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); stats.num_variables() - num_inputs];
    let mut row_jobs: Vec<(u32, u8)> = Vec::new();
    let row_factor = [*beta, *alpha, Scalar::one()];
    for (row, con) in cs.constraints().iter().enumerate() {
        let sides: [(&LinearCombination, u8); 3] =
            if con.a == con.b { [(&con.a, AB), (&con.c, C), (&LinearCombination::zero(), A)] } else { [(&con.a, A), (&con.b, B), (&con.c, C)] };
        for (lc, kind) in sides {
            let mut job = None;
            for (v, c) in lc.terms() {
                let var = v.index();
                if var < num_inputs {
                    let f = if kind == AB { *alpha + *beta } else { row_factor[kind as usize] };
                    push_merged(&mut public[var], row as u32, f * c);
                } else {
                    let id = *job.get_or_insert_with(|| {
                        row_jobs.push((row as u32, kind));
                        (row_jobs.len() - 1) as u32
                    });
                    private[var - num_inputs].push((id, *c));
                }
            }
        }
    }
    for (j, list) in public.iter_mut().enumerate() {
        push_merged(list, (nc + j) as u32, *beta);
    }

    let ic: Vec<G1Projective> = public
        .iter_mut()
        .map(|list| {
            list.iter_mut().for_each(|(_, s)| *s *= *gamma_inv);
            let p = if list.len() >= MSM_THRESHOLD {
                let (rows, scalars): (Vec<_>, Vec<_>) = list.iter().copied().unzip();
                let bases: Vec<G1Affine> = rows.iter().map(|r| lagrange[*r as usize]).collect();
                let mut scalars = Zeroizing::new(scalars);
                let p = msm::<G1Projective>(&scalars, &bases, workers).expect("equal lengths");
                scalars.zeroize();
                p
            } else {
                list.iter().fold(G1Projective::zero(), |acc, (r, s)| acc + lagrange[*r as usize] * s)
            };
            list.iter_mut().for_each(|(_, s)| s.zeroize());
            p
        })
        .collect();

    let mut scale =
        Zeroizing::new([*beta * *delta_inv, *alpha * *delta_inv, *delta_inv, (*alpha + *beta) * *delta_inv]);
    let row_points: Vec<G1Projective> = workers.install(|| {
        row_jobs.par_iter().map(|(row, kind)| lagrange[*row as usize] * scale[*kind as usize]).collect()
    });
    scale.zeroize();
    let row_points = G1Projective::normalize_batch(&row_points);
    let l_query: Vec<G1Projective> = workers.install(|| {
        private.par_iter().map(|list| small_combination(list.iter().map(|(i, c)| (&row_points[*i as usize], c)))).collect()
    });

    let ic = G1Projective::normalize_batch(&ic);
    let l_query = G1Projective::normalize_batch(&l_query);

    let g1 = prepared.g1_powers();
    let h_proj: Vec<G1Projective> = workers.install(|| {
        (0..n - 1).into_par_iter().map(|i| (G1Projective::from(g1[i + n]) - g1[i]) * *delta_inv).collect()
    });

    let g = G1Projective::from(g1_generator());
    let h = G2Projective::from(g2_generator());
    let vk = VerifyingKey {
        alpha_g1: (g * *alpha).into_affine(),
        beta_g2: (h * *beta).into_affine(),
        gamma_g2: (h * *gamma).into_affine(),
        delta_g2: (h * *delta).into_affine(),
        ic,
    };
    let pk = ProvingKey {
        vk: vk.clone(),
        beta_g1: (g * *beta).into_affine(),
        delta_g1: (g * *delta).into_affine(),
        domain_size: n,
        num_public: stats.num_public,
        num_variables: stats.num_variables(),
        a_query: g1[..n].to_vec(),
        b_g2_query: prepared.g2_powers().to_vec(),
        h_query: G1Projective::normalize_batch(&h_proj),
        l_query,
    };
    Ok((pk, vk))
}

fn push_merged(list: &mut Vec<(u32, Scalar)>, row: u32, s: Scalar) {
    match list.last_mut() {
        Some((r, acc)) if *r == row => *acc += s,
        _ => list.push((row, s)),
    }
}

/// `sum c_i P_i` for coefficients that are mostly `+-1` or short integers.
fn small_combination<'a>(terms: impl Iterator<Item = (&'a G1Affine, &'a Scalar)>) -> G1Projective {
    let mut acc = G1Projective::zero();
    for (p, c) in terms {
        let (neg, k) = match (u64_of(c), u64_of(&-*c)) {
            (Some(k), _) => (false, Some(k)),
            (None, Some(k)) => (true, Some(k)),
            _ => (false, None),
        };
        let term = match k {
            Some(1) => G1Projective::from(*p),
            Some(k) => mul_u64(p, k),
            None => *p * c,
        };
        if neg {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

fn u64_of(c: &Scalar) -> Option<u64> {
    let repr = c.into_bigint();
    let limbs = repr.as_ref();
    limbs[1..].iter().all(|l| *l == 0).then_some(limbs[0])
}

fn mul_u64(p: &G1Affine, k: u64) -> G1Projective {
    let mut acc = G1Projective::zero();
    for i in (0..64 - k.leading_zeros()).rev() {
        acc.double_in_place();
        if (k >> i) & 1 == 1 {
            acc += p;
        }
    }
    acc
}

impl VerifyingKey {
    fn write(&self, w: &mut Writer) {
        let enc = PointEncoding::Compressed;
        w.g1(&self.alpha_g1, enc);
        w.g2(&self.beta_g2, enc);
        w.g2(&self.gamma_g2, enc);
        w.g2(&self.delta_g2, enc);
        w.g1_vec(&self.ic, enc);
    }

    fn read(r: &mut Reader) -> Result<Self, Groth16Error> {
        let enc = PointEncoding::Compressed;
        Ok(Self { alpha_g1: r.g1(enc)?, beta_g2: r.g2(enc)?, gamma_g2: r.g2(enc)?, delta_g2: r.g2(enc)?, ic: r.g1_vec(enc)? })
    }

    /// `"ZKRBVKEY" | version u32 | alpha | beta | gamma | delta | ic`, compressed points.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::header(VK_MAGIC, KEY_VERSION);
        self.write(&mut w);
        w.buf
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, Groth16Error> {
        let mut r = Reader::with_header(data, VK_MAGIC, KEY_VERSION)?;
        let vk = Self::read(&mut r)?;
        r.finish()?;
        Ok(vk)
    }

    pub fn save(&self, path: &Path) -> Result<(), Groth16Error> {
        write_file(path, &self.to_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, Groth16Error> {
        Self::from_bytes(&read_file(path)?)
    }
}

impl ProvingKey {
    /// `"ZKRBPKEY" | version u32 | encoding u8 | N u64 | public u64 | variables u64 |
    /// vk | beta_g1 | delta_g1 | a | b_g2 | h | l`. Query vectors are length-prefixed.
    pub fn to_bytes(&self, enc: PointEncoding) -> Vec<u8> {
        let mut w = Writer::header(PK_MAGIC, KEY_VERSION);
        w.u8(enc as u8);
        w.u64(self.domain_size as u64);
        w.u64(self.num_public as u64);
        w.u64(self.num_variables as u64);
        self.vk.write(&mut w);
        w.g1(&self.beta_g1, enc);
        w.g1(&self.delta_g1, enc);
        w.g1_vec(&self.a_query, enc);
        w.g2_vec(&self.b_g2_query, enc);
        w.g1_vec(&self.h_query, enc);
        w.g1_vec(&self.l_query, enc);
        w.buf
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, Groth16Error> {
        Self::parse(data, false)
    }

    fn parse(data: &[u8], trusted: bool) -> Result<Self, Groth16Error> {
        let mut r = Reader::with_header(data, PK_MAGIC, KEY_VERSION)?.trusted(trusted);
        let enc = r.encoding()?;
        let domain_size = r.u64()? as usize;
        let num_public = r.u64()? as usize;
        let num_variables = r.u64()? as usize;
        let vk = VerifyingKey::read(&mut r)?;
        let pk = Self {
            vk,
            beta_g1: r.g1(enc)?,
            delta_g1: r.g1(enc)?,
            domain_size,
            num_public,
            num_variables,
            a_query: r.g1_vec(enc)?,
            b_g2_query: r.g2_vec(enc)?,
            h_query: r.g1_vec(enc)?,
            l_query: r.g1_vec(enc)?,
        };
        r.finish()?;
        let consistent = pk.a_query.len() == domain_size
            && pk.b_g2_query.len() == domain_size
            && pk.h_query.len() + 1 == domain_size
            && pk.vk.ic.len() == num_public + 1
            && pk.l_query.len() + num_public + 1 == num_variables;
        if !consistent {
            return Err(Groth16Error::Format("proving key query lengths are inconsistent".into()));
        }
        Ok(pk)
    }

    pub fn save(&self, path: &Path, enc: PointEncoding) -> Result<(), Groth16Error> {
        write_file(path, &self.to_bytes(enc))
    }

    pub fn load(path: &Path) -> Result<Self, Groth16Error> {
        Self::from_bytes(&read_file(path)?)
    }

    /// Loads a file whose SHA-256 is known, skipping G2 subgroup checks.
    pub fn load_with_digest(path: &Path, digest: &[u8; 32]) -> Result<Self, Groth16Error> {
        Self::parse(&read_file_with_digest(path, digest)?, true)
    }
}
