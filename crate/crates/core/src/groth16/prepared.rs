//! Circuit-independent material derived once per domain size from a verified accumulator:
//! the monomial powers a key needs and the G1 Lagrange basis `[L_i(tau)] G1`.
//!
//! The Lagrange basis is the inverse FFT of `[tau^i] G1` over the domain, computed
//! in the group. It is the expensive step, so it can be written to disk and reused.
//!
//! File layout: magic "ZKRBPREP" | version u32 | domain size u64 | source digest (32) |
//! g1 powers | g2 powers | lagrange, each a u64 length followed by raw points.

use std::path::Path;

use rayon::prelude::*;

use super::ceremony::{tau_verify_chain_with, TauAccumulator};
use super::io::{read_file, read_file_with_digest, write_file, PointEncoding, Reader, Writer};
use super::Groth16Error;
use crate::algebra::{fft_in_place, CurveGroup, Direction, EvaluationDomain, G1Affine, G1Projective, G2Affine, Workers};

pub const PREPARED_MAGIC: &[u8; 8] = b"ZKRBPREP";
pub const PREPARED_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedTau {
    domain_size: usize,
    source: [u8; 32],
    /// `[tau^i] G1` for `i < 2N - 1`
    g1: Vec<G1Affine>,
    /// `[tau^i] G2` for `i < N`
    g2: Vec<G2Affine>,
    /// `[L_i(tau)] G1` for `i < N`
    lagrange: Vec<G1Affine>,
}

/// Smallest `n` whose accumulator can key a domain of `domain_size` points.
pub fn required_tau_n(domain_size: usize) -> u32 {
    domain_size.max(2).trailing_zeros() + 1
}

pub fn check_capacity(acc: &TauAccumulator, domain_size: usize) -> Result<(), Groth16Error> {
    if domain_size > acc.max_domain_size() {
        return Err(Groth16Error::Capacity { domain_size, required_n: required_tau_n(domain_size), available_n: acc.n() });
    }
    Ok(())
}

impl PreparedTau {
    /// Verifies the accumulator chain, then derives the Lagrange basis for `domain_size`.
    pub fn new(acc: &TauAccumulator, domain_size: usize, workers: Workers) -> Result<Self, Groth16Error> {
        check_capacity(acc, domain_size)?;
        let domain = EvaluationDomain::new(domain_size)?;
        if !tau_verify_chain_with(acc, workers) {
            return Err(Groth16Error::Integrity("accumulator fails the pairing-consistency check".into()));
        }
        let g1 = acc.g1_powers()[..2 * domain_size - 1].to_vec();
        let g2 = acc.g2_powers()[..domain_size].to_vec();
        let mut proj: Vec<G1Projective> = workers.install(|| g1[..domain_size].par_iter().map(|p| (*p).into()).collect());
        fft_in_place(&mut proj, &domain, Direction::Inverse, workers)?;
        let lagrange = G1Projective::normalize_batch(&proj);
        Ok(Self { domain_size, source: acc.digest(), g1, g2, lagrange })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    /// Digest of the accumulator this was derived from.
    pub fn source_digest(&self) -> [u8; 32] {
        self.source
    }

    pub fn g1_powers(&self) -> &[G1Affine] {
        &self.g1
    }

    pub fn g2_powers(&self) -> &[G2Affine] {
        &self.g2
    }

    pub fn lagrange(&self) -> &[G1Affine] {
        &self.lagrange
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::header(PREPARED_MAGIC, PREPARED_VERSION);
        w.u64(self.domain_size as u64);
        w.bytes(&self.source);
        w.g1_vec(&self.g1, PointEncoding::Raw);
        w.g2_vec(&self.g2, PointEncoding::Raw);
        w.g1_vec(&self.lagrange, PointEncoding::Raw);
        w.buf
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, Groth16Error> {
        Self::parse(data, false)
    }

    fn parse(data: &[u8], trusted: bool) -> Result<Self, Groth16Error> {
        let mut r = Reader::with_header(data, PREPARED_MAGIC, PREPARED_VERSION)?.trusted(trusted);
        let domain_size = r.u64()? as usize;
        EvaluationDomain::new(domain_size)?;
        let source = r.take(32)?.try_into().expect("32 bytes");
        let g1 = r.g1_vec(PointEncoding::Raw)?;
        let g2 = r.g2_vec(PointEncoding::Raw)?;
        let lagrange = r.g1_vec(PointEncoding::Raw)?;
        r.finish()?;
        if g1.len() != 2 * domain_size - 1 || g2.len() != domain_size || lagrange.len() != domain_size {
            return Err(Groth16Error::Format("prepared parameter lengths do not match the domain".into()));
        }
        Ok(Self { domain_size, source, g1, g2, lagrange })
    }

    pub fn save(&self, path: &Path) -> Result<(), Groth16Error> {
        write_file(path, &self.to_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, Groth16Error> {
        Self::from_bytes(&read_file(path)?)
    }

    /// Loads a file whose SHA-256 is known, skipping G2 subgroup checks.
    pub fn load_with_digest(path: &Path, digest: &[u8; 32]) -> Result<Self, Groth16Error> {
        Self::parse(&read_file_with_digest(path, digest)?, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, One, Scalar};
    use crate::groth16::ceremony::{apply_secret, tau_init_with_budget};

    #[test]
    fn lagrange_matches_known_tau() {
        let tau = Scalar::from(1234567u64);
        let acc = apply_secret(&tau_init_with_budget(4, u64::MAX).unwrap(), &tau, Workers::SINGLE);
        let p = PreparedTau::new(&acc, 8, Workers::SINGLE).unwrap();
        let domain = EvaluationDomain::new(8).unwrap();
        let pts: Vec<Scalar> = domain.elements().collect();
        for (i, xi) in pts.iter().enumerate() {
            let li = pts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Scalar::one(), |acc, (_, xj)| acc * (tau - xj) * (*xi - xj).inverse().unwrap());
            assert_eq!(p.lagrange()[i], (G1Projective::from(crate::algebra::g1_generator()) * li).into_affine());
        }
        assert_eq!(PreparedTau::from_bytes(&p.to_bytes()).unwrap(), p);
    }

    #[test]
    fn capacity_error_names_n() {
        let acc = tau_init_with_budget(4, u64::MAX).unwrap();
        assert!(PreparedTau::new(&acc, 8, Workers::SINGLE).is_ok());
        let err = PreparedTau::new(&acc, 16, Workers::SINGLE).unwrap_err();
        assert_eq!(err, Groth16Error::Capacity { domain_size: 16, required_n: 5, available_n: 4 });
    }
}
