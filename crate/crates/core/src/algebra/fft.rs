use std::ops::{Add, MulAssign, Sub};

use ark_ff::{FftField, Field, One};
use rayon::prelude::*;

use super::{msm::Workers, AlgebraError, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Coefficients to evaluations.
    Forward,
    /// Evaluations to coefficients.
    Inverse,
}

/// Multiplicative subgroup of size `2^k` used for FFTs and QAP interpolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationDomain {
    pub size: usize,
    pub log_size: u32,
    pub generator: Scalar,
    pub generator_inv: Scalar,
    pub size_inv: Scalar,
}

impl EvaluationDomain {
    pub fn new(size: usize) -> Result<Self, AlgebraError> {
        if !size.is_power_of_two() || size.trailing_zeros() > Scalar::TWO_ADICITY {
            return Err(AlgebraError::InvalidDomain(size));
        }
        let generator = Scalar::get_root_of_unity(size as u64).ok_or(AlgebraError::InvalidDomain(size))?;
        Ok(Self {
            size,
            log_size: size.trailing_zeros(),
            generator,
            generator_inv: generator.inverse().expect("root of unity is nonzero"),
            size_inv: Scalar::from(size as u64).inverse().expect("size < r"),
        })
    }

    /// Smallest domain holding at least `n` points.
    pub fn at_least(n: usize) -> Result<Self, AlgebraError> {
        Self::new(n.max(1).next_power_of_two())
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        std::iter::successors(Some(Scalar::one()), move |x| Some(*x * self.generator)).take(self.size)
    }

    /// `x^size - 1`
    pub fn vanishing_at(&self, x: Scalar) -> Scalar {
        x.pow([self.size as u64]) - Scalar::one()
    }

    /// Shift used for coset evaluations: a generator of the full multiplicative group,
    /// hence outside every power-of-two subgroup.
    pub fn coset_shift() -> Scalar {
        Scalar::GENERATOR
    }
}

/// Values an FFT can run over: scalars, or group elements for "FFT in the exponent".
pub trait DomainElement:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + MulAssign<Scalar>
{
}

impl<T> DomainElement for T where
    T: Copy + Send + Sync + Add<Output = T> + Sub<Output = T> + MulAssign<Scalar>
{
}

pub fn fft<T: DomainElement>(
    values: &[T],
    domain: &EvaluationDomain,
    direction: Direction,
    workers: Workers,
) -> Result<Vec<T>, AlgebraError> {
    let mut out = values.to_vec();
    fft_in_place(&mut out, domain, direction, workers)?;
    Ok(out)
}

pub fn fft_in_place<T: DomainElement>(
    values: &mut [T],
    domain: &EvaluationDomain,
    direction: Direction,
    workers: Workers,
) -> Result<(), AlgebraError> {
    if values.len() != domain.size {
        return Err(AlgebraError::LengthMismatch { left: values.len(), right: domain.size });
    }
    let root = match direction {
        Direction::Forward => domain.generator,
        Direction::Inverse => domain.generator_inv,
    };
    workers.install(|| radix2(values, root, workers.count()));
    if direction == Direction::Inverse {
        let k = domain.size_inv;
        scale(values, k, workers);
    }
    Ok(())
}

/// Multiplies `values[i]` by `g^i` in place.
pub(crate) fn distribute_powers<T: DomainElement>(values: &mut [T], g: Scalar) {
    let mut p = Scalar::one();
    for v in values.iter_mut() {
        *v *= p;
        p *= g;
    }
}

fn scale<T: DomainElement>(values: &mut [T], k: Scalar, workers: Workers) {
    if workers.count() > 1 {
        workers.install(|| values.par_iter_mut().for_each(|v| *v *= k));
    } else {
        values.iter_mut().for_each(|v| *v *= k);
    }
}

fn bit_reverse<T>(values: &mut [T]) {
    let n = values.len();
    if n <= 2 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            values.swap(i, j);
        }
    }
}

fn radix2<T: DomainElement>(values: &mut [T], root: Scalar, threads: usize) {
    let n = values.len();
    if n <= 1 {
        return;
    }
    bit_reverse(values);
    let mut twiddles = Vec::with_capacity(n / 2);
    let mut w = Scalar::one();
    for _ in 0..n / 2 {
        twiddles.push(w);
        w *= root;
    }
    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        let butterfly = |chunk: &mut [T]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let mut t = *b;
                let tw = twiddles[j * stride];
                if !tw.is_one() {
                    t *= tw;
                }
                *b = *a - t;
                *a = *a + t;
            }
        };
        if threads > 1 && n / (2 * half) >= threads {
            values.par_chunks_mut(2 * half).for_each(butterfly);
        } else if threads > 1 {
            for chunk in values.chunks_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                lo.par_iter_mut().zip(hi.par_iter_mut()).enumerate().for_each(|(j, (a, b))| {
                    let mut t = *b;
                    let tw = twiddles[j * stride];
                    if !tw.is_one() {
                        t *= tw;
                    }
                    *b = *a - t;
                    *a = *a + t;
                });
            }
        } else {
            values.chunks_mut(2 * half).for_each(butterfly);
        }
        half *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ark_ff::{UniformRand, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn horner(coeffs: &[Scalar], x: Scalar) -> Scalar {
        coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    #[test]
    fn domain_generator_has_exact_order() {
        for k in [0u32, 1, 3, 10, 20] {
            let d = EvaluationDomain::new(1 << k).unwrap();
            assert!(d.generator.pow([d.size as u64]).is_one());
            if d.size > 1 {
                assert!(!d.generator.pow([(d.size / 2) as u64]).is_one());
            }
        }
        assert!(EvaluationDomain::new(3).is_err());
        assert!(EvaluationDomain::new(1 << 29).is_err());
    }

    #[test]
    fn constant_polynomial_and_horner_oracle() {
        let d = EvaluationDomain::new(8).unwrap();
        let c = Scalar::from(42u64);
        let mut v = vec![Scalar::zero(); 8];
        v[0] = c;
        assert_eq!(fft(&v, &d, Direction::Forward, Workers::SINGLE).unwrap(), vec![c; 8]);

        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let coeffs: Vec<Scalar> = (0..8).map(|_| Scalar::rand(&mut rng)).collect();
        let evals = fft(&coeffs, &d, Direction::Forward, Workers::SINGLE).unwrap();
        for (x, e) in d.elements().zip(&evals) {
            assert_eq!(horner(&coeffs, x), *e);
        }
        assert_eq!(fft(&evals, &d, Direction::Inverse, Workers(2)).unwrap(), coeffs);
    }

    #[test]
    fn length_mismatch() {
        let d = EvaluationDomain::new(4).unwrap();
        assert!(fft(&[Scalar::one(); 3], &d, Direction::Forward, Workers::SINGLE).is_err());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let d = EvaluationDomain::new(1 << 10).unwrap();
        let v: Vec<Scalar> = (0..d.size).map(|_| Scalar::rand(&mut rng)).collect();
        let a = fft(&v, &d, Direction::Forward, Workers::SINGLE).unwrap();
        let b = fft(&v, &d, Direction::Forward, Workers(4)).unwrap();
        assert_eq!(a, b);
    }
}
