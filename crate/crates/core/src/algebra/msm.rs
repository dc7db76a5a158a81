use ark_ec::CurveGroup;
use ark_ff::{BigInteger, PrimeField};
use rayon::prelude::*;

use super::{counters::Counters, AlgebraError, Scalar};

type ScalarRepr = <Scalar as PrimeField>::BigInt;

/// Worker-thread count for the parallel kernels. Results never depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workers(pub usize);

impl Workers {
    pub const SINGLE: Workers = Workers(1);

    pub fn available() -> Self {
        Workers(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn count(self) -> usize {
        self.0.max(1)
    }

    /// Runs `f` on a pool of `self` threads, or inline when single-threaded.
    pub(crate) fn install<R: Send>(self, f: impl FnOnce() -> R + Send) -> R {
        if self.count() == 1 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.count()).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::available()
    }
}

/// Bucket window width in bits, a fixed function of the input length.
pub fn msm_window_size(len: usize) -> usize {
    if len < 32 {
        3
    } else {
        // ~ln(len) + 2
        let bits = (usize::BITS - len.leading_zeros()) as usize;
        bits * 69 / 100 + 2
    }
}

/// Multi-scalar multiplication `sum_i scalars[i] * bases[i]` with the bucket method.
///
/// Each scalar is cut into windows of `msm_window_size(len)` bits; per window every
/// base is added once into the bucket selected by its digit and the buckets are
/// folded with a running sum. Zero scalars are skipped and unit scalars bypass the
/// buckets, which matters for witnesses full of booleans.
pub fn msm<G>(scalars: &[Scalar], bases: &[G::Affine], workers: Workers) -> Result<G, AlgebraError>
where
    G: CurveGroup<ScalarField = Scalar>,
{
    if scalars.len() != bases.len() {
        return Err(AlgebraError::LengthMismatch { left: scalars.len(), right: bases.len() });
    }
    Counters::record_msm(scalars.len() as u64);

    let one = ScalarRepr::from(1u64);
    let mut unit_sum = G::zero();
    let mut digits: Vec<ScalarRepr> = Vec::with_capacity(scalars.len());
    let mut active: Vec<usize> = Vec::with_capacity(scalars.len());
    let mut max_bits = 0u32;
    for (i, s) in scalars.iter().enumerate() {
        let repr = s.into_bigint();
        if repr.is_zero() {
            continue;
        }
        if repr == one {
            unit_sum += &bases[i];
            continue;
        }
        max_bits = max_bits.max(repr.num_bits());
        digits.push(repr);
        active.push(i);
    }
    if active.is_empty() {
        return Ok(unit_sum);
    }

    let c = msm_window_size(active.len());
    let num_windows = (max_bits as usize).div_ceil(c);
    let window_sum = |w: usize| -> G {
        let mut buckets = vec![G::zero(); (1 << c) - 1];
        let start = w * c;
        for (repr, &i) in digits.iter().zip(&active) {
            let d = window_digit(repr, start, c);
            if d != 0 {
                buckets[d - 1] += &bases[i];
            }
        }
        let mut running = G::zero();
        let mut acc = G::zero();
        for b in buckets.into_iter().rev() {
            running += b;
            acc += running;
        }
        acc
    };

    let sums: Vec<G> = if workers.count() > 1 && num_windows > 1 {
        workers.install(|| (0..num_windows).into_par_iter().map(window_sum).collect())
    } else {
        (0..num_windows).map(window_sum).collect()
    };

    let mut total = G::zero();
    for s in sums.into_iter().rev() {
        for _ in 0..c {
            total.double_in_place();
        }
        total += s;
    }
    Ok(total + unit_sum)
}

fn window_digit(repr: &ScalarRepr, start: usize, width: usize) -> usize {
    let limbs = repr.as_ref();
    let limb = start / 64;
    if limb >= limbs.len() {
        return 0;
    }
    let shift = start % 64;
    let mut v = limbs[limb] >> shift;
    if shift + width > 64 && limb + 1 < limbs.len() {
        v |= limbs[limb + 1] << (64 - shift);
    }
    (v & ((1u64 << width) - 1)) as usize
}
