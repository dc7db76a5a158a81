//! Randomized invariants across the modules.

mod common;

use proptest::prelude::*;
use rand::Rng;
use zkrb::algebra::{
    fft, field_arith, g1_generator, g2_generator, msm, pairing, CurveGroup, Direction, EvaluationDomain, FieldOp,
    G1Projective, One, Scalar, Workers, Zero,
};
use zkrb::bench::Workload;
use zkrb::circuits::{batch_system_with_witness, trace_batch, BatchCircuitParams};
use zkrb::groth16::qap::qap_divisible;
use zkrb::l1sim::{gas_for_submission, per_tx_cost, round_half_even, GasSchedule, PriceConfig};
use zkrb::rollup::{replay, Tx};
use zkrb::Entropy;

use num_rational::BigRational;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (a, b, c) = (common::scalar(&mut rng), common::scalar(&mut rng), common::scalar(&mut rng));
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(field_arith(a, b, FieldOp::Sub).unwrap() + b, a);
        if !a.is_zero() {
            prop_assert_eq!(a * field_arith(a, Scalar::zero(), FieldOp::Inv).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn fft_roundtrip(seed in any::<u64>(), log in 0u32..9) {
        let mut rng = common::rng(seed);
        let d = EvaluationDomain::new(1 << log).unwrap();
        let coeffs: Vec<Scalar> = (0..d.size).map(|_| common::scalar(&mut rng)).collect();
        let evals = fft(&coeffs, &d, Direction::Forward, Workers::SINGLE).unwrap();
        // evaluation at the third domain point, by Horner
        let x = d.elements().nth(2 % d.size).unwrap();
        let horner = coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c);
        prop_assert_eq!(evals[2 % d.size], horner);
        prop_assert_eq!(fft(&evals, &d, Direction::Inverse, Workers(2)).unwrap(), coeffs);
    }

    #[test]
    fn msm_is_naive_sum(seed in any::<u64>(), len in 0usize..80) {
        let mut rng = common::rng(seed);
        let bases: Vec<_> = (0..len).map(|_| (g1_generator() * common::scalar(&mut rng)).into_affine()).collect();
        let scalars: Vec<Scalar> = (0..len)
            .map(|_| match rng.gen_range(0..4) {
                0 => Scalar::zero(),
                1 => Scalar::one(),
                2 => Scalar::from(rng.gen::<u32>()),
                _ => common::scalar(&mut rng),
            })
            .collect();
        let naive = scalars.iter().zip(&bases).fold(G1Projective::zero(), |acc, (s, b)| acc + *b * s);
        prop_assert_eq!(msm::<G1Projective>(&scalars, &bases, Workers::SINGLE).unwrap(), naive);
    }

    #[test]
    fn qap_agrees_with_checker(seed in any::<u64>(), n in 1usize..=24, corrupt in any::<bool>()) {
        let mut rng = common::rng(seed);
        let (cs, w) = common::random_system(&mut rng, 1.min(n), n);
        let w = if corrupt { common::mutate(&mut rng, &w) } else { w };
        prop_assert_eq!(qap_divisible(&cs, &w).unwrap(), cs.is_satisfied(&w).unwrap());
    }

    #[test]
    fn usd_rounding_is_within_half_unit(num in 0u64..1_000_000_000, den in 1u64..1_000_000) {
        let x = BigRational::new(num.into(), den.into());
        let r = round_half_even(&x, 6);
        let scaled = &r * BigRational::from_integer(1_000_000.into());
        prop_assert!(scaled.is_integer());
        let err = (&x - &r) * BigRational::from_integer(2_000_000.into());
        prop_assert!(err <= BigRational::one() && err >= -BigRational::one());
    }
}

proptest! {
    #![proptest_config(cfg(12))]

    #[test]
    fn pairing_is_bilinear(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (a, b) = (common::scalar(&mut rng), common::scalar(&mut rng));
        let lhs = pairing(&(g1_generator() * a).into_affine(), &(g2_generator() * b).into_affine());
        let rhs = pairing(&(g1_generator() * (a * b)).into_affine(), &g2_generator());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transfers_conserve_balance(seed in any::<u64>(), count in 1usize..24) {
        let mut wl = Workload::new(&Entropy::deterministic(seed.to_le_bytes()), 3, 6);
        let genesis = wl.genesis();
        let txs = wl.transfers(&genesis, count);
        let (post, _) = replay(&genesis, &txs).unwrap();
        prop_assert_eq!(post.total_balance(), genesis.total_balance());
        prop_assert_eq!(post.root(), post.recompute_root());
    }

    #[test]
    fn workload_is_seed_determined(seed in any::<u64>()) {
        let e = Entropy::deterministic(seed.to_le_bytes());
        let run = || {
            let mut wl = Workload::new(&e, 3, 5);
            let g = wl.genesis();
            let txs = wl.transfers(&g, 6);
            (g.root(), txs)
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn circuit_accepts_exactly_valid_transfers(seed in any::<u64>(), fault in 0u8..5) {
        let mut wl = Workload::new(&Entropy::deterministic(seed.to_le_bytes()), 2, 3);
        let genesis = wl.genesis();
        let mut txs = wl.transfers(&genesis, 2);
        // the last transfer, so earlier nonces stay consistent
        let t = &mut txs[1];
        match fault {
            0 => {}
            1 => t.nonce += 1,
            2 => t.amount = 2_000_000,
            3 => t.secret += Scalar::one(),
            _ => t.amount = 0,
        }
        let params = BatchCircuitParams::new(2, 2);
        let valid = replay(&genesis, &txs).is_ok();
        let trace = trace_batch(&genesis, &txs).unwrap();
        let (cs, w) = batch_system_with_witness(&params, &trace).unwrap();
        prop_assert_eq!(cs.is_satisfied(&w).unwrap(), valid);
        if valid {
            let (post, _) = replay(&genesis, &txs).unwrap();
            prop_assert_eq!(trace.publics.new_state_root, post.root());
        }
        prop_assert_eq!(valid, matches!(fault, 0 | 4));
    }
}

#[test]
fn gas_per_tx_falls_with_batch_size() {
    let schedule = GasSchedule::default();
    let price = PriceConfig::default();
    let calldata = [0x5au8; 195];
    let gas = gas_for_submission(2, &calldata, &schedule);
    let per: Vec<_> = [1usize, 2, 4, 8, 16, 32].iter().map(|m| per_tx_cost(gas, *m, &price).unwrap()).collect();
    for w in per.windows(2) {
        assert!(w[1].gas_per_tx < w[0].gas_per_tx);
        assert!(w[1].usd_per_tx <= w[0].usd_per_tx);
    }
}

#[test]
fn padding_is_a_noop() {
    let mut wl = Workload::new(&Entropy::deterministic("pad"), 2, 2);
    let g = wl.genesis();
    let (post, _) = replay(&g, &[Tx::padding(), Tx::padding()]).unwrap();
    assert_eq!(post, g);
}
