use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;

use frugal_sampling::verify::{
    chi_square, tv_distance, ExactDistribution, VerifyError, DEFAULT_ALPHA,
};
use frugal_sampling::{BitTape, Outcome};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn uniform_int_passes_chi_square_across_seeds() {
    let m = 10u64;
    let expected =
        ExactDistribution::from_probabilities((0..m).map(|k| (Outcome::Item(k), q(1, m as i64))))
            .unwrap();
    let mut passes = 0;
    for seed in 0..100 {
        let mut tape = BitTape::seeded(seed);
        let mut counts = vec![0u64; m as usize];
        for _ in 0..1_000_000 {
            counts[tape.uniform_u64(m).unwrap() as usize] += 1;
        }
        let obs: BTreeMap<Outcome, u64> = counts
            .iter()
            .enumerate()
            .map(|(k, &c)| (Outcome::Item(k as u64), c))
            .collect();
        if chi_square(&obs, &expected, DEFAULT_ALPHA).unwrap().pass {
            passes += 1;
        }
    }
    assert!(passes >= 99, "{passes}/100");
}

#[test]
fn biased_counts_fail() {
    let expected = ExactDistribution::from_probabilities([
        (Outcome::Item(1), q(1, 2)),
        (Outcome::Item(2), q(1, 2)),
    ])
    .unwrap();
    let obs = BTreeMap::from([(Outcome::Item(1), 5_600u64), (Outcome::Item(2), 4_400)]);
    assert!(!chi_square(&obs, &expected, DEFAULT_ALPHA).unwrap().pass);
    // An outcome with zero mass can never be observed.
    let obs = BTreeMap::from([
        (Outcome::Item(1), 5_000u64),
        (Outcome::Item(2), 4_999),
        (Outcome::Bot, 1),
    ]);
    assert!(!chi_square(&obs, &expected, DEFAULT_ALPHA).unwrap().pass);
}

#[test]
fn too_few_trials_are_refused() {
    let expected = ExactDistribution::from_probabilities([
        (Outcome::Item(1), q(1, 100)),
        (Outcome::Item(2), q(99, 100)),
    ])
    .unwrap();
    let obs = BTreeMap::from([(Outcome::Item(2), 100u64)]);
    assert!(matches!(
        chi_square(&obs, &expected, DEFAULT_ALPHA),
        Err(VerifyError::TooFewTrials { .. })
    ));
}

#[test]
fn exact_distribution_basics() {
    let d = ExactDistribution::from_masses(
        BigUint::from(32u8),
        [
            (Outcome::Item(1), BigUint::from(10u8)),
            (Outcome::Bot, BigUint::from(22u8)),
        ],
    )
    .unwrap();
    assert_eq!(d.prob(Outcome::Item(1)), q(5, 16));
    assert_eq!(d.prob(Outcome::Item(9)), q(0, 1));
    assert!(ExactDistribution::from_masses(
        BigUint::from(4u8),
        [(Outcome::Bot, BigUint::from(3u8))]
    )
    .is_err());
    let e = ExactDistribution::from_probabilities([
        (Outcome::Item(1), q(5, 16)),
        (Outcome::Bot, q(11, 16)),
    ])
    .unwrap();
    assert_eq!(d, e);
    assert_eq!(tv_distance(&d, &e).unwrap(), q(0, 1));
}
