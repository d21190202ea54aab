use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use frugal_sampling::streaming::{
    StreamSampler, StreamState, WeightedSampler, WeightedStreamState,
};
use frugal_sampling::verify;
use frugal_sampling::{BitTape, ErrorParam, Outcome};

fn eps_strategy() -> impl Strategy<Value = ErrorParam> {
    (1u64..50, 2u64..60).prop_filter_map("0 < eps < 1", |(a, b)| ErrorParam::new(a, b).ok())
}

/// `2^bits < 2 (x+1)^2 / ε`, exactly.
fn under_budget(bits: u64, x: &BigUint, eps: ErrorParam) -> bool {
    let x1 = x + 1u32;
    (BigUint::one() << bits) * eps.num() < &x1 * &x1 * 2u32 * eps.den()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uniform_invariants_along_random_runs(eps in eps_strategy(), n in 1u64..400, seed in any::<u64>()) {
        let mut state = StreamState::new(eps);
        let mut tape = BitTape::seeded(seed);
        for _ in 0..n {
            let step = state.process(&mut tape).unwrap();
            let t = state.t();
            prop_assert!(step.to == step.from || step.to == Outcome::Item(t) || step.to == Outcome::Bot);
            if t >= 3 {
                prop_assert!(step.doublings <= 2);
            }
            prop_assert_eq!(state.check_invariants(), Ok(()));
            prop_assert_eq!(state.h(), &(state.s() / t));
        }
        prop_assert_eq!(tape.bits_consumed(), state.log2_s());
        prop_assert!(under_budget(tape.bits_consumed(), &BigUint::from(n), eps));
    }

    #[test]
    fn weighted_invariants_along_random_runs(
        eps in eps_strategy(),
        weights in proptest::collection::vec(0u64..5000, 1..120),
        seed in any::<u64>(),
    ) {
        let mut state = WeightedStreamState::new(eps);
        let mut tape = BitTape::seeded(seed);
        for &w in &weights {
            let before = state.clone();
            match state.process(w, &mut tape) {
                Ok(step) => {
                    let t = state.t();
                    prop_assert!(step.to == step.from || step.to == Outcome::Item(t) || step.to == Outcome::Bot);
                }
                Err(_) => {
                    prop_assert_eq!(w, 0);
                    prop_assert_eq!(&state, &before);
                }
            }
            prop_assert_eq!(state.check_invariants(), Ok(()));
        }
        let total: BigUint = weights.iter().map(|&w| BigUint::from(w)).sum();
        prop_assert_eq!(state.total_weight(), &total);
        prop_assert!(under_budget(tape.bits_consumed(), &total, eps));
    }

    #[test]
    fn sampler_holds_one_payload(n in 0usize..200, seed in any::<u64>()) {
        let mut s = StreamSampler::new(ErrorParam::new(1, 4).unwrap());
        let mut tape = BitTape::seeded(seed);
        for i in 0..n {
            s.process(i, &mut tape).unwrap();
            match s.state().location() {
                Outcome::Item(l) => prop_assert_eq!(s.current_sample(), Some(&(l as usize - 1))),
                Outcome::Bot => prop_assert_eq!(s.current_sample(), None),
            }
        }
        prop_assert!(s.max_buffered() <= 1);
    }
}

#[test]
fn three_items_at_half() {
    let mut s = StreamState::new(ErrorParam::new(1, 2).unwrap());
    let mut tape = BitTape::seeded(1);
    for _ in 0..3 {
        s.process(&mut tape).unwrap();
    }
    assert_eq!(s.s(), &BigUint::from(32u8));
    assert_eq!(s.h(), &BigUint::from(10u8));
    assert_eq!(s.h_bot(), &BigUint::from(2u8));
    assert_eq!(tape.bits_consumed(), 5);
}

#[test]
fn current_sample_edges() {
    let s: StreamSampler<&str> = StreamSampler::new(ErrorParam::new(1, 2).unwrap());
    assert_eq!(s.current_sample(), None);
    for seed in 0..50 {
        let mut s = StreamSampler::new(ErrorParam::new(1, 2).unwrap());
        s.process("only", &mut BitTape::seeded(seed)).unwrap();
        assert_eq!(s.current_sample(), Some(&"only"));
    }
}

#[test]
fn exact_shares_for_non_dyadic_eps() {
    for (num, den) in [(1u64, 3u64), (2, 5), (3, 4)] {
        let eps = ErrorParam::new(num, den).unwrap();
        for n in 1..=5 {
            let d = verify::enumerate_uniform(n, eps).unwrap();
            verify::check_uniform_shares(&d, n, eps).unwrap();
        }
    }
}

#[test]
fn unit_weights_match_uniform_pair() {
    let eps = ErrorParam::new(1, 2).unwrap();
    let w = verify::enumerate_weighted(&[1, 1], eps).unwrap();
    let u = verify::enumerate_uniform(2, eps).unwrap();
    assert_eq!(w, u);
}

#[test]
fn weighted_one_three_distribution() {
    let eps = ErrorParam::new(1, 2).unwrap();
    let mut state = WeightedStreamState::new(eps);
    let mut tape = BitTape::seeded(0);
    state.process(1, &mut tape).unwrap();
    state.process(3, &mut tape).unwrap();
    assert_eq!(state.s(), &BigUint::from(64u8));
    assert_eq!(state.unit(), &BigUint::from(16u8));
    let d = verify::enumerate_weighted(&[1, 3], eps).unwrap();
    assert_eq!(
        d.prob(Outcome::Item(2)),
        BigRational::new(3.into(), 4.into())
    );
}

#[test]
fn weighted_sampler_payloads() {
    let mut s = WeightedSampler::new(ErrorParam::new(1, 2).unwrap());
    let mut tape = BitTape::seeded(0);
    assert!(s.process("x", 0, &mut tape).is_err());
    assert_eq!(s.current_sample(), None);
    assert_eq!(s.skipped(), 1);
    s.process("y", 7, &mut tape).unwrap();
    assert_eq!(s.current_sample(), Some(&"y"));
    assert_eq!(s.current_weight(), Some(7));
}

#[test]
fn bit_budget_up_to_a_million() {
    for eps in [
        ErrorParam::new(1, 2).unwrap(),
        ErrorParam::new(1, 16).unwrap(),
    ] {
        let mut s = StreamState::new(eps);
        let mut tape = BitTape::seeded(77);
        for n in 1..=1_000_000u64 {
            s.process(&mut tape).unwrap();
            if n.is_power_of_two() || n % 99_991 == 0 {
                assert_eq!(tape.bits_consumed(), s.log2_s());
                assert!(
                    under_budget(tape.bits_consumed(), &BigUint::from(n), eps),
                    "n={n}"
                );
            }
        }
    }
}
