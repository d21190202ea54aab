//! Random bits spent by three reservoir strategies as the stream grows.

use frugal_sampling::cli::{strategy_bits, Strategy};
use frugal_sampling::{BitTape, ErrorParam};

fn main() {
    let eps = ErrorParam::new(1, 4).unwrap();
    println!(
        "{:>8} {:>10} {:>10} {:>10}",
        "n", "basic", "vitter", "doubling"
    );
    for n in [10u64, 100, 1_000, 10_000, 100_000] {
        let mean = |s: Strategy| {
            let trials = 20;
            let sum: u64 = (0..trials)
                .map(|seed| strategy_bits(s, n, eps, &mut BitTape::seeded(seed)))
                .sum();
            sum as f64 / trials as f64
        };
        println!(
            "{n:>8} {:>10.1} {:>10.1} {:>10.1}",
            mean(Strategy::Basic),
            mean(Strategy::Vitter),
            mean(Strategy::Doubling)
        );
    }
}
