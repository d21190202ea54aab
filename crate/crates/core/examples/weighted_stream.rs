//! Weighted stream sampling; the empirical frequencies should track w_i / W.

use std::collections::BTreeMap;

use frugal_sampling::streaming::WeightedSampler;
use frugal_sampling::{BitTape, ErrorParam};

fn main() {
    let eps = ErrorParam::new(1, 16).unwrap();
    let stream = [("apple", 5u64), ("pear", 0), ("plum", 1), ("fig", 10)];
    let total: u64 = stream.iter().map(|(_, w)| w).sum();
    let trials = 100_000;
    let mut hits: BTreeMap<&str, u64> = BTreeMap::new();
    for seed in 0..trials {
        let mut s = WeightedSampler::new(eps);
        let mut tape = BitTape::seeded(seed);
        for (item, w) in stream {
            // zero weights are rejected and counted
            let _ = s.process(item, w, &mut tape);
        }
        *hits
            .entry(s.current_sample().copied().unwrap_or("BOT"))
            .or_default() += 1;
    }
    for (item, w) in stream {
        let got = *hits.get(item).unwrap_or(&0) as f64 / trials as f64;
        println!(
            "{item:<6} weight {w:>2}  target {:.4}  observed {got:.4}",
            w as f64 / total as f64
        );
    }
    println!(
        "BOT    observed {:.4}",
        *hits.get("BOT").unwrap_or(&0) as f64 / trials as f64
    );
}
