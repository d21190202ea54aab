//! The offline sampler: one batch of r bits, each item exactly k / 2^r.

use frugal_sampling::streaming::{offline_uniform, OfflinePlan};
use frugal_sampling::verify::enumerate_offline;
use frugal_sampling::{BitTape, ErrorParam, Outcome};

fn main() {
    let eps = ErrorParam::new(1, 4).unwrap();
    for n in [3u64, 5, 10, 1000] {
        let plan = OfflinePlan::new(n, eps);
        println!(
            "n={n:<5} r={:<3} k={:<5} bot strings={}",
            plan.bits,
            plan.per_item,
            plan.bot_strings(n)
        );
    }
    let d = enumerate_offline(5, eps).unwrap();
    println!(
        "n=5 exact: Pr[item 1]={} Pr[bot]={}",
        d.prob(Outcome::Item(1)),
        d.prob(Outcome::Bot)
    );
    let mut tape = BitTape::seeded(1);
    println!("one draw: {}", offline_uniform(5, eps, &mut tape).unwrap());
}
