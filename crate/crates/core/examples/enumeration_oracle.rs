//! Exhaustive enumeration of all random tapes for short streams.

use frugal_sampling::verify::{check_uniform_shares, enumerate_uniform, enumerate_weighted};
use frugal_sampling::{ErrorParam, Outcome};

fn main() {
    let eps = ErrorParam::new(1, 2).unwrap();
    for n in 1..=5 {
        let d = enumerate_uniform(n, eps).unwrap();
        let ok = check_uniform_shares(&d, n, eps).is_ok();
        let items: Vec<String> = (1..=n)
            .map(|i| d.prob(Outcome::Item(i)).to_string())
            .collect();
        println!(
            "n={n} items=[{}] bot={} {}",
            items.join(" "),
            d.prob(Outcome::Bot),
            if ok { "ok" } else { "BAD" }
        );
    }
    let d = enumerate_weighted(&[1, 3, 0, 2], eps).unwrap();
    for (o, _) in d.outcomes() {
        println!("weighted {o}: {}", d.prob(o));
    }
}
