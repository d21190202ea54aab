//! Additive-error table with 1/eps slots of ceil(log2 n) bits each.

use frugal_sampling::succinct::{AdditiveTable, SuccinctIndex};
use frugal_sampling::verify::{audit_additive, exact_index_distribution};
use frugal_sampling::{BitTape, ErrorParam};

fn main() {
    let xs = [40u64, 3, 0, 17, 9, 1];
    let eps = ErrorParam::new(1, 32).unwrap();
    let table = AdditiveTable::build(&xs, eps).unwrap();
    println!("slot counts: {:?}", table.counts());
    let mut tape = BitTape::seeded(5);
    let draws: Vec<usize> = (0..12)
        .map(|_| table.sample(&mut tape).unwrap() + 1)
        .collect();
    println!("draws: {draws:?}");
    let index = SuccinctIndex::Add(table);
    let audit = audit_additive(&xs, &exact_index_distribution(&index), eps);
    println!(
        "max additive deviation {} (limit {eps})",
        audit.max_abs_deviation
    );
}
