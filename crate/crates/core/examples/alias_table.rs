//! Exact integer alias table: every bucket holds at most two items and each
//! item owns exactly its weight's share of the table.

use num_bigint::BigUint;

use frugal_sampling::alias::AliasTable;
use frugal_sampling::BitTape;

fn main() {
    let weights: Vec<BigUint> = [7u32, 1, 4, 0, 12].into_iter().map(BigUint::from).collect();
    let table = AliasTable::build(&weights).unwrap();
    for (i, b) in table.buckets().iter().enumerate() {
        println!("bucket {i}: {b:?}");
    }
    println!(
        "owned mass {:?}: weights scaled by n = {}",
        table.owned_mass(),
        table.len()
    );
    let mut tape = BitTape::seeded(9);
    let mut counts = vec![0u32; weights.len()];
    for _ in 0..24_000 {
        counts[table.sample(&mut tape).unwrap()] += 1;
    }
    println!("24000 draws: {counts:?} ({} bits)", tape.bits_consumed());
}
