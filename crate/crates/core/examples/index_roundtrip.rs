//! Serialise an index, reload it, and show that damage is detected.

use frugal_sampling::succinct::{Mode, SuccinctIndex};
use frugal_sampling::ErrorParam;

fn main() {
    let xs = [1200u64, 5, 88, 0, 3001, 42];
    let index = SuccinctIndex::build(Mode::Mult, &xs, ErrorParam::power_of_half(3), None).unwrap();
    let bytes = index.to_bytes();
    println!(
        "{} bytes, {} payload bits, width {}",
        bytes.len(),
        index.payload_bits(),
        index.width()
    );
    assert_eq!(SuccinctIndex::from_bytes(&bytes).unwrap(), index);
    println!("reloaded: identical");

    let mut damaged = bytes.clone();
    damaged[45] ^= 0x01;
    println!(
        "flipped bit: {}",
        SuccinctIndex::from_bytes(&damaged).unwrap_err()
    );
    println!(
        "cut short:   {}",
        SuccinctIndex::from_bytes(&bytes[..30]).unwrap_err()
    );
    println!(
        "not ours:    {}",
        SuccinctIndex::from_bytes(b"PK\x03\x04 zip").unwrap_err()
    );
}
