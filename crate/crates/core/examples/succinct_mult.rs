//! Multiplicative-error index over truncated weights, audited exactly.

use frugal_sampling::succinct::{Mode, SuccinctIndex};
use frugal_sampling::verify::{audit_multiplicative, exact_index_distribution};
use frugal_sampling::ErrorParam;

fn main() {
    let xs: Vec<u64> = (1..=40u64).map(|i| i * i * 977 % 60_000 + 1).collect();
    for e in [1u32, 3, 6] {
        let eps = ErrorParam::power_of_half(e);
        let index = SuccinctIndex::build(Mode::Mult, &xs, eps, Some(16)).unwrap();
        let audit = audit_multiplicative(&xs, &exact_index_distribution(&index), eps);
        println!(
            "eps={eps:<5} payload={:>5} bits (vs {} raw)  max ratio deviation={:.5}  violations={}",
            index.payload_bits(),
            16 * xs.len(),
            num_traits::ToPrimitive::to_f64(&audit.max_ratio_deviation).unwrap(),
            audit.violations.len()
        );
    }
}
