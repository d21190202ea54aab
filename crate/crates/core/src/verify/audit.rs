use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::ExactDistribution;
use crate::{ErrorParam, Outcome};

/// Worst deviation of a distribution from target weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Audit {
    /// 0-based items outside the allowed band.
    pub violations: Vec<usize>,
    /// `max |p'_i / p_i - 1|` over items with positive weight.
    pub max_ratio_deviation: BigRational,
    /// `max |p'_i - p_i|` over all items.
    pub max_abs_deviation: BigRational,
}

fn abs_diff(a: BigUint, b: BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        b - a
    }
}

struct Deviations {
    // item i: |M_i S - x_i D|, shared denominators kept separately.
    diffs: Vec<BigUint>,
    weights: Vec<BigUint>,
    total: BigUint,
    denom: BigUint,
}

fn deviations(weights: &[u64], dist: &ExactDistribution) -> Deviations {
    let total: BigUint = weights.iter().map(|&x| BigUint::from(x)).sum();
    let denom = dist.denominator().clone();
    let weights: Vec<BigUint> = weights.iter().map(|&x| BigUint::from(x)).collect();
    let diffs = weights
        .iter()
        .enumerate()
        .map(|(i, x)| abs_diff(dist.mass(Outcome::Item(i as u64 + 1)) * &total, x * &denom))
        .collect();
    Deviations {
        diffs,
        weights,
        total,
        denom,
    }
}

fn summarize(d: &Deviations, violations: Vec<usize>) -> Audit {
    // Ratio deviation of item i is diff_i / (x_i D); compare by cross-multiplying.
    let mut best: Option<(usize, &BigUint, &BigUint)> = None;
    for (i, (diff, x)) in d.diffs.iter().zip(&d.weights).enumerate() {
        if x.is_zero() {
            continue;
        }
        match best {
            Some((_, bd, bx)) if diff * bx <= bd * x => {}
            _ => best = Some((i, diff, x)),
        }
    }
    let max_ratio_deviation = match best {
        Some((_, diff, x)) => BigRational::new(diff.clone().into(), (x * &d.denom).into()),
        None => BigRational::zero(),
    };
    let max_diff = d.diffs.iter().max().cloned().unwrap_or_default();
    let max_abs_deviation = BigRational::new(max_diff.into(), (&d.total * &d.denom).into());
    Audit {
        violations,
        max_ratio_deviation,
        max_abs_deviation,
    }
}

/// Checks `(1-ε) p_i <= p'_i <= (1+ε) p_i` for every item, and that
/// zero-weight items are never produced.
pub fn audit_multiplicative(weights: &[u64], dist: &ExactDistribution, eps: ErrorParam) -> Audit {
    let d = deviations(weights, dist);
    // diff_i / (x_i D) <= num/den
    let violations = (0..weights.len())
        .filter(|&i| &d.diffs[i] * eps.den() > &d.weights[i] * &d.denom * eps.num())
        .collect();
    summarize(&d, violations)
}

/// Checks `|p'_i - p_i| <= ε` for every item.
pub fn audit_additive(weights: &[u64], dist: &ExactDistribution, eps: ErrorParam) -> Audit {
    let d = deviations(weights, dist);
    let bound = &d.total * &d.denom * eps.num();
    let violations = (0..weights.len())
        .filter(|&i| &d.diffs[i] * eps.den() > bound)
        .collect();
    summarize(&d, violations)
}
