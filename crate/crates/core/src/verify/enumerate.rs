use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactDistribution, VerifyError};
use crate::streaming::{OfflinePlan, Step, StreamState, WeightedError, WeightedStreamState};
use crate::succinct::SuccinctIndex;
use crate::{BitTape, ErrorParam, Outcome, TapeExhausted};

/// Largest tape length the stream oracles will enumerate.
pub const MAX_ENUM_BITS: u64 = 24;

/// Bits the uniform sampler uses for `n` items; independent of the tape.
pub fn uniform_stream_bits(n: u64, eps: ErrorParam) -> u64 {
    let mut state = StreamState::new(eps);
    let mut tape = BitTape::seeded(0);
    for _ in 0..n {
        state
            .process(&mut tape)
            .expect("seeded tapes never run out");
    }
    state.bits_used()
}

/// Bits the weighted sampler uses for the given weights.
pub fn weighted_stream_bits(weights: &[u64], eps: ErrorParam) -> u64 {
    let mut state = WeightedStreamState::new(eps);
    let mut tape = BitTape::seeded(0);
    for &w in weights {
        match state.process(w, &mut tape) {
            Ok(_) | Err(WeightedError::ZeroWeight) => {}
            Err(e) => panic!("seeded tape failed: {e}"),
        }
    }
    state.bits_used()
}

fn check_step(step: &Step, t: u64) -> Result<(), VerifyError> {
    if step.to == step.from || step.to == Outcome::Item(t) || step.to == Outcome::Bot {
        Ok(())
    } else {
        Err(VerifyError::Invariant(format!(
            "location moved {} -> {} at t={t}",
            step.from, step.to
        )))
    }
}

fn budget(bits: u64) -> Result<u64, VerifyError> {
    if bits > MAX_ENUM_BITS {
        Err(VerifyError::BudgetExceeded {
            bits,
            max: MAX_ENUM_BITS,
        })
    } else {
        Ok(bits)
    }
}

/// Runs the uniform sampler on every tape of its exact bit budget.
///
/// Outcomes are `Item(1..=n)` and `Bot`. Each transition and the block
/// invariants are checked on every tape along the way.
pub fn enumerate_uniform(n: u64, eps: ErrorParam) -> Result<ExactDistribution, VerifyError> {
    let r = budget(uniform_stream_bits(n, eps))?;
    let mut counts = vec![0u64; n as usize + 1];
    for x in 0..1u64 << r {
        let mut tape = BitTape::from_int(x, r as u32);
        let mut state = StreamState::new(eps);
        for _ in 0..n {
            let step = state.process(&mut tape).map_err(|e| tape_error(e, x))?;
            check_step(&step, state.t())?;
            state.check_invariants().map_err(VerifyError::Invariant)?;
        }
        if tape.bits_consumed() != r {
            return Err(VerifyError::Invariant(format!(
                "tape {x} consumed {} bits",
                tape.bits_consumed()
            )));
        }
        match state.location() {
            Outcome::Item(i) => counts[i as usize - 1] += 1,
            Outcome::Bot => counts[n as usize] += 1,
        }
    }
    Ok(from_counts(r, &counts))
}

/// Tape enumeration of the weighted sampler. Outcomes index the input
/// positions (1-based), zero-weight ones included with mass 0.
pub fn enumerate_weighted(
    weights: &[u64],
    eps: ErrorParam,
) -> Result<ExactDistribution, VerifyError> {
    let r = budget(weighted_stream_bits(weights, eps))?;
    let positive: Vec<u64> = (1..=weights.len() as u64)
        .filter(|&i| weights[i as usize - 1] > 0)
        .collect();
    if positive.is_empty() {
        return Err(VerifyError::Invariant("no positive weights".into()));
    }
    let mut counts = vec![0u64; weights.len() + 1];
    for x in 0..1u64 << r {
        let mut tape = BitTape::from_int(x, r as u32);
        let mut state = WeightedStreamState::new(eps);
        for &w in weights {
            match state.process(w, &mut tape) {
                Ok(step) => check_step(&step, state.t())?,
                Err(WeightedError::ZeroWeight) => continue,
                Err(WeightedError::Tape(e)) => return Err(tape_error(e, x)),
            }
            state.check_invariants().map_err(VerifyError::Invariant)?;
        }
        match state.location() {
            Outcome::Item(k) => counts[positive[k as usize - 1] as usize - 1] += 1,
            Outcome::Bot => counts[weights.len()] += 1,
        }
    }
    Ok(from_counts(r, &counts))
}

/// Collapses a uniform distribution over `Σ w_i` unit copies into one over
/// the weighted items: copies `W_{i-1}+1 ..= W_i` belong to item `i`.
pub fn group_unit_copies(units: &ExactDistribution, weights: &[u64]) -> ExactDistribution {
    let mut owner = Vec::new();
    for (i, &w) in weights.iter().enumerate() {
        owner.extend(std::iter::repeat_n(i as u64 + 1, w as usize));
    }
    let grouped = units.group_by(|o| match o {
        Outcome::Item(u) => Outcome::Item(owner[u as usize - 1]),
        Outcome::Bot => Outcome::Bot,
    });
    // Zero-weight items own no copies but still belong to the outcome space.
    let extra = (1..=weights.len() as u64).map(|i| (Outcome::Item(i), BigUint::zero()));
    ExactDistribution::from_masses(
        grouped.denominator().clone(),
        grouped.outcomes().map(|(o, m)| (o, m.clone())).chain(extra),
    )
    .expect("grouping preserves total mass")
}

/// Exact distribution of the offline sampler over all `2^r` tapes.
pub fn enumerate_offline(n: u64, eps: ErrorParam) -> Result<ExactDistribution, VerifyError> {
    let plan = OfflinePlan::new(n, eps);
    let r = budget(plan.bits)?;
    let mut counts = vec![0u64; n as usize + 1];
    for x in 0..1u64 << r {
        let mut tape = BitTape::from_int(x, r as u32);
        match crate::streaming::offline_uniform(n, eps, &mut tape).map_err(|e| tape_error(e, x))? {
            Outcome::Item(i) => counts[i as usize - 1] += 1,
            Outcome::Bot => counts[n as usize] += 1,
        }
    }
    Ok(from_counts(r, &counts))
}

fn tape_error(e: TapeExhausted, x: u64) -> VerifyError {
    VerifyError::Invariant(format!("tape {x} ran out after {} bits", e.consumed))
}

fn from_counts(r: u64, counts: &[u64]) -> ExactDistribution {
    let n = counts.len() - 1;
    let masses = counts.iter().enumerate().map(|(i, &c)| {
        let o = if i == n {
            Outcome::Bot
        } else {
            Outcome::Item(i as u64 + 1)
        };
        (o, BigUint::from(c))
    });
    ExactDistribution::from_masses(BigUint::one() << r, masses).expect("every tape counted once")
}

/// Checks the exact shares of an `n`-item uniform enumeration: every item
/// gets `floor(2^r/n)` tapes and `⊥` gets the rest, at most `ε 2^r`.
pub fn check_uniform_shares(
    dist: &ExactDistribution,
    n: u64,
    eps: ErrorParam,
) -> Result<(), String> {
    let s = dist.denominator();
    let share = s / n;
    for i in 1..=n {
        let m = dist.mass(Outcome::Item(i));
        if m != share {
            return Err(format!("item {i} has mass {m}/{s}, expected {share}/{s}"));
        }
    }
    let bot = dist.mass(Outcome::Bot);
    if bot != s - &share * n {
        return Err(format!("bot has mass {bot}/{s}"));
    }
    if !eps.at_most_fraction_of(&bot, s) {
        return Err(format!("bot mass {bot}/{s} exceeds ε = {eps}"));
    }
    if dist.support().count() as u64 != n + 1 {
        return Err("unexpected outcomes".into());
    }
    Ok(())
}

/// Randomness-free distribution of a succinct index: alias owned mass over
/// `n S`, or slot counts over `m`. Items are 1-based.
pub fn exact_index_distribution(index: &SuccinctIndex) -> ExactDistribution {
    let (denom, masses): (BigUint, Vec<BigUint>) = match index {
        SuccinctIndex::Mult(idx) => {
            let table = idx.table();
            (table.total() * table.len(), table.owned_mass())
        }
        SuccinctIndex::Add(t) => (
            BigUint::from(t.slots().len()),
            t.counts().iter().map(|&c| BigUint::from(c)).collect(),
        ),
    };
    let masses = masses
        .into_iter()
        .enumerate()
        .map(|(i, m)| (Outcome::Item(i as u64 + 1), m));
    ExactDistribution::from_masses(denom, masses).expect("index masses are normalized")
}

/// Outcome masses of a randomized procedure over all tapes up to a depth.
#[derive(Debug, Clone)]
pub struct TapeEnumeration<T> {
    pub masses: BTreeMap<T, BigRational>,
    /// Mass of prefixes still undecided at the depth limit.
    pub undecided: BigRational,
    pub leaves: u64,
}

/// Depth-first search over bit prefixes.
///
/// `f` is run on each prefix as a fixed tape; when it runs out, both
/// one-bit extensions are explored, up to `max_depth` bits. `f` must draw
/// all its randomness from the tape.
pub fn enumerate_tapes<T, F>(max_depth: u32, mut f: F) -> TapeEnumeration<T>
where
    T: Ord,
    F: FnMut(&mut BitTape) -> Result<T, TapeExhausted>,
{
    let mut masses: BTreeMap<T, BigUint> = BTreeMap::new();
    let mut undecided = BigUint::zero();
    let mut leaves = 0;
    let mut stack: Vec<Vec<bool>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let mut tape = BitTape::from_bits(prefix.iter().copied());
        match f(&mut tape) {
            Ok(v) => {
                leaves += 1;
                *masses.entry(v).or_insert_with(BigUint::zero) +=
                    BigUint::one() << (max_depth as usize - prefix.len());
            }
            Err(_) if prefix.len() as u32 == max_depth => undecided += 1u32,
            Err(_) => {
                for b in [true, false] {
                    let mut next = prefix.clone();
                    next.push(b);
                    stack.push(next);
                }
            }
        }
    }
    let scale = BigRational::from_integer((BigUint::one() << max_depth as usize).into());
    TapeEnumeration {
        masses: masses
            .into_iter()
            .map(|(k, m)| (k, BigRational::from_integer(m.into()) / &scale))
            .collect(),
        undecided: BigRational::from_integer(undecided.into()) / &scale,
        leaves,
    }
}
