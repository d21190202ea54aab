use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::VerifyError;
use crate::Outcome;

/// A finite distribution with exact rational probabilities, stored as
/// integer masses over one common denominator.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    denom: BigUint,
    masses: BTreeMap<Outcome, BigUint>,
}

impl ExactDistribution {
    /// Masses must sum to `denom`. Zero masses are kept: they fix the
    /// outcome space.
    pub fn from_masses<I>(denom: BigUint, masses: I) -> Result<Self, VerifyError>
    where
        I: IntoIterator<Item = (Outcome, BigUint)>,
    {
        let mut map = BTreeMap::new();
        for (o, m) in masses {
            *map.entry(o).or_insert_with(BigUint::zero) += m;
        }
        let sum: BigUint = map.values().sum();
        if denom.is_zero() || sum != denom {
            return Err(VerifyError::NotNormalized);
        }
        Ok(Self { denom, masses: map })
    }

    /// Builds from rationals that sum to 1.
    pub fn from_probabilities<I>(probs: I) -> Result<Self, VerifyError>
    where
        I: IntoIterator<Item = (Outcome, BigRational)>,
    {
        let probs: Vec<(Outcome, BigRational)> = probs.into_iter().collect();
        let mut denom = BigInt::from(1);
        for (_, p) in &probs {
            denom = num_integer::Integer::lcm(&denom, p.denom());
        }
        let masses = probs
            .into_iter()
            .map(|(o, p)| {
                let m = p.numer() * (&denom / p.denom());
                m.to_biguint()
                    .map(|m| (o, m))
                    .ok_or(VerifyError::NotNormalized)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_masses(
            denom.to_biguint().ok_or(VerifyError::NotNormalized)?,
            masses,
        )
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denom
    }

    pub fn mass(&self, o: Outcome) -> BigUint {
        self.masses.get(&o).cloned().unwrap_or_default()
    }

    pub fn prob(&self, o: Outcome) -> BigRational {
        BigRational::new(self.mass(o).into(), self.denom.clone().into())
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (Outcome, &BigUint)> {
        self.masses.iter().map(|(o, m)| (*o, m))
    }

    pub fn support(&self) -> impl Iterator<Item = Outcome> + '_ {
        self.masses.keys().copied()
    }

    pub fn contains(&self, o: Outcome) -> bool {
        self.masses.contains_key(&o)
    }

    /// Smallest positive mass.
    pub fn min_positive_mass(&self) -> Option<&BigUint> {
        self.masses.values().filter(|m| !m.is_zero()).min()
    }

    /// Same outcome space and identical probabilities.
    pub fn same_as(&self, other: &ExactDistribution) -> bool {
        self.masses.len() == other.masses.len()
            && self
                .masses
                .iter()
                .zip(&other.masses)
                .all(|((oa, ma), (ob, mb))| oa == ob && ma * &other.denom == mb * &self.denom)
    }

    /// Sums the masses of outcomes mapped to the same key.
    pub fn group_by<F: FnMut(Outcome) -> Outcome>(&self, mut f: F) -> ExactDistribution {
        let mut map = BTreeMap::new();
        for (o, m) in &self.masses {
            *map.entry(f(*o)).or_insert_with(BigUint::zero) += m;
        }
        ExactDistribution {
            denom: self.denom.clone(),
            masses: map,
        }
    }
}

impl PartialEq for ExactDistribution {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// `(1/2) Σ |a_i - b_i|`.
pub fn tv_distance(
    a: &ExactDistribution,
    b: &ExactDistribution,
) -> Result<BigRational, VerifyError> {
    if !a.support().eq(b.support()) {
        return Err(VerifyError::MismatchedSupport);
    }
    let mut sum = BigUint::zero();
    for ((_, ma), (_, mb)) in a.outcomes().zip(b.outcomes()) {
        let x = ma * b.denominator();
        let y = mb * a.denominator();
        sum += if x > y { x - y } else { y - x };
    }
    let den = a.denominator() * b.denominator() * 2u32;
    Ok(BigRational::new(sum.into(), den.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(denom: u32, masses: &[(Outcome, u32)]) -> ExactDistribution {
        ExactDistribution::from_masses(denom.into(), masses.iter().map(|&(o, m)| (o, m.into())))
            .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    const A: Outcome = Outcome::Item(1);
    const B: Outcome = Outcome::Item(2);

    #[test]
    fn unnormalized_rejected() {
        let r = ExactDistribution::from_masses(4u32.into(), [(A, 1u32.into())]);
        assert_eq!(r.err(), Some(VerifyError::NotNormalized));
    }

    #[test]
    fn tv_identical_is_zero() {
        let a = dist(4, &[(A, 1), (B, 3)]);
        assert_eq!(tv_distance(&a, &a.clone()).unwrap(), q(0, 1));
    }

    #[test]
    fn tv_disjoint_point_masses() {
        let a = dist(1, &[(A, 1), (B, 0)]);
        let b = dist(1, &[(A, 0), (B, 1)]);
        assert_eq!(tv_distance(&a, &b).unwrap(), q(1, 1));
    }

    #[test]
    fn tv_quarter() {
        let a = dist(4, &[(A, 1), (B, 3)]);
        let b = dist(2, &[(A, 1), (B, 1)]);
        assert_eq!(tv_distance(&a, &b).unwrap(), q(1, 4));
    }

    #[test]
    fn tv_support_mismatch() {
        let a = dist(1, &[(A, 1)]);
        let b = dist(1, &[(B, 1)]);
        assert_eq!(tv_distance(&a, &b), Err(VerifyError::MismatchedSupport));
    }

    #[test]
    fn equality_across_denominators() {
        assert_eq!(dist(4, &[(A, 1), (B, 3)]), dist(8, &[(A, 2), (B, 6)]));
        assert_ne!(dist(4, &[(A, 1), (B, 3)]), dist(4, &[(A, 2), (B, 2)]));
    }

    #[test]
    fn from_probabilities_uses_lcm() {
        let d = ExactDistribution::from_probabilities([(A, q(1, 6)), (B, q(5, 6))]).unwrap();
        assert_eq!(d.denominator(), &BigUint::from(6u8));
        assert_eq!(d.prob(B), q(5, 6));
    }
}
