use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{ExactDistribution, VerifyError};
use crate::Outcome;

pub const DEFAULT_ALPHA: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: u64,
    pub critical: f64,
    pub pass: bool,
}

/// Pearson goodness of fit of `observed` against `expected`.
///
/// Cells are the outcomes with positive expected mass. An observation of an
/// outcome with zero (or no) expected mass fails outright. At least
/// `5 / min p` trials are required.
pub fn chi_square(
    observed: &BTreeMap<Outcome, u64>,
    expected: &ExactDistribution,
    alpha: f64,
) -> Result<ChiSquare, VerifyError> {
    let trials: u64 = observed.values().sum();
    let min = expected
        .min_positive_mass()
        .ok_or(VerifyError::NotNormalized)?;
    if BigUint::from(trials) * min < expected.denominator() * 5u32 {
        return Err(VerifyError::TooFewTrials { trials });
    }
    let cells: Vec<(Outcome, &BigUint)> =
        expected.outcomes().filter(|(_, m)| !m.is_zero()).collect();
    let df = cells.len() as u64 - 1;
    let critical = if df == 0 {
        0.0
    } else {
        ChiSquared::new(df as f64)
            .expect("positive df")
            .inverse_cdf(1.0 - alpha)
    };
    let impossible = observed
        .iter()
        .any(|(o, &c)| c > 0 && expected.mass(*o).is_zero());
    if impossible {
        return Ok(ChiSquare {
            statistic: f64::INFINITY,
            df,
            critical,
            pass: false,
        });
    }
    let denom = expected.denominator().to_f64().expect("finite");
    let statistic: f64 = cells
        .iter()
        .map(|(o, m)| {
            let e = trials as f64 * m.to_f64().expect("finite") / denom;
            let x = observed.get(o).copied().unwrap_or(0) as f64;
            (x - e) * (x - e) / e
        })
        .sum();
    Ok(ChiSquare {
        statistic,
        df,
        critical,
        pass: statistic <= critical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(k: u64) -> ExactDistribution {
        ExactDistribution::from_masses(
            k.into(),
            (1..=k).map(|i| (Outcome::Item(i), BigUint::from(1u8))),
        )
        .unwrap()
    }

    #[test]
    fn proportional_counts_pass() {
        let obs = (1..=4).map(|i| (Outcome::Item(i), 250)).collect();
        let r = chi_square(&obs, &uniform(4), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
        assert_eq!(r.df, 3);
    }

    #[test]
    fn point_mass_on_one_cell() {
        for (k, n) in [(2u64, 20u64), (5, 100), (3, 1000)] {
            let obs = [(Outcome::Item(1), n)].into_iter().collect();
            let r = chi_square(&obs, &uniform(k), DEFAULT_ALPHA).unwrap();
            assert!((r.statistic - (n * (k - 1)) as f64).abs() < 1e-9);
            assert!(!r.pass);
        }
    }

    #[test]
    fn too_few_trials() {
        let obs = [(Outcome::Item(1), 3), (Outcome::Item(2), 4)]
            .into_iter()
            .collect();
        assert_eq!(
            chi_square(&obs, &uniform(2), DEFAULT_ALPHA),
            Err(VerifyError::TooFewTrials { trials: 7 })
        );
    }

    #[test]
    fn impossible_outcome_fails() {
        let obs = [
            (Outcome::Item(1), 50),
            (Outcome::Item(2), 50),
            (Outcome::Bot, 1),
        ]
        .into_iter()
        .collect();
        assert!(!chi_square(&obs, &uniform(2), DEFAULT_ALPHA).unwrap().pass);
    }

    #[test]
    fn critical_value_matches_table() {
        let obs = (1..=2).map(|i| (Outcome::Item(i), 50)).collect();
        let r = chi_square(&obs, &uniform(2), DEFAULT_ALPHA).unwrap();
        assert!((r.critical - 10.828).abs() < 1e-3);
    }
}
