//! Exact finite-ensemble statistics by two independent routes: coefficient
//! extraction from powers of the partition function, and direct enumeration
//! of admissible occupation collections with multinomial weights. The two
//! must agree exactly; the comparison is one of the main oracles of the
//! crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{ExponentVector, TruncatedSeries};
use crate::error::{Error, Result};

use super::Spectrum;

/// Maximum ensemble size accepted by the enumeration route.
pub const MAX_ENUMERATION_SYSTEMS: u64 = 12;

/// Exact statistics of the ensemble with `N` systems and total energy `E`
/// (energies of the integer part of the spectrum; the rational shift
/// contributes `N * shift` on top).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactStats {
    pub n_systems: u64,
    pub energy: Vec<i64>,
    /// Total number of states: the sum of multinomial weights over all
    /// admissible collections.
    pub total_states: BigInt,
    /// Average occupation numbers, indexed like `Spectrum::points`.
    pub averages: Vec<BigRational>,
}

fn validate_exact_spectrum(spectrum: &Spectrum) -> Result<()> {
    if spectrum
        .points()
        .iter()
        .any(|p| p.iter().any(|&c| c < 0))
    {
        return Err(Error::InvalidSpectrum(
            "exact oracles require a nonnegative integer spectrum".into(),
        ));
    }
    Ok(())
}

/// Exact statistics via coefficients of `Z(z)^N`:
/// `total = [z^E] Z^N` and `avg_k = N [z^{E - eps_k}] Z^{N-1} / total`
/// (the partial derivative of the weighted state sum in the weight of
/// level `k`, taken analytically and evaluated at unit weights).
pub fn exact_stats(spectrum: &Spectrum, n_systems: u64, energy: &[i64]) -> Result<ExactStats> {
    validate_exact_spectrum(spectrum)?;
    let n = spectrum.n();
    if energy.len() != n {
        return Err(Error::InvalidArgument("energy dimension mismatch".into()));
    }
    if n_systems == 0 {
        return Err(Error::InvalidArgument("need at least one system".into()));
    }
    if energy.iter().any(|&e| e < 0) {
        return Err(Error::EmptyEnsemble);
    }
    let bounds: Vec<i64> = energy.to_vec();
    let z = TruncatedSeries::from_terms(
        n,
        bounds.clone(),
        spectrum
            .points()
            .iter()
            .map(|p| (ExponentVector::new(p.clone()), BigRational::one())),
    )?;
    let zn = z.pow(n_systems);
    let target = ExponentVector::new(energy.to_vec());
    let total = zn.coefficient(&target)?;
    if total.is_zero() {
        return Err(Error::EmptyEnsemble);
    }
    let zn1 = z.pow(n_systems - 1);
    let mut averages = Vec::with_capacity(spectrum.points().len());
    for p in spectrum.points() {
        let reduced: Vec<i64> = energy.iter().zip(p).map(|(e, m)| e - m).collect();
        let numer = if reduced.iter().any(|&c| c < 0) {
            BigRational::zero()
        } else {
            zn1.coefficient(&ExponentVector::new(reduced))?
        };
        averages.push(
            numer * BigRational::from_integer(BigInt::from(n_systems)) / total.clone(),
        );
    }
    debug_assert!(total.denom().is_one());
    Ok(ExactStats {
        n_systems,
        energy: energy.to_vec(),
        total_states: total.to_integer(),
        averages,
    })
}

/// Exact statistics by exhaustive enumeration of admissible collections
/// `a` with `sum a_k = N` and `sum a_k eps_k = E`, weighting each by the
/// multinomial `N! / prod a_k!`. Exponential in `N`; capped at
/// [`MAX_ENUMERATION_SYSTEMS`].
pub fn enumerate_states(spectrum: &Spectrum, n_systems: u64, energy: &[i64]) -> Result<ExactStats> {
    validate_exact_spectrum(spectrum)?;
    let n = spectrum.n();
    if energy.len() != n {
        return Err(Error::InvalidArgument("energy dimension mismatch".into()));
    }
    if n_systems == 0 {
        return Err(Error::InvalidArgument("need at least one system".into()));
    }
    if n_systems > MAX_ENUMERATION_SYSTEMS {
        return Err(Error::InvalidArgument(format!(
            "enumeration is exponential; N is capped at {MAX_ENUMERATION_SYSTEMS}"
        )));
    }
    if energy.iter().any(|&e| e < 0) {
        return Err(Error::EmptyEnsemble);
    }
    let points = spectrum.points();
    let levels = points.len();
    // Suffix maxima per axis for pruning.
    let mut suffix_max = vec![vec![0i64; n]; levels + 1];
    for k in (0..levels).rev() {
        for j in 0..n {
            suffix_max[k][j] = suffix_max[k + 1][j].max(points[k][j]);
        }
    }
    let factorials: Vec<BigInt> = {
        let mut f = vec![BigInt::one()];
        for i in 1..=n_systems {
            let prev = f.last().unwrap().clone();
            f.push(prev * BigInt::from(i));
        }
        f
    };

    let mut total = BigInt::zero();
    let mut weighted: Vec<BigInt> = vec![BigInt::zero(); levels];
    let mut occupation = vec![0u64; levels];

    fn recurse(
        level: usize,
        remaining: u64,
        energy_left: &mut Vec<i64>,
        points: &[Vec<i64>],
        suffix_max: &[Vec<i64>],
        factorials: &[BigInt],
        occupation: &mut Vec<u64>,
        total: &mut BigInt,
        weighted: &mut Vec<BigInt>,
    ) {
        let n = energy_left.len();
        if level == points.len() {
            if remaining == 0 && energy_left.iter().all(|&e| e == 0) {
                // W(a) = N! / prod a_k!.
                let mut weight = factorials[factorials.len() - 1].clone();
                for &a in occupation.iter() {
                    weight /= &factorials[a as usize];
                }
                *total += &weight;
                for (k, &a) in occupation.iter().enumerate() {
                    if a > 0 {
                        weighted[k] += weight.clone() * BigInt::from(a);
                    }
                }
            }
            return;
        }
        // Prune: the remaining levels cannot reach the remaining energy.
        for j in 0..n {
            if energy_left[j] > remaining as i64 * suffix_max[level][j] {
                return;
            }
        }
        let p = &points[level];
        let mut cap = remaining;
        for j in 0..n {
            if p[j] > 0 {
                cap = cap.min((energy_left[j] / p[j]) as u64);
            }
        }
        for a in 0..=cap {
            occupation[level] = a;
            let mut ok = true;
            for j in 0..n {
                energy_left[j] -= a as i64 * p[j];
                if energy_left[j] < 0 {
                    ok = false;
                }
            }
            if ok {
                recurse(
                    level + 1,
                    remaining - a,
                    energy_left,
                    points,
                    suffix_max,
                    factorials,
                    occupation,
                    total,
                    weighted,
                );
            }
            for j in 0..n {
                energy_left[j] += a as i64 * p[j];
            }
        }
        occupation[level] = 0;
    }

    let mut energy_left = energy.to_vec();
    recurse(
        0,
        n_systems,
        &mut energy_left,
        points,
        &suffix_max,
        &factorials,
        &mut occupation,
        &mut total,
        &mut weighted,
    );
    if total.is_zero() {
        return Err(Error::EmptyEnsemble);
    }
    let averages = weighted
        .into_iter()
        .map(|w| BigRational::new(w, total.clone()))
        .collect();
    Ok(ExactStats {
        n_systems,
        energy: energy.to_vec(),
        total_states: total,
        averages,
    })
}
