//! Exact polynomial fitting in a variable `r`, and extraction of the
//! constant coefficient.
//!
//! Only samples from the regime where the data is polynomial should be
//! passed in; nothing here can tell a pre-stable sample from a bad one
//! except through the held-out consistency check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RcoeffError {
    #[error("{found} samples cannot determine a polynomial of degree {degree}")]
    Insufficient { found: usize, degree: usize },
    #[error("sample at r = {r} is {found}, but the fit predicts {predicted}")]
    Inconsistent {
        r: u64,
        found: String,
        predicted: String,
    },
    #[error("r = {0} appears more than once")]
    DuplicateR(u64),
    #[error("r must be a positive integer")]
    NonPositiveR,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    samples: Vec<(u64, BigRational)>,
}

impl SampleSet {
    pub fn new(samples: Vec<(u64, BigRational)>) -> Result<Self, RcoeffError> {
        let mut seen = std::collections::BTreeSet::new();
        for (r, _) in &samples {
            if *r == 0 {
                return Err(RcoeffError::NonPositiveR);
            }
            if !seen.insert(*r) {
                return Err(RcoeffError::DuplicateR(*r));
            }
        }
        Ok(SampleSet { samples })
    }

    pub fn samples(&self) -> &[(u64, BigRational)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFit {
    pub coefficients: Vec<BigRational>,
}

impl PolyFit {
    pub fn eval(&self, r: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * r + c)
    }

    pub fn constant(&self) -> &BigRational {
        &self.coefficients[0]
    }
}

fn rational(r: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(r))
}

/// Multiplies a coefficient vector by `(x - root)`.
fn times_linear(poly: &[BigRational], root: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); poly.len() + 1];
    for (i, c) in poly.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

/// Interpolates through the samples with the `degree + 1` smallest `r`
/// values and checks every other sample against the result. Sorting first
/// makes the outcome independent of sample order.
pub fn fit_poly(samples: &SampleSet, degree: usize) -> Result<PolyFit, RcoeffError> {
    if samples.len() < degree + 1 {
        return Err(RcoeffError::Insufficient {
            found: samples.len(),
            degree,
        });
    }
    let mut sorted = samples.samples.clone();
    sorted.sort_by_key(|(r, _)| *r);
    let (basis, held_out) = sorted.split_at(degree + 1);

    let mut coefficients = vec![BigRational::zero(); degree + 1];
    for (i, (ri, vi)) in basis.iter().enumerate() {
        let xi = rational(*ri);
        let mut numerator = vec![BigRational::one()];
        let mut denominator = BigRational::one();
        for (j, (rj, _)) in basis.iter().enumerate() {
            if i != j {
                let xj = rational(*rj);
                numerator = times_linear(&numerator, &xj);
                denominator *= &xi - &xj;
            }
        }
        let scale = vi / denominator;
        for (c, n) in coefficients.iter_mut().zip(&numerator) {
            *c += n * &scale;
        }
    }
    let fit = PolyFit { coefficients };
    for (r, v) in held_out {
        let predicted = fit.eval(&rational(*r));
        if &predicted != v {
            return Err(RcoeffError::Inconsistent {
                r: *r,
                found: v.to_string(),
                predicted: predicted.to_string(),
            });
        }
    }
    Ok(fit)
}

pub fn r0_coefficient(samples: &SampleSet, degree: usize) -> Result<BigRational, RcoeffError> {
    fit_poly(samples, degree).map(|fit| fit.constant().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn set(points: &[(u64, i64)]) -> SampleSet {
        SampleSet::new(points.iter().map(|&(r, v)| (r, q(v, 1))).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn constant_data() {
        let s = set(&[(1, 5), (2, 5), (3, 5)]);
        assert_eq!(fit_poly(&s, 0).unwrap().coefficients, ints(&[5]));
        assert_eq!(r0_coefficient(&s, 0).unwrap(), q(5, 1));
    }

    #[test]
    fn quadratic_data() {
        let s = set(&[(1, 4), (2, 7), (3, 12), (4, 19)]);
        assert_eq!(fit_poly(&s, 2).unwrap().coefficients, ints(&[3, 0, 1]));
        assert_eq!(r0_coefficient(&s, 2).unwrap(), q(3, 1));
    }

    #[test]
    fn exponential_is_rejected() {
        let s = set(&[(1, 2), (2, 4), (3, 8), (4, 16)]);
        assert!(matches!(
            fit_poly(&s, 2),
            Err(RcoeffError::Inconsistent { r: 4, .. })
        ));
    }

    #[test]
    fn cubic_with_roots() {
        let points: Vec<(u64, i64)> = (1..=5)
            .map(|r| (r as u64, (r - 1) * (r - 2) * (r - 3)))
            .collect();
        assert_eq!(r0_coefficient(&set(&points), 3).unwrap(), q(-6, 1));
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            fit_poly(&set(&[(1, 1), (2, 2)]), 2),
            Err(RcoeffError::Insufficient {
                found: 2,
                degree: 2
            })
        );
        assert_eq!(
            SampleSet::new(vec![(3, q(1, 1)), (3, q(2, 1))]),
            Err(RcoeffError::DuplicateR(3))
        );
        assert_eq!(
            SampleSet::new(vec![(0, q(1, 1))]),
            Err(RcoeffError::NonPositiveR)
        );
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-50i64..=50, 1i64..=12).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn round_trip(
            coeffs in prop::collection::vec(small_rational(), 1..=6),
            rs in prop::collection::btree_set(1u64..60, 7),
        ) {
            let poly = PolyFit { coefficients: coeffs.clone() };
            let degree = coeffs.len() - 1;
            let samples: Vec<_> = rs
                .into_iter()
                .take(degree + 2)
                .map(|r| (r, poly.eval(&rational(r))))
                .collect();
            let fit = fit_poly(&SampleSet::new(samples).unwrap(), degree).unwrap();
            prop_assert_eq!(&fit.coefficients, &coeffs);
        }

        #[test]
        fn sample_order_is_irrelevant(
            coeffs in prop::collection::vec(small_rational(), 1..=4),
            rs in prop::collection::btree_set(1u64..40, 6),
            rotation in 0usize..6,
        ) {
            let poly = PolyFit { coefficients: coeffs.clone() };
            let samples: Vec<_> = rs.into_iter().map(|r| (r, poly.eval(&rational(r)))).collect();
            let mut rotated = samples.clone();
            rotated.rotate_left(rotation);
            rotated.reverse();
            let degree = coeffs.len() - 1;
            let a = fit_poly(&SampleSet::new(samples).unwrap(), degree).unwrap();
            let b = fit_poly(&SampleSet::new(rotated).unwrap(), degree).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
