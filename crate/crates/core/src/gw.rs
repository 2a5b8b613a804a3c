//! Point-target Gromov-Witten invariants by character sums, and a
//! brute-force homomorphism count to check them against.
//!
//! For a finite group `K` with irreducible (possibly projective) dimensions
//! `d_i`, the genus-`g` invariant of a point modulo `K` is
//! `sum_i (|K| / d_i)^(2g - 2)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::clifford::OrbitCheck;
use crate::group::FiniteGroup;
use crate::repr::IrrepSet;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GwError {
    #[error("enumeration needs {required} tuples, above the budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// An exact rational, printed as `p` or `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GwValue(pub BigRational);

impl GwValue {
    pub fn from_integer(n: i64) -> Self {
        GwValue(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Display for GwValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for GwValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::ops::Mul for &GwValue {
    type Output = GwValue;

    fn mul(self, rhs: &GwValue) -> GwValue {
        GwValue(&self.0 * &rhs.0)
    }
}

fn ratio(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn power(base: BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num_traits::pow(base, exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// `sum over dims d of (order / d)^(2g - 2)`.
pub fn gw_from_dims(order: usize, dims: &[usize], genus: u32) -> GwValue {
    let exp = 2 * genus as i64 - 2;
    GwValue(
        dims.iter()
            .map(|&d| power(ratio(order, d), exp))
            .fold(BigRational::zero(), |acc, x| acc + x),
    )
}

pub fn gw_point(irreps: &IrrepSet, genus: u32) -> GwValue {
    gw_from_dims(irreps.group().order(), &irreps.dims(), genus)
}

/// Same sum over the projective irreps of a stabilizer of order `order`.
pub fn gw_point_twisted(order: usize, twisted_dims: &[usize], genus: u32) -> GwValue {
    gw_from_dims(order, twisted_dims, genus)
}

/// Number of `2g`-tuples `(a_1, b_1, ..., a_g, b_g)` with
/// `[a_1, b_1] ... [a_g, b_g] = e`, which is `|Hom(pi_1(surface), H)|`.
pub fn hom_count_oracle(h: &FiniteGroup, genus: u32, budget: u64) -> Result<u64, GwError> {
    let n = h.order();
    let required = (n as u128).pow(2 * genus);
    if required > budget as u128 {
        return Err(GwError::BudgetExceeded { required, budget });
    }
    if genus == 0 {
        return Ok(1);
    }
    // pairs remaining, running product -> count of completions
    fn rec(h: &FiniteGroup, pairs_left: u32, product: usize) -> u64 {
        let n = h.order();
        if pairs_left == 1 {
            let target = h.inv(product);
            let mut count = 0;
            for a in 0..n {
                for b in 0..n {
                    if h.commutator(a, b) == target {
                        count += 1;
                    }
                }
            }
            return count;
        }
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                count += rec(h, pairs_left - 1, h.mul(product, h.commutator(a, b)));
            }
        }
        count
    }
    if genus == 1 {
        return Ok(rec(h, 1, 0));
    }
    Ok((0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|b| rec(h, genus - 1, h.commutator(a, b)))
                .sum::<u64>()
        })
        .sum())
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitTerm {
    pub rep_index: usize,
    pub dim: usize,
    pub stabilizer_order: usize,
    /// Twisted invariant of the stabilizer.
    pub twisted: GwValue,
    /// `dim^(2 - 2g) * twisted`.
    pub weighted: GwValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityEntry {
    pub genus: u32,
    pub lhs: GwValue,
    pub rhs: GwValue,
    pub factor: GwValue,
    pub orbits: Vec<OrbitTerm>,
    pub pass: bool,
}

/// Compares `GW_g(point / H)` with `|G|^(2g-2) * sum over orbits of
/// dim(rho)^(2-2g) * GW_g^c(point / stabilizer)`.
///
/// The `dim(rho)` weights are 1 whenever `G` is abelian.
pub fn duality_check(
    h_irreps: &IrrepSet,
    g_order: usize,
    orbits: &[OrbitCheck],
    genus: u32,
) -> DualityEntry {
    let exp = 2 * genus as i64 - 2;
    let lhs = gw_point(h_irreps, genus);
    let factor = GwValue(power(ratio(g_order, 1), exp));
    let terms: Vec<OrbitTerm> = orbits
        .iter()
        .map(|o| {
            let twisted = gw_point_twisted(o.stabilizer_order, &o.twisted_dims, genus);
            let weight = power(ratio(1, o.dim), exp);
            OrbitTerm {
                rep_index: o.rep_index,
                dim: o.dim,
                stabilizer_order: o.stabilizer_order,
                weighted: GwValue(&twisted.0 * &weight),
                twisted,
            }
        })
        .collect();
    let rhs = GwValue(
        terms
            .iter()
            .fold(BigRational::zero(), |acc, t| acc + &t.weighted.0),
    );
    let pass = lhs == &factor * &rhs;
    DualityEntry {
        genus,
        lhs,
        rhs,
        factor,
        orbits: terms,
        pass,
    }
}

/// `1 / n`, the genus-zero invariant of any group of order `n`.
pub fn genus_zero(order: usize) -> GwValue {
    GwValue(ratio(1, order))
}
