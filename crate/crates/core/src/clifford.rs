//! Twisted representations of stabilizers and the Clifford count check.
//!
//! A cocycle `c` with values in `Z/m` on `K` defines the central extension
//! `E = Z/m x_c K` with product `(k, q)(k', q') = (k + k' + c(q, q'), qq')`.
//! Irreps of `E` on which `(1, e)` acts as `exp(2 pi i / m)` restrict along
//! `q -> (0, q)` to exactly the irreducible projective representations with
//! `P(q) P(q') = c(q, q') P(qq')`.
//!
//! Irreps of `H` lying over the orbit of `rho` are `Ind(rho~ (x) P)` with `P`
//! running over projective irreps of the stabilizer with multiplier `c^-1`,
//! where `rho~(g s(q)) = rho(g) T_q`. Their dimensions are
//! `|orbit| * dim(rho) * dim(P)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::dual::{cocycle_triviality, Cocycle, DualError, DualSpace, Tolerances, Triviality};
use crate::group::{Extension, FiniteGroup, GroupError};
use crate::repr::{compute_irreps, CMatrix, ReprError};

/// Tolerance for recognizing the central character.
const CENTRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliffordError {
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("twisted irreps of a group of order {order} have squared dimensions summing to {sum}")]
    Incomplete { order: usize, sum: usize },
}

/// Projective irreps for one cocycle, sorted by dimension.
#[derive(Debug, Clone)]
pub struct TwistedIrrepData {
    pub dims: Vec<usize>,
    pub count: usize,
    /// `reps[i][q]` is `P_i(q)`.
    pub reps: Vec<Vec<CMatrix>>,
}

/// The group `Z/m x_c K`, element `(k, q)` at index `k * |K| + q`.
pub fn central_extension(c: &Cocycle) -> Result<FiniteGroup, GroupError> {
    let base = c.base();
    let n = base.order();
    let m = c.modulus() as usize;
    let elements: Vec<(usize, usize)> = (0..m * n).map(|i| (i / n, i % n)).collect();
    FiniteGroup::from_elements("E", &elements, |&(k, q), &(k2, q2)| {
        ((k + k2 + c.value(q, q2) as usize) % m, base.mul(q, q2))
    })
}

/// Projective irreps with multiplier `c`.
pub fn twisted_irreps(c: &Cocycle, seed: u64) -> Result<TwistedIrrepData, CliffordError> {
    twisted_irreps_signed(c, 1, seed)
}

/// Projective irreps on which the central generator acts by
/// `exp(sign * 2 pi i / m)`; `sign = -1` gives multiplier `c^-1`.
pub fn twisted_irreps_signed(
    c: &Cocycle,
    sign: i8,
    seed: u64,
) -> Result<TwistedIrrepData, CliffordError> {
    let n = c.base().order();
    let m = c.modulus() as usize;
    let e = central_extension(c)?;
    let irreps = compute_irreps(&e, seed)?;
    let omega = Complex64::from_polar(1.0, sign as f64 * TAU / m as f64);
    let mut reps = Vec::new();
    for rho in irreps.irreps() {
        let d = rho.dim();
        let on_center = if m == 1 {
            0.0
        } else {
            (rho.matrix(n) - CMatrix::identity(d, d) * omega).norm()
        };
        if on_center < CENTRAL_TOL {
            reps.push(rho.matrices()[..n].to_vec());
        }
    }
    let dims: Vec<usize> = reps.iter().map(|r| r[0].nrows()).collect();
    let sum: usize = dims.iter().map(|d| d * d).sum();
    if sum != n {
        return Err(CliffordError::Incomplete { order: n, sum });
    }
    Ok(TwistedIrrepData {
        count: dims.len(),
        dims,
        reps,
    })
}

/// Clifford data for one orbit of the dual.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitCheck {
    pub rep_index: usize,
    pub orbit_size: usize,
    pub dim: usize,
    pub stabilizer_order: usize,
    pub modulus: u32,
    pub triviality: Triviality,
    /// Dimensions of projective irreps of the stabilizer with multiplier `c^-1`.
    pub twisted_dims: Vec<usize>,
}

impl OrbitCheck {
    /// Dimensions of the irreps of `H` this orbit accounts for.
    pub fn predicted_dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.twisted_dims
            .iter()
            .map(|e| self.orbit_size * self.dim * e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub orbits: Vec<OrbitCheck>,
    pub predicted_dims: Vec<usize>,
    pub actual_dims: Vec<usize>,
    pub passed: bool,
}

/// Twisted data for every orbit of a computed dual.
pub fn orbit_checks(dual: &DualSpace, seed: u64) -> Result<Vec<OrbitCheck>, CliffordError> {
    dual.orbits()
        .iter()
        .map(|o| {
            let twisted = twisted_irreps_signed(&o.cocycle, -1, seed)?;
            Ok(OrbitCheck {
                rep_index: o.rep_index,
                orbit_size: o.orbit.len(),
                dim: o.dim,
                stabilizer_order: o.stabilizer.len(),
                modulus: o.cocycle.modulus(),
                triviality: cocycle_triviality(&o.cocycle),
                twisted_dims: twisted.dims,
            })
        })
        .collect()
}

/// Compares the irrep dimensions of `H` with those predicted from the dual.
pub fn clifford_count_check(
    ext: &Extension,
    seed: u64,
    tol: &Tolerances,
) -> Result<CheckReport, CliffordError> {
    let dual = DualSpace::from_extension(ext, seed, tol)?;
    let orbits = orbit_checks(&dual, seed)?;
    let mut predicted_dims: Vec<usize> =
        orbits.iter().flat_map(OrbitCheck::predicted_dims).collect();
    predicted_dims.sort_unstable();
    let mut actual_dims = compute_irreps(ext.h(), seed)?.dims();
    actual_dims.sort_unstable();
    Ok(CheckReport {
        passed: predicted_dims == actual_dims,
        orbits,
        predicted_dims,
        actual_dims,
    })
}
