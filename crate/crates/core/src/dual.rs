//! The dual of an extension `1 -> G -> H -> Q -> 1`: the action of `Q` on
//! the irreducible representations of `G`, its orbits and stabilizers, and
//! for each orbit the intertwiners `T_q` and the scalar 2-cocycle measuring
//! their failure to multiply.
//!
//! Conventions. `phi_q` is conjugation by the section lift `s(q)`. The
//! permutation of `q` sends `[rho]` to `[rho o phi_{q^-1}]`, a left action.
//! For `q` in the stabilizer of `rho`, `T_q` is unitary with determinant 1 and
//!
//! ```text
//! T_q rho(g) = rho(phi_q(g)) T_q
//! ```
//!
//! so that `g s(q) -> rho(g) T_q` is a projective representation of the
//! preimage of the stabilizer in `H`. Its multiplier is the cocycle
//!
//! ```text
//! c(q, q') I = T_q T_q' T_qq'^-1 rho(f(q, q'))^-1,   f(q, q') = s(q) s(q') s(qq')^-1
//! ```
//!
//! where `f` is the section defect, an element of `G`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use crate::clifford;
use crate::group::{Extension, FiniteGroup, GroupError};
use crate::repr::{
    compute_irreps, intertwiner, intertwining_residual, CMatrix, Irrep, IrrepSet, ReprError,
    RESIDUAL_TOL,
};

/// Snap distance allowed between a cocycle value and a root of unity.
pub const SNAP_TOL: f64 = 1e-6;

/// Coboundary searches larger than this fall back to counting twisted irreps.
const COBOUNDARY_SEARCH_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Bound on matrix residuals (intertwining relation, scalar defects).
    pub residual: f64,
    /// Bound on the distance between a defect scalar and its root of unity.
    pub snap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: RESIDUAL_TOL,
            snap: SNAP_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DualError {
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("irreps were computed for a group of order {found}, expected |G| = {expected}")]
    GhatMismatch { expected: usize, found: usize },
    #[error("twisting irrep {index} by q = {q} matches no irrep of G")]
    ActionBroken { q: usize, index: usize },
    #[error("permutations fail to form an action at ({0}, {1})")]
    NotAnAction(usize, usize),
    #[error("q = {q} does not fix irrep {index}")]
    NotStabilizing { q: usize, index: usize },
    #[error("defect at ({q1}, {q2}) is not scalar: residual {residual:e}")]
    NotScalar { q1: usize, q2: usize, residual: f64 },
    #[error("defect at ({q1}, {q2}) is not within {tol:e} of a root of unity of order <= {bound}")]
    SnapFailure {
        q1: usize,
        q2: usize,
        tol: f64,
        bound: usize,
    },
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
}

/// A normalized 2-cocycle with values in `Z/m`, `k` standing for
/// `exp(2 pi i k / m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    base: FiniteGroup,
    modulus: u32,
    values: Vec<u32>,
}

impl Cocycle {
    /// Checks normalization and the cocycle identity, exactly.
    pub fn new(base: FiniteGroup, modulus: u32, values: Vec<u32>) -> Result<Self, DualError> {
        let n = base.order();
        if modulus == 0 {
            return Err(DualError::InvalidCocycle("modulus must be positive".into()));
        }
        if values.len() != n * n {
            return Err(DualError::InvalidCocycle(format!(
                "expected {} values, found {}",
                n * n,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >= modulus) {
            return Err(DualError::InvalidCocycle(format!(
                "value {v} is not reduced mod {modulus}"
            )));
        }
        let c = Cocycle {
            base,
            modulus,
            values,
        };
        if let Some(a) = (0..n).find(|&a| c.value(0, a) != 0 || c.value(a, 0) != 0) {
            return Err(DualError::InvalidCocycle(format!(
                "not normalized at element {a}"
            )));
        }
        if let Some((a, b, d)) = c.identity_violation() {
            return Err(DualError::InvalidCocycle(format!(
                "cocycle identity fails at ({a}, {b}, {d})"
            )));
        }
        Ok(c)
    }

    /// The constant cocycle `1`, with modulus 1.
    pub fn zero(base: FiniteGroup) -> Self {
        let n = base.order();
        Cocycle {
            base,
            modulus: 1,
            values: vec![0; n * n],
        }
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> u32 {
        self.values[a * self.base.order() + b]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.values
            .chunks(self.base.order())
            .map(<[u32]>::to_vec)
            .collect()
    }

    pub fn phase(&self, a: usize, b: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.value(a, b) as f64 / self.modulus as f64)
    }

    /// First triple violating `c(a,b) + c(ab,d) = c(a,bd) + c(b,d) mod m`.
    pub fn identity_violation(&self) -> Option<(usize, usize, usize)> {
        let g = &self.base;
        let m = self.modulus;
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                for d in 0..g.order() {
                    let lhs = self.value(a, b) + self.value(ab, d);
                    let rhs = self.value(a, g.mul(b, d)) + self.value(b, d);
                    if lhs % m != rhs % m {
                        return Some((a, b, d));
                    }
                }
            }
        }
        None
    }

    /// `c + delta(lambda)` where `delta(lambda)(a,b) = lambda(a) + lambda(b) - lambda(ab)`.
    pub fn with_coboundary(&self, lambda: &[u32]) -> Cocycle {
        let g = &self.base;
        let m = self.modulus as u64;
        assert_eq!(lambda.len(), g.order());
        assert_eq!(
            lambda[0] % self.modulus,
            0,
            "coboundary must vanish at the identity"
        );
        let mut values = Vec::with_capacity(self.values.len());
        for a in 0..g.order() {
            for b in 0..g.order() {
                let v = self.value(a, b) as u64 + lambda[a] as u64 + lambda[b] as u64 + m
                    - (lambda[g.mul(a, b)] as u64 % m);
                values.push((v % m) as u32);
            }
        }
        Cocycle {
            base: self.base.clone(),
            modulus: self.modulus,
            values,
        }
    }

    /// The pointwise inverse `-c`.
    pub fn inverse(&self) -> Cocycle {
        let m = self.modulus;
        Cocycle {
            base: self.base.clone(),
            modulus: m,
            values: self.values.iter().map(|&v| (m - v) % m).collect(),
        }
    }

    /// The same cocycle written with values in `Z/(factor * m)`.
    pub fn rescaled(&self, factor: u32) -> Cocycle {
        Cocycle {
            base: self.base.clone(),
            modulus: self.modulus * factor,
            values: self.values.iter().map(|&v| v * factor).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Triviality {
    Trivial,
    NonTrivial,
    Unknown,
}

/// Worst-case numbers observed while building one orbit's cocycle.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CocycleDiagnostics {
    pub max_intertwiner_residual: f64,
    pub max_scalar_residual: f64,
    pub max_snap_distance: f64,
}

/// One component of the dual.
#[derive(Debug, Clone)]
pub struct DualOrbit {
    pub rep_index: usize,
    pub dim: usize,
    pub orbit: Vec<usize>,
    /// Elements of `Q` fixing the representative, sorted.
    pub stabilizer: Vec<usize>,
    /// Intertwiners indexed like `stabilizer`.
    pub intertwiners: Vec<CMatrix>,
    /// Cocycle on the stabilizer, whose element `k` is `stabilizer[k]`.
    pub cocycle: Cocycle,
    pub diagnostics: CocycleDiagnostics,
}

#[derive(Debug, Clone)]
pub struct DualSpace {
    ext: Extension,
    ghat: IrrepSet,
    action: Vec<Vec<usize>>,
    orbits: Vec<DualOrbit>,
}

/// splitmix64 finalizer; separates the random streams used per orbit and
/// per stabilizer element.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The permutation of the irreps of `G` induced by each `q`.
pub fn q_action_on_ghat(ext: &Extension, ghat: &IrrepSet) -> Result<Vec<Vec<usize>>, DualError> {
    check_ghat(ext, ghat)?;
    let q = ext.q();
    let mut action = Vec::with_capacity(q.order());
    for x in 0..q.order() {
        let alpha = ext.conj_action(q.inv(x));
        let mut perm = Vec::with_capacity(ghat.len());
        for (i, rho) in ghat.irreps().iter().enumerate() {
            let twisted: Vec<Complex64> = alpha.iter().map(|&g| rho.character()[g]).collect();
            let j = ghat
                .find(&twisted)
                .ok_or(DualError::ActionBroken { q: x, index: i })?;
            perm.push(j);
        }
        action.push(perm);
    }
    if action[0].iter().enumerate().any(|(i, &j)| i != j) {
        return Err(DualError::NotAnAction(0, 0));
    }
    for a in 0..q.order() {
        for b in 0..q.order() {
            let ab = &action[q.mul(a, b)];
            if (0..ghat.len()).any(|i| ab[i] != action[a][action[b][i]]) {
                return Err(DualError::NotAnAction(a, b));
            }
        }
    }
    Ok(action)
}

fn check_ghat(ext: &Extension, ghat: &IrrepSet) -> Result<(), DualError> {
    if ghat.group().order() != ext.g().order() {
        return Err(DualError::GhatMismatch {
            expected: ext.g().order(),
            found: ghat.group().order(),
        });
    }
    Ok(())
}

/// Orbits (sorted, representative first since it is the minimum) paired
/// with the stabilizer of their representative.
pub fn orbits_and_stabilizers(action: &[Vec<usize>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let points = action.first().map_or(0, Vec::len);
    let mut seen = vec![false; points];
    let mut out = Vec::new();
    for i in 0..points {
        if seen[i] {
            continue;
        }
        let mut orbit: Vec<usize> = action.iter().map(|perm| perm[i]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &j in &orbit {
            seen[j] = true;
        }
        let stabilizer = (0..action.len()).filter(|&q| action[q][i] == i).collect();
        out.push((orbit, stabilizer));
    }
    out
}

/// Determinant-one unitary intertwiners `T_q rho(g) = rho(phi_q(g)) T_q`
/// for every `q` in `stabilizer`; `T_e = I`.
pub fn compute_intertwiners(
    ext: &Extension,
    rho: &Irrep,
    stabilizer: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<(Vec<CMatrix>, f64), DualError> {
    let d = rho.dim();
    let mut worst: f64 = 0.0;
    let mut out = Vec::with_capacity(stabilizer.len());
    for (index, &q) in stabilizer.iter().enumerate() {
        if q == 0 || d == 1 {
            // one-dimensional: rho o phi_q = rho exactly, and det = 1 forces T = 1
            if q != 0 {
                let twisted = rho.twisted(ext.conj_action(q));
                let gap = rho
                    .character()
                    .iter()
                    .zip(twisted.character())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                if gap > 0.5 {
                    return Err(DualError::NotStabilizing { q, index });
                }
                worst = worst.max(gap);
            }
            out.push(CMatrix::identity(d, d));
            continue;
        }
        let sigma = rho.twisted(ext.conj_action(q));
        let mut t = intertwiner(rho, &sigma, derive_seed(seed, q as u64))?
            .ok_or(DualError::NotStabilizing { q, index })?;
        let det = t.determinant();
        t *= Complex64::from_polar(1.0, -det.arg() / d as f64);
        let residual = intertwining_residual(&t, rho, &sigma);
        if residual > tol.residual {
            return Err(ReprError::NumericalFailure(format!(
                "intertwiner for q = {q} has residual {residual:e}"
            ))
            .into());
        }
        worst = worst.max(residual);
        out.push(t);
    }
    Ok((out, worst))
}

/// Smallest `m <= bound` such that `z` is within `tol` of an `m`-th root of
/// unity, with the exponent of that root.
fn root_of_unity_order(z: Complex64, bound: usize, tol: f64) -> Option<(usize, u64)> {
    (1..=bound).find_map(|m| {
        let k = snap_exponent(z, m);
        (snap_distance(z, m, k) < tol).then_some((m, k))
    })
}

fn snap_exponent(z: Complex64, m: usize) -> u64 {
    let turns = z.arg().rem_euclid(TAU) / TAU;
    ((turns * m as f64).round() as u64) % m as u64
}

fn snap_distance(z: Complex64, m: usize, k: u64) -> f64 {
    (z - Complex64::from_polar(1.0, TAU * k as f64 / m as f64)).norm()
}

/// The scalar defects `c(q, q')` snapped to the smallest group of roots of
/// unity containing all of them.
pub fn compute_cocycle(
    ext: &Extension,
    rho: &Irrep,
    stabilizer: &[usize],
    intertwiners: &[CMatrix],
    tol: &Tolerances,
) -> Result<(Cocycle, CocycleDiagnostics), DualError> {
    let q = ext.q();
    let base = q.subgroup("stabilizer", stabilizer)?;
    let n = stabilizer.len();
    let d = rho.dim();
    let local = |x: usize| {
        stabilizer
            .binary_search(&x)
            .expect("stabilizer is a sorted subgroup")
    };
    let identity = CMatrix::identity(d, d);

    let mut scalars = Vec::with_capacity(n * n);
    let mut diag = CocycleDiagnostics::default();
    for (a, &qa) in stabilizer.iter().enumerate() {
        for (b, &qb) in stabilizer.iter().enumerate() {
            let ab = local(q.mul(qa, qb));
            let f = ext.section_defect(qa, qb);
            let y = &intertwiners[a]
                * &intertwiners[b]
                * intertwiners[ab].adjoint()
                * rho.matrix(f).adjoint();
            let lambda = y.trace() / d as f64;
            let residual = (&y - &identity * lambda).norm();
            if residual > tol.residual {
                return Err(DualError::NotScalar {
                    q1: qa,
                    q2: qb,
                    residual,
                });
            }
            diag.max_scalar_residual = diag.max_scalar_residual.max(residual);
            scalars.push(lambda);
        }
    }

    let bound = d * n * ext.g().order();
    let mut modulus = 1usize;
    for (idx, &z) in scalars.iter().enumerate() {
        let (m, _) = root_of_unity_order(z, bound, tol.snap).ok_or(DualError::SnapFailure {
            q1: stabilizer[idx / n],
            q2: stabilizer[idx % n],
            tol: tol.snap,
            bound,
        })?;
        modulus = modulus.lcm(&m);
    }
    if modulus > bound {
        return Err(DualError::SnapFailure {
            q1: 0,
            q2: 0,
            tol: tol.snap,
            bound,
        });
    }
    let mut values = Vec::with_capacity(n * n);
    for &z in &scalars {
        let k = snap_exponent(z, modulus);
        diag.max_snap_distance = diag.max_snap_distance.max(snap_distance(z, modulus, k));
        values.push(k as u32);
    }
    let cocycle = Cocycle::new(base, modulus as u32, values)?;
    Ok((cocycle, diag))
}

/// Decides whether `c` is a coboundary.
///
/// Any trivializing cochain `lambda` for a cocycle with values in `Z/m` has
/// `lambda^m` a character of the base, so `lambda` takes values in
/// `Z/(m * exponent)`; the search runs over those cochains with pruning.
/// Searches too large for that fall back to counting twisted irreps.
pub fn cocycle_triviality(c: &Cocycle) -> Triviality {
    let g = c.base();
    let n = g.order();
    if n == 1 || c.values.iter().all(|&v| v == 0) {
        return Triviality::Trivial;
    }
    let big = c.modulus() as usize * g.exponent();
    if (big as f64).powi(n as i32 - 1) <= COBOUNDARY_SEARCH_LIMIT {
        let scaled = c.rescaled((big / c.modulus() as usize) as u32);
        return if find_trivializing_cochain(&scaled).is_some() {
            Triviality::Trivial
        } else {
            Triviality::NonTrivial
        };
    }
    match clifford::twisted_irreps(c, 0) {
        Ok(data) if data.count == g.conjugacy_classes().len() => Triviality::Trivial,
        Ok(_) => Triviality::NonTrivial,
        Err(_) => Triviality::Unknown,
    }
}

/// A cochain `lambda` with `lambda(0) = 0` and `delta(lambda) = c`, if one
/// exists with values in `Z/m`.
pub fn find_trivializing_cochain(c: &Cocycle) -> Option<Vec<u32>> {
    let g = c.base();
    let n = g.order();
    let m = c.modulus();
    // constraints become checkable once the largest of a, b, ab is assigned
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in 0..n {
            let top = a.max(b).max(g.mul(a, b));
            checks[top].push((a, b));
        }
    }
    let mut lambda = vec![0u32; n];
    fn rec(k: usize, lambda: &mut [u32], c: &Cocycle, checks: &[Vec<(usize, usize)>]) -> bool {
        let n = lambda.len();
        if k == n {
            return true;
        }
        let m = c.modulus();
        let g = c.base();
        for v in 0..m {
            lambda[k] = v;
            let ok = checks[k].iter().all(|&(a, b)| {
                let lhs = (lambda[a] + lambda[b]) % m;
                let rhs = (c.value(a, b) + lambda[g.mul(a, b)]) % m;
                lhs == rhs
            });
            if ok && rec(k + 1, lambda, c, checks) {
                return true;
            }
        }
        false
    }
    if !checks[0]
        .iter()
        .all(|&(a, b)| c.value(a, b).is_multiple_of(m))
    {
        return None;
    }
    rec(1, &mut lambda, c, &checks).then_some(lambda)
}

impl DualSpace {
    /// Runs the whole construction for an extension and a precomputed set
    /// of irreps of `G`. Orbits are processed in parallel, each with its own
    /// derived seed.
    pub fn compute(
        ext: &Extension,
        ghat: IrrepSet,
        seed: u64,
        tol: &Tolerances,
    ) -> Result<Self, DualError> {
        let action = q_action_on_ghat(ext, &ghat)?;
        let pairs = orbits_and_stabilizers(&action);
        let orbits = pairs
            .into_par_iter()
            .map(|(orbit, stabilizer)| {
                let rep_index = orbit[0];
                let rho = ghat.get(rep_index);
                let orbit_seed = derive_seed(seed, rep_index as u64 + 1);
                let (intertwiners, t_res) =
                    compute_intertwiners(ext, rho, &stabilizer, orbit_seed, tol)?;
                let (cocycle, mut diagnostics) =
                    compute_cocycle(ext, rho, &stabilizer, &intertwiners, tol)?;
                diagnostics.max_intertwiner_residual = t_res;
                Ok(DualOrbit {
                    rep_index,
                    dim: rho.dim(),
                    orbit,
                    stabilizer,
                    intertwiners,
                    cocycle,
                    diagnostics,
                })
            })
            .collect::<Result<Vec<_>, DualError>>()?;
        Ok(DualSpace {
            ext: ext.clone(),
            ghat,
            action,
            orbits,
        })
    }

    /// Computes the irreps of `G` with `seed` and then the dual.
    pub fn from_extension(ext: &Extension, seed: u64, tol: &Tolerances) -> Result<Self, DualError> {
        let ghat = compute_irreps(ext.g(), seed)?;
        Self::compute(ext, ghat, seed, tol)
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    pub fn ghat(&self) -> &IrrepSet {
        &self.ghat
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn orbits(&self) -> &[DualOrbit] {
        &self.orbits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::{bundled_library, find};

    fn dual(name: &str, seed: u64) -> DualSpace {
        let ext = find(name).unwrap().extension;
        DualSpace::from_extension(&ext, seed, &Tolerances::default()).unwrap()
    }

    fn shape(d: &DualSpace) -> Vec<(Vec<usize>, usize)> {
        d.orbits()
            .iter()
            .map(|o| (o.orbit.clone(), o.stabilizer.len()))
            .collect()
    }

    #[test]
    fn trivial_gerbe_has_one_point() {
        let d = dual("trivial-s3", 0);
        assert!(d.action().iter().all(|p| p == &vec![0]));
        assert_eq!(shape(&d), vec![(vec![0], 6)]);
        let c = &d.orbits()[0].cocycle;
        assert_eq!(c.modulus(), 1);
        assert_eq!(cocycle_triviality(c), Triviality::Trivial);
    }

    #[test]
    fn s3_swaps_the_nontrivial_characters() {
        let d = dual("z3-s3-z2", 0);
        assert_eq!(d.action(), &[vec![0, 1, 2], vec![0, 2, 1]]);
        assert_eq!(shape(&d), vec![(vec![0], 2), (vec![1, 2], 1)]);
    }

    #[test]
    fn central_quaternion_action_is_trivial() {
        let d = dual("z2-q8-v4", 0);
        assert!(d.action().iter().all(|p| p == &vec![0, 1]));
        assert_eq!(shape(&d), vec![(vec![0], 4), (vec![1], 4)]);
    }

    #[test]
    fn s3_permutes_klein_characters_transitively() {
        let d = dual("v4-s4-s3", 0);
        assert_eq!(shape(&d), vec![(vec![0], 6), (vec![1, 2, 3], 2)]);
    }

    #[test]
    fn one_dimensional_intertwiners_are_one() {
        let d = dual("z2-d4-v4", 3);
        let sign = &d.orbits()[1];
        assert_eq!(sign.dim, 1);
        for t in &sign.intertwiners {
            assert_eq!(t, &CMatrix::identity(1, 1));
        }
    }

    #[test]
    fn intertwiners_have_unit_determinant() {
        for name in ["q8-sl23-z3", "a4-s4-z2", "split-s3xz2"] {
            let d = dual(name, 7);
            let big = d.orbits().iter().find(|o| o.dim > 1).unwrap();
            assert_eq!(big.intertwiners[0], CMatrix::identity(big.dim, big.dim));
            for t in &big.intertwiners {
                assert!((t.determinant() - 1.0).norm() < 1e-9, "{name}");
                assert!((t * t.adjoint() - CMatrix::identity(big.dim, big.dim)).norm() < 1e-9);
            }
            assert!(big.diagnostics.max_intertwiner_residual < 1e-9);
        }
    }

    #[test]
    fn quaternion_sign_orbit_carries_discrete_torsion() {
        let d = dual("z2-q8-v4", 0);
        assert_eq!(
            cocycle_triviality(&d.orbits()[0].cocycle),
            Triviality::Trivial
        );
        let c = &d.orbits()[1].cocycle;
        assert_eq!(c.modulus(), 2);
        assert_eq!(cocycle_triviality(c), Triviality::NonTrivial);
    }

    #[test]
    fn cyclic_sign_orbit_is_trivial() {
        let d = dual("z2-z4-z2", 0);
        let c = &d.orbits()[1].cocycle;
        assert_eq!(c.modulus(), 2);
        assert_eq!(c.value(1, 1), 1);
        assert_eq!(cocycle_triviality(c), Triviality::Trivial);
    }

    #[test]
    fn every_bundled_orbit_is_consistent() {
        for entry in bundled_library() {
            let d = DualSpace::from_extension(&entry.extension, 1, &Tolerances::default()).unwrap();
            let q = entry.extension.q().order();
            let mut covered = 0;
            for o in d.orbits() {
                assert_eq!(o.orbit.len() * o.stabilizer.len(), q, "{}", entry.name);
                assert_eq!(o.cocycle.identity_violation(), None);
                assert!(o.diagnostics.max_scalar_residual < 1e-9);
                assert!(o.diagnostics.max_snap_distance < 1e-6);
                covered += o.orbit.len();
            }
            assert_eq!(covered, d.ghat().len(), "{}", entry.name);
        }
    }

    #[test]
    fn determinant_normalization_bounds_values() {
        // where the section defect is trivial, c^d = det(rho(f))^-1 = 1
        for name in ["a4-s4-z2", "q8-sl23-z3", "split-s3xz2"] {
            let entry = find(name).unwrap().extension;
            let d = DualSpace::from_extension(&entry, 2, &Tolerances::default()).unwrap();
            for o in d.orbits() {
                let m = o.cocycle.modulus() as usize;
                for (a, &qa) in o.stabilizer.iter().enumerate() {
                    for (b, &qb) in o.stabilizer.iter().enumerate() {
                        if entry.section_defect(qa, qb) == 0 {
                            assert_eq!(o.dim * o.cocycle.value(a, b) as usize % m, 0, "{name}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn banded_abelian_means_singleton_orbits() {
        for entry in bundled_library() {
            let ext = &entry.extension;
            if !(ext.is_banded() && ext.g().is_abelian()) {
                continue;
            }
            let d = DualSpace::from_extension(ext, 0, &Tolerances::default()).unwrap();
            for o in d.orbits() {
                assert_eq!(o.orbit.len(), 1, "{}", entry.name);
                assert_eq!(o.stabilizer.len(), ext.q().order());
            }
        }
    }

    #[test]
    fn triviality_verdict_is_seed_independent() {
        for entry in bundled_library() {
            let verdicts: Vec<Vec<Triviality>> = [0u64, 17, 9001]
                .iter()
                .map(|&s| {
                    DualSpace::from_extension(&entry.extension, s, &Tolerances::default())
                        .unwrap()
                        .orbits()
                        .iter()
                        .map(|o| cocycle_triviality(&o.cocycle))
                        .collect()
                })
                .collect();
            assert_eq!(verdicts[0], verdicts[1], "{}", entry.name);
            assert_eq!(verdicts[0], verdicts[2], "{}", entry.name);
        }
    }

    #[test]
    fn cocycle_constructor_rejects_bad_tables() {
        let z2 = FiniteGroup::cyclic(2);
        assert!(Cocycle::new(z2.clone(), 2, vec![0, 0, 0, 1]).is_ok());
        assert!(matches!(
            Cocycle::new(z2.clone(), 2, vec![0, 1, 0, 0]),
            Err(DualError::InvalidCocycle(_))
        ));
        assert!(Cocycle::new(z2, 2, vec![0, 0, 0, 2]).is_err());
        let z4 = FiniteGroup::cyclic(4);
        let bilinear: Vec<u32> = (0..16).map(|k| ((k / 4) * (k % 4) % 2) as u32).collect();
        assert!(Cocycle::new(z4.clone(), 2, bilinear).is_ok());
        let mut broken = vec![0u32; 16];
        broken[4 + 1] = 1;
        assert!(Cocycle::new(z4, 2, broken).is_err());
    }

    #[test]
    fn coboundaries_are_trivial_and_torsion_survives_them() {
        let z4 = FiniteGroup::cyclic(4);
        // carry cocycle scaled to 1/2: trivial, but only via a Z/8-valued cochain
        let carry: Vec<u32> = (0..16).map(|k| u32::from((k / 4) + (k % 4) >= 4)).collect();
        let c = Cocycle::new(z4, 2, carry).unwrap();
        assert!(find_trivializing_cochain(&c).is_none());
        assert_eq!(cocycle_triviality(&c), Triviality::Trivial);

        let d = dual("z2-q8-v4", 0);
        let torsion = d.orbits()[1].cocycle.clone();
        let shifted = torsion.with_coboundary(&[0, 1, 1, 0]);
        assert_eq!(cocycle_triviality(&shifted), Triviality::NonTrivial);
        assert_eq!(
            cocycle_triviality(&torsion.inverse()),
            Triviality::NonTrivial
        );
    }
}
