//! Irreducible unitary representations of finite groups.
//!
//! The irreducibles are found by splitting the left regular representation
//! with a random Hermitian element `a` of the group algebra acting by right
//! convolution. That operator commutes with every left translation, so each
//! of its eigenspaces is a subrepresentation, and for a generic `a` each
//! eigenspace is irreducible. One eigenspace per character is kept.

use std::cmp::Reverse;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::group::{FiniteGroup, DEFAULT_ORDER_BOUND};

pub type CMatrix = DMatrix<Complex64>;

/// Residual tolerance for every matrix identity checked by the crate.
pub const RESIDUAL_TOL: f64 = 1e-9;

const SPLIT_ATTEMPTS: u64 = 6;
const INTERTWINER_ATTEMPTS: u64 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReprError {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("group order {order} exceeds the bound {bound}")]
    OrderBoundExceeded { order: usize, bound: usize },
    #[error("representations live on groups of different orders ({0} vs {1})")]
    GroupMismatch(usize, usize),
}

/// Deterministic generator for a `(seed, stream)` pair.
pub(crate) fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub(crate) fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), normal(rng)))
}

/// A unitary representation stored as one matrix per group element.
#[derive(Debug, Clone)]
pub struct Irrep {
    dim: usize,
    matrices: Vec<CMatrix>,
    character: Vec<Complex64>,
}

impl Irrep {
    pub fn from_matrices(matrices: Vec<CMatrix>) -> Self {
        let dim = matrices.first().map_or(0, |m| m.nrows());
        let character = matrices.iter().map(|m| m.trace()).collect();
        Irrep {
            dim,
            matrices,
            character,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group_order(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn character(&self) -> &[Complex64] {
        &self.character
    }

    /// The representation `g -> self(alpha(g))` for an automorphism `alpha`
    /// given as an image array.
    pub fn twisted(&self, alpha: &[usize]) -> Irrep {
        Irrep {
            dim: self.dim,
            matrices: alpha.iter().map(|&a| self.matrices[a].clone()).collect(),
            character: alpha.iter().map(|&a| self.character[a]).collect(),
        }
    }

    /// `max ||U(ab) - U(a) U(b)||` over all pairs.
    pub fn homomorphism_residual(&self, group: &FiniteGroup) -> f64 {
        let n = group.order();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let r = (&self.matrices[group.mul(a, b)] - &self.matrices[a] * &self.matrices[b])
                    .norm();
                worst = worst.max(r);
            }
        }
        worst
    }

    /// `max ||U(a) U(a)* - I||`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = CMatrix::identity(self.dim, self.dim);
        self.matrices
            .iter()
            .map(|m| (m * m.adjoint() - &id).norm())
            .fold(0.0, f64::max)
    }

    /// `|<chi, chi> - 1|`, zero exactly for irreducible characters.
    pub fn irreducibility_defect(&self) -> f64 {
        (character_inner_product(&self.character, &self.character).re - 1.0).abs()
    }
}

/// `(1/n) sum_g a(g) conj(b(g))`.
pub fn character_inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let n = a.len() as f64;
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y.conj())
        .sum::<Complex64>()
        / n
}

/// The complete set of irreducible representations of a group, ordered by
/// dimension and then by the character rounded to six decimals, larger
/// first, so the trivial representation has index 0.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    group: FiniteGroup,
    irreps: Vec<Irrep>,
}

/// Characters evaluated on class representatives.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub classes: Vec<Vec<usize>>,
    pub characters: Vec<Vec<Complex64>>,
}

impl IrrepSet {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn get(&self, i: usize) -> &Irrep {
        &self.irreps[i]
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(Irrep::dim).collect()
    }

    /// Index of the member whose character matches `character`.
    pub fn find(&self, character: &[Complex64]) -> Option<usize> {
        self.irreps
            .iter()
            .position(|r| (character_inner_product(character, r.character()) - 1.0).norm() < 0.5)
    }

    pub fn max_homomorphism_residual(&self) -> f64 {
        self.irreps
            .iter()
            .map(|r| r.homomorphism_residual(&self.group))
            .fold(0.0, f64::max)
    }

    pub fn max_unitarity_residual(&self) -> f64 {
        self.irreps
            .iter()
            .map(Irrep::unitarity_residual)
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the character Gram matrix from the identity.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.irreps.iter().enumerate() {
            for (j, b) in self.irreps.iter().enumerate() {
                let ip = character_inner_product(a.character(), b.character());
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// Largest spread of any character within a conjugacy class.
    pub fn class_constancy_residual(&self) -> f64 {
        let classes = self.group.conjugacy_classes();
        let mut worst: f64 = 0.0;
        for r in &self.irreps {
            for class in &classes {
                let first = r.character()[class[0]];
                for &x in class {
                    worst = worst.max((r.character()[x] - first).norm());
                }
            }
        }
        worst
    }

    pub fn character_table(&self) -> CharacterTable {
        let classes = self.group.conjugacy_classes();
        let characters = self
            .irreps
            .iter()
            .map(|r| classes.iter().map(|c| r.character()[c[0]]).collect())
            .collect();
        CharacterTable {
            classes,
            characters,
        }
    }
}

fn rounded(z: Complex64) -> (i64, i64) {
    ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
}

/// Computes every irreducible unitary representation of `group`.
///
/// Deterministic in `(group, seed)`. A split that leaves a reducible
/// eigenspace is retried with fresh randomness derived from the same seed.
pub fn compute_irreps(group: &FiniteGroup, seed: u64) -> Result<IrrepSet, ReprError> {
    let n = group.order();
    if n > DEFAULT_ORDER_BOUND {
        return Err(ReprError::OrderBoundExceeded {
            order: n,
            bound: DEFAULT_ORDER_BOUND,
        });
    }
    let class_count = group.conjugacy_classes().len();
    let mut reason = String::new();
    for attempt in 0..SPLIT_ATTEMPTS {
        let mut rng = seeded_rng(seed, attempt);
        match split_regular(group, &mut rng) {
            Ok(mut irreps) => {
                let sum: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
                if irreps.len() == class_count && sum == n {
                    irreps.sort_by_cached_key(|r| {
                        let key: Vec<_> = r.character.iter().map(|&z| rounded(z)).collect();
                        (r.dim, Reverse(key))
                    });
                    return Ok(IrrepSet {
                        group: group.clone(),
                        irreps,
                    });
                }
                reason = format!(
                    "found {} irreps with sum of squared dimensions {sum}, expected {class_count} and {n}",
                    irreps.len()
                );
            }
            Err(r) => reason = r,
        }
    }
    Err(ReprError::NumericalFailure(reason))
}

fn split_regular(group: &FiniteGroup, rng: &mut ChaCha8Rng) -> Result<Vec<Irrep>, String> {
    let n = group.order();
    let inv = group.inverse_table();

    let mut a = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let ki = inv[k];
        if ki == k {
            a[k] = Complex64::new(normal(rng), 0.0);
        } else if k < ki {
            let z = Complex64::new(normal(rng), normal(rng));
            a[k] = z;
            a[ki] = z.conj();
        }
    }
    let op = CMatrix::from_fn(n, n, |i, j| a[group.mul(inv[i], j)]);
    let eig = SymmetricEigen::new(op);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gap = 1e-8 * scale;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()] < gap => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut found: Vec<Irrep> = Vec::new();
    for cluster in clusters {
        let basis = eig.eigenvectors.select_columns(&cluster);
        let d = cluster.len();
        // row r of L(g) E is row g^-1 r of E
        let translated = |g: usize| CMatrix::from_fn(n, d, |r, c| basis[(group.mul(inv[g], r), c)]);
        let character: Vec<Complex64> = (0..n)
            .map(|g| {
                let gi = inv[g];
                let mut t = Complex64::new(0.0, 0.0);
                for c in 0..d {
                    for r in 0..n {
                        t += basis[(r, c)].conj() * basis[(group.mul(gi, r), c)];
                    }
                }
                t
            })
            .collect();
        let norm = character_inner_product(&character, &character).re;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(format!(
                "eigenspace of dimension {d} is reducible (<chi,chi> = {norm:.6})"
            ));
        }
        if found
            .iter()
            .any(|r| (character_inner_product(&character, &r.character) - 1.0).norm() < 0.5)
        {
            continue;
        }
        let adj = basis.adjoint();
        let mut matrices: Vec<CMatrix> = (0..n).map(|g| &adj * translated(g)).collect();
        matrices[0] = CMatrix::identity(d, d);
        found.push(Irrep::from_matrices(matrices));
    }
    Ok(found)
}

/// Whether two representations of the same group have matching characters.
pub fn are_equivalent(a: &Irrep, b: &Irrep) -> Result<bool, ReprError> {
    if a.group_order() != b.group_order() {
        return Err(ReprError::GroupMismatch(a.group_order(), b.group_order()));
    }
    Ok((character_inner_product(a.character(), b.character()) - 1.0).norm() < 0.5)
}

/// `max_g ||S rho(g) - sigma(g) S||`.
pub fn intertwining_residual(s: &CMatrix, rho: &Irrep, sigma: &Irrep) -> f64 {
    rho.matrices()
        .iter()
        .zip(sigma.matrices())
        .map(|(r, q)| (s * r - q * s).norm())
        .fold(0.0, f64::max)
}

/// A unitary `S` with `S rho(g) = sigma(g) S` for every `g`, or `None` when
/// the two representations are inequivalent.
///
/// `S` is the unitary factor of the group average of `sigma(g) X rho(g)^-1`
/// for a random `X`.
pub fn intertwiner(rho: &Irrep, sigma: &Irrep, seed: u64) -> Result<Option<CMatrix>, ReprError> {
    if rho.dim() != sigma.dim() || !are_equivalent(rho, sigma)? {
        return Ok(None);
    }
    let d = rho.dim();
    let n = rho.group_order() as f64;
    for attempt in 0..INTERTWINER_ATTEMPTS {
        let mut rng = seeded_rng(seed, attempt);
        let x = random_complex_matrix(&mut rng, d, d);
        let mut avg = CMatrix::zeros(d, d);
        for (r, q) in rho.matrices().iter().zip(sigma.matrices()) {
            avg += q * &x * r.adjoint();
        }
        avg /= Complex64::new(n, 0.0);
        if avg.norm() < 1e-8 * x.norm() {
            continue;
        }
        let svd = avg.svd(true, true);
        let s = svd.u.unwrap() * svd.v_t.unwrap();
        let residual = intertwining_residual(&s, rho, sigma);
        if residual > RESIDUAL_TOL {
            return Err(ReprError::NumericalFailure(format!(
                "intertwiner residual {residual:e} exceeds {RESIDUAL_TOL:e}"
            )));
        }
        return Ok(Some(s));
    }
    Err(ReprError::NumericalFailure(format!(
        "averaged operator was singular for {INTERTWINER_ATTEMPTS} consecutive draws"
    )))
}
