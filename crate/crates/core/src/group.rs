//! Finite groups as validated Cayley tables, homomorphisms between them, and
//! short exact sequences `1 -> G -> H -> Q -> 1` with a fixed set-theoretic
//! section.
//!
//! Element `0` is always the identity. Permutation groups follow the
//! composition convention `(a * b)(i) = a[b[i]]`, i.e. `b` is applied first.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;

/// Default bound on the order of any group the crate will materialize.
pub const DEFAULT_ORDER_BOUND: usize = 5000;

/// Tables up to this order are checked for associativity triple by triple.
/// Larger tables use Light's test over a generating set.
const FULL_ASSOCIATIVITY_SCAN: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    Empty,
    #[error("table must be {order}x{order}, found {found}")]
    Malformed { order: usize, found: String },
    #[error("table[{row}][{col}] = {value} is out of range 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("element 0 is not a two-sided identity (fails at element {0})")]
    NoIdentityAtZero(usize),
    #[error("not a Latin square: {axis} {index} repeats element {value}")]
    NotLatinSquare {
        axis: Axis,
        index: usize,
        value: usize,
    },
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("group order exceeds the bound {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    InvalidPermutation { index: usize, degree: usize },
    #[error("product of elements {0} and {1} is not in the element list")]
    NotClosed(usize, usize),
    #[error("{name}: map has length {found}, expected {expected}")]
    MapLength {
        name: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("{name}: image {value} of element {index} is out of range 0..{order}")]
    MapOutOfRange {
        name: &'static str,
        index: usize,
        value: usize,
        order: usize,
    },
    #[error("{name}: not a homomorphism at ({0}, {1})", .pair.0, .pair.1)]
    NotHomomorphism {
        name: &'static str,
        pair: (usize, usize),
    },
    #[error("|G| * |Q| = {g} * {q} differs from |H| = {h}")]
    OrderMismatch { g: usize, h: usize, q: usize },
    #[error("iota is not injective: {0} and {1} have the same image")]
    NotInjective(usize, usize),
    #[error("pi is not surjective: {0} has no preimage")]
    NotSurjective(usize),
    #[error("not exact at H: element {witness} {}", if *.in_kernel { "lies in ker(pi) but not in im(iota)" } else { "lies in im(iota) but not in ker(pi)" })]
    NotExact { witness: usize, in_kernel: bool },
    #[error("conjugation by the lift of {0} is not an automorphism of G")]
    NotAutomorphism(usize),
}

/// A finite group stored as its full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

/// Checks a multiplication table and wraps it as a [`FiniteGroup`].
///
/// Checks run in the order shape, entry range, identity at `0`, Latin
/// square, associativity; the first failing check is reported together with
/// the first offending element, row or triple.
pub fn validate_group(
    name: &str,
    order: usize,
    table: &[Vec<usize>],
) -> Result<FiniteGroup, GroupError> {
    if order == 0 {
        return Err(GroupError::Empty);
    }
    if table.len() != order {
        return Err(GroupError::Malformed {
            order,
            found: format!("{} rows", table.len()),
        });
    }
    let mut flat = Vec::with_capacity(order * order);
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != order {
            return Err(GroupError::Malformed {
                order,
                found: format!("row {row} of length {}", entries.len()),
            });
        }
        for (col, &value) in entries.iter().enumerate() {
            if value >= order {
                return Err(GroupError::EntryOutOfRange {
                    row,
                    col,
                    value,
                    order,
                });
            }
            flat.push(value as u32);
        }
    }
    FiniteGroup::from_flat(name.to_string(), order, flat)
}

impl FiniteGroup {
    fn from_flat(name: String, order: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        let at = |a: usize, b: usize| table[a * order + b] as usize;

        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(GroupError::NoIdentityAtZero(a));
            }
        }

        let mut seen = vec![usize::MAX; order];
        for row in 0..order {
            for col in 0..order {
                let v = at(row, col);
                if seen[v] == row {
                    return Err(GroupError::NotLatinSquare {
                        axis: Axis::Row,
                        index: row,
                        value: v,
                    });
                }
                seen[v] = row;
            }
        }
        seen.fill(usize::MAX);
        for col in 0..order {
            for row in 0..order {
                let v = at(row, col);
                if seen[v] == col {
                    return Err(GroupError::NotLatinSquare {
                        axis: Axis::Column,
                        index: col,
                        value: v,
                    });
                }
                seen[v] = col;
            }
        }

        if order <= FULL_ASSOCIATIVITY_SCAN {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::NonAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            for m in loop_generators(order, &table) {
                for x in 0..order {
                    let xm = at(x, m);
                    for y in 0..order {
                        if at(xm, y) != at(x, at(m, y)) {
                            return Err(GroupError::NonAssociative(x, m, y));
                        }
                    }
                }
            }
        }

        let mut inverse = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            let b = row.iter().position(|&v| v == 0).expect("Latin square row");
            inverse[a] = b as u32;
        }

        Ok(FiniteGroup {
            name,
            order,
            table,
            inverse,
        })
    }

    /// Builds a group from an explicit element list and multiplication.
    /// `elements[0]` must be the identity.
    pub fn from_elements<T, F>(name: &str, elements: &[T], mul: F) -> Result<Self, GroupError>
    where
        T: Eq + Hash + Clone,
        F: Fn(&T, &T) -> T,
    {
        let order = elements.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = Vec::with_capacity(order * order);
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let p = mul(a, b);
                let k = *index.get(&p).ok_or(GroupError::NotClosed(i, j))?;
                table.push(k as u32);
            }
        }
        Self::from_flat(name.to_string(), order, table)
    }

    /// The cyclic group `Z/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        Self::from_flat(format!("Z{n}"), n, table).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).renamed("1")
    }

    /// Direct product; the pair `(a, b)` has index `a + |A| * b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let first = a.mul(x % na, y % na);
                let second = b.mul(x / na, y / na);
                table.push((first + na * second) as u32);
            }
        }
        Self::from_flat(format!("{}x{}", a.name, b.name), n, table)
            .expect("direct product of groups is a group")
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `a * b * a^-1 * b^-1`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    /// `x * g * x^-1`
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn inverse_table(&self) -> Vec<usize> {
        self.inverse.iter().map(|&v| v as usize).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes sorted by their smallest element, each sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|x| self.conjugate(x, a)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    /// The subgroup on `elements` (which must contain `0` and be closed),
    /// reindexed by sorted position.
    pub fn subgroup(&self, name: &str, elements: &[usize]) -> Result<Self, GroupError> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Self::from_elements(name, &sorted, |&a, &b| self.mul(a, b))
    }

    /// Whether `perm` is an automorphism of this group.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.order || perm[0] != 0 {
            return false;
        }
        let mut hit = vec![false; self.order];
        for &p in perm {
            if p >= self.order || std::mem::replace(&mut hit[p], true) {
                return false;
            }
        }
        (0..self.order)
            .all(|a| (0..self.order).all(|b| perm[self.mul(a, b)] == self.mul(perm[a], perm[b])))
    }

    /// Inner automorphism `g -> x g x^-1` as an image array.
    pub fn inner_automorphism(&self, x: usize) -> Vec<usize> {
        (0..self.order).map(|g| self.conjugate(x, g)).collect()
    }
}

/// Greedy generating set of a loop: the submagma generated by the returned
/// elements is the whole table.
fn loop_generators(order: usize, table: &[u32]) -> Vec<usize> {
    let at = |a: usize, b: usize| table[a * order + b] as usize;
    let mut inside = vec![false; order];
    let mut members = vec![0usize];
    inside[0] = true;
    let mut gens = Vec::new();
    while members.len() < order {
        let fresh = (0..order)
            .find(|&x| !inside[x])
            .expect("some element is missing");
        gens.push(fresh);
        let mut queue = VecDeque::from([fresh]);
        inside[fresh] = true;
        members.push(fresh);
        while let Some(y) = queue.pop_front() {
            let mut i = 0;
            while i < members.len() {
                let z = members[i];
                for p in [at(y, z), at(z, y)] {
                    if !inside[p] {
                        inside[p] = true;
                        members.push(p);
                        queue.push_back(p);
                    }
                }
                i += 1;
            }
        }
    }
    gens
}

fn check_permutation(index: usize, degree: usize, perm: &[usize]) -> Result<(), GroupError> {
    let bad = GroupError::InvalidPermutation { index, degree };
    if perm.len() != degree {
        return Err(bad);
    }
    let mut hit = vec![false; degree];
    for &p in perm {
        if p >= degree || std::mem::replace(&mut hit[p], true) {
            return Err(bad);
        }
    }
    Ok(())
}

/// Enumerates the permutation group generated by `generators` by
/// breadth-first closure. Elements are numbered in discovery order starting
/// from the identity, and each newly found element is `x * s` for a known
/// `x` and generator `s`.
pub fn group_from_permutations(
    name: &str,
    degree: usize,
    generators: &[Vec<usize>],
    bound: usize,
) -> Result<FiniteGroup, GroupError> {
    let elements = permutation_closure(degree, generators, bound)?;
    let index: HashMap<&[usize], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    let mut buf = vec![0usize; degree];
    for a in &elements {
        for b in &elements {
            for (i, slot) in buf.iter_mut().enumerate() {
                *slot = a[b[i]];
            }
            table.push(index[buf.as_slice()] as u32);
        }
    }
    Ok(FiniteGroup {
        name: name.to_string(),
        order: n,
        inverse: {
            let mut inv = vec![0u32; n];
            for (i, p) in elements.iter().enumerate() {
                let mut q = vec![0usize; degree];
                for (k, &v) in p.iter().enumerate() {
                    q[v] = k;
                }
                inv[i] = index[q.as_slice()] as u32;
            }
            inv
        },
        table,
    })
}

/// The elements of the generated permutation group in discovery order.
pub fn permutation_closure(
    degree: usize,
    generators: &[Vec<usize>],
    bound: usize,
) -> Result<Vec<Vec<usize>>, GroupError> {
    for (i, g) in generators.iter().enumerate() {
        check_permutation(i, degree, g)?;
    }
    let identity: Vec<usize> = (0..degree).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut cursor = 0;
    while cursor < elements.len() {
        for s in generators {
            let x = &elements[cursor];
            let next: Vec<usize> = (0..degree).map(|i| x[s[i]]).collect();
            if seen.insert(next.clone()) {
                if elements.len() == bound {
                    return Err(GroupError::OrderBoundExceeded { bound });
                }
                elements.push(next);
            }
        }
        cursor += 1;
    }
    Ok(elements)
}

/// A homomorphism given by its image array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    target_order: usize,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        name: &'static str,
        source: &FiniteGroup,
        target: &FiniteGroup,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        check_map_shape(name, source, target, &map)?;
        check_hom(name, source, target, &map)?;
        Ok(GroupHom {
            target_order: target.order(),
            map,
        })
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }
}

fn check_map_shape(
    name: &'static str,
    source: &FiniteGroup,
    target: &FiniteGroup,
    map: &[usize],
) -> Result<(), GroupError> {
    if map.len() != source.order() {
        return Err(GroupError::MapLength {
            name,
            found: map.len(),
            expected: source.order(),
        });
    }
    if let Some((index, &value)) = map.iter().enumerate().find(|(_, &v)| v >= target.order()) {
        return Err(GroupError::MapOutOfRange {
            name,
            index,
            value,
            order: target.order(),
        });
    }
    Ok(())
}

fn check_hom(
    name: &'static str,
    source: &FiniteGroup,
    target: &FiniteGroup,
    map: &[usize],
) -> Result<(), GroupError> {
    if map[0] != 0 {
        return Err(GroupError::NotHomomorphism { name, pair: (0, 0) });
    }
    for a in 0..source.order() {
        for b in 0..source.order() {
            if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                return Err(GroupError::NotHomomorphism { name, pair: (a, b) });
            }
        }
    }
    Ok(())
}

/// An exact sequence `1 -> G -> H -> Q -> 1` together with the section
/// `s(q) = min { h : pi(h) = q }`.
#[derive(Debug, Clone)]
pub struct Extension {
    g: FiniteGroup,
    h: FiniteGroup,
    q: FiniteGroup,
    iota: GroupHom,
    pi: GroupHom,
    section: Vec<usize>,
    iota_inv: Vec<Option<usize>>,
    conj: Vec<Vec<usize>>,
}

/// Validates the maps and assembles an [`Extension`].
///
/// Maps are checked for shape, orders, injectivity, surjectivity and
/// exactness before the homomorphism property, so a map that breaks several
/// conditions reports the structural one.
pub fn build_extension(
    g: FiniteGroup,
    h: FiniteGroup,
    q: FiniteGroup,
    iota: Vec<usize>,
    pi: Vec<usize>,
) -> Result<Extension, GroupError> {
    check_map_shape("iota", &g, &h, &iota)?;
    check_map_shape("pi", &h, &q, &pi)?;
    if g.order() * q.order() != h.order() {
        return Err(GroupError::OrderMismatch {
            g: g.order(),
            h: h.order(),
            q: q.order(),
        });
    }

    let mut iota_inv = vec![None; h.order()];
    for (a, &image) in iota.iter().enumerate() {
        if let Some(b) = iota_inv[image] {
            return Err(GroupError::NotInjective(b, a));
        }
        iota_inv[image] = Some(a);
    }

    let mut section = vec![usize::MAX; q.order()];
    for (x, &image) in pi.iter().enumerate() {
        if section[image] == usize::MAX {
            section[image] = x;
        }
    }
    if let Some(missing) = section.iter().position(|&s| s == usize::MAX) {
        return Err(GroupError::NotSurjective(missing));
    }

    for x in 0..h.order() {
        let in_kernel = pi[x] == 0;
        if in_kernel != iota_inv[x].is_some() {
            return Err(GroupError::NotExact {
                witness: x,
                in_kernel,
            });
        }
    }

    let iota = GroupHom::new("iota", &g, &h, iota)?;
    let pi = GroupHom::new("pi", &h, &q, pi)?;
    debug_assert_eq!(section[0], 0);

    let mut ext = Extension {
        g,
        h,
        q,
        iota,
        pi,
        section,
        iota_inv,
        conj: Vec::new(),
    };
    let mut conj = Vec::with_capacity(ext.q.order());
    for x in 0..ext.q.order() {
        conj.push(ext.lift_conjugation(x)?);
    }
    ext.conj = conj;
    Ok(ext)
}

impl Extension {
    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn q(&self) -> &FiniteGroup {
        &self.q
    }

    pub fn iota(&self) -> &GroupHom {
        &self.iota
    }

    pub fn pi(&self) -> &GroupHom {
        &self.pi
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// Preimage of `x` under `iota`, if `x` lies in the image of `G`.
    pub fn iota_inverse(&self, x: usize) -> Option<usize> {
        self.iota_inv[x]
    }

    fn lift_conjugation(&self, q: usize) -> Result<Vec<usize>, GroupError> {
        let s = self.section[q];
        let mut perm = Vec::with_capacity(self.g.order());
        for g in 0..self.g.order() {
            let image = self.h.conjugate(s, self.iota.apply(g));
            perm.push(self.iota_inv[image].ok_or(GroupError::NotAutomorphism(q))?);
        }
        if !self.g.is_automorphism(&perm) {
            return Err(GroupError::NotAutomorphism(q));
        }
        Ok(perm)
    }

    /// The automorphism `g -> iota^-1(s(q) iota(g) s(q)^-1)` of `G`.
    pub fn conj_action(&self, q: usize) -> &[usize] {
        &self.conj[q]
    }

    /// The element `iota^-1(s(a) s(b) s(ab)^-1)` of `G` measuring how far the
    /// section is from a homomorphism.
    pub fn section_defect(&self, a: usize, b: usize) -> usize {
        let s = &self.section;
        let ab = self.q.mul(a, b);
        let x = self.h.mul(self.h.mul(s[a], s[b]), self.h.inv(s[ab]));
        self.iota_inv[x].expect("section defect lies in the kernel of pi")
    }

    /// Whether every lift conjugation is inner, i.e. `Q -> Out(G)` is trivial.
    pub fn is_banded(&self) -> bool {
        let inner: HashSet<Vec<usize>> = (0..self.g.order())
            .map(|x| self.g.inner_automorphism(x))
            .collect();
        self.conj.iter().all(|perm| inner.contains(perm))
    }
}

/// Composes image arrays: `(outer . inner)[i] = outer[inner[i]]`.
pub fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&i| outer[i]).collect()
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}
