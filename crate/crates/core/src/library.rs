//! Small named groups and the bundled extension library.

use crate::group::{build_extension, Extension, FiniteGroup, GroupError};

/// Quaternion group; index `2u + s` stands for `(-1)^s * [1, i, j, k][u]`.
pub fn quaternion() -> FiniteGroup {
    let elems: Vec<(bool, u8)> = (0..4).flat_map(|u| [(false, u), (true, u)]).collect();
    FiniteGroup::from_elements("Q8", &elems, |&(sa, a), &(sb, b)| {
        let (s, u) = match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 1) => (true, 3),
            (2, 3) => (false, 1),
            (3, 2) => (true, 1),
            (3, 1) => (false, 2),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        };
        (sa ^ sb ^ s, u)
    })
    .expect("quaternion table")
}

/// Dihedral group of order 8; index `a + 4b` stands for `r^a s^b`.
pub fn dihedral8() -> FiniteGroup {
    let elems: Vec<(u8, u8)> = (0..2).flat_map(|b| (0..4).map(move |a| (a, b))).collect();
    FiniteGroup::from_elements("D4", &elems, |&(a, b), &(c, d)| {
        let turn = if b == 0 { c } else { (4 - c) % 4 };
        ((a + turn) % 4, b ^ d)
    })
    .expect("dihedral table")
}

/// Klein four-group as `Z2 x Z2` under bitwise xor.
pub fn klein() -> FiniteGroup {
    FiniteGroup::from_elements("V4", &[0u8, 1, 2, 3], |a, b| a ^ b).expect("klein table")
}

/// All permutations of `0..n` in lexicographic order (identity first).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn sign(perm: &[usize]) -> usize {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn symmetric(n: usize) -> FiniteGroup {
    FiniteGroup::from_elements(&format!("S{n}"), &permutations(n), |a, b| {
        compose_perm(a, b)
    })
    .expect("symmetric group table")
}

fn even_permutations(n: usize) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| sign(p) == 0)
        .collect()
}

fn position<T: PartialEq>(list: &[T], x: &T) -> usize {
    list.iter().position(|y| y == x).expect("element present")
}

type Mat3 = [u8; 4];

fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let [a, b, c, d] = *x;
    let [e, f, g, h] = *y;
    [
        (a * e + b * g) % 3,
        (a * f + b * h) % 3,
        (c * e + d * g) % 3,
        (c * f + d * h) % 3,
    ]
}

fn sl23_elements() -> Vec<Mat3> {
    let identity = [1, 0, 0, 1];
    let mut rest: Vec<Mat3> = (0..81u8)
        .map(|k| [k / 27, (k / 9) % 3, (k / 3) % 3, k % 3])
        .filter(|m| (m[0] * m[3] + 2 * m[1] * m[2]) % 3 == 1 && *m != identity)
        .collect();
    rest.sort();
    let mut all = vec![identity];
    all.append(&mut rest);
    all
}

/// A named extension together with a short description.
#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub extension: Extension,
}

fn z2_z4_z2() -> Result<Extension, GroupError> {
    build_extension(
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(4),
        FiniteGroup::cyclic(2),
        vec![0, 2],
        vec![0, 1, 0, 1],
    )
}

fn z2_q8_v4() -> Result<Extension, GroupError> {
    let pi = (0..8).map(|x| x / 2).collect();
    build_extension(
        FiniteGroup::cyclic(2),
        quaternion(),
        klein(),
        vec![0, 1],
        pi,
    )
}

fn z2_d4_v4() -> Result<Extension, GroupError> {
    let pi = (0..8).map(|x| (x % 4) % 2 + 2 * (x / 4)).collect();
    build_extension(FiniteGroup::cyclic(2), dihedral8(), klein(), vec![0, 2], pi)
}

fn z3_s3_z2() -> Result<Extension, GroupError> {
    let perms = permutations(3);
    let iota = vec![
        0,
        position(&perms, &vec![1, 2, 0]),
        position(&perms, &vec![2, 0, 1]),
    ];
    let pi = perms.iter().map(|p| sign(p)).collect();
    build_extension(
        FiniteGroup::cyclic(3),
        symmetric(3),
        FiniteGroup::cyclic(2),
        iota,
        pi,
    )
}

/// S4 acting on the three ways of splitting `{0,1,2,3}` into two pairs.
fn pairing_action(perm: &[usize]) -> Vec<usize> {
    (0..3)
        .map(|k| {
            let (x, y) = (perm[0], perm[k + 1]);
            let partner = if x == 0 {
                y
            } else if y == 0 {
                x
            } else {
                (1..4).find(|&z| z != x && z != y).unwrap()
            };
            partner - 1
        })
        .collect()
}

fn v4_s4_s3() -> Result<Extension, GroupError> {
    let perms = permutations(4);
    let v4 = [
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    let iota = v4.iter().map(|p| position(&perms, p)).collect();
    let s3 = permutations(3);
    let pi = perms
        .iter()
        .map(|p| position(&s3, &pairing_action(p)))
        .collect();
    build_extension(klein(), symmetric(4), symmetric(3), iota, pi)
}

fn a4_s4_z2() -> Result<Extension, GroupError> {
    let perms = permutations(4);
    let evens = even_permutations(4);
    let a4 = FiniteGroup::from_elements("A4", &evens, |a, b| compose_perm(a, b))?;
    let iota = evens.iter().map(|p| position(&perms, p)).collect();
    let pi = perms.iter().map(|p| sign(p)).collect();
    build_extension(a4, symmetric(4), FiniteGroup::cyclic(2), iota, pi)
}

fn trivial_gerbe_s3() -> Result<Extension, GroupError> {
    build_extension(
        FiniteGroup::trivial(),
        symmetric(3),
        symmetric(3),
        vec![0],
        (0..6).collect(),
    )
}

fn split(g: FiniteGroup, q: FiniteGroup) -> Result<Extension, GroupError> {
    let h = FiniteGroup::direct_product(&g, &q);
    let (ng, nh) = (g.order(), h.order());
    build_extension(
        g,
        h,
        q,
        (0..ng).collect(),
        (0..nh).map(|x| x / ng).collect(),
    )
}

fn z4_d4_z2() -> Result<Extension, GroupError> {
    let pi = (0..8).map(|x| x / 4).collect();
    build_extension(
        FiniteGroup::cyclic(4),
        dihedral8(),
        FiniteGroup::cyclic(2),
        vec![0, 1, 2, 3],
        pi,
    )
}

fn z4_q8_z2() -> Result<Extension, GroupError> {
    // <i> = {1, i, -1, -i}
    let iota = vec![0, 2, 1, 3];
    let pi = (0..8).map(|x| usize::from(x / 2 >= 2)).collect();
    build_extension(
        FiniteGroup::cyclic(4),
        quaternion(),
        FiniteGroup::cyclic(2),
        iota,
        pi,
    )
}

fn q8_sl23_z3() -> Result<Extension, GroupError> {
    let elems = sl23_elements();
    let h = FiniteGroup::from_elements("SL(2,3)", &elems, mat_mul)?;
    let sylow: Vec<usize> = (0..h.order())
        .filter(|&x| 4 % h.element_order(x) == 0)
        .collect();
    let q8 = h.subgroup("Q8", &sylow)?;
    let t = (0..h.order())
        .find(|&x| h.element_order(x) == 3)
        .expect("element of order 3");
    let t_inv = h.inv(t);
    let pi = (0..h.order())
        .map(|x| {
            // x lies in t^k Q8 with k the number of t^-1 needed to land in Q8
            let mut y = x;
            let mut k = 0;
            while !sylow.contains(&y) {
                y = h.mul(t_inv, y);
                k += 1;
            }
            k
        })
        .collect();
    build_extension(q8, h, FiniteGroup::cyclic(3), sylow, pi)
}

type Builder = fn() -> Result<Extension, GroupError>;

/// The bundled extensions, in a fixed order.
pub fn bundled_library() -> Vec<LibraryEntry> {
    try_bundled_library()
        .unwrap_or_else(|(name, e)| panic!("bundled extension {name} is invalid: {e}"))
}

/// Builds and validates every bundled extension, reporting the first that
/// fails.
pub fn try_bundled_library() -> Result<Vec<LibraryEntry>, (&'static str, GroupError)> {
    let entries: [(&'static str, &'static str, Builder); 12] = [
        (
            "z2-z4-z2",
            "Z2 -> Z4 -> Z2, central and non-split",
            z2_z4_z2,
        ),
        (
            "z2-q8-v4",
            "Z2 -> Q8 -> Z2xZ2, central, discrete torsion on the sign orbit",
            z2_q8_v4,
        ),
        ("z2-d4-v4", "Z2 -> D4 -> Z2xZ2, central", z2_d4_v4),
        ("z3-s3-z2", "Z3 -> S3 -> Z2, Q inverts G", z3_s3_z2),
        (
            "v4-s4-s3",
            "V4 -> S4 -> S3, S3 permutes the nontrivial characters of V4",
            v4_s4_s3,
        ),
        (
            "trivial-s3",
            "1 -> S3 -> S3, trivial gerbe",
            trivial_gerbe_s3,
        ),
        ("split-z3xz2", "Z3 -> Z3xZ2 -> Z2, split product", || {
            split(FiniteGroup::cyclic(3), FiniteGroup::cyclic(2))
        }),
        (
            "split-s3xz2",
            "S3 -> S3xZ2 -> Z2, split product with nonabelian G",
            || split(symmetric(3), FiniteGroup::cyclic(2)),
        ),
        ("z4-d4-z2", "Z4 -> D4 -> Z2, split, Q inverts G", z4_d4_z2),
        (
            "z4-q8-z2",
            "Z4 -> Q8 -> Z2, non-split, Q inverts G",
            z4_q8_z2,
        ),
        (
            "q8-sl23-z3",
            "Q8 -> SL(2,3) -> Z3, outer action fixing the 2-dimensional irrep",
            q8_sl23_z3,
        ),
        (
            "a4-s4-z2",
            "A4 -> S4 -> Z2, outer action fixing the 3-dimensional irrep",
            a4_s4_z2,
        ),
    ];
    entries
        .into_iter()
        .map(|(name, description, build)| {
            Ok(LibraryEntry {
                name,
                description,
                extension: build().map_err(|e| (name, e))?,
            })
        })
        .collect()
}

pub fn find(name: &str) -> Option<LibraryEntry> {
    bundled_library().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds() {
        let lib = bundled_library();
        assert!(lib.len() >= 7);
        for e in &lib {
            let x = &e.extension;
            assert_eq!(x.g().order() * x.q().order(), x.h().order(), "{}", e.name);
        }
    }

    #[test]
    fn bandedness_labels() {
        let banded: Vec<(&str, bool)> = bundled_library()
            .iter()
            .map(|e| (e.name, e.extension.is_banded()))
            .collect();
        let expect = [
            ("z2-z4-z2", true),
            ("z2-q8-v4", true),
            ("z2-d4-v4", true),
            ("z3-s3-z2", false),
            ("v4-s4-s3", false),
            ("trivial-s3", true),
            ("split-z3xz2", true),
            ("split-s3xz2", true),
            ("z4-d4-z2", false),
            ("z4-q8-z2", false),
            ("q8-sl23-z3", false),
            ("a4-s4-z2", false),
        ];
        assert_eq!(banded, expect);
    }

    #[test]
    fn named_groups_have_expected_shape() {
        assert_eq!(sl23_elements().len(), 24);
        assert_eq!(quaternion().conjugacy_classes().len(), 5);
        assert_eq!(dihedral8().conjugacy_classes().len(), 5);
        assert_eq!(symmetric(4).conjugacy_classes().len(), 5);
        let h = find("q8-sl23-z3").unwrap().extension;
        assert_eq!(h.h().conjugacy_classes().len(), 7);
        assert_ne!(quaternion().rows(), dihedral8().rows());
    }
}
