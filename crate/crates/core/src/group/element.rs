use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// Canonical encoding of a group element within its realization.
///
/// Equal elements have identical encodings, so the derived `Ord` and `Hash`
/// are usable for sorting and set membership.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GroupElement {
    /// Image array on points `0..degree`.
    Perm(Box<[u16]>),
    /// Row-major square matrix with entries in `0..modulus`.
    Matrix(Box<[u32]>),
    /// `(u, h)` with `u` a vector mod `p^s` and `h` the index of an element
    /// of the acting group in its sorted element list.
    Pair { u: Box<[u32]>, h: u32 },
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Perm(img) => {
                let mut seen = vec![false; img.len()];
                let mut wrote = false;
                for start in 0..img.len() {
                    if seen[start] || img[start] as usize == start {
                        continue;
                    }
                    write!(f, "(")?;
                    let mut x = start;
                    let mut first = true;
                    while !seen[x] {
                        seen[x] = true;
                        if !first {
                            write!(f, " ")?;
                        }
                        write!(f, "{}", x + 1)?;
                        first = false;
                        x = img[x] as usize;
                    }
                    write!(f, ")")?;
                    wrote = true;
                }
                if !wrote {
                    write!(f, "()")?;
                }
                Ok(())
            }
            GroupElement::Matrix(m) => write!(f, "{m:?}"),
            GroupElement::Pair { u, h } => write!(f, "({u:?}, #{h})"),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Multiplication data for pairs `(u, h)` of a semidirect product.
///
/// The acting group is stored by index: `mul[a * n + b]` is the index of the
/// product of elements `a` and `b`, and `action[h]` is the `rank x rank`
/// matrix (row-major, mod `modulus`) by which `h` acts on column vectors.
#[derive(Debug)]
pub struct PairAction {
    pub modulus: u32,
    pub rank: usize,
    pub acting_order: usize,
    pub identity: u32,
    pub mul: Vec<u32>,
    pub inv: Vec<u32>,
    pub action: Vec<Vec<u32>>,
}

impl PairAction {
    pub fn apply(&self, h: u32, u: &[u32]) -> Box<[u32]> {
        let m = &self.action[h as usize];
        let r = self.rank;
        let modulus = u64::from(self.modulus);
        (0..r)
            .map(|i| {
                let acc = (0..r).fold(0u64, |acc, j| {
                    (acc + u64::from(m[i * r + j]) * u64::from(u[j])) % modulus
                });
                acc as u32
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum Realization {
    Permutation { degree: usize },
    ModMatrix { modulus: u32, dim: usize },
    Semidirect(Arc<PairAction>),
}

impl Realization {
    pub fn kind(&self) -> &'static str {
        match self {
            Realization::Permutation { .. } => "permutation",
            Realization::ModMatrix { .. } => "mod-matrix",
            Realization::Semidirect(_) => "semidirect",
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Realization::Permutation { degree } => {
                GroupElement::Perm((0..*degree as u16).collect())
            }
            Realization::ModMatrix { modulus, dim } => {
                let d = *dim;
                let one = if *modulus == 1 { 0 } else { 1 };
                GroupElement::Matrix(
                    (0..d * d)
                        .map(|k| if k / d == k % d { one } else { 0 })
                        .collect(),
                )
            }
            Realization::Semidirect(t) => GroupElement::Pair {
                u: vec![0; t.rank].into(),
                h: t.identity,
            },
        }
    }

    /// Product `a * b`. Permutations compose left to right: `a` is applied first.
    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (Realization::Permutation { .. }, GroupElement::Perm(x), GroupElement::Perm(y)) => {
                GroupElement::Perm(x.iter().map(|&i| y[i as usize]).collect())
            }
            (
                Realization::ModMatrix { modulus, dim },
                GroupElement::Matrix(x),
                GroupElement::Matrix(y),
            ) => GroupElement::Matrix(mat_mul_mod(x, y, *dim, u64::from(*modulus)).into()),
            (
                Realization::Semidirect(t),
                GroupElement::Pair { u: u1, h: h1 },
                GroupElement::Pair { u: u2, h: h2 },
            ) => {
                let moved = t.apply(*h1, u2);
                let m = t.modulus;
                let u = u1
                    .iter()
                    .zip(moved.iter())
                    .map(|(&a, &b)| ((u64::from(a) + u64::from(b)) % u64::from(m)) as u32)
                    .collect();
                let h = t.mul[*h1 as usize * t.acting_order + *h2 as usize];
                GroupElement::Pair { u, h }
            }
            _ => panic!("element does not belong to a {} realization", self.kind()),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (Realization::Permutation { .. }, GroupElement::Perm(x)) => {
                let mut inv = vec![0u16; x.len()];
                for (i, &j) in x.iter().enumerate() {
                    inv[j as usize] = i as u16;
                }
                GroupElement::Perm(inv.into())
            }
            (Realization::ModMatrix { modulus, dim }, GroupElement::Matrix(x)) => {
                GroupElement::Matrix(
                    mat_inverse_mod(x, *dim, u64::from(*modulus))
                        .expect("group elements are invertible")
                        .into(),
                )
            }
            (Realization::Semidirect(t), GroupElement::Pair { u, h }) => {
                let hi = t.inv[*h as usize];
                let moved = t.apply(hi, u);
                let m = u64::from(t.modulus);
                let u = moved
                    .iter()
                    .map(|&x| ((m - u64::from(x)) % m) as u32)
                    .collect();
                GroupElement::Pair { u, h: hi }
            }
            _ => panic!("element does not belong to a {} realization", self.kind()),
        }
    }

    pub fn pow(&self, a: &GroupElement, mut k: u64) -> GroupElement {
        let mut result = self.identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.multiply(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.multiply(&base, &base);
            }
        }
        result
    }

    /// Whether `a` has the shape this realization expects.
    pub fn accepts(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (Realization::Permutation { degree }, GroupElement::Perm(x)) => x.len() == *degree,
            (Realization::ModMatrix { dim, modulus }, GroupElement::Matrix(x)) => {
                x.len() == dim * dim && x.iter().all(|&v| v < *modulus)
            }
            (Realization::Semidirect(t), GroupElement::Pair { u, h }) => {
                u.len() == t.rank
                    && (*h as usize) < t.acting_order
                    && u.iter().all(|&v| v < t.modulus)
            }
            _ => false,
        }
    }
}

pub(crate) fn mat_mul_mod(x: &[u32], y: &[u32], d: usize, m: u64) -> Vec<u32> {
    let mut out = vec![0u32; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0u64;
            for k in 0..d {
                acc = (acc + u64::from(x[i * d + k]) * u64::from(y[k * d + j])) % m;
            }
            out[i * d + j] = acc as u32;
        }
    }
    out
}

/// Determinant over the integers by fraction-free elimination.
pub(crate) fn det_i128(entries: &[i128], d: usize) -> i128 {
    if d == 0 {
        return 1;
    }
    let mut a = entries.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d - 1 {
        if a[k * d + k] == 0 {
            match (k + 1..d).find(|&i| a[i * d + k] != 0) {
                Some(i) => {
                    for j in 0..d {
                        a.swap(k * d + j, i * d + j);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                a[i * d + j] = (a[i * d + j] * a[k * d + k] - a[i * d + k] * a[k * d + j]) / prev;
            }
        }
        prev = a[k * d + k];
    }
    sign * a[(d - 1) * d + (d - 1)]
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1 || m == 1).then(|| old_s.rem_euclid(m))
}

/// Inverse mod `m` via the adjugate; `None` when the determinant is not a unit.
pub(crate) fn mat_inverse_mod(x: &[u32], d: usize, m: u64) -> Option<Vec<u32>> {
    let mi = i128::from(m);
    let ent: Vec<i128> = x.iter().map(|&v| i128::from(v)).collect();
    let det = det_i128(&ent, d).rem_euclid(mi);
    let det_inv = mod_inverse(det, mi)?;
    if d == 1 {
        return Some(vec![det_inv as u32]);
    }
    let mut out = vec![0u32; d * d];
    let mut minor = vec![0i128; (d - 1) * (d - 1)];
    for i in 0..d {
        for j in 0..d {
            // cofactor C_ij goes to adj[j][i]
            let mut idx = 0;
            for r in (0..d).filter(|&r| r != i) {
                for c in (0..d).filter(|&c| c != j) {
                    minor[idx] = ent[r * d + c];
                    idx += 1;
                }
            }
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let cof = (sign * det_i128(&minor, d - 1)).rem_euclid(mi);
            out[j * d + i] = (cof * det_inv).rem_euclid(mi) as u32;
        }
    }
    Some(out)
}
