//! Finite groups given by generators, enumerated exhaustively.

mod element;
mod subgroup;

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub(crate) use element::{det_i128, mat_inverse_mod, mat_mul_mod};
pub use element::{GroupElement, PairAction, Realization};
pub use subgroup::{
    center, commutator, commutator_subgroup, conjugacy_class_count, conjugacy_class_sizes,
    direct_product, frattini_p, generated_subgroup, hughes_subgroup, is_solvable, normal_closure,
    Subgroup,
};

use crate::arith::factorize;
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;
pub const DEFAULT_CLASS_COUNT_CAP: u64 = 1 << 14;

pub const ENUMERATION_CAP_ENV: &str = "AVGORDER_ENUMERATION_CAP";
pub const CLASS_COUNT_CAP_ENV: &str = "AVGORDER_CLASS_COUNT_CAP";

/// Size limits on exhaustive algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub enumeration: u64,
    pub class_count: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            enumeration: DEFAULT_ENUMERATION_CAP,
            class_count: DEFAULT_CLASS_COUNT_CAP,
        }
    }
}

impl Caps {
    /// Defaults overridden by `AVGORDER_ENUMERATION_CAP` / `AVGORDER_CLASS_COUNT_CAP`.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(v) = std::env::var(ENUMERATION_CAP_ENV) {
            caps.enumeration = parse_cap(ENUMERATION_CAP_ENV, &v)?;
        }
        if let Ok(v) = std::env::var(CLASS_COUNT_CAP_ENV) {
            caps.class_count = parse_cap(CLASS_COUNT_CAP_ENV, &v)?;
        }
        Ok(caps)
    }
}

fn parse_cap(name: &str, v: &str) -> Result<u64> {
    match v.trim().parse::<u64>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Parameter(format!(
            "{name} must be a positive integer, got {v:?}"
        ))),
    }
}

struct Inner {
    name: String,
    realization: Realization,
    generators: Vec<GroupElement>,
    identity: GroupElement,
    elements: OnceLock<Vec<GroupElement>>,
    caps: Caps,
}

/// A finite group given by generators in one of three realizations.
///
/// Cloning is cheap; the enumerated element list is computed once and shared.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<Inner>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.inner.name)
            .field("realization", &self.inner.realization.kind())
            .field("generators", &self.inner.generators.len())
            .field("enumerated", &self.inner.elements.get().map(Vec::len))
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from pre-validated generators.
    pub fn from_generators(
        name: impl Into<String>,
        realization: Realization,
        generators: Vec<GroupElement>,
    ) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| !realization.accepts(g)) {
            return Err(Error::InvalidGroup(format!(
                "generator {g} does not fit the {} realization",
                realization.kind()
            )));
        }
        let identity = realization.identity();
        Ok(Self {
            inner: Arc::new(Inner {
                name: name.into(),
                realization,
                generators,
                identity,
                elements: OnceLock::new(),
                caps: Caps::default(),
            }),
        })
    }

    /// Permutation group on `degree` points; images are 0-based.
    pub fn permutation(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<Self> {
        if degree > usize::from(u16::MAX) {
            return Err(Error::InvalidGroup(format!("degree {degree} too large")));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "permutation has {} images, expected degree {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(format!(
                        "{g:?} is not a permutation of 0..{degree}"
                    )));
                }
            }
            gens.push(GroupElement::Perm(g.iter().map(|&x| x as u16).collect()));
        }
        Self::from_generators(name, Realization::Permutation { degree }, gens)
    }

    /// Matrix group over `Z/modulus`; entries are row-major and reduced on input.
    pub fn mod_matrix(
        name: impl Into<String>,
        modulus: u32,
        dim: usize,
        generators: &[Vec<i64>],
    ) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidGroup(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidGroup(
                "matrix dimension must be positive".into(),
            ));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != dim * dim {
                return Err(Error::InvalidGroup(format!(
                    "matrix has {} entries, expected {}",
                    g.len(),
                    dim * dim
                )));
            }
            let entries: Box<[u32]> = g
                .iter()
                .map(|&x| x.rem_euclid(i64::from(modulus)) as u32)
                .collect();
            let det = det_i128(
                &entries.iter().map(|&v| i128::from(v)).collect::<Vec<_>>(),
                dim,
            )
            .rem_euclid(i128::from(modulus));
            if num_integer::gcd(det, i128::from(modulus)) != 1 {
                return Err(Error::InvalidGroup(format!(
                    "generator {entries:?} is not invertible mod {modulus}"
                )));
            }
            gens.push(GroupElement::Matrix(entries));
        }
        Self::from_generators(name, Realization::ModMatrix { modulus, dim }, gens)
    }

    pub fn with_caps(self, caps: Caps) -> Self {
        let inner = match Arc::try_unwrap(self.inner) {
            Ok(mut inner) => {
                inner.caps = caps;
                inner
            }
            Err(shared) => Inner {
                name: shared.name.clone(),
                realization: shared.realization.clone(),
                generators: shared.generators.clone(),
                identity: shared.identity.clone(),
                elements: shared.elements.clone(),
                caps,
            },
        };
        Self {
            inner: Arc::new(inner),
        }
    }

    /// A group whose element list is already known (sorted, closed).
    pub(crate) fn with_elements(
        name: impl Into<String>,
        realization: Realization,
        generators: Vec<GroupElement>,
        elements: Vec<GroupElement>,
        caps: Caps,
    ) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let identity = realization.identity();
        let cell = OnceLock::new();
        let _ = cell.set(elements);
        Self {
            inner: Arc::new(Inner {
                name: name.into(),
                realization,
                generators,
                identity,
                elements: cell,
                caps,
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let inner = &self.inner;
        Self {
            inner: Arc::new(Inner {
                name: name.into(),
                realization: inner.realization.clone(),
                generators: inner.generators.clone(),
                identity: inner.identity.clone(),
                elements: inner.elements.clone(),
                caps: inner.caps,
            }),
        }
    }

    pub fn realization(&self) -> &Realization {
        &self.inner.realization
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.inner.generators
    }

    pub fn identity(&self) -> &GroupElement {
        &self.inner.identity
    }

    pub fn caps(&self) -> Caps {
        self.inner.caps
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.inner.realization.multiply(a, b)
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        self.inner.realization.inverse(a)
    }

    pub fn pow(&self, a: &GroupElement, k: u64) -> GroupElement {
        self.inner.realization.pow(a, k)
    }

    pub fn is_enumerated(&self) -> bool {
        self.inner.elements.get().is_some()
    }

    /// Complete, sorted, duplicate-free element list.
    pub fn elements(&self) -> Result<&[GroupElement]> {
        if let Some(els) = self.inner.elements.get() {
            return Ok(els);
        }
        let els = closure(
            &self.inner.realization,
            std::slice::from_ref(&self.inner.identity),
            &self.inner.generators,
            self.inner.caps.enumeration,
            &self.inner.name,
        )?;
        Ok(self.inner.elements.get_or_init(|| els))
    }

    pub fn order(&self) -> Result<u64> {
        Ok(self.elements()?.len() as u64)
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<Option<usize>> {
        Ok(self.elements()?.binary_search(g).ok())
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        Ok(self.index_of(g)?.is_some())
    }

    pub(crate) fn require_member(&self, g: &GroupElement) -> Result<()> {
        if self.inner.realization.accepts(g) && self.contains(g)? {
            Ok(())
        } else {
            Err(Error::Membership(format!("{g} is not in {}", self.name())))
        }
    }

    /// Order of `g`: the least divisor `d` of `|G|` with `g^d = 1`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.require_member(g)?;
        let n = self.order()?;
        Ok(order_dividing(&self.inner.realization, g, n))
    }

    /// `true` when every element commutes with every generator.
    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().enumerate().all(|(i, a)| {
            gens[i + 1..]
                .iter()
                .all(|b| self.multiply(a, b) == self.multiply(b, a))
        })
    }
}

/// Least divisor `d` of `n` with `g^d = 1`, given that `g^n = 1`.
pub(crate) fn order_dividing(r: &Realization, g: &GroupElement, n: u64) -> u64 {
    let id = r.identity();
    if *g == id {
        return 1;
    }
    let mut d = n;
    for (q, e) in factorize(n).expect("group orders are positive") {
        for _ in 0..e {
            if r.pow(g, d / q) == id {
                d /= q;
            } else {
                break;
            }
        }
    }
    d
}

/// Breadth-first closure of `seed` under right multiplication by `gens`.
///
/// `seed` must be closed already (a subgroup, or just the identity); the
/// result is the subgroup generated by `seed` and `gens`, sorted.
pub(crate) fn closure(
    r: &Realization,
    seed: &[GroupElement],
    gens: &[GroupElement],
    cap: u64,
    what: &str,
) -> Result<Vec<GroupElement>> {
    let mut seen: HashSet<GroupElement> = seed.iter().cloned().collect();
    let mut queue: Vec<GroupElement> = seed.to_vec();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        head += 1;
        for g in gens {
            let y = r.multiply(&x, g);
            if !seen.contains(&y) {
                if seen.len() as u64 >= cap {
                    return Err(Error::Resource {
                        what: format!("enumerating {what}"),
                        cap_name: "enumeration",
                        cap,
                    });
                }
                seen.insert(y.clone());
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    Ok(queue)
}

/// Least common multiple of the cycle lengths of a permutation.
pub fn permutation_cycle_lcm(g: &GroupElement) -> Option<u64> {
    let GroupElement::Perm(img) = g else {
        return None;
    };
    let mut seen = vec![false; img.len()];
    let mut l = 1u64;
    for start in 0..img.len() {
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = img[x] as usize;
            len += 1;
        }
        if len > 0 {
            l = crate::arith::lcm(l, len);
        }
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn enumerate_small_groups() {
        let q8 = corpus::quaternion_q8();
        assert_eq!(q8.order().unwrap(), 8);
        let trivial = FiniteGroup::permutation("C1", 1, &[]).unwrap();
        assert_eq!(trivial.elements().unwrap(), &[trivial.identity().clone()]);
        let a5 =
            FiniteGroup::permutation("A5", 5, &[vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]]).unwrap();
        assert_eq!(a5.order().unwrap(), 60);
    }

    #[test]
    fn enumeration_cap_is_reported() {
        let s5 = corpus::symmetric(5).unwrap().with_caps(Caps {
            enumeration: 100,
            class_count: 100,
        });
        match s5.order() {
            Err(Error::Resource { cap, cap_name, .. }) => {
                assert_eq!(cap, 100);
                assert_eq!(cap_name, "enumeration");
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn non_invertible_matrix_rejected() {
        let err = FiniteGroup::mod_matrix("bad", 4, 2, &[vec![2, 0, 0, 1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidGroup(_)));
        assert!(FiniteGroup::permutation("bad", 3, &[vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn element_orders() {
        let q8 = corpus::quaternion_q8();
        assert_eq!(q8.element_order(q8.identity()).unwrap(), 1);
        let i = q8.generators()[0].clone();
        assert_eq!(q8.element_order(&i).unwrap(), 4);
        let a5 = corpus::alternating(5).unwrap();
        let five_cycle = GroupElement::Perm(vec![1, 2, 3, 4, 0].into());
        assert_eq!(a5.element_order(&five_cycle).unwrap(), 5);
        let odd = GroupElement::Perm(vec![1, 0, 2, 3, 4].into());
        assert!(matches!(a5.element_order(&odd), Err(Error::Membership(_))));
    }

    #[test]
    fn permutation_orders_match_cycle_lcm() {
        let s5 = corpus::symmetric(5).unwrap();
        for g in s5.elements().unwrap() {
            assert_eq!(
                s5.element_order(g).unwrap(),
                permutation_cycle_lcm(g).unwrap()
            );
        }
    }

    #[test]
    fn caps_from_env_rejects_garbage() {
        assert!(parse_cap("X", "0").is_err());
        assert!(parse_cap("X", "abc").is_err());
        assert_eq!(parse_cap("X", " 12 ").unwrap(), 12);
    }
}
