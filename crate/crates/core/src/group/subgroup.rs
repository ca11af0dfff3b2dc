use std::collections::BTreeSet;
use std::ops::Deref;

use rayon::prelude::*;

use super::{closure, FiniteGroup, GroupElement, Realization};
use crate::arith::log_exact;
use crate::error::{Error, Result};

/// A subgroup of an enumerated ambient group.
///
/// Derefs to a [`FiniteGroup`] sharing the ambient realization, whose
/// generators are a reduced generating set and whose elements are known.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FiniteGroup,
    ambient_order: u64,
}

impl Deref for Subgroup {
    type Target = FiniteGroup;
    fn deref(&self) -> &FiniteGroup {
        &self.group
    }
}

impl Subgroup {
    pub(crate) fn new(group: FiniteGroup, ambient_order: u64) -> Self {
        Self {
            group,
            ambient_order,
        }
    }

    /// The subgroup as a standalone group.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn into_group(self) -> FiniteGroup {
        self.group
    }

    pub fn size(&self) -> u64 {
        self.group.elements().map_or(0, |e| e.len() as u64)
    }

    pub fn index(&self) -> u64 {
        self.ambient_order / self.size()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.size() == self.ambient_order
    }

    /// Closed under conjugation by every generator of `ambient`.
    pub fn is_normal_in(&self, ambient: &FiniteGroup) -> Result<bool> {
        for t in ambient.generators() {
            let ti = ambient.inverse(t);
            for h in self.group.generators() {
                let c = ambient.multiply(&ambient.multiply(&ti, h), t);
                if !self.group.contains(&c)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds the subgroup of `g` generated by `set`, adding a candidate as a
/// generator only when it is not yet in the subgroup built so far.
fn generate_within(
    g: &FiniteGroup,
    set: impl IntoIterator<Item = GroupElement>,
    name: &str,
) -> Result<Subgroup> {
    let ambient = g.order()?;
    let r = g.realization();
    let cap = g.caps().enumeration;
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut current: Vec<GroupElement> = vec![g.identity().clone()];
    for s in set {
        if current.binary_search(&s).is_err() {
            gens.push(s);
            current = closure(r, &current, &gens, cap, name)?;
        }
    }
    Ok(Subgroup::new(
        FiniteGroup::with_elements(name, r.clone(), gens, current, g.caps()),
        ambient,
    ))
}

/// Smallest subgroup of `g` containing `set`.
pub fn generated_subgroup(g: &FiniteGroup, set: &[GroupElement]) -> Result<Subgroup> {
    for s in set {
        g.require_member(s)?;
    }
    let name = format!("<{} elements of {}>", set.len(), g.name());
    generate_within(g, set.iter().cloned(), &name)
}

/// Smallest normal subgroup of `g` containing `set`.
pub fn normal_closure(g: &FiniteGroup, set: &[GroupElement]) -> Result<Subgroup> {
    for s in set {
        g.require_member(s)?;
    }
    let mut h = generate_within(g, set.iter().cloned(), "normal closure")?;
    loop {
        let mut extra = Vec::new();
        for t in g.generators() {
            let ti = g.inverse(t);
            for x in h.generators() {
                let c = g.multiply(&g.multiply(&ti, x), t);
                if !h.contains(&c)? {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return Ok(h);
        }
        let mut all = h.generators().to_vec();
        all.extend(extra);
        h = generate_within(g, all, "normal closure")?;
    }
}

/// `[a, b] = a^-1 b^-1 a b`.
pub fn commutator(g: &FiniteGroup, a: &GroupElement, b: &GroupElement) -> GroupElement {
    let ai = g.inverse(a);
    let bi = g.inverse(b);
    g.multiply(&g.multiply(&ai, &bi), &g.multiply(a, b))
}

fn generator_commutators(g: &FiniteGroup) -> Vec<GroupElement> {
    let gens = g.generators();
    let mut out = BTreeSet::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = commutator(g, a, b);
            if c != *g.identity() {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

/// Derived subgroup `G'`, as the normal closure of commutators of generators.
pub fn commutator_subgroup(g: &FiniteGroup) -> Result<Subgroup> {
    g.elements()?;
    let sub = normal_closure(g, &generator_commutators(g))?;
    Ok(rename(sub, format!("[{0}, {0}]", g.name())))
}

pub fn center(g: &FiniteGroup) -> Result<Subgroup> {
    let els = g.elements()?;
    let gens = g.generators();
    let central: Vec<GroupElement> = els
        .par_iter()
        .filter(|z| gens.iter().all(|t| g.multiply(z, t) == g.multiply(t, z)))
        .cloned()
        .collect();
    let sub = generate_within(g, central.iter().cloned(), "center")?;
    debug_assert_eq!(sub.size(), central.len() as u64);
    Ok(rename(sub, format!("Z({})", g.name())))
}

/// Frattini subgroup of a `p`-group, `P' P^p`.
pub fn frattini_p(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    let n = g.order()?;
    if log_exact(n, p).is_none() {
        return Err(Error::Domain(format!(
            "{} has order {n}, which is not a power of {p}",
            g.name()
        )));
    }
    let els = g.elements()?;
    let powers: BTreeSet<GroupElement> = els
        .par_iter()
        .map(|x| g.pow(x, p))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|x| x != g.identity())
        .collect();
    let mut seed: Vec<GroupElement> = powers.into_iter().collect();
    seed.extend(generator_commutators(g));
    let sub = normal_closure(g, &seed)?;
    Ok(rename(sub, format!("Phi({})", g.name())))
}

/// Subgroup generated by the elements whose order does not divide `p`.
pub fn hughes_subgroup(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    let els = g.elements()?;
    let big: Vec<GroupElement> = els
        .par_iter()
        .filter(|x| g.pow(x, p) != *g.identity())
        .cloned()
        .collect();
    let sub = generate_within(g, big, "Hughes subgroup")?;
    Ok(rename(sub, format!("H_{p}({})", g.name())))
}

/// Sizes of the conjugacy classes, in order of each class's least element.
pub fn conjugacy_class_sizes(g: &FiniteGroup) -> Result<Vec<u64>> {
    let n = g.order()?;
    let cap = g.caps().class_count;
    if n > cap {
        return Err(Error::Resource {
            what: format!("conjugacy classes of {} (order {n})", g.name()),
            cap_name: "class-count",
            cap,
        });
    }
    let els = g.elements()?;
    let conj: Vec<(GroupElement, GroupElement)> = g
        .generators()
        .iter()
        .map(|t| (g.inverse(t), t.clone()))
        .collect();
    let mut visited = vec![false; els.len()];
    let mut sizes = Vec::new();
    for start in 0..els.len() {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = &els[orbit[head]];
            head += 1;
            for (ti, t) in &conj {
                let y = g.multiply(&g.multiply(ti, x), t);
                let j = els.binary_search(&y).expect("conjugate lies in the group");
                if !visited[j] {
                    visited[j] = true;
                    orbit.push(j);
                }
            }
        }
        sizes.push(orbit.len() as u64);
    }
    Ok(sizes)
}

/// `k(G)`, the number of conjugacy classes.
pub fn conjugacy_class_count(g: &FiniteGroup) -> Result<u64> {
    Ok(conjugacy_class_sizes(g)?.len() as u64)
}

/// Whether the derived series reaches the trivial subgroup.
pub fn is_solvable(g: &FiniteGroup) -> Result<bool> {
    let mut current = g.clone();
    loop {
        let n = current.order()?;
        if n == 1 {
            return Ok(true);
        }
        let d = commutator_subgroup(&current)?;
        if d.size() == n {
            return Ok(false);
        }
        current = d.into_group();
    }
}

fn rename(sub: Subgroup, name: String) -> Subgroup {
    let ambient = sub.ambient_order;
    Subgroup::new(sub.group.renamed(name), ambient)
}

/// Faithful permutation generators for `g` on `0..degree`.
fn as_permutations(g: &FiniteGroup) -> Result<(usize, Vec<Vec<u16>>)> {
    match g.realization() {
        Realization::Permutation { degree } => Ok((
            *degree,
            g.generators()
                .iter()
                .map(|x| match x {
                    GroupElement::Perm(img) => img.to_vec(),
                    _ => unreachable!("permutation realization"),
                })
                .collect(),
        )),
        _ => {
            // right regular representation
            let els = g.elements()?;
            if els.len() > usize::from(u16::MAX) {
                return Err(Error::Resource {
                    what: format!("regular permutation representation of {}", g.name()),
                    cap_name: "permutation degree",
                    cap: u64::from(u16::MAX),
                });
            }
            let gens = g
                .generators()
                .iter()
                .map(|t| {
                    els.iter()
                        .map(|x| els.binary_search(&g.multiply(x, t)).expect("closed") as u16)
                        .collect()
                })
                .collect();
            Ok((els.len(), gens))
        }
    }
}

/// `G x H`, realized as a permutation group on the disjoint union of
/// faithful permutation domains of the factors.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
    let cap = g.caps().enumeration.min(h.caps().enumeration);
    let projected = g.order()?.saturating_mul(h.order()?);
    if projected > cap {
        return Err(Error::Resource {
            what: format!("{} x {} (order {projected})", g.name(), h.name()),
            cap_name: "enumeration",
            cap,
        });
    }
    let (dg, gg) = as_permutations(g)?;
    let (dh, gh) = as_permutations(h)?;
    let degree = dg + dh;
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for x in &gg {
        let mut img: Vec<usize> = x.iter().map(|&v| usize::from(v)).collect();
        img.extend(dg..degree);
        gens.push(img);
    }
    for y in &gh {
        let mut img: Vec<usize> = (0..dg).collect();
        img.extend(y.iter().map(|&v| usize::from(v) + dg));
        gens.push(img);
    }
    Ok(
        FiniteGroup::permutation(format!("{} x {}", g.name(), h.name()), degree, &gens)?
            .with_caps(g.caps()),
    )
}
