use std::sync::Arc;

use serde::Serialize;

use super::{
    integer_matrix_group, modulus_for, orbit_lattice, restrict_to_lattice, validate_central_action,
    CentralActionReport, IntegerMatrix, Representation,
};
use crate::arith::{big_pow, UInt};
use crate::error::{Error, Result};
use crate::group::{
    frattini_p, mat_inverse_mod, mat_mul_mod, Caps, FiniteGroup, GroupElement, PairAction,
    Realization, Subgroup,
};

/// Modulus for realizing a finite integer matrix group faithfully.
/// Reduction mod any `m >= 3` is injective on finite subgroups of `GL_n(Z)`.
const ACTING_MODULUS: u32 = 4;

/// `U_s ⋊ P` with product `(u1, h1)(u2, h2) = (u1 + φ(h1)·u2, h1 h2)`.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    p: u64,
    s: u32,
    acting: FiniteGroup,
    table: Arc<PairAction>,
    group: FiniteGroup,
    /// Membership of each acting-group element in `Φ(P)`, when `P` is a `p`-group.
    in_frattini: Option<Vec<bool>>,
    z: Option<u32>,
}

fn identity_matrix(r: usize) -> Vec<u32> {
    (0..r * r).map(|k| u32::from(k / r == k % r)).collect()
}

/// Assembles `U_s ⋊ P` from one action matrix per generator of `P`.
///
/// `action[i]` is the `rank x rank` row-major matrix mod `p^s` by which the
/// `i`-th generator acts on column vectors. The assignment is extended along
/// every edge of the Cayley graph of `P` and must be consistent, so that it
/// defines a homomorphism.
pub fn build_semidirect(
    acting: &FiniteGroup,
    action: &[Vec<u32>],
    rank: usize,
    p: u64,
    s: u32,
) -> Result<SemidirectGroup> {
    let modulus = modulus_for(p, s)?;
    let gens = acting.generators();
    if action.len() != gens.len() {
        return Err(Error::Construction(format!(
            "{} action matrices given for {} generators",
            action.len(),
            gens.len()
        )));
    }
    for (i, m) in action.iter().enumerate() {
        if m.len() != rank * rank || m.iter().any(|&x| u64::from(x) >= modulus) {
            return Err(Error::Construction(format!(
                "action matrix {i} is not a {rank}x{rank} matrix mod {modulus}"
            )));
        }
        if mat_inverse_mod(m, rank, p).is_none() && rank > 0 {
            return Err(Error::Validation(format!(
                "action matrix {i} is not invertible mod {p}"
            )));
        }
    }
    let els = acting.elements()?;
    let n = els.len();
    let index = |g: &GroupElement| els.binary_search(g).expect("closed under products") as u32;
    let identity = index(acting.identity());
    let gen_idx: Vec<u32> = gens.iter().map(index).collect();

    let mut mul = vec![0u32; n * n];
    for (a, x) in els.iter().enumerate() {
        for (b, y) in els.iter().enumerate() {
            mul[a * n + b] = index(&acting.multiply(x, y));
        }
    }
    let inv: Vec<u32> = els.iter().map(|x| index(&acting.inverse(x))).collect();

    let mut table: Vec<Option<Vec<u32>>> = vec![None; n];
    table[identity as usize] = Some(identity_matrix(rank));
    let mut queue = vec![identity];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let mx = table[x as usize].clone().expect("visited");
        for (gi, &g) in gen_idx.iter().enumerate() {
            let y = mul[x as usize * n + g as usize];
            let my = mat_mul_mod(&mx, &action[gi], rank, modulus);
            match &table[y as usize] {
                Some(existing) if *existing != my => {
                    return Err(Error::Construction(format!(
                        "inconsistent action: two words for element {} of {} give different matrices",
                        els[y as usize],
                        acting.name()
                    )));
                }
                Some(_) => {}
                None => {
                    table[y as usize] = Some(my);
                    queue.push(y);
                }
            }
        }
    }
    let action_table: Vec<Vec<u32>> = table
        .into_iter()
        .map(|m| m.expect("every element is reached from the generators"))
        .collect();

    let pair_action = Arc::new(PairAction {
        modulus: modulus as u32,
        rank,
        acting_order: n,
        identity,
        mul,
        inv,
        action: action_table,
    });
    let mut generators = Vec::with_capacity(rank + gens.len());
    for i in 0..rank {
        let mut u = vec![0u32; rank];
        u[i] = 1;
        generators.push(GroupElement::Pair {
            u: u.into(),
            h: identity,
        });
    }
    for &g in &gen_idx {
        generators.push(GroupElement::Pair {
            u: vec![0; rank].into(),
            h: g,
        });
    }
    let group = FiniteGroup::from_generators(
        format!("U{s} x| {}", acting.name()),
        Realization::Semidirect(pair_action.clone()),
        generators,
    )?
    .with_caps(acting.caps());

    let in_frattini = match frattini_p(acting, p) {
        Ok(phi) => Some(
            els.iter()
                .map(|x| phi.contains(x))
                .collect::<Result<Vec<bool>>>()?,
        ),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };

    Ok(SemidirectGroup {
        p,
        s,
        acting: acting.clone(),
        table: pair_action,
        group,
        in_frattini,
        z: None,
    })
}

impl SemidirectGroup {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn rank(&self) -> usize {
        self.table.rank
    }

    pub fn modulus(&self) -> u32 {
        self.table.modulus
    }

    pub fn acting(&self) -> &FiniteGroup {
        &self.acting
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn table(&self) -> &PairAction {
        &self.table
    }

    /// `|U_s| = p^{s·rank}`.
    pub fn module_order(&self) -> UInt {
        big_pow(self.p, self.s * self.rank() as u32)
    }

    /// `p^{s·rank} · |P|`, without enumerating.
    pub fn projected_order(&self) -> UInt {
        self.module_order() * UInt::from(self.table.acting_order)
    }

    pub fn acting_order(&self) -> usize {
        self.table.acting_order
    }

    pub fn acting_element(&self, h: u32) -> &GroupElement {
        &self.acting.elements().expect("enumerated at construction")[h as usize]
    }

    pub fn acting_index(&self, g: &GroupElement) -> Option<u32> {
        self.acting
            .elements()
            .ok()?
            .binary_search(g)
            .ok()
            .map(|i| i as u32)
    }

    /// Action matrix of the acting-group element with index `h`.
    pub fn action_matrix(&self, h: u32) -> &[u32] {
        &self.table.action[h as usize]
    }

    pub fn acting_mul(&self, a: u32, b: u32) -> u32 {
        self.table.mul[a as usize * self.table.acting_order + b as usize]
    }

    pub fn acting_pow(&self, a: u32, k: u64) -> u32 {
        (0..k).fold(self.table.identity, |acc, _| self.acting_mul(acc, a))
    }

    pub fn acting_identity(&self) -> u32 {
        self.table.identity
    }

    pub fn z(&self) -> Option<u32> {
        self.z
    }

    /// Designates the central element `z` of the acting group.
    pub fn set_z(&mut self, z: &GroupElement) -> Result<()> {
        let idx = self
            .acting_index(z)
            .ok_or_else(|| Error::Membership(format!("{z} is not in {}", self.acting.name())))?;
        self.z = Some(idx);
        Ok(())
    }

    pub fn with_z(mut self, z: &GroupElement) -> Result<Self> {
        self.set_z(z)?;
        Ok(self)
    }

    pub fn frattini_mask(&self) -> Option<&[bool]> {
        self.in_frattini.as_deref()
    }

    pub fn frattini_order(&self) -> Option<u64> {
        self.in_frattini
            .as_ref()
            .map(|m| m.iter().filter(|&&b| b).count() as u64)
    }

    pub fn pair(&self, u: Vec<u32>, h: u32) -> GroupElement {
        GroupElement::Pair { u: u.into(), h }
    }

    /// Whether a pair lies in `W = U_s Φ(P)`.
    pub fn in_w(&self, g: &GroupElement) -> Option<bool> {
        match (g, &self.in_frattini) {
            (GroupElement::Pair { h, .. }, Some(mask)) => Some(mask[*h as usize]),
            _ => None,
        }
    }

    /// Every vector of `(Z/p^s)^rank`, in lexicographic order.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let r = self.rank();
        let m = self.modulus();
        let total = u64::from(m).pow(r as u32);
        (0..total).map(move |mut k| {
            let mut u = vec![0u32; r];
            for slot in u.iter_mut().rev() {
                *slot = (k % u64::from(m)) as u32;
                k /= u64::from(m);
            }
            u
        })
    }

    fn pairs_over(&self, hs: &[u32], name: String, gens: Vec<GroupElement>) -> Result<Subgroup> {
        let cap = self.group.caps().enumeration;
        let size = self.module_order() * UInt::from(hs.len());
        if size > UInt::from(cap) {
            return Err(Error::Resource {
                what: format!("listing {name} (order {size})"),
                cap_name: "enumeration",
                cap,
            });
        }
        let mut els: Vec<GroupElement> = Vec::new();
        for u in self.vectors() {
            for &h in hs {
                els.push(self.pair(u.clone(), h));
            }
        }
        els.sort_unstable();
        let ambient = self.projected_order().try_into().unwrap_or(u64::MAX);
        Ok(Subgroup::new(
            FiniteGroup::with_elements(
                name,
                self.group.realization().clone(),
                gens,
                els,
                self.group.caps(),
            ),
            ambient,
        ))
    }

    fn module_generators(&self) -> Vec<GroupElement> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                let mut u = vec![0u32; r];
                u[i] = 1;
                self.pair(u, self.table.identity)
            })
            .collect()
    }

    /// `N = U_s = {(u, 1)}`.
    pub fn module_subgroup(&self) -> Result<Subgroup> {
        self.pairs_over(
            &[self.table.identity],
            format!("U{}", self.s),
            self.module_generators(),
        )
    }

    /// `W = U_s Φ(P)`.
    pub fn w_subgroup(&self) -> Result<Subgroup> {
        let mask = self.in_frattini.as_ref().ok_or_else(|| {
            Error::Domain(format!("{} is not a {}-group", self.acting.name(), self.p))
        })?;
        let hs: Vec<u32> = (0..mask.len() as u32)
            .filter(|&h| mask[h as usize])
            .collect();
        let mut gens = self.module_generators();
        let phi = frattini_p(&self.acting, self.p)?;
        for g in phi.generators() {
            let h = self.acting_index(g).expect("Phi(P) lies in P");
            gens.push(self.pair(vec![0; self.rank()], h));
        }
        self.pairs_over(
            &hs,
            format!("U{} Phi({})", self.s, self.acting.name()),
            gens,
        )
    }

    /// Every element `(u, h)`, sorted, without running the generator closure.
    pub fn elements_by_construction(&self) -> Result<Vec<GroupElement>> {
        let all: Vec<u32> = (0..self.table.acting_order as u32).collect();
        let sub = self.pairs_over(&all, "G".into(), vec![])?;
        Ok(sub.elements()?.to_vec())
    }
}

/// Outcome of checking `(u, z^k)^p = 1` for all `u` and `k = 1..p-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerIdentityReport {
    pub p: u64,
    pub s: u32,
    /// Vectors checked by direct multiplication in the group, per `k`.
    pub vectors_checked: u64,
    pub exhaustive: bool,
    /// `Σ_j φ(z^{kj}) ≡ 0 mod p^s` for every `k`.
    pub additive_criterion: bool,
    pub holds: bool,
    pub witness: Option<(Vec<u32>, u64)>,
}

/// Direct check limit on `|U_s|`; beyond it only the additive criterion is used.
const EXHAUSTIVE_POWER_LIMIT: u64 = 1 << 16;

/// Checks `(u, z^k)^p = 1` for every `u ∈ U_s` and `k = 1..p-1`.
///
/// `(u, z^k)^p = ((Σ_j φ(z^{kj}))·u, z^{kp})`, so the identity holds for all
/// `u` exactly when the matrix sum vanishes mod `p^s`. Both routes are run
/// when `U_s` is small enough to enumerate.
pub fn verify_power_identity(g: &SemidirectGroup) -> Result<PowerIdentityReport> {
    let z =
        g.z.ok_or_else(|| Error::Validation("no central element z designated".into()))?;
    let p = g.p;
    let r = g.rank();
    let modulus = u64::from(g.modulus());
    let group = g.group();
    let module_order: Option<u64> = g.module_order().try_into().ok();
    let exhaustive = module_order.is_some_and(|n| n <= EXHAUSTIVE_POWER_LIMIT);

    let mut additive = true;
    let mut witness = None;
    let mut checked = 0;
    for k in 1..p {
        let zk = g.acting_pow(z, k);
        let mut sum = vec![0u32; r * r];
        let mut power = g.acting_identity();
        for _ in 0..p {
            let m = g.action_matrix(power);
            for (acc, &x) in sum.iter_mut().zip(m) {
                *acc = ((u64::from(*acc) + u64::from(x)) % modulus) as u32;
            }
            power = g.acting_mul(power, zk);
        }
        if sum.iter().any(|&x| x != 0) {
            additive = false;
        }
        if g.acting_pow(zk, p) != g.acting_identity() {
            additive = false;
        }
        if exhaustive {
            for u in g.vectors() {
                let x = g.pair(u.clone(), zk);
                checked += 1;
                if group.pow(&x, p) != *group.identity() && witness.is_none() {
                    witness = Some((u, k));
                }
            }
        }
    }
    let holds = additive && witness.is_none();
    if exhaustive && additive != witness.is_none() {
        return Err(Error::Validation(
            "direct and additive checks of the power identity disagree".into(),
        ));
    }
    Ok(PowerIdentityReport {
        p,
        s: g.s,
        vectors_checked: checked / (p - 1).max(1),
        exhaustive,
        additive_criterion: additive,
        holds,
        witness,
    })
}

/// The integer-level data of the construction.
#[derive(Clone, Debug)]
pub struct LatticeAction {
    pub p: u64,
    pub representation: Representation,
    pub z: IntegerMatrix,
    pub central_action: CentralActionReport,
    /// Rows span the orbit lattice `A`, in Hermite normal form.
    pub basis: IntegerMatrix,
    /// `R(g)` with `B·M(g) = R(g)·B`, one per generator.
    pub restricted: Vec<IntegerMatrix>,
    pub integer_group_order: u64,
}

/// Result of running the full pipeline on a representation.
#[derive(Clone, Debug)]
pub struct Construction {
    pub lattice: LatticeAction,
    pub group: SemidirectGroup,
}

/// Representation → orbit lattice → reduction mod `p^s` → `U_s ⋊ P`.
///
/// `P` is realized as the image of the representation mod 4. The induced
/// right action `c ↦ c·R(h)` on row coordinates of `U_s` is written as the
/// left action `u ↦ (R(h)^{-1})^T u` on columns.
pub fn construct(rep: &Representation, s: u32, caps: Caps) -> Result<Construction> {
    let p = rep.p;
    let modulus = modulus_for(p, s)?;
    let z = rep.z();
    let central_action = validate_central_action(&z, p)?;
    for (i, g) in rep.generators.iter().enumerate() {
        if &z * g != g * &z {
            return Err(Error::Validation(format!(
                "z does not commute with generator {i}; it is not central"
            )));
        }
    }
    let integer_group = integer_matrix_group(&rep.generators, rep.dim, caps.enumeration)?;
    let basis = orbit_lattice(&rep.generators, &rep.a, caps.enumeration)?;
    let restricted = restrict_to_lattice(&rep.generators, &basis)?;
    let rank = basis.rows();

    let flat = |m: &IntegerMatrix| -> Vec<i64> {
        m.to_i64_rows()
            .expect("finite-order integer matrices have small entries")
            .concat()
    };
    let acting = FiniteGroup::mod_matrix(
        format!("P({}x{})", rep.dim, rep.dim),
        ACTING_MODULUS,
        rep.dim,
        &rep.generators.iter().map(flat).collect::<Vec<_>>(),
    )?
    .with_caps(caps);
    if acting.order()? != integer_group.len() as u64 {
        return Err(Error::Construction(format!(
            "reduction mod {ACTING_MODULUS} is not faithful: {} integer matrices, {} residues",
            integer_group.len(),
            acting.order()?
        )));
    }

    let mut left_action = Vec::with_capacity(restricted.len());
    for (i, r) in restricted.iter().enumerate() {
        let red: Vec<u32> = r.reduce_mod(modulus);
        let inv = mat_inverse_mod(&red, rank, modulus).ok_or_else(|| {
            Error::Validation(format!(
                "restricted generator {i} is not invertible mod {p}"
            ))
        })?;
        let mut t = vec![0u32; rank * rank];
        for a in 0..rank {
            for b in 0..rank {
                t[b * rank + a] = inv[a * rank + b];
            }
        }
        left_action.push(t);
    }

    let z_elem = GroupElement::Matrix(z.reduce_mod(u64::from(ACTING_MODULUS)).into());
    let group = build_semidirect(&acting, &left_action, rank, p, s)?.with_z(&z_elem)?;

    Ok(Construction {
        lattice: LatticeAction {
            p,
            representation: rep.clone(),
            z,
            central_action,
            basis,
            restricted,
            integer_group_order: integer_group.len() as u64,
        },
        group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::stats::{avg_order, homocyclic_avg_order, order_spectrum};
    use num_bigint::BigInt;

    fn q8_group(s: u32) -> SemidirectGroup {
        construct(&Representation::builtin_q8(), s, Caps::default())
            .unwrap()
            .group
    }

    #[test]
    fn q8_orders() {
        let g1 = q8_group(1);
        assert_eq!(g1.group().order().unwrap(), 128);
        assert_eq!(g1.projected_order(), UInt::from(128u32));
        assert_eq!(g1.rank(), 4);
        let g3 = q8_group(3);
        assert_eq!(g3.projected_order(), UInt::from(32768u32));
    }

    #[test]
    fn q8_action_matches_quaternion_matrices() {
        // signed permutation matrices are orthogonal, so the left action on
        // columns coincides with the generator matrices themselves
        let g = q8_group(3);
        let rep = Representation::builtin_q8();
        for (i, t) in g.acting().generators().iter().enumerate() {
            let h = g.acting_index(t).unwrap();
            assert_eq!(g.action_matrix(h), &rep.generators[i].reduce_mod(8)[..]);
        }
    }

    #[test]
    fn trivial_acting_group_gives_homocyclic() {
        let trivial = corpus::cyclic(1).unwrap();
        let g = build_semidirect(&trivial, &[], 2, 3, 1).unwrap();
        assert_eq!(g.group().order().unwrap(), 9);
        assert_eq!(
            avg_order(g.group()).unwrap(),
            homocyclic_avg_order(3, 1, 2).unwrap()
        );
    }

    #[test]
    fn enumeration_matches_construction() {
        let g = q8_group(1);
        assert_eq!(
            g.group().elements().unwrap(),
            &g.elements_by_construction().unwrap()[..]
        );
    }

    #[test]
    fn inconsistent_action_rejected() {
        // C2 = <t>, but send t to a matrix of order 4
        let c2 = corpus::cyclic(2).unwrap();
        let err = build_semidirect(&c2, &[vec![0, 4, 1, 0]], 2, 5, 1).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn module_and_w_subgroups() {
        let g = q8_group(1);
        let n = g.module_subgroup().unwrap();
        assert_eq!(n.size(), 16);
        assert!(n.is_normal_in(g.group()).unwrap());
        let w = g.w_subgroup().unwrap();
        assert_eq!(w.size(), 32);
        assert!(w.is_normal_in(g.group()).unwrap());
        for x in w.elements().unwrap() {
            assert!(g.group().contains(x).unwrap());
        }
    }

    #[test]
    fn power_identity() {
        for s in 1..=3 {
            let g = q8_group(s);
            let rep = verify_power_identity(&g).unwrap();
            assert!(rep.holds && rep.exhaustive, "s={s}");
            assert_eq!(rep.vectors_checked, 16u64.pow(s));
        }
        let zero = q8_group(2);
        let z = zero.z().unwrap();
        let x = zero.pair(vec![0; 4], z);
        assert_eq!(zero.group().pow(&x, 2), *zero.group().identity());
    }

    #[test]
    fn power_identity_fails_without_fixed_point_freeness() {
        // P = C2 acting trivially on Z/2: (u, z)^2 = (2u, 1) = 1 mod 2 but not mod 4
        let c2 = corpus::cyclic(2).unwrap();
        let z = c2.generators()[0].clone();
        let g = build_semidirect(&c2, &[vec![1]], 1, 2, 2)
            .unwrap()
            .with_z(&z)
            .unwrap();
        let rep = verify_power_identity(&g).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.witness, Some((vec![1], 1)));
    }

    #[test]
    fn c3_rotation_pipeline() {
        let doc = r#"{"p": 3, "dim": 2, "generators": [[[0,-1],[1,-1]]], "z_word": [0]}"#;
        let rep = Representation::from_json(doc).unwrap();
        let c = construct(&rep, 2, Caps::default()).unwrap();
        assert_eq!(c.lattice.basis, IntegerMatrix::identity(2));
        assert_eq!(c.group.group().order().unwrap(), 81 * 3);
        assert!(verify_power_identity(&c.group).unwrap().holds);
        let sp = order_spectrum(c.group.group()).unwrap();
        // outside U: (u, z^k)^3 = 1, so 2 * 81 elements of order 3
        assert_eq!(sp.count(3), 8 + 162);
    }

    #[test]
    fn non_central_z_rejected() {
        // generators of S3 acting on the A2 root lattice, z = a 3-cycle
        let doc =
            r#"{"p": 3, "dim": 2, "generators": [[[0,-1],[1,-1]], [[0,1],[1,0]]], "z_word": [0]}"#;
        let rep = Representation::from_json(doc).unwrap();
        assert!(matches!(
            construct(&rep, 1, Caps::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn construction_ignores_big_integer_noise() {
        let rep = Representation::builtin_q8().with_a(vec![
            BigInt::from(3),
            BigInt::from(0),
            BigInt::from(0),
            BigInt::from(0),
        ]);
        let c = construct(&rep, 1, Caps::default()).unwrap();
        assert_eq!(c.lattice.basis.rows(), 4);
        assert_eq!(c.group.group().order().unwrap(), 128);
    }
}
