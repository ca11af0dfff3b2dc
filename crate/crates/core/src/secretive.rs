//! Wall-secretive properties of a `p`-group.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::log_exact;
use crate::error::{Error, Result};
use crate::group::{frattini_p, generated_subgroup, FiniteGroup, GroupElement};
use crate::stats::orders_of;

/// Clause-by-clause outcome of [`is_wall_secretive`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecretiveReport {
    pub p: u64,
    pub group_order: u64,
    pub frattini_order: u64,
    /// Clause (a): `Φ(P)` has exponent `p` (or is trivial).
    pub frattini_exponent_ok: bool,
    /// `log_p |P/Φ(P)|`.
    pub rank: u32,
    /// Clause (b): `|P/Φ(P)| = p^p`.
    pub rank_equals_p: bool,
    /// Clause (c), first half: every element outside `Φ(P)` has order `p^2`.
    pub outside_orders_ok: bool,
    /// Clause (c), second half: `P^p` is central of order `p` and contains
    /// every `p`-th power of an element outside `Φ(P)`.
    pub powers_central_cyclic_ok: bool,
    /// Generator of `P^p`, present iff `powers_central_cyclic_ok`.
    pub z: Option<GroupElement>,
}

impl SecretiveReport {
    pub fn passed(&self) -> bool {
        self.frattini_exponent_ok
            && self.rank_equals_p
            && self.outside_orders_ok
            && self.powers_central_cyclic_ok
    }

    /// Clauses (a) and (c) without the rank condition.
    pub fn weakly_secretive(&self) -> bool {
        self.frattini_exponent_ok && self.outside_orders_ok && self.powers_central_cyclic_ok
    }
}

/// Checks the three secretive clauses on `P` by exhaustive enumeration.
pub fn is_wall_secretive(g: &FiniteGroup, p: u64) -> Result<SecretiveReport> {
    let n = g.order()?;
    if log_exact(n, p).is_none() {
        return Err(Error::Domain(format!(
            "{} has order {n}, which is not a power of {p}",
            g.name()
        )));
    }
    let phi = frattini_p(g, p)?;
    let els = g.elements()?;
    let orders = orders_of(g.realization(), els, n);

    let phi_orders = orders_of(phi.realization(), phi.elements()?, phi.size());
    let frattini_exponent_ok = phi_orders.iter().all(|&o| o == 1 || o == p);
    let rank = log_exact(n / phi.size(), p).expect("Φ(P) has p-power index");

    let mut outside_orders_ok = true;
    let mut outside_powers = BTreeSet::new();
    for (x, &o) in els.iter().zip(&orders) {
        if phi.contains(x)? {
            continue;
        }
        if o != p * p {
            outside_orders_ok = false;
        }
        outside_powers.insert(g.pow(x, p));
    }

    let all_powers: Vec<GroupElement> = els.iter().map(|x| g.pow(x, p)).collect();
    let pp = generated_subgroup(g, &all_powers)?;
    let central = pp.elements()?.iter().all(|z| {
        g.generators()
            .iter()
            .all(|t| g.multiply(z, t) == g.multiply(t, z))
    });
    let mut powers_central_cyclic_ok = pp.size() == p && central;
    for y in &outside_powers {
        if y == g.identity() || !pp.contains(y)? {
            powers_central_cyclic_ok = false;
        }
    }
    let z = powers_central_cyclic_ok
        .then(|| {
            pp.elements()
                .ok()?
                .iter()
                .find(|x| *x != g.identity())
                .cloned()
        })
        .flatten();

    Ok(SecretiveReport {
        p,
        group_order: n,
        frattini_order: phi.size(),
        frattini_exponent_ok,
        rank,
        rank_equals_p: u64::from(rank) == p,
        outside_orders_ok,
        powers_central_cyclic_ok,
        z,
    })
}
