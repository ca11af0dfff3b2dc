//! Library results against brute-force oracles written only in terms of
//! multiplication, inversion and the element list.

use std::collections::BTreeSet;

use avgorder::arith::{ExactRational, UInt};
use avgorder::corpus::{self, corpus_up_to};
use avgorder::group::{conjugacy_class_count, is_solvable, FiniteGroup, GroupElement};
use avgorder::stats::{avg_order, homocyclic_avg_order, order_spectrum, psi, psi_cyclic};

fn closure(g: &FiniteGroup, gens: &BTreeSet<GroupElement>) -> BTreeSet<GroupElement> {
    let mut set: BTreeSet<GroupElement> = [g.identity().clone()].into();
    let mut frontier: Vec<GroupElement> = vec![g.identity().clone()];
    while let Some(x) = frontier.pop() {
        for t in gens {
            let y = g.multiply(&x, t);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

fn derived(g: &FiniteGroup, sub: &BTreeSet<GroupElement>) -> BTreeSet<GroupElement> {
    let mut comms = BTreeSet::new();
    for a in sub {
        for b in sub {
            let ab = g.multiply(a, b);
            let ba = g.multiply(b, a);
            comms.insert(g.multiply(&g.inverse(&ba), &ab));
        }
    }
    closure(g, &comms)
}

fn solvable_by_brute_force(g: &FiniteGroup) -> bool {
    let mut sub: BTreeSet<GroupElement> = g.elements().unwrap().iter().cloned().collect();
    loop {
        if sub.len() == 1 {
            return true;
        }
        let next = derived(g, &sub);
        if next.len() == sub.len() {
            return false;
        }
        sub = next;
    }
}

fn class_count_by_brute_force(g: &FiniteGroup) -> u64 {
    let els = g.elements().unwrap();
    let mut seen = BTreeSet::new();
    let mut k = 0;
    for x in els {
        if seen.contains(x) {
            continue;
        }
        k += 1;
        for y in els {
            seen.insert(g.multiply(&g.multiply(&g.inverse(y), x), y));
        }
    }
    k
}

fn order_by_brute_force(g: &FiniteGroup, x: &GroupElement) -> u64 {
    let mut y = x.clone();
    let mut k = 1;
    while &y != g.identity() {
        y = g.multiply(&y, x);
        k += 1;
    }
    k
}

#[test]
fn solvability_matches_derived_series_oracle() {
    let groups = corpus_up_to(200).unwrap();
    let mut insoluble = Vec::new();
    for g in groups.iter().filter(|g| g.order().unwrap() <= 120) {
        let expected = solvable_by_brute_force(g);
        assert_eq!(is_solvable(g).unwrap(), expected, "{}", g.name());
        if !expected {
            insoluble.push(g.name().to_string());
        }
    }
    assert!(insoluble.iter().any(|n| n == "A5"), "{insoluble:?}");
    assert!(insoluble.iter().any(|n| n == "S5"), "{insoluble:?}");
}

#[test]
fn class_count_matches_orbit_oracle() {
    for g in corpus_up_to(96).unwrap() {
        assert_eq!(
            conjugacy_class_count(&g).unwrap(),
            class_count_by_brute_force(&g),
            "{}",
            g.name()
        );
    }
}

#[test]
fn spectrum_matches_repeated_multiplication() {
    for g in corpus_up_to(64).unwrap() {
        let sp = order_spectrum(&g).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for x in g.elements().unwrap() {
            *counts.entry(order_by_brute_force(&g, x)).or_insert(0u64) += 1;
        }
        assert_eq!(sp.counts(), &counts, "{}", g.name());
    }
}

#[test]
fn psi_cyclic_matches_enumeration() {
    for n in 1..=200 {
        assert_eq!(
            psi(&corpus::cyclic(n).unwrap()).unwrap(),
            psi_cyclic(n).unwrap(),
            "n = {n}"
        );
    }
}

/// Order of a vector in `(Z/p^s)^r` is `p^s / gcd(p^s, x_1, ..., x_r)`.
fn homocyclic_by_vectors(p: u64, s: u32, r: u32) -> ExactRational {
    let m = p.pow(s);
    let total = m.pow(r);
    let mut sum = UInt::from(0u32);
    for idx in 0..total {
        let mut g = m;
        let mut rest = idx;
        for _ in 0..r {
            g = num_integer::gcd(g, rest % m);
            rest /= m;
        }
        sum += UInt::from(m / g);
    }
    ExactRational::ratio(&sum, &UInt::from(total))
}

#[test]
fn homocyclic_closed_form_matches_vector_count() {
    for (p, s, r) in [
        (2, 1, 1),
        (2, 2, 3),
        (2, 3, 4),
        (3, 1, 4),
        (3, 2, 3),
        (5, 2, 2),
        (7, 1, 3),
        (2, 5, 2),
    ] {
        assert_eq!(
            homocyclic_avg_order(p, s, r).unwrap(),
            homocyclic_by_vectors(p, s, r),
            "({p},{s},{r})"
        );
    }
}

#[test]
fn homocyclic_closed_form_matches_group_enumeration() {
    for (p, s, r) in [(2u64, 1u32, 3u32), (2, 2, 2), (3, 2, 2), (2, 3, 4)] {
        let g = corpus::homocyclic(p, s.into(), r.into()).unwrap();
        assert_eq!(
            avg_order(&g).unwrap(),
            homocyclic_avg_order(p, s, r).unwrap()
        );
    }
}

#[test]
fn generalized_quaternion_8_is_q8() {
    let gq8 = corpus::generalized_quaternion(8).unwrap();
    assert_eq!(
        order_spectrum(&gq8).unwrap(),
        order_spectrum(&corpus::quaternion_q8()).unwrap()
    );
}
