//! Element-order statistics.
//!
//! The order spectrum is computed once per group; ψ, the average order, the
//! exponent and the maximum order are all read off it.

use std::collections::BTreeMap;

use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{big_pow, divisors, euler_phi, lcm, ExactRational, UInt};
use crate::error::{Error, Result};
use crate::group::{order_dividing, FiniteGroup, GroupElement, Realization};

/// Multiset of element orders: order -> number of elements of that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrderSpectrum {
    counts: BTreeMap<u64, u64>,
}

impl OrderSpectrum {
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Self {
        Self {
            counts: counts.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub(crate) fn from_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = BTreeMap::new();
        for o in orders {
            *counts.entry(o).or_insert(0) += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, order: u64) -> u64 {
        self.counts.get(&order).copied().unwrap_or(0)
    }

    pub fn add(&mut self, order: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(order).or_insert(0) += count;
        }
    }

    pub fn merge(&mut self, other: &OrderSpectrum) {
        for (&o, &c) in &other.counts {
            self.add(o, c);
        }
    }

    /// Number of elements, `|G|`.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn psi(&self) -> UInt {
        self.counts
            .iter()
            .map(|(&o, &c)| UInt::from(o) * UInt::from(c))
            .sum()
    }

    pub fn avg_order(&self) -> ExactRational {
        ExactRational::ratio(&self.psi(), &UInt::from(self.total()))
    }

    pub fn exponent(&self) -> u64 {
        self.counts.keys().fold(1, |acc, &o| lcm(acc, o))
    }

    pub fn max_order(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(1)
    }
}

pub(crate) fn orders_of(r: &Realization, els: &[GroupElement], n: u64) -> Vec<u64> {
    els.par_iter().map(|g| order_dividing(r, g, n)).collect()
}

/// Exact histogram of element orders over the full element list.
pub fn order_spectrum(g: &FiniteGroup) -> Result<OrderSpectrum> {
    let els = g.elements()?;
    let n = els.len() as u64;
    Ok(OrderSpectrum::from_orders(orders_of(
        g.realization(),
        els,
        n,
    )))
}

/// `ψ(G)`, the sum of element orders.
pub fn psi(g: &FiniteGroup) -> Result<UInt> {
    Ok(order_spectrum(g)?.psi())
}

/// Average element order `ψ(G) / |G|`.
pub fn avg_order(g: &FiniteGroup) -> Result<ExactRational> {
    Ok(order_spectrum(g)?.avg_order())
}

pub fn exponent(g: &FiniteGroup) -> Result<u64> {
    Ok(order_spectrum(g)?.exponent())
}

pub fn max_order(g: &FiniteGroup) -> Result<u64> {
    Ok(order_spectrum(g)?.max_order())
}

/// Spectrum of `C_n`: `φ(d)` elements of order `d` for each divisor `d`.
pub fn cyclic_spectrum(n: u64) -> Result<OrderSpectrum> {
    if n == 0 {
        return Err(Error::Domain("cyclic group of order 0".into()));
    }
    let mut counts = BTreeMap::new();
    for d in divisors(n)? {
        counts.insert(d, euler_phi(d)?);
    }
    Ok(OrderSpectrum { counts })
}

/// `ψ(C_n) = Σ_{d | n} d φ(d)`, without enumerating the group.
pub fn psi_cyclic(n: u64) -> Result<UInt> {
    Ok(cyclic_spectrum(n)?.psi())
}

/// Average order of the homocyclic group `(Z/p^s)^r`.
///
/// There are `p^{jr}` elements of order dividing `p^j`, so exactly
/// `p^{jr} - p^{(j-1)r}` of order `p^j`.
pub fn homocyclic_avg_order(p: u64, s: u32, r: u32) -> Result<ExactRational> {
    if s == 0 || r == 0 {
        return Err(Error::Domain(format!(
            "homocyclic group needs s >= 1 and r >= 1, got s={s}, r={r}"
        )));
    }
    if p < 2 {
        return Err(Error::Domain(format!("p must be prime, got {p}")));
    }
    let pb = UInt::from(p);
    let mut sum = UInt::one();
    for j in 1..=s {
        let with_order = big_pow(p, j * r) - big_pow(p, (j - 1) * r);
        sum += Pow::pow(&pb, j) * with_order;
    }
    Ok(ExactRational::ratio(&sum, &big_pow(p, s * r)))
}

/// `p^s - p^{s-1}`, the lower bound on the average order of any abelian
/// group of exponent `p^s`.
pub fn homocyclic_lower_bound(p: u64, s: u32) -> ExactRational {
    if s == 0 {
        return ExactRational::zero();
    }
    ExactRational::from_uint(&(big_pow(p, s) - big_pow(p, s - 1)))
}

/// Basic sanity of a spectrum: counts sum to the order, one identity, orders divide `|G|`.
pub fn spectrum_is_consistent(sp: &OrderSpectrum, group_order: u64) -> bool {
    sp.total() == group_order
        && sp.count(1) == 1
        && sp.counts().keys().all(|&o| group_order.is_multiple_of(o))
        && !sp.psi().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::group::direct_product;

    fn spectrum(pairs: &[(u64, u64)]) -> OrderSpectrum {
        OrderSpectrum::from_counts(pairs.iter().copied().collect())
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(
            order_spectrum(&corpus::cyclic(2).unwrap()).unwrap(),
            spectrum(&[(1, 1), (2, 1)])
        );
        assert_eq!(
            order_spectrum(&corpus::quaternion_q8()).unwrap(),
            spectrum(&[(1, 1), (2, 1), (4, 6)])
        );
        assert_eq!(
            order_spectrum(&corpus::alternating(5).unwrap()).unwrap(),
            spectrum(&[(1, 1), (2, 15), (3, 20), (5, 24)])
        );
    }

    #[test]
    fn a5_cycle_type_oracle() {
        // even permutations of 5 points by cycle type:
        // 5-cycles 4! = 24, 3-cycles C(5,3)*2 = 20, double transpositions 15
        let sp = order_spectrum(&corpus::alternating(5).unwrap()).unwrap();
        assert_eq!(sp.count(5), 24);
        assert_eq!(sp.count(3), 5 * 4 * 3 / 3);
        assert_eq!(sp.count(2), 5 * 3);
    }

    #[test]
    fn psi_and_average() {
        let trivial = corpus::cyclic(1).unwrap();
        assert_eq!(psi(&trivial).unwrap(), UInt::one());
        assert_eq!(avg_order(&trivial).unwrap(), ExactRational::one());
        let a5 = corpus::alternating(5).unwrap();
        assert_eq!(psi(&a5).unwrap(), UInt::from(211u32));
        assert_eq!(
            avg_order(&a5).unwrap(),
            ExactRational::new(211, 60).unwrap()
        );
        assert_eq!(
            avg_order(&corpus::cyclic(2).unwrap()).unwrap(),
            ExactRational::new(3, 2).unwrap()
        );
        assert_eq!(
            psi(&corpus::cyclic(60).unwrap()).unwrap(),
            UInt::from(1617u32)
        );
    }

    #[test]
    fn exponent_and_max_order() {
        assert_eq!(
            exponent(&corpus::elementary_abelian(3, 3).unwrap()).unwrap(),
            3
        );
        assert_eq!(exponent(&corpus::quaternion_q8()).unwrap(), 4);
        assert_eq!(exponent(&corpus::alternating(5).unwrap()).unwrap(), 30);
        assert_eq!(max_order(&corpus::cyclic(12).unwrap()).unwrap(), 12);
        assert_eq!(max_order(&corpus::quaternion_q8()).unwrap(), 4);
        assert_eq!(max_order(&corpus::alternating(5).unwrap()).unwrap(), 5);
    }

    #[test]
    fn psi_cyclic_closed_form() {
        assert_eq!(psi_cyclic(1).unwrap(), UInt::from(1u32));
        assert_eq!(psi_cyclic(2).unwrap(), UInt::from(3u32));
        assert_eq!(psi_cyclic(60).unwrap(), UInt::from(1617u32));
        assert!(psi_cyclic(0).is_err());
    }

    #[test]
    fn homocyclic_closed_form() {
        assert_eq!(
            homocyclic_avg_order(2, 1, 1).unwrap(),
            ExactRational::new(3, 2).unwrap()
        );
        let c3sq = corpus::homocyclic(3, 1, 2).unwrap();
        assert_eq!(
            homocyclic_avg_order(3, 1, 2).unwrap(),
            avg_order(&c3sq).unwrap()
        );
        assert!(homocyclic_avg_order(2, 0, 1).is_err());
        assert!(homocyclic_avg_order(2, 1, 0).is_err());
    }

    #[test]
    fn c2_times_c3_spectrum() {
        let g = direct_product(&corpus::cyclic(2).unwrap(), &corpus::cyclic(3).unwrap()).unwrap();
        assert_eq!(
            order_spectrum(&g).unwrap(),
            spectrum(&[(1, 1), (2, 1), (3, 2), (6, 2)])
        );
    }

    #[test]
    fn homocyclic_bound_holds() {
        for p in [2u64, 3, 5] {
            for s in 1..=4 {
                for r in 1..=5 {
                    let o = homocyclic_avg_order(p, s, r).unwrap();
                    assert!(o >= homocyclic_lower_bound(p, s), "p={p} s={s} r={r}");
                }
            }
        }
    }
}
