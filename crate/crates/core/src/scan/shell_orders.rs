use num_traits::ToPrimitive;

use super::report::VerificationReport;
use crate::arith::{big_pow, ExactRational, UInt};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::lattice::{verify_power_identity, SemidirectGroup};
use crate::stats::{orders_of, OrderSpectrum};

/// Largest group order handled by flat enumeration under [`CountingMode::Auto`].
pub const AUTO_EXHAUSTIVE_LIMIT: u64 = 1 << 15;

/// How the elements outside `W = U_s Φ(P)` are examined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountingMode {
    /// Enumerate `G` by generator closure and compute every order.
    Exhaustive,
    /// Decide the outside shell per acting element, enumerate only `W`.
    Shell,
    /// Exhaustive up to [`AUTO_EXHAUSTIVE_LIMIT`], shell beyond.
    #[default]
    Auto,
}

/// Everything [`verify_shell_orders`] measured.
#[derive(Clone, Debug)]
pub struct ShellOrdersOutcome {
    pub report: VerificationReport,
    /// `"enumeration"` or `"shell"`.
    pub route: &'static str,
    pub group_order: u64,
    pub w_order: u64,
    pub outside: OrderSpectrum,
    pub inside: OrderSpectrum,
    /// Spectrum of all of `G`.
    pub spectrum: OrderSpectrum,
    pub outside_orders_ok: bool,
    pub inside_orders_ok: bool,
}

impl ShellOrdersOutcome {
    pub fn holds(&self) -> bool {
        self.outside_orders_ok && self.inside_orders_ok
    }

    pub fn avg_order(&self) -> ExactRational {
        self.spectrum.avg_order()
    }
}

fn projected_order(g: &SemidirectGroup) -> Result<u64> {
    g.projected_order().to_u64().ok_or_else(|| Error::Resource {
        what: format!("group of order {}", g.projected_order()),
        cap_name: "enumeration",
        cap: g.group().caps().enumeration,
    })
}

/// `Σ_{j<m} φ(h^j)` mod `p^s`, where `m` is the order of `h` in `P`.
pub fn orbit_sum_matrix(g: &SemidirectGroup, h: u32) -> (u64, Vec<u32>) {
    let r = g.rank();
    let modulus = u64::from(g.modulus());
    let mut sum = vec![0u32; r * r];
    let mut power = g.acting_identity();
    let mut m = 0u64;
    loop {
        for (acc, &x) in sum.iter_mut().zip(g.action_matrix(power)) {
            *acc = ((u64::from(*acc) + u64::from(x)) % modulus) as u32;
        }
        m += 1;
        power = g.acting_mul(power, h);
        if power == g.acting_identity() {
            return (m, sum);
        }
    }
}

/// Order of `(u, h)` from the orbit sum: `(u, h)^m = (S·u, 1)`.
///
/// Returns `m` times the additive order of `S·u` in `(Z/p^s)^r`.
pub fn pair_order_by_orbit_sum(g: &SemidirectGroup, u: &[u32], h: u32) -> u64 {
    let (m, s) = orbit_sum_matrix(g, h);
    let r = g.rank();
    let modulus = u64::from(g.modulus());
    let v: Vec<u64> = (0..r)
        .map(|i| {
            (0..r).fold(0, |acc, j| {
                (acc + u64::from(s[i * r + j]) * u64::from(u[j])) % modulus
            })
        })
        .collect();
    let mut add_order = 1;
    let mut w = v;
    while w.iter().any(|&x| x != 0) {
        w.iter_mut().for_each(|x| *x = (*x * g.p()) % modulus);
        add_order *= g.p();
    }
    m * add_order
}

/// Checks that elements outside `W = U_s Φ(P)` have order exactly `p^2` and
/// elements of `W` have order at most `p^{s+1}`.
pub fn verify_shell_orders(g: &SemidirectGroup, mode: CountingMode) -> Result<ShellOrdersOutcome> {
    let p = g.p();
    let s = g.s();
    let mask = g
        .frattini_mask()
        .ok_or_else(|| Error::Domain(format!("{} is not a {p}-group", g.acting().name())))?
        .to_vec();
    let n = projected_order(g)?;
    let use_shell = match mode {
        CountingMode::Exhaustive => false,
        CountingMode::Shell => true,
        CountingMode::Auto => n > AUTO_EXHAUSTIVE_LIMIT,
    };

    let mut report =
        VerificationReport::new("element orders of U_s x| P inside and outside U_s Phi(P)");
    report.param("p", p).param("s", s).param("rank", g.rank());
    report.param("P", g.acting().name());
    let psq = p * p;
    let inside_bound = big_pow(p, s + 1).to_u64().unwrap_or(u64::MAX);

    let mut route = "enumeration";
    let mut shell_failure = None;
    if use_shell {
        for h in 0..mask.len() as u32 {
            if mask[h as usize] {
                continue;
            }
            let (m, sum) = orbit_sum_matrix(g, h);
            if m != psq || sum.iter().any(|&x| x != 0) {
                shell_failure = Some(h);
                break;
            }
        }
        if shell_failure.is_none() {
            route = "shell";
        }
    }

    let (outside, inside, outside_witness) = if route == "shell" {
        let outside_h = mask.iter().filter(|&&b| !b).count() as u64;
        let module: u64 = g.module_order().to_u64().expect("fits: |G| fits");
        let mut outside = OrderSpectrum::default();
        outside.add(psq, outside_h * module);
        let w = g.w_subgroup()?;
        let w_els = w.elements()?;
        let inside = OrderSpectrum::from_orders(orders_of(g.group().realization(), w_els, n));
        (outside, inside, None)
    } else {
        let els = g.group().elements()?;
        if els.len() as u64 != n {
            return Err(Error::Construction(format!(
                "generator closure has {} elements, expected {n}",
                els.len()
            )));
        }
        let orders = orders_of(g.group().realization(), els, n);
        let mut outside = OrderSpectrum::default();
        let mut inside = OrderSpectrum::default();
        let mut witness = None;
        for (x, &o) in els.iter().zip(&orders) {
            let GroupElement::Pair { h, .. } = x else {
                unreachable!("semidirect elements are pairs")
            };
            if mask[*h as usize] {
                inside.add(o, 1);
            } else {
                outside.add(o, 1);
                if o != psq && witness.is_none() {
                    witness = Some(format!("{x} has order {o}"));
                }
            }
        }
        (outside, inside, witness)
    };

    let outside_count = outside.total();
    let outside_orders_ok = outside.counts().keys().all(|&o| o == psq);
    let inside_orders_ok = inside.max_order() <= inside_bound;
    let mut spectrum = inside.clone();
    spectrum.merge(&outside);
    let w_order = inside.total();

    report.quantity("|G|", n, "p^{s*rank} * |P|");
    report.quantity("|U_s Phi(P)|", w_order, route);
    report.quantity("outside count", outside_count, route);
    report.quantity("max order inside", inside.max_order(), route);
    report.quantity("psi(G)", spectrum.psi(), route);
    report.quantity("o(G)", spectrum.avg_order(), route);

    report.check(
        "order",
        spectrum.total() == n,
        format!("{} elements counted, |G| = {n}", spectrum.total()),
    );
    report.check(
        "outside orders",
        outside_orders_ok,
        if outside_count == 0 {
            "no elements outside U_s Phi(P); holds vacuously".to_string()
        } else {
            format!("all {outside_count} elements outside U_s Phi(P) have order exactly {psq}")
        },
    );
    report.check(
        "inside orders",
        inside_orders_ok,
        format!(
            "max order in U_s Phi(P) is {} <= p^(s+1) = {inside_bound}",
            inside.max_order()
        ),
    );
    if let Some(w) = outside_witness {
        report.witness(w);
    }
    if !inside_orders_ok {
        report.witness(format!(
            "an element of U_s Phi(P) has order {}",
            inside.max_order()
        ));
    }
    if g.z().is_some() {
        let pi = verify_power_identity(g)?;
        report.check(
            "power identity",
            pi.holds,
            format!(
                "(u, z^k)^p = 1 for all u and k = 1..{}; direct check on {} vectors, orbit sum {}",
                p - 1,
                pi.vectors_checked,
                if pi.additive_criterion {
                    "vanishes"
                } else {
                    "does not vanish"
                }
            ),
        );
        if let Some((u, k)) = pi.witness {
            report.witness(format!("(u, z^{k})^p != 1 for u = {u:?}"));
        }
    }
    if route == "shell" {
        report.note(
            "outside elements decided per acting element h: h has order p^2 and the orbit sum \
             of h vanishes mod p^s, so (u, h) has order p^2 for every u",
        );
    } else if let Some(h) = shell_failure {
        report.note(format!(
            "shell criterion failed for acting element {}; fell back to enumeration",
            g.acting_element(h)
        ));
    }

    Ok(ShellOrdersOutcome {
        report,
        route,
        group_order: n,
        w_order,
        outside,
        inside,
        spectrum,
        outside_orders_ok,
        inside_orders_ok,
    })
}

/// `p^2 (|G| - |W|) + p^{s+1} |W|` over `|G|`, the bound on `o(G)` implied by the
/// two order clauses.
pub fn structural_bound(p: u64, s: u32, group_order: u64, w_order: u64) -> ExactRational {
    let outside = UInt::from(group_order - w_order) * UInt::from(p * p);
    let inside = UInt::from(w_order) * big_pow(p, s + 1);
    ExactRational::ratio(&(outside + inside), &UInt::from(group_order))
}
