use std::cmp::Ordering;

use super::report::VerificationReport;
use super::shell_orders::{structural_bound, verify_shell_orders, CountingMode};
use crate::arith::{big_pow, cmp_rational_power, is_prime, ExactRational, UInt};
use crate::error::{Error, Result};
use crate::group::{GroupElement, Subgroup};
use crate::lattice::SemidirectGroup;
use crate::stats::{homocyclic_avg_order, homocyclic_lower_bound, order_spectrum};

fn int(n: UInt) -> ExactRational {
    ExactRational::from_uint(&n)
}

fn relation(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("p = {p} is not prime")))
    }
}

/// `2p^2 - p^{2-p}`, the bound on `o(G)` at `s = p + 1` when `|P/Φ(P)| = p^p`.
pub fn proof_bound(p: u64) -> ExactRational {
    let two_p_sq = ExactRational::from_integer(2 * p * p);
    let pb = ExactRational::from_integer(p);
    // p^{2-p} = p^2 / p^p
    let tail = pb.pow(2) / pb.pow(p as u32);
    two_p_sq - tail
}

fn check_c(p: u64, c: &ExactRational) -> Result<()> {
    if !c.is_positive() {
        return Err(Error::Parameter(format!("c must be positive, got {c}")));
    }
    let pc = &ExactRational::from_integer(p) * c;
    if pc < ExactRational::from_integer(3) {
        return Err(Error::Parameter(format!(
            "the inequality chain needs 3 <= p*c, but p*c = {pc}"
        )));
    }
    Ok(())
}

/// Verifies `o(G) < o(N)^c` for a built `G = U_s ⋊ P` and a subgroup `N`,
/// together with each link of the supporting chain.
pub fn verify_theorem(
    p: u64,
    c: &ExactRational,
    g: &SemidirectGroup,
    n: &Subgroup,
    mode: CountingMode,
) -> Result<VerificationReport> {
    require_prime(p)?;
    check_c(p, c)?;
    if g.p() != p {
        return Err(Error::Parameter(format!(
            "group was built for p = {}, not p = {p}",
            g.p()
        )));
    }
    let s = g.s();
    let mut report = VerificationReport::new("o(G) < o(N)^c");
    report
        .param("p", p)
        .param("s", s)
        .param("c", c)
        .param("P", g.acting().name());
    report.param("N", n.name());

    let orders = verify_shell_orders(g, mode)?;
    let o_g = orders.avg_order();
    let n_spec = order_spectrum(n.group())?;
    let o_n = n_spec.avg_order();
    let is_module = u64::try_from(g.module_order()).is_ok_and(|m| m == n.size())
        && n.elements()?
            .iter()
            .all(|x| matches!(x, GroupElement::Pair { h, .. } if *h == g.acting_identity()));

    report.quantity("|G|", orders.group_order, "p^{s*rank} * |P|");
    report.quantity("|N|", n.size(), "enumeration");
    report.quantity("psi(G)", orders.spectrum.psi(), orders.route);
    report.quantity("o(G)", &o_g, orders.route);
    report.quantity("psi(N)", n_spec.psi(), "enumeration");
    report.quantity("o(N)", &o_n, "enumeration");
    let a = c.numer().clone();
    let b = c.denom().clone();
    let b32: u32 = b
        .try_into()
        .map_err(|_| Error::Parameter("denominator of c too large".into()))?;
    let a32: u32 = a
        .try_into()
        .map_err(|_| Error::Parameter("numerator of c too large".into()))?;
    report.quantity(&format!("o(G)^{b32}"), o_g.pow(b32), "exact power");
    report.quantity(&format!("o(N)^{a32}"), o_n.pow(a32), "exact power");

    report.check(
        "shell orders",
        orders.holds(),
        format!(
            "outside U_s Phi(P): order p^2 ({}); inside: order <= p^(s+1) ({})",
            orders.outside_orders_ok, orders.inside_orders_ok
        ),
    );
    if let Some(pi) = orders.report.check_named("power identity") {
        report.check("power identity", pi.passed, pi.detail.clone());
    }
    let bound = structural_bound(p, s, orders.group_order, orders.w_order);
    report.quantity(
        "order-clause bound",
        &bound,
        "(p^2 (|G|-|W|) + p^(s+1) |W|) / |G|",
    );
    report.check(
        "o(G) <= order-clause bound",
        o_g <= bound,
        format!("{o_g} <= {bound}"),
    );

    let two_p_sq = ExactRational::from_integer(2 * p * p);
    report.quantity("2p^2", &two_p_sq, "closed form");
    if u64::from(s) == p + 1 {
        let pb = proof_bound(p);
        report.quantity("2p^2 - p^(2-p)", &pb, "closed form");
        if orders.group_order / orders.w_order == p.pow(p as u32) {
            report.check(
                "order-clause bound = 2p^2 - p^(2-p)",
                bound == pb,
                format!("{bound} = {pb}"),
            );
        }
        report.check("o(G) < 2p^2", o_g < two_p_sq, format!("{o_g} < {two_p_sq}"));
        let p3 = ExactRational::from_integer(p.pow(3));
        report.check("2p^2 <= p^3", two_p_sq <= p3, format!("{two_p_sq} <= {p3}"));
        let ord = cmp_rational_power(&p3, &o_n, c)?;
        report.check(
            "p^3 <= o(N)^c",
            ord != Ordering::Greater,
            format!("(p^3)^{b32} {} o(N)^{a32}", relation(ord)),
        );
    } else {
        report.note(format!(
            "the links o(G) < 2p^2 and p^3 <= o(N)^c are asserted only at s = p + 1 = {}",
            p + 1
        ));
    }

    let lower = homocyclic_lower_bound(p, s);
    report.quantity("p^s - p^(s-1)", &lower, "closed form");
    if is_module {
        let closed = homocyclic_avg_order(p, s, g.rank() as u32)?;
        report.quantity("o(N) closed form", &closed, "homocyclic counting identity");
        report.check(
            "o(N) closed form agrees",
            closed == o_n,
            format!("{closed} = {o_n}"),
        );
    }
    report.check(
        "o(N) >= p^s - p^(s-1)",
        o_n >= lower,
        format!("{o_n} >= {lower}"),
    );

    let ord = cmp_rational_power(&o_g, &o_n, c)?;
    report.check(
        "o(G) < o(N)^c",
        ord == Ordering::Less,
        format!("o(G)^{b32} {} o(N)^{a32}", relation(ord)),
    );
    if ord != Ordering::Less {
        report.witness(format!("o(G) = {o_g}, o(N) = {o_n}, c = {c}"));
    }
    report.note(
        "precondition checked as 3 <= p*c (equivalently p >= 3/c); no link needs the strict p > 3/c",
    );
    Ok(report)
}

/// The inequality chain evaluated from closed forms only, without building `G`.
///
/// Compares `2p^2` against `(p^s - p^{s-1})^c`. The precondition `3 <= pc` is
/// reported, not enforced, so that the sharper `p = 5, c = 1/2` case can be
/// checked.
pub fn verify_chain_symbolic(p: u64, c: &ExactRational, s: u32) -> Result<VerificationReport> {
    require_prime(p)?;
    if !c.is_positive() {
        return Err(Error::Parameter(format!("c must be positive, got {c}")));
    }
    if s == 0 {
        return Err(Error::Parameter("s must be at least 1".into()));
    }
    let mut report = VerificationReport::new("2p^2 < (p^s - p^(s-1))^c");
    report
        .param("p", p)
        .param("s", s)
        .param("c", c)
        .param("mode", "symbolic");
    let two_p_sq = ExactRational::from_integer(2 * p * p);
    let lower = homocyclic_lower_bound(p, s);
    report.quantity("2p^2", &two_p_sq, "closed form");
    report.quantity("p^s - p^(s-1)", &lower, "closed form");
    let b: u32 = c
        .denom()
        .try_into()
        .map_err(|_| Error::Parameter("c too large".into()))?;
    let a: u32 = c
        .numer()
        .try_into()
        .map_err(|_| Error::Parameter("c too large".into()))?;
    report.quantity(&format!("(2p^2)^{b}"), two_p_sq.pow(b), "exact power");
    report.quantity(&format!("(p^s - p^(s-1))^{a}"), lower.pow(a), "exact power");

    if u64::from(s) == p + 1 {
        let pb = proof_bound(p);
        report.quantity("2p^2 - p^(2-p)", &pb, "closed form");
        report.check(
            "2p^2 - p^(2-p) < 2p^2",
            pb < two_p_sq,
            format!("{pb} < {two_p_sq}"),
        );
        let pp = int(big_pow(p, p as u32));
        report.check(
            "p^s - p^(s-1) >= p^p",
            lower >= pp,
            format!("{lower} >= {pp}"),
        );
    }
    let ord = cmp_rational_power(&two_p_sq, &lower, c)?;
    report.check(
        "2p^2 < (p^s - p^(s-1))^c",
        ord == Ordering::Less,
        format!("(2p^2)^{b} {} (p^s - p^(s-1))^{a}", relation(ord)),
    );
    let pc = &ExactRational::from_integer(p) * c;
    if pc < ExactRational::from_integer(3) {
        report.note(format!(
            "p*c = {pc} < 3: the general chain does not apply, only this sharper comparison"
        ));
    }
    report.note(format!(
        "symbolic mode: G = U_s x| P would have order p^(s*rank) * |P| with |P| >= p^(p+1) = {}; \
         it is not built or enumerated",
        big_pow(p, p as u32 + 1)
    ));
    Ok(report)
}

/// Bound on `o(G)` for an anti-Hughes group of order `p^n` and exponent `p^3`.
pub fn anti_hughes_bound(p: u64, n: u32) -> Result<VerificationReport> {
    require_prime(p)?;
    if p < 5 {
        return Err(Error::Parameter(format!(
            "anti-Hughes groups exist only for p >= 5, got p = {p}"
        )));
    }
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    let pn = big_pow(p, n);
    let pn2 = big_pow(p, n - 2);
    let numer = (&pn - &pn2) * UInt::from(p) + &pn2 * big_pow(p, 3);
    let bound = ExactRational::ratio(&numer, &pn);
    let closed = ExactRational::from_integer(2 * p) - ExactRational::new(1, p).expect("p > 0");
    let two_p = ExactRational::from_integer(2 * p);
    let p3 = ExactRational::from_integer(p.pow(3));

    let mut report =
        VerificationReport::new("o(G) < exp(G)^(1/2) for anti-Hughes groups of exponent p^3");
    report.param("p", p).param("n", n);
    report.quantity("bound", &bound, "((p^n - p^(n-2)) p + p^(n-2) p^3) / p^n");
    report.quantity("2p - 1/p", &closed, "closed form");
    report.quantity("(2p)^2", two_p.pow(2), "exact power");
    report.quantity("p^3", &p3, "exact power");
    report.check(
        "bound = 2p - 1/p",
        bound == closed,
        format!("{bound} = {closed}"),
    );
    report.check("bound < 2p", bound < two_p, format!("{bound} < {two_p}"));
    report.check(
        "2p < (p^3)^(1/2)",
        two_p.pow(2) < p3,
        format!("{} < {p3}", two_p.pow(2)),
    );
    report.note(
        "no anti-Hughes group of exponent p^3 is known; the bound is evaluated, not realized",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn proof_bound_values() {
        assert_eq!(proof_bound(2), q("7"));
        assert_eq!(proof_bound(3), q("53/3"));
    }

    #[test]
    fn corollary_at_five() {
        let r = verify_chain_symbolic(5, &q("1/2"), 6).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.quantities["(2p^2)^2"].value, "2500/1");
        assert_eq!(r.quantities["(p^s - p^(s-1))^1"].value, "12500/1");
        assert!(r.notes.iter().any(|n| n.contains("not built")));
    }

    #[test]
    fn anti_hughes_values() {
        let r = anti_hughes_bound(5, 10).unwrap();
        assert!(r.passed());
        assert_eq!(r.quantities["bound"].value, "49/5");
        let r = anti_hughes_bound(7, 4).unwrap();
        assert_eq!(r.quantities["bound"].value, "97/7");
        assert!(r.passed());
        let err = anti_hughes_bound(3, 4).unwrap_err();
        assert!(err.to_string().contains("p >= 5"));
        assert!(anti_hughes_bound(6, 4).is_err());
        assert!(anti_hughes_bound(5, 1).is_err());
    }

    #[test]
    fn precondition_gate() {
        assert!(check_c(2, &q("3/2")).is_ok());
        assert!(check_c(2, &q("1")).is_err());
        assert!(check_c(7, &q("1/2")).is_ok());
        assert!(check_c(5, &q("1/2")).is_err());
    }
}
