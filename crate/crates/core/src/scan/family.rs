use std::collections::BTreeMap;

use super::report::VerificationReport;
use super::shell_orders::{verify_shell_orders, CountingMode};
use crate::arith::{divisor_count, factorize, ExactRational};
use crate::error::{Error, Result};
use crate::group::{center, conjugacy_class_count, Caps, FiniteGroup};
use crate::lattice::{construct, Representation};
use crate::stats::order_spectrum;

/// Tabulates `(o(G_s), mo(G_s))` for `G_s = U_s ⋊ P` over a range of `s`.
///
/// `thresholds` are candidate values `t` for the squared constant in
/// `o(G) >= c mo(G)^{1/2}`; each row records whether `o^2 < t mo`.
pub fn family_ratio_report(
    rep: &Representation,
    s_range: std::ops::RangeInclusive<u32>,
    thresholds: &[ExactRational],
    caps: Caps,
    mode: CountingMode,
) -> Result<VerificationReport> {
    let p = rep.p;
    if s_range.is_empty() || *s_range.start() == 0 {
        return Err(Error::Parameter(format!(
            "s range {}..={} must be nonempty and start at 1 or later",
            s_range.start(),
            s_range.end()
        )));
    }
    let mut report = VerificationReport::new("o(G_s)^2 / mo(G_s) along G_s = U_s x| P");
    report.param("p", p);
    report.param("s range", format!("{}..{}", s_range.start(), s_range.end()));
    report.param(
        "thresholds",
        thresholds
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
    );

    let mut ratios: Vec<(u32, ExactRational)> = Vec::new();
    for s in s_range.clone() {
        let built = construct(rep, s, caps)?;
        let orders = verify_shell_orders(&built.group, mode)?;
        report.check(
            &format!("shell orders at s = {s}"),
            orders.holds(),
            format!("route: {}", orders.route),
        );
        let o = orders.avg_order();
        let mo = orders.spectrum.max_order();
        let ratio = &o.pow(2) / &ExactRational::from_integer(mo);
        let mut row: BTreeMap<String, String> = BTreeMap::new();
        row.insert("s".into(), s.to_string());
        row.insert("|G|".into(), orders.group_order.to_string());
        row.insert("o".into(), o.to_string());
        row.insert("mo".into(), mo.to_string());
        row.insert("o^2/mo".into(), ratio.to_string());
        row.insert("route".into(), orders.route.to_string());
        for t in thresholds {
            let below = ratio < *t;
            row.insert(format!("o^2 < {t} mo"), below.to_string());
        }
        report.row(row);
        if s == 1 {
            report.check("mo(G_1) = p^2", mo == p * p, format!("mo(G_1) = {mo}"));
        }
        ratios.push((s, ratio));
    }
    let decreasing = ratios.windows(2).all(|w| w[1].1 < w[0].1);
    report.check(
        "o^2/mo strictly decreasing in s",
        decreasing,
        ratios
            .iter()
            .map(|(s, r)| format!("s={s}: {r}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    if !decreasing {
        for w in ratios.windows(2).filter(|w| w[1].1 >= w[0].1) {
            report.witness(format!(
                "ratio at s={} is {} >= {} at s={}",
                w[1].0, w[1].1, w[0].1, w[0].0
            ));
        }
    }
    report.note(
        "a finite table cannot refute the existence of a constant c with o^2 >= c mo; it shows the ratio \
         over the listed s only",
    );
    report.note("whether o(G_s) converges as s grows is not addressed; values are tabulated");
    Ok(report)
}

/// Every Sylow subgroup is normal: for each prime `p`, the number of
/// elements of `p`-power order equals the `p`-part of `|G|`.
pub fn is_nilpotent(g: &FiniteGroup) -> Result<bool> {
    let sp = order_spectrum(g)?;
    let n = sp.total();
    for (p, e) in factorize(n)? {
        let p_part = p.pow(e);
        let p_elements: u64 = sp
            .counts()
            .iter()
            .filter(|(&o, _)| p_part % o == 0)
            .map(|(_, &c)| c)
            .sum();
        if p_elements != p_part {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `k(G) / d(|G|)`.
pub fn kd_ratio(g: &FiniteGroup) -> Result<ExactRational> {
    let k = conjugacy_class_count(g)?;
    let d = divisor_count(g.order()?)?;
    Ok(ExactRational::new(k, d).expect("d >= 1"))
}

/// [`kd_ratio`] with the ingredients used for `p`-groups.
pub fn kd_report(g: &FiniteGroup) -> Result<VerificationReport> {
    let n = g.order()?;
    let k = conjugacy_class_count(g)?;
    let d = divisor_count(n)?;
    let ratio = ExactRational::new(k, d).expect("d >= 1");
    let mut report = VerificationReport::new("k(G) / d(|G|) for nilpotent G");
    report.param("group", g.name());
    report.quantity("|G|", n, "enumeration");
    report.quantity("k(G)", k, "conjugacy classes");
    report.quantity("d(|G|)", d, "divisor count");
    report.quantity("k/d", &ratio, "exact");
    let nilpotent = is_nilpotent(g)?;
    report.check("nilpotent", nilpotent, "every Sylow subgroup is normal");
    if let [(p, m)] = factorize(n)?[..] {
        let z = center(g)?.size();
        report.quantity("|Z(G)|", z, "center");
        report.check("k(P) >= |Z(P)|", k >= z, format!("{k} >= {z}"));
        report.check("|Z(P)| >= p", z >= p, format!("{z} >= {p}"));
        report.check(
            "d(|P|) = m + 1",
            d == u64::from(m) + 1,
            format!("{d} = {m} + 1"),
        );
        report.check("k/d >= 1", k >= d, format!("{ratio} >= 1"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::group::direct_product;

    #[test]
    fn kd_examples() {
        assert_eq!(
            kd_ratio(&corpus::cyclic(5).unwrap()).unwrap(),
            ExactRational::new(5, 2).unwrap()
        );
        assert_eq!(
            kd_ratio(&corpus::quaternion_q8()).unwrap(),
            ExactRational::new(5, 4).unwrap()
        );
        assert_eq!(
            kd_ratio(&corpus::heisenberg_mod_p(3).unwrap()).unwrap(),
            ExactRational::new(11, 4).unwrap()
        );
        assert!(kd_report(&corpus::quaternion_q8()).unwrap().passed());
    }

    #[test]
    fn kd_multiplicative() {
        let p = corpus::quaternion_q8();
        let q = corpus::heisenberg_mod_p(3).unwrap();
        let pq = direct_product(&p, &q).unwrap();
        assert_eq!(
            kd_ratio(&pq).unwrap(),
            kd_ratio(&p).unwrap() * kd_ratio(&q).unwrap()
        );
    }

    #[test]
    fn nilpotency() {
        assert!(is_nilpotent(&corpus::quaternion_q8()).unwrap());
        assert!(is_nilpotent(&corpus::cyclic(12).unwrap()).unwrap());
        assert!(!is_nilpotent(&corpus::symmetric(3).unwrap()).unwrap());
        assert!(!is_nilpotent(&corpus::alternating(4).unwrap()).unwrap());
        assert!(!kd_report(&corpus::symmetric(3).unwrap()).unwrap().passed());
    }

    #[test]
    fn family_small_range() {
        let q8 = Representation::builtin_q8();
        let one = [ExactRational::one()];
        let r = family_ratio_report(&q8, 2..=3, &one, Caps::default(), CountingMode::Auto).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.rows[0]["mo"], "4");
        assert_eq!(r.rows[1]["mo"], "8");
        // mo(G_2) = mo(G_1) = 4 while o grows, so the ratio rises from s = 1 to s = 2
        let r = family_ratio_report(&q8, 1..=2, &one, Caps::default(), CountingMode::Auto).unwrap();
        assert!(!r.passed());
        assert_eq!(r.rows[0]["o"], "447/128");
        assert_eq!(r.rows[1]["o"], "7647/2048");
        assert_eq!(r.witnesses.len(), 1);
    }
}
