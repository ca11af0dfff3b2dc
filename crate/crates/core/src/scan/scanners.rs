use std::collections::BTreeMap;

use rayon::prelude::*;

use super::report::VerificationReport;
use crate::arith::{factorize, lcm, ExactRational, UInt};
use crate::error::{Error, Result};
use crate::group::{commutator_subgroup, conjugacy_class_count, is_solvable, FiniteGroup};
use crate::stats::{cyclic_spectrum, order_spectrum, psi_cyclic};

/// `o(A_5) = 211/60`.
pub fn a5_threshold() -> ExactRational {
    ExactRational::new(211, 60).expect("nonzero denominator")
}

/// `ψ(A_5)/ψ(C_60) = 211/1617`.
pub fn psi_ratio_threshold() -> ExactRational {
    ExactRational::new(211, 1617).expect("nonzero denominator")
}

fn row(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn skip_on_resource<T>(r: Result<T>, name: &str, notes: &mut Vec<String>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::Resource { .. }) => {
            notes.push(format!("skipped {name}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn finish(report: &mut VerificationReport, notes: Vec<String>) {
    for n in notes {
        report.note(n);
    }
}

/// Name, order, ψ, average order, solvable.
type A5Row = (String, u64, UInt, ExactRational, bool);

/// For each group: if `o(G) < 211/60` then `G` must be solvable.
pub fn scan_conjecture_a5(groups: &[FiniteGroup]) -> Result<VerificationReport> {
    let threshold = a5_threshold();
    let results: Vec<Result<A5Row>> = groups
        .par_iter()
        .map(|g| {
            let sp = order_spectrum(g)?;
            Ok((
                g.name().to_string(),
                sp.total(),
                sp.psi(),
                sp.avg_order(),
                is_solvable(g)?,
            ))
        })
        .collect();

    let mut report = VerificationReport::new("o(G) < o(A5) = 211/60 implies G solvable");
    report.param("groups", groups.len());
    report.quantity("o(A5)", &threshold, "psi(A5) / |A5| = 211/60");
    let mut notes = Vec::new();
    let mut violations = 0;
    let mut below = 0;
    let mut boundary = Vec::new();
    for (r, g) in results.into_iter().zip(groups) {
        let Some((name, n, psi, o, solvable)) = skip_on_resource(r, g.name(), &mut notes)? else {
            continue;
        };
        let is_below = o < threshold;
        below += u64::from(is_below);
        if o == threshold {
            boundary.push(name.clone());
        }
        if is_below && !solvable {
            violations += 1;
            report.witness(format!("{name}: o = {o} < 211/60 but not solvable"));
        }
        // 60 psi < 211 n is the same test without division
        let psi_form = UInt::from(60u32) * &psi < UInt::from(211u32) * UInt::from(n);
        debug_assert_eq!(psi_form, is_below);
        report.row(row(&[
            ("group", name),
            ("order", n.to_string()),
            ("psi", psi.to_string()),
            ("o", o.to_string()),
            ("below", is_below.to_string()),
            ("solvable", solvable.to_string()),
        ]));
    }
    report.quantity("groups below threshold", below, "scan");
    report.quantity("violations", violations, "scan");
    report.check(
        "no violations",
        violations == 0,
        format!("{below} groups have o(G) < 211/60; {violations} of them are not solvable"),
    );
    if !boundary.is_empty() {
        report.note(format!(
            "at the boundary o(G) = 211/60: {}",
            boundary.join(", ")
        ));
    }
    report.note("equivalently: psi(G) < (211/60) n implies G solvable, for G of order n");
    finish(&mut report, notes);
    Ok(report)
}

/// `ψ(G) <= ψ(C_n)`, with equality exactly for the cyclic spectrum.
pub fn scan_psi_max(groups: &[FiniteGroup]) -> Result<VerificationReport> {
    let threshold = psi_ratio_threshold();
    let results: Vec<Result<_>> = groups
        .par_iter()
        .map(|g| {
            let sp = order_spectrum(g)?;
            let n = sp.total();
            let cyc = psi_cyclic(n)?;
            let is_cyclic = sp == cyclic_spectrum(n)?;
            let ratio = ExactRational::ratio(&sp.psi(), &cyc);
            let solvable = if ratio > threshold {
                Some(is_solvable(g)?)
            } else {
                None
            };
            Ok((
                g.name().to_string(),
                n,
                sp.psi(),
                cyc,
                is_cyclic,
                ratio,
                solvable,
            ))
        })
        .collect();

    let mut report = VerificationReport::new("psi(G) <= psi(C_n) for G of order n");
    report.param("groups", groups.len());
    report.quantity("psi(A5)/psi(C60)", &threshold, "211/1617");
    let mut notes = Vec::new();
    let (mut exceed, mut bad_equality, mut ratio_failures) = (0, 0, 0);
    for (r, g) in results.into_iter().zip(groups) {
        let Some((name, n, psi, cyc, is_cyclic, ratio, solvable)) =
            skip_on_resource(r, g.name(), &mut notes)?
        else {
            continue;
        };
        if psi > cyc {
            exceed += 1;
            report.witness(format!("{name}: psi = {psi} > psi(C_{n}) = {cyc}"));
        }
        if (psi == cyc) != is_cyclic {
            bad_equality += 1;
            report.witness(format!(
                "{name}: psi = psi(C_{n}) but the spectrum is not cyclic"
            ));
        }
        if solvable == Some(false) {
            ratio_failures += 1;
            report.witness(format!(
                "{name}: psi/psi(C_n) = {ratio} > 211/1617 but not solvable"
            ));
        }
        report.row(row(&[
            ("group", name),
            ("order", n.to_string()),
            ("psi", psi.to_string()),
            ("psi(C_n)", cyc.to_string()),
            ("ratio", ratio.to_string()),
            ("cyclic spectrum", is_cyclic.to_string()),
        ]));
    }
    report.check(
        "psi(G) <= psi(C_n)",
        exceed == 0,
        format!("{exceed} groups exceed psi(C_n)"),
    );
    report.check(
        "equality only for the cyclic spectrum",
        bad_equality == 0,
        format!("{bad_equality} groups attain psi(C_n) with a non-cyclic spectrum"),
    );
    report.check(
        "psi(G) > (211/1617) psi(C_n) implies solvable",
        ratio_failures == 0,
        format!("{ratio_failures} non-solvable groups above the ratio threshold"),
    );
    finish(&mut report, notes);
    Ok(report)
}

/// Exponent of `G/G'`, as the lcm of the orders of the generator images.
pub fn abelianization_exponent(g: &FiniteGroup) -> Result<u64> {
    let d = commutator_subgroup(g)?;
    let mut e = 1;
    for t in g.generators() {
        let mut k = 1;
        let mut x = t.clone();
        while !d.contains(&x)? {
            x = g.multiply(&x, t);
            k += 1;
        }
        e = lcm(e, k);
    }
    Ok(e)
}

/// Class-count and average-order bounds against the exponent, over `p`-groups.
pub fn scan_k_exp(groups: &[FiniteGroup]) -> Result<VerificationReport> {
    let mut p_groups = Vec::new();
    for g in groups {
        let n = g.order()?;
        if let [(p, _)] = factorize(n)?[..] {
            p_groups.push((g, p));
        }
    }
    let results: Vec<Result<_>> = p_groups
        .par_iter()
        .map(|(g, p)| {
            let sp = order_spectrum(g)?;
            let k = conjugacy_class_count(g)?;
            let e_ab = abelianization_exponent(g)?;
            Ok((sp.exponent(), sp.avg_order(), k, e_ab, *p))
        })
        .collect();

    let mut report = VerificationReport::new("k(G) >= exp(G)^(1/2) for p-groups");
    report.param("p-groups", p_groups.len());
    let mut notes = Vec::new();
    let (mut k_fail, mut o_fail, mut ab_fail) = (0, 0, 0);
    for (r, (g, _)) in results.into_iter().zip(&p_groups) {
        let Some((exp, o, k, e_ab, p)) = skip_on_resource(r, g.name(), &mut notes)? else {
            continue;
        };
        let k_ok = k * k >= exp;
        let o_ok = o.pow(2) >= ExactRational::from_integer(exp);
        let section = if e_ab > 1 { e_ab - e_ab / p } else { 0 };
        let ab_ok = k * k >= section;
        if !k_ok {
            k_fail += 1;
            report.witness(format!("{}: k = {k}, exp = {exp}", g.name()));
        }
        if !o_ok {
            o_fail += 1;
            report.witness(format!("{}: o = {o}, exp = {exp}", g.name()));
        }
        if !ab_ok {
            ab_fail += 1;
            report.witness(format!(
                "{}: k = {k}, abelianization exponent {e_ab}",
                g.name()
            ));
        }
        report.row(row(&[
            ("group", g.name().to_string()),
            ("p", p.to_string()),
            ("k", k.to_string()),
            ("exp", exp.to_string()),
            ("o", o.to_string()),
            ("exp(G/G')", e_ab.to_string()),
            ("k^2 >= exp", k_ok.to_string()),
            ("o^2 >= exp", o_ok.to_string()),
        ]));
    }
    report.check(
        "k(G)^2 >= exp(G)",
        k_fail == 0,
        format!("{k_fail} groups fail"),
    );
    report.check(
        "o(G)^2 >= exp(G)",
        o_fail == 0,
        format!("{o_fail} groups fail"),
    );
    report.check(
        "k(G)^2 >= p^e - p^(e-1) for exp(G/G') = p^e",
        ab_fail == 0,
        format!("{ab_fail} groups fail"),
    );
    report.note(
        "the abelian-section bound is checked on the abelianization G/G' only; \
         other abelian sections K/L are not enumerated",
    );
    finish(&mut report, notes);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn a5_sits_at_boundary() {
        let r = scan_conjecture_a5(&[corpus::alternating(5).unwrap(), corpus::cyclic(2).unwrap()])
            .unwrap();
        assert!(r.passed());
        assert!(r.notes.iter().any(|n| n.contains("A5")));
        assert_eq!(r.rows[0]["below"], "false");
        assert_eq!(r.rows[1]["below"], "true");
        assert_eq!(r.rows[1]["solvable"], "true");
    }

    #[test]
    fn psi_max_examples() {
        let r = scan_psi_max(&[
            corpus::quaternion_q8(),
            corpus::cyclic(8).unwrap(),
            corpus::alternating(5).unwrap(),
        ])
        .unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.rows[0]["psi"], "27");
        assert_eq!(r.rows[0]["psi(C_n)"], "43");
        assert_eq!(r.rows[1]["cyclic spectrum"], "true");
        assert_eq!(r.rows[2]["ratio"], "211/1617");
    }

    #[test]
    fn k_exp_examples() {
        let r = scan_k_exp(&[
            corpus::cyclic(4).unwrap(),
            corpus::quaternion_q8(),
            corpus::heisenberg_mod_p(3).unwrap(),
            corpus::cyclic(6).unwrap(),
        ])
        .unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.rows[1]["k"], "5");
        assert_eq!(r.rows[1]["exp(G/G')"], "2");
        assert_eq!(r.rows[2]["k"], "11");
        assert_eq!(r.rows[2]["exp"], "3");
    }

    #[test]
    fn abelianization() {
        assert_eq!(
            abelianization_exponent(&corpus::cyclic(12).unwrap()).unwrap(),
            12
        );
        assert_eq!(
            abelianization_exponent(&corpus::symmetric(4).unwrap()).unwrap(),
            2
        );
        assert_eq!(
            abelianization_exponent(&corpus::alternating(5).unwrap()).unwrap(),
            1
        );
        assert_eq!(
            abelianization_exponent(&corpus::dihedral(8).unwrap()).unwrap(),
            2
        );
    }
}
