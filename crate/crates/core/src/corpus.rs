//! Named groups built from first principles.

use serde::Deserialize;

use crate::arith::{is_prime, log_exact};
use crate::error::{Error, Result};
use crate::group::{direct_product, FiniteGroup};

/// Left multiplication by `i` on the basis `1, i, j, k`, row-major.
pub const QUATERNION_I: [i64; 16] = [0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0];
/// Left multiplication by `j` on the basis `1, i, j, k`, row-major.
pub const QUATERNION_J: [i64; 16] = [0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0];

pub const NAMES: &[&str] = &[
    "cyclic",
    "dihedral",
    "generalized-quaternion",
    "elementary-abelian",
    "homocyclic",
    "heisenberg-mod-p",
    "modular-p-group",
    "symmetric",
    "alternating",
    "Q8",
    "A5",
];

/// Parameters of a named group. Unused fields are ignored.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NamedParams {
    pub n: Option<u64>,
    pub p: Option<u64>,
    pub s: Option<u64>,
    pub rank: Option<u64>,
}

fn need(v: Option<u64>, what: &str, name: &str) -> Result<u64> {
    v.ok_or_else(|| Error::Parameter(format!("{name} requires parameter {what:?}")))
}

fn need_prime(v: Option<u64>, name: &str) -> Result<u64> {
    let p = need(v, "p", name)?;
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{name}: p = {p} is not prime")));
    }
    Ok(p)
}

fn small(v: u64, what: &str) -> Result<usize> {
    if v > 4096 {
        return Err(Error::Parameter(format!("{what} = {v} is too large")));
    }
    Ok(v as usize)
}

/// Looks up a group by name.
pub fn named(name: &str, params: &NamedParams) -> Result<FiniteGroup> {
    match name {
        "cyclic" => cyclic(need(params.n, "n", name)?),
        "dihedral" => dihedral(need(params.n, "n", name)?),
        "generalized-quaternion" => generalized_quaternion(need(params.n, "n", name)?),
        "elementary-abelian" => elementary_abelian(
            need_prime(params.p, name)?,
            need(params.rank, "rank", name)?,
        ),
        "homocyclic" => homocyclic(
            need_prime(params.p, name)?,
            need(params.s, "s", name)?,
            need(params.rank, "rank", name)?,
        ),
        "heisenberg-mod-p" => heisenberg_mod_p(need_prime(params.p, name)?),
        "modular-p-group" => modular_p_group(need_prime(params.p, name)?, params.n.unwrap_or(3)),
        "symmetric" => symmetric(need(params.n, "n", name)?),
        "alternating" => alternating(need(params.n, "n", name)?),
        "Q8" => Ok(quaternion_q8()),
        "A5" => alternating(5),
        other => Err(Error::Parameter(format!(
            "unknown group name {other:?}; expected one of {NAMES:?}"
        ))),
    }
}

fn cycle_images(degree: usize, cycles: &[Vec<usize>]) -> Vec<usize> {
    let mut img: Vec<usize> = (0..degree).collect();
    for c in cycles {
        for (k, &x) in c.iter().enumerate() {
            img[x] = c[(k + 1) % c.len()];
        }
    }
    img
}

/// `C_n` as the group generated by an `n`-cycle.
pub fn cyclic(n: u64) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Parameter("cyclic group needs n >= 1".into()));
    }
    let n = small(n, "n")?;
    let gens = if n == 1 {
        vec![]
    } else {
        vec![cycle_images(n, &[(0..n).collect()])]
    };
    FiniteGroup::permutation(format!("C{n}"), n, &gens)
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
pub fn dihedral(n: u64) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::Parameter(format!(
            "dihedral group needs n >= 3, got {n}"
        )));
    }
    let n = small(n, "n")?;
    let rotation = cycle_images(n, &[(0..n).collect()]);
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::permutation(format!("D{}", 2 * n), n, &[rotation, reflection])
}

/// Generalized quaternion group of order `n = 2^k`, `k >= 3`, in its
/// regular permutation representation.
pub fn generalized_quaternion(n: u64) -> Result<FiniteGroup> {
    match log_exact(n, 2) {
        Some(k) if k >= 3 => {}
        _ => {
            return Err(Error::Parameter(format!(
                "generalized quaternion order must be 2^k with k >= 3, got {n}"
            )))
        }
    }
    let n = small(n, "n")?;
    let half = n / 2;
    // element x^a y^b has index a + b * half
    let mul = |(a, b): (usize, usize), (c, d): (usize, usize)| -> usize {
        match (b, d) {
            (0, _) => (a + c) % half + d * half,
            (_, 0) => (a + half - c) % half + half,
            _ => (a + half - c + half / 2) % half,
        }
    };
    let decode = |e: usize| (e % half, e / half);
    let right = |g: (usize, usize)| -> Vec<usize> { (0..n).map(|e| mul(decode(e), g)).collect() };
    FiniteGroup::permutation(format!("Q{n}"), n, &[right((1, 0)), right((0, 1))])
}

/// `(Z/p^s)^rank` as a product of disjoint `p^s`-cycles.
pub fn homocyclic(p: u64, s: u64, rank: u64) -> Result<FiniteGroup> {
    if s == 0 || rank == 0 {
        return Err(Error::Parameter(
            "homocyclic group needs s >= 1 and rank >= 1".into(),
        ));
    }
    let q = small(p.saturating_pow(s as u32), "p^s")?;
    let r = small(rank, "rank")?;
    let degree = q * r;
    let gens: Vec<Vec<usize>> = (0..r)
        .map(|i| cycle_images(degree, &[(i * q..(i + 1) * q).collect()]))
        .collect();
    let name = if s == 1 {
        format!("C{p}^{r}")
    } else {
        format!("C{q}^{r}")
    };
    FiniteGroup::permutation(name, degree, &gens)
}

pub fn elementary_abelian(p: u64, rank: u64) -> Result<FiniteGroup> {
    homocyclic(p, 1, rank)
}

/// Upper unitriangular `3 x 3` matrices mod `p`.
pub fn heisenberg_mod_p(p: u64) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!(
            "heisenberg group needs prime p, got {p}"
        )));
    }
    FiniteGroup::mod_matrix(
        format!("Heis({p})"),
        p as u32,
        3,
        &[
            vec![1, 1, 0, 0, 1, 0, 0, 0, 1],
            vec![1, 0, 0, 0, 1, 1, 0, 0, 1],
        ],
    )
}

/// `M_{p^n} = <a, b | a^{p^{n-1}} = b^p = 1, a^b = a^{1+p^{n-2}}>` as
/// `2 x 2` matrices mod `p^{n-1}`.
pub fn modular_p_group(p: u64, n: u64) -> Result<FiniteGroup> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!(
            "modular p-group needs prime p, got {p}"
        )));
    }
    let min_n = if p == 2 { 4 } else { 3 };
    if n < min_n {
        return Err(Error::Parameter(format!(
            "modular {p}-group needs n >= {min_n}, got {n}"
        )));
    }
    let modulus = p
        .checked_pow((n - 1) as u32)
        .filter(|&m| m <= u64::from(u32::MAX) / 2)
        .ok_or_else(|| Error::Parameter(format!("modular group order {p}^{n} too large")))?;
    let twist = 1 + p.pow((n - 2) as u32);
    FiniteGroup::mod_matrix(
        format!("M({p}^{n})"),
        modulus as u32,
        2,
        &[vec![1, 1, 0, 1], vec![twist as i64, 0, 0, 1]],
    )
}

pub fn symmetric(n: u64) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Parameter("symmetric group needs n >= 1".into()));
    }
    let n = small(n, "n")?;
    let gens = match n {
        1 => vec![],
        2 => vec![vec![1, 0]],
        _ => vec![
            cycle_images(n, &[vec![0, 1]]),
            cycle_images(n, &[(0..n).collect()]),
        ],
    };
    FiniteGroup::permutation(format!("S{n}"), n, &gens)
}

/// Alternating group; for odd `n >= 5` generated by `(1 2 ... n)` and `(1 2 3)`.
pub fn alternating(n: u64) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Parameter("alternating group needs n >= 1".into()));
    }
    let n = small(n, "n")?;
    let three = cycle_images(n.max(3), &[vec![0, 1, 2]]);
    let gens = match n {
        1 | 2 => vec![],
        3 => vec![three],
        _ if n % 2 == 1 => vec![cycle_images(n, &[(0..n).collect()]), three],
        _ => vec![cycle_images(n, &[(1..n).collect()]), three],
    };
    FiniteGroup::permutation(format!("A{n}"), n, &gens)
}

/// `Q8` as the integer quaternion representation reduced mod 4.
pub fn quaternion_q8() -> FiniteGroup {
    FiniteGroup::mod_matrix("Q8", 4, 4, &[QUATERNION_I.to_vec(), QUATERNION_J.to_vec()])
        .expect("quaternion matrices are invertible")
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Every built-in group of order at most `max_order`, in a fixed order.
pub fn corpus_up_to(max_order: u64) -> Result<Vec<FiniteGroup>> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.push(cyclic(n)?);
    }
    for n in 3..=max_order / 2 {
        out.push(dihedral(n)?);
    }
    let mut q = 8;
    while q <= max_order {
        out.push(generalized_quaternion(q)?);
        q *= 2;
    }
    if max_order >= 8 {
        out.push(quaternion_q8());
    }
    let primes: Vec<u64> = (2..=max_order).filter(|&p| is_prime(p)).collect();
    for &p in &primes {
        for s in 1..=8u64 {
            for r in 2..=8u64 {
                let Some(order) = p.checked_pow((s * r) as u32) else {
                    break;
                };
                if order > max_order {
                    break;
                }
                out.push(homocyclic(p, s, r)?);
            }
        }
        if p * p * p <= max_order {
            out.push(heisenberg_mod_p(p)?);
        }
        let min_n = if p == 2 { 4 } else { 3 };
        for n in min_n..=8u64 {
            if p.pow(n as u32) > max_order {
                break;
            }
            out.push(modular_p_group(p, n)?);
        }
    }
    for n in 3..=7 {
        if factorial(n) <= max_order {
            out.push(symmetric(n)?);
        }
        if n >= 4 && factorial(n) / 2 <= max_order {
            out.push(alternating(n)?);
        }
    }
    let bases = [
        dihedral(3)?,
        dihedral(4)?,
        quaternion_q8(),
        alternating(4)?,
        symmetric(4)?,
        alternating(5)?,
        heisenberg_mod_p(3)?,
    ];
    for b in &bases {
        let nb = b.order()?;
        for m in 2..=max_order / nb {
            out.push(direct_product(b, &cyclic(m)?)?);
        }
    }
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i..] {
            if a.order()? * b.order()? <= max_order {
                out.push(direct_product(a, b)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{order_spectrum, psi};
    use num_bigint::BigUint;

    #[test]
    fn named_examples() {
        let c60 = named(
            "cyclic",
            &NamedParams {
                n: Some(60),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(psi(&c60).unwrap(), BigUint::from(1617u32));
        let h3 = named(
            "heisenberg-mod-p",
            &NamedParams {
                p: Some(3),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(h3.order().unwrap(), 27);
        assert_eq!(crate::stats::exponent(&h3).unwrap(), 3);
        assert!(named("nope", &NamedParams::default()).is_err());
        assert!(named("cyclic", &NamedParams::default()).is_err());
        assert!(named(
            "heisenberg-mod-p",
            &NamedParams {
                p: Some(4),
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn family_orders() {
        assert_eq!(dihedral(5).unwrap().order().unwrap(), 10);
        assert_eq!(generalized_quaternion(16).unwrap().order().unwrap(), 16);
        assert_eq!(homocyclic(2, 3, 2).unwrap().order().unwrap(), 64);
        assert_eq!(modular_p_group(2, 4).unwrap().order().unwrap(), 16);
        assert_eq!(modular_p_group(3, 3).unwrap().order().unwrap(), 27);
        assert_eq!(symmetric(4).unwrap().order().unwrap(), 24);
        assert_eq!(alternating(4).unwrap().order().unwrap(), 12);
        assert_eq!(alternating(6).unwrap().order().unwrap(), 360);
        assert_eq!(heisenberg_mod_p(2).unwrap().order().unwrap(), 8);
    }

    #[test]
    fn quaternion_realizations_agree() {
        let a = order_spectrum(&generalized_quaternion(8).unwrap()).unwrap();
        let b = order_spectrum(&quaternion_q8()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn modular_group_exponent() {
        // M_16 has exponent 8, M_27 has exponent 9
        assert_eq!(
            crate::stats::exponent(&modular_p_group(2, 4).unwrap()).unwrap(),
            8
        );
        assert_eq!(
            crate::stats::exponent(&modular_p_group(3, 3).unwrap()).unwrap(),
            9
        );
    }

    #[test]
    fn corpus_orders_bounded() {
        let groups = corpus_up_to(60).unwrap();
        assert!(groups.iter().all(|g| g.order().unwrap() <= 60));
        assert!(groups.iter().any(|g| g.name() == "A5"));
    }
}
