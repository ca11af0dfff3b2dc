//! Exact integer and rational arithmetic.
//!
//! Group orders and element orders are bounded by the enumeration cap and
//! fit in `u64`. Sums of element orders and every derived statistic are
//! carried as unbounded integers or rationals, and comparisons between a
//! rational and a rational power are decided by integer cross-multiplication.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Unbounded nonnegative integer.
pub type UInt = BigUint;

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Domain("rational with zero denominator".into()));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn from_uint(n: &UInt) -> Self {
        Self::from_integer(BigInt::from(n.clone()))
    }

    /// `numer / denom` for unsigned operands; panics on a zero denominator.
    pub fn ratio(numer: &UInt, denom: &UInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Self(BigRational::new(
            BigInt::from(numer.clone()),
            BigInt::from(denom.clone()),
        ))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(Pow::pow(&self.0, exp))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Rendering used in every report: always `numerator/denominator`.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_fraction_string())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `a`, `a/b`, or `-a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

/// Prime factorization by trial division; primes strictly increasing.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factorize 0".into()));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut q = 2u64;
    while q.saturating_mul(q) <= m {
        if m.is_multiple_of(q) {
            let mut e = 0;
            while m.is_multiple_of(q) {
                m /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

/// Number of positive divisors of `n`.
pub fn divisor_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("divisor count of 0 is undefined".into()));
    }
    Ok(factorize(n)?
        .iter()
        .map(|&(_, e)| u64::from(e) + 1)
        .product())
}

/// All positive divisors of `n`, increasing.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let mut ds = vec![1u64];
    for (q, e) in factorize(n)? {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= q;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    Ok(ds)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?
        .iter()
        .fold(n, |acc, &(q, _)| acc / q * (q - 1)))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f == [(n, 1)]).unwrap_or(false)
}

/// If `n = p^k` for the given prime `p`, returns `k`.
pub fn log_exact(n: u64, p: u64) -> Option<u32> {
    if n == 0 || p < 2 {
        return None;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some(k)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn big_pow(base: u64, exp: u32) -> UInt {
    Pow::pow(UInt::from(base), exp)
}

/// Orders `x` against `y^c` exactly, for positive rationals `x`, `y`, `c`.
///
/// With `c = a/b` in lowest terms the comparison is `x^b` versus `y^a`,
/// decided by cross-multiplying numerators and denominators.
pub fn cmp_rational_power(
    x: &ExactRational,
    y: &ExactRational,
    c: &ExactRational,
) -> Result<Ordering> {
    if !x.is_positive() || !y.is_positive() || !c.is_positive() {
        return Err(Error::Domain(format!(
            "cmp_rational_power requires positive arguments, got x={x}, y={y}, c={c}"
        )));
    }
    let a = c
        .numer()
        .to_u32()
        .ok_or_else(|| Error::Domain(format!("exponent numerator too large in c={c}")))?;
    let b = c
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Domain(format!("exponent denominator too large in c={c}")))?;
    // x^b = xn^b / xd^b, y^a = yn^a / yd^a; all factors positive.
    let lhs = Pow::pow(x.numer(), b) * Pow::pow(y.denom(), a);
    let rhs = Pow::pow(y.numer(), a) * Pow::pow(x.denom(), b);
    Ok(lhs.cmp(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    fn divisor_oracle(n: u64) -> u64 {
        (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
    }

    #[test]
    fn divisor_count_examples() {
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(divisor_count(8).unwrap(), 4);
        assert_eq!(divisor_oracle(60), 12);
        assert_eq!(divisor_count(60).unwrap(), 12);
        assert!(matches!(divisor_count(0), Err(Error::Domain(_))));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(32768).unwrap(), vec![(2, 15)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn cmp_power_examples() {
        let half = q(1, 2);
        assert_eq!(
            cmp_rational_power(&q(4, 1), &q(16, 1), &half).unwrap(),
            Ordering::Equal
        );
        let a5 = q(211, 60);
        assert_eq!(
            cmp_rational_power(&a5, &a5, &q(1, 1)).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            cmp_rational_power(&q(50, 1), &q(12500, 1), &half).unwrap(),
            Ordering::Less
        );
        assert!(cmp_rational_power(&q(0, 1), &q(1, 1), &half).is_err());
        assert!(cmp_rational_power(&q(1, 1), &q(-1, 1), &half).is_err());
        assert!(cmp_rational_power(&q(1, 1), &q(1, 1), &q(0, 1)).is_err());
    }

    #[test]
    fn parse_and_render() {
        let r: ExactRational = "6/4".parse().unwrap();
        assert_eq!(r.to_fraction_string(), "3/2");
        let one: ExactRational = "1".parse().unwrap();
        assert_eq!(one.to_string(), "1/1");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(60).unwrap(), 16);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(log_exact(32, 2), Some(5));
        assert_eq!(log_exact(24, 2), None);
        assert!(is_prime(97) && !is_prime(1) && !is_prime(91));
    }

    proptest! {
        #[test]
        fn cmp_power_matches_brute_force(
            xn in 1i64..60, xd in 1i64..60, yn in 1i64..60, yd in 1i64..60,
            a in 1u32..5, b in 1u32..5,
        ) {
            let x = q(xn, xd);
            let y = q(yn, yd);
            let c = q(a as i64, b as i64);
            // brute force on the unreduced exponent pair
            let (a, b) = (c.numer().to_u32().unwrap(), c.denom().to_u32().unwrap());
            let xb = x.pow(b);
            let ya = y.pow(a);
            prop_assert_eq!(cmp_rational_power(&x, &y, &c).unwrap(), xb.cmp(&ya));
        }

        #[test]
        fn divisor_count_multiplicative(m in 1u64..400, n in 1u64..400) {
            prop_assume!(m.gcd(&n) == 1);
            prop_assert_eq!(
                divisor_count(m * n).unwrap(),
                divisor_count(m).unwrap() * divisor_count(n).unwrap()
            );
            prop_assert_eq!(divisor_count(m).unwrap(), divisor_oracle(m));
        }

        #[test]
        fn rational_round_trip(xn in -500i64..500, xd in 1i64..500, yn in -500i64..500, yd in 1i64..500) {
            let x = q(xn, xd);
            let y = q(yn, yd);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            let again = ExactRational::new(x.numer().clone(), x.denom().clone()).unwrap();
            prop_assert_eq!(again, x);
        }

        #[test]
        fn factorization_reconstructs(n in 1u64..100_000) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }
}
