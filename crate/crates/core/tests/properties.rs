use num_bigint::BigInt;
use proptest::prelude::*;

use avgorder::arith::{divisor_count, ExactRational, UInt};
use avgorder::corpus::{self, corpus_up_to};
use avgorder::group::{
    center, conjugacy_class_count, conjugacy_class_sizes, direct_product, FiniteGroup,
};
use avgorder::lattice::hermite_normal_form;
use avgorder::scan::{is_nilpotent, kd_ratio};
use avgorder::stats::{order_spectrum, psi, psi_cyclic, spectrum_is_consistent};

fn corpus_120() -> &'static [FiniteGroup] {
    static CORPUS: std::sync::OnceLock<Vec<FiniteGroup>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(|| corpus_up_to(120).unwrap())
}

fn any_group() -> impl Strategy<Value = &'static FiniteGroup> {
    (0..corpus_120().len()).prop_map(|i| &corpus_120()[i])
}

fn coprime_pair() -> impl Strategy<Value = (&'static FiniteGroup, &'static FiniteGroup)> {
    let gs = corpus_120();
    let pairs: Vec<(usize, usize)> = (0..gs.len())
        .flat_map(|i| (0..gs.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (m, n) = (gs[i].order().unwrap(), gs[j].order().unwrap());
            num_integer::gcd(m, n) == 1 && m * n <= 600
        })
        .collect();
    prop::sample::select(pairs).prop_map(|(i, j)| (&corpus_120()[i], &corpus_120()[j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lagrange_and_spectrum_totals(g in any_group()) {
        let n = g.order().unwrap();
        let sp = order_spectrum(g).unwrap();
        prop_assert!(spectrum_is_consistent(&sp, n));
        prop_assert_eq!(sp.total(), n);
        for o in sp.counts().keys() {
            prop_assert_eq!(n % o, 0);
        }
    }

    #[test]
    fn class_equation(g in any_group()) {
        let n = g.order().unwrap();
        let sizes = conjugacy_class_sizes(g).unwrap();
        prop_assert_eq!(sizes.iter().sum::<u64>(), n);
        prop_assert!(sizes.iter().all(|s| n % s == 0));
        let central = sizes.iter().filter(|&&s| s == 1).count() as u64;
        prop_assert_eq!(central, center(g).unwrap().size());
    }

    #[test]
    fn average_below_exponent_below_order(g in any_group()) {
        let n = g.order().unwrap();
        let sp = order_spectrum(g).unwrap();
        let o = sp.avg_order();
        prop_assert!(o <= ExactRational::from_integer(sp.exponent()));
        prop_assert!(sp.exponent() <= n);
        prop_assert!(sp.max_order() <= sp.exponent());
        prop_assert!(sp.psi() >= UInt::from(2 * n - 1));
        // o(G) = mo(G) forces every element to have the same order
        prop_assert_eq!(o == ExactRational::from_integer(sp.max_order()), n == 1);
    }

    #[test]
    fn psi_bounded_by_cyclic(g in any_group()) {
        let n = g.order().unwrap();
        prop_assert!(psi(g).unwrap() <= psi_cyclic(n).unwrap());
    }

    #[test]
    fn psi_cyclic_multiplicative(m in 1u64..400, n in 1u64..400) {
        prop_assume!(num_integer::gcd(m, n) == 1);
        prop_assert_eq!(psi_cyclic(m * n).unwrap(), psi_cyclic(m).unwrap() * psi_cyclic(n).unwrap());
    }

    #[test]
    fn psi_multiplicative_on_coprime_products((a, b) in coprime_pair()) {
        let ab = direct_product(a, b).unwrap();
        prop_assert_eq!(psi(&ab).unwrap(), psi(a).unwrap() * psi(b).unwrap());
        prop_assert_eq!(kd_ratio(&ab).unwrap(), &kd_ratio(a).unwrap() * &kd_ratio(b).unwrap());
    }

    #[test]
    fn p_groups_have_many_classes(g in any_group()) {
        let n = g.order().unwrap();
        let primes = avgorder::arith::factorize(n).unwrap();
        prop_assume!(primes.len() == 1);
        prop_assert!(is_nilpotent(g).unwrap());
        prop_assert!(conjugacy_class_count(g).unwrap() >= center(g).unwrap().size());
        prop_assert!(divisor_count(n).unwrap() >= 2);
    }

    #[test]
    fn hnf_ignores_row_order_and_row_operations(
        rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 1..5),
        perm_seed in any::<u64>(),
        mult in -3i64..4,
    ) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let h = hermite_normal_form(&big, 3);

        let mut shuffled = big.clone();
        let len = shuffled.len();
        shuffled.rotate_left((perm_seed % len as u64) as usize);
        if len > 1 {
            let (i, j) = (0, len - 1);
            let add: Vec<BigInt> = shuffled[j].iter().map(|x| x * mult).collect();
            for (x, y) in shuffled[i].iter_mut().zip(add) {
                *x += y;
            }
        }
        shuffled.push(big[0].iter().map(|x| x * 2).collect());
        prop_assert_eq!(hermite_normal_form(&shuffled, 3), h);
    }
}

#[test]
fn nilpotency_of_named_groups() {
    assert!(is_nilpotent(&corpus::quaternion_q8()).unwrap());
    assert!(is_nilpotent(&corpus::dihedral(8).unwrap()).unwrap());
    assert!(!is_nilpotent(&corpus::symmetric(3).unwrap()).unwrap());
    assert!(!is_nilpotent(&corpus::alternating(4).unwrap()).unwrap());
}
