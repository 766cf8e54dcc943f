mod common;

use common::{arb_value, law_violations};
use mvmodal::algebra::{op_apply, power};
use mvmodal::{Algebra, Connective, Exp, Rational, Value};
use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn finite_mv_chains_exhaustively() {
    for n in 2..=5 {
        let alg = Algebra::mv_n(n).unwrap();
        let els = alg.elements().unwrap();
        for a in &els {
            for b in &els {
                for c in &els {
                    let v = law_violations(&alg, a, b, c);
                    assert!(v.is_empty(), "mv-{n} at ({a}, {b}, {c}): {v:?}");
                }
            }
        }
    }
}

#[test]
fn finite_mv_chains_are_contractive() {
    for n in 2..=8u32 {
        let alg = Algebra::mv_n(n).unwrap();
        for a in alg.elements().unwrap() {
            let k = u64::from(n);
            assert_eq!(power(&alg, &a, k).unwrap(), power(&alg, &a, k - 1).unwrap(), "mv-{n}, {a}");
        }
    }
}

fn algebras() -> impl Strategy<Value = Algebra> {
    prop::sample::select(vec![
        Algebra::StdMv,
        Algebra::StdGodel,
        Algebra::StdProduct,
        Algebra::ExpChain,
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]

    #[test]
    fn infinite_algebra_laws(
        (alg, a, b, c) in algebras().prop_flat_map(|alg| {
            (Just(alg.clone()), arb_value(alg.clone()), arb_value(alg.clone()), arb_value(alg))
        })
    ) {
        let v = law_violations(&alg, &a, &b, &c);
        prop_assert!(v.is_empty(), "{} at ({}, {}, {}): {:?}", alg.name(), a, b, c, v);
    }
}

proptest! {
    #[test]
    fn exp_chain_is_never_contractive(n in 1i64..=20, d in 1i64..=5, k in 0u64..=40) {
        let alg = Algebra::ExpChain;
        let t = Value::Exp(Exp::Pow(Rational::new(n.into(), d.into())));
        prop_assert!(alg.lt(&power(&alg, &t, k + 1).unwrap(), &power(&alg, &t, k).unwrap()).unwrap());
    }

    #[test]
    fn luk_powers_vanish(a in common::arb_unit_rational()) {
        prop_assume!(a < Rational::one());
        let alg = Algebra::StdMv;
        let gap = Rational::one() - &a;
        let start = (Rational::one() / gap).ceil().to_integer();
        let start: u64 = start.try_into().unwrap();
        for n in start..start + 5 {
            prop_assert_eq!(power(&alg, &Value::Rat(a.clone()), n).unwrap(), alg.zero());
        }
    }

    #[test]
    fn closed_form_powers_match_iteration(
        (alg, a) in algebras().prop_flat_map(|alg| (Just(alg.clone()), arb_value(alg)))
    ) {
        let mut acc = alg.one();
        for n in 0..=50u64 {
            prop_assert_eq!(&alg.power(&a, &BigUint::from(n)).unwrap(), &acc, "{} {}^{}", alg.name(), &a, n);
            acc = op_apply(&alg, Connective::Times, &acc, &a).unwrap();
        }
    }
}
