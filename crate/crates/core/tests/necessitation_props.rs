mod common;

use common::*;
use mvmodal::necessitation::*;
use mvmodal::pcp::ChainAlgebra;
use mvmodal::syntax::box_prefix;
use mvmodal::{Algebra, Formula};
use rand::Rng;

#[test]
fn separation_for_small_chains() {
    for alg in [ChainAlgebra::StdMv, ChainAlgebra::ExpChain] {
        for n in 0..=5 {
            let rep = verify_separation(n, alg).unwrap();
            assert!(rep.passed, "{alg:?} N = {n}");
        }
    }
}

#[test]
fn one_more_box_layer_breaks_the_premises() {
    for alg in [ChainAlgebra::StdMv, ChainAlgebra::ExpChain] {
        for n in 0..=5u64 {
            let m = build_nec_model(n, alg).unwrap();
            let outer: Vec<Formula> = sigma_premises()
                .into_iter()
                .map(|s| Formula::box_n(s, n as usize + 1))
                .collect();
            assert!(outer.iter().any(|f| !m.algebra().is_one(&m.evaluate(0, f).unwrap())));
            let inner = box_prefix(&sigma_premises(), n as usize);
            assert!(inner.iter().all(|f| m.algebra().is_one(&m.evaluate(0, f).unwrap())));
        }
    }
}

#[test]
fn cycles_force_the_conclusion() {
    let mut r = rng(51);
    let sigma = sigma_premises();
    let mut perturbed = 0;
    for i in 0..100 {
        let alg = if i % 2 == 0 { Algebra::StdMv } else { Algebra::ExpChain };
        let k = r.gen_range(1..=5);
        let alpha = random_value(&mut r, &alg);
        let m = build_global_sigma_model(k, &alg, alpha).unwrap();
        assert!(m.globally_satisfies(&sigma).unwrap().holds);
        let all_one = |m: &mvmodal::kripke::KripkeModel| {
            m.frame().worlds().all(|w| m.algebra().is_one(&m.evaluate(w, &sigma_conclusion()).unwrap()))
        };
        assert!(all_one(&m));
        // random x values; keep the ones that still satisfy the premises
        let mut v = m.clone();
        for w in v.frame().worlds() {
            v.set_value(w, "x", random_value(&mut r, &alg)).unwrap();
        }
        if v.globally_satisfies(&sigma).unwrap().holds {
            perturbed += 1;
            assert!(all_one(&v));
        }
    }
    assert!(perturbed > 0);
}
