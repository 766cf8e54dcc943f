//! Shared generators for the integration tests.
#![allow(dead_code)]

use mvmodal::kripke::{KripkeFrame, KripkeModel};
use mvmodal::{Algebra, Exp, Formula, Rational, Value};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f(s: &str) -> Formula {
    mvmodal::syntax::parse(s).unwrap()
}

pub fn fs(items: &[&str]) -> Vec<Formula> {
    items.iter().map(|s| f(s)).collect()
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A rational in `[0, 1]` with a small denominator.
pub fn unit_rational(r: &mut impl Rng) -> Rational {
    let d = r.gen_range(1..=12);
    rational(r.gen_range(0..=d), d)
}

pub fn random_value(r: &mut impl Rng, alg: &Algebra) -> Value {
    match alg {
        Algebra::ExpChain => {
            if r.gen_ratio(1, 10) {
                Value::Exp(Exp::Zero)
            } else {
                let d = r.gen_range(1..=4);
                Value::Exp(Exp::Pow(rational(r.gen_range(0..=12), d)))
            }
        }
        Algebra::MvN(n) => {
            let k = i64::from(*n) - 1;
            Value::Rat(rational(r.gen_range(0..=k), k))
        }
        Algebra::FiniteTable(t) => Value::Fin(r.gen_range(0..t.size())),
        _ => Value::Rat(unit_rational(r)),
    }
}

/// Which connectives [`random_formula`] may use.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Full,
    /// `0`, variables, `*`, `->`, `[]` only.
    Fragment,
    Propositional,
}

pub fn random_formula(r: &mut impl Rng, vars: &[&str], depth: usize, shape: Shape) -> Formula {
    if depth == 0 || r.gen_ratio(1, 4) {
        return match (shape, r.gen_range(0..8)) {
            (_, 0) => Formula::Const0,
            (Shape::Full | Shape::Propositional, 1) => Formula::Const1,
            _ => Formula::var(vars[r.gen_range(0..vars.len())]),
        };
    }
    let sub = |r: &mut _| random_formula(r, vars, depth - 1, shape);
    let choices: &[u8] = match shape {
        Shape::Full => &[0, 1, 2, 3, 4, 5],
        Shape::Fragment => &[2, 3, 4],
        Shape::Propositional => &[0, 1, 2, 3],
    };
    match choices[r.gen_range(0..choices.len())] {
        0 => Formula::and(sub(r), sub(r)),
        1 => Formula::or(sub(r), sub(r)),
        2 => Formula::times(sub(r), sub(r)),
        3 => Formula::implies(sub(r), sub(r)),
        4 => Formula::boxed(sub(r)),
        _ => Formula::diamond(sub(r)),
    }
}

/// Random edges on `n` worlds named `w0 ..`.
pub fn random_frame(r: &mut impl Rng, n: usize) -> KripkeFrame {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|_| r.gen_ratio(1, 3))
        .collect();
    KripkeFrame::numbered("w", 0, n, &edges).unwrap()
}

/// Random edges without cycles: only from lower to higher index.
pub fn random_dag(r: &mut impl Rng, n: usize) -> KripkeFrame {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|_| r.gen_ratio(1, 2))
        .collect();
    KripkeFrame::numbered("w", 0, n, &edges).unwrap()
}

/// Transitive closure of a random frame.
pub fn random_transitive_frame(r: &mut impl Rng, n: usize) -> KripkeFrame {
    let fr = random_frame(r, n);
    let mut reach = vec![vec![false; n]; n];
    for (a, b) in fr.edges() {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| reach[a][b])
        .collect();
    KripkeFrame::numbered("w", 0, n, &edges).unwrap()
}

pub fn random_model(r: &mut impl Rng, fr: KripkeFrame, alg: &Algebra, vars: &[&str]) -> KripkeModel {
    KripkeModel::from_fn(fr, alg.clone(), vars, |_, _| random_value(r, alg)).unwrap()
}

pub fn arb_unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=24).prop_flat_map(|d| (0..=d).prop_map(move |n| rational(n, d)))
}

pub fn arb_exp() -> impl Strategy<Value = Value> {
    prop_oneof![
        1 => Just(Value::Exp(Exp::Zero)),
        9 => (0i64..=40, 1i64..=6).prop_map(|(n, d)| Value::Exp(Exp::Pow(rational(n, d)))),
    ]
}

pub fn arb_value(alg: Algebra) -> BoxedStrategy<Value> {
    match alg {
        Algebra::ExpChain => arb_exp().boxed(),
        _ => arb_unit_rational().prop_map(Value::Rat).boxed(),
    }
}

pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Const0),
        Just(Formula::Const1),
        prop::sample::select(vec!["p", "q", "r", "s1", "long_name"]).prop_map(Formula::var),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::times(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::diamond),
        ]
    })
}

/// Names of the FL_ew laws that fail on the triple `(a, b, c)`.
pub fn law_violations(alg: &Algebra, a: &Value, b: &Value, c: &Value) -> Vec<&'static str> {
    use mvmodal::Connective::{Implies, Join, Meet, Times};
    let op = |k, x: &Value, y: &Value| alg.op(k, x, y).unwrap();
    let leq = |x: &Value, y: &Value| alg.leq(x, y).unwrap();
    let (zero, one) = (alg.zero(), alg.one());
    let mut out = Vec::new();
    let mut law = |name, ok: bool| {
        if !ok {
            out.push(name);
        }
    };
    law("residuation", leq(&op(Times, a, b), c) == leq(a, &op(Implies, b, c)));
    law("times commutative", op(Times, a, b) == op(Times, b, a));
    law("times associative", op(Times, &op(Times, a, b), c) == op(Times, a, &op(Times, b, c)));
    law("times unit", op(Times, a, &one) == *a);
    law("meet commutative", op(Meet, a, b) == op(Meet, b, a));
    law("join commutative", op(Join, a, b) == op(Join, b, a));
    law("meet associative", op(Meet, &op(Meet, a, b), c) == op(Meet, a, &op(Meet, b, c)));
    law("join associative", op(Join, &op(Join, a, b), c) == op(Join, a, &op(Join, b, c)));
    law("absorption", op(Meet, a, &op(Join, a, b)) == *a && op(Join, a, &op(Meet, a, b)) == *a);
    law("idempotence", op(Meet, a, a) == *a && op(Join, a, a) == *a);
    law("order", leq(a, b) == (op(Meet, a, b) == *a));
    law("bounds", leq(&zero, a) && leq(a, &one));
    law("integrality", leq(&op(Times, a, b), a));
    out
}

/// Reference evaluator over MV_3 in halves (`0, 1, 2`), written directly
/// from the truth tables and the successor relation.
pub fn naive_mv3(m: &KripkeModel, w: usize, f: &Formula) -> u8 {
    let half = |v: &Value| -> u8 {
        let r = v.as_rational().unwrap() * Rational::from_integer(2.into());
        u8::try_from(r.to_integer()).unwrap()
    };
    match f {
        Formula::Const0 => 0,
        Formula::Const1 => 2,
        Formula::Var(p) => half(m.value(w, p).unwrap()),
        Formula::And(l, r) => naive_mv3(m, w, l).min(naive_mv3(m, w, r)),
        Formula::Or(l, r) => naive_mv3(m, w, l).max(naive_mv3(m, w, r)),
        Formula::Times(l, r) => (naive_mv3(m, w, l) + naive_mv3(m, w, r)).saturating_sub(2),
        Formula::Implies(l, r) => (2 + naive_mv3(m, w, r)).saturating_sub(naive_mv3(m, w, l)).min(2),
        Formula::Box(g) => (0..m.frame().len())
            .filter(|&u| m.frame().has_edge(w, u))
            .map(|u| naive_mv3(m, u, g))
            .fold(2, u8::min),
        Formula::Diamond(g) => (0..m.frame().len())
            .filter(|&u| m.frame().has_edge(w, u))
            .map(|u| naive_mv3(m, u, g))
            .fold(0, u8::max),
    }
}

pub fn halves(v: u8) -> Value {
    Value::rat(i64::from(v), 2)
}

/// Twenty modal consequence pairs over `p`, `q`.
pub fn modal_battery() -> Vec<(Vec<Formula>, Formula)> {
    let raw: [(&[&str], &str); 20] = [
        (&[], "[]p -> p"),
        (&["p"], "[]p"),
        (&[], "p -> []p"),
        (&["p"], "<>p"),
        (&[], "[](p -> q) -> ([]p -> []q)"),
        (&[], "<>p -> []p"),
        (&["[]p -> p"], "p"),
        (&["p -> q", "p"], "q"),
        (&[], "p \\/ ~p"),
        (&[], "[]p * []q -> [](p * q)"),
        (&[], "[](p * q) -> []p * []q"),
        (&["p"], "[][]p"),
        (&["~[]0"], "<>1"),
        (&[], "[]1"),
        (&[], "<>0 -> p"),
        (&["p <-> []p"], "p"),
        (&["[]p"], "p"),
        (&[], "~~p -> p"),
        (&["p /\\ q"], "[]p \\/ q"),
        (&[], "(p -> q) \\/ (q -> p)"),
    ];
    raw.iter().map(|(g, phi)| (fs(g), f(phi))).collect()
}

/// Global consequence on `frame` by trying every valuation into `alg`'s
/// elements; returns whether it holds.
pub fn exhaustive_on_frame(frame: &KripkeFrame, alg: &Algebra, gamma: &[Formula], phi: &Formula) -> bool {
    let els = alg.elements().unwrap();
    let vars: Vec<String> = mvmodal::syntax::vars_of(gamma.iter().chain(std::iter::once(phi)))
        .into_iter()
        .collect();
    let cells = vars.len() * frame.len();
    let total = els.len().pow(cells as u32);
    for code in 0..total {
        let mut c = code;
        let mut rows = vec![Vec::with_capacity(vars.len()); frame.len()];
        for row in rows.iter_mut() {
            for _ in &vars {
                row.push(els[c % els.len()].clone());
                c /= els.len();
            }
        }
        let m = KripkeModel::new(frame.clone(), alg.clone(), vars.clone(), rows).unwrap();
        if !m.consequence_witness(gamma, phi).unwrap().holds {
            return false;
        }
    }
    true
}

/// Re-checks a failing verdict's witness model by direct evaluation.
pub fn witness_reverifies(v: &mvmodal::kripke::Verdict, gamma: &[Formula], phi: &Formula) -> bool {
    let Some(w) = &v.witness else { return false };
    let Some(m) = &w.model else { return false };
    let Ok(at) = m.frame().index_of(&w.world) else { return false };
    let alg = m.algebra();
    m.globally_satisfies(gamma).unwrap().holds
        && m.evaluate(at, phi).unwrap() == w.value
        && !alg.is_one(&w.value)
}
