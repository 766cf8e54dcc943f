//! Acceptance criteria, run sequentially so the time bounds are meaningful.
//! Prints one line per criterion and fails the run if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use mvmodal::algebra::FiniteTables;
use mvmodal::bridges::*;
use mvmodal::decision::*;
use mvmodal::kripke::KripkeModel;
use mvmodal::necessitation::*;
use mvmodal::pcp::*;
use mvmodal::{Algebra, Formula, Value};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn algebra_laws() -> Outcome {
    let mut triples = 0usize;
    for n in 2..=5 {
        let alg = Algebra::mv_n(n).unwrap();
        let els = alg.elements().unwrap();
        for a in &els {
            for b in &els {
                for c in &els {
                    let v = law_violations(&alg, a, b, c);
                    ensure(v.is_empty(), || format!("mv-{n} ({a}, {b}, {c}): {v:?}"))?;
                    triples += 1;
                }
            }
        }
    }
    let table = Algebra::finite(FiniteTables::mv_n(4)).unwrap();
    let els = table.elements().unwrap();
    for a in &els {
        for b in &els {
            for c in &els {
                let v = law_violations(&table, a, b, c);
                ensure(v.is_empty(), || format!("table ({a}, {b}, {c}): {v:?}"))?;
                triples += 1;
            }
        }
    }
    let mut r = rng(1);
    for alg in [Algebra::StdMv, Algebra::StdGodel, Algebra::StdProduct, Algebra::ExpChain] {
        for _ in 0..10_000 {
            let (a, b, c) = (random_value(&mut r, &alg), random_value(&mut r, &alg), random_value(&mut r, &alg));
            let v = law_violations(&alg, &a, &b, &c);
            ensure(v.is_empty(), || format!("{} ({a}, {b}, {c}): {v:?}", alg.name()))?;
            triples += 1;
        }
    }
    Ok(format!("{triples} triples, 0 violations"))
}

fn evaluator_oracle() -> Outcome {
    let alg = Algebra::mv_n(3).unwrap();
    let mut r = rng(2);
    let mut cells = 0;
    for i in 0..200 {
        let n = r.gen_range(1..=4);
        let fr = random_frame(&mut r, n);
        let m = random_model(&mut r, fr, &alg, &["p", "q", "r"]);
        let f = random_formula(&mut r, &["p", "q", "r"], 4, Shape::Full);
        let values = m.evaluate_all(&f).unwrap();
        for w in m.frame().worlds() {
            let expected = halves(naive_mv3(&m, w, &f));
            ensure(values[w] == expected, || format!("model {i}, {f} at {w}: {} vs {expected}", values[w]))?;
            cells += 1;
        }
    }
    Ok(format!("200 models, {cells} world values agree"))
}

fn pcp_end_to_end() -> Outcome {
    let p = sample_instance();
    let enc = encode(&p).unwrap();
    ensure(enc.premises.len() == 5, || format!("{} premises", enc.premises.len()))?;
    let sol = [1, 2];
    for alg in [ChainAlgebra::StdMv, ChainAlgebra::ExpChain] {
        let m = build_countermodel(&p, &sol, alg).unwrap();
        for w in m.frame().worlds() {
            for g in &enc.premises {
                let v = m.evaluate(w, g).unwrap();
                ensure(m.algebra().is_one(&v), || format!("{alg:?}: {g} = {v} at {w}"))?;
            }
        }
        let top = m.frame().index_of("v2").unwrap();
        let phi = m.evaluate(top, &enc.conclusion).unwrap();
        let cell = |w: &str, var: &str| m.value(m.frame().index_of(w).unwrap(), var).unwrap().clone();
        match alg {
            ChainAlgebra::StdMv => {
                ensure(phi == Value::rat(7, 8), || format!("StdMv φ_P = {phi}"))?;
                let expected = [
                    ("v1", "x", Value::rat(7, 8)),
                    ("v1", "y", Value::rat(5, 8)),
                    ("v2", "x", Value::rat(1, 8)),
                    ("v2", "y", Value::rat(1, 8)),
                    ("v1", "z", Value::rat(7, 8)),
                    ("v2", "z", Value::rat(7, 8)),
                ];
                for (w, var, v) in expected {
                    ensure(cell(w, var) == v, || format!("StdMv e({w},{var}) = {}", cell(w, var)))?;
                }
            }
            ChainAlgebra::ExpChain => {
                ensure(phi == Value::pow(1, 1), || format!("ExpChain φ_P = {phi}"))?;
                ensure(cell("v2", "x") == Value::pow(7, 1), || "ExpChain e(v2,x)".into())?;
                ensure(cell("v1", "y") == Value::pow(3, 1), || "ExpChain e(v1,y)".into())?;
            }
        }
        let found = extract_solution(&p, &m, top).unwrap();
        ensure(found == sol, || format!("{alg:?}: extracted {found:?}"))?;
    }
    Ok("5 premises at 1 everywhere; φ_P = 7/8 and a^1; extracted [1, 2] twice".into())
}

fn non_solution_contrapositive() -> Outcome {
    let p = sample_instance();
    let phi = phi_p();
    let mut checked = 0;
    for len in 1..=6 {
        for code in 0..p.len().pow(len as u32) {
            let seq = sequence_from_code(code, p.len(), len);
            if verify_solution(&p, &seq).unwrap() {
                continue;
            }
            for alg in [ChainAlgebra::StdMv, ChainAlgebra::ExpChain] {
                let m = build_chain_model(&p, &seq, alg).unwrap();
                let v = m.evaluate(m.frame().len() - 1, &phi).unwrap();
                ensure(m.algebra().is_one(&v), || format!("{seq:?} {alg:?}: φ_P = {v}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} non-solution chain models give φ_P = 1"))
}

fn frame_equivalence() -> Outcome {
    let alg = Algebra::mv_n(3).unwrap();
    let battery = modal_battery();
    let mut frames = 0;
    let mut refuted = 0;
    for j in 1..=2 {
        for fr in frames_of_cardinality(j) {
            frames += 1;
            for (gamma, phi) in &battery {
                let v = decide_on_frame(&fr, gamma, phi, &alg).unwrap();
                let brute = exhaustive_on_frame(&fr, &alg, gamma, phi);
                ensure(v.holds == brute, || format!("{phi} on {:?}: {} vs {brute}", fr.edges(), v.holds))?;
                if !v.holds {
                    ensure(witness_reverifies(&v, gamma, phi), || format!("witness for {phi}"))?;
                    refuted += 1;
                }
            }
        }
    }
    Ok(format!("{frames} frames x {} pairs agree ({refuted} refuted)", battery.len()))
}

fn luk_battery() -> Outcome {
    let valid = [
        "~~p -> p",
        "(p -> q) \\/ (q -> p)",
        "(p -> q) -> ((q -> r) -> (p -> r))",
        "p * q -> p",
        "p * q -> q * p",
        "p * (p -> q) -> q * (q -> p)",
        "(p -> (q -> r)) -> (p * q -> r)",
        "(p * q -> r) -> (p -> (q -> r))",
        "((p -> q) -> r) -> (((q -> p) -> r) -> r)",
        "0 -> p",
    ];
    for s in valid {
        let v = luk_consequence(&[], &f(s)).unwrap();
        ensure(v.holds, || format!("{s} reported invalid"))?;
    }
    for s in ["p \\/ ~p", "p -> p * p"] {
        let phi = f(s);
        let v = luk_consequence(&[], &phi).unwrap();
        ensure(!v.holds, || format!("{s} reported valid"))?;
        ensure(witness_reverifies(&v, &[], &phi), || format!("{s}: witness does not re-verify"))?;
        let m = v.witness.as_ref().unwrap().model.as_ref().unwrap();
        let p = m.value(0, "p").unwrap();
        ensure(*p == Value::rat(1, 2), || format!("{s}: p = {p}"))?;
        ensure(m.evaluate(0, &phi).unwrap() == Value::rat(1, 2), || format!("{s}: value"))?;
    }
    Ok(format!("{} valid, 2 refuted at p = 1/2", valid.len()))
}

fn random_countermodel(r: &mut impl Rng) -> (KripkeModel, usize, Vec<Formula>, Formula) {
    loop {
        let n = r.gen_range(1..=4);
        let fr = random_dag(r, n);
        let m = random_model(r, fr, &Algebra::StdMv, &["r", "s"]);
        let gamma: Vec<Formula> = (0..6)
            .map(|_| random_formula(r, &["r", "s"], 3, Shape::Full))
            .filter(|g| m.globally_satisfies(std::slice::from_ref(g)).unwrap().holds)
            .collect();
        let phi = random_formula(r, &["r", "s"], 3, Shape::Full);
        if let Some(v) = m.evaluate_all(&phi).unwrap().iter().position(|x| !Algebra::StdMv.is_one(x)) {
            return (m, v, gamma, phi);
        }
    }
}

fn model_extension() -> Outcome {
    let mut r = rng(7);
    for i in 0..20 {
        let (m, v, gamma, phi) = random_countermodel(&mut r);
        let (gamma2, phi2) = finite_to_global(&gamma, &phi, "p", "q").unwrap();
        let e = extend_model_pq(&m, v, "p", "q").unwrap();
        let g = e.globally_satisfies(&gamma2).unwrap();
        ensure(g.holds, || format!("model {i}: premise fails"))?;
        let val = e.evaluate(v, &phi2).unwrap();
        ensure(!Algebra::StdMv.is_one(&val), || format!("model {i}: φ∨ψ = 1"))?;
    }
    Ok("20 extended countermodels certified".into())
}

fn claims() -> Outcome {
    let mut r = rng(8);
    let vars = ["p", "q", "r"];
    let mut checked = 0;
    for i in 0..100 {
        let n = r.gen_range(1..=4);
        let fr = random_frame(&mut r, n);
        let m = random_model(&mut r, fr, &Algebra::StdMv, &vars);
        let fs: Vec<Formula> = (0..5).map(|_| random_formula(&mut r, &vars, 4, Shape::Fragment)).collect();
        let rep = verify_claim1(&m, &fs, "x", TranslationMode::Strict).unwrap();
        ensure(rep.passed(), || format!("model {i}: {}", rep.violations[0]))?;
        checked += rep.checked;
        let back = model_p2l(&model_l2p(&m, "x").unwrap(), "x").unwrap();
        ensure(back == m, || format!("model {i}: round trip differs"))?;
    }
    Ok(format!("{checked} exponent equalities, 100 exact round trips"))
}

fn separation() -> Outcome {
    for alg in [ChainAlgebra::StdMv, ChainAlgebra::ExpChain] {
        for n in 0..=5 {
            let rep = verify_separation(n, alg).unwrap();
            ensure(rep.passed, || format!("{alg:?} N = {n}"))?;
        }
    }
    let sigma = sigma_premises();
    let mut r = rng(9);
    for i in 0..100 {
        let alg = if i % 2 == 0 { Algebra::StdMv } else { Algebra::ExpChain };
        let m = build_global_sigma_model(r.gen_range(1..=6), &alg, random_value(&mut r, &alg)).unwrap();
        ensure(m.globally_satisfies(&sigma).unwrap().holds, || format!("cycle {i}: Σ fails"))?;
        for w in m.frame().worlds() {
            let v = m.evaluate(w, &sigma_conclusion()).unwrap();
            ensure(alg.is_one(&v), || format!("cycle {i}: x -> xy = {v}"))?;
        }
    }
    Ok("N = 0..5 in both algebras; 100 cycles".into())
}

fn coenumeration() -> Outcome {
    let valid = [
        (vec!["p"], "[]p"),
        (vec![], "[](p -> q) -> ([]p -> []q)"),
        (vec!["p", "p -> q"], "q"),
        (vec![], "(p -> q) \\/ (q -> p)"),
        (vec![], "[]p * []q -> [](p * q)"),
        (vec!["p /\\ q"], "[]q"),
    ];
    let invalid = [
        (vec![], "p \\/ ~p"),
        (vec![], "[]p -> p"),
        (vec![], "<>p -> []p"),
        (vec![], "[](p * q) -> []p * []q"),
    ];
    let mut pairs: Vec<(Vec<Formula>, Formula, bool)> = valid
        .iter()
        .map(|(g, phi)| (fs(g), f(phi), true))
        .chain(invalid.iter().map(|(g, phi)| (fs(g), f(phi), false)))
        .collect();
    pairs.shuffle(&mut rng(10));
    let expected: Vec<usize> = (0..pairs.len()).filter(|&i| !pairs[i].2).collect();
    let list: Vec<(Vec<Formula>, Formula)> = pairs.iter().map(|(g, phi, _)| (g.clone(), phi.clone())).collect();
    let out = coenumerate_nonconsequences(&list, 3, &Algebra::StdMv).unwrap();
    let mut got: Vec<usize> = out.iter().map(|e| e.index).collect();
    got.sort();
    ensure(got == expected, || format!("emitted {got:?}, expected {expected:?}"))?;
    for e in &out {
        let (g, phi) = &list[e.index];
        ensure(e.cardinality <= 2, || format!("pair {} needed cardinality {}", e.index, e.cardinality))?;
        let v = mvmodal::kripke::Verdict::fails(e.witness.clone());
        ensure(witness_reverifies(&v, g, phi), || format!("pair {}: witness does not re-verify", e.index))?;
    }
    Ok(format!("emitted exactly {got:?} with re-verified witnesses"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra laws", 10, algebra_laws),
        ("evaluator oracle equivalence", 10, evaluator_oracle),
        ("PCP end-to-end", 1, pcp_end_to_end),
        ("non-solution contrapositive", 30, non_solution_contrapositive),
        ("frame decision equivalence", 60, frame_equivalence),
        ("Lukasiewicz decision battery", 10, luk_battery),
        ("model extension certificates", 10, model_extension),
        ("translation claims", 30, claims),
        ("necessitation separation", 10, separation),
        ("co-enumeration", 60, coenumeration),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; too slow")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {detail} [{:.2}s / {limit}s]",
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
