//! Translations between consequence problems.
//!
//! * finite-model global consequence into plain global consequence over
//!   `[0,1]_Ł`, with the model extension that witnesses it;
//! * Łukasiewicz into product modal logic via `φ^x` and `Θ^x`, with the
//!   model transforms between `[0,1]_Ł` and the power chain;
//! * global into local consequence over transitive frames;
//! * the standard translation into first-order syntax.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, Exp, Value};
use crate::error::{Error, Result};
use crate::kripke::{Height, KripkeModel, World};
use crate::syntax::{self, Connective, Formula};
use crate::Rational;

fn check_fresh(var: &str, formulas: &[&Formula]) -> Result<()> {
    if formulas.iter().any(|f| f.vars().contains(var)) {
        return Err(Error::VariableClash(var.to_string()));
    }
    Ok(())
}

/// `Ξ(p) = {□0 ∨ (p ↔ □p), □0 ∨ (□p ↔ ◇p)}`.
pub fn xi_set(p: &str) -> Vec<Formula> {
    let pv = Formula::var(p);
    let box0 = Formula::boxed(Formula::Const0);
    vec![
        Formula::or(box0.clone(), Formula::iff(pv.clone(), Formula::boxed(pv.clone()))),
        Formula::or(box0, Formula::iff(Formula::boxed(pv.clone()), Formula::diamond(pv))),
    ]
}

/// `ξ(p, q) = q ↔ (□q · p)`: `q` shrinks by a factor `p` at every step up.
pub fn xi(p: &str, q: &str) -> Formula {
    let qv = Formula::var(q);
    Formula::iff(qv.clone(), Formula::times(Formula::boxed(qv), Formula::var(p)))
}

/// `ψ(p, q) = p ∨ ¬p ∨ q ∨ ¬q`.
pub fn psi(p: &str, q: &str) -> Formula {
    let (pv, qv) = (Formula::var(p), Formula::var(q));
    Formula::disj([pv.clone(), Formula::neg(pv), qv.clone(), Formula::neg(qv)]).unwrap()
}

/// `(Γ ∪ Ξ(p) ∪ {ξ(p,q)}, φ ∨ ψ(p,q))`.
pub fn finite_to_global(gamma: &[Formula], phi: &Formula, p: &str, q: &str) -> Result<(Vec<Formula>, Formula)> {
    if p == q {
        return Err(Error::VariableClash(p.to_string()));
    }
    for v in [p, q] {
        if !syntax::is_identifier(v) {
            return Err(Error::Format(format!("bad variable name {v:?}")));
        }
    }
    let all: Vec<&Formula> = gamma.iter().chain(std::iter::once(phi)).collect();
    check_fresh(p, &all)?;
    check_fresh(q, &all)?;
    let mut out = gamma.to_vec();
    out.extend(xi_set(p));
    out.push(xi(p, q));
    Ok((syntax::dedup(out), Formula::or(phi.clone(), psi(p, q))))
}

/// A decomposition of a reduced pair back into its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteToGlobalSource {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub p: String,
    pub q: String,
}

/// Every way of reading `(Γ', φ')` as an output of [`finite_to_global`].
pub fn recognize_finite_to_global(gamma: &[Formula], phi: &Formula) -> Vec<FiniteToGlobalSource> {
    let Formula::Or(phi0, tail) = phi else { return Vec::new() };
    let vars = syntax::vars_of(gamma.iter().chain(std::iter::once(phi)));
    let mut out = Vec::new();
    for p in &vars {
        for q in &vars {
            if p == q || tail.as_ref() != &psi(p, q) {
                continue;
            }
            let mut added = xi_set(p);
            added.push(xi(p, q));
            if !added.iter().all(|a| gamma.contains(a)) {
                continue;
            }
            let rest: Vec<Formula> = gamma.iter().filter(|g| !added.contains(g)).cloned().collect();
            let rest_vars = syntax::vars_of(rest.iter().chain(std::iter::once(phi0.as_ref())));
            if rest_vars.contains(p) || rest_vars.contains(q) {
                continue;
            }
            out.push(FiniteToGlobalSource {
                premises: rest,
                conclusion: phi0.as_ref().clone(),
                p: p.clone(),
                q: q.clone(),
            });
        }
    }
    out
}

/// Adds `p ≡ a` with `a = (2h+1)/(2h+2)`, `h` the height of `v`, and `q`
/// defined bottom-up by `q = □q · a`.
pub fn extend_model_pq(m: &KripkeModel, v: World, p: &str, q: &str) -> Result<KripkeModel> {
    if *m.algebra() != Algebra::StdMv {
        return Err(Error::Unsupported(format!(
            "model extension needs the standard MV algebra, got {}",
            m.algebra().name()
        )));
    }
    for var in [p, q] {
        if m.declares(var) {
            return Err(Error::VariableClash(var.to_string()));
        }
    }
    if p == q {
        return Err(Error::VariableClash(p.to_string()));
    }
    let fr = m.frame();
    fr.check_world(v)?;
    let heights = fr.heights();
    if let Some(w) = heights.iter().position(|h| *h == Height::Infinite) {
        return Err(Error::InfiniteHeight(fr.name(w).to_string()));
    }
    let h = heights[v].finite().unwrap();
    let a = Rational::new((2 * h + 1).into(), (2 * h + 2).into());
    let alg = Algebra::StdMv;
    let av = Value::Rat(a);
    // settle worlds in order of increasing height
    let mut order: Vec<World> = fr.worlds().collect();
    order.sort_by_key(|&w| heights[w]);
    let mut qv: Vec<Option<Value>> = vec![None; fr.len()];
    for w in order {
        let succ: Vec<&Value> = fr
            .successors(w)
            .iter()
            .map(|&s| qv[s].as_ref().expect("lower worlds settled"))
            .collect();
        let boxed = alg.meet_all(succ)?;
        qv[w] = Some(alg.op(Connective::Times, &boxed, &av)?);
    }
    m.clone()
        .with_var(p, vec![av; fr.len()])?
        .with_var(q, qv.into_iter().map(Option::unwrap).collect())
}

/// How `∧`, `∨`, `◇` and `1` are handled by [`luk2prod_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslationMode {
    /// Only `0`, variables, `·`, `→`, `□` are accepted.
    Strict,
    /// `∧`, `∨` pointwise, `(◇φ)^x = x ∨ ◇φ^x`, `1^x = 1`.
    Homomorphic,
}

/// Rewrites `∧`, `∨`, `◇`, `1` away using Łukasiewicz definitions.
pub fn rewrite_to_fragment(f: &Formula) -> Formula {
    match f {
        Formula::Const0 | Formula::Var(_) => f.clone(),
        Formula::Const1 => Formula::implies(Formula::Const0, Formula::Const0),
        Formula::Box(g) => Formula::boxed(rewrite_to_fragment(g)),
        Formula::Diamond(g) => Formula::neg(Formula::boxed(Formula::neg(rewrite_to_fragment(g)))),
        Formula::Times(l, r) => Formula::times(rewrite_to_fragment(l), rewrite_to_fragment(r)),
        Formula::Implies(l, r) => Formula::implies(rewrite_to_fragment(l), rewrite_to_fragment(r)),
        Formula::And(l, r) => fragment_and(rewrite_to_fragment(l), rewrite_to_fragment(r)),
        Formula::Or(l, r) => {
            let (a, b) = (rewrite_to_fragment(l), rewrite_to_fragment(r));
            let left = Formula::implies(Formula::implies(a.clone(), b.clone()), b.clone());
            let right = Formula::implies(Formula::implies(b, a.clone()), a);
            fragment_and(left, right)
        }
    }
}

/// `φ ∧ ψ` as `φ · (φ → ψ)`.
fn fragment_and(a: Formula, b: Formula) -> Formula {
    Formula::times(a.clone(), Formula::implies(a, b))
}

pub fn in_fragment(f: &Formula) -> bool {
    match f {
        Formula::Const0 | Formula::Var(_) => true,
        Formula::Box(g) => in_fragment(g),
        Formula::Times(l, r) | Formula::Implies(l, r) => in_fragment(l) && in_fragment(r),
        _ => false,
    }
}

/// `φ^x`.
pub fn luk2prod_formula(f: &Formula, x: &str, mode: TranslationMode) -> Result<Formula> {
    check_fresh(x, &[f])?;
    translate_x(f, &Formula::var(x), mode)
}

fn translate_x(f: &Formula, x: &Formula, mode: TranslationMode) -> Result<Formula> {
    let t = |g: &Formula| translate_x(g, x, mode);
    let outside = |what: &str| {
        Err(Error::Unsupported(format!(
            "{what} is outside the translated fragment; rewrite first or use the homomorphic mode"
        )))
    };
    Ok(match f {
        Formula::Const0 => x.clone(),
        Formula::Var(_) => Formula::or(f.clone(), x.clone()),
        Formula::Implies(l, r) => Formula::implies(t(l)?, t(r)?),
        Formula::Times(l, r) => Formula::or(x.clone(), Formula::times(t(l)?, t(r)?)),
        Formula::Box(g) => Formula::boxed(t(g)?),
        Formula::Const1 => match mode {
            TranslationMode::Strict => return outside("1"),
            TranslationMode::Homomorphic => Formula::Const1,
        },
        Formula::And(l, r) => match mode {
            TranslationMode::Strict => return outside("∧"),
            TranslationMode::Homomorphic => Formula::and(t(l)?, t(r)?),
        },
        Formula::Or(l, r) => match mode {
            TranslationMode::Strict => return outside("∨"),
            TranslationMode::Homomorphic => Formula::or(t(l)?, t(r)?),
        },
        Formula::Diamond(g) => match mode {
            TranslationMode::Strict => return outside("◇"),
            TranslationMode::Homomorphic => Formula::or(x.clone(), Formula::diamond(t(g)?)),
        },
    })
}

/// `Θ^x = {□x ↔ ◇x, □x ↔ x, ¬¬x}`.
pub fn theta(x: &str) -> Vec<Formula> {
    let xv = Formula::var(x);
    vec![
        Formula::iff(Formula::boxed(xv.clone()), Formula::diamond(xv.clone())),
        Formula::iff(Formula::boxed(xv.clone()), xv.clone()),
        Formula::neg(Formula::neg(xv)),
    ]
}

/// `(Γ^x ∪ Θ^x, φ^x)`.
pub fn luk2prod(gamma: &[Formula], phi: &Formula, x: &str, mode: TranslationMode) -> Result<(Vec<Formula>, Formula)> {
    let all: Vec<&Formula> = gamma.iter().chain(std::iter::once(phi)).collect();
    check_fresh(x, &all)?;
    let mut premises = gamma
        .iter()
        .map(|g| luk2prod_formula(g, x, mode))
        .collect::<Result<Vec<_>>>()?;
    premises.extend(theta(x));
    Ok((syntax::dedup(premises), luk2prod_formula(phi, x, mode)?))
}

/// Same frame over the power chain: `q ↦ a^{1-e(w,q)}`, `x ↦ a`.
pub fn model_l2p(m: &KripkeModel, x: &str) -> Result<KripkeModel> {
    if *m.algebra() != Algebra::StdMv {
        return Err(Error::Unsupported(format!(
            "source model must be over the standard MV algebra, got {}",
            m.algebra().name()
        )));
    }
    if m.declares(x) {
        return Err(Error::VariableClash(x.to_string()));
    }
    let rows: Vec<Vec<Value>> = m
        .frame()
        .worlds()
        .map(|w| {
            m.row(w)
                .iter()
                .map(|v| {
                    let r = v.as_rational().expect("standard MV values are rational");
                    Value::Exp(Exp::Pow(Rational::one() - r))
                })
                .chain(std::iter::once(Value::pow(1, 1)))
                .collect()
        })
        .collect();
    let mut vars = m.vars().to_vec();
    vars.push(x.to_string());
    KripkeModel::new(m.frame().clone(), Algebra::ExpChain, vars, rows)
}

/// Base `a` of a power-chain model: the constant value of `x`, or `Pow(1)`
/// when `x` is not declared.
fn base_of(m: &KripkeModel, x: &str) -> Result<Rational> {
    if !m.declares(x) {
        return Ok(Rational::one());
    }
    let first = m.value(0, x)?.clone();
    if m.frame().worlds().any(|w| m.value(w, x).ok() != Some(&first)) {
        return Err(Error::Precondition(format!("`{x}` is not constant")));
    }
    match first {
        Value::Exp(Exp::Pow(s)) if s > Rational::zero() => Ok(s),
        other => Err(Error::Precondition(format!(
            "`{x}` must be a power strictly between 0 and 1, got {other}"
        ))),
    }
}

/// `1 - log_a (a ∨ v)` for `v = a^t`, with `a = Pow(s)`.
fn p2l_value(s: &Rational, v: &Value, var: &str) -> Result<Rational> {
    match v {
        Value::Exp(Exp::Pow(t)) => {
            let ratio = t / s;
            Ok(if ratio >= Rational::one() {
                Rational::zero()
            } else {
                Rational::one() - ratio
            })
        }
        Value::Exp(Exp::Zero) => Err(Error::OutOfRange(format!(
            "`{var}` is zero; its logarithm is undefined"
        ))),
        other => Err(Error::CarrierMismatch(format!("{other} is not a power-chain value"))),
    }
}

/// Same frame over `[0,1]_Ł`: `q ↦ 1 - log_a (a ∨ e(w,q))`, dropping `x`.
pub fn model_p2l(m: &KripkeModel, x: &str) -> Result<KripkeModel> {
    if *m.algebra() != Algebra::ExpChain {
        return Err(Error::Unsupported(format!(
            "source model must be over the power chain, got {}",
            m.algebra().name()
        )));
    }
    let s = base_of(m, x)?;
    let keep: Vec<(usize, String)> = m
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.as_str() != x)
        .map(|(i, v)| (i, v.clone()))
        .collect();
    let rows = m
        .frame()
        .worlds()
        .map(|w| {
            keep.iter()
                .map(|(i, name)| p2l_value(&s, &m.row(w)[*i], name).map(Value::Rat))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    KripkeModel::new(
        m.frame().clone(),
        Algebra::StdMv,
        keep.into_iter().map(|(_, v)| v).collect(),
        rows,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimViolation {
    pub world: String,
    pub formula: Formula,
    pub expected: Value,
    pub actual: Value,
}

impl fmt::Display for ClaimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at `{}`, {}: expected {}, got {}",
            self.world, self.formula, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClaimReport {
    pub checked: usize,
    pub violations: Vec<ClaimViolation>,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `e'(w, ψ^x) = a^{1 - e(w, ψ)}` for every formula and world, where
/// `e'` is the valuation of [`model_l2p`].
pub fn verify_claim1(m: &KripkeModel, formulas: &[Formula], x: &str, mode: TranslationMode) -> Result<ClaimReport> {
    let target = model_l2p(m, x)?;
    let mut report = ClaimReport::default();
    for psi in formulas {
        let tr = luk2prod_formula(psi, x, mode)?;
        let source = m.evaluate_all(psi)?;
        let image = target.evaluate_all(&tr)?;
        for w in m.frame().worlds() {
            report.checked += 1;
            let r = source[w].as_rational().expect("rational");
            let expected = Value::Exp(Exp::Pow(Rational::one() - r));
            if image[w] != expected {
                report.violations.push(ClaimViolation {
                    world: m.frame().name(w).to_string(),
                    formula: psi.clone(),
                    expected,
                    actual: image[w].clone(),
                });
            }
        }
    }
    Ok(report)
}

/// Checks `e'(w, ψ) = 1 - log_a e(w, ψ^x)` on a power-chain model, where
/// `e'` is the valuation of [`model_p2l`].
pub fn verify_claim2(m: &KripkeModel, formulas: &[Formula], x: &str, mode: TranslationMode) -> Result<ClaimReport> {
    let s = base_of(m, x)?;
    let target = model_p2l(m, x)?;
    let mut report = ClaimReport::default();
    for psi in formulas {
        let tr = luk2prod_formula(psi, x, mode)?;
        let image = m.evaluate_all(&tr)?;
        let direct = target.evaluate_all(psi)?;
        for w in m.frame().worlds() {
            report.checked += 1;
            let expected = Value::Rat(p2l_value(&s, &image[w], "translation")?);
            if direct[w] != expected {
                report.violations.push(ClaimViolation {
                    world: m.frame().name(w).to_string(),
                    formula: psi.clone(),
                    expected,
                    actual: direct[w].clone(),
                });
            }
        }
    }
    Ok(report)
}

/// `(Γ ∪ □Γ, φ)`.
pub fn global_to_local_transitive(gamma: &[Formula], phi: &Formula) -> (Vec<Formula>, Formula) {
    (syntax::box_prefix(gamma, 1), phi.clone())
}

/// First-order formulas over unary `P_p`, binary `R`, and variables `x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FOFormula {
    Zero,
    One,
    Pred(String, usize),
    Rel(usize, usize),
    Bin(Connective, Box<FOFormula>, Box<FOFormula>),
    Forall(usize, Box<FOFormula>),
    Exists(usize, Box<FOFormula>),
}

impl FOFormula {
    pub fn render(&self, ascii: bool) -> String {
        match self {
            FOFormula::Zero => "0".into(),
            FOFormula::One => "1".into(),
            FOFormula::Pred(p, i) => format!("P_{p}(x{i})"),
            FOFormula::Rel(i, j) => format!("R(x{i},x{j})"),
            FOFormula::Bin(c, l, r) => format!("{} {} {}", l.render_inner(ascii), c.symbol(), r.render_inner(ascii)),
            FOFormula::Forall(i, b) => {
                format!("{}x{i} {}", if ascii { "forall " } else { "∀" }, b.render_inner(ascii))
            }
            FOFormula::Exists(i, b) => {
                format!("{}x{i} {}", if ascii { "exists " } else { "∃" }, b.render_inner(ascii))
            }
        }
    }

    fn render_inner(&self, ascii: bool) -> String {
        match self {
            FOFormula::Bin(..) => format!("({})", self.render(ascii)),
            _ => self.render(ascii),
        }
    }

    /// Largest variable index used.
    pub fn max_var(&self) -> usize {
        match self {
            FOFormula::Zero | FOFormula::One => 0,
            FOFormula::Pred(_, i) => *i,
            FOFormula::Rel(i, j) => *i.max(j),
            FOFormula::Bin(_, l, r) => l.max_var().max(r.max_var()),
            FOFormula::Forall(i, b) | FOFormula::Exists(i, b) => (*i).max(b.max_var()),
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Standard translation of `f` evaluated at `x_i`.
pub fn modal_to_fo(f: &Formula, i: usize) -> FOFormula {
    match f {
        Formula::Const0 => FOFormula::Zero,
        Formula::Const1 => FOFormula::One,
        Formula::Var(p) => FOFormula::Pred(p.clone(), i),
        Formula::Box(g) => FOFormula::Forall(
            i + 1,
            Box::new(FOFormula::Bin(
                Connective::Implies,
                Box::new(FOFormula::Rel(i, i + 1)),
                Box::new(modal_to_fo(g, i + 1)),
            )),
        ),
        Formula::Diamond(g) => FOFormula::Exists(
            i + 1,
            Box::new(FOFormula::Bin(
                Connective::Times,
                Box::new(FOFormula::Rel(i, i + 1)),
                Box::new(modal_to_fo(g, i + 1)),
            )),
        ),
        _ => {
            let (c, l, r) = f.as_binary().unwrap();
            FOFormula::Bin(c, Box::new(modal_to_fo(l, i)), Box::new(modal_to_fo(r, i)))
        }
    }
}
