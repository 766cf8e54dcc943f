//! Deciding consequence.
//!
//! Propositional consequence over `[0,1]_Ł` is decided by branch and bound
//! over the linear regimes of each connective occurrence, with an exact
//! simplex at every node. Finite algebras are searched exhaustively. Modal
//! consequence on a fixed finite frame is reduced to a propositional problem
//! by naming the value of every formula at every world.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{Algebra, Value};
use crate::error::{Error, Result};
use crate::kripke::{KripkeFrame, KripkeModel, Verdict, Witness};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::scalar;
use crate::syntax::{self, Connective, Formula};
use crate::scalar::HybridRational as Q;
use crate::Rational;

/// Default limit on branch-and-bound nodes (each one is an LP solve).
pub const DEFAULT_BRANCH_LIMIT: u64 = 1 << 24;
/// Default limit on the size of a finite search space.
pub const DEFAULT_FINITE_LIMIT: u128 = 10_000_000;
/// Default largest frame cardinality for [`decide_cardinality`].
pub const DEFAULT_CARDINALITY_CAP: usize = 3;

/// The two linear pieces of a connective occurrence.
///
/// | conn | `A` | `B` |
/// |------|-----|-----|
/// | `·`  | `a+b-1 >= 0`, value `a+b-1` | `a+b <= 1`, value `0` |
/// | `→`  | `a <= b`, value `1` | `a >= b`, value `1-a+b` |
/// | `∧`  | `a <= b`, value `a` | `a >= b`, value `b` |
/// | `∨`  | `a >= b`, value `a` | `a <= b`, value `b` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    A,
    B,
}

#[derive(Debug, Clone)]
pub struct LukOptions {
    pub branch_limit: u64,
    /// Regime never explored, for testing that every piece is needed.
    pub disabled: Option<(Connective, Regime)>,
}

impl Default for LukOptions {
    fn default() -> Self {
        LukOptions {
            branch_limit: DEFAULT_BRANCH_LIMIT,
            disabled: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteOptions {
    pub limit: u128,
    /// Variables to enumerate first, in this order.
    pub var_order: Vec<String>,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        FiniteOptions {
            limit: DEFAULT_FINITE_LIMIT,
            var_order: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DecideOptions {
    pub luk: LukOptions,
    pub finite: FiniteOptions,
}

fn require_propositional<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<()> {
    for f in formulas {
        if !f.is_propositional() {
            return Err(Error::Unsupported(format!(
                "modal operator in propositional input: {f}"
            )));
        }
    }
    Ok(())
}

/// Recognises `x ↔ t` with `x` a variable not occurring in `t`.
fn as_definition(f: &Formula) -> Option<(&str, &Formula)> {
    let Formula::Times(l, r) = f else { return None };
    let (Formula::Implies(a, b), Formula::Implies(c, d)) = (l.as_ref(), r.as_ref()) else {
        return None;
    };
    let Formula::Var(x) = a.as_ref() else { return None };
    if d.as_ref() != a.as_ref() || b != c || b.vars().contains(x) {
        return None;
    }
    Some((x, b))
}

/// Premise set with acyclic definitions `x ↔ t` substituted away. In any
/// FL_ew algebra `x ↔ t` takes value 1 exactly when `x = t`, so this is an
/// equivalence transformation; `defs` gives the eliminated variables in an
/// order where each term only uses free variables.
struct Reduced {
    premises: Vec<Formula>,
    conclusion: Formula,
    defs: Vec<(String, Formula)>,
}

fn eliminate_definitions(gamma: &[Formula], phi: &Formula) -> Reduced {
    let mut candidates: BTreeMap<String, (usize, Formula)> = BTreeMap::new();
    let mut twice: BTreeSet<String> = BTreeSet::new();
    for (i, g) in gamma.iter().enumerate() {
        if let Some((x, t)) = as_definition(g) {
            if candidates.insert(x.to_string(), (i, t.clone())).is_some() {
                twice.insert(x.to_string());
            }
        }
    }
    for x in &twice {
        candidates.remove(x);
    }
    // resolve in dependency order; whatever stays unresolved is cyclic
    let mut resolved: BTreeMap<String, Formula> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    loop {
        let ready: Vec<String> = candidates
            .iter()
            .filter(|(x, (_, t))| {
                !resolved.contains_key(*x)
                    && t.vars()
                        .iter()
                        .all(|v| !candidates.contains_key(v) || resolved.contains_key(v))
            })
            .map(|(x, _)| x.clone())
            .collect();
        if ready.is_empty() {
            break;
        }
        for x in ready {
            let t = candidates[&x].1.substitute(&resolved);
            resolved.insert(x.clone(), t);
            order.push(x);
        }
    }
    let used: BTreeSet<usize> = order.iter().map(|x| candidates[x].0).collect();
    let premises = gamma
        .iter()
        .enumerate()
        .filter(|(i, _)| !used.contains(i))
        .map(|(_, g)| g.substitute(&resolved))
        .collect();
    let conclusion = phi.substitute(&resolved);
    let defs = order
        .into_iter()
        .map(|x| {
            let t = resolved[&x].clone();
            (x, t)
        })
        .collect();
    Reduced {
        premises,
        conclusion,
        defs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Zero,
    One,
    Var(usize),
    Op(Connective, usize, usize),
}

/// Hash-consed formula graph; children always precede parents.
#[derive(Debug, Default)]
struct Dag {
    nodes: Vec<Node>,
    index: HashMap<Formula, usize>,
    vars: Vec<String>,
    var_pos: HashMap<String, usize>,
}

impl Dag {
    fn with_vars(vars: Vec<String>) -> Dag {
        let var_pos = vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Dag {
            vars,
            var_pos,
            ..Dag::default()
        }
    }

    fn add(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let node = match f {
            Formula::Const0 => Node::Zero,
            Formula::Const1 => Node::One,
            Formula::Var(p) => Node::Var(self.var_pos[p]),
            _ => {
                let (c, l, r) = f.as_binary().expect("propositional input");
                let (l, r) = (self.add(l), self.add(r));
                Node::Op(c, l, r)
            }
        };
        self.nodes.push(node);
        self.index.insert(f.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// Łukasiewicz values of every node under `vals` (indexed like `vars`).
    fn eval_luk(&self, vals: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match *n {
                Node::Zero => Rational::zero(),
                Node::One => Rational::one(),
                Node::Var(i) => vals[i].clone(),
                Node::Op(c, a, b) => {
                    let (a, b) = (&out[a], &out[b]);
                    match c {
                        Connective::Meet => scalar::meet(a, b),
                        Connective::Join => scalar::join(a, b),
                        Connective::Times => scalar::luk_times(a, b),
                        Connective::Implies => scalar::luk_implies(a, b),
                    }
                }
            };
            out.push(v);
        }
        out
    }
}

fn one_world_witness(
    alg: &Algebra,
    vars: &[String],
    values: Vec<Value>,
    phi: &Formula,
) -> Result<Witness> {
    let frame = KripkeFrame::new(&["w"], &[])?;
    let model = KripkeModel::new(frame, alg.clone(), vars.to_vec(), vec![values])?;
    let value = model.evaluate(0, phi)?;
    Ok(Witness {
        world: "w".into(),
        formula: phi.clone(),
        value,
        model: Some(model),
    })
}

/// Values of the eliminated variables, given the free ones.
fn complete_valuation(
    alg: &Algebra,
    free: &BTreeMap<String, Value>,
    defs: &[(String, Formula)],
    all_vars: &BTreeSet<String>,
) -> Result<Vec<Value>> {
    let names: Vec<String> = free.keys().cloned().collect();
    let row: Vec<Value> = free.values().cloned().collect();
    let frame = KripkeFrame::new(&["w"], &[])?;
    let m = KripkeModel::new(frame, alg.clone(), names, vec![row])?;
    let mut full = free.clone();
    for (x, t) in defs {
        full.insert(x.clone(), m.evaluate(0, t)?);
    }
    Ok(all_vars
        .iter()
        .map(|v| full.get(v).cloned().unwrap_or_else(|| alg.zero()))
        .collect())
}

struct BranchSearch<'a> {
    dag: &'a Dag,
    lp: LinearProgram<Q>,
    order: Vec<usize>,
    fixed: Vec<bool>,
    premises: Vec<usize>,
    options: &'a LukOptions,
    visited: u64,
    /// best `(1 - φ, free-variable values)` found so far
    best: Option<(Rational, Vec<Rational>)>,
}

impl BranchSearch<'_> {
    fn regime_rows(&self, node: usize, regime: Regime) -> Vec<Row> {
        let Node::Op(c, a, b) = self.dag.nodes[node] else { unreachable!() };
        let one = Q::one;
        let m1 = || -Q::one();
        let k = node;
        // rows are `coeffs rel rhs`
        let mut rows = Vec::new();
        let mut push = |coeffs: Vec<(usize, Q)>, rel, rhs| rows.push((coeffs, rel, rhs));
        match (c, regime) {
            (Connective::Times, Regime::A) => {
                push(vec![(a, one()), (b, one())], Relation::Ge, one());
                push(vec![(k, one()), (a, m1()), (b, m1())], Relation::Eq, m1());
            }
            (Connective::Times, Regime::B) => {
                push(vec![(a, one()), (b, one())], Relation::Le, one());
                push(vec![(k, one())], Relation::Eq, Q::zero());
            }
            (Connective::Implies, Regime::A) => {
                push(vec![(a, one()), (b, m1())], Relation::Le, Q::zero());
                push(vec![(k, one())], Relation::Eq, one());
            }
            (Connective::Implies, Regime::B) => {
                push(vec![(a, one()), (b, m1())], Relation::Ge, Q::zero());
                push(vec![(k, one()), (a, one()), (b, m1())], Relation::Eq, one());
            }
            (Connective::Meet, Regime::A) => {
                push(vec![(a, one()), (b, m1())], Relation::Le, Q::zero());
                push(vec![(k, one()), (a, m1())], Relation::Eq, Q::zero());
            }
            (Connective::Meet, Regime::B) => {
                push(vec![(a, one()), (b, m1())], Relation::Ge, Q::zero());
                push(vec![(k, one()), (b, m1())], Relation::Eq, Q::zero());
            }
            (Connective::Join, Regime::A) => {
                push(vec![(a, one()), (b, m1())], Relation::Ge, Q::zero());
                push(vec![(k, one()), (a, m1())], Relation::Eq, Q::zero());
            }
            (Connective::Join, Regime::B) => {
                push(vec![(a, one()), (b, m1())], Relation::Le, Q::zero());
                push(vec![(k, one()), (b, m1())], Relation::Eq, Q::zero());
            }
        }
        rows
    }

    fn gap_threshold(&self) -> Rational {
        self.best.as_ref().map_or_else(Rational::zero, |b| b.0.clone())
    }

    fn done(&self) -> bool {
        self.best.as_ref().is_some_and(|b| b.0.is_one())
    }

    /// Whether `k = a c b` at these values lies in `regime`.
    fn in_regime(c: Connective, regime: Regime, a: &Rational, b: &Rational) -> bool {
        match (c, regime) {
            (Connective::Times, Regime::A) => a + b >= Rational::one(),
            (Connective::Times, Regime::B) => a + b <= Rational::one(),
            (Connective::Implies | Connective::Meet, Regime::A) | (Connective::Join, Regime::B) => a <= b,
            (Connective::Implies | Connective::Meet, Regime::B) | (Connective::Join, Regime::A) => a >= b,
        }
    }

    /// First undecided node where the relaxed point is not a model (or uses
    /// a disabled regime).
    fn violated(&self, point: &[Rational], values: &[Rational]) -> Option<usize> {
        self.order.iter().copied().find(|&k| {
            if self.fixed[k] {
                return false;
            }
            let Node::Op(c, a, b) = self.dag.nodes[k] else { unreachable!() };
            if point[k] != values[k] || point[a] != values[a] || point[b] != values[b] {
                return true;
            }
            match self.options.disabled {
                Some((dc, dr)) if dc == c => {
                    let allowed = if dr == Regime::A { Regime::B } else { Regime::A };
                    !Self::in_regime(c, allowed, &values[a], &values[b])
                }
                _ => false,
            }
        })
    }

    fn var_values(&self, point: &[Rational]) -> Vec<Rational> {
        let mut vals = vec![Rational::zero(); self.dag.vars.len()];
        for (i, n) in self.dag.nodes.iter().enumerate() {
            if let Node::Var(v) = n {
                vals[*v] = point[i].clone();
            }
        }
        vals
    }

    fn search(&mut self) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        self.visited += 1;
        if self.visited > self.options.branch_limit {
            return Err(Error::Resource(format!(
                "branch limit of {} exceeded",
                self.options.branch_limit
            )));
        }
        let LpOutcome::Optimal { value, point } = self.lp.solve() else {
            return Ok(());
        };
        let (value, point): (Rational, Vec<Rational>) = (value.to_big(), point.iter().map(Q::to_big).collect());
        // value = max(-t_goal); the relaxation bounds 1 - t_goal from above
        let bound = Rational::one() + value;
        if bound <= self.gap_threshold() {
            return Ok(());
        }
        let vals = self.var_values(&point);
        let values = self.dag.eval_luk(&vals);
        let Some(node) = self.violated(&point, &values) else {
            // the relaxed optimum is a model, so it is optimal for this subtree
            debug_assert!(self.premises.iter().all(|&p| values[p].is_one()));
            self.best = Some((bound, vals));
            return Ok(());
        };
        let Node::Op(c, _, _) = self.dag.nodes[node] else { unreachable!() };
        self.fixed[node] = true;
        for regime in [Regime::A, Regime::B] {
            if self.options.disabled == Some((c, regime)) {
                continue;
            }
            let mark = self.lp.constraints().len();
            for (coeffs, rel, rhs) in self.regime_rows(node, regime) {
                self.lp.add(coeffs, rel, rhs);
            }
            let r = self.search();
            self.lp.truncate(mark);
            r?;
            if self.done() {
                break;
            }
        }
        self.fixed[node] = false;
        Ok(())
    }
}

type Row = (Vec<(usize, Q)>, Relation, Q);

/// Linear inequalities valid in both regimes of `k = a c b` on `[0,1]`;
/// they tighten the relaxation of undecided occurrences.
fn envelope(c: Connective, k: usize, a: usize, b: usize) -> Vec<Row> {
    let (one, m1, zero) = (Q::one(), -Q::one(), Q::zero());
    match c {
        Connective::Meet => vec![
            (vec![(k, one.clone()), (a, m1.clone())], Relation::Le, zero.clone()),
            (vec![(k, one.clone()), (b, m1.clone())], Relation::Le, zero),
            (vec![(k, one), (a, m1.clone()), (b, m1.clone())], Relation::Ge, m1),
        ],
        Connective::Join => vec![
            (vec![(k, one.clone()), (a, m1.clone())], Relation::Ge, zero.clone()),
            (vec![(k, one.clone()), (b, m1.clone())], Relation::Ge, zero.clone()),
            (vec![(k, one), (a, m1.clone()), (b, m1)], Relation::Le, zero),
        ],
        Connective::Times => vec![
            (vec![(k, one.clone()), (a, m1.clone()), (b, m1.clone())], Relation::Ge, m1.clone()),
            (vec![(k, one.clone()), (a, m1.clone())], Relation::Le, zero.clone()),
            (vec![(k, one), (b, m1)], Relation::Le, zero),
        ],
        Connective::Implies => vec![
            (vec![(k, one.clone()), (a, one.clone()), (b, m1.clone())], Relation::Le, one.clone()),
            (vec![(k, one.clone()), (b, m1)], Relation::Ge, zero),
            (vec![(k, one.clone()), (a, one.clone())], Relation::Ge, one),
        ],
    }
}

/// Values of `free` (in order) with every premise at 1 and `goal` as low as
/// possible, or `None` when `goal` is forced to 1.
fn refute(free: &[String], premises: &[Formula], goal: &Formula, options: &LukOptions) -> Result<Option<Vec<Rational>>> {
    let mut dag = Dag::with_vars(free.to_vec());
    let premises: Vec<usize> = premises.iter().map(|g| dag.add(g)).collect();
    let goal = dag.add(goal);
    let n = dag.nodes.len();
    let mut lp = LinearProgram::<Q>::new(n);
    for (i, node) in dag.nodes.iter().enumerate() {
        match node {
            Node::Zero => lp.add(vec![(i, Q::one())], Relation::Eq, Q::zero()),
            Node::One => lp.add(vec![(i, Q::one())], Relation::Eq, Q::one()),
            _ => lp.add(vec![(i, Q::one())], Relation::Le, Q::one()),
        }
    }
    for (k, node) in dag.nodes.iter().enumerate() {
        if let Node::Op(c, a, b) = *node {
            for (coeffs, rel, rhs) in envelope(c, k, a, b) {
                lp.add(coeffs, rel, rhs);
            }
        }
    }
    for &p in &premises {
        lp.add(vec![(p, Q::one())], Relation::Eq, Q::one());
    }
    lp.maximize(vec![(goal, -Q::one())]);
    let order: Vec<usize> = (0..n)
        .rev()
        .filter(|&i| matches!(dag.nodes[i], Node::Op(..)))
        .collect();
    let mut search = BranchSearch {
        dag: &dag,
        lp,
        order,
        fixed: vec![false; n],
        premises,
        options,
        visited: 0,
        best: None,
    };
    search.search()?;
    Ok(search.best.map(|(_, vals)| vals))
}

fn split_meets<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(l, r) => {
            split_meets(l, out);
            split_meets(r, out);
        }
        _ => out.push(f),
    }
}

/// `Γ ⊨ φ` over the standard MV algebra.
pub fn luk_consequence(gamma: &[Formula], phi: &Formula) -> Result<Verdict> {
    luk_consequence_with(gamma, phi, &LukOptions::default())
}

pub fn luk_consequence_with(gamma: &[Formula], phi: &Formula, options: &LukOptions) -> Result<Verdict> {
    require_propositional(gamma.iter().chain(std::iter::once(phi)))?;
    let all_vars = syntax::vars_of(gamma.iter().chain(std::iter::once(phi)));
    let reduced = eliminate_definitions(gamma, phi);
    let free: Vec<String> = syntax::vars_of(reduced.premises.iter().chain(std::iter::once(&reduced.conclusion)))
        .into_iter()
        .collect();
    // Γ ⊨ A ∧ B iff Γ ⊨ A and Γ ⊨ B; each conjunct gets its own search
    let mut conjuncts = Vec::new();
    split_meets(&reduced.conclusion, &mut conjuncts);
    let mut found = None;
    for goal in conjuncts {
        found = refute(&free, &reduced.premises, goal, options)?;
        if found.is_some() {
            break;
        }
    }
    let Some(vals) = found else {
        return Ok(Verdict::holds());
    };
    let free_vals: BTreeMap<String, Value> = free
        .iter()
        .cloned()
        .zip(vals.into_iter().map(Value::Rat))
        .collect();
    let alg = Algebra::StdMv;
    let row = complete_valuation(&alg, &free_vals, &reduced.defs, &all_vars)?;
    let vars: Vec<String> = all_vars.into_iter().collect();
    let witness = one_world_witness(&alg, &vars, row, phi)?;
    debug_assert!(witness.model.as_ref().unwrap().globally_satisfies(gamma)?.holds);
    Ok(Verdict::fails(witness))
}

/// `Γ ⊨ φ` over a finite algebra, by exhaustive search.
pub fn finite_consequence(alg: &Algebra, gamma: &[Formula], phi: &Formula) -> Result<Verdict> {
    finite_consequence_with(alg, gamma, phi, &FiniteOptions::default())
}

pub fn finite_consequence_with(
    alg: &Algebra,
    gamma: &[Formula],
    phi: &Formula,
    options: &FiniteOptions,
) -> Result<Verdict> {
    require_propositional(gamma.iter().chain(std::iter::once(phi)))?;
    let elements = alg
        .elements()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a finite algebra", alg.name())))?;
    let all_vars = syntax::vars_of(gamma.iter().chain(std::iter::once(phi)));
    let reduced = eliminate_definitions(gamma, phi);
    let free_set = syntax::vars_of(reduced.premises.iter().chain(std::iter::once(&reduced.conclusion)));
    let mut free: Vec<String> = options
        .var_order
        .iter()
        .filter(|v| free_set.contains(*v))
        .cloned()
        .collect::<indexmap::IndexSet<_>>()
        .into_iter()
        .collect();
    for v in &free_set {
        if !free.contains(v) {
            free.push(v.clone());
        }
    }
    let size = elements.len() as u128;
    let space = (0..free.len()).try_fold(1u128, |acc, _| acc.checked_mul(size).filter(|s| *s <= options.limit));
    if space.is_none() {
        return Err(Error::Resource(format!(
            "search space {}^{} exceeds limit {}",
            size,
            free.len(),
            options.limit
        )));
    }

    let pos: HashMap<&Value, usize> = elements.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let table = |c: Connective| -> Result<Vec<Vec<usize>>> {
        elements
            .iter()
            .map(|a| elements.iter().map(|b| Ok(pos[&alg.op(c, a, b)?])).collect())
            .collect()
    };
    let tables: HashMap<Connective, Vec<Vec<usize>>> = Connective::ALL
        .iter()
        .map(|&c| Ok((c, table(c)?)))
        .collect::<Result<_>>()?;
    let (zero, one) = (pos[&alg.zero()], pos[&alg.one()]);

    let mut dag = Dag::with_vars(free.clone());
    let premises: Vec<usize> = reduced.premises.iter().map(|g| dag.add(g)).collect();
    let goal = dag.add(&reduced.conclusion);
    // premise i can be checked once variable `ready[i]` (in search order) is set
    let ready: Vec<Option<usize>> = reduced
        .premises
        .iter()
        .map(|g| g.vars().iter().map(|v| free.iter().position(|f| f == v).unwrap()).max())
        .collect();

    let eval = |assign: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(dag.nodes.len());
        for n in &dag.nodes {
            let v = match *n {
                Node::Zero => zero,
                Node::One => one,
                Node::Var(i) => assign[i],
                Node::Op(c, a, b) => tables[&c][out[a]][out[b]],
            };
            out.push(v);
        }
        out
    };

    fn descend(
        depth: usize,
        assign: &mut Vec<usize>,
        width: usize,
        check: &dyn Fn(&[usize], Option<usize>) -> bool,
        goal_ok: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if depth == assign.len() {
            return !goal_ok(assign);
        }
        for e in 0..width {
            assign[depth] = e;
            if check(assign, Some(depth)) && descend(depth + 1, assign, width, check, goal_ok) {
                return true;
            }
        }
        false
    }

    let check = |assign: &[usize], level: Option<usize>| {
        let vals = eval(assign);
        premises
            .iter()
            .zip(&ready)
            .filter(|(_, r)| **r == level)
            .all(|(&p, _)| vals[p] == one)
    };
    let goal_ok = |assign: &[usize]| eval(assign)[goal] == one;
    let mut assign = vec![0usize; free.len()];
    if !check(&assign, None) {
        return Ok(Verdict::holds());
    }
    let found = descend(0, &mut assign, elements.len(), &check, &goal_ok).then_some(assign);
    let Some(assign) = found else {
        return Ok(Verdict::holds());
    };
    let free_vals: BTreeMap<String, Value> = free
        .iter()
        .cloned()
        .zip(assign.iter().map(|&i| elements[i].clone()))
        .collect();
    let row = complete_valuation(alg, &free_vals, &reduced.defs, &all_vars)?;
    let vars: Vec<String> = all_vars.into_iter().collect();
    Ok(Verdict::fails(one_world_witness(alg, &vars, row, phi)?))
}

/// What a fresh variable of a [`FrameTranslation`] stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendEntry {
    pub world: String,
    /// A source variable `p` for `p^v`, or the modal formula `□ψ` / `◇ψ`.
    pub source: Formula,
}

/// The propositional image of `Γ ⊢ φ` on a fixed finite frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameTranslation {
    pub frame: KripkeFrame,
    pub source_premises: Vec<Formula>,
    pub source_conclusion: Formula,
    /// `⟨γ, v⟩*` for every premise and world.
    pub starred: Vec<Formula>,
    /// `Δ^v` for each world, in world order.
    pub deltas: Vec<Vec<Formula>>,
    /// `⋀_v ⟨φ, v⟩*`.
    pub conclusion: Formula,
    pub legend: BTreeMap<String, LegendEntry>,
    prefix: String,
    modal: Vec<Formula>,
}

impl FrameTranslation {
    /// All propositional premises: starred premises, then every `Δ^v`.
    pub fn premises(&self) -> Vec<Formula> {
        let mut out = self.starred.clone();
        for d in &self.deltas {
            out.extend(d.iter().cloned());
        }
        syntax::dedup(out)
    }

    pub fn var_name(&self, world: usize, p: &str) -> String {
        format!("{}{}_v_{}", self.prefix, world, p)
    }

    /// Name of `x^v_{□ψ}` / `x^v_{◇ψ}`.
    pub fn modal_name(&self, world: usize, modal: &Formula) -> Option<String> {
        let j = self.modal.iter().position(|m| m == modal)?;
        let tag = if matches!(modal, Formula::Box(_)) { 'b' } else { 'd' };
        Some(format!("{}{}_{}{}", self.prefix, world, tag, j))
    }

    /// Search order that lets definitions be checked early: world variables
    /// first, then modal names by increasing modal depth.
    pub fn search_order(&self) -> Vec<String> {
        let mut out = Vec::new();
        let source_vars = syntax::vars_of(self.source_premises.iter().chain(std::iter::once(&self.source_conclusion)));
        for w in self.frame.worlds() {
            for p in &source_vars {
                out.push(self.var_name(w, p));
            }
        }
        let mut modal: Vec<&Formula> = self.modal.iter().collect();
        modal.sort_by_key(|m| m.modal_depth());
        for m in modal {
            for w in self.frame.worlds() {
                out.push(self.modal_name(w, m).unwrap());
            }
        }
        out
    }

    /// Reads a propositional valuation back as a Kripke model on the frame.
    pub fn fold_back(&self, alg: &Algebra, valuation: &BTreeMap<String, Value>) -> Result<KripkeModel> {
        let vars: Vec<String> =
            syntax::vars_of(self.source_premises.iter().chain(std::iter::once(&self.source_conclusion)))
                .into_iter()
                .collect();
        let rows = self
            .frame
            .worlds()
            .map(|w| {
                vars.iter()
                    .map(|p| valuation.get(&self.var_name(w, p)).cloned().unwrap_or_else(|| alg.zero()))
                    .collect()
            })
            .collect();
        KripkeModel::new(self.frame.clone(), alg.clone(), vars, rows)
    }
}

fn fresh_prefix(used: &BTreeSet<String>) -> String {
    let mut pre = String::from("T");
    while used.iter().any(|v| v.starts_with(&pre)) {
        pre.push('T');
    }
    pre
}

/// The propositional translation of `Γ ⊢ φ` on `fr`.
pub fn translate_on_frame(fr: &KripkeFrame, gamma: &[Formula], phi: &Formula) -> FrameTranslation {
    let all = gamma.iter().chain(std::iter::once(phi));
    let source_vars = syntax::vars_of(all.clone());
    let prefix = fresh_prefix(&source_vars);
    let modal: Vec<Formula> = syntax::subformulas_of(all)
        .into_iter()
        .filter(|f| f.is_modal())
        .collect();
    let mut tr = FrameTranslation {
        frame: fr.clone(),
        source_premises: gamma.to_vec(),
        source_conclusion: phi.clone(),
        starred: Vec::new(),
        deltas: Vec::new(),
        conclusion: Formula::Const1,
        legend: BTreeMap::new(),
        prefix,
        modal,
    };
    for w in fr.worlds() {
        for p in &source_vars {
            tr.legend.insert(
                tr.var_name(w, p),
                LegendEntry {
                    world: fr.name(w).to_string(),
                    source: Formula::var(p.clone()),
                },
            );
        }
        for m in &tr.modal {
            tr.legend.insert(
                tr.modal_name(w, m).unwrap(),
                LegendEntry {
                    world: fr.name(w).to_string(),
                    source: m.clone(),
                },
            );
        }
    }
    let star = |f: &Formula, w: usize| star(&tr, f, w);
    let starred = syntax::dedup(fr.worlds().flat_map(|w| gamma.iter().map(move |g| (g, w))).map(|(g, w)| star(g, w)));
    let deltas: Vec<Vec<Formula>> = fr
        .worlds()
        .map(|v| {
            tr.modal
                .iter()
                .map(|m| {
                    let x = Formula::var(tr.modal_name(v, m).unwrap());
                    let succ = fr.successors(v);
                    let rhs = match m {
                        Formula::Box(psi) => {
                            Formula::conj(succ.iter().map(|&w| star(psi, w))).unwrap_or(Formula::Const1)
                        }
                        Formula::Diamond(psi) => {
                            Formula::disj(succ.iter().map(|&w| star(psi, w))).unwrap_or(Formula::Const0)
                        }
                        _ => unreachable!(),
                    };
                    Formula::iff(x, rhs)
                })
                .collect()
        })
        .collect();
    let conclusion = Formula::conj(fr.worlds().map(|w| star(phi, w))).expect("frames are nonempty");
    tr.starred = starred;
    tr.deltas = deltas;
    tr.conclusion = conclusion;
    tr
}

fn star(tr: &FrameTranslation, f: &Formula, w: usize) -> Formula {
    match f {
        Formula::Const0 | Formula::Const1 => f.clone(),
        Formula::Var(p) => Formula::var(tr.var_name(w, p)),
        Formula::Box(_) | Formula::Diamond(_) => Formula::var(tr.modal_name(w, f).unwrap()),
        _ => {
            let (c, l, r) = f.as_binary().unwrap();
            Formula::binary(c, star(tr, l, w), star(tr, r, w))
        }
    }
}

/// Propositional decision for the algebras that have one.
pub fn propositional_consequence(
    alg: &Algebra,
    gamma: &[Formula],
    phi: &Formula,
    options: &DecideOptions,
) -> Result<Verdict> {
    match alg {
        Algebra::StdMv => luk_consequence_with(gamma, phi, &options.luk),
        Algebra::MvN(_) | Algebra::FiniteTable(_) => finite_consequence_with(alg, gamma, phi, &options.finite),
        _ => Err(Error::Unsupported(format!(
            "no propositional decision for {}; Product propositional decision out of scope",
            alg.name()
        ))),
    }
}

/// `Γ ⊢ φ` over all models on the frame `fr` with values in `alg`.
pub fn decide_on_frame(fr: &KripkeFrame, gamma: &[Formula], phi: &Formula, alg: &Algebra) -> Result<Verdict> {
    decide_on_frame_with(fr, gamma, phi, alg, &DecideOptions::default())
}

pub fn decide_on_frame_with(
    fr: &KripkeFrame,
    gamma: &[Formula],
    phi: &Formula,
    alg: &Algebra,
    options: &DecideOptions,
) -> Result<Verdict> {
    if !matches!(alg, Algebra::StdMv | Algebra::MvN(_) | Algebra::FiniteTable(_)) {
        return Err(Error::Unsupported(format!(
            "{}: Product propositional decision out of scope",
            alg.name()
        )));
    }
    let tr = translate_on_frame(fr, gamma, phi);
    let mut opts = options.clone();
    opts.finite.var_order = tr.search_order();
    let verdict = propositional_consequence(alg, &tr.premises(), &tr.conclusion, &opts)?;
    if verdict.holds {
        return Ok(verdict);
    }
    let prop = verdict.witness.and_then(|w| w.model).expect("countermodel");
    let valuation: BTreeMap<String, Value> = prop
        .vars()
        .iter()
        .cloned()
        .zip(prop.row(0).iter().cloned())
        .collect();
    let model = tr.fold_back(alg, &valuation)?;
    let check = model.consequence_witness(gamma, phi)?;
    let witness = check.witness.ok_or_else(|| {
        Error::InvalidModel("translated countermodel does not refute the consequence".into())
    })?;
    Ok(Verdict::fails(witness.with_model(model)))
}

/// All frames on `j` worlds named `w1 .. wj`, ordered by edge bitmask.
pub fn frames_of_cardinality(j: usize) -> impl Iterator<Item = KripkeFrame> {
    let bits = j * j;
    (0u64..1 << bits).map(move |mask| {
        let edges: Vec<(usize, usize)> = (0..bits)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b / j, b % j))
            .collect();
        KripkeFrame::numbered("w", 1, j, &edges).expect("valid frame")
    })
}

fn permutations(j: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(j - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, j - 1);
            out.push(q);
        }
    }
    out
}

/// One frame per isomorphism class on `j` worlds: the labelled frame whose
/// edge mask is least among its relabellings.
pub fn frame_classes(j: usize) -> impl Iterator<Item = KripkeFrame> {
    let bits = j * j;
    let perms = permutations(j);
    let relabel = move |mask: u64, p: &[usize]| {
        (0..bits)
            .filter(|b| mask >> b & 1 == 1)
            .fold(0u64, |acc, b| acc | 1 << (p[b / j] * j + p[b % j]))
    };
    frames_of_cardinality(j)
        .zip(0u64..)
        .filter(move |(_, mask)| perms.iter().all(|p| relabel(*mask, p) >= *mask))
        .map(|(fr, _)| fr)
}

/// `Γ ⊢ φ` over every frame with exactly `j` worlds.
pub fn decide_cardinality(j: usize, gamma: &[Formula], phi: &Formula, alg: &Algebra) -> Result<Verdict> {
    decide_cardinality_with(j, gamma, phi, alg, DEFAULT_CARDINALITY_CAP, &DecideOptions::default())
}

pub fn decide_cardinality_with(
    j: usize,
    gamma: &[Formula],
    phi: &Formula,
    alg: &Algebra,
    cap: usize,
    options: &DecideOptions,
) -> Result<Verdict> {
    if j == 0 {
        return Err(Error::Precondition("cardinality must be positive".into()));
    }
    if j > cap {
        return Err(Error::Resource(format!("cardinality {j} is above the cap {cap}")));
    }
    let frames: Vec<KripkeFrame> = frame_classes(j).collect();
    let first = frames
        .par_iter()
        .map(|fr| decide_on_frame_with(fr, gamma, phi, alg, options))
        .find_map_first(|r| match r {
            Ok(v) if v.holds => None,
            other => Some(other),
        });
    first.unwrap_or_else(|| Ok(Verdict::holds()))
}

/// A refuted pair reported by [`coenumerate_nonconsequences`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emission {
    pub index: usize,
    pub stage: usize,
    pub cardinality: usize,
    pub witness: Witness,
}

/// Dovetailed search for non-consequences among `pairs`. At stage `i` every
/// pair not yet refuted is tried on frames of cardinality `i` (while `i` is
/// within the cap); refuted pairs are emitted in pair order.
pub fn coenumerate_nonconsequences(
    pairs: &[(Vec<Formula>, Formula)],
    budget: usize,
    alg: &Algebra,
) -> Result<Vec<Emission>> {
    coenumerate_with(pairs, budget, alg, DEFAULT_CARDINALITY_CAP, &DecideOptions::default())
}

pub fn coenumerate_with(
    pairs: &[(Vec<Formula>, Formula)],
    budget: usize,
    alg: &Algebra,
    cap: usize,
    options: &DecideOptions,
) -> Result<Vec<Emission>> {
    let mut emitted: Vec<Emission> = Vec::new();
    for stage in 1..=budget.min(cap) {
        let open: Vec<usize> = (0..pairs.len())
            .filter(|i| !emitted.iter().any(|e| e.index == *i))
            .collect();
        let results: Vec<(usize, Result<Verdict>)> = open
            .par_iter()
            .map(|&i| {
                let (g, phi) = &pairs[i];
                (i, decide_cardinality_with(stage, g, phi, alg, cap, options))
            })
            .collect();
        for (i, r) in results {
            let v = r?;
            if let Some(w) = v.witness {
                emitted.push(Emission {
                    index: i,
                    stage,
                    cardinality: stage,
                    witness: w,
                });
            }
        }
    }
    Ok(emitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn fs(items: &[&str]) -> Vec<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    fn witness_value(v: &Verdict, var: &str) -> Value {
        let m = v.witness.as_ref().unwrap().model.as_ref().unwrap();
        m.value(0, var).unwrap().clone()
    }

    #[test]
    fn luk_examples() {
        assert!(luk_consequence(&[], &f("~~p -> p")).unwrap().holds);
        let v = luk_consequence(&[], &f("p -> p * p")).unwrap();
        assert!(!v.holds);
        assert_eq!(witness_value(&v, "p"), Value::rat(1, 2));
        assert_eq!(v.witness.as_ref().unwrap().value, Value::rat(1, 2));
        assert!(luk_consequence(&fs(&["p"]), &f("p * p")).unwrap().holds);
        let v = luk_consequence(&[], &f("p \\/ ~p")).unwrap();
        assert_eq!(witness_value(&v, "p"), Value::rat(1, 2));
    }

    #[test]
    fn luk_rejects_modal_input() {
        assert!(matches!(luk_consequence(&[], &f("[]p")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn luk_branch_guard() {
        let opts = LukOptions {
            branch_limit: 1,
            disabled: None,
        };
        let err = luk_consequence_with(&[], &f("(p -> q) \\/ (q -> p)"), &opts).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn finite_examples() {
        let v = finite_consequence(&Algebra::MvN(3), &[], &f("p \\/ ~p")).unwrap();
        assert!(!v.holds);
        assert_eq!(witness_value(&v, "p"), Value::rat(1, 2));
        assert!(finite_consequence(&Algebra::MvN(2), &[], &f("p \\/ ~p")).unwrap().holds);
        assert!(finite_consequence(&Algebra::MvN(3), &fs(&["p <-> q"]), &f("q <-> p")).unwrap().holds);
    }

    #[test]
    fn finite_guard() {
        let opts = FiniteOptions {
            limit: 8,
            var_order: vec![],
        };
        let err = finite_consequence_with(&Algebra::MvN(3), &[], &f("p -> q"), &opts).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn definitions_are_eliminated_exactly() {
        let gamma = fs(&["x <-> p * q", "y <-> x \\/ p", "y"]);
        let r = eliminate_definitions(&gamma, &f("x"));
        assert_eq!(r.defs.len(), 2);
        assert_eq!(r.premises, vec![f("(p * q) \\/ p")]);
        assert_eq!(r.conclusion, f("p * q"));
        // a cyclic pair stays as premises
        let r = eliminate_definitions(&fs(&["x <-> y", "y <-> x"]), &f("x"));
        assert!(r.defs.is_empty());
        assert_eq!(r.premises.len(), 2);
    }

    #[test]
    fn translation_of_chain() {
        let fr = KripkeFrame::new(&["w1", "w2"], &[("w1", "w2")]).unwrap();
        let tr = translate_on_frame(&fr, &fs(&["[]p"]), &f("p"));
        let b = |w| Formula::var(tr.modal_name(w, &f("[]p")).unwrap());
        let p = |w| Formula::var(tr.var_name(w, "p"));
        assert_eq!(tr.starred, vec![b(0), b(1)]);
        assert_eq!(tr.deltas, vec![vec![Formula::iff(b(0), p(1))], vec![Formula::iff(b(1), Formula::Const1)]]);
        assert_eq!(tr.conclusion, Formula::and(p(0), p(1)));
        for (name, entry) in &tr.legend {
            let w = fr.index_of(&entry.world).unwrap();
            let back = match &entry.source {
                Formula::Var(q) => tr.var_name(w, q),
                m => tr.modal_name(w, m).unwrap(),
            };
            assert_eq!(&back, name);
        }
    }

    #[test]
    fn translation_of_empty_join() {
        let fr = KripkeFrame::new(&["w"], &[]).unwrap();
        let tr = translate_on_frame(&fr, &[], &f("<>1"));
        let x = Formula::var(tr.modal_name(0, &f("<>1")).unwrap());
        assert_eq!(tr.conclusion, x);
        assert_eq!(tr.deltas, vec![vec![Formula::iff(x, Formula::Const0)]]);
    }

    #[test]
    fn fresh_names_avoid_source_variables() {
        let fr = KripkeFrame::new(&["w"], &[]).unwrap();
        let tr = translate_on_frame(&fr, &fs(&["T0_v_p"]), &f("TT"));
        assert!(tr.legend.keys().all(|k| k.starts_with("TTT")));
    }

    #[test]
    fn frame_decisions() {
        let chain = KripkeFrame::new(&["w1", "w2"], &[("w1", "w2")]).unwrap();
        let v = decide_on_frame(&chain, &fs(&["[]p"]), &f("p"), &Algebra::StdMv).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        let m = w.model.unwrap();
        assert_eq!(m.value(0, "p").unwrap(), &Value::rat(0, 1));
        assert_eq!(m.value(1, "p").unwrap(), &Value::rat(1, 1));
        assert_eq!(w.world, "w1");
        assert!(decide_on_frame(&chain, &fs(&["p"]), &f("[]p"), &Algebra::StdMv).unwrap().holds);
        let single = KripkeFrame::new(&["w"], &[]).unwrap();
        assert!(decide_on_frame(&single, &fs(&["<>1"]), &f("0"), &Algebra::StdMv).unwrap().holds);
        assert!(matches!(
            decide_on_frame(&single, &[], &f("p"), &Algebra::StdProduct),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cardinality_examples() {
        let v = decide_cardinality(1, &[], &f("[]p -> p"), &Algebra::StdMv).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.unwrap().model.unwrap().frame().edge_count(), 0);
        assert!(decide_cardinality(1, &[], &f("p -> p"), &Algebra::StdMv).unwrap().holds);
        assert!(decide_cardinality(2, &fs(&["p"]), &f("[]p"), &Algebra::StdMv).unwrap().holds);
        assert!(decide_cardinality(4, &[], &f("p"), &Algebra::StdMv).unwrap_err().is_resource());
        assert!(decide_cardinality(0, &[], &f("p"), &Algebra::StdMv).is_err());
        assert_eq!(frames_of_cardinality(2).count(), 16);
        let classes: Vec<usize> = (1..=3).map(|j| frame_classes(j).count()).collect();
        assert_eq!(classes, [2, 10, 104]);
    }

    #[test]
    fn coenumeration_examples() {
        let e = coenumerate_nonconsequences(&[(vec![], f("p \\/ ~p"))], 2, &Algebra::StdMv).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].cardinality, 1);
        let e = coenumerate_nonconsequences(&[(fs(&["p"]), f("p"))], 5, &Algebra::StdMv).unwrap();
        assert!(e.is_empty());
        let pairs = vec![(vec![], f("[]p -> p")), (fs(&["p"]), f("[]p"))];
        let e = coenumerate_nonconsequences(&pairs, 3, &Algebra::StdMv).unwrap();
        assert_eq!(e.iter().map(|e| e.index).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn regime_mutations_change_verdicts() {
        let battery: Vec<(Vec<Formula>, Formula)> = vec![
            (vec![], f("q -> (p /\\ q)")),
            (vec![], f("p -> (p /\\ q)")),
            (vec![], f("(p \\/ q) -> q")),
            (vec![], f("(p \\/ q) -> p")),
            (vec![], f("~(p * q)")),
            (vec![], f("(p * q) \\/ (~p -> q)")),
            (fs(&["q"]), f("(p -> q) -> p")),
            (vec![], f("p \\/ ~p")),
        ];
        let baseline: Vec<bool> = battery
            .iter()
            .map(|(g, phi)| luk_consequence(g, phi).unwrap().holds)
            .collect();
        assert!(baseline.iter().all(|h| !h));
        for c in Connective::ALL {
            for regime in [Regime::A, Regime::B] {
                let opts = LukOptions {
                    disabled: Some((c, regime)),
                    ..LukOptions::default()
                };
                let changed = battery.iter().zip(&baseline).any(|((g, phi), &b)| {
                    luk_consequence_with(g, phi, &opts).unwrap().holds != b
                });
                assert!(changed, "disabling {c:?}/{regime:?} changes nothing");
            }
        }
    }
}
