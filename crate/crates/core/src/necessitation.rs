//! Chain countermodels separating global consequence from local consequence
//! closed under `φ ⊢ □φ`.

use num_bigint::BigUint;

use crate::algebra::{Algebra, Value};
use crate::error::{Error, Result};
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::pcp::ChainAlgebra;
use crate::syntax::{self, Formula};
use crate::Rational;

/// `{y ↔ □y, y ↔ ◇y, x ↔ (□x)·y, ¬□0}`.
pub fn sigma_premises() -> Vec<Formula> {
    let (x, y) = (Formula::var("x"), Formula::var("y"));
    vec![
        Formula::iff(y.clone(), Formula::boxed(y.clone())),
        Formula::iff(y.clone(), Formula::diamond(y.clone())),
        Formula::iff(x.clone(), Formula::times(Formula::boxed(x), y)),
        Formula::neg(Formula::boxed(Formula::Const0)),
    ]
}

/// `x → x·y`.
pub fn sigma_conclusion() -> Formula {
    let x = Formula::var("x");
    Formula::implies(x.clone(), Formula::times(x, Formula::var("y")))
}

fn base(n: u64, alg: ChainAlgebra) -> Value {
    match alg {
        ChainAlgebra::StdMv => Value::Rat(Rational::new((n + 2).into(), (n + 3).into())),
        ChainAlgebra::ExpChain => Value::pow(1, 1),
    }
}

/// Worlds `0..=N+1` in a line, `y ≡ a`, `e(i, x) = a^{N+1-i}`.
pub fn build_nec_model(n: u64, alg: ChainAlgebra) -> Result<KripkeModel> {
    let len = usize::try_from(n)
        .ok()
        .and_then(|n| n.checked_add(2))
        .ok_or_else(|| Error::Resource(format!("chain of length {n} is too long")))?;
    let edges: Vec<(usize, usize)> = (0..len - 1).map(|i| (i, i + 1)).collect();
    let frame = KripkeFrame::numbered("", 0, len, &edges)?;
    let algebra = alg.algebra();
    let a = base(n, alg);
    let mut rows = Vec::with_capacity(len);
    for i in 0..len {
        let x = algebra.power(&a, &BigUint::from(len - 1 - i))?;
        rows.push(vec![x, a.clone()]);
    }
    KripkeModel::new(frame, algebra, vec!["x".into(), "y".into()], rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCheck {
    /// Number of boxes in front of the premise.
    pub depth: usize,
    pub formula: Formula,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub n: u64,
    pub algebra: String,
    pub checks: Vec<SeparationCheck>,
    /// Value of `x → x·y` at world 0.
    pub conclusion_value: Value,
    pub passed: bool,
}

/// Evaluates `□^i Σ` for `i ≤ N` and `x → x·y` at world 0 of `m`.
pub fn check_separation(m: &KripkeModel, n: u64) -> Result<SeparationReport> {
    let alg = m.algebra();
    let sigma = sigma_premises();
    let depth = usize::try_from(n).map_err(|_| Error::Resource("depth too large".into()))?;
    let mut checks = Vec::new();
    for i in 0..=depth {
        for s in &sigma {
            let formula = Formula::box_n(s.clone(), i);
            let value = m.evaluate(0, &formula)?;
            checks.push(SeparationCheck { depth: i, formula, value });
        }
    }
    debug_assert_eq!(checks.len(), syntax::box_prefix(&sigma, depth).len());
    let conclusion_value = m.evaluate(0, &sigma_conclusion())?;
    let passed = checks.iter().all(|c| alg.is_one(&c.value)) && !alg.is_one(&conclusion_value);
    Ok(SeparationReport {
        n,
        algebra: alg.name(),
        checks,
        conclusion_value,
        passed,
    })
}

pub fn verify_separation(n: u64, alg: ChainAlgebra) -> Result<SeparationReport> {
    check_separation(&build_nec_model(n, alg)?, n)
}

/// A `k`-cycle with `y ≡ α`, `x ≡ 0`; it satisfies `Σ` globally.
pub fn build_global_sigma_model(k: usize, alg: &Algebra, alpha: Value) -> Result<KripkeModel> {
    if k == 0 {
        return Err(Error::Precondition("a cycle needs at least one world".into()));
    }
    alg.check(&alpha)?;
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    let frame = KripkeFrame::numbered("c", 0, k, &edges)?;
    let zero = alg.zero();
    KripkeModel::from_fn(frame, alg.clone(), &["x", "y"], |_, v| {
        if v == "x" { zero.clone() } else { alpha.clone() }
    })
}
