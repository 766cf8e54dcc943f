//! Post correspondence instances and their encoding as a modal consequence
//! problem in the variables `x`, `y`, `z`.
//!
//! A solution `i_1 .. i_k` gives a chain model refuting the encoding; going
//! the other way, a refuting chain model over a power-recoverable algebra
//! yields the indices back.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{self, Algebra, Exp, Value};
use crate::error::{Error, Result};
use crate::kripke::{KripkeFrame, KripkeModel, World};
use crate::syntax::{Formula, MAX_PARSED_EXPONENT};
use crate::Rational;

/// A word over `{0, .., s-1}` read as a number, with its digit count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Numeral {
    pub value: BigUint,
    pub len: usize,
}

impl Numeral {
    pub fn new(value: impl Into<BigUint>, len: usize) -> Numeral {
        Numeral {
            value: value.into(),
            len,
        }
    }

    pub fn check(&self, base: u32) -> Result<()> {
        if self.len == 0 {
            return Err(Error::Pcp("numerals need at least one digit".into()));
        }
        if self.value >= BigUint::from(base).pow(self.len as u32) {
            return Err(Error::Pcp(format!(
                "{} does not fit in {} base-{base} digits",
                self.value, self.len
            )));
        }
        Ok(())
    }

    /// Digits, most significant first, padded to `len`.
    pub fn digits(&self, base: u32) -> Vec<u32> {
        let mut d = self.value.to_radix_be(base);
        if d == [0] {
            d.clear();
        }
        let mut out = vec![0; self.len.saturating_sub(d.len())];
        out.extend(d.into_iter().map(u32::from));
        out
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.value, self.len)
    }
}

/// `x⌢y` in base `s`.
pub fn concat(x: &Numeral, y: &Numeral, base: u32) -> Result<Numeral> {
    if base < 2 {
        return Err(Error::Pcp(format!("base must be at least 2, got {base}")));
    }
    x.check(base)?;
    y.check(base)?;
    Ok(concat_unchecked(x, y, base))
}

fn concat_unchecked(x: &Numeral, y: &Numeral, base: u32) -> Numeral {
    Numeral {
        value: &x.value * BigUint::from(base).pow(y.len as u32) + &y.value,
        len: x.len + y.len,
    }
}

/// A pair of `(value, length)` numerals.
pub type SmallPair = ((u64, usize), (u64, usize));

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpInstance {
    base: u32,
    pairs: Vec<(Numeral, Numeral)>,
}

impl PcpInstance {
    pub fn new(base: u32, pairs: Vec<(Numeral, Numeral)>) -> Result<PcpInstance> {
        if base < 2 {
            return Err(Error::Pcp(format!("base must be at least 2, got {base}")));
        }
        if pairs.is_empty() {
            return Err(Error::Pcp("an instance needs at least one pair".into()));
        }
        for (x, y) in &pairs {
            x.check(base)?;
            y.check(base)?;
        }
        Ok(PcpInstance { base, pairs })
    }

    /// Pairs given as `((x, |x|), (y, |y|))` with small values.
    pub fn from_small(base: u32, pairs: &[SmallPair]) -> Result<PcpInstance> {
        PcpInstance::new(
            base,
            pairs
                .iter()
                .map(|&((xv, xl), (yv, yl))| (Numeral::new(xv, xl), Numeral::new(yv, yl)))
                .collect(),
        )
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn pairs(&self) -> &[(Numeral, Numeral)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn pair(&self, index: usize) -> Result<&(Numeral, Numeral)> {
        if index == 0 || index > self.pairs.len() {
            return Err(Error::Pcp(format!(
                "index {index} out of range 1..={}",
                self.pairs.len()
            )));
        }
        Ok(&self.pairs[index - 1])
    }

    /// Prefix concatenations of the `x` and `y` sides, one per index.
    pub fn prefix_words(&self, indices: &[usize]) -> Result<Vec<(Numeral, Numeral)>> {
        if indices.is_empty() {
            return Err(Error::Pcp("empty index sequence".into()));
        }
        let mut out: Vec<(Numeral, Numeral)> = Vec::with_capacity(indices.len());
        for &i in indices {
            let (x, y) = self.pair(i)?;
            let next = match out.last() {
                None => (x.clone(), y.clone()),
                Some((px, py)) => (
                    concat_unchecked(px, x, self.base),
                    concat_unchecked(py, y, self.base),
                ),
            };
            out.push(next);
        }
        Ok(out)
    }
}

pub fn verify_solution(p: &PcpInstance, indices: &[usize]) -> Result<bool> {
    let words = p.prefix_words(indices)?;
    let (x, y) = words.last().unwrap();
    Ok(x == y)
}

/// All solutions with at most `max_len` indices, shortest first, then lexicographic.
pub fn solutions_up_to(p: &PcpInstance, max_len: usize) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut out = Vec::new();
    for len in 1..=max_len {
        let total = n.checked_pow(len as u32).expect("search space fits in usize");
        let mut found: Vec<Vec<usize>> = (0..total)
            .into_par_iter()
            .filter_map(|code| {
                let seq = sequence_from_code(code, n, len);
                verify_solution(p, &seq).unwrap().then_some(seq)
            })
            .collect();
        found.sort();
        out.extend(found);
    }
    out
}

/// The `code`-th index sequence of length `len` over `1..=n`, lexicographically.
pub fn sequence_from_code(mut code: usize, n: usize, len: usize) -> Vec<usize> {
    let mut seq = vec![0; len];
    for slot in seq.iter_mut().rev() {
        *slot = code % n + 1;
        code /= n;
    }
    seq
}

/// The premises `Γ_P` and conclusion `φ_P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

fn small_exponent(n: &BigUint) -> Result<u64> {
    n.to_u64()
        .filter(|k| *k <= MAX_PARSED_EXPONENT)
        .ok_or_else(|| Error::Resource(format!("power {n} is too large to expand into a formula")))
}

fn x() -> Formula {
    Formula::var("x")
}

fn y() -> Formula {
    Formula::var("y")
}

fn z() -> Formula {
    Formula::var("z")
}

/// `v ↔ (□v)^{s^{|w|}} · z^{w}`.
fn step(p: &PcpInstance, v: Formula, w: &Numeral) -> Result<Formula> {
    let reps = small_exponent(&BigUint::from(p.base).pow(w.len as u32))?;
    let zs = small_exponent(&w.value)?;
    let rhs = Formula::times(
        Formula::power(Formula::boxed(v.clone()), reps),
        Formula::power(z(), zs),
    );
    Ok(Formula::iff(v, rhs))
}

pub fn not_box_zero() -> Formula {
    Formula::neg(Formula::boxed(Formula::Const0))
}

/// `φ_P = (x ↔ y)² → ((x → x·z) ∨ z)`.
pub fn phi_p() -> Formula {
    Formula::implies(
        Formula::power(Formula::iff(x(), y()), 2),
        Formula::or(Formula::implies(x(), Formula::times(x(), z())), z()),
    )
}

/// The `i`-th disjunct (1-based) of the third premise family.
pub fn disjunct(p: &PcpInstance, i: usize) -> Result<Formula> {
    let (xw, yw) = p.pair(i)?;
    Ok(Formula::and(step(p, x(), xw)?, step(p, y(), yw)?))
}

pub fn encode(p: &PcpInstance) -> Result<Encoding> {
    let mut premises: Vec<Formula> = [x(), y(), z()]
        .into_iter()
        .map(|v| {
            Formula::implies(
                not_box_zero(),
                Formula::iff(Formula::boxed(v.clone()), Formula::diamond(v)),
            )
        })
        .collect();
    premises.push(Formula::implies(not_box_zero(), Formula::iff(z(), Formula::boxed(z()))));
    let disjuncts = (1..=p.len()).map(|i| disjunct(p, i)).collect::<Result<Vec<_>>>()?;
    premises.push(Formula::disj(disjuncts).expect("instances are nonempty"));
    Ok(Encoding {
        premises,
        conclusion: phi_p(),
    })
}

/// Which algebra the chain models live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainAlgebra {
    /// `a = R/(R+1)` where `R` is the largest exponent used.
    StdMv,
    /// `a = Pow(1)`.
    ExpChain,
}

impl ChainAlgebra {
    pub fn algebra(self) -> Algebra {
        match self {
            ChainAlgebra::StdMv => Algebra::StdMv,
            ChainAlgebra::ExpChain => Algebra::ExpChain,
        }
    }
}

/// `a^n` in the standard MV algebra with `a = R/(R+1)`: `max(0, 1 - n/(R+1))`.
fn mv_power(n: &BigUint, r: &BigUint) -> Value {
    let den = BigInt::from(r.clone()) + 1;
    let v = Rational::one() - Rational::new(BigInt::from(n.clone()), den);
    Value::Rat(if v < Rational::zero() { Rational::zero() } else { v })
}

/// Worlds `v1 .. vk` with `v_j → v_{j-1}`; `x`, `y` take the powers of the
/// prefix concatenations and `z` the base `a`. `v_k` is the top world.
pub fn build_chain_model(p: &PcpInstance, indices: &[usize], alg: ChainAlgebra) -> Result<KripkeModel> {
    let words = p.prefix_words(indices)?;
    let k = words.len();
    let edges: Vec<(World, World)> = (1..k).map(|j| (j, j - 1)).collect();
    let frame = KripkeFrame::numbered("v", 1, k, &edges)?;
    let rows: Vec<Vec<Value>> = match alg {
        ChainAlgebra::ExpChain => {
            let pow = |n: &BigUint| Value::Exp(Exp::Pow(Rational::from_integer(BigInt::from(n.clone()))));
            words
                .iter()
                .map(|(xw, yw)| vec![pow(&xw.value), pow(&yw.value), Value::pow(1, 1)])
                .collect()
        }
        ChainAlgebra::StdMv => {
            let (xk, yk) = words.last().unwrap();
            let r = std::cmp::max(&xk.value, &yk.value).clone();
            let a = mv_power(&BigUint::one(), &r);
            words
                .iter()
                .map(|(xw, yw)| vec![mv_power(&xw.value, &r), mv_power(&yw.value, &r), a.clone()])
                .collect()
        }
    };
    KripkeModel::new(
        frame,
        alg.algebra(),
        vec!["x".into(), "y".into(), "z".into()],
        rows,
    )
}

/// Chain model for a verified solution; it globally satisfies `Γ_P` and
/// refutes `φ_P` at the top world `v_k`.
pub fn build_countermodel(p: &PcpInstance, indices: &[usize], alg: ChainAlgebra) -> Result<KripkeModel> {
    if !verify_solution(p, indices)? {
        return Err(Error::Pcp(format!("{indices:?} is not a solution")));
    }
    build_chain_model(p, indices, alg)
}

/// The `n` with `alpha^n = v`, where the algebra makes it unique.
pub fn power_exponent(alg: &Algebra, alpha: &Value, v: &Value) -> Result<BigUint> {
    match (alg, alpha, v) {
        (Algebra::StdMv, Value::Rat(a), Value::Rat(b)) => {
            if a.is_one() {
                return Err(Error::Precondition("z is 1, exponents are not recoverable".into()));
            }
            if b.is_zero() {
                return Err(Error::Precondition("value 0: exponent not recoverable".into()));
            }
            algebra::luk_log(a, b).ok_or_else(|| {
                Error::Precondition(format!("{b} is not a power of {a}"))
            })
        }
        (Algebra::ExpChain, Value::Exp(a), Value::Exp(b)) => {
            if *b == Exp::Zero {
                return Err(Error::Precondition("value zero: exponent not recoverable".into()));
            }
            if *a == Exp::unit() {
                return Err(Error::Precondition("z is 1, exponents are not recoverable".into()));
            }
            algebra::exp_log(a, b)
                .ok_or_else(|| Error::Precondition(format!("{} is not a power of {}", Value::Exp(b.clone()), Value::Exp(a.clone()))))
        }
        _ => Err(Error::Unsupported(format!(
            "exponent recovery in {}",
            alg.name()
        ))),
    }
}

/// Worlds from `top` down to the dead end, when the generated submodel is a chain.
fn chain_from(m: &KripkeModel, top: World) -> Result<Vec<World>> {
    let fr = m.frame();
    fr.check_world(top)?;
    let mut seen = vec![false; fr.len()];
    let mut out = vec![top];
    seen[top] = true;
    let mut cur = top;
    loop {
        match fr.successors(cur) {
            [] => return Ok(out),
            [next] => {
                if seen[*next] {
                    return Err(Error::Precondition("model is not a chain: cycle".into()));
                }
                seen[*next] = true;
                out.push(*next);
                cur = *next;
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "model is not a chain: `{}` has several successors",
                    fr.name(cur)
                )))
            }
        }
    }
}

/// Reads the index sequence off a chain model refuting the encoding at `top`.
/// Indices are listed from the dead end upwards.
pub fn extract_solution(p: &PcpInstance, m: &KripkeModel, top: World) -> Result<Vec<usize>> {
    let chain = chain_from(m, top)?;
    if !m.algebra().is_chain() {
        return Err(Error::Precondition("algebra is not a chain".into()));
    }
    let sub = m.restrict(&chain);
    let enc = encode(p)?;
    if !sub.globally_satisfies(&enc.premises)?.holds {
        return Err(Error::Precondition("premises do not hold on the chain".into()));
    }
    if sub.algebra().is_one(&sub.evaluate(0, &enc.conclusion)?) {
        return Err(Error::Precondition("conclusion is not refuted at the top world".into()));
    }
    let alpha = sub.value(0, "z")?.clone();
    for w in sub.frame().worlds() {
        if sub.value(w, "z")? != &alpha {
            return Err(Error::Precondition("z is not constant along the chain".into()));
        }
    }
    let disjuncts = (1..=p.len()).map(|i| disjunct(p, i)).collect::<Result<Vec<_>>>()?;
    let alg = sub.algebra().clone();
    let mut indices = Vec::new();
    let mut prev: Option<(BigUint, BigUint)> = None;
    // sub is ordered top first; walk it from the dead end
    for w in (0..sub.len()).rev() {
        let ex = power_exponent(&alg, &alpha, sub.value(w, "x")?)?;
        let ey = power_exponent(&alg, &alpha, sub.value(w, "y")?)?;
        let mut chosen = None;
        for (i, d) in disjuncts.iter().enumerate() {
            let (xw, yw) = &p.pairs[i];
            let expect = |prev: &BigUint, word: &Numeral| {
                prev * BigUint::from(p.base).pow(word.len as u32) + &word.value
            };
            let (px, py) = prev.clone().unwrap_or_default();
            if expect(&px, xw) == ex && expect(&py, yw) == ey && alg.is_one(&sub.evaluate(w, d)?) {
                chosen = Some(i + 1);
                break;
            }
        }
        let i = chosen.ok_or_else(|| {
            Error::Precondition(format!(
                "no pair explains the values at `{}`",
                sub.frame().name(w)
            ))
        })?;
        indices.push(i);
        prev = Some((ex, ey));
    }
    Ok(indices)
}

/// The instance `base 2, [(1,1)/(3,2), (3,2)/(1,1)]` used throughout the tests.
pub fn sample_instance() -> PcpInstance {
    PcpInstance::from_small(2, &[((1, 1), (3, 2)), ((3, 2), (1, 1))]).expect("valid instance")
}
