//! Exact FL_ew algebras: the standard Łukasiewicz, Gödel and product chains
//! on rational points, the finite Łukasiewicz chains `MV_n`, the symbolic power
//! chain `{0} ∪ {a^t : t ∈ ℚ≥0}`, and validated finite tables.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar;
use crate::syntax::Connective;
use crate::Rational;

/// Default refusal threshold for exact powers in the standard product algebra.
pub const DEFAULT_PRODUCT_POWER_CAP: u64 = 64;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a decimal such as `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Format(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((i, f)) = t.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = format!("{i}{f}").parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), f.len());
        return Ok(Rational::new(whole, den));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// An element of the power chain: `Zero` or `a^t` for a fixed formal base
/// `0 < a < 1`. `Pow(0)` is the unit; larger exponents are smaller elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Exp {
    Zero,
    Pow(Rational),
}

impl Exp {
    pub fn unit() -> Exp {
        Exp::Pow(Rational::zero())
    }

    pub fn pow(num: i64, den: i64) -> Exp {
        Exp::Pow(rat(num, den))
    }

    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            Exp::Zero => None,
            Exp::Pow(t) => Some(t),
        }
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exp::Zero, Exp::Zero) => Ordering::Equal,
            (Exp::Zero, Exp::Pow(_)) => Ordering::Less,
            (Exp::Pow(_), Exp::Zero) => Ordering::Greater,
            (Exp::Pow(s), Exp::Pow(t)) => t.cmp(s),
        }
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Rat(Rational),
    Exp(Exp),
    Fin(usize),
}

impl Value {
    pub fn rat(num: i64, den: i64) -> Value {
        Value::Rat(rat(num, den))
    }

    pub fn pow(num: i64, den: i64) -> Value {
        Value::Exp(Exp::pow(num, den))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Value::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_exp(&self) -> Option<&Exp> {
        match self {
            Value::Exp(e) => Some(e),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(r) => write!(f, "{r}"),
            Value::Exp(Exp::Zero) => f.write_str("zero"),
            Value::Exp(Exp::Pow(t)) => write!(f, "a^{t}"),
            Value::Fin(i) => write!(f, "#{i}"),
        }
    }
}

/// Raw operation tables of a finite algebra, indexed by element number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTables {
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub times: Vec<Vec<usize>>,
    pub residuum: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    pub labels: Option<Vec<String>>,
}

impl FiniteTables {
    pub fn size(&self) -> usize {
        self.meet.len()
    }

    /// Tables of a subalgebra of the standard MV algebra given by its points,
    /// listed in increasing order.
    pub fn from_mv_points(points: &[Rational]) -> FiniteTables {
        let index: HashMap<&Rational, usize> =
            points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = |op: fn(&Rational, &Rational) -> Rational| {
            points
                .iter()
                .map(|a| points.iter().map(|b| index[&op(a, b)]).collect())
                .collect()
        };
        FiniteTables {
            meet: table(scalar::meet),
            join: table(scalar::join),
            times: table(scalar::luk_times),
            residuum: table(scalar::luk_implies),
            zero: 0,
            one: points.len() - 1,
            labels: Some(points.iter().map(|p| p.to_string()).collect()),
        }
    }

    /// `MV_n` as explicit tables.
    pub fn mv_n(n: u32) -> FiniteTables {
        let points: Vec<Rational> = (0..n)
            .map(|i| rat(i as i64, (n - 1) as i64))
            .collect();
        FiniteTables::from_mv_points(&points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Law {
    MeetCommutative,
    MeetAssociative,
    MeetIdempotent,
    JoinCommutative,
    JoinAssociative,
    JoinIdempotent,
    Absorption,
    Bounds,
    TimesCommutative,
    TimesAssociative,
    TimesUnit,
    Residuation,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::MeetCommutative => "meet commutativity",
            Law::MeetAssociative => "meet associativity",
            Law::MeetIdempotent => "meet idempotence",
            Law::JoinCommutative => "join commutativity",
            Law::JoinAssociative => "join associativity",
            Law::JoinIdempotent => "join idempotence",
            Law::Absorption => "absorption",
            Law::Bounds => "bounds",
            Law::TimesCommutative => "monoid commutativity",
            Law::TimesAssociative => "monoid associativity",
            Law::TimesUnit => "monoid unit",
            Law::Residuation => "residuation",
        }
    }
}

/// One failed instance of an axiom, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub elements: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {:?}", self.law.name(), self.elements)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, law: Law) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.law == law)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Exhaustively checks the bounded lattice, commutative monoid and
/// residuation laws. Fails only when the tables are malformed.
pub fn validate_finite_algebra(t: &FiniteTables) -> Result<ValidationReport> {
    let n = t.size();
    if n == 0 {
        return Err(Error::InvalidAlgebra("empty carrier".into()));
    }
    for (name, tab) in [
        ("meet", &t.meet),
        ("join", &t.join),
        ("times", &t.times),
        ("residuum", &t.residuum),
    ] {
        if tab.len() != n || tab.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidAlgebra(format!("{name} table is not {n}x{n}")));
        }
        if tab.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidAlgebra(format!(
                "{name} table has an entry outside 0..{n}"
            )));
        }
    }
    if t.zero >= n || t.one >= n {
        return Err(Error::InvalidAlgebra("designated constant out of range".into()));
    }
    if let Some(labels) = &t.labels {
        if labels.len() != n {
            return Err(Error::InvalidAlgebra("label count differs from carrier".into()));
        }
    }

    let mut report = ValidationReport::default();
    let mut fail = |law: Law, elements: Vec<usize>| report.violations.push(Violation { law, elements });
    let (m, j, x, r) = (&t.meet, &t.join, &t.times, &t.residuum);
    let leq = |a: usize, b: usize| m[a][b] == a;

    for a in 0..n {
        if m[a][a] != a {
            fail(Law::MeetIdempotent, vec![a]);
        }
        if j[a][a] != a {
            fail(Law::JoinIdempotent, vec![a]);
        }
        if m[t.zero][a] != t.zero || m[a][t.one] != a {
            fail(Law::Bounds, vec![a]);
        }
        if x[a][t.one] != a {
            fail(Law::TimesUnit, vec![a]);
        }
        for b in 0..n {
            if m[a][b] != m[b][a] {
                fail(Law::MeetCommutative, vec![a, b]);
            }
            if j[a][b] != j[b][a] {
                fail(Law::JoinCommutative, vec![a, b]);
            }
            if m[a][j[a][b]] != a || j[a][m[a][b]] != a {
                fail(Law::Absorption, vec![a, b]);
            }
            if x[a][b] != x[b][a] {
                fail(Law::TimesCommutative, vec![a, b]);
            }
            for c in 0..n {
                if m[a][m[b][c]] != m[m[a][b]][c] {
                    fail(Law::MeetAssociative, vec![a, b, c]);
                }
                if j[a][j[b][c]] != j[j[a][b]][c] {
                    fail(Law::JoinAssociative, vec![a, b, c]);
                }
                if x[a][x[b][c]] != x[x[a][b]][c] {
                    fail(Law::TimesAssociative, vec![a, b, c]);
                }
                if leq(x[a][b], c) != leq(a, r[b][c]) {
                    fail(Law::Residuation, vec![a, b, c]);
                }
            }
        }
    }
    Ok(report)
}

/// A finite FL_ew algebra whose tables passed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    tables: FiniteTables,
}

impl FiniteTable {
    pub fn new(tables: FiniteTables) -> Result<FiniteTable> {
        let report = validate_finite_algebra(&tables)?;
        if !report.is_valid() {
            return Err(Error::InvalidAlgebra(report.to_string()));
        }
        Ok(FiniteTable { tables })
    }

    pub fn tables(&self) -> &FiniteTables {
        &self.tables
    }

    pub fn size(&self) -> usize {
        self.tables.size()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.tables.meet[a][b] == a
    }

    pub fn label(&self, i: usize) -> String {
        match &self.tables.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.tables.labels.as_ref()?.iter().position(|l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Algebra {
    /// `[0,1]_Ł` restricted to rationals.
    StdMv,
    /// `[0,1]_G` restricted to rationals.
    StdGodel,
    /// `[0,1]_Π` restricted to rationals.
    StdProduct,
    /// `{0, 1/(n-1), ..., 1}` with Łukasiewicz operations, `n >= 2`.
    MvN(u32),
    /// `{0} ∪ {a^t : t ∈ ℚ≥0}` inside `[0,1]_Π`, represented by exponents.
    ExpChain,
    FiniteTable(Arc<FiniteTable>),
}

impl Algebra {
    pub fn mv_n(n: u32) -> Result<Algebra> {
        if n < 2 {
            return Err(Error::InvalidAlgebra(format!("MV_n needs n >= 2, got {n}")));
        }
        Ok(Algebra::MvN(n))
    }

    pub fn finite(tables: FiniteTables) -> Result<Algebra> {
        Ok(Algebra::FiniteTable(Arc::new(FiniteTable::new(tables)?)))
    }

    pub fn name(&self) -> String {
        match self {
            Algebra::StdMv => "std-mv".into(),
            Algebra::StdGodel => "std-godel".into(),
            Algebra::StdProduct => "std-product".into(),
            Algebra::MvN(n) => format!("mv-{n}"),
            Algebra::ExpChain => "exp-chain".into(),
            Algebra::FiniteTable(t) => format!("finite-table({})", t.size()),
        }
    }

    /// Parses the short names used on the command line (`std-mv`, `mv-3`, ...).
    pub fn from_name(name: &str) -> Result<Algebra> {
        match name {
            "std-mv" => Ok(Algebra::StdMv),
            "std-godel" => Ok(Algebra::StdGodel),
            "std-product" => Ok(Algebra::StdProduct),
            "exp-chain" => Ok(Algebra::ExpChain),
            _ => {
                if let Some(n) = name.strip_prefix("mv-") {
                    let n: u32 = n
                        .parse()
                        .map_err(|_| Error::Format(format!("bad algebra name {name:?}")))?;
                    return Algebra::mv_n(n);
                }
                Err(Error::Format(format!("unknown algebra {name:?}")))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Algebra::MvN(_) | Algebra::FiniteTable(_))
    }

    /// All elements in increasing order, for the finite algebras.
    pub fn elements(&self) -> Option<Vec<Value>> {
        match self {
            Algebra::MvN(n) => Some(
                (0..*n)
                    .map(|i| Value::Rat(rat(i as i64, (*n - 1) as i64)))
                    .collect(),
            ),
            Algebra::FiniteTable(t) => Some((0..t.size()).map(Value::Fin).collect()),
            _ => None,
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            Algebra::ExpChain => Value::Exp(Exp::Zero),
            Algebra::FiniteTable(t) => Value::Fin(t.tables.zero),
            _ => Value::Rat(Rational::zero()),
        }
    }

    pub fn one(&self) -> Value {
        match self {
            Algebra::ExpChain => Value::Exp(Exp::unit()),
            Algebra::FiniteTable(t) => Value::Fin(t.tables.one),
            _ => Value::Rat(Rational::one()),
        }
    }

    pub fn is_one(&self, v: &Value) -> bool {
        *v == self.one()
    }

    /// Checks that `v` belongs to this algebra's carrier.
    pub fn check(&self, v: &Value) -> Result<()> {
        match (self, v) {
            (Algebra::StdMv | Algebra::StdGodel | Algebra::StdProduct, Value::Rat(r)) => {
                if scalar::in_unit_interval(r) {
                    Ok(())
                } else {
                    Err(Error::OutOfRange(format!("{r} is not in [0,1]")))
                }
            }
            (Algebra::MvN(n), Value::Rat(r)) => {
                if !scalar::in_unit_interval(r) {
                    return Err(Error::OutOfRange(format!("{r} is not in [0,1]")));
                }
                let scaled = r * Rational::from_integer(BigInt::from(*n - 1));
                if scaled.is_integer() {
                    Ok(())
                } else {
                    Err(Error::OutOfRange(format!("{r} is not an element of MV_{n}")))
                }
            }
            (Algebra::ExpChain, Value::Exp(Exp::Zero)) => Ok(()),
            (Algebra::ExpChain, Value::Exp(Exp::Pow(t))) => {
                if *t >= Rational::zero() {
                    Ok(())
                } else {
                    Err(Error::OutOfRange(format!("negative exponent {t}")))
                }
            }
            (Algebra::FiniteTable(t), Value::Fin(i)) => {
                if *i < t.size() {
                    Ok(())
                } else {
                    Err(Error::OutOfRange(format!("element #{i} outside carrier of size {}", t.size())))
                }
            }
            _ => Err(Error::CarrierMismatch(format!(
                "value {v} does not belong to {}",
                self.name()
            ))),
        }
    }

    fn rats<'v>(&self, a: &'v Value, b: &'v Value) -> Result<(&'v Rational, &'v Rational)> {
        self.check(a)?;
        self.check(b)?;
        Ok((a.as_rational().unwrap(), b.as_rational().unwrap()))
    }

    /// Applies a binary connective.
    pub fn op(&self, conn: Connective, a: &Value, b: &Value) -> Result<Value> {
        use Connective::*;
        match self {
            Algebra::StdMv | Algebra::MvN(_) => {
                let (x, y) = self.rats(a, b)?;
                Ok(Value::Rat(match conn {
                    Meet => scalar::meet(x, y),
                    Join => scalar::join(x, y),
                    Times => scalar::luk_times(x, y),
                    Implies => scalar::luk_implies(x, y),
                }))
            }
            Algebra::StdGodel => {
                let (x, y) = self.rats(a, b)?;
                Ok(Value::Rat(match conn {
                    Meet => scalar::meet(x, y),
                    Join => scalar::join(x, y),
                    Times => scalar::godel_times(x, y),
                    Implies => scalar::godel_implies(x, y),
                }))
            }
            Algebra::StdProduct => {
                let (x, y) = self.rats(a, b)?;
                Ok(Value::Rat(match conn {
                    Meet => scalar::meet(x, y),
                    Join => scalar::join(x, y),
                    Times => scalar::product_times(x, y),
                    Implies => scalar::product_implies(x, y),
                }))
            }
            Algebra::ExpChain => {
                self.check(a)?;
                self.check(b)?;
                let (x, y) = (a.as_exp().unwrap(), b.as_exp().unwrap());
                Ok(Value::Exp(exp_op(conn, x, y)))
            }
            Algebra::FiniteTable(t) => {
                self.check(a)?;
                self.check(b)?;
                let (Value::Fin(i), Value::Fin(j)) = (a, b) else {
                    unreachable!("checked above")
                };
                let tab = &t.tables;
                Ok(Value::Fin(match conn {
                    Meet => tab.meet[*i][*j],
                    Join => tab.join[*i][*j],
                    Times => tab.times[*i][*j],
                    Implies => tab.residuum[*i][*j],
                }))
            }
        }
    }

    /// Lattice order.
    pub fn leq(&self, a: &Value, b: &Value) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (a, b) {
            (Value::Rat(x), Value::Rat(y)) => x <= y,
            (Value::Exp(x), Value::Exp(y)) => x <= y,
            (Value::Fin(i), Value::Fin(j)) => match self {
                Algebra::FiniteTable(t) => t.leq(*i, *j),
                _ => unreachable!(),
            },
            _ => unreachable!("carrier checked"),
        })
    }

    pub fn lt(&self, a: &Value, b: &Value) -> Result<bool> {
        Ok(self.leq(a, b)? && a != b)
    }

    /// Meet of a finite family; the empty meet is `1`.
    pub fn meet_all<'v, I: IntoIterator<Item = &'v Value>>(&self, items: I) -> Result<Value> {
        let mut acc = self.one();
        for v in items {
            acc = self.op(Connective::Meet, &acc, v)?;
        }
        Ok(acc)
    }

    /// Join of a finite family; the empty join is `0`.
    pub fn join_all<'v, I: IntoIterator<Item = &'v Value>>(&self, items: I) -> Result<Value> {
        let mut acc = self.zero();
        for v in items {
            acc = self.op(Connective::Join, &acc, v)?;
        }
        Ok(acc)
    }

    /// `a^n` with the default product cap.
    pub fn power(&self, a: &Value, n: &BigUint) -> Result<Value> {
        self.power_with_cap(a, n, DEFAULT_PRODUCT_POWER_CAP)
    }

    pub fn power_with_cap(&self, a: &Value, n: &BigUint, product_cap: u64) -> Result<Value> {
        self.check(a)?;
        if n.is_zero() {
            return Ok(self.one());
        }
        match (self, a) {
            (Algebra::StdMv | Algebra::MvN(_), Value::Rat(x)) => Ok(Value::Rat(scalar::luk_power(
                x,
                Rational::from_integer(BigInt::from(n.clone())),
            ))),
            (Algebra::StdGodel, Value::Rat(_)) => Ok(a.clone()),
            (Algebra::StdProduct, Value::Rat(x)) => {
                let small = n.to_u64().filter(|k| *k <= product_cap).ok_or_else(|| {
                    Error::Resource(format!(
                        "product power exponent {n} exceeds cap {product_cap}; use ExpChain for large exponents"
                    ))
                })?;
                let e = i32::try_from(small).map_err(|_| {
                    Error::Resource("exponent does not fit; use ExpChain for large exponents".into())
                })?;
                Ok(Value::Rat(num_traits::Pow::pow(x, e)))
            }
            (Algebra::ExpChain, Value::Exp(Exp::Zero)) => Ok(a.clone()),
            (Algebra::ExpChain, Value::Exp(Exp::Pow(t))) => Ok(Value::Exp(Exp::Pow(
                t * Rational::from_integer(BigInt::from(n.clone())),
            ))),
            (Algebra::FiniteTable(_), Value::Fin(_)) => self.finite_power(a, n),
            _ => unreachable!("carrier checked"),
        }
    }

    /// Powers in a finite algebra are eventually periodic: walk the orbit
    /// until an element repeats, then index into the cycle.
    fn finite_power(&self, a: &Value, n: &BigUint) -> Result<Value> {
        let mut orbit: Vec<Value> = vec![a.clone()];
        let mut seen: HashMap<Value, usize> = HashMap::new();
        seen.insert(a.clone(), 0);
        loop {
            let k = orbit.len();
            if BigUint::from(k) >= *n {
                return Ok(orbit[n.to_usize().unwrap() - 1].clone());
            }
            let next = self.op(Connective::Times, &orbit[k - 1], a)?;
            if let Some(&start) = seen.get(&next) {
                // orbit[start..] repeats with period k - start; orbit[i] = a^(i+1)
                let period = k - start;
                let idx = n - BigUint::from(1u32) - BigUint::from(start);
                let off = (idx % BigUint::from(period)).to_usize().unwrap();
                return Ok(orbit[start + off].clone());
            }
            seen.insert(next.clone(), k);
            orbit.push(next);
        }
    }

    /// Linear algebras: everything except user tables that are not chains.
    pub fn is_chain(&self) -> bool {
        match self {
            Algebra::FiniteTable(t) => {
                let n = t.size();
                (0..n).all(|a| (0..n).all(|b| t.leq(a, b) || t.leq(b, a)))
            }
            _ => true,
        }
    }
}

fn exp_op(conn: Connective, x: &Exp, y: &Exp) -> Exp {
    match conn {
        Connective::Meet => std::cmp::min(x, y).clone(),
        Connective::Join => std::cmp::max(x, y).clone(),
        Connective::Times => match (x, y) {
            (Exp::Pow(s), Exp::Pow(t)) => Exp::Pow(s + t),
            _ => Exp::Zero,
        },
        Connective::Implies => match (x, y) {
            (Exp::Zero, _) => Exp::unit(),
            (_, Exp::Zero) => Exp::Zero,
            (Exp::Pow(s), Exp::Pow(t)) => {
                if t > s {
                    Exp::Pow(t - s)
                } else {
                    Exp::unit()
                }
            }
        },
    }
}

/// `op_apply` of the operation table.
pub fn op_apply(alg: &Algebra, conn: Connective, a: &Value, b: &Value) -> Result<Value> {
    alg.op(conn, a, b)
}

pub fn power(alg: &Algebra, a: &Value, n: u64) -> Result<Value> {
    alg.power(a, &BigUint::from(n))
}

pub fn leq(alg: &Algebra, a: &Value, b: &Value) -> Result<bool> {
    alg.leq(a, b)
}

/// The smallest `n` with `a^n = 0` in the standard MV algebra, for `a < 1`:
/// `ceil(1 / (1 - a))`.
pub fn luk_nilpotency_index(a: &Rational) -> Option<BigInt> {
    if *a >= Rational::one() {
        return None;
    }
    let inv = Rational::one() / (Rational::one() - a);
    Some(inv.ceil().to_integer())
}

/// Exponent `n` with `a^n = v` in the standard MV algebra, when it is a
/// natural number and `v > 0` (so that it is determined).
pub fn luk_log(a: &Rational, v: &Rational) -> Option<BigUint> {
    if *a >= Rational::one() || v.is_zero() {
        return None;
    }
    let n = (Rational::one() - v) / (Rational::one() - a);
    if n.is_integer() && n >= Rational::zero() {
        n.to_integer().to_biguint()
    } else {
        None
    }
}

/// Exponent `n` with `base^n = v` in the power chain, when it is a natural number.
pub fn exp_log(base: &Exp, v: &Exp) -> Option<BigUint> {
    match (base, v) {
        (Exp::Pow(s), Exp::Pow(t)) if !s.is_zero() => {
            let n = t / s;
            if n.is_integer() {
                n.to_integer().to_biguint()
            } else {
                None
            }
        }
        _ => None,
    }
}
