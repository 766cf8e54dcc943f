//! Modal formulas: AST, concrete syntax, subformulas and substitution.
//!
//! The AST is canonical: negation, bi-implication and powers are abbreviations
//! expanded by the parser (`~f` is `f -> 0`, `f <-> g` is
//! `(f -> g) * (g -> f)`, `f^n` is the `n`-fold right-nested product).
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! iff     := imp ( "<->" imp )*            left associative
//! imp     := or ( "->" imp )?              right associative
//! or      := and ( "\/" and )*
//! and     := times ( "/\" times )*
//! times   := power ( "*" power )*
//! power   := unary ( "^" NAT )*
//! unary   := ( "~" | "[]" | "<>" ) unary | atom
//! atom    := "0" | "1" | IDENT | "(" iff ")"
//! ```
//!
//! The Unicode spellings `¬ □ ◇ · ∧ ∨ → ↔` are accepted as well.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;

use crate::error::{Error, Result};

/// Largest exponent the parser will expand into an explicit product.
pub const MAX_PARSED_EXPONENT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Const0,
    Const1,
    Var(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Times(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

/// The four binary connectives of the residuated lattice signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    Meet,
    Join,
    Times,
    Implies,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::Meet,
        Connective::Join,
        Connective::Times,
        Connective::Implies,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Meet => "/\\",
            Connective::Join => "\\/",
            Connective::Times => "*",
            Connective::Implies => "->",
        }
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        let name = name.into();
        debug_assert!(is_identifier(&name), "bad variable name {name:?}");
        Formula::Var(name)
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn times(l: Formula, r: Formula) -> Formula {
        Formula::Times(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }

    /// `f -> 0`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::implies(f, Formula::Const0)
    }

    /// `(l -> r) * (r -> l)`
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::times(
            Formula::implies(l.clone(), r.clone()),
            Formula::implies(r, l),
        )
    }

    /// `n`-fold right-nested product; `n = 0` yields the constant `1`.
    pub fn power(f: Formula, n: u64) -> Formula {
        if n == 0 {
            return Formula::Const1;
        }
        let mut acc = f.clone();
        for _ in 1..n {
            acc = Formula::times(f.clone(), acc);
        }
        acc
    }

    /// `n`-fold box prefix.
    pub fn box_n(f: Formula, n: usize) -> Formula {
        (0..n).fold(f, |acc, _| Formula::boxed(acc))
    }

    /// Left-nested conjunction; `None` for an empty input.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty input.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    pub fn binary(conn: Connective, l: Formula, r: Formula) -> Formula {
        match conn {
            Connective::Meet => Formula::and(l, r),
            Connective::Join => Formula::or(l, r),
            Connective::Times => Formula::times(l, r),
            Connective::Implies => Formula::implies(l, r),
        }
    }

    /// Splits a binary node into its connective and operands.
    pub fn as_binary(&self) -> Option<(Connective, &Formula, &Formula)> {
        match self {
            Formula::And(l, r) => Some((Connective::Meet, l, r)),
            Formula::Or(l, r) => Some((Connective::Join, l, r)),
            Formula::Times(l, r) => Some((Connective::Times, l, r)),
            Formula::Implies(l, r) => Some((Connective::Implies, l, r)),
            _ => None,
        }
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Box(_) | Formula::Diamond(_))
    }

    /// Direct children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Const0 | Formula::Const1 | Formula::Var(_) => vec![],
            Formula::Box(f) | Formula::Diamond(f) => vec![f],
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Times(l, r)
            | Formula::Implies(l, r) => vec![l, r],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Box(f) | Formula::Diamond(f) => 1 + f.modal_depth(),
            _ => self
                .children()
                .iter()
                .map(|c| c.modal_depth())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn is_propositional(&self) -> bool {
        self.modal_depth() == 0
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Fully parenthesised concrete syntax.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_into(&self, s: &mut String) {
        match self {
            Formula::Const0 => s.push('0'),
            Formula::Const1 => s.push('1'),
            Formula::Var(v) => s.push_str(v),
            Formula::Box(f) => {
                s.push_str("([] ");
                f.render_into(s);
                s.push(')');
            }
            Formula::Diamond(f) => {
                s.push_str("(<> ");
                f.render_into(s);
                s.push(')');
            }
            _ => {
                let (conn, l, r) = self.as_binary().expect("binary node");
                s.push('(');
                l.render_into(s);
                s.push(' ');
                s.push_str(conn.symbol());
                s.push(' ');
                r.render_into(s);
                s.push(')');
            }
        }
    }

    /// `SFm(f)`: the formula together with all of its subterms.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        for c in self.children() {
            c.collect_subformulas(out);
        }
        out.insert(self.clone());
    }

    /// `PSFm(f)`: subformulas reachable without passing under a modality.
    /// Modal subformulas are kept as opaque atoms.
    pub fn prop_subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_prop_subformulas(&mut out);
        out
    }

    fn collect_prop_subformulas(&self, out: &mut BTreeSet<Formula>) {
        match self {
            Formula::Box(_) | Formula::Diamond(_) => {
                out.insert(self.clone());
            }
            _ => {
                for c in self.children() {
                    c.collect_prop_subformulas(out);
                }
                out.insert(self.clone());
            }
        }
    }

    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Const0 | Formula::Const1 => self.clone(),
            Formula::Box(f) => Formula::boxed(f.substitute(map)),
            Formula::Diamond(f) => Formula::diamond(f.substitute(map)),
            _ => {
                let (conn, l, r) = self.as_binary().expect("binary node");
                Formula::binary(conn, l.substitute(map), r.substitute(map))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Structural deduplication that keeps first occurrences in order.
pub fn dedup(formulas: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    formulas
        .into_iter()
        .collect::<IndexSet<_>>()
        .into_iter()
        .collect()
}

pub fn vars_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.collect_vars(&mut out);
    }
    out
}

pub fn subformulas_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.collect_subformulas(&mut out);
    }
    out
}

/// `{ []^i g : g in premises, 0 <= i <= k }`, ordered by `i` then by input order.
pub fn box_prefix(premises: &[Formula], k: usize) -> Vec<Formula> {
    let mut out = IndexSet::new();
    for i in 0..=k {
        for g in premises {
            out.insert(Formula::box_n(g.clone(), i));
        }
    }
    out.into_iter().collect()
}

/// Returns a variable name not occurring in `used`, trying `base` first and
/// then `base1`, `base2`, ...
pub fn fresh_variable(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !used.contains(c))
        .expect("infinitely many candidates")
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Neg,
    BoxOp,
    DiamondOp,
    Times,
    And,
    Or,
    Implies,
    Iff,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let starts = |i: usize, pat: &str| {
        let mut k = i;
        for pc in pat.chars() {
            match chars.get(k) {
                Some(&(_, c)) if c == pc => k += 1,
                _ => return false,
            }
        }
        true
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = if starts(i, "<->") {
            (Tok::Iff, 3)
        } else if starts(i, "->") {
            (Tok::Implies, 2)
        } else if starts(i, "[]") {
            (Tok::BoxOp, 2)
        } else if starts(i, "<>") {
            (Tok::DiamondOp, 2)
        } else if starts(i, "/\\") {
            (Tok::And, 2)
        } else if starts(i, "\\/") {
            (Tok::Or, 2)
        } else {
            match c {
                '~' | '¬' => (Tok::Neg, 1),
                '□' => (Tok::BoxOp, 1),
                '◇' => (Tok::DiamondOp, 1),
                '*' | '·' => (Tok::Times, 1),
                '∧' => (Tok::And, 1),
                '∨' => (Tok::Or, 1),
                '→' => (Tok::Implies, 1),
                '↔' => (Tok::Iff, 1),
                '^' => (Tok::Caret, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                c if c.is_ascii_digit() => {
                    let mut k = i;
                    let mut s = String::new();
                    while let Some(&(_, d)) = chars.get(k) {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        s.push(d);
                        k += 1;
                    }
                    let len = k - i;
                    (Tok::Num(s), len)
                }
                c if c.is_ascii_alphabetic() => {
                    let mut k = i;
                    let mut s = String::new();
                    while let Some(&(_, d)) = chars.get(k) {
                        if !(d.is_ascii_alphanumeric() || d == '_') {
                            break;
                        }
                        s.push(d);
                        k += 1;
                    }
                    let len = k - i;
                    (Tok::Ident(s), len)
                }
                other => return Err(Error::syntax(pos, format!("unexpected character {other:?}"))),
            }
        };
        out.push((pos, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.times()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.times()?);
        }
        Ok(lhs)
    }

    fn times(&mut self) -> Result<Formula> {
        let mut lhs = self.power()?;
        while self.eat(&Tok::Times) {
            lhs = Formula::times(lhs, self.power()?);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Formula> {
        let mut base = self.unary()?;
        while self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            let n = match self.peek() {
                Some(Tok::Num(s)) => s.clone(),
                _ => return Err(Error::syntax(pos, "expected exponent after '^'")),
            };
            self.at += 1;
            let n: u64 = n
                .parse()
                .map_err(|_| Error::syntax(pos, "exponent too large"))?;
            if n == 0 {
                return Err(Error::syntax(pos, "power exponent must be at least 1"));
            }
            if n > MAX_PARSED_EXPONENT {
                return Err(Error::syntax(pos, "exponent too large to expand"));
            }
            base = Formula::power(base, n);
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Neg) => {
                self.at += 1;
                Ok(Formula::neg(self.unary()?))
            }
            Some(Tok::BoxOp) => {
                self.at += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Tok::DiamondOp) => {
                self.at += 1;
                Ok(Formula::diamond(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let pos = self.pos();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(s)) => {
                self.at += 1;
                match s.as_str() {
                    "0" => Ok(Formula::Const0),
                    "1" => Ok(Formula::Const1),
                    _ => Err(Error::syntax(pos, format!("unexpected number {s}"))),
                }
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Formula::Var(name))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(Error::syntax(self.pos(), "expected ')'"));
                }
                Ok(f)
            }
            Some(t) => Err(Error::syntax(pos, format!("unexpected token {t:?}"))),
            None => Err(Error::syntax(pos, "unexpected end of input")),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    if p.at != p.toks.len() {
        return Err(Error::syntax(p.pos(), "trailing input"));
    }
    Ok(f)
}

/// Parses a premise list: formulas separated by `;` or newlines. Lines
/// starting with `#` are ignored.
pub fn parse_list(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for part in line.split(';') {
            if part.trim().is_empty() {
                continue;
            }
            out.push(parse(part)?);
        }
    }
    Ok(dedup(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn negation_is_implication_to_zero() {
        assert_eq!(p("~p"), Formula::implies(v("p"), Formula::Const0));
    }

    #[test]
    fn biimplication_expands_to_product() {
        assert_eq!(
            p("p <-> q"),
            Formula::times(
                Formula::implies(v("p"), v("q")),
                Formula::implies(v("q"), v("p"))
            )
        );
    }

    #[test]
    fn power_is_right_nested_product() {
        assert_eq!(
            p("p^3"),
            Formula::times(v("p"), Formula::times(v("p"), v("p")))
        );
        assert_eq!(p("p^1"), v("p"));
    }

    #[test]
    fn zero_exponent_is_rejected() {
        match parse("p^0") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("p -> ") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse("p $ q") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse("(p * q").is_err());
        assert!(parse("2").is_err());
        assert!(parse("p q").is_err());
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::boxed(v("p")).render(), "([] p)");
        assert_eq!(Formula::neg(v("p")).render(), "(p -> 0)");
        assert_eq!(Formula::times(v("p"), v("q")).render(), "(p * q)");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("p -> q -> r"), p("p -> (q -> r)"));
        assert_eq!(p("p * q /\\ r \\/ s -> t"), p("(((p * q) /\\ r) \\/ s) -> t"));
        assert_eq!(p("[]p * q"), p("([]p) * q"));
        assert_eq!(p("~[]0 -> ([]p <-> <>p)"), p("(~([]0)) -> (([]p) <-> (<>p))"));
        assert_eq!(p("([]x)^2 * z"), p("(([]x) * ([]x)) * z"));
        assert_eq!(p("□p → ◇q ∧ ¬r"), p("[]p -> (<>q /\\ ~r)"));
    }

    #[test]
    fn subformula_examples() {
        let f = Formula::boxed(Formula::times(v("p"), v("q")));
        let expected: BTreeSet<_> = [
            v("p"),
            v("q"),
            Formula::times(v("p"), v("q")),
            f.clone(),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.subformulas(), expected);
        assert_eq!(v("p").subformulas(), [v("p")].into_iter().collect());
        assert_eq!(
            Formula::Const0.subformulas(),
            [Formula::Const0].into_iter().collect()
        );
    }

    #[test]
    fn prop_subformula_examples() {
        let bp = Formula::boxed(v("p"));
        let f = Formula::implies(bp.clone(), v("q"));
        let expected: BTreeSet<_> = [bp.clone(), v("q"), f.clone()].into_iter().collect();
        assert_eq!(f.prop_subformulas(), expected);
        let g = Formula::boxed(Formula::times(v("p"), v("q")));
        assert_eq!(g.prop_subformulas(), [g.clone()].into_iter().collect());
        assert_eq!(v("p").prop_subformulas(), [v("p")].into_iter().collect());
    }

    #[test]
    fn substitution_examples() {
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), Formula::boxed(v("r")));
        assert_eq!(p("p -> q").substitute(&m), p("[]r -> q"));
        assert_eq!(p("[]p").substitute(&BTreeMap::new()), p("[]p"));
        let mut z = BTreeMap::new();
        z.insert("p".to_string(), Formula::Const0);
        assert_eq!(p("p * p").substitute(&z), p("0 * 0"));
    }

    #[test]
    fn box_prefix_examples() {
        assert_eq!(box_prefix(&[v("p")], 2), vec![v("p"), p("[]p"), p("[][]p")]);
        assert_eq!(box_prefix(&[v("p"), v("q")], 0), vec![v("p"), v("q")]);
        assert!(box_prefix(&[], 5).is_empty());
    }

    #[test]
    fn list_parsing() {
        let l = parse_list("p; q\n# comment\n[]p ; p").unwrap();
        assert_eq!(l, vec![v("p"), v("q"), p("[]p")]);
    }

    #[test]
    fn fresh_names() {
        let used: BTreeSet<String> = ["p", "p1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_variable("p", &used), "p2");
        assert_eq!(fresh_variable("q", &used), "q");
    }

    #[test]
    fn depth_and_counts() {
        let f = p("[](p * <>q) -> r");
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.node_count(), 7);
        assert_eq!(f.vars().len(), 3);
        assert!(!f.is_propositional());
    }
}
