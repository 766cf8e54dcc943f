//! Finite Kripke frames and models with values in an [`Algebra`].
//!
//! Worlds are addressed by their position in the declaration order; that
//! order is also the tie-break wherever a choice has to be made.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::algebra::{Algebra, Value};
use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula};

pub type World = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    names: Vec<String>,
    index: HashMap<String, World>,
    succ: Vec<Vec<World>>,
}

impl KripkeFrame {
    pub fn new<S: AsRef<str>>(worlds: &[S], edges: &[(S, S)]) -> Result<KripkeFrame> {
        let names: Vec<String> = worlds.iter().map(|w| w.as_ref().to_string()).collect();
        let mut frame = KripkeFrame::with_names(names)?;
        for (a, b) in edges {
            let (i, j) = (frame.index_of(a.as_ref())?, frame.index_of(b.as_ref())?);
            frame.insert_edge(i, j);
        }
        Ok(frame)
    }

    pub fn with_names(names: Vec<String>) -> Result<KripkeFrame> {
        if names.is_empty() {
            return Err(Error::InvalidModel("a frame needs at least one world".into()));
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::InvalidModel("empty world name".into()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate world `{n}`")));
            }
        }
        let succ = vec![Vec::new(); names.len()];
        Ok(KripkeFrame { names, index, succ })
    }

    /// Frame on worlds named `prefix1 .. prefixN` (or `prefix0 ..` with `start = 0`).
    pub fn numbered(prefix: &str, start: usize, n: usize, edges: &[(World, World)]) -> Result<KripkeFrame> {
        let names = (start..start + n).map(|i| format!("{prefix}{i}")).collect();
        let mut f = KripkeFrame::with_names(names)?;
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::UnknownWorld(format!("#{}", a.max(b))));
            }
            f.insert_edge(a, b);
        }
        Ok(f)
    }

    fn insert_edge(&mut self, a: World, b: World) {
        if let Err(pos) = self.succ[a].binary_search(&b) {
            self.succ[a].insert(pos, b);
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> std::ops::Range<World> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w]
    }

    pub fn index_of(&self, name: &str) -> Result<World> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn check_world(&self, w: World) -> Result<()> {
        if w < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownWorld(format!("#{w}")))
        }
    }

    /// Successors in increasing index order.
    pub fn successors(&self, w: World) -> &[World] {
        &self.succ[w]
    }

    pub fn has_edge(&self, a: World, b: World) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(World, World)> {
        self.worlds()
            .flat_map(|a| self.succ[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_transitive(&self) -> bool {
        self.worlds().all(|a| {
            self.succ[a]
                .iter()
                .all(|&b| self.succ[b].iter().all(|&c| self.has_edge(a, c)))
        })
    }

    /// Heights of all worlds at once.
    pub fn heights(&self) -> Vec<Height> {
        let n = self.len();
        let mut preds = vec![Vec::new(); n];
        let mut out_deg = vec![0usize; n];
        for (a, b) in self.edges() {
            preds[b].push(a);
            out_deg[a] += 1;
        }
        let mut h: Vec<Option<u64>> = vec![None; n];
        let mut queue: VecDeque<World> = (0..n).filter(|&w| out_deg[w] == 0).collect();
        // a world is settled once all of its successors are
        while let Some(w) = queue.pop_front() {
            let hw = self.succ[w]
                .iter()
                .map(|&s| h[s].expect("successor settled") + 1)
                .max()
                .unwrap_or(0);
            h[w] = Some(hw);
            for &p in &preds[w] {
                out_deg[p] -= 1;
                if out_deg[p] == 0 {
                    queue.push_back(p);
                }
            }
        }
        h.into_iter()
            .map(|x| x.map_or(Height::Infinite, Height::Finite))
            .collect()
    }

    pub fn height(&self, w: World) -> Result<Height> {
        self.check_world(w)?;
        Ok(self.heights()[w])
    }

    /// Worlds reachable from `w`, including `w`, in index order.
    pub fn reachable(&self, w: World) -> Vec<World> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![w];
        seen[w] = true;
        while let Some(v) = stack.pop() {
            for &s in &self.succ[v] {
                if !seen[s] {
                    seen[s] = true;
                    stack.push(s);
                }
            }
        }
        self.worlds().filter(|&v| seen[v]).collect()
    }

    /// Restriction to `keep` (listed in the order the new frame should use).
    pub fn restrict(&self, keep: &[World]) -> KripkeFrame {
        let pos: HashMap<World, World> = keep.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let names = keep.iter().map(|&w| self.names[w].clone()).collect();
        let mut f = KripkeFrame::with_names(names).expect("restriction of a valid frame");
        for (i, &w) in keep.iter().enumerate() {
            for s in &self.succ[w] {
                if let Some(&j) = pos.get(s) {
                    f.insert_edge(i, j);
                }
            }
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    Finite(u64),
    Infinite,
}

impl Height {
    pub fn finite(self) -> Option<u64> {
        match self {
            Height::Finite(h) => Some(h),
            Height::Infinite => None,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => f.write_str("infinite"),
        }
    }
}

pub fn height(fr: &KripkeFrame, w: World) -> Result<Height> {
    fr.height(w)
}

pub fn is_transitive(fr: &KripkeFrame) -> bool {
    fr.is_transitive()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    frame: KripkeFrame,
    algebra: Algebra,
    vars: Vec<String>,
    var_index: HashMap<String, usize>,
    /// `valuation[w][i]` is the value of `vars[i]` at `w`.
    valuation: Vec<Vec<Value>>,
}

impl KripkeModel {
    pub fn new(
        frame: KripkeFrame,
        algebra: Algebra,
        vars: Vec<String>,
        valuation: Vec<Vec<Value>>,
    ) -> Result<KripkeModel> {
        let mut var_index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if !crate::syntax::is_identifier(v) {
                return Err(Error::InvalidModel(format!("bad variable name {v:?}")));
            }
            if var_index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("variable `{v}` declared twice")));
            }
        }
        if valuation.len() != frame.len() {
            return Err(Error::InvalidModel(format!(
                "valuation covers {} worlds, frame has {}",
                valuation.len(),
                frame.len()
            )));
        }
        for (w, row) in valuation.iter().enumerate() {
            if row.len() != vars.len() {
                return Err(Error::InvalidModel(format!(
                    "valuation at `{}` is not total",
                    frame.name(w)
                )));
            }
            for v in row {
                algebra.check(v)?;
            }
        }
        Ok(KripkeModel {
            frame,
            algebra,
            vars,
            var_index,
            valuation,
        })
    }

    /// Builds the valuation by calling `f(world, variable)`.
    pub fn from_fn<F>(frame: KripkeFrame, algebra: Algebra, vars: &[&str], mut f: F) -> Result<KripkeModel>
    where
        F: FnMut(World, &str) -> Value,
    {
        let valuation = frame
            .worlds()
            .map(|w| vars.iter().map(|v| f(w, v)).collect())
            .collect();
        KripkeModel::new(
            frame,
            algebra,
            vars.iter().map(|v| v.to_string()).collect(),
            valuation,
        )
    }

    pub fn frame(&self) -> &KripkeFrame {
        &self.frame
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn declares(&self, var: &str) -> bool {
        self.var_index.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn value(&self, w: World, var: &str) -> Result<&Value> {
        self.frame.check_world(w)?;
        let i = self
            .var_index
            .get(var)
            .ok_or_else(|| Error::UndeclaredVariable(var.to_string()))?;
        Ok(&self.valuation[w][*i])
    }

    /// Row of values at `w`, aligned with [`KripkeModel::vars`].
    pub fn row(&self, w: World) -> &[Value] {
        &self.valuation[w]
    }

    pub fn set_value(&mut self, w: World, var: &str, v: Value) -> Result<()> {
        self.frame.check_world(w)?;
        self.algebra.check(&v)?;
        let i = *self
            .var_index
            .get(var)
            .ok_or_else(|| Error::UndeclaredVariable(var.to_string()))?;
        self.valuation[w][i] = v;
        Ok(())
    }

    /// Adds a fresh variable with the given per-world values.
    pub fn with_var(mut self, var: &str, values: Vec<Value>) -> Result<KripkeModel> {
        if self.declares(var) {
            return Err(Error::VariableClash(var.to_string()));
        }
        if values.len() != self.len() {
            return Err(Error::InvalidModel(format!("`{var}` needs one value per world")));
        }
        for v in &values {
            self.algebra.check(v)?;
        }
        self.var_index.insert(var.to_string(), self.vars.len());
        self.vars.push(var.to_string());
        for (row, v) in self.valuation.iter_mut().zip(values) {
            row.push(v);
        }
        Ok(self)
    }

    /// Values of `f` at every world.
    pub fn evaluate_all(&self, f: &Formula) -> Result<Vec<Value>> {
        let alg = &self.algebra;
        let n = self.len();
        Ok(match f {
            Formula::Const0 => vec![alg.zero(); n],
            Formula::Const1 => vec![alg.one(); n],
            Formula::Var(p) => {
                let i = *self
                    .var_index
                    .get(p)
                    .ok_or_else(|| Error::UndeclaredVariable(p.clone()))?;
                self.valuation.iter().map(|row| row[i].clone()).collect()
            }
            Formula::Box(g) => {
                let inner = self.evaluate_all(g)?;
                self.frame
                    .worlds()
                    .map(|w| alg.meet_all(self.frame.successors(w).iter().map(|&s| &inner[s])))
                    .collect::<Result<_>>()?
            }
            Formula::Diamond(g) => {
                let inner = self.evaluate_all(g)?;
                self.frame
                    .worlds()
                    .map(|w| alg.join_all(self.frame.successors(w).iter().map(|&s| &inner[s])))
                    .collect::<Result<_>>()?
            }
            _ => {
                let (conn, l, r) = f.as_binary().expect("binary node");
                let (lv, rv) = (self.evaluate_all(l)?, self.evaluate_all(r)?);
                lv.iter()
                    .zip(&rv)
                    .map(|(a, b)| alg.op(conn, a, b))
                    .collect::<Result<_>>()?
            }
        })
    }

    pub fn evaluate(&self, w: World, f: &Formula) -> Result<Value> {
        self.frame.check_world(w)?;
        if self.is_small_query(f) {
            return self.evaluate_local(w, f);
        }
        Ok(self.evaluate_all(f)?.swap_remove(w))
    }

    fn is_small_query(&self, f: &Formula) -> bool {
        f.modal_depth() == 0
    }

    fn evaluate_local(&self, w: World, f: &Formula) -> Result<Value> {
        let alg = &self.algebra;
        match f {
            Formula::Const0 => Ok(alg.zero()),
            Formula::Const1 => Ok(alg.one()),
            Formula::Var(p) => self.value(w, p).cloned(),
            _ => {
                let (conn, l, r): (Connective, _, _) = f.as_binary().expect("propositional");
                alg.op(conn, &self.evaluate_local(w, l)?, &self.evaluate_local(w, r)?)
            }
        }
    }

    pub fn evaluate_named(&self, world: &str, f: &Formula) -> Result<Value> {
        self.evaluate(self.frame.index_of(world)?, f)
    }

    pub fn globally_satisfies(&self, gamma: &[Formula]) -> Result<Verdict> {
        let values: Vec<Vec<Value>> = gamma.iter().map(|g| self.evaluate_all(g)).collect::<Result<_>>()?;
        for w in self.frame.worlds() {
            for (g, vals) in gamma.iter().zip(&values) {
                if !self.algebra.is_one(&vals[w]) {
                    return Ok(Verdict::fails(Witness::new(self, w, g, vals[w].clone())));
                }
            }
        }
        Ok(Verdict::holds())
    }

    /// `Γ ⊨_M φ`: if every premise is 1 everywhere, so is the conclusion.
    pub fn consequence_witness(&self, gamma: &[Formula], phi: &Formula) -> Result<Verdict> {
        if !self.globally_satisfies(gamma)?.holds {
            return Ok(Verdict::holds());
        }
        self.globally_satisfies(std::slice::from_ref(phi))
    }

    /// Local consequence at `w`: premises all 1 at `w` force the conclusion to 1 there.
    pub fn local_consequence(&self, w: World, gamma: &[Formula], phi: &Formula) -> Result<Verdict> {
        for g in gamma {
            if !self.algebra.is_one(&self.evaluate(w, g)?) {
                return Ok(Verdict::holds());
            }
        }
        let v = self.evaluate(w, phi)?;
        if self.algebra.is_one(&v) {
            Ok(Verdict::holds())
        } else {
            Ok(Verdict::fails(Witness::new(self, w, phi, v)))
        }
    }

    /// Submodel on `keep`, in that order.
    pub fn restrict(&self, keep: &[World]) -> KripkeModel {
        KripkeModel {
            frame: self.frame.restrict(keep),
            algebra: self.algebra.clone(),
            vars: self.vars.clone(),
            var_index: self.var_index.clone(),
            valuation: keep.iter().map(|&w| self.valuation[w].clone()).collect(),
        }
    }

    /// Worlds reachable from `w`.
    pub fn generated_submodel(&self, w: World) -> Result<KripkeModel> {
        self.frame.check_world(w)?;
        Ok(self.restrict(&self.frame.reachable(w)))
    }

    /// A successor chain from `root` to a dead end, taking the least successor each time.
    pub fn extract_chain(&self, root: World) -> Result<KripkeModel> {
        if self.frame.height(root)? == Height::Infinite {
            return Err(Error::InfiniteHeight(self.frame.name(root).to_string()));
        }
        let mut chain = vec![root];
        let mut cur = root;
        while let Some(&next) = self.frame.successors(cur).first() {
            chain.push(next);
            cur = next;
        }
        Ok(self.restrict(&chain))
    }

    /// Tree of paths from `root` of length at most `depth`.
    pub fn unravel(&self, root: World, depth: usize) -> Result<KripkeModel> {
        self.unravel_bounded(root, depth, DEFAULT_UNRAVEL_LIMIT)
    }

    pub fn unravel_bounded(&self, root: World, depth: usize, max_worlds: usize) -> Result<KripkeModel> {
        self.frame.check_world(root)?;
        // (source world, path name, parent index)
        let mut nodes: Vec<(World, String, Option<usize>)> =
            vec![(root, self.frame.name(root).to_string(), None)];
        let mut level = vec![0usize];
        for _ in 0..depth {
            let mut next = Vec::new();
            for &i in &level {
                let (src, path) = (nodes[i].0, nodes[i].1.clone());
                for &s in self.frame.successors(src) {
                    if nodes.len() >= max_worlds {
                        return Err(Error::Resource(format!(
                            "unraveling exceeds {max_worlds} worlds"
                        )));
                    }
                    nodes.push((s, format!("{path}/{}", self.frame.name(s)), Some(i)));
                    next.push(nodes.len() - 1);
                }
            }
            level = next;
        }
        let names = nodes.iter().map(|n| n.1.clone()).collect();
        let mut frame = KripkeFrame::with_names(names)?;
        for (i, n) in nodes.iter().enumerate() {
            if let Some(p) = n.2 {
                frame.insert_edge(p, i);
            }
        }
        let valuation = nodes.iter().map(|n| self.valuation[n.0].clone()).collect();
        KripkeModel::new(frame, self.algebra.clone(), self.vars.clone(), valuation)
    }

    /// Valuation as `world -> variable -> value`, for reports.
    pub fn valuation_map(&self) -> BTreeMap<String, BTreeMap<String, Value>> {
        self.frame
            .worlds()
            .map(|w| {
                let row = self
                    .vars
                    .iter()
                    .cloned()
                    .zip(self.valuation[w].iter().cloned())
                    .collect();
                (self.frame.name(w).to_string(), row)
            })
            .collect()
    }
}

pub const DEFAULT_UNRAVEL_LIMIT: usize = 1 << 20;

pub fn evaluate(m: &KripkeModel, w: World, f: &Formula) -> Result<Value> {
    m.evaluate(w, f)
}

pub fn globally_satisfies(m: &KripkeModel, gamma: &[Formula]) -> Result<Verdict> {
    m.globally_satisfies(gamma)
}

pub fn consequence_witness(m: &KripkeModel, gamma: &[Formula], phi: &Formula) -> Result<Verdict> {
    m.consequence_witness(gamma, phi)
}

pub fn unravel(m: &KripkeModel, root: World, depth: usize) -> Result<KripkeModel> {
    m.unravel(root, depth)
}

pub fn extract_chain(m: &KripkeModel, root: World) -> Result<KripkeModel> {
    m.extract_chain(root)
}

pub fn generated_submodel(m: &KripkeModel, w: World) -> Result<KripkeModel> {
    m.generated_submodel(w)
}

/// A failure: `formula` takes `value < 1` at `world`, in `model` when that is
/// not the model the caller already holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub world: String,
    pub formula: Formula,
    pub value: Value,
    pub model: Option<KripkeModel>,
}

impl Witness {
    fn new(m: &KripkeModel, w: World, f: &Formula, value: Value) -> Witness {
        Witness {
            world: m.frame.name(w).to_string(),
            formula: f.clone(),
            value,
            model: None,
        }
    }

    pub fn with_model(mut self, m: KripkeModel) -> Witness {
        self.model = Some(m);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds() -> Verdict {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fails(w: Witness) -> Verdict {
        Verdict {
            holds: false,
            witness: Some(w),
        }
    }
}
