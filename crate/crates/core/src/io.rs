//! JSON formats for algebras, frames, models, verdicts and PCP instances.
//!
//! Rationals are strings (`"1/2"`, `"1"`); power-chain values are
//! `{"pow": "p/q"}` or `"zero"`; finite-table values are labels or indices.

use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Map, Value as Json};

use crate::algebra::{parse_rational, Algebra, Exp, FiniteTable, FiniteTables, Value};
use crate::error::{Error, Result};
use crate::kripke::{KripkeFrame, KripkeModel, Verdict, Witness};
use crate::pcp::{Numeral, PcpInstance};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn field<'a>(obj: &'a Json, key: &str) -> Result<&'a Json> {
    obj.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn as_str<'a>(v: &'a Json, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Json, what: &str) -> Result<&'a Vec<Json>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn table(v: &Json, what: &str) -> Result<Vec<Vec<usize>>> {
    as_array(v, what)?
        .iter()
        .map(|row| {
            as_array(row, what)?
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|c| c as usize)
                        .ok_or_else(|| bad(format!("{what} entries must be indices")))
                })
                .collect()
        })
        .collect()
}

pub fn algebra_to_json(alg: &Algebra) -> Json {
    match alg {
        Algebra::MvN(n) => json!({"kind": "mv-n", "n": n}),
        Algebra::FiniteTable(t) => {
            let tb = t.tables();
            let mut tables = json!({
                "meet": tb.meet, "join": tb.join, "times": tb.times,
                "residuum": tb.residuum, "zero": tb.zero, "one": tb.one,
            });
            if let Some(l) = &tb.labels {
                tables["labels"] = json!(l);
            }
            json!({"kind": "finite-table", "tables": tables})
        }
        other => json!({"kind": other.name()}),
    }
}

/// Accepts `{"kind": …}` objects and bare names such as `"mv-3"`.
pub fn algebra_from_json(v: &Json) -> Result<Algebra> {
    if let Some(name) = v.as_str() {
        return Algebra::from_name(name);
    }
    let kind = as_str(field(v, "kind")?, "algebra kind")?;
    match kind {
        "mv-n" => {
            let n = field(v, "n")?
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| bad("`n` must be a small natural number"))?;
            Algebra::mv_n(n)
        }
        "finite-table" => {
            let t = field(v, "tables")?;
            let idx = |k: &str| -> Result<usize> {
                field(t, k)?
                    .as_u64()
                    .map(|i| i as usize)
                    .ok_or_else(|| bad(format!("`{k}` must be an index")))
            };
            let labels = match t.get("labels") {
                None | Some(Json::Null) => None,
                Some(l) => Some(
                    as_array(l, "labels")?
                        .iter()
                        .map(|s| as_str(s, "label").map(str::to_string))
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            Algebra::finite(FiniteTables {
                meet: table(field(t, "meet")?, "meet")?,
                join: table(field(t, "join")?, "join")?,
                times: table(field(t, "times")?, "times")?,
                residuum: table(field(t, "residuum")?, "residuum")?,
                zero: idx("zero")?,
                one: idx("one")?,
                labels,
            })
        }
        name => Algebra::from_name(name),
    }
}

pub fn value_to_json(alg: &Algebra, v: &Value) -> Json {
    match v {
        Value::Rat(r) => json!(r.to_string()),
        Value::Exp(Exp::Zero) => json!("zero"),
        Value::Exp(Exp::Pow(t)) => json!({"pow": t.to_string()}),
        Value::Fin(i) => match alg {
            Algebra::FiniteTable(t) if t.tables().labels.is_some() => json!(t.label(*i)),
            _ => json!(i),
        },
    }
}

pub fn value_from_json(alg: &Algebra, v: &Json) -> Result<Value> {
    let out = match alg {
        Algebra::ExpChain => match v {
            Json::String(s) if s == "zero" => Value::Exp(Exp::Zero),
            Json::Object(o) => {
                let t = o.get("pow").ok_or_else(|| bad("power values need a `pow` field"))?;
                Value::Exp(Exp::Pow(parse_rational(as_str(t, "exponent")?)?))
            }
            _ => return Err(bad(format!("not a power-chain value: {v}"))),
        },
        Algebra::FiniteTable(t) => finite_value(t, v)?,
        _ => match v {
            Json::String(s) => Value::Rat(parse_rational(s)?),
            Json::Number(n) if n.is_u64() => Value::Rat(parse_rational(&n.to_string())?),
            _ => return Err(bad(format!("rationals are written as strings, got {v}"))),
        },
    };
    alg.check(&out)?;
    Ok(out)
}

fn finite_value(t: &Arc<FiniteTable>, v: &Json) -> Result<Value> {
    match v {
        Json::Number(n) => n
            .as_u64()
            .map(|i| Value::Fin(i as usize))
            .ok_or_else(|| bad(format!("bad element index {v}"))),
        Json::String(s) => t
            .index_of_label(s)
            .map(Value::Fin)
            .ok_or_else(|| bad(format!("unknown element label {s:?}"))),
        _ => Err(bad(format!("not a finite-table element: {v}"))),
    }
}

pub fn frame_to_json(fr: &KripkeFrame) -> Json {
    let edges: Vec<Json> = fr
        .edges()
        .into_iter()
        .map(|(a, b)| json!([fr.name(a), fr.name(b)]))
        .collect();
    json!({"worlds": fr.names(), "edges": edges})
}

pub fn frame_from_json(v: &Json) -> Result<KripkeFrame> {
    let worlds = as_array(field(v, "worlds")?, "worlds")?
        .iter()
        .map(|w| as_str(w, "world name").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let edges = match v.get("edges") {
        None => Vec::new(),
        Some(e) => as_array(e, "edges")?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((as_str(a, "edge end")?.to_string(), as_str(b, "edge end")?.to_string())),
                _ => Err(bad("edges are [from, to] pairs")),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    KripkeFrame::new(&worlds, &edges)
}

pub fn model_to_json(m: &KripkeModel) -> Json {
    let fr = m.frame();
    let mut valuation = Map::new();
    for w in fr.worlds() {
        let row: Map<String, Json> = m
            .vars()
            .iter()
            .zip(m.row(w))
            .map(|(v, val)| (v.clone(), value_to_json(m.algebra(), val)))
            .collect();
        valuation.insert(fr.name(w).to_string(), Json::Object(row));
    }
    let mut out = frame_to_json(fr);
    out["algebra"] = algebra_to_json(m.algebra());
    out["valuation"] = Json::Object(valuation);
    out
}

/// Variables missing at some world are an error; the variable set is the
/// union over all worlds.
pub fn model_from_json(v: &Json) -> Result<KripkeModel> {
    let alg = algebra_from_json(field(v, "algebra")?)?;
    let frame = frame_from_json(v)?;
    let val = field(v, "valuation")?
        .as_object()
        .ok_or_else(|| bad("`valuation` must be an object"))?;
    for name in val.keys() {
        frame.index_of(name)?;
    }
    let mut vars: Vec<String> = Vec::new();
    for row in val.values() {
        let row = row.as_object().ok_or_else(|| bad("valuation rows must be objects"))?;
        for k in row.keys() {
            if !vars.contains(k) {
                vars.push(k.clone());
            }
        }
    }
    vars.sort();
    let mut rows = Vec::with_capacity(frame.len());
    for w in frame.worlds() {
        let name = frame.name(w);
        let row = val.get(name).and_then(Json::as_object);
        let mut out = Vec::with_capacity(vars.len());
        for var in &vars {
            let x = row
                .and_then(|r| r.get(var))
                .ok_or_else(|| bad(format!("no value for `{var}` at world `{name}`")))?;
            out.push(value_from_json(&alg, x)?);
        }
        rows.push(out);
    }
    KripkeModel::new(frame, alg, vars, rows)
}

pub fn witness_to_json(w: &Witness, alg: &Algebra) -> Json {
    let mut out = json!({
        "world": w.world,
        "formula": w.formula.render(),
        "value": value_to_json(alg, &w.value),
    });
    if let Some(m) = &w.model {
        out["frame"] = frame_to_json(m.frame());
        out["model"] = model_to_json(m);
    }
    out
}

pub fn verdict_to_json(v: &Verdict, alg: &Algebra) -> Json {
    json!({
        "holds": v.holds,
        "witness": v.witness.as_ref().map(|w| witness_to_json(w, alg)),
    })
}

fn numeral_from_json(v: &Json) -> Result<Numeral> {
    match v.as_array().map(Vec::as_slice) {
        Some([value, len]) => {
            let digits = match value {
                Json::String(s) => s.clone(),
                Json::Number(n) if n.is_u64() => n.to_string(),
                _ => return Err(bad("numeral values are decimal strings")),
            };
            let value: BigUint = digits
                .parse()
                .map_err(|_| bad(format!("bad numeral value {digits:?}")))?;
            let len = len
                .as_u64()
                .and_then(|l| usize::try_from(l).ok())
                .ok_or_else(|| bad("numeral lengths are natural numbers"))?;
            Ok(Numeral::new(value, len))
        }
        _ => Err(bad("numerals are [value, length] pairs")),
    }
}

pub fn instance_from_json(v: &Json) -> Result<PcpInstance> {
    let base = field(v, "base")?
        .as_u64()
        .and_then(|b| u32::try_from(b).ok())
        .ok_or_else(|| bad("`base` must be a natural number"))?;
    let pairs = as_array(field(v, "pairs")?, "pairs")?
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok((numeral_from_json(x)?, numeral_from_json(y)?)),
            _ => Err(bad("pairs are [x, y] numerals")),
        })
        .collect::<Result<Vec<_>>>()?;
    PcpInstance::new(base, pairs)
}

pub fn instance_to_json(p: &PcpInstance) -> Json {
    let pairs: Vec<Json> = p
        .pairs()
        .iter()
        .map(|(x, y)| json!([[x.value.to_string(), x.len], [y.value.to_string(), y.len]]))
        .collect();
    json!({"base": p.base(), "pairs": pairs})
}
