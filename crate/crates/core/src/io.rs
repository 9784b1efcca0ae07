//! JSON documents for objects, monoids, signatures and monad instances, and
//! DOT renderings of coslices, cones and instances.
//!
//! An object document is either the envelope
//! `{"category": .., "params": {..}, "object": {..}}` or the flat form with
//! the parameters and the object fields at top level. Keys are written in
//! sorted order.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::codensity::{Connecting, Construction, Coslice, MonadInstance, Setting};
use crate::error::{Error, Result};
use crate::kernel::Budget;
use crate::plugins::{
    validate, BitSet, Carrier, Category, Elem, FinObject, Monoid, Relation, Signature, Structure,
    Subcategory, Symbol, BOTTOM_LABEL,
};

/// Parses JSON text, reporting the position of syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let msg = full
            .rfind(" at line ")
            .map_or(full.as_str(), |i| &full[..i]);
        Error::Input(format!("line {}, column {}: {msg}", e.line(), e.column()))
    })
}

/// Indented JSON with sorted keys and a trailing newline. Arrays of
/// scalars stay on one line.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.is_empty() || items.iter().all(is_scalar) => {
            out.push_str(&v.to_string())
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, item)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn as_map<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| bad(format!("{what} must be a JSON object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn label_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(bad(format!("expected an element label, found {other}"))),
    }
}

fn labels(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of labels")))?
        .iter()
        .map(label_of)
        .collect()
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn usizes(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of integers")))?
        .iter()
        .map(|x| usize_of(x, what))
        .collect()
}

/// Label lookup for one carrier.
struct Names(HashMap<String, Elem>);

impl Names {
    fn new(labels: &[String]) -> Result<Self> {
        Carrier::named(labels.to_vec())?;
        Ok(Names(
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), i))
                .collect(),
        ))
    }

    fn get(&self, v: &Value) -> Result<Elem> {
        let l = label_of(v)?;
        self.0
            .get(&l)
            .copied()
            .ok_or_else(|| bad(format!("unknown element {l:?}")))
    }

    fn tuple(&self, v: &Value, arity: usize) -> Result<Vec<Elem>> {
        let items = v.as_array().ok_or_else(|| bad("tuples must be arrays"))?;
        if items.len() != arity {
            return Err(bad(format!(
                "expected a tuple of length {arity}, found {}",
                items.len()
            )));
        }
        items.iter().map(|x| self.get(x)).collect()
    }

    fn tuples(&self, v: &Value, arity: usize) -> Result<Vec<Vec<Elem>>> {
        v.as_array()
            .ok_or_else(|| bad("expected an array of tuples"))?
            .iter()
            .map(|t| self.tuple(t, arity))
            .collect()
    }
}

pub fn monoid_from_json(v: &Value) -> Result<Monoid> {
    let m = as_map(v, "monoid")?;
    let elements = labels(field(m, "elements")?, "monoid elements")?;
    let names = Names::new(&elements)?;
    let rows = field(m, "table")?
        .as_array()
        .ok_or_else(|| bad("monoid table must be an array of rows"))?;
    let table = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("monoid table rows must be arrays"))?
                .iter()
                .map(|x| names.get(x))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Monoid::new(elements, table)
}

pub fn monoid_to_json(m: &Monoid) -> Value {
    let names = m.elements();
    let table: Vec<Vec<&str>> = m
        .table()
        .iter()
        .map(|r| r.iter().map(|&k| names[k].as_str()).collect())
        .collect();
    json!({ "elements": names, "table": table })
}

/// A list of `{"name", "arity"}` entries, optionally under `"symbols"`.
pub fn signature_from_json(v: &Value) -> Result<Signature> {
    let list = match v {
        Value::Object(m) => field(m, "symbols")?,
        other => other,
    };
    let symbols: Vec<Symbol> =
        serde_json::from_value(list.clone()).map_err(|e| bad(format!("signature: {e}")))?;
    Signature::new(symbols)
}

pub fn signature_to_json(sig: &Signature) -> Value {
    serde_json::to_value(&sig.symbols).expect("symbols serialize")
}

/// Category from its name and parameters (`q`, `monoid`, `signature`).
pub fn category_from_parts(name: &str, params: &Map<String, Value>) -> Result<Category> {
    match name {
        "set" => Ok(Category::Set),
        "par" => Ok(Category::Par),
        "pos" => Ok(Category::Pos),
        "jsl" => Ok(Category::Jsl),
        "gra" => Ok(Category::Gra),
        "top" => Ok(Category::Top),
        "top0" => Ok(Category::Top0),
        "vec" => Category::vec(usize_of(field(params, "q")?, "q")?),
        "mset" => Ok(Category::MSet(monoid_from_json(field(params, "monoid")?)?)),
        "sigma_str" | "sigma" => match params.get("signature") {
            Some(s) => Ok(Category::SigmaStr(signature_from_json(s)?)),
            None => Ok(Category::SigmaStr(Signature::binary())),
        },
        other => Err(bad(format!("unknown category {other:?}"))),
    }
}

pub fn category_params(cat: &Category) -> Value {
    match cat {
        Category::Vec { q } => json!({ "q": q }),
        Category::MSet(m) => json!({ "monoid": monoid_to_json(m) }),
        Category::SigmaStr(sig) => json!({ "signature": signature_to_json(sig) }),
        _ => json!({}),
    }
}

fn strict_pairs(x: &FinObject) -> Vec<[String; 2]> {
    let n = x.len();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && x.le(a, b))
        .map(|(a, b)| [x.label(a), x.label(b)])
        .collect()
}

fn tuple_labels(x: &FinObject, r: &Relation) -> Vec<Vec<String>> {
    r.tuples()
        .iter()
        .map(|t| t.iter().map(|&v| x.label(v)).collect())
        .collect()
}

/// The object fields of a document.
pub fn object_to_json(cat: &Category, x: &FinObject) -> Value {
    let carrier = x.carrier.labels();
    match (&x.structure, cat) {
        (Structure::Set, _) => json!({ "carrier": carrier }),
        (Structure::Pointed { base }, _) => {
            let ordinary: Vec<&String> = carrier
                .iter()
                .enumerate()
                .filter(|(i, _)| i != base)
                .map(|(_, l)| l)
                .collect();
            json!({ "carrier": ordinary })
        }
        (Structure::Poset { .. }, _) => json!({ "carrier": carrier, "order": strict_pairs(x) }),
        (Structure::Semilattice { bottom, .. }, _) => {
            let mut join = Map::new();
            for a in 0..x.len() {
                let row: Map<String, Value> = (0..x.len())
                    .map(|b| (x.label(b), json!(x.label(x.join(a, b).unwrap()))))
                    .collect();
                join.insert(x.label(a), Value::Object(row));
            }
            json!({ "carrier": carrier, "bottom": x.label(*bottom), "join": join })
        }
        (Structure::Graph { edges }, _) => {
            let list: Vec<Vec<String>> = edges
                .tuples()
                .iter()
                .filter(|t| t[0] <= t[1])
                .map(|t| vec![x.label(t[0]), x.label(t[1])])
                .collect();
            json!({ "vertices": carrier, "edges": list })
        }
        (Structure::Relational { relations }, Category::SigmaStr(sig)) => {
            let rels: Map<String, Value> = sig
                .symbols
                .iter()
                .zip(relations)
                .map(|(s, r)| (s.name.clone(), json!(tuple_labels(x, r))))
                .collect();
            json!({ "carrier": carrier, "relations": rels })
        }
        (Structure::Relational { relations }, _) => {
            let rels: Map<String, Value> = relations
                .iter()
                .enumerate()
                .map(|(k, r)| (format!("R{k}"), json!(tuple_labels(x, r))))
                .collect();
            json!({ "carrier": carrier, "relations": rels })
        }
        (Structure::Vector { dim }, _) => json!({ "dim": dim }),
        (Structure::MSet { .. }, Category::MSet(m)) => {
            let action: Map<String, Value> = (0..m.len())
                .map(|a| {
                    let row: Map<String, Value> = (0..x.len())
                        .map(|p| (x.label(p), json!(x.label(x.act(a, p).unwrap()))))
                        .collect();
                    (m.elements()[a].clone(), Value::Object(row))
                })
                .collect();
            json!({ "carrier": carrier, "action": action })
        }
        (Structure::MSet { action }, _) => json!({ "carrier": carrier, "action": action }),
        (Structure::Topology { .. }, _) => {
            let opens: Vec<Vec<String>> = x
                .opens()
                .iter()
                .map(|o| o.iter().map(|p| x.label(p)).collect())
                .collect();
            json!({ "points": carrier, "opens": opens })
        }
    }
}

/// The envelope document for an object.
pub fn document_to_json(cat: &Category, x: &FinObject) -> Value {
    json!({ "category": cat.name(), "params": category_params(cat), "object": object_to_json(cat, x) })
}

fn named(x: FinObject, carrier: &[String]) -> Result<FinObject> {
    Ok(x.with_carrier(Carrier::named(carrier.to_vec())?))
}

fn jsl_from_order(carrier: &[String], le: &FinObject) -> Result<FinObject> {
    let n = carrier.len();
    let bottom = (0..n)
        .find(|&b| (0..n).all(|x| le.le(b, x)))
        .ok_or_else(|| Error::InvalidObject("order has no least element".into()))?;
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let ubs: Vec<Elem> = (0..n).filter(|&z| le.le(a, z) && le.le(b, z)).collect();
            join[a * n + b] = *ubs
                .iter()
                .find(|&&z| ubs.iter().all(|&w| le.le(z, w)))
                .ok_or_else(|| {
                    Error::InvalidObject(format!(
                        "{} and {} have no least upper bound",
                        carrier[a], carrier[b]
                    ))
                })?;
        }
    }
    named(FinObject::semilattice(n, join, bottom)?, carrier)
}

/// Reads the object fields of a document for `cat`.
pub fn object_from_json(cat: &Category, v: &Value) -> Result<FinObject> {
    let m = as_map(v, "object")?;
    let carrier_key = match cat {
        Category::Gra => "vertices",
        Category::Top | Category::Top0 => "points",
        _ => "carrier",
    };
    let carrier = match cat {
        Category::Vec { .. } => Vec::new(),
        _ => labels(field(m, carrier_key)?, carrier_key)?,
    };
    let names = Names::new(&carrier)?;
    let n = carrier.len();
    let obj = match cat {
        Category::Set => named(FinObject::set(n), &carrier)?,
        Category::Par => {
            if carrier.iter().any(|l| l == BOTTOM_LABEL) {
                return Err(bad(format!(
                    "{BOTTOM_LABEL} is reserved for the undefined value"
                )));
            }
            let mut all = vec![BOTTOM_LABEL.to_string()];
            all.extend(carrier.iter().cloned());
            named(FinObject::pointed(n), &all)?
        }
        Category::Pos => {
            let pairs = pairs_field(m, "order", &names)?;
            named(FinObject::poset(n, &pairs)?, &carrier)?
        }
        Category::Jsl => match m.get("join") {
            Some(j) => {
                let j = as_map(j, "join")?;
                let mut join = vec![0; n * n];
                for (a, row) in carrier.iter().enumerate() {
                    let row = j
                        .get(row)
                        .ok_or_else(|| bad(format!("join table has no row for {row}")))?;
                    let row = as_map(row, "join row")?;
                    for (b, col) in carrier.iter().enumerate() {
                        let entry = row.get(col).ok_or_else(|| {
                            bad(format!(
                                "join table has no entry for {} and {col}",
                                carrier[a]
                            ))
                        })?;
                        join[a * n + b] = names.get(entry)?;
                    }
                }
                let bottom = match m.get("bottom") {
                    Some(b) => names.get(b)?,
                    None => (0..n)
                        .find(|&b| (0..n).all(|x| join[b * n + x] == x))
                        .ok_or_else(|| Error::InvalidObject("join table has no bottom".into()))?,
                };
                named(FinObject::semilattice(n, join, bottom)?, &carrier)?
            }
            None => {
                let pairs = pairs_field(m, "order", &names)?;
                jsl_from_order(&carrier, &FinObject::poset(n, &pairs)?)?
            }
        },
        Category::Gra => {
            let pairs = pairs_field(m, "edges", &names)?;
            named(FinObject::graph(n, &pairs)?, &carrier)?
        }
        Category::SigmaStr(sig) => {
            let rels = match m.get("relations") {
                Some(r) => as_map(r, "relations")?.clone(),
                None => Map::new(),
            };
            for k in rels.keys() {
                if !sig.symbols.iter().any(|s| &s.name == k) {
                    return Err(bad(format!("relation {k:?} is not in the signature")));
                }
            }
            let relations = sig
                .symbols
                .iter()
                .map(|s| match rels.get(&s.name) {
                    Some(ts) => Ok(Relation::from_tuples(
                        s.arity,
                        n,
                        names.tuples(ts, s.arity)?,
                    )),
                    None => Ok(Relation::empty(s.arity, n)),
                })
                .collect::<Result<Vec<_>>>()?;
            named(FinObject::relational(n, relations), &carrier)?
        }
        Category::Vec { q } => FinObject::vector(*q, usize_of(field(m, "dim")?, "dim")?),
        Category::MSet(monoid) => {
            let act = as_map(field(m, "action")?, "action")?;
            let mut action = vec![0; monoid.len() * n];
            for (a, name) in monoid.elements().iter().enumerate() {
                match act.get(name) {
                    Some(row) => {
                        let row = as_map(row, "action row")?;
                        for (p, l) in carrier.iter().enumerate() {
                            let y = row
                                .get(l)
                                .ok_or_else(|| bad(format!("action of {name} is missing {l}")))?;
                            action[a * n + p] = names.get(y)?;
                        }
                    }
                    None if a == monoid.identity() => {
                        for p in 0..n {
                            action[a * n + p] = p;
                        }
                    }
                    None => return Err(bad(format!("action of {name} is missing"))),
                }
            }
            named(FinObject::mset(monoid, n, action)?, &carrier)?
        }
        Category::Top | Category::Top0 => match (m.get("opens"), m.get("specialization")) {
            (Some(list), _) => {
                let mut opens: Vec<BitSet> = list
                    .as_array()
                    .ok_or_else(|| bad("opens must be an array of arrays"))?
                    .iter()
                    .map(|o| {
                        let members = o
                            .as_array()
                            .ok_or_else(|| bad("an open set must be an array"))?;
                        Ok(BitSet::from_iter(
                            n,
                            members
                                .iter()
                                .map(|p| names.get(p))
                                .collect::<Result<Vec<_>>>()?,
                        ))
                    })
                    .collect::<Result<_>>()?;
                opens.push(BitSet::new(n));
                opens.push(BitSet::full(n));
                named(FinObject::topology(n, opens)?, &carrier)?
            }
            (None, Some(_)) => {
                let pairs = pairs_field(m, "specialization", &names)?;
                named(FinObject::space(n, &pairs)?, &carrier)?
            }
            (None, None) => return Err(bad("a space needs \"opens\" or \"specialization\"")),
        },
    };
    validate(cat, &obj)?;
    Ok(obj)
}

fn pairs_field(m: &Map<String, Value>, key: &str, names: &Names) -> Result<Vec<(Elem, Elem)>> {
    match m.get(key) {
        None => Ok(Vec::new()),
        Some(v) => Ok(names
            .tuples(v, 2)?
            .into_iter()
            .map(|t| (t[0], t[1]))
            .collect()),
    }
}

fn has_params(m: &Map<String, Value>) -> bool {
    ["q", "monoid", "signature"]
        .iter()
        .any(|k| m.contains_key(*k))
}

/// Reads an object document. `fallback` supplies the category when the
/// document names none, and its parameters when the document gives none.
pub fn parse_document(text: &str, fallback: Option<&Category>) -> Result<(Category, FinObject)> {
    let v = parse_json(text)?;
    document_from_value(&v, fallback).map_err(|e| locate(text, e))
}

/// Prefixes an input error with the line of the first quoted token it names.
fn locate(text: &str, e: Error) -> Error {
    let Error::Input(msg) = e else { return e };
    let token = msg
        .split('"')
        .nth(1)
        .filter(|t| !t.is_empty())
        .map(|t| format!("\"{t}\""));
    let line = token.and_then(|t| text.lines().position(|l| l.contains(&t)));
    match line {
        Some(i) => Error::Input(format!("line {}: {msg}", i + 1)),
        None => Error::Input(msg),
    }
}

fn document_from_value(v: &Value, fallback: Option<&Category>) -> Result<(Category, FinObject)> {
    let top = as_map(v, "document")?;
    let (params, object) = match top.get("object") {
        Some(o) => {
            let params = match top.get("params") {
                Some(p) => as_map(p, "params")?.clone(),
                None => Map::new(),
            };
            (params, o.clone())
        }
        None => (top.clone(), v.clone()),
    };
    let name = top.get("category").map(label_of).transpose()?;
    let cat = match (name, fallback) {
        (None, Some(f)) => f.clone(),
        (None, None) => return Err(bad("the document names no category and none was given")),
        (Some(n), Some(f))
            if (n == f.name() || (n == "sigma" && f.name() == "sigma_str"))
                && !has_params(&params) =>
        {
            f.clone()
        }
        (Some(n), Some(f)) => {
            let cat = category_from_parts(&n, &params)?;
            if cat.name() != f.name() {
                return Err(bad(format!(
                    "the document is for category {} but {} was requested",
                    cat.name(),
                    f.name()
                )));
            }
            cat
        }
        (Some(n), None) => category_from_parts(&n, &params)?,
    };
    let obj = object_from_json(&cat, &object)?;
    Ok((cat, obj))
}

/// Objects listed in a JSON array of documents or bare objects.
pub fn parse_object_list(text: &str, cat: &Category) -> Result<Vec<FinObject>> {
    let v = parse_json(text)?;
    let items = v
        .as_array()
        .ok_or_else(|| bad("expected an array of objects"))?;
    items
        .iter()
        .map(|item| document_from_value(item, Some(cat)).map(|(_, o)| o))
        .collect()
}

/// An instance as a JSON document: the subcategory, `X`, `TX`, the unit and
/// the cone in coslice order.
pub fn instance_to_json(inst: &MonadInstance) -> Value {
    let cat = &inst.category;
    let subcat: Vec<Value> = inst
        .subcat()
        .objects
        .iter()
        .map(|a| object_to_json(cat, a))
        .collect();
    let cone: Vec<Value> = inst
        .coslice
        .entries
        .iter()
        .zip(&inst.cone)
        .map(|(entry, psi)| json!({ "member": entry.object, "map": entry.map, "psi": psi }))
        .collect();
    json!({
        "category": cat.name(),
        "params": category_params(cat),
        "construction": inst.construction.tag(),
        "base": object_to_json(cat, inst.base()),
        "subcategory": subcat,
        "tx": object_to_json(cat, &inst.object),
        "unit": inst.unit,
        "cone": cone,
    })
}

/// Rebuilds an instance from [`instance_to_json`] output, checking that the
/// coslice and the unit are the ones recomputed from the subcategory.
pub fn instance_from_json(v: &Value, budget: Budget) -> Result<MonadInstance> {
    let m = as_map(v, "instance")?;
    let params = as_map(field(m, "params")?, "params")?;
    let cat = category_from_parts(&label_of(field(m, "category")?)?, params)?;
    let construction: Construction = serde_json::from_value(field(m, "construction")?.clone())
        .map_err(|e| bad(format!("construction: {e}")))?;
    let members = field(m, "subcategory")?
        .as_array()
        .ok_or_else(|| bad("subcategory must be an array"))?
        .iter()
        .map(|o| object_from_json(&cat, o))
        .collect::<Result<Vec<_>>>()?;
    let base = object_from_json(&cat, field(m, "base")?)?;
    let tx = object_from_json(&cat, field(m, "tx")?)?;
    let setting = Setting::new(Subcategory::from_objects(&cat, members)?, budget);
    let coslice = setting.coslice(&base)?;
    let legs = field(m, "cone")?
        .as_array()
        .ok_or_else(|| bad("cone must be an array"))?;
    if legs.len() != coslice.len() {
        return Err(bad("the cone does not match the coslice"));
    }
    let mut cone = Vec::with_capacity(legs.len());
    for (entry, leg) in coslice.entries.iter().zip(legs) {
        let leg = as_map(leg, "cone leg")?;
        if usize_of(field(leg, "member")?, "member")? != entry.object
            || usizes(field(leg, "map")?, "map")? != entry.map
        {
            return Err(bad("the cone does not match the coslice"));
        }
        let psi = usizes(field(leg, "psi")?, "psi")?;
        if psi.len() != tx.len() || psi.iter().any(|&t| t >= coslice.target(cone.len()).len()) {
            return Err(bad("a cone leg has the wrong shape"));
        }
        cone.push(psi);
    }
    let inst = MonadInstance::assemble(construction, coslice, tx, cone, None)?;
    if usizes(field(m, "unit")?, "unit")? != inst.unit {
        return Err(bad("the unit does not match the cone"));
    }
    Ok(inst)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn table_text(source: &FinObject, target: &FinObject, map: &[Elem]) -> String {
    let parts: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{}↦{}", source.label(x), target.label(y)))
        .collect();
    parts.join(", ")
}

/// Coslice entries as nodes and connecting morphisms as edges.
pub fn coslice_to_dot(coslice: &Coslice, connecting: &[Connecting]) -> String {
    let mut out = String::from("digraph coslice {\n  rankdir=LR;\n  node [shape=box];\n");
    for (e, entry) in coslice.entries.iter().enumerate() {
        let label = format!(
            "A{}: {}",
            entry.object,
            table_text(&coslice.base, coslice.target(e), &entry.map)
        );
        let _ = writeln!(out, "  e{e} [label=\"{}\"];", dot_escape(&label));
    }
    for c in connecting {
        if c.from == c.to {
            continue;
        }
        let label = table_text(coslice.target(c.from), coslice.target(c.to), &c.map);
        let _ = writeln!(
            out,
            "  e{} -> e{} [label=\"{}\"];",
            c.from,
            c.to,
            dot_escape(&label)
        );
    }
    out.push_str("}\n");
    out
}

/// `TX` with an edge to every coslice entry labelled by its cone map.
pub fn cone_to_dot(inst: &MonadInstance) -> String {
    let mut out =
        String::from("digraph cone {\n  rankdir=LR;\n  node [shape=box];\n  tx [label=\"TX\"];\n");
    for (e, (entry, psi)) in inst.coslice.entries.iter().zip(&inst.cone).enumerate() {
        let target = inst.coslice.target(e);
        let label = format!(
            "A{}: {}",
            entry.object,
            table_text(inst.base(), target, &entry.map)
        );
        let _ = writeln!(out, "  e{e} [label=\"{}\"];", dot_escape(&label));
        let _ = writeln!(
            out,
            "  tx -> e{e} [label=\"{}\"];",
            dot_escape(&table_text(&inst.object, target, psi))
        );
    }
    out.push_str("}\n");
    out
}

/// The structure of `TX`: covers for orders and spaces, edges and binary
/// relations, action arrows for monoid actions.
pub fn instance_to_dot(inst: &MonadInstance, labels: &[String]) -> String {
    let x = &inst.object;
    let n = x.len();
    let undirected = matches!(x.structure, Structure::Graph { .. });
    let mut out = String::from(if undirected {
        "graph monad {\n"
    } else {
        "digraph monad {\n"
    });
    for (u, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "  t{u} [label=\"{}\"];", dot_escape(label));
    }
    let arrow = if undirected { "--" } else { "->" };
    match &x.structure {
        Structure::Poset { .. } | Structure::Semilattice { .. } | Structure::Topology { .. } => {
            for a in 0..n {
                for b in 0..n {
                    let strict = |p: Elem, q: Elem| p != q && x.le(p, q) && !x.le(q, p);
                    if strict(a, b) && !(0..n).any(|c| strict(a, c) && strict(c, b)) {
                        let _ = writeln!(out, "  t{a} -> t{b};");
                    }
                }
            }
        }
        Structure::Graph { edges } => {
            for t in edges.tuples().iter().filter(|t| t[0] <= t[1]) {
                let _ = writeln!(out, "  t{} {arrow} t{};", t[0], t[1]);
            }
        }
        Structure::Relational { relations } => {
            for (k, r) in relations.iter().enumerate().filter(|(_, r)| r.arity() == 2) {
                for t in r.tuples() {
                    let _ = writeln!(out, "  t{} -> t{} [label=\"R{k}\"];", t[0], t[1]);
                }
            }
        }
        Structure::MSet { action } => {
            let k = action.len().checked_div(n).unwrap_or(0);
            let monoid_names: Vec<String> = match &inst.category {
                Category::MSet(m) => m.elements().to_vec(),
                _ => (0..k).map(|a| a.to_string()).collect(),
            };
            for a in 0..k {
                for u in 0..n {
                    let v = action[a * n + u];
                    if v != u {
                        let _ = writeln!(
                            out,
                            "  t{u} -> t{v} [label=\"{}\"];",
                            dot_escape(&monoid_names[a])
                        );
                    }
                }
            }
        }
        Structure::Set | Structure::Pointed { .. } | Structure::Vector { .. } => {}
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_graph_document() {
        let (cat, g) = parse_document(
            r#"{"category":"gra","vertices":["a","b"],"edges":[["a","b"]]}"#,
            None,
        )
        .unwrap();
        assert_eq!(cat, Category::Gra);
        assert_eq!(g.len(), 2);
        assert!(g.relation(0).contains(&[1, 0]));
        let back = document_to_json(&cat, &g);
        let (_, again) = parse_document(&back.to_string(), None).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn flat_mset_document() {
        let text = r#"{"category":"mset","monoid":{"elements":["e","g"],"table":[["e","g"],["g","e"]]},
            "carrier":["x","y"],"action":{"e":{"x":"x","y":"y"},"g":{"x":"y","y":"x"}}}"#;
        let (cat, x) = parse_document(text, None).unwrap();
        assert_eq!(x.act(1, 0), Some(1));
        let (_, again) = parse_document(&document_to_json(&cat, &x).to_string(), None).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn envelope_keys_are_sorted() {
        let s = document_to_json(&Category::Vec { q: 3 }, &FinObject::vector(3, 2)).to_string();
        assert_eq!(
            s,
            r#"{"category":"vec","object":{"dim":2},"params":{"q":3}}"#
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_document("{\n \"category\": }", None).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn semilattice_from_order() {
        let text = r#"{"category":"jsl","carrier":["0","a","b","1"],"order":[["0","a"],["0","b"],["a","1"],["b","1"]]}"#;
        let (_, x) = parse_document(text, None).unwrap();
        assert_eq!(x.join(1, 2), Some(3));
        let (_, again) =
            parse_document(&document_to_json(&Category::Jsl, &x).to_string(), None).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn spaces_and_pointed_sets_roundtrip() {
        let text = r#"{"category":"top0","points":["p","q"],"opens":[["q"]]}"#;
        let (cat, x) = parse_document(text, None).unwrap();
        assert!(x.le(0, 1) && !x.le(1, 0));
        let (_, again) = parse_document(&document_to_json(&cat, &x).to_string(), None).unwrap();
        assert_eq!(again, x);
        let (cat, p) = parse_document(r#"{"category":"par","carrier":["a"]}"#, None).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(object_to_json(&cat, &p), json!({"carrier": ["a"]}));
    }
}
