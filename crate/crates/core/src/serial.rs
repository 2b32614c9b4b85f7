//! JSON and CSV encodings of the library types.
//!
//! Rationals are written as `"p/q"` strings and big integers as decimal
//! strings, so every record survives a round trip through JSON unchanged.

use std::io::Write;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::dynsim::{BoxNbhd, LambdaSolution, TorusState, TorusSystem};
use crate::error::{Error, Result};
use crate::gp::{key_poly_expr, GpExpr, GpNode};
use crate::nilmatrix::{coord_count, LatticeElem, NilCoords};
use crate::scalar::Scalar;
use crate::setfamilies::GapSeq;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field {key:?}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("{what} must be an array")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| perr(format!("{what} must be a non-negative integer")))
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| perr(format!("not an integer: {s:?}"))),
        Value::Number(n) => n.to_string().parse().map_err(|_| perr(format!("not an integer: {n}"))),
        other => Err(perr(format!("expected an integer, got {other}"))),
    }
}

/// Tagged tree: `{"lin": a}`, `{"sum": [..]}`, `{"scale": [c, e]}`,
/// `{"round": e}`, `{"mono": {"coeff": c, "power": p, "factors": [..]}}`,
/// `{"prod": [..]}`.
pub fn gp_to_json<S: Scalar>(e: &GpExpr<S>) -> Value {
    match e.node() {
        GpNode::Linear(a) => json!({ "lin": a.to_json() }),
        GpNode::Sum(cs) => json!({ "sum": cs.iter().map(gp_to_json).collect::<Vec<_>>() }),
        GpNode::Scale(c, x) => json!({ "scale": [c.to_json(), gp_to_json(x)] }),
        GpNode::Round(x) => json!({ "round": gp_to_json(x) }),
        GpNode::Monomial {
            coeff,
            power,
            factors,
        } => json!({ "mono": {
            "coeff": coeff.to_json(),
            "power": power,
            "factors": factors.iter().map(gp_to_json).collect::<Vec<_>>(),
        }}),
        GpNode::Product(cs) => json!({ "prod": cs.iter().map(gp_to_json).collect::<Vec<_>>() }),
    }
}

fn gp_list<S: Scalar>(v: &Value) -> Result<Vec<GpExpr<S>>> {
    as_array(v, "children")?.iter().map(gp_from_json).collect()
}

pub fn gp_from_json<S: Scalar>(v: &Value) -> Result<GpExpr<S>> {
    let obj = v
        .as_object()
        .filter(|o| o.len() == 1)
        .ok_or_else(|| perr("expression node must be an object with a single tag"))?;
    let (tag, body) = obj.iter().next().expect("one entry");
    match tag.as_str() {
        "lin" => Ok(GpExpr::linear(S::from_json(body)?)),
        "sum" => GpExpr::sum(gp_list(body)?),
        "scale" => {
            let pair = as_array(body, "scale")?;
            if pair.len() != 2 {
                return Err(perr("scale takes [coefficient, expression]"));
            }
            Ok(GpExpr::scale(S::from_json(&pair[0])?, gp_from_json(&pair[1])?))
        }
        "round" => Ok(GpExpr::round(gp_from_json(body)?)),
        "mono" => {
            let power = as_u64(field(body, "power")?, "power")?;
            let power = u32::try_from(power).map_err(|_| perr("power too large"))?;
            let factors = match body.get("factors") {
                Some(f) => gp_list(f)?,
                None => Vec::new(),
            };
            GpExpr::monomial(S::from_json(field(body, "coeff")?)?, power, factors)
        }
        "prod" => GpExpr::product(gp_list(body)?),
        other => Err(perr(format!("unknown expression tag {other:?}"))),
    }
}

fn scalar_list<S: Scalar>(s: &str) -> Result<Vec<S>> {
    s.split(',').map(|t| S::parse(t)).collect()
}

/// Command-line shorthand for expressions: `lin:a` (`a·n`), `binom2:a`
/// (`binom(n,2)·a`), `key:a1,..,ad` (the key polynomial `P(n; a1..ad)`), or
/// a JSON tree.
pub fn parse_expr_arg<S: Scalar>(s: &str) -> Result<GpExpr<S>> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| perr(e.to_string()))?;
        return gp_from_json(&v);
    }
    let (tag, rest) = s
        .split_once(':')
        .ok_or_else(|| perr(format!("expected TAG:VALUES or a JSON tree, got {s:?}")))?;
    match tag {
        "lin" => Ok(GpExpr::linear(S::parse(rest)?)),
        "binom2" => Ok(GpExpr::binom2(S::parse(rest)?)),
        "key" => key_poly_expr(&scalar_list::<S>(rest)?),
        other => Err(perr(format!("unknown expression shorthand {other:?}"))),
    }
}

/// `{"d": d, "entries": [[k, i, value], ...]}` in level order.
pub fn coords_to_json<S: Scalar>(x: &NilCoords<S>) -> Value {
    let entries: Vec<Value> = x
        .indexed()
        .map(|(k, i, v)| json!([k, i, v.to_json()]))
        .collect();
    json!({ "d": x.dim(), "entries": entries })
}

fn indexed_entries<T>(
    v: &Value,
    parse: impl Fn(&Value) -> Result<T>,
    zero: impl Fn() -> T,
) -> Result<(usize, Vec<T>)> {
    let d = as_u64(field(v, "d")?, "d")? as usize;
    if d == 0 {
        return Err(perr("d must be positive"));
    }
    let mut out: Vec<Option<T>> = (0..coord_count(d)).map(|_| None).collect();
    for e in as_array(field(v, "entries")?, "entries")? {
        let t = as_array(e, "entry")?;
        if t.len() != 3 {
            return Err(perr("entries are [k, i, value] triples"));
        }
        let k = as_u64(&t[0], "k")? as usize;
        let i = as_u64(&t[1], "i")? as usize;
        if k == 0 || k > d || i == 0 || i > d - k + 1 {
            return Err(perr(format!("entry index ({k}, {i}) out of range for d = {d}")));
        }
        let idx = (k - 1) * (d + 1) - (k - 1) * k / 2 + (i - 1);
        if out[idx].is_some() {
            return Err(perr(format!("duplicate entry ({k}, {i})")));
        }
        out[idx] = Some(parse(&t[2])?);
    }
    Ok((d, out.into_iter().map(|o| o.unwrap_or_else(&zero)).collect()))
}

/// Missing entries are zero.
pub fn coords_from_json<S: Scalar>(v: &Value) -> Result<NilCoords<S>> {
    let (d, entries) = indexed_entries(v, S::from_json, S::zero)?;
    NilCoords::from_entries(d, entries)
}

pub fn lattice_to_json(h: &LatticeElem) -> Value {
    let d = h.dim();
    let entries: Vec<Value> = (1..=d)
        .flat_map(|k| (1..=d - k + 1).map(move |i| (k, i)))
        .map(|(k, i)| json!([k, i, bigint_to_json(h.get(k, i))]))
        .collect();
    json!({ "d": d, "entries": entries })
}

pub fn lattice_from_json(v: &Value) -> Result<LatticeElem> {
    let (d, entries) = indexed_entries(v, bigint_from_json, BigInt::default)?;
    LatticeElem::from_entries(d, entries)
}

pub fn gapseq_to_json(p: &GapSeq) -> Value {
    json!({ "terms": p.terms().iter().map(bigint_to_json).collect::<Vec<_>>() })
}

pub fn gapseq_from_json(v: &Value) -> Result<GapSeq> {
    let terms = as_array(field(v, "terms")?, "terms")?
        .iter()
        .map(bigint_from_json)
        .collect::<Result<_>>()?;
    Ok(GapSeq::new(terms))
}

/// Comma-separated integers, or `pow:b,m` for `b, b², …, b^m`.
pub fn parse_gapseq_arg(s: &str) -> Result<GapSeq> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("pow:") {
        let (b, m) = rest
            .split_once(',')
            .ok_or_else(|| perr("pow:BASE,COUNT expected"))?;
        let b: i64 = b.trim().parse().map_err(|_| perr(format!("bad base {b:?}")))?;
        let m: usize = m.trim().parse().map_err(|_| perr(format!("bad count {m:?}")))?;
        return Ok(GapSeq::powers(b, m));
    }
    if s.is_empty() {
        return Ok(GapSeq::new(Vec::new()));
    }
    let terms = s
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| perr(format!("not an integer: {t:?}"))))
        .collect::<Result<_>>()?;
    Ok(GapSeq::new(terms))
}

pub fn star_to_json(triple: &Option<[BigInt; 3]>) -> Value {
    match triple {
        Some(t) => json!({ "found": true, "triple": t.iter().map(bigint_to_json).collect::<Vec<_>>() }),
        None => json!({ "found": false, "triple": Value::Null }),
    }
}

pub fn star_from_json(v: &Value) -> Result<Option<[BigInt; 3]>> {
    let found = field(v, "found")?
        .as_bool()
        .ok_or_else(|| perr("found must be a boolean"))?;
    if !found {
        return Ok(None);
    }
    let t = as_array(field(v, "triple")?, "triple")?;
    if t.len() != 3 {
        return Err(perr("triple must have three entries"));
    }
    Ok(Some([
        bigint_from_json(&t[0])?,
        bigint_from_json(&t[1])?,
        bigint_from_json(&t[2])?,
    ]))
}

/// Small integers stay JSON numbers here so `lambda --d 2` prints
/// `{"lambdas":[-2,1],"lambda":2,"K":6}`; values beyond `i64` fall back
/// to strings.
fn small_int(n: &BigInt) -> Value {
    i64::try_from(n)
        .map(Value::from)
        .unwrap_or_else(|_| bigint_to_json(n))
}

pub fn lambda_to_json(l: &LambdaSolution) -> Value {
    json!({
        "lambdas": l.lambdas.iter().map(small_int).collect::<Vec<_>>(),
        "lambda": small_int(&l.lambda),
        "K": small_int(&l.k),
    })
}

pub fn lambda_from_json(v: &Value) -> Result<LambdaSolution> {
    Ok(LambdaSolution {
        lambdas: as_array(field(v, "lambdas")?, "lambdas")?
            .iter()
            .map(bigint_from_json)
            .collect::<Result<_>>()?,
        lambda: bigint_from_json(field(v, "lambda")?)?,
        k: bigint_from_json(field(v, "K")?)?,
    })
}

pub fn system_to_json<S: Scalar>(sys: &TorusSystem<S>) -> Value {
    json!({ "d": sys.dim(), "alpha": sys.alpha().to_json() })
}

pub fn system_from_json<S: Scalar>(v: &Value) -> Result<TorusSystem<S>> {
    let d = as_u64(field(v, "d")?, "d")? as usize;
    TorusSystem::new(d, S::from_json(field(v, "alpha")?)?)
}

pub fn state_to_json<S: Scalar>(x: &TorusState<S>) -> Value {
    Value::Array(x.coords().iter().map(Scalar::to_json).collect())
}

pub fn state_from_json<S: Scalar>(v: &Value) -> Result<TorusState<S>> {
    let coords = as_array(v, "state")?
        .iter()
        .map(S::from_json)
        .collect::<Result<_>>()?;
    TorusState::new(coords)
}

pub fn nbhd_to_json<S: Scalar>(u: &BoxNbhd<S>) -> Value {
    json!({
        "center": state_to_json(u.center()),
        "radii": u.radii().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

pub fn nbhd_from_json<S: Scalar>(v: &Value) -> Result<BoxNbhd<S>> {
    let radii = as_array(field(v, "radii")?, "radii")?
        .iter()
        .map(S::from_json)
        .collect::<Result<_>>()?;
    BoxNbhd::new(state_from_json(field(v, "center")?)?, radii)
}

/// One CSV cell: strings unquoted unless they need it, arrays and objects
/// as compact JSON.
fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

/// Writes flat JSON objects as CSV with a header row taken from the
/// first record's keys.
pub fn write_csv<W: Write>(out: &mut W, records: &[Map<String, Value>]) -> std::io::Result<()> {
    let Some(first) = records.first() else {
        return Ok(());
    };
    let header: Vec<&String> = first.keys().collect();
    writeln!(out, "{}", header.iter().map(|h| h.as_str()).collect::<Vec<_>>().join(","))?;
    for r in records {
        let row: Vec<String> = header
            .iter()
            .map(|h| csv_cell(r.get(h.as_str()).unwrap_or(&Value::Null)))
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
