//! JSON encodings of subsets, base morphisms, spans and cube morphisms.

use serde_json::{json, Value};

use crate::cube::{CubeMorphism, NormalForm};
use crate::error::{Error, Result};
use crate::site::{BaseMorphism, Site, Subset};
use crate::spans::Span;

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn subset(s: Subset) -> Value {
    json!(s.positions())
}

pub fn base(f: &BaseMorphism) -> Value {
    json!({"map": f.map, "twist": f.twist, "src": f.src, "dst": f.dst})
}

/// The inner `{"map","twist"}` object of spans and normal forms.
fn leg(f: &BaseMorphism) -> Value {
    json!({"map": f.map, "twist": f.twist})
}

pub fn span(s: &Span) -> Value {
    json!({"gamma": subset(s.gamma), "f": leg(&s.f), "src": s.src(), "dst": s.dst()})
}

pub fn normal_form(nf: &NormalForm) -> Value {
    json!({
        "gamma": subset(nf.gamma),
        "sigma": leg(&nf.sigma),
        "delta": subset(nf.delta),
        "xi": subset(nf.xi),
        "src": nf.gamma.degree(),
        "dst": nf.delta.degree(),
    })
}

pub fn cube(site: &Site, m: &CubeMorphism) -> Value {
    normal_form(&m.normal_form(site))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| schema(format!("missing or non-integer field `{key}`")))
}

fn usize_list(v: &Value, key: &str) -> Result<Vec<usize>> {
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| schema(format!("missing list field `{key}`")))?;
    arr.iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| schema(format!("`{key}` holds a non-integer"))))
        .collect()
}

pub fn parse_subset(v: &Value, key: &str, degree: usize) -> Result<Subset> {
    Subset::from_positions(degree, &usize_list(v, key)?)
}

fn parse_leg(site: &Site, v: &Value, key: &str, dst: usize) -> Result<BaseMorphism> {
    let inner = v.get(key).ok_or_else(|| schema(format!("missing field `{key}`")))?;
    let map = usize_list(inner, "map")?;
    let twist = match inner.get("twist") {
        None => 0,
        Some(_) => usize_field(inner, "twist")?,
    };
    let f = BaseMorphism::new(dst, map, twist);
    site.validate(&f)?;
    Ok(f)
}

pub fn parse_base(site: &Site, v: &Value) -> Result<BaseMorphism> {
    let dst = usize_field(v, "dst")?;
    let f = BaseMorphism::new(dst, usize_list(v, "map")?, if v.get("twist").is_some() { usize_field(v, "twist")? } else { 0 });
    if let Some(src) = v.get("src") {
        if src.as_u64() != Some(f.src as u64) {
            return Err(schema("`src` disagrees with the map length"));
        }
    }
    site.validate(&f)?;
    Ok(f)
}

pub fn parse_span(site: &Site, v: &Value) -> Result<Span> {
    let src = usize_field(v, "src")?;
    let dst = usize_field(v, "dst")?;
    let gamma = parse_subset(v, "gamma", src)?;
    let f = parse_leg(site, v, "f", dst)?;
    Span::new(gamma, f)
}

pub fn parse_normal_form(site: &Site, v: &Value) -> Result<NormalForm> {
    let src = usize_field(v, "src")?;
    let dst = usize_field(v, "dst")?;
    let gamma = parse_subset(v, "gamma", src)?;
    let delta = parse_subset(v, "delta", dst)?;
    let xi = parse_subset(v, "xi", dst)?;
    let sigma = parse_leg(site, v, "sigma", delta.len())?;
    let nf = NormalForm { gamma, sigma, delta, xi };
    nf.validate()?;
    Ok(nf)
}

pub fn parse_cube(site: &Site, v: &Value) -> Result<CubeMorphism> {
    Ok(parse_normal_form(site, v)?.assemble(site))
}
