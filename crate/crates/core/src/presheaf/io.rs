//! Presheaf files: `{"site", "max_degree", "cells", "action"}`.
//!
//! Actions may be omitted for composites of listed morphisms; they are derived
//! and the result is checked for functoriality.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cube::CubeCat;
use crate::error::{Error, Result};
use crate::json;
use crate::presheaf::Presheaf;
use crate::site::Site;

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn to_json(x: &Presheaf) -> Value {
    let cat = x.cat();
    let site = cat.site();
    let d = x.max_degree();
    let cells: Map<String, Value> = (0..=d).map(|n| (n.to_string(), json!(x.cells(n)))).collect();
    let mut action = Vec::new();
    for n in 0..=d {
        for k in 0..=d {
            for (mi, m) in cat.homs(k, n).items().iter().enumerate() {
                if m.is_identity() {
                    continue;
                }
                let map: Map<String, Value> = (0..x.count(n))
                    .map(|c| (x.cells(n)[c].clone(), json!(x.cells(k)[x.act_idx(n, k, mi, c)])))
                    .collect();
                action.push(json!({"morphism": json::cube(site, m), "map": map}));
            }
        }
    }
    json!({"site": site.label(), "max_degree": d, "cells": cells, "action": action})
}

/// Parses and validates a presheaf; `table` resolves a bare `crossed` site.
pub fn from_json(v: &Value, table: Option<&Path>) -> Result<Presheaf> {
    let label = v.get("site").and_then(Value::as_str).ok_or_else(|| schema("missing string field `site`"))?;
    let site = Site::from_selector(label, table)?;
    let d = v.get("max_degree").and_then(Value::as_u64).ok_or_else(|| schema("missing field `max_degree`"))? as usize;
    site.check_degree(2 * d)?;
    let cat = CubeCat::shared(site, d);
    from_json_over(&cat, d, v)
}

pub fn from_json_over(cat: &Arc<CubeCat>, d: usize, v: &Value) -> Result<Presheaf> {
    let site = cat.site();
    let cells_v = v.get("cells").and_then(Value::as_object).ok_or_else(|| schema("missing object field `cells`"))?;
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(d + 1);
    let mut lookup: Vec<HashMap<String, usize>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let list = cells_v
            .get(&n.to_string())
            .and_then(Value::as_array)
            .ok_or_else(|| schema(format!("missing cell list for degree {n}")))?;
        let names: Vec<String> = list
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| schema("cell names must be strings")))
            .collect::<Result<_>>()?;
        let index: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        if index.len() != names.len() {
            return Err(schema(format!("duplicate cell names in degree {n}")));
        }
        cells.push(names);
        lookup.push(index);
    }
    if let Some(extra) = cells_v.keys().find(|k| k.parse::<usize>().map_or(true, |n| n > d)) {
        return Err(schema(format!("cell list `{extra}` is outside degrees 0..={d}")));
    }

    let mut known: Vec<Vec<Vec<Option<Vec<u32>>>>> =
        (0..=d).map(|n| (0..=d).map(|k| vec![None; cat.homs(k, n).len()]).collect()).collect();
    for n in 0..=d {
        known[n][n][cat.identity_index(n)] = Some((0..cells[n].len() as u32).collect());
    }
    let entries = v.get("action").and_then(Value::as_array).ok_or_else(|| schema("missing list field `action`"))?;
    for e in entries {
        let m = json::parse_cube(site, e.get("morphism").ok_or_else(|| schema("action entry without `morphism`"))?)?;
        let (k, n) = (m.src(), m.dst());
        if k > d || n > d {
            return Err(Error::Truncation { needed: k.max(n), bound: d });
        }
        let map = e.get("map").and_then(Value::as_object).ok_or_else(|| schema(format!("action of {m} has no `map`")))?;
        let mut table = vec![u32::MAX; cells[n].len()];
        for (from, to) in map {
            let a = *lookup[n].get(from).ok_or_else(|| schema(format!("unknown cell `{from}` in degree {n}")))?;
            let to = to.as_str().ok_or_else(|| schema("cell names must be strings"))?;
            let b = *lookup[k].get(to).ok_or_else(|| schema(format!("unknown cell `{to}` in degree {k}")))?;
            table[a] = b as u32;
        }
        if table.contains(&u32::MAX) {
            return Err(schema(format!("action of {m} is not total")));
        }
        let mi = cat.homs(k, n).index_of(&m).expect("degrees checked");
        if known[n][k][mi].as_ref().is_some_and(|t| *t != table) {
            return Err(schema(format!("conflicting actions for {m}")));
        }
        known[n][k][mi] = Some(table);
    }

    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..=d {
            for b in 0..=d {
                for c in 0..=d {
                    for g in 0..cat.homs(b, c).len() {
                        let Some(tg) = known[c][b][g].clone() else { continue };
                        for f in 0..cat.homs(a, b).len() {
                            let gf = cat.compose_idx(a, b, c, g, f);
                            if known[c][a][gf].is_some() {
                                continue;
                            }
                            if let Some(tf) = &known[b][a][f] {
                                known[c][a][gf] = Some(tg.iter().map(|&x| tf[x as usize]).collect());
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
    }
    for n in 0..=d {
        for k in 0..=d {
            if let Some(mi) = known[n][k].iter().position(Option::is_none) {
                return Err(schema(format!(
                    "no action for {} and it is not a composite of listed morphisms",
                    cat.homs(k, n).get(mi)
                )));
            }
        }
    }
    Presheaf::from_fn(cat, d, cells, |n, k, m, x| known[n][k][m].as_ref().expect("all derived")[x] as usize)
}

pub fn load(path: &Path, table: Option<&Path>) -> Result<Presheaf> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))?;
    from_json(&v, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::CubeMorphism;
    use crate::site::Subset;

    #[test]
    fn representable_roundtrip() {
        let cat = CubeCat::shared(Site::connections(), 2);
        let x = Presheaf::representable(&cat, 1, 2).unwrap();
        let back = from_json(&to_json(&x), None).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn composites_are_derived() {
        let site = Site::plain();
        let cat = CubeCat::shared(site.clone(), 1);
        let x = Presheaf::representable(&cat, 1, 1).unwrap();
        let mut v = to_json(&x);
        let actions = v["action"].as_array_mut().unwrap();
        let before = actions.len();
        let idem = CubeMorphism::face(&site, Subset::empty(1), Subset::empty(1)).unwrap();
        let composite = cat.compose(&idem, &CubeMorphism::dagger(&site, Subset::empty(1)));
        let nf = json::cube(&site, &composite);
        actions.retain(|a| a["morphism"] != nf);
        assert_eq!(actions.len(), before - 1);
        assert_eq!(from_json(&v, None).unwrap(), x);
    }

    #[test]
    fn missing_generator_is_a_schema_error() {
        let site = Site::plain();
        let cat = CubeCat::shared(site.clone(), 1);
        let x = Presheaf::representable(&cat, 1, 1).unwrap();
        let mut v = to_json(&x);
        let dag = json::cube(&site, &CubeMorphism::dagger(&site, Subset::empty(1)));
        v["action"].as_array_mut().unwrap().retain(|a| a["morphism"] != dag);
        assert!(matches!(from_json(&v, None), Err(Error::Schema(_))));
    }

    #[test]
    fn non_functorial_action_names_the_pair() {
        let cat = CubeCat::shared(Site::plain(), 1);
        let x = Presheaf::representable(&cat, 1, 1).unwrap();
        let mut v = to_json(&x);
        let entry = v["action"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|e| {
                let vals: Vec<&Value> = e["map"].as_object().unwrap().values().collect();
                vals.iter().any(|w| *w != vals[0])
            })
            .unwrap();
        let map = entry["map"].as_object_mut().unwrap();
        let keys: Vec<String> = map.keys().cloned().collect();
        let other = map.values().find(|w| **w != map[&keys[0]]).unwrap().clone();
        map.insert(keys[0].clone(), other);
        match from_json(&v, None) {
            Err(Error::Functoriality(msg)) => assert!(msg.contains("g =") && msg.contains("f =")),
            other => panic!("expected a functoriality error, got {other:?}"),
        }
    }
}
