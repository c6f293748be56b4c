//! Exhaustive checks on nerves, realizations and their homology.

use std::sync::Arc;

use serde_json::json;

use crate::cube::CubeCat;
use crate::error::Result;
use crate::presheaf::tensor::tensor_truncated;
use crate::presheaf::verify::samples;
use crate::presheaf::{boundary, dimension, skeleton, Presheaf};
use crate::report::{Check, Report};
use crate::site::Site;
use crate::topology::{
    chain_count, chain_masks, homology, nerve_boolean, normalized_chains, realize, realize_map,
    realize_tensor_comparison, smith_normal_form, HomologyGroup, Point, SimplicialMap,
};

pub const HOMOLOGY_NOTE: &str =
    "integral homology of the realization is used as the computable stand-in for weak equivalence";

/// Homology of a point, or of the sphere `S^{n-1}` bounding an `n`-cube, in dimensions `0..=top`.
pub fn expected_homology(sphere_of: Option<usize>, top: usize) -> Vec<HomologyGroup> {
    (0..=top)
        .map(|k| {
            let betti = match sphere_of {
                None => usize::from(k == 0),
                Some(1) => 2 * usize::from(k == 0),
                Some(n) => usize::from(k == 0) + usize::from(k == n - 1),
            };
            HomologyGroup { dim: k, betti, torsion: Vec::new() }
        })
        .collect()
}

/// Chains of `2ⁿ` on which some coordinate is constant: the simplices of
/// `⋃ᵢ Δ[1]^{i-1} × ∂Δ[1] × Δ[1]^{n-i}`.
pub fn on_cube_boundary(n: usize, k: usize, chain: usize) -> bool {
    let masks = chain_masks(n, k, chain);
    let (first, last) = (masks[0], masks[k]);
    (0..n).any(|i| first >> i & 1 == last >> i & 1)
}

pub fn verify_topology(site: &Site, d: usize) -> Result<Report> {
    let mut report = Report::new(format!("topology[{}, D={d}]", site.label()));
    report.note = Some(HOMOLOGY_NOTE.into());
    let cat = CubeCat::shared(site.clone(), d);
    let top = d + 1;

    let mut counts = Check::new("nerve k-simplices of 2ⁿ number (k+2)ⁿ");
    let mut identities = Check::new("simplicial identities hold");
    for n in 0..=d {
        let s = nerve_boolean(n, top)?;
        for k in 0..=top {
            counts.record(s.count(k) == (k + 2).pow(n as u32), || json!({"n": n, "k": k, "count": s.count(k)}));
        }
        s.check_identities(&mut identities);
    }

    let mut cube = Check::new("|□[n]| ≅ N(2ⁿ)");
    let mut faces = Check::new("|∂□[n]| is the union of the facets of N(2ⁿ)");
    let mut monos = Check::new("realizations of monomorphisms are injective");
    let mut square_zero = Check::new("∂∘∂ = 0 on normalized chains");
    let mut smith = Check::new("Smith forms carry a valid U·M·V = D certificate");
    let mut euler = Check::new("Euler characteristic of |□[n]| is 1");
    let mut point = Check::new("|□[n]| has the homology of a point");
    let mut sphere = Check::new("|∂□[n]| has the homology of S^{n-1}");

    let objects = samples(&cat, d)?;
    let mut realized = Vec::with_capacity(objects.len());
    for s in &objects {
        let r = realize(&s.object, top)?;
        r.set.check_identities(&mut identities);
        let chains = normalized_chains(&r.set);
        square_zero.record(chains.square_zero()?, || json!({"object": s.name}));
        for m in &chains.boundaries {
            let f = smith_normal_form(m)?;
            smith.record(f.certify(m)?, || json!({"object": s.name, "matrix": m.to_rows()}));
        }
        let h = chains.homology(d)?;
        if let Some(n) = s.name.strip_prefix("rep:").and_then(|n| n.parse::<usize>().ok()) {
            euler.record(r.set.euler_characteristic() == 1, || json!({"object": s.name}));
            point.record(h == expected_homology(None, d), || json!({"object": s.name, "homology": h}));
            let nerve = Arc::new(nerve_boolean(n, top)?);
            let id = cat.identity_index(n);
            let cells = (0..=top)
                .map(|k| (0..nerve.count(k)).map(|c| r.class_of(k, Point { r: n, x: id, chain: c }) as u32).collect())
                .collect();
            let ok = SimplicialMap::new(nerve, r.set.clone(), cells).is_ok_and(|m| m.is_bijective());
            cube.record(ok, || json!({"object": s.name}));
        } else if let Some(n) = s.name.strip_prefix("boundary:").and_then(|n| n.parse::<usize>().ok()) {
            sphere.record(h == expected_homology(Some(n), d), || json!({"object": s.name, "homology": h}));
        }
        realized.push(r);
    }

    for (s, r) in objects.iter().zip(&realized) {
        if let Some(n) = s.name.strip_prefix("boundary:").and_then(|n| n.parse::<usize>().ok()) {
            let inc = boundary(&cat, n, d)?;
            let whole = realize(&inc.target, top)?;
            let map = realize_map(r, &whole, &inc)?;
            monos.record(map.is_injective(), || json!({"map": format!("{} → rep:{n}", s.name)}));
            for k in 0..=top {
                let mut hit = vec![false; whole.set.count(k)];
                for x in 0..r.set.count(k) {
                    hit[map.apply(k, x)] = true;
                }
                let ok = (0..chain_count(n, k)).all(|c| {
                    let id = cat.identity_index(n);
                    hit[whole.class_of(k, Point { r: n, x: id, chain: c })] == on_cube_boundary(n, k, c)
                });
                faces.record(ok, || json!({"object": s.name, "dim": k}));
            }
        }
        let dim = dimension(&s.object)?.map_or(-1, |v| v as isize);
        for j in -1..dim {
            let inc = skeleton(&s.object, j)?;
            let sub = realize(&inc.source, top)?;
            let ok = realize_map(&sub, r, &inc)?.is_injective();
            monos.record(ok, || json!({"map": format!("sk_{j} {} → {}", s.name, s.name)}));
        }
    }

    report.push(counts);
    report.push(identities);
    report.push(cube);
    report.push(faces);
    report.push(monos);
    report.push(square_zero);
    report.push(smith);
    report.push(euler);
    report.push(point);
    report.push(sphere);

    if site.is_monoidal() {
        let mut products = Check::new("|X ⊗ Y| ≅ |X| × |Y|");
        let dims: Vec<usize> = objects.iter().map(|s| dimension(&s.object).map(|v| v.unwrap_or(0))).collect::<Result<_>>()?;
        for (a, x) in objects.iter().enumerate() {
            for (b, y) in objects.iter().enumerate() {
                if dims[a] + dims[b] > d {
                    continue;
                }
                let t = tensor_truncated(&x.object, &y.object, d)?;
                let (_, product, map) = realize_tensor_comparison(&t, top)?;
                let ok = map.is_bijective() && product.counts() == map.source.counts();
                products.record(ok, || json!({"left": x.name, "right": y.name}));
            }
        }
        report.push(products);
    }
    Ok(report)
}

/// Simplex counts per dimension of `|X ⊗ Y|` and `|X| × |Y|`.
pub fn product_counts(x: &Arc<Presheaf>, y: &Arc<Presheaf>, d: usize, dim: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let t = tensor_truncated(x, y, d)?;
    let (whole, product, _) = realize_tensor_comparison(&t, dim)?;
    Ok((whole.set.counts().to_vec(), product.counts().to_vec()))
}

/// Homology of the realization in dimensions `0..=top`.
pub fn realized_homology(x: &Arc<Presheaf>, top: usize) -> Result<Vec<HomologyGroup>> {
    homology(&realize(x, top + 1)?.set, top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_topology_at_two() {
        let r = verify_topology(&Site::plain(), 2).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn connections_topology_at_two() {
        let r = verify_topology(&Site::connections(), 2).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn boundary_chain_count() {
        for n in 0..4 {
            for k in 0..4 {
                let on = (0..chain_count(n, k)).filter(|&c| on_cube_boundary(n, k, c)).count();
                assert_eq!(on, (k + 2).pow(n as u32) - k.pow(n as u32));
            }
        }
    }
}
