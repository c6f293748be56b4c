//! Exhaustive checks on presheaves built from representables and boundaries.

use std::sync::Arc;

use serde_json::json;

use crate::cube::{cube_compose_unchecked, tensor_mor, CubeCat, CubeMorphism};
use crate::error::Result;
use crate::presheaf::colimit::{colimit, induced_map, Diagram};
use crate::presheaf::skeleton::is_nondegenerate;
use crate::presheaf::tensor::{connection_homotopy, tensor_truncated};
use crate::presheaf::{
    attachment_square, boundary, boundary_coequalizer, cylinder, dimension, is_homotopy, nondegenerate_decompose,
    representable_tensor_iso, skeleton, tensor_map, Presheaf, PresheafMap,
};
use crate::report::{Check, Report};
use crate::site::{Site, SiteKind};

/// A named presheaf used as a test object.
pub struct Sample {
    pub name: String,
    pub object: Arc<Presheaf>,
}

/// `rep:r` and `boundary:r` for `r ≤ d`.
pub fn samples(cat: &Arc<CubeCat>, d: usize) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for r in 0..=d {
        out.push(Sample { name: format!("rep:{r}"), object: Arc::new(Presheaf::representable(cat, r, d)?) });
    }
    for r in 1..=d {
        out.push(Sample { name: format!("boundary:{r}"), object: boundary(cat, r, d)?.source });
    }
    Ok(out)
}

/// `∂□[m] ⊗ □[n] ∪ □[m] ⊗ ∂□[n] → □[m] ⊗ □[n] ≅ □[m+n]`: returns whether the pushout
/// has the cell counts of `∂□[m+n]` and whether the comparison map is an isomorphism onto it.
pub fn boundary_pushout_product(cat: &Arc<CubeCat>, m: usize, n: usize, d: usize) -> Result<(bool, bool)> {
    let bm = boundary(cat, m, d)?;
    let bn = boundary(cat, n, d)?;
    let (rm, rn) = (bm.target.clone(), bn.target.clone());
    let (id_bm, id_rn) = (PresheafMap::identity(&bm.source), PresheafMap::identity(&rn));
    let (id_rm, id_bn) = (PresheafMap::identity(&rm), PresheafMap::identity(&bn.source));
    let t_bb = tensor_truncated(&bm.source, &bn.source, d)?;
    let t_br = tensor_truncated(&bm.source, &rn, d)?;
    let t_rb = tensor_truncated(&rm, &bn.source, d)?;
    let t_rr = tensor_truncated(&rm, &rn, d)?;
    let left = tensor_map(&t_bb, &t_br, &id_bm, &bn)?;
    let right = tensor_map(&t_bb, &t_rb, &bm, &id_bn)?;
    let square = colimit(&Diagram::Pushout(left, right))?;
    let legs = [tensor_map(&t_br, &t_rr, &bm, &id_rn)?, tensor_map(&t_rb, &t_rr, &id_rm, &bn)?];
    let into = induced_map(&square, &legs, &t_rr.object)?;
    let iso = representable_tensor_iso(&t_rr, m, n)?;
    let comparison = iso.compose(&into)?;
    let target = boundary(cat, m + n, d)?;
    let counts = square.object.counts() == target.source.counts();
    let exact = comparison.is_injective() && comparison.image() == target.image();
    Ok((counts, exact && iso.is_bijective()))
}

/// `X ⊗ □[0] → X` and `□[0] ⊗ X → X`.
pub fn unitors(cat: &Arc<CubeCat>, x: &Arc<Presheaf>, d: usize) -> Result<(PresheafMap, PresheafMap)> {
    let site = cat.site().clone();
    let unit = Arc::new(Presheaf::representable(cat, 0, d)?);
    let right = tensor_truncated(x, &unit, d)?;
    let left = tensor_truncated(&unit, x, d)?;
    let act = |s: usize, p: usize, q: usize, phi: usize, cell: usize, on_left: bool| {
        let bang = if on_left {
            tensor_mor(&site, &CubeMorphism::identity(&site, p), cat.homs(q, 0).get(0))
        } else {
            tensor_mor(&site, cat.homs(p, 0).get(0), &CubeMorphism::identity(&site, q))
        }
        .expect("monoidal");
        let c = cube_compose_unchecked(&site, &bang, cat.homs(s, p + q).get(phi));
        let deg = if on_left { p } else { q };
        x.act_idx(deg, s, cat.homs(s, deg).index_of(&c).expect("enumerated"), cell)
    };
    let r = right.induced(x.clone(), |s, e| act(s, e.p, e.q, e.phi, e.x, true))?;
    let l = left.induced(x.clone(), |s, e| act(s, e.p, e.q, e.phi, e.y, false))?;
    Ok((r, l))
}

/// `(□[a] ⊗ □[b]) ⊗ □[c]` and `□[a] ⊗ (□[b] ⊗ □[c])` both map isomorphically onto `□[a+b+c]`.
pub fn associator_check(cat: &Arc<CubeCat>, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
    let rep = |r: usize| -> Result<Arc<Presheaf>> { Ok(Arc::new(Presheaf::representable(cat, r, d)?)) };
    let (ra, rb, rc) = (rep(a)?, rep(b)?, rep(c)?);
    let ab = tensor_truncated(&ra, &rb, d)?;
    let ab_iso = representable_tensor_iso(&ab, a, b)?;
    let outer = tensor_truncated(&ab.object, &rc, d)?;
    let flat = tensor_truncated(&ab_iso.target, &rc, d)?;
    let lhs = representable_tensor_iso(&flat, a + b, c)?.compose(&tensor_map(&outer, &flat, &ab_iso, &PresheafMap::identity(&rc))?)?;
    let bc = tensor_truncated(&rb, &rc, d)?;
    let bc_iso = representable_tensor_iso(&bc, b, c)?;
    let outer = tensor_truncated(&ra, &bc.object, d)?;
    let flat = tensor_truncated(&ra, &bc_iso.target, d)?;
    let rhs = representable_tensor_iso(&flat, a, b + c)?.compose(&tensor_map(&outer, &flat, &PresheafMap::identity(&ra), &bc_iso)?)?;
    Ok(lhs.is_bijective() && rhs.is_bijective())
}

pub fn verify_presheaf_laws(site: &Site, d: usize) -> Result<Report> {
    let mut report = Report::new(format!("presheaf-laws[{}, D={d}]", site.label()));
    let cat = CubeCat::shared(site.clone(), d);
    let objects = samples(&cat, d)?;

    let mut functorial = Check::new("representables and boundaries are functorial");
    for s in &objects {
        functorial.record(s.object.check_functoriality().is_ok(), || json!({"object": s.name}));
    }
    report.push(functorial);

    let mut agree = Check::new("boundary filter equals the coequalizer of faces");
    for r in 0..=d {
        let filter = boundary(&cat, r, d)?;
        let coeq = boundary_coequalizer(&cat, r, d)?;
        agree.record(coeq.is_injective() && coeq.image() == filter.image(), || json!({"r": r}));
    }
    report.push(agree);

    let mut filtration = Check::new("skeleta form a filtration ending at X");
    let mut orthogonal = Check::new("skeleton inclusions are non-degenerate monomorphisms");
    let mut attach = Check::new("attachment squares are pushouts and pullbacks");
    let mut decomp = Check::new("non-degenerate decompositions recompose and are unique up to automorphism");
    for s in &objects {
        let x = &s.object;
        let mut prev: Option<Vec<Vec<bool>>> = None;
        for n in -1..=(d as isize) {
            let sk = skeleton(x, n)?;
            let img = sk.image();
            let nested = prev.as_ref().is_none_or(|p| p.iter().flatten().zip(img.iter().flatten()).all(|(a, b)| !a || *b));
            filtration.record(nested && sk.is_injective(), || json!({"object": s.name, "n": n}));
            if n == d as isize {
                filtration.record(sk.is_surjective(), || json!({"object": s.name, "n": n}));
            }
            let cat = x.cat();
            for k in 0..=d {
                for c in 0..x.count(k) {
                    if img[k][c] {
                        continue;
                    }
                    for k2 in k..=d {
                        for (mi, sigma) in cat.homs(k2, k).items().iter().enumerate() {
                            if sigma.is_collapse() {
                                let moved = x.act_idx(k, k2, mi, c);
                                orthogonal.record(!img[k2][moved], || json!({"object": s.name, "n": n, "cell": x.cells(k)[c]}));
                            }
                        }
                    }
                }
            }
            prev = Some(img);
        }
        if let Some(dim) = dimension(x)? {
            filtration.record(skeleton(x, dim as isize)?.is_surjective(), || json!({"object": s.name}));
        }
        for n in 0..=d {
            let a = attachment_square(x, n)?;
            attach.record(a.pushout && a.pullback, || json!({"object": s.name, "degree": n}));
        }
        let cat = x.cat();
        for n in 0..=d {
            for c in 0..x.count(n) {
                let dec = nondegenerate_decompose(x, n, c)?;
                let j = dec.degree;
                let ok = x.act(dec.core, &dec.sigma)? == c && is_nondegenerate(x, j, dec.core);
                decomp.record(ok, || json!({"object": s.name, "cell": x.cells(n)[c]}));
                let orbit: Vec<usize> = cat
                    .homs(j, j)
                    .items()
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.is_iso())
                    .map(|(gi, _)| x.act_idx(j, j, gi, dec.core))
                    .collect();
                for j2 in 0..=n {
                    for (mi, sigma) in cat.homs(n, j2).items().iter().enumerate() {
                        if !sigma.is_collapse() {
                            continue;
                        }
                        for y in 0..x.count(j2) {
                            if x.act_idx(j2, n, mi, y) == c && is_nondegenerate(x, j2, y) {
                                decomp.record(j2 == j && orbit.contains(&y), || {
                                    json!({"object": s.name, "cell": x.cells(n)[c], "other_core": x.cells(j2)[y]})
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(filtration);
    report.push(orthogonal);
    report.push(attach);
    report.push(decomp);

    let mut counts = Check::new("pushouts along monomorphisms count by inclusion-exclusion");
    for r in 0..=d {
        let b = boundary(&cat, r, d)?;
        let p = colimit(&Diagram::Pushout(b.clone(), b.clone()))?;
        let ok = (0..=d).all(|n| p.object.count(n) == 2 * b.target.count(n) - b.source.count(n))
            && p.legs.iter().all(PresheafMap::is_injective);
        counts.record(ok, || json!({"r": r}));
    }
    report.push(counts);

    if !site.is_monoidal() {
        report.note = Some("tensor and cylinder checks skipped: site has no block sums".into());
        return Ok(report);
    }

    let mut tensor_ok = Check::new("tensors are functorial and unital");
    let mut reps = Check::new("□[m] ⊗ □[n] ≅ □[m+n]");
    let mut assoc = Check::new("tensor of representables is associative");
    let mut product = Check::new("∂□[m+n] is the pushout-product of boundaries");
    for a in &objects {
        let da = dimension(&a.object)?.unwrap_or(0);
        for b in &objects {
            let db = dimension(&b.object)?.unwrap_or(0);
            if da + db > d {
                continue;
            }
            let t = tensor_truncated(&a.object, &b.object, d)?;
            tensor_ok.record(t.object.check_functoriality().is_ok(), || json!({"left": a.name, "right": b.name}));
        }
        let (r, l) = unitors(&cat, &a.object, d)?;
        tensor_ok.record(r.is_bijective() && l.is_bijective(), || json!({"object": a.name}));
    }
    for m in 0..=d {
        for n in 0..=(d - m) {
            let rm = Arc::new(Presheaf::representable(&cat, m, d)?);
            let rn = Arc::new(Presheaf::representable(&cat, n, d)?);
            let t = tensor_truncated(&rm, &rn, d)?;
            reps.record(representable_tensor_iso(&t, m, n)?.is_bijective(), || json!({"m": m, "n": n}));
            let (c, iso) = boundary_pushout_product(&cat, m, n, d)?;
            product.record(c && iso, || json!({"m": m, "n": n}));
            for c in 0..=(d - m - n) {
                assoc.record(associator_check(&cat, m, n, c, d)?, || json!({"a": m, "b": n, "c": c}));
            }
        }
    }
    report.push(tensor_ok);
    report.push(reps);
    report.push(assoc);
    report.push(product);

    let mut cyl = Check::new("ι†ι⁰ = ι†ι¹ = id on cylinders");
    for s in &objects {
        let c = cylinder(&s.object)?;
        let id = PresheafMap::identity(&s.object);
        let ok = c.retraction.compose(&c.iota0)? == id
            && c.retraction.compose(&c.iota1)? == id
            && is_homotopy(&c, &c.retraction, &id, &id)?;
        cyl.record(ok, || json!({"object": s.name}));
    }
    report.push(cyl);
    if site.kind() == SiteKind::Connections {
        let mut homotopy = Check::new("the connection is a homotopy from id to ι¹ι†");
        for n in 1..=d {
            let x = Arc::new(Presheaf::representable(&cat, n, d)?);
            let c = cylinder(&x)?;
            let (h, f0, f1) = connection_homotopy(&c, n)?;
            homotopy.record(is_homotopy(&c, &h, &f0, &f1)?, || json!({"n": n}));
        }
        report.push(homotopy);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_laws_at_two() {
        let r = verify_presheaf_laws(&Site::plain(), 2).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn sigma_laws_at_two() {
        let r = verify_presheaf_laws(&Site::symmetric(), 2).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}
