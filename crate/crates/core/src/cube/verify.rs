//! Exhaustive checks on □(R): category laws, normal forms, the crossed module
//! structure, faces, tensor and enlargement.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::cube::{
    cube_compose_unchecked, cube_pushforward_unchecked, enlarge, face_meet, hom_count_formula, iota0, iota1,
    iota_dagger, tensor_mor, CubeCat, CubeMorphism, NormalForm,
};
use crate::error::{Error, Result};
use crate::finite::HomTables;
use crate::json;
use crate::report::{Check, Report};
use crate::site::{Site, Subset};
use crate::spans::{span_compose_unchecked, span_pushforward_unchecked, span_tables, Span};

fn w(site: &Site, ms: &[(&str, &CubeMorphism)]) -> Value {
    let mut v = json!({});
    for (k, m) in ms {
        v[*k] = json::cube(site, m);
    }
    v
}

pub fn verify_cube_axioms(site: &Site, d: usize) -> Result<Report> {
    let mut report = Report::new(format!("cube-axioms[{}, D={d}]", site.label()));
    let cat = CubeCat::new(site.clone(), d);
    for n in 0..=d {
        cat.check(n)?;
    }
    let t = HomTables::build(d, |m, n| cat.homs(m, n).items().to_vec(), |g, f| cube_compose_unchecked(site, g, f))
        .map_err(|(g, f)| Error::InvalidMorphism(format!("composite {g} ∘ {f} is not enumerated")))?;
    let comp = |g: &CubeMorphism, f: &CubeMorphism| cube_compose_unchecked(site, g, f);

    let mut assoc = Check::new("composition is associative");
    t.check_associativity(&mut assoc, |f, g, h| w(site, &[("f", f), ("g", g), ("h", h)]));
    report.push(assoc);
    let mut units = Check::new("identities are units");
    t.check_units(|n| CubeMorphism::identity(site, n), &mut units, |f| w(site, &[("f", f)]));
    report.push(units);

    let mut disjoint = Check::new("composites satisfy im(f) ∧ ξ = 0");
    for a in 0..=d {
        for b in 0..=d {
            for c in 0..=d {
                for g in t.hom(b, c) {
                    for f in t.hom(a, b) {
                        let gf = comp(g, f);
                        disjoint.record(gf.span.image().meet(gf.xi).is_empty(), || w(site, &[("f", f), ("g", g)]));
                    }
                }
            }
        }
    }
    report.push(disjoint);

    let mut counts = Check::new("hom-set sizes match the closed form");
    let mut nf = Check::new("normal forms are unique and reassemble bit-exactly");
    for m in 0..=d {
        for n in 0..=d {
            let homs = t.hom(m, n);
            counts.record(homs.len() as u128 == hom_count_formula(site, m, n)?, || json!({"m": m, "n": n, "count": homs.len()}));
            for f in homs {
                let form = f.normal_form(site);
                let ok = form.validate().is_ok() && form.assemble(site) == *f && form.reassemble(site) == *f;
                nf.record(ok, || w(site, &[("f", f)]));
            }
            let mut seen = HashSet::new();
            let mut tuples = 0usize;
            for gamma in Subset::all(m) {
                for delta in Subset::all(n) {
                    for sigma in site.degeneracies(gamma.len(), delta.len())? {
                        for xi in delta.neg().sub_subsets() {
                            let form = NormalForm { gamma, sigma: sigma.clone(), delta, xi };
                            let back = form.assemble(site);
                            tuples += 1;
                            let ok = back.normal_form(site) == form && seen.insert(back.clone());
                            nf.record(ok, || json!({"normal_form": json::normal_form(&form)}));
                        }
                    }
                }
            }
            nf.record(tuples == homs.len(), || json!({"m": m, "n": n, "tuples": tuples, "homs": homs.len()}));
        }
    }
    report.push(counts);
    report.push(nf);

    let mut functorial = Check::new("pushforward is functorial and sends ∅ to ξ");
    for a in 0..=d {
        for b in 0..=d {
            for (fi, f) in t.hom(a, b).iter().enumerate() {
                functorial.record(cube_pushforward_unchecked(site, f, Subset::empty(a)) == f.xi, || w(site, &[("f", f)]));
                for c in 0..=d {
                    for (gi, g) in t.hom(b, c).iter().enumerate() {
                        let gf = &t.hom(a, c)[t.compose_idx(a, b, c, gi, fi)];
                        for eta in Subset::all(a) {
                            let lhs = cube_pushforward_unchecked(site, gf, eta);
                            let rhs = cube_pushforward_unchecked(site, g, cube_pushforward_unchecked(site, f, eta));
                            functorial.record(lhs == rhs, || w(site, &[("f", f), ("g", g)]));
                        }
                    }
                }
            }
        }
    }
    report.push(functorial);

    report.extend(verify_crossed_module(site, d)?);

    let mut r0 = Check::new("face calculus: δ^ξβ^ζ = (δβ)^{ξ∨δ_∗ζ}, δ†δ^ξ = id, γ†f^ξ = (γ†f)^{γ^∗ξ}, 0 terminal");
    for n in 0..=d {
        r0.record(t.hom(n, 0).len() == 1, || json!({"n": n}));
        for delta in Subset::all(n) {
            for xi in delta.neg().sub_subsets() {
                let face = CubeMorphism::face(site, delta, xi)?;
                r0.record(comp(&CubeMorphism::dagger(site, delta), &face).is_identity(), || w(site, &[("face", &face)]));
                for beta in Subset::all(delta.len()) {
                    for zeta in beta.neg().sub_subsets() {
                        let inner = CubeMorphism::face(site, beta, zeta)?;
                        let expect = CubeMorphism::face(site, delta.expand(beta), xi.join(delta.expand(zeta)))?;
                        r0.record(comp(&face, &inner) == expect, || w(site, &[("outer", &face), ("inner", &inner)]));
                    }
                }
            }
            for m in 0..=d {
                for f in t.hom(m, n).iter().filter(|f| f.span.gamma.is_full()) {
                    let expect_span = span_compose_unchecked(site, &Span::dagger(site, delta), &f.span);
                    let expect = CubeMorphism { span: expect_span, xi: delta.restrict(f.xi) };
                    r0.record(comp(&CubeMorphism::dagger(site, delta), f) == expect, || w(site, &[("f", f)]));
                }
            }
        }
    }
    report.push(r0);

    let mut ez = Check::new("EZ: every morphism is a split epimorphism followed by a monomorphism");
    for a in 0..=d {
        for b in 0..=d {
            for f in t.hom(a, b) {
                let form = f.normal_form(site);
                let face = CubeMorphism::face(site, form.delta, form.xi)?;
                let collapse = CubeMorphism::from_span(Span { gamma: form.gamma, f: form.sigma.clone() });
                let s = form.delta.len();
                let split = t.hom(s, a).iter().any(|sec| comp(&collapse, sec).is_identity());
                let mono = (0..=d).all(|z| {
                    let images: HashSet<_> = t.hom(z, s).iter().map(|u| comp(&face, u)).collect();
                    images.len() == t.hom(z, s).len()
                });
                ez.record(split && mono && comp(&face, &collapse) == *f, || w(site, &[("f", f)]));
            }
        }
    }
    report.push(ez);

    let mut meets = Check::new("face intersections are pullbacks against representables");
    for n in 0..=d {
        let faces: Vec<CubeMorphism> = Subset::all(n)
            .flat_map(|dl| dl.neg().sub_subsets().map(move |x| (dl, x)).collect::<Vec<_>>())
            .map(|(dl, x)| CubeMorphism::face(site, dl, x).unwrap())
            .collect();
        for fa in &faces {
            for fb in &faces {
                let meet = face_meet(site, fa, fb)?;
                for z in 0..=d {
                    let mut cone = 0usize;
                    let mut ok = true;
                    for u in t.hom(z, fa.src()) {
                        for v in t.hom(z, fb.src()) {
                            if comp(fa, u) != comp(fb, v) {
                                continue;
                            }
                            cone += 1;
                            if let Some(mt) = &meet {
                                let lifts = t
                                    .hom(z, mt.composite.src())
                                    .iter()
                                    .filter(|x| comp(&mt.leg_a, x) == *u && comp(&mt.leg_b, x) == *v)
                                    .count();
                                ok &= lifts == 1;
                            }
                        }
                    }
                    if meet.is_none() {
                        ok = cone == 0;
                    }
                    meets.record(ok, || w(site, &[("a", fa), ("b", fb)]));
                }
                if let Some(mt) = &meet {
                    let ok = comp(fa, &mt.leg_a) == mt.composite && comp(fb, &mt.leg_b) == mt.composite;
                    meets.record(ok, || w(site, &[("a", fa), ("b", fb)]));
                }
            }
        }
    }
    report.push(meets);

    if site.is_monoidal() {
        report.extend(verify_monoidal(site, &t)?);
    } else {
        report.note = Some("tensor and enlargement checks skipped: site has no block sums".into());
    }
    Ok(report)
}

/// (CM1), (CM2) and the Λ calculus for `M = R⁺₀/(·)` on V(R) with `μ = Λ(¬·)`.
pub fn verify_crossed_module(site: &Site, d: usize) -> Result<Report> {
    let t = span_tables(site, d)?;
    let mut report = Report::new(format!("crossed-module[{}, D={d}]", site.label()));
    let sc = |g: &Span, f: &Span| span_compose_unchecked(site, g, f);
    let mu = |a: Subset| Span::lambda(site, a.neg());
    let push = |f: &Span, a: Subset| span_pushforward_unchecked(site, f, a);
    let ws = |f: &Span, a: Subset, b: Option<Subset>| {
        json!({"f": json::span(f), "a": json::subset(a), "b": b.map(json::subset)})
    };

    let mut cm1 = Check::new("CM1 μ(f_∗a) f μ(a) = μ(f_∗a)² f");
    let mut cm2 = Check::new("CM2 ab = (μ(a)_∗b)a");
    let mut monoid = Check::new("f_∗ and μ are monoid homomorphisms");
    let mut lam = Check::new("Λ(ξ₁)Λ(ξ₂) = Λ(ξ₁∧ξ₂)");
    let mut disjoint = Check::new("im(f) ≤ ξ iff Λ(ξ)f = f");
    for j in 0..=d {
        for a in Subset::all(j) {
            for b in Subset::all(j) {
                cm2.record(a.join(b) == push(&mu(a), b).join(a), || json!({"a": json::subset(a), "b": json::subset(b)}));
                monoid.record(sc(&mu(a), &mu(b)) == mu(a.join(b)), || json!({"a": json::subset(a), "b": json::subset(b)}));
                lam.record(
                    sc(&Span::lambda(site, a), &Span::lambda(site, b)) == Span::lambda(site, a.meet(b)),
                    || json!({"a": json::subset(a), "b": json::subset(b)}),
                );
            }
        }
        monoid.record(mu(Subset::empty(j)).is_identity(), || json!({"j": j}));
        for k in 0..=d {
            for f in t.hom(j, k) {
                monoid.record(push(f, Subset::empty(j)).is_empty(), || ws(f, Subset::empty(j), None));
                for a in Subset::all(j) {
                    let fa = push(f, a);
                    let lhs = sc(&sc(&mu(fa), f), &mu(a));
                    let rhs = sc(&sc(&mu(fa), &mu(fa)), f);
                    cm1.record(lhs == rhs, || ws(f, a, None));
                    for b in Subset::all(j) {
                        monoid.record(push(f, a.join(b)) == fa.join(push(f, b)), || ws(f, a, Some(b)));
                    }
                }
                for xi in Subset::all(k) {
                    let fixed = sc(&Span::lambda(site, xi), f) == *f;
                    disjoint.record(f.image().leq(xi) == fixed, || json!({"f": json::span(f), "xi": json::subset(xi)}));
                }
            }
        }
    }
    for c in [cm1, cm2, monoid, lam, disjoint] {
        report.push(c);
    }
    Ok(report)
}

fn verify_monoidal(site: &Site, t: &HomTables<CubeMorphism>) -> Result<Report> {
    let d = t.d;
    let mut report = Report::new("monoidal");
    let comp = |g: &CubeMorphism, f: &CubeMorphism| cube_compose_unchecked(site, g, f);
    let ten = |a: &CubeMorphism, b: &CubeMorphism| tensor_mor(site, a, b);

    let mut interchange = Check::new("tensor interchange (a∘a′)⊗(b∘b′) = (a⊗b)∘(a′⊗b′)");
    let mut unit = Check::new("tensor is unital and associative");
    for p in 0..=d {
        for q in 0..=d {
            for r in 0..=d {
                if q + r > d || p + r > d {
                    continue;
                }
                for a1 in t.hom(p, q) {
                    let e = CubeMorphism::identity(site, 0);
                    unit.record(ten(&e, a1)? == *a1 && ten(a1, &e)? == *a1, || w(site, &[("a", a1)]));
                    for a2 in t.hom(q, r) {
                        for b1 in t.hom(0, 1).iter().chain(t.hom(1, 1).iter()) {
                            let bsrc = b1.src();
                            for b2 in t.hom(1, 1) {
                                if p + bsrc > d || q + 1 > d || r + 1 > d {
                                    continue;
                                }
                                let lhs = ten(&comp(a2, a1), &comp(b2, b1))?;
                                let rhs = comp(&ten(a2, b2)?, &ten(a1, b1)?);
                                interchange.record(lhs == rhs, || w(site, &[("a", a1), ("a'", a2), ("b", b1), ("b'", b2)]));
                            }
                        }
                    }
                }
            }
        }
    }
    for p in 0..=d {
        for q in 0..=d - p {
            for a in t.hom(p, p) {
                for b in t.hom(q, q) {
                    for c in t.hom(0, 1) {
                        if p + q + 1 > d {
                            continue;
                        }
                        let lhs = ten(&ten(a, b)?, c)?;
                        let rhs = ten(a, &ten(b, c)?)?;
                        unit.record(lhs == rhs, || w(site, &[("a", a), ("b", b), ("c", c)]));
                    }
                }
            }
        }
    }
    report.push(interchange);
    report.push(unit);

    let mut split = Check::new("ι†ι⁰ = ι†ι¹ = id");
    let mut natural = Check::new("ι⁰, ι¹, ι† are natural and c is a functor");
    let mut explicit = Check::new("c(δ^ξ) = (ι_∗δ∨¬ι)^{ι_∗ξ} and c(γ†) = c(γ)†");
    for n in 0..d {
        let dag = iota_dagger(site, n);
        split.record(comp(&dag, &iota0(site, n)).is_identity(), || json!({"n": n}));
        split.record(comp(&dag, &iota1(site, n)).is_identity(), || json!({"n": n}));
        for delta in Subset::all(n) {
            for xi in delta.neg().sub_subsets() {
                let c = enlarge(site, &CubeMorphism::face(site, delta, xi)?)?;
                let expect = CubeMorphism::face(site, delta.extend(true), xi.extend(false))?;
                explicit.record(c == expect, || json!({"delta": json::subset(delta), "xi": json::subset(xi)}));
            }
            let c = enlarge(site, &CubeMorphism::dagger(site, delta))?;
            explicit.record(c == CubeMorphism::dagger(site, delta.extend(true)), || json!({"gamma": json::subset(delta)}));
        }
    }
    for a in 0..d {
        for b in 0..d {
            for m in t.hom(a, b) {
                let cm = enlarge(site, m)?;
                let ok = comp(&cm, &iota0(site, a)) == comp(&iota0(site, b), m)
                    && comp(&cm, &iota1(site, a)) == comp(&iota1(site, b), m)
                    && comp(m, &iota_dagger(site, a)) == comp(&iota_dagger(site, b), &cm);
                natural.record(ok, || w(site, &[("m", m)]));
                for c in 0..d {
                    for g in t.hom(b, c) {
                        let ok = enlarge(site, &comp(g, m))? == comp(&enlarge(site, g)?, &cm);
                        natural.record(ok, || w(site, &[("f", m), ("g", g)]));
                    }
                }
            }
        }
    }
    report.push(split);
    report.push(natural);
    report.push(explicit);
    Ok(report)
}
